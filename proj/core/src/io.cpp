#include "galrep/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "galrep/errors.hpp"
#include "galrep/version.hpp"

namespace galrep {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json prime_list_json(const std::vector<Prime>& ps) {
  ordered_json a = ordered_json::array();
  for (const auto& p : ps) a.push_back(to_string(p.gen));
  return a;
}

std::vector<Prime> parse_prime_array(BaseField field, const ordered_json& a, const char* what) {
  if (!a.is_array()) fail(ErrorKind::ParseError, std::string(what) + " must be an array");
  std::vector<Prime> out;
  for (const auto& e : a) out.push_back(parse_prime(field, e.get<std::string>()));
  return out;
}

ordered_json disc_json(const SelmerBasis& basis, const f2::BitVec& exps) {
  ordered_json j;
  j["rep"] = to_string(basis.expand(exps));
  j["exps"] = exps.str();
  return j;
}

ordered_json t1_json(const SelmerBasis& basis, const T1Set& t1) {
  ordered_json j;
  j["primes"] = prime_list_json(t1.primes);
  ordered_json duals = ordered_json::array();
  for (const auto& d : t1.dual_elems) duals.push_back(disc_json(basis, d));
  j["dual_basis"] = duals;
  return j;
}

ordered_json t0_json(const T0Set& t0) {
  ordered_json j;
  j["primes"] = prime_list_json(t0.primes);
  if (!t0.signatures.empty()) {
    ordered_json sigs = ordered_json::array();
    for (std::size_t i = 0; i < t0.signatures.size(); ++i) {
      ordered_json s;
      s["cubic"] = i < t0.labels.size() ? t0.labels[i] : "";
      s["lambda"] = t0.signatures[i].str();
      sigs.push_back(s);
    }
    j["signatures"] = sigs;
  }
  return j;
}

ordered_json t2_json(const T2Set& t2) {
  ordered_json j;
  if (t2.is_special()) {
    ordered_json slots = ordered_json::array();
    for (const auto& s : *t2.indexing) {
      ordered_json e;
      e["i_set"] = s.iset;
      e["prime"] = to_string(s.prime.gen);
      slots.push_back(e);
    }
    j["slots"] = slots;
  } else {
    j["primes"] = prime_list_json(t2.primes);
  }
  return j;
}

}  // namespace

std::string to_json(const SetsDocument& doc) {
  ordered_json j;
  j["format"] = "galrep-sets/1";
  j["field"] = field_tag(doc.field);
  j["bad_set"] = prime_list_json(doc.bad_set);
  ordered_json basis = ordered_json::array();
  for (const auto& rep : doc.basis.reps) basis.push_back(to_string(rep));
  j["basis"] = basis;
  if (doc.t1) j["t1"] = t1_json(doc.basis, *doc.t1);
  if (doc.t0) j["t0"] = t0_json(*doc.t0);
  if (doc.t2) j["t2"] = t2_json(*doc.t2);
  if (doc.t2_special) j["t2_special"] = t2_json(*doc.t2_special);
  return j.dump(2) + "\n";
}

SetsDocument parse_sets_document(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const std::exception& e) {
    fail(ErrorKind::ParseError, std::string("sets document: ") + e.what());
  }
  SetsDocument doc;
  auto tag = field_from_tag(j.value("field", ""));
  if (!tag) fail(ErrorKind::ParseError, "sets document: unknown field tag");
  doc.field = *tag;
  doc.bad_set = parse_prime_array(doc.field, j.at("bad_set"), "bad_set");

  SelmerBasis full = selmer_group(doc.field, doc.bad_set);
  if (j.contains("basis")) {
    doc.basis.field = doc.field;
    doc.basis.bad_set = full.bad_set;
    doc.basis.gens = full.gens;
    for (const auto& e : j.at("basis")) {
      GInt rep = parse_element(doc.field, e.get<std::string>());
      f2::BitVec coords = resolve_in_basis(full, rep);
      doc.basis.elems.push_back(full.gen_coords(coords));
      doc.basis.reps.push_back(full.expand(coords));
    }
  } else {
    doc.basis = unramified_subgroup(full);
  }

  if (j.contains("t1")) {
    T1Set t1;
    t1.primes = parse_prime_array(doc.field, j.at("t1").at("primes"), "t1.primes");
    if (j.at("t1").contains("dual_basis")) {
      for (const auto& e : j.at("t1").at("dual_basis"))
        t1.dual_elems.push_back(f2::BitVec::from_string(e.at("exps").get<std::string>()));
    }
    doc.t1 = std::move(t1);
  }
  if (j.contains("t0")) {
    T0Set t0;
    t0.primes = parse_prime_array(doc.field, j.at("t0").at("primes"), "t0.primes");
    if (j.at("t0").contains("signatures")) {
      for (const auto& e : j.at("t0").at("signatures")) {
        t0.labels.push_back(e.value("cubic", ""));
        t0.signatures.push_back(f2::BitVec::from_string(e.at("lambda").get<std::string>()));
      }
    }
    doc.t0 = std::move(t0);
  }
  auto parse_t2 = [&](const ordered_json& e) {
    T2Set t2;
    if (e.contains("slots")) {
      t2.indexing.emplace();
      for (const auto& s : e.at("slots")) {
        T2Slot slot;
        slot.iset = s.at("i_set").get<std::vector<int>>();
        slot.prime = parse_prime(doc.field, s.at("prime").get<std::string>());
        t2.indexing->push_back(slot);
      }
      for (const auto& s : *t2.indexing) t2.primes.push_back(s.prime);
    } else {
      t2.primes = parse_prime_array(doc.field, e.at("primes"), "t2.primes");
    }
    return t2;
  };
  if (j.contains("t2")) doc.t2 = parse_t2(j.at("t2"));
  if (j.contains("t2_special")) doc.t2_special = parse_t2(j.at("t2_special"));
  return doc;
}

std::string report_to_json(const IsogenyReport& rep, const SetsDocument& doc,
                           const ReportProvenance& prov) {
  ordered_json j;
  j["format"] = "galrep-report/1";
  j["tool"] = std::string("galrep ") + kVersion;
  j["provenance"]["sets_hash"] = prov.sets_hash;
  j["provenance"]["oracle_hash"] = prov.oracle_hash;
  j["field"] = field_tag(rep.field);
  j["bad_set"] = prime_list_json(doc.bad_set);

  ordered_json res;
  res["irreducible"] = rep.residual.irreducible;
  res["trace_parities"] = rep.residual.parities.str();
  if (rep.residual.irreducible) {
    res["cubic"] = rep.residual.cubic ? rep.residual.cubic->str() : rep.residual.cubic_label;
    if (rep.residual.group)
      res["group"] = *rep.residual.group == GaloisType::C3 ? "C3" : "S3";
  }
  j["residual"] = res;
  j["width_class"] = width_name(rep.width);
  if (rep.small_pair) {
    j["small_pair"] = ordered_json::array(
        {disc_json(doc.basis, rep.small_pair->first.exps), disc_json(doc.basis, rep.small_pair->second.exps)});
  }
  if (rep.width == WidthClass::AtLeastTwo) {
    j["trivial_level"] = rep.trivial_level;
    j["trivial_level_is_lower_bound"] = rep.trivial_at_least;
  }
  if (rep.structure) {
    const StructureResult& st = *rep.structure;
    ordered_json s;
    s["k"] = st.cv.k;
    s["modulus"] = "2^" + std::to_string(st.cv.k + 1);
    ordered_json basis = ordered_json::array();
    for (const auto& rep_el : st.basis.reps) basis.push_back(to_string(rep_el));
    s["basis"] = basis;
    s["rotated"] = st.rotated;
    s["vectors"]["x"] = st.cv.x.str();
    s["vectors"]["y"] = st.cv.y.str();
    s["vectors"]["z"] = st.cv.z.str();
    s["vectors"]["u"] = st.cv.u.str();
    s["vectors"]["v"] = st.cv.v.str();
    ordered_json bc = ordered_json::array();
    for (const auto& d : st.bc_multiset()) bc.push_back(disc_json(st.basis, d.exps));
    s["bc_multiset"] = bc;
    auto [a, dd] = st.ad_pair();
    s["ad_pair"] = ordered_json::array({disc_json(st.basis, a.exps), disc_json(st.basis, dd.exps)});
    s["det_disc"] = disc_json(st.basis, st.det_disc().exps);
    s["deep_subcase"] = st.deep_subcase;
    j["structure"] = s;
  }
  if (rep.tree) {
    ordered_json t;
    ordered_json verts = ordered_json::array();
    verts.push_back(ordered_json{{"id", 0}, {"disc", "1"}});
    int id = 1;
    for (const auto& leaf : rep.tree->leaves)
      verts.push_back(ordered_json{{"id", id++}, {"disc", to_string(leaf.rep)}});
    ordered_json edges = ordered_json::array();
    for (int i = 1; i < id; ++i) edges.push_back(ordered_json::array({0, i}));
    t["vertices"] = verts;
    t["edges"] = edges;
    j["tree"] = t;
  }
  if (rep.trivial_ss) j["trivial_semisimplification"] = *rep.trivial_ss;
  if (!rep.notes.empty()) j["notes"] = rep.notes;
  j["query_count"] = rep.queries.size();
  ordered_json queries = ordered_json::array();
  for (const auto& q : rep.queries) {
    ordered_json row;
    row["prime"] = to_string(q.p.gen);
    row["trace"] = q.ans.trace.value;
    row["det"] = q.ans.det.value;
    row["bits"] = q.ans.trace.prec.exact() ? -1 : q.ans.trace.prec.bits;
    queries.push_back(row);
  }
  j["queries"] = queries;
  return j.dump(2) + "\n";
}

std::string fnv1a_hex(const std::string& bytes) {
  unsigned long long h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  snprintf(buf, sizeof buf, "%016llx", h);
  return buf;
}

std::string canonical_query_log(const std::vector<QueryRow>& rows) {
  std::vector<std::string> lines;
  for (const auto& q : rows) {
    std::ostringstream os;
    os << to_string(q.p.gen) << '\t' << q.ans.trace.value << '\t' << q.ans.det.value << '\t'
       << (q.ans.trace.prec.exact() ? -1 : q.ans.trace.prec.bits);
    lines.push_back(os.str());
  }
  std::sort(lines.begin(), lines.end());
  std::string out;
  for (const auto& l : lines) out += l + "\n";
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::ParseError, "cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::ParseError, "cannot write " + path);
  out << content;
}

}  // namespace galrep
