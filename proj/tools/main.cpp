#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "galrep/analysis.hpp"
#include "galrep/errors.hpp"
#include "galrep/io.hpp"
#include "galrep/version.hpp"

namespace {

using namespace galrep;

int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::SearchExhausted: return 2;
    case ErrorKind::PrecisionInsufficient:
    case ErrorKind::UnknownPrime: return 3;
    case ErrorKind::InconsistentData: return 4;
    default: return 1;
  }
}

struct OracleSpec {
  std::string table_path;
  std::string curve;      // "a1 a2 a3 a4 a6"
  std::string synthetic;  // "D1;D2"
  int truncate_bits = 0;

  int sources() const {
    return (table_path.empty() ? 0 : 1) + (curve.empty() ? 0 : 1) + (synthetic.empty() ? 0 : 1);
  }
};

std::array<long long, 5> parse_curve(const std::string& s) {
  std::istringstream is(s);
  std::array<long long, 5> a{};
  for (auto& c : a)
    if (!(is >> c)) fail(ErrorKind::ParseError, "--curve needs 5 integers \"a1 a2 a3 a4 a6\"");
  std::string extra;
  if (is >> extra) fail(ErrorKind::ParseError, "--curve: trailing data");
  return a;
}

std::shared_ptr<const Oracle> build_oracle(const OracleSpec& spec, const SetsDocument& doc) {
  if (spec.sources() != 1)
    fail(ErrorKind::ParseError, "exactly one of --oracle-table, --curve, --synthetic is required");
  std::shared_ptr<const Oracle> o;
  if (!spec.table_path.empty()) {
    std::ifstream in(spec.table_path);
    if (!in) fail(ErrorKind::ParseError, "cannot open " + spec.table_path);
    o = make_table_oracle(doc.field, doc.bad_set, in);
  } else if (!spec.curve.empty()) {
    if (doc.field != BaseField::Rationals)
      fail(ErrorKind::ParseError, "--curve oracles are only available over Q");
    o = make_ec_oracle_q(parse_curve(spec.curve), doc.bad_set);
  } else {
    auto semi = spec.synthetic.find(';');
    if (semi == std::string::npos)
      fail(ErrorKind::ParseError, "--synthetic needs \"D1;D2\"");
    GInt d1 = parse_element(doc.field, spec.synthetic.substr(0, semi));
    GInt d2 = parse_element(doc.field, spec.synthetic.substr(semi + 1));
    Discriminant D1 = make_discriminant(doc.basis, resolve_in_basis(doc.basis, d1));
    Discriminant D2 = make_discriminant(doc.basis, resolve_in_basis(doc.basis, d2));
    o = make_synthetic_oracle(doc.basis, D1, D2);
  }
  if (spec.truncate_bits > 0) o = truncate_oracle(o, spec.truncate_bits);
  return o;
}

void emit(const std::string& out_path, const std::string& content, const std::string& summary) {
  if (out_path.empty()) {
    std::cout << content;
    if (!summary.empty()) std::cerr << summary;
  } else {
    write_file(out_path, content);
    if (!summary.empty()) std::cout << summary;
  }
}

int cmd_sets(const std::string& field_tag_s, const std::string& bad_set_csv,
             const std::string& cubics_path, long long norm_cap, bool degree1, bool verify,
             const std::string& sets_path, const std::string& out_path) {
  if (verify) {
    SetsDocument doc = parse_sets_document(read_file(sets_path));
    bool all_ok = true;
    auto show = [&](const char* name, const VerifyResult& r) {
      std::cout << name << ": " << (r.ok ? "ok" : "FAIL") << "\n";
      for (const auto& d : r.diagnostics) std::cout << "  - " << d << "\n";
      all_ok = all_ok && r.ok;
    };
    if (doc.t1) show("T1", verify_set(doc.basis, *doc.t1));
    if (doc.t0) {
      if (!cubics_path.empty()) {
        std::ifstream in(cubics_path);
        if (!in) fail(ErrorKind::ParseError, "cannot open " + cubics_path);
        CubicFamily fam = load_family(doc.field, doc.bad_set, in);
        show("T0", verify_set(fam, *doc.t0));
      } else {
        std::cout << "T0: skipped (no --cubics given)\n";
      }
    }
    if (doc.t2) show("T2", verify_set(doc.basis, *doc.t2));
    if (doc.t2_special) show("T2-special", verify_set(doc.basis, *doc.t2_special));
    return all_ok ? 0 : 1;
  }

  auto tag = field_from_tag(field_tag_s);
  if (!tag) fail(ErrorKind::ParseError, "--field must be Q or Qi");
  SetsDocument doc;
  doc.field = *tag;
  doc.bad_set = parse_prime_list(doc.field, bad_set_csv);
  SelmerBasis full = selmer_group(doc.field, doc.bad_set);
  doc.basis = unramified_subgroup(full);
  SearchOptions opt;
  opt.norm_cap = norm_cap;
  opt.degree1_only = degree1 || doc.field == BaseField::GaussianRationals;
  doc.t1 = find_T1(doc.basis, opt);
  if (!cubics_path.empty()) {
    std::ifstream in(cubics_path);
    if (!in) fail(ErrorKind::ParseError, "cannot open " + cubics_path);
    CubicFamily fam = load_family(doc.field, doc.bad_set, in);
    doc.t0 = find_T0(fam, opt);
  }
  doc.t2 = find_T2(doc.basis, opt);
  doc.t2_special = find_T2_special(doc.basis, opt);

  std::ostringstream sum;
  sum << "field " << field_tag(doc.field) << ", |S| = " << doc.bad_set.size()
      << ", r = " << doc.basis.rank() << "\n";
  auto norms = [](const std::vector<Prime>& ps) {
    std::ostringstream os;
    for (std::size_t i = 0; i < ps.size(); ++i) os << (i ? "," : "") << ps[i].norm;
    return os.str();
  };
  sum << "T1: " << doc.t1->primes.size() << " primes (norms " << norms(doc.t1->primes) << ")\n";
  if (doc.t0)
    sum << "T0: " << doc.t0->primes.size() << " primes (norms " << norms(doc.t0->primes) << ")\n";
  sum << "T2: " << doc.t2->primes.size() << " primes (norms " << norms(doc.t2->primes) << ")\n";
  sum << "T2-special: " << doc.t2_special->primes.size() << " primes (norms "
      << norms(doc.t2_special->primes) << ")\n";
  emit(out_path, to_json(doc), sum.str());
  return 0;
}

int cmd_analyze(const std::string& sets_path, const OracleSpec& spec,
                const std::string& cubics_path, int kmax, long long norm_cap, bool degree1,
                const std::string& out_path) {
  std::string sets_bytes = read_file(sets_path);
  SetsDocument doc = parse_sets_document(sets_bytes);
  std::shared_ptr<const Oracle> oracle = build_oracle(spec, doc);

  ReportInputs in;
  if (!doc.t0) fail(ErrorKind::ParseError, "sets document lacks a T0 block");
  if (!doc.t2_special) fail(ErrorKind::ParseError, "sets document lacks a T2-special block");
  in.t0 = *doc.t0;
  in.basis = doc.basis;
  in.t2special = *doc.t2_special;
  in.k_max = kmax;
  in.opt.norm_cap = norm_cap;
  in.opt.degree1_only = degree1 || doc.field == BaseField::GaussianRationals;
  CubicFamily fam;
  if (!cubics_path.empty()) {
    std::ifstream fin(cubics_path);
    if (!fin) fail(ErrorKind::ParseError, "cannot open " + cubics_path);
    fam = load_family(doc.field, doc.bad_set, fin);
    in.family = &fam;
  }

  IsogenyReport rep = isogeny_report(*oracle, in);
  ReportProvenance prov;
  prov.sets_hash = fnv1a_hex(sets_bytes);
  prov.oracle_hash = fnv1a_hex(canonical_query_log(rep.queries));

  std::ostringstream sum;
  sum << "residual: " << (rep.residual.irreducible ? "irreducible" : "reducible");
  if (rep.residual.irreducible) {
    sum << " (" << (rep.residual.cubic ? rep.residual.cubic->str() : rep.residual.cubic_label);
    if (rep.residual.group) sum << ", " << (*rep.residual.group == GaloisType::C3 ? "C3" : "S3");
    sum << ")";
  }
  sum << "\nwidth: " << width_name(rep.width) << "\n";
  if (rep.small_pair)
    sum << "discriminant pair: {" << to_string(rep.small_pair->first.rep) << ", "
        << to_string(rep.small_pair->second.rep) << "}\n";
  if (rep.width == WidthClass::AtLeastTwo)
    sum << "trivial mod 2^" << rep.trivial_level << (rep.trivial_at_least ? " (at least)" : "")
        << "\n";
  if (rep.structure) {
    sum << "leaves {";
    auto m = rep.structure->bc_multiset();
    for (std::size_t i = 0; i < m.size(); ++i) sum << (i ? ", " : "") << to_string(m[i].rep);
    sum << "}\n";
  }
  emit(out_path, report_to_json(rep, doc, prov), sum.str());
  return 0;
}

int cmd_oracle_dump(const std::string& field_tag_s, const std::string& bad_set_csv,
                    const OracleSpec& spec, long long max_norm, const std::string& out_path) {
  auto tag = field_from_tag(field_tag_s);
  if (!tag) fail(ErrorKind::ParseError, "--field must be Q or Qi");
  SetsDocument doc;
  doc.field = *tag;
  doc.bad_set = parse_prime_list(doc.field, bad_set_csv);
  doc.basis = unramified_subgroup(selmer_group(doc.field, doc.bad_set));
  std::shared_ptr<const Oracle> oracle = build_oracle(spec, doc);
  std::ostringstream os;
  dump_oracle(*oracle, max_norm, os);
  emit(out_path, os.str(), "");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Analyzer for 2-adic Galois representations presented through Frobenius data"};
  app.set_version_flag("--version", std::string("galrep ") + galrep::kVersion);
  app.require_subcommand(1);

  std::string field, bad_set, cubics, sets, out;
  long long norm_cap = 1'000'000, max_norm = 100;
  bool degree1 = false, verify = false;
  int kmax = 20;
  OracleSpec spec;

  auto* s_sets = app.add_subcommand("sets", "Compute or verify the test-prime sets for (K, S)");
  s_sets->add_option("--field", field, "Base field: Q or Qi");
  s_sets->add_option("--bad-set", bad_set, "Comma-separated bad primes, e.g. 2,37 or 1+i,1+2*i");
  s_sets->add_option("--cubics", cubics, "Cubic family file (enables T0)");
  s_sets->add_option("--norm-cap", norm_cap, "Prime-search norm cap");
  s_sets->add_flag("--degree1", degree1, "Restrict searches to degree-1 primes");
  s_sets->add_flag("--verify", verify, "Verify the sets in --sets instead of computing");
  s_sets->add_option("--sets", sets, "Sets document to verify");
  s_sets->add_option("--out", out, "Output path (stdout otherwise)");

  auto* s_an = app.add_subcommand("analyze", "Run the full analysis against an oracle");
  s_an->add_option("--sets", sets, "Test-set document")->required();
  s_an->add_option("--oracle-table", spec.table_path, "Answer table (TSV)");
  s_an->add_option("--curve", spec.curve, "Elliptic-curve oracle: \"a1 a2 a3 a4 a6\"");
  s_an->add_option("--synthetic", spec.synthetic, "Split oracle: \"D1;D2\"");
  s_an->add_option("--truncate-bits", spec.truncate_bits, "Reduce oracle answers to n bits");
  s_an->add_option("--cubics", cubics, "Cubic family file (labels the irreducible verdicts)");
  s_an->add_option("--kmax", kmax, "Largest triviality level to probe");
  s_an->add_option("--norm-cap", norm_cap, "Prime-search norm cap");
  s_an->add_flag("--degree1", degree1, "Restrict internal prime searches to degree-1 primes");
  s_an->add_option("--out", out, "Output path (stdout otherwise)");

  auto* s_dump = app.add_subcommand("oracle-dump", "Write a computed oracle as a table file");
  s_dump->add_option("--field", field, "Base field: Q or Qi")->required();
  s_dump->add_option("--bad-set", bad_set, "Comma-separated bad primes");
  s_dump->add_option("--curve", spec.curve, "Elliptic-curve oracle");
  s_dump->add_option("--synthetic", spec.synthetic, "Split oracle");
  s_dump->add_option("--max-norm", max_norm, "Largest prime norm to include")->required();
  s_dump->add_option("--out", out, "Output path (stdout otherwise)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (s_sets->parsed())
      return cmd_sets(field, bad_set, cubics, norm_cap, degree1, verify, sets, out);
    if (s_an->parsed()) return cmd_analyze(sets, spec, cubics, kmax, norm_cap, degree1, out);
    if (s_dump->parsed()) return cmd_oracle_dump(field, bad_set, spec, max_norm, out);
  } catch (const galrep::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
