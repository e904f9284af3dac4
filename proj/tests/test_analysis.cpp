#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "galrep/analysis.hpp"
#include "galrep/errors.hpp"
#include "galrep/io.hpp"

using namespace galrep;

namespace {

Prime qp(long long p) { return make_prime(BaseField::Rationals, GInt{p}); }

constexpr std::array<long long, 5> kCurve43808{0, 0, 0, -1369, 0};

std::string fixture(const std::string& name) { return std::string(GALREP_FIXTURES) + "/" + name; }

SelmerBasis q37_basis() {
  return unramified_subgroup(selmer_group(BaseField::Rationals, {qp(2), qp(37)}));
}

CubicFamily q37_family() {
  std::ifstream in(fixture("q_2_37.cubics"));
  REQUIRE(in.good());
  return load_family(BaseField::Rationals, {qp(2), qp(37)}, in);
}

SetsDocument q37_doc() { return parse_sets_document(read_file(fixture("sets_q_2_37.json"))); }

std::unique_ptr<Oracle> table_oracle(const std::string& name, BaseField field,
                                     std::vector<Prime> S) {
  std::ifstream in(fixture(name));
  REQUIRE(in.good());
  return make_table_oracle(field, std::move(S), in);
}

Discriminant disc_of(const SelmerBasis& basis, const GInt& rep) {
  return make_discriminant(basis, resolve_in_basis(basis, rep));
}

}  // namespace

TEST_CASE("residual_image on the pinned oracles") {
  CubicFamily fam = q37_family();
  SetsDocument doc = q37_doc();

  auto curve = make_ec_oracle_q(kCurve43808, {qp(2), qp(37)});
  ResidualVerdict rv = residual_image(*curve, fam, *doc.t0);
  CHECK_FALSE(rv.irreducible);
  CHECK(rv.parities.is_zero());

  // odd traces at 3 and 5 match the C3 cubic
  std::istringstream odd("3\t1\n5\t-3\n");
  auto o = make_table_oracle(BaseField::Rationals, {qp(2), qp(37)}, odd);
  ResidualVerdict iv = residual_image(*o, fam, *doc.t0);
  REQUIRE(iv.irreducible);
  CHECK(*iv.group == GaloisType::C3);
  CHECK(iv.cubic->c0 == GInt{-11});

  // signature (1,0) names g, (0,1) names h
  std::istringstream odd_g("3\t1\n5\t0\n");
  auto og = make_table_oracle(BaseField::Rationals, {qp(2), qp(37)}, odd_g);
  CHECK(*residual_image(*og, fam, *doc.t0).group == GaloisType::S3);
}

TEST_CASE("residual_image via a stored signature table") {
  SetsDocument doc = q37_doc();
  std::istringstream odd("3\t1\n5\t1\n");
  auto o = make_table_oracle(BaseField::Rationals, {qp(2), qp(37)}, odd);
  ResidualVerdict rv = residual_image(*o, *doc.t0);
  REQUIRE(rv.irreducible);
  CHECK(rv.cubic_label == "x^3 - x^2 - 12*x - 11");
}

TEST_CASE("residual_image error paths") {
  SetsDocument doc = q37_doc();
  // no matching signature: parities (1,1) against a table with only (1,0)
  T0Set t0 = *doc.t0;
  t0.signatures = {f2::BitVec::from_bits({1, 0})};
  t0.labels = {"only"};
  std::istringstream odd("3\t1\n5\t1\n");
  auto o = make_table_oracle(BaseField::Rationals, {qp(2), qp(37)}, odd);
  CHECK_THROWS_AS((void)residual_image(*o, t0), Error);

  // parity needs one bit of trace
  std::istringstream rows("3\t1\n5\t1\n");
  auto exact = make_table_oracle(BaseField::Rationals, {qp(2), qp(37)}, rows);
  ResidualVerdict rv = residual_image(*exact, *doc.t0);
  CHECK(rv.irreducible);
}

TEST_CASE("residual_image consumes only parities") {
  CubicFamily fam = q37_family();
  SetsDocument doc = q37_doc();
  auto curve = make_ec_oracle_q(kCurve43808, {qp(2), qp(37)});
  std::shared_ptr<const Oracle> shared = std::move(curve);
  ResidualVerdict full = residual_image(*shared, fam, *doc.t0);
  auto bit = truncate_oracle(shared, 1);
  ResidualVerdict cut = residual_image(*bit, fam, *doc.t0);
  CHECK(full.irreducible == cut.irreducible);
  CHECK(full.parities == cut.parities);
}

TEST_CASE("identify_quadratic") {
  SelmerBasis basis = q37_basis();
  T1Set t1 = find_T1(basis);
  CHECK(identify_quadratic({0, 0, 0}, t1, basis).rep == GInt{1});
  CHECK(identify_quadratic({1, 0, 0}, t1, basis).rep == GInt{74});
  // product of the first two duals, reduced mod squares: 74 * 37 ~ 2
  CHECK(identify_quadratic({1, 1, 0}, t1, basis).rep == GInt{2});
  CHECK_THROWS_AS((void)identify_quadratic({1, 0}, t1, basis), Error);
}

TEST_CASE("det_character_equal") {
  SelmerBasis basis = q37_basis();
  T1Set t1 = find_T1(basis);

  auto table = table_oracle("table_350464h.tsv", BaseField::Rationals, {qp(2), qp(37)});
  // the determinant of these oracles is the norm character
  std::vector<long long> norm_char{3, 5, 7};
  CHECK(det_character_equal(*table, norm_char, t1, Precision::exact_p()) == 1);

  auto triv = make_synthetic_oracle(basis, disc_of(basis, GInt{1}), disc_of(basis, GInt{1}));
  CHECK(det_character_equal(*triv, {1, 1, 1}, t1, Precision::exact_p()) == 1);

  auto o37 = make_synthetic_oracle(basis, disc_of(basis, GInt{37}), disc_of(basis, GInt{1}));
  // det(Frob) = -1 at the T1 prime dual to 37
  CHECK(det_character_equal(*o37, {1, 1, 1}, t1, Precision::exact_p()) == 0);

  // finite-precision comparison
  std::shared_ptr<const Oracle> shared = std::move(table);
  auto cut = truncate_oracle(shared, 2);
  CHECK(det_character_equal(*cut, norm_char, t1, Precision::bits_p(2)) == 1);
  CHECK_THROWS_AS((void)det_character_equal(*cut, norm_char, t1, Precision::exact_p()), Error);
}

TEST_CASE("test_fn pinned values") {
  auto curve = make_ec_oracle_q(kCurve43808, {qp(2), qp(37)});
  // F_17(1) = 1 + 2 + 17 = 20, so t_1 = 0 and t_2 = 1
  CHECK(test_fn(*curve, qp(17), 1) == 0);
  CHECK(test_fn(*curve, qp(17), 2) == 1);

  auto table = table_oracle("bianchi_3140c.tsv", BaseField::GaussianRationals,
                            parse_prime_list(BaseField::GaussianRationals, "1+i,1+2*i,11+6*i"));
  Prime p54 = make_prime(BaseField::GaussianRationals, GInt{5, 4});
  CHECK(test_fn(*table, p54, 1) == 0);  // F = 44
  CHECK(test_fn(*table, p54, 2) == 1);

  // trivial answer: t_k = 0 at every k
  SelmerBasis basis = q37_basis();
  auto triv = make_synthetic_oracle(basis, disc_of(basis, GInt{1}), disc_of(basis, GInt{1}));
  for (int k = 1; k < 10; ++k) CHECK(test_fn(*triv, qp(3), k) == 0);

  // odd F_p(1): valuation too low for k = 1
  std::istringstream odd("3\t1\n");
  auto o = make_table_oracle(BaseField::Rationals, {qp(2), qp(37)}, odd);
  CHECK_THROWS_AS((void)test_fn(*o, qp(3), 1), Error);
}

TEST_CASE("small_or_large: pinned small case") {
  SetsDocument doc = q37_doc();
  auto table = table_oracle("table_350464h.tsv", BaseField::Rationals, {qp(2), qp(37)});
  SmallLargeResult sl = small_or_large(*table, doc.basis, *doc.t2_special);
  REQUIRE_FALSE(sl.large);
  CHECK(sl.v == f2::BitVec::from_bits({0, 1, 0}));
  CHECK(f2::rank(sl.w) == 0);
  CHECK(sl.pair->first.rep == GInt{2});
  CHECK(sl.pair->second.rep == GInt{2});
}

TEST_CASE("small_or_large: pinned large cases") {
  SetsDocument doc = q37_doc();
  auto curve = make_ec_oracle_q(kCurve43808, {qp(2), qp(37)});
  CHECK(small_or_large(*curve, doc.basis, *doc.t2_special).large);

  for (long long d1 : {1, -1, 2, 74}) {
    for (long long d2 : {1, 37, -2}) {
      auto o = make_synthetic_oracle(doc.basis, disc_of(doc.basis, GInt{d1}),
                                     disc_of(doc.basis, GInt{d2}));
      CHECK(small_or_large(*o, doc.basis, *doc.t2_special).large);
    }
  }
}

TEST_CASE("a single corrupted trace flips the small/large verdict") {
  // Same table as the 43808 class but with a_23 = 2 instead of 0. The method
  // then reads t_1(p_13) = 1 and returns a small class with pair {-1, 37},
  // which contradicts the large verdict of the true class: the corrupted
  // value cannot belong to any representation with these other traces.
  std::istringstream rows("3\t0\n5\t2\n7\t0\n17\t-2\n23\t2\n53\t14\n");
  auto o = make_table_oracle(BaseField::Rationals, {qp(2), qp(37)}, rows);
  SetsDocument doc = q37_doc();
  SmallLargeResult sl = small_or_large(*o, doc.basis, *doc.t2_special);
  CHECK_FALSE(sl.large);
  CHECK(sl.pair->first.rep == GInt{37});
  CHECK(sl.pair->second.rep == GInt{-1});
  auto curve = make_ec_oracle_q(kCurve43808, {qp(2), qp(37)});
  CHECK(small_or_large(*curve, doc.basis, *doc.t2_special).large);
}

TEST_CASE("small_or_large flags rank violations") {
  // Four tampered pair slots of the rank-4 fixture produce an alternating
  // matrix of rank 4, which no character pair can generate.
  std::istringstream rows(
      "1+4*i\t2\n4+5*i\t10\n8+7*i\t10\n5+2*i\t6\n"
      "4+i\t4\n5+8*i\t-14\n6+i\t-2\n5+4*i\t0\n2+i\t0\n2+3*i\t-4\n");
  SetsDocument doc = parse_sets_document(read_file(fixture("sets_3140c.json")));
  auto o = make_table_oracle(BaseField::GaussianRationals, doc.bad_set, rows);
  CHECK_THROWS_AS((void)small_or_large(*o, doc.basis, *doc.t2_special), Error);
  try {
    (void)small_or_large(*o, doc.basis, *doc.t2_special);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InconsistentData);
  }
}

TEST_CASE("mod_next_level reproduces the pinned rank-two example") {
  SetsDocument doc = parse_sets_document(read_file(fixture("sets_3140c.json")));
  auto table = table_oracle("bianchi_3140c.tsv", BaseField::GaussianRationals, doc.bad_set);
  StructureResult st = mod_next_level(*table, 1, doc.basis, *doc.t2_special);
  CHECK_FALSE(st.rotated);
  CHECK_FALSE(st.deep_subcase);
  CHECK(st.cv.x == f2::BitVec::from_string("0011"));
  CHECK(st.cv.y == f2::BitVec::from_string("0101"));
  CHECK(st.cv.z == f2::BitVec::from_string("0110"));
  CHECK(st.cv.u == f2::BitVec::from_string("0001"));
  CHECK(st.cv.v == f2::BitVec::from_string("0001"));
  CHECK(st.det_disc().rep == GInt{1});
  auto leaves = st.bc_multiset();
  CHECK(leaves[0].rep == GInt{-6, 11});   // i(11+6i)
  CHECK(leaves[1].rep == GInt{-2, 1});    // i(1+2i)
  CHECK(leaves[2].rep == GInt{-1, 28});   // (1+2i)(11+6i)
}

TEST_CASE("mod_next_level reproduces the pinned deep-subcase example") {
  SetsDocument doc = q37_doc();
  auto curve = make_ec_oracle_q(kCurve43808, {qp(2), qp(37)});
  StructureResult st = mod_next_level(*curve, 1, doc.basis, *doc.t2_special);
  CHECK_FALSE(st.rotated);
  CHECK(st.deep_subcase);
  CHECK(st.det_disc().rep == GInt{-1});
  CHECK(st.cv.x == f2::BitVec::from_bits({0, 1, 0}));
  CHECK(st.cv.y == f2::BitVec::from_bits({1, 0, 0}));
  CHECK(st.cv.z == f2::BitVec::from_bits({0, 1, 0}));
  CHECK(st.cv.u == f2::BitVec::from_bits({1, 0, 1}));
  CHECK(st.cv.v == f2::BitVec::from_bits({0, 0, 1}));
  auto [da, dd] = st.ad_pair();
  CHECK(da.rep == GInt{37});
  CHECK(dd.rep == GInt{-37});
  auto leaves = st.bc_multiset();
  CHECK(leaves[0].rep == GInt{2});
  CHECK(leaves[1].rep == GInt{2});
  CHECK(leaves[2].rep == GInt{-1});
  // mod-4 image order 8: the five vectors span a 3-dimensional space
  f2::BitMatrix span(3);
  for (const auto& v : {st.cv.x, st.cv.y, st.cv.z, st.cv.u, st.cv.v}) span.append_row(v);
  CHECK(f2::rank(span) == 3);
}

TEST_CASE("mod_next_level at level two") {
  SetsDocument doc = parse_sets_document(read_file(fixture("sets_200a.json")));
  auto table = table_oracle("bianchi_200a.tsv", BaseField::GaussianRationals, doc.bad_set);
  StructureResult st = mod_next_level(*table, 2, doc.basis, *doc.t2_special);
  CHECK(st.cv.x == f2::BitVec::from_string("1011"));
  CHECK(st.cv.y == f2::BitVec::from_string("1101"));
  CHECK(st.cv.z == f2::BitVec::from_string("1110"));
  CHECK(st.cv.u == f2::BitVec::from_string("1001"));
  CHECK(st.cv.v == f2::BitVec::from_string("0001"));
  auto leaves = st.bc_multiset();
  // i(2+i)(1+2i) = -5; i(1+i)(1+2i) = -3-i; i(1+i)(2+i) = -3+i
  CHECK(leaves[0].rep == GInt{-5});
  CHECK(leaves[1].rep == GInt{-3, -1});
  CHECK(leaves[2].rep == GInt{-3, 1});
}

TEST_CASE("mod_next_level rejects wrong levels") {
  SetsDocument doc = parse_sets_document(read_file(fixture("sets_200a.json")));
  auto table = table_oracle("bianchi_200a.tsv", BaseField::GaussianRationals, doc.bad_set);
  // the form is trivial mod 4 but not mod 8: level 3 must be rejected
  CHECK_THROWS_AS((void)mod_next_level(*table, 3, doc.basis, *doc.t2_special), Error);
}

TEST_CASE("max_trivial_level on the pinned oracles") {
  SetsDocument doc200 = parse_sets_document(read_file(fixture("sets_200a.json")));
  auto t200 = table_oracle("bianchi_200a.tsv", BaseField::GaussianRationals, doc200.bad_set);
  TrivialLevel tl = max_trivial_level(*t200, doc200.basis, *doc200.t2_special, 20);
  CHECK(tl.level == 2);
  CHECK_FALSE(tl.at_least);
  REQUIRE(tl.obstruction.has_value());
  CHECK(tl.obstruction->cv.x == f2::BitVec::from_string("1011"));

  SetsDocument doc37 = q37_doc();
  auto curve = make_ec_oracle_q(kCurve43808, {qp(2), qp(37)});
  TrivialLevel tl43808 = max_trivial_level(*curve, doc37.basis, *doc37.t2_special, 20);
  CHECK(tl43808.level == 1);
  REQUIRE(tl43808.obstruction.has_value());
  CHECK(tl43808.obstruction->det_disc().rep == GInt{-1});

  auto triv = make_synthetic_oracle(doc37.basis, disc_of(doc37.basis, GInt{1}),
                                    disc_of(doc37.basis, GInt{1}));
  TrivialLevel tlt = max_trivial_level(*triv, doc37.basis, *doc37.t2_special, 10);
  CHECK(tlt.level == 10);
  CHECK(tlt.at_least);
  CHECK_FALSE(tlt.obstruction.has_value());
}

TEST_CASE("trivial_semisimplification") {
  SetsDocument doc = q37_doc();
  T1Set t1 = t1_from_special(*doc.t2_special, doc.basis.rank());
  auto disc = [&](long long d) { return disc_of(doc.basis, GInt{d}); };

  auto triv = make_synthetic_oracle(doc.basis, disc(1), disc(1));
  CHECK(trivial_semisimplification(*triv, t1, doc.basis, *doc.t2_special));

  auto o37 = make_synthetic_oracle(doc.basis, disc(37), disc(37));
  CHECK_FALSE(trivial_semisimplification(*o37, t1, doc.basis, *doc.t2_special));

  auto curve = make_ec_oracle_q(kCurve43808, {qp(2), qp(37)});
  CHECK_FALSE(trivial_semisimplification(*curve, t1, doc.basis, *doc.t2_special));

  std::shared_ptr<const Oracle> shared = std::move(curve);
  auto cut = truncate_oracle(shared, 10);
  CHECK_THROWS_AS((void)trivial_semisimplification(*cut, t1, doc.basis, *doc.t2_special), Error);
}

TEST_CASE("synthetic round trip across all ordered pairs") {
  SetsDocument doc = q37_doc();
  const SelmerBasis& basis = doc.basis;
  CubicFamily fam = q37_family();
  ReportInputs in;
  in.family = &fam;
  in.t0 = *doc.t0;
  in.basis = basis;
  in.t2special = *doc.t2_special;
  in.k_max = 6;

  for (unsigned m1 = 0; m1 < 8; ++m1)
    for (unsigned m2 = 0; m2 < 8; ++m2) {
      f2::BitVec e1(3), e2(3);
      for (int b = 0; b < 3; ++b) {
        e1.set(b, (m1 >> b) & 1);
        e2.set(b, (m2 >> b) & 1);
      }
      Discriminant d1 = make_discriminant(basis, e1);
      Discriminant d2 = make_discriminant(basis, e2);
      auto o = make_synthetic_oracle(basis, d1, d2);
      IsogenyReport rep = isogeny_report(*o, in);
      CHECK_FALSE(rep.residual.irreducible);
      CHECK(rep.width == WidthClass::AtLeastTwo);
      REQUIRE(rep.trivial_level >= 1);
      if (m1 == 0 && m2 == 0) {
        CHECK(rep.trivial_at_least);
        CHECK(*rep.trivial_ss);
        continue;
      }
      CHECK(rep.trivial_level == 1);
      CHECK_FALSE(*rep.trivial_ss);
      REQUIRE(rep.structure.has_value());
      const StructureResult& st = *rep.structure;
      // {a, d} recovers {d1, d2}; b and c are trivial; abcd carries d1 d2
      auto [ra, rd] = st.ad_pair();
      GInt p1 = basis.expand(e1), p2 = basis.expand(e2);
      // unordered comparison: the report pair sorts by rotated-basis exponents
      bool straight = ra.rep == p1 && rd.rep == p2;
      bool swapped = ra.rep == p2 && rd.rep == p1;
      CHECK((straight || swapped));
      f2::BitVec sum = e1;
      sum ^= e2;
      auto leaves = st.bc_multiset();
      int trivial_count = 0;
      for (const auto& l : leaves)
        if (l.is_trivial()) ++trivial_count;
      CHECK(trivial_count == (sum.is_zero() ? 3 : 2));
      // the nontrivial leaf, when present, is the product class
      GInt expected = basis.expand(sum);
      bool found = sum.is_zero();
      for (const auto& l : leaves)
        if (!l.is_trivial()) found = found || l.rep == expected;
      CHECK(found);
    }
}

TEST_CASE("conjugation invariance of whole reports") {
  SetsDocument doc = q37_doc();
  CubicFamily fam = q37_family();
  ReportInputs in;
  in.family = &fam;
  in.t0 = *doc.t0;
  in.basis = doc.basis;
  in.t2special = *doc.t2_special;

  auto d1 = disc_of(doc.basis, GInt{-2});
  auto d2 = disc_of(doc.basis, GInt{37});
  auto a = make_synthetic_oracle(doc.basis, d1, d2);
  auto b = make_synthetic_oracle(doc.basis, d1, d2, {5, 2, 2, 1});
  IsogenyReport ra = isogeny_report(*a, in);
  IsogenyReport rb = isogeny_report(*b, in);
  SetsDocument dummy = doc;
  ReportProvenance prov;
  CHECK(report_to_json(ra, dummy, prov) == report_to_json(rb, dummy, prov));
}

TEST_CASE("precision monotonicity on the deep example") {
  SetsDocument doc = q37_doc();
  CubicFamily fam = q37_family();
  ReportInputs in;
  in.family = &fam;
  in.t0 = *doc.t0;
  in.basis = doc.basis;
  in.t2special = *doc.t2_special;

  std::shared_ptr<const Oracle> curve = make_ec_oracle_q(kCurve43808, {qp(2), qp(37)});
  IsogenyReport exact = isogeny_report(*curve, in);
  for (int bits : {4, 5, 6, 12}) {
    auto cut = truncate_oracle(curve, bits);
    IsogenyReport r = isogeny_report(*cut, in);
    CHECK(r.width == exact.width);
    CHECK(r.trivial_level == exact.trivial_level);
    REQUIRE(r.structure.has_value());
    CHECK(r.structure->cv.x == exact.structure->cv.x);
    CHECK(r.structure->cv.u == exact.structure->cv.u);
  }
}

TEST_CASE("isogeny_report composition on the pinned fixtures") {
  // width-one fixture
  SetsDocument doc = q37_doc();
  CubicFamily fam = q37_family();
  ReportInputs in;
  in.family = &fam;
  in.t0 = *doc.t0;
  in.basis = doc.basis;
  in.t2special = *doc.t2_special;
  auto small = table_oracle("table_350464h.tsv", BaseField::Rationals, {qp(2), qp(37)});
  IsogenyReport rep = isogeny_report(*small, in);
  CHECK(rep.width == WidthClass::One);
  REQUIRE(rep.small_pair.has_value());
  CHECK(rep.small_pair->first.rep == GInt{2});
  CHECK_FALSE(rep.tree.has_value());
  CHECK_FALSE(*rep.trivial_ss);

  // width zero: odd trace at 3
  std::istringstream odd("3\t1\n5\t1\n7\t1\n17\t1\n23\t1\n53\t1\n");
  auto o = make_table_oracle(BaseField::Rationals, {qp(2), qp(37)}, odd);
  IsogenyReport rep0 = isogeny_report(*o, in);
  CHECK(rep0.width == WidthClass::Zero);
  CHECK(rep0.residual.irreducible);

  // width at least two with a four-vertex tree
  SetsDocument doc31 = parse_sets_document(read_file(fixture("sets_3140c.json")));
  auto t31 = table_oracle("bianchi_3140c.tsv", BaseField::GaussianRationals, doc31.bad_set);
  ReportInputs in31;
  in31.t0 = *doc31.t0;
  in31.basis = doc31.basis;
  in31.t2special = *doc31.t2_special;
  IsogenyReport rep31 = isogeny_report(*t31, in31);
  CHECK(rep31.width == WidthClass::AtLeastTwo);
  CHECK(rep31.trivial_level == 1);
  REQUIRE(rep31.tree.has_value());
  CHECK(rep31.tree->leaves.size() == 3);
}
