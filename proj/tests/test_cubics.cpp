#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <sstream>
#include <vector>

#include "galrep/cubics.hpp"
#include "galrep/errors.hpp"

using namespace galrep;

namespace {

Prime qp(long long p) { return make_prime(BaseField::Rationals, GInt{p}); }
Prime gp(long long a, long long b) { return make_prime(BaseField::GaussianRationals, GInt{a, b}); }

CubicPoly qc(long long c2, long long c1, long long c0) {
  return CubicPoly{BaseField::Rationals, GInt{c2}, GInt{c1}, GInt{c0}};
}

const CubicPoly F = qc(-1, -12, -11);
const CubicPoly G = qc(-1, -3, 1);
const CubicPoly H = qc(-1, -12, 26);

/// Determinant of an integer matrix by fraction-free elimination; used for the
/// resultant cross-check.
GInt bareiss_det(std::vector<std::vector<GInt>> m) {
  int n = static_cast<int>(m.size());
  GInt prev{1};
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (m[k][k].is_zero()) {
      int swap = -1;
      for (int i = k + 1; i < n; ++i)
        if (!m[i][k].is_zero()) {
          swap = i;
          break;
        }
      if (swap < 0) return GInt{0};
      std::swap(m[k], m[swap]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j)
        m[i][j] = div_exact(m[i][j] * m[k][k] - m[i][k] * m[k][j], prev);
    prev = m[k][k];
  }
  GInt d = m[n - 1][n - 1];
  return sign < 0 ? -d : d;
}

/// disc(f) = -Res(f, f') for a monic cubic, via the 5x5 Sylvester matrix.
GInt resultant_disc(const CubicPoly& f) {
  GInt z{0};
  std::vector<GInt> fc{GInt{1}, f.c2, f.c1, f.c0};
  std::vector<GInt> dc{GInt{3}, GInt{2} * f.c2, f.c1};
  std::vector<std::vector<GInt>> syl{
      {fc[0], fc[1], fc[2], fc[3], z},
      {z, fc[0], fc[1], fc[2], fc[3]},
      {dc[0], dc[1], dc[2], z, z},
      {z, dc[0], dc[1], dc[2], z},
      {z, z, dc[0], dc[1], dc[2]},
  };
  return -bareiss_det(syl);
}

/// Independent lambda: full root scan of the reduction (prime fields only).
int brute_lambda_q(const CubicPoly& f, long long p) {
  auto red = [&](const GInt& c) { return ((c.re % p) + p) % p; };
  long long c2 = red(f.c2), c1 = red(f.c1), c0 = red(f.c0);
  for (long long x = 0; x < p; ++x)
    if ((((x + c2) * x + c1) % p * x + c0) % p == 0) return 0;
  return 1;
}

}  // namespace

TEST_CASE("discriminants of the pinned cubics") {
  CHECK(discriminant(F) == GInt{1369});       // 37^2
  CHECK(discriminant(G) == GInt{148});        // 37 * 2^2
  CHECK(discriminant(H) == GInt{-5476});      // -(2*37)^2
  CHECK(discriminant(qc(0, 0, 0)) == GInt{0});
}

TEST_CASE("discriminant agrees with the resultant route") {
  std::vector<CubicPoly> polys{F, G, H, qc(0, 0, 2), qc(3, -4, 12),
                               CubicPoly{BaseField::GaussianRationals, GInt{-1, -1}, GInt{0, -1},
                                         GInt{1, -1}},
                               CubicPoly{BaseField::GaussianRationals, GInt{0, 0}, GInt{0, 0},
                                         GInt{1, 1}}};
  for (const auto& f : polys) CHECK(discriminant(f) == resultant_disc(f));
}

TEST_CASE("lambda pinned values") {
  CHECK(lambda(F, qp(3)) == 1);
  CHECK(lambda(G, qp(5)) == 0);
  CHECK(lambda(H, qp(3)) == 0);
  CHECK(lambda(F, qp(5)) == 1);
  CHECK(lambda(G, qp(3)) == 1);
  CHECK(lambda(H, qp(5)) == 1);
  CHECK_THROWS_AS((void)lambda(G, qp(37)), Error);  // 37 | disc
}

TEST_CASE("lambda agrees with a full root scan") {
  PrimeStream s(BaseField::Rationals, {qp(2), qp(37)});
  for (int k = 0; k < 200; ++k) {
    Prime p = s.next();
    for (const auto& f : {F, G, H}) CHECK(lambda(f, p) == brute_lambda_q(f, p.norm));
  }
}

TEST_CASE("lambda over Q(i) matches a residue-field scan") {
  CubicPoly f{BaseField::GaussianRationals, GInt{-1, -1}, GInt{0, -1}, GInt{1, -1}};
  // residue field of 4+i is F_17 with i -> 13
  long long p = 17, r = 13;
  auto red = [&](const GInt& c) { return (((c.re + c.im * r) % p) + p) % p; };
  bool root = false;
  for (long long x = 0; x < p && !root; ++x)
    root = (((x + red(f.c2)) * x + red(f.c1)) % p * x + red(f.c0)) % p == 0;
  CHECK(lambda(f, gp(4, 1)) == (root ? 0 : 1));
  CHECK(lambda(f, gp(4, 1)) == 1);

  // inert prime: scan F_9 = F_3[i] for roots of x^3 + x + (1+i), whose
  // discriminant -4 - 54i is prime to 3
  CubicPoly g{BaseField::GaussianRationals, GInt{0}, GInt{1}, GInt{1, 1}};
  bool root9 = false;
  for (long long x = 0; x < 3 && !root9; ++x)
    for (long long y = 0; y < 3 && !root9; ++y) {
      long long re = x * x * x - 3 * x * y * y + x + 1, im = 3 * x * x * y - y * y * y + y + 1;
      root9 = (re % 3 + 3) % 3 == 0 && (im % 3 + 3) % 3 == 0;
    }
  CHECK(lambda(g, gp(3, 0)) == (root9 ? 0 : 1));
}

TEST_CASE("irreducibility") {
  CHECK(is_irreducible(G) == 1);
  CHECK(is_irreducible(qc(0, -1, 0)) == 0);  // x^3 - x
  CHECK(is_irreducible(qc(0, 0, -8)) == 0);  // root 2
  CubicPoly gi{BaseField::GaussianRationals, GInt{0}, GInt{0}, GInt{1, 1}};
  // independent scan: any root of x^3 = -(1+i) has norm^3 = 2, impossible
  for (long long a = -2; a <= 2; ++a)
    for (long long b = -2; b <= 2; ++b) {
      GInt z{a, b};
      CHECK(((z * z * z + GInt{1, 1}).is_zero()) == false);
    }
  CHECK(is_irreducible(gi) == 1);
}

TEST_CASE("galois types") {
  CHECK(galois_type(F) == GaloisType::C3);
  CHECK(galois_type(G) == GaloisType::S3);
  CHECK(galois_type(H) == GaloisType::S3);
  CHECK_THROWS_AS((void)galois_type(qc(0, -1, 0)), Error);
  // square discriminant over Q(i): disc 100i is i mod squares, not a square
  CubicPoly f{BaseField::GaussianRationals, GInt{-1, -1}, GInt{0, -1}, GInt{1, -1}};
  CHECK(discriminant(f) == GInt{0, 100});
  CHECK(galois_type(f) == GaloisType::S3);
}

TEST_CASE("load_family on the pinned example") {
  std::istringstream in(
      "# three candidate splitting fields\n"
      "-1 -12 -11\n"
      "-1 -3 1\n"
      "-1 -12 26\n");
  CubicFamily fam = load_family(BaseField::Rationals, {qp(2), qp(37)}, in);
  REQUIRE(fam.size() == 3);
  CHECK(fam.types == std::vector<GaloisType>{GaloisType::C3, GaloisType::S3, GaloisType::S3});
  CHECK(fam.bad_set == std::vector<Prime>{qp(2), qp(37)});
  CHECK(fam.extra_primes.empty());
}

TEST_CASE("load_family edge cases") {
  std::istringstream empty("# nothing\n\n");
  CHECK(load_family(BaseField::Rationals, {qp(2)}, empty).size() == 0);

  std::istringstream reducible("0 -1 0\n");
  CHECK_THROWS_AS((void)load_family(BaseField::Rationals, {qp(2)}, reducible), Error);

  std::istringstream dup("-1 -3 1\n-1 -3 1\n");
  CHECK_THROWS_AS((void)load_family(BaseField::Rationals, {qp(2), qp(37)}, dup), Error);

  std::istringstream bad("-1 -3\n");
  CHECK_THROWS_AS((void)load_family(BaseField::Rationals, {qp(2)}, bad), Error);

  // disc primes outside S are allowed but recorded
  std::istringstream extra("0 0 2\n");  // x^3 + 2, disc -108 = -2^2 3^3
  CubicFamily fam = load_family(BaseField::Rationals, {qp(2)}, extra);
  REQUIRE(fam.extra_primes.size() == 1);
  CHECK(fam.extra_primes[0] == qp(3));
  CHECK(fam.bad_set == std::vector<Prime>{qp(2), qp(3)});
}

TEST_CASE("lambda density split by galois type") {
  // C3 cubics are rootless at about 2/3 of primes, S3 at about 1/3.
  auto density = [&](const CubicPoly& f) {
    PrimeStream s(BaseField::Rationals, {qp(2), qp(37)});
    int ones = 0, total = 0;
    while (total < 200) {
      Prime p = s.next();
      ones += lambda(f, p);
      ++total;
    }
    return ones / 200.0;
  };
  CHECK(density(F) == doctest::Approx(2.0 / 3).epsilon(0.15 * 3 / 2));
  CHECK(density(G) == doctest::Approx(1.0 / 3).epsilon(0.15 * 3));
  CHECK(density(H) == doctest::Approx(1.0 / 3).epsilon(0.15 * 3));
}
