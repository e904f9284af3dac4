#include "galrep/cubics.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <sstream>

#include "galrep/errors.hpp"
#include <array>

namespace galrep {

namespace {

using i128 = __int128;

long long mod_positive(long long a, long long m) {
  long long r = a % m;
  return r < 0 ? r + m : r;
}

/// All divisors of z in Z[i] up to associates, times the four units.
std::vector<GInt> gaussian_divisors(const GInt& z) {
  GaussianFactorization f = factor_gaussian(z);
  std::vector<GInt> divs{GInt{1, 0}};
  for (const auto& [p, e] : f.factors) {
    std::vector<GInt> next;
    GInt pk{1, 0};
    for (int k = 0; k <= e; ++k) {
      for (const auto& d : divs) next.push_back(d * pk);
      pk = pk * p.gen;
    }
    divs = std::move(next);
  }
  std::vector<GInt> out;
  for (const auto& d : divs)
    for (int k = 0; k < 4; ++k) out.push_back(d * unit_pow(k));
  return out;
}

GInt eval(const CubicPoly& f, const GInt& x) {
  return ((x + f.c2) * x + f.c1) * x + f.c0;
}

bool is_perfect_square(long long n, long long* root = nullptr) {
  if (n < 0) return false;
  long long r = static_cast<long long>(std::llround(std::sqrt(static_cast<double>(n))));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  if (root) *root = r;
  return r * r == n;
}

bool is_square_in_field(BaseField field, const GInt& z) {
  if (z.is_zero()) return true;
  if (field == BaseField::Rationals) return z.re > 0 && is_perfect_square(z.re);
  GaussianFactorization f = factor_gaussian(z);
  for (const auto& [p, e] : f.factors)
    if (e % 2 != 0) return false;
  return f.unit_pow % 2 == 0;  // square units are exactly i^0, i^2
}

/// Rootlessness of a monic cubic over F_q via x^q mod f; q odd or the tiny
/// even residue fields, where direct scanning is cheapest.
struct PolyMod {
  // coefficients of a polynomial of degree < 3 over F_p[i] (y==0 for prime fields)
  long long p;
  long long r;      // image of i for degree-1 primes over Q(i); -1 when unused
  bool ext;         // true: coefficients in F_p[i]
  std::array<std::pair<long long, long long>, 3> c{};
};

std::pair<long long, long long> fq_mul(const PolyMod& ctx, std::pair<long long, long long> a,
                                       std::pair<long long, long long> b) {
  long long p = ctx.p;
  if (!ctx.ext) return {static_cast<long long>((i128)a.first * b.first % p), 0};
  long long x = static_cast<long long>((((i128)a.first * b.first - (i128)a.second * b.second) % p + p) % p);
  long long y = static_cast<long long>((((i128)a.first * b.second + (i128)a.second * b.first) % p) % p);
  return {x, mod_positive(y, p)};
}

std::pair<long long, long long> fq_add(const PolyMod& ctx, std::pair<long long, long long> a,
                                       std::pair<long long, long long> b) {
  return {mod_positive(a.first + b.first, ctx.p), mod_positive(a.second + b.second, ctx.p)};
}

bool fq_zero(std::pair<long long, long long> a) { return a.first == 0 && a.second == 0; }

std::pair<long long, long long> reduce_coeff(const PolyMod& ctx, const GInt& z) {
  if (!ctx.ext) {
    long long v = ctx.r < 0 ? mod_positive(z.re, ctx.p)
                            : mod_positive(z.re + (i128)z.im * ctx.r % ctx.p, ctx.p);
    return {v, 0};
  }
  return {mod_positive(z.re, ctx.p), mod_positive(z.im, ctx.p)};
}

/// f(x) evaluated over all of F_q; returns true if a root exists.
bool has_root_in_residue_field(const CubicPoly& f, const Prime& p) {
  PolyMod ctx;
  long long ell = rational_prime_below(p);
  ctx.p = ell;
  ctx.ext = (p.degree == 2);
  ctx.r = -1;
  if (p.field == BaseField::GaussianRationals && p.degree == 1) {
    long long c = mod_positive(p.gen.re, ell), d = mod_positive(p.gen.im, ell);
    if (ell == 2) {
      ctx.r = 1;  // i = 1 mod (1+i)
    } else {
      long long dinv = 1, base = d, e = ell - 2;
      long long acc = 1;
      while (e) {
        if (e & 1) acc = static_cast<long long>((i128)acc * base % ell);
        base = static_cast<long long>((i128)base * base % ell);
        e >>= 1;
      }
      dinv = acc;
      ctx.r = mod_positive(-(i128)c * dinv % ell, ell);
    }
  }
  auto c2 = reduce_coeff(ctx, f.c2);
  auto c1 = reduce_coeff(ctx, f.c1);
  auto c0 = reduce_coeff(ctx, f.c0);
  std::vector<std::pair<long long, long long>> points;
  if (!ctx.ext) {
    for (long long x = 0; x < ctx.p; ++x) points.push_back({x, 0});
  } else {
    for (long long x = 0; x < ctx.p; ++x)
      for (long long y = 0; y < ctx.p; ++y) points.push_back({x, y});
  }
  for (auto x : points) {
    auto v = fq_add(ctx, fq_mul(ctx, fq_add(ctx, fq_mul(ctx, fq_add(ctx, x, c2), x), c1), x), c0);
    if (fq_zero(v)) return true;
  }
  return false;
}

}  // namespace

std::string CubicPoly::str() const {
  auto term = [&](const GInt& c, const char* mon) -> std::string {
    if (c.is_zero()) return "";
    std::string s = to_string(c);
    bool neg = s.size() && s[0] == '-';
    std::string body = neg ? s.substr(1) : s;
    bool needs_parens = body.find('+') != std::string::npos || body.find('-') != std::string::npos;
    if (*mon) {
      if (body == "1" && !needs_parens)
        body = mon;
      else
        body = (needs_parens ? "(" + body + ")" : body) + "*" + mon;
    }
    return (neg ? " - " : " + ") + body;
  };
  return "x^3" + term(c2, "x^2") + term(c1, "x") + term(c0, "");
}

GInt discriminant(const CubicPoly& f) {
  const GInt &a = f.c2, &b = f.c1, &c = f.c0;
  return GInt{18} * a * b * c - GInt{4} * a * a * a * c + a * a * b * b - GInt{4} * b * b * b -
         GInt{27} * c * c;
}

int is_irreducible(const CubicPoly& f) {
  if (f.c0.is_zero()) return 0;  // root at 0
  if (f.field == BaseField::Rationals) {
    long long n = std::llabs(f.c0.re);
    std::vector<long long> divs{1};
    for (auto [p, e] : factor_rational(n)) {
      std::vector<long long> next;
      long long pk = 1;
      for (int k = 0; k <= e; ++k) {
        for (long long d : divs) next.push_back(d * pk);
        pk *= p;
      }
      divs = std::move(next);
    }
    for (long long d : divs)
      for (long long s : {d, -d})
        if (eval(f, GInt{s}).is_zero()) return 0;
    return 1;
  }
  for (const auto& d : gaussian_divisors(f.c0))
    if (eval(f, d).is_zero()) return 0;
  return 1;
}

GaloisType galois_type(const CubicPoly& f) {
  if (!is_irreducible(f)) fail(ErrorKind::Reducible, "galois_type of reducible cubic " + f.str());
  return is_square_in_field(f.field, discriminant(f)) ? GaloisType::C3 : GaloisType::S3;
}

int lambda(const CubicPoly& f, const Prime& p) {
  GInt d = discriminant(f);
  bool div = p.field == BaseField::Rationals ? (d.re % p.norm == 0) : divides(p.gen, d);
  if (div) fail(ErrorKind::BadPrime, to_string(p.gen) + " divides disc of " + f.str());
  return has_root_in_residue_field(f, p) ? 0 : 1;
}

CubicFamily make_family(BaseField field, std::vector<Prime> S, std::vector<CubicPoly> cubics) {
  CubicFamily fam;
  fam.field = field;
  std::sort(S.begin(), S.end());
  S.erase(std::unique(S.begin(), S.end()), S.end());
  fam.S = S;
  fam.bad_set = S;
  for (std::size_t i = 0; i < cubics.size(); ++i) {
    const CubicPoly& f = cubics[i];
    if (f.field != field) fail(ErrorKind::ParseError, "cubic from wrong field");
    for (const auto& g : fam.cubics)
      if (g == f) fail(ErrorKind::DuplicateCubic, "duplicate cubic " + f.str());
    if (!is_irreducible(f))
      fail(ErrorKind::ReducibleCubic, "cubic #" + std::to_string(i + 1) + " is reducible: " + f.str());
    GInt d = discriminant(f);
    fam.cubics.push_back(f);
    fam.discs.push_back(d);
    fam.types.push_back(galois_type(f));
    for (const auto& [p, e] : factor_element(field, d).factors) {
      (void)e;
      if (std::find(fam.bad_set.begin(), fam.bad_set.end(), p) == fam.bad_set.end()) {
        fam.bad_set.push_back(p);
        fam.extra_primes.push_back(p);
      }
    }
  }
  std::sort(fam.bad_set.begin(), fam.bad_set.end());
  std::sort(fam.extra_primes.begin(), fam.extra_primes.end());
  return fam;
}

CubicFamily load_family(BaseField field, std::vector<Prime> S, std::istream& in) {
  std::vector<CubicPoly> cubics;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    std::string a, b, c;
    if (!(ls >> a)) continue;  // blank
    if (!(ls >> b >> c))
      fail(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": expected 'c2 c1 c0'");
    std::string extra;
    if (ls >> extra)
      fail(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": trailing data");
    CubicPoly f{field, parse_element(field, a), parse_element(field, b), parse_element(field, c)};
    cubics.push_back(f);
  }
  return make_family(field, std::move(S), std::move(cubics));
}

}  // namespace galrep
