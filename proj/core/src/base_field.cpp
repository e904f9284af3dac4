#include "galrep/base_field.hpp"

#include <algorithm>
#include <cstdlib>

#include "galrep/errors.hpp"

namespace galrep {

namespace {

using u64 = unsigned long long;
using i128 = __int128;

u64 mulmod(u64 a, u64 b, u64 m) { return (unsigned __int128)a * b % m; }

u64 powmod(u64 base, u64 exp, u64 m) {
  u64 r = 1 % m;
  base %= m;
  while (exp) {
    if (exp & 1) r = mulmod(r, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return r;
}

long long mod_positive(long long a, long long m) {
  long long r = a % m;
  return r < 0 ? r + m : r;
}

/// Legendre symbol as a bit: 0 for residue, 1 for non-residue; throws on 0.
int legendre_bit(long long a, long long p) {
  long long v = mod_positive(a, p);
  if (v == 0) fail(ErrorKind::RamifiedPrime, "element vanishes in residue field");
  u64 e = powmod(v, (p - 1) / 2, p);
  return e == 1 ? 0 : 1;
}

/// Arithmetic in F_p[i] for inert p (p = 3 mod 4).
struct Fp2 {
  long long x, y, p;
};
Fp2 fp2_mul(const Fp2& a, const Fp2& b) {
  long long p = a.p;
  long long x = static_cast<long long>(((i128)a.x * b.x - (i128)a.y * b.y) % p);
  long long y = static_cast<long long>(((i128)a.x * b.y + (i128)a.y * b.x) % p);
  return {mod_positive(x, p), mod_positive(y, p), p};
}
Fp2 fp2_pow(Fp2 base, u64 exp) {
  Fp2 r{1, 0, base.p};
  while (exp) {
    if (exp & 1) r = fp2_mul(r, base);
    base = fp2_mul(base, base);
    exp >>= 1;
  }
  return r;
}

/// Smallest x with x^2 = -1 mod p (p = 1 mod 4), via a quadratic non-residue.
long long sqrt_minus_one(long long p) {
  for (long long n = 2;; ++n) {
    if (powmod(n, (p - 1) / 2, p) == (u64)(p - 1)) {
      return static_cast<long long>(powmod(n, (p - 1) / 4, p));
    }
  }
}

GInt gaussian_prime_above_split(long long p) {
  long long x = sqrt_minus_one(p);
  GInt g = gcd(GInt{p, 0}, GInt{x, 1});
  canonicalize_associate(g);
  return g;
}

int ord_at(const GInt& pi, GInt& z) {
  int e = 0;
  while (divides(pi, z)) {
    z = div_exact(z, pi);
    ++e;
  }
  return e;
}

bool in_excluded(const Prime& p, const std::vector<Prime>& excluded) {
  return std::find(excluded.begin(), excluded.end(), p) != excluded.end();
}

}  // namespace

const char* field_tag(BaseField f) { return f == BaseField::Rationals ? "Q" : "Qi"; }

std::optional<BaseField> field_from_tag(std::string_view s) {
  if (s == "Q") return BaseField::Rationals;
  if (s == "Qi") return BaseField::GaussianRationals;
  return std::nullopt;
}

bool is_rational_prime(long long n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (long long d = 3; d * d <= n; d += 2)
    if (n % d == 0) return false;
  return true;
}

std::vector<std::pair<long long, int>> factor_rational(long long n) {
  if (n <= 0) fail(ErrorKind::Unsupported, "factor_rational needs n > 0");
  std::vector<std::pair<long long, int>> out;
  for (long long d = 2; d * d <= n; d == 2 ? d = 3 : d += 2) {
    if (n % d == 0) {
      int e = 0;
      while (n % d == 0) {
        n /= d;
        ++e;
      }
      out.emplace_back(d, e);
    }
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

Prime make_prime(BaseField field, GInt gen) {
  if (gen.is_zero() || gen.is_unit()) fail(ErrorKind::BadPrime, "not a prime: " + to_string(gen));
  if (field == BaseField::Rationals) {
    if (!gen.is_rational()) fail(ErrorKind::BadPrime, "rational prime expected: " + to_string(gen));
    long long p = std::llabs(gen.re);
    if (!is_rational_prime(p)) fail(ErrorKind::BadPrime, "not prime: " + std::to_string(p));
    return Prime{field, GInt{p, 0}, p, 1};
  }
  canonicalize_associate(gen);
  long long n = gen.norm();
  if (is_rational_prime(n)) {
    if (n != 2 && n % 4 != 1) fail(ErrorKind::BadPrime, "norm not split: " + to_string(gen));
    return Prime{field, gen, n, 1};
  }
  if (gen.im == 0 && is_rational_prime(gen.re) && gen.re % 4 == 3)
    return Prime{field, gen, gen.re * gen.re, 2};
  fail(ErrorKind::BadPrime, "not a gaussian prime: " + to_string(gen));
}

long long rational_prime_below(const Prime& p) { return p.degree == 2 ? p.gen.re : p.norm; }

PrimeStream::PrimeStream(BaseField field, std::vector<Prime> excluded, bool degree1_only)
    : field_(field), excluded_(std::move(excluded)), degree1_only_(degree1_only) {}

void PrimeStream::refill(long long) {
  while (pending_.empty() ||
         pending_.back().norm >= next_rational_) {
    long long p = next_rational_++;
    if (!is_rational_prime(p)) continue;
    if (p == 2) {
      pending_.push_back(Prime{field_, GInt{1, 1}, 2, 1});
    } else if (p % 4 == 1) {
      GInt g = gaussian_prime_above_split(p);
      GInt h = g.conj();
      canonicalize_associate(h);
      pending_.push_back(Prime{field_, g, p, 1});
      pending_.push_back(Prime{field_, h, p, 1});
    } else {
      pending_.push_back(Prime{field_, GInt{p, 0}, p * p, 2});
    }
    std::sort(pending_.begin(), pending_.end(),
              [](const Prime& a, const Prime& b) { return b < a; });
  }
}

Prime PrimeStream::next() {
  if (field_ == BaseField::Rationals) {
    for (;;) {
      long long p = next_rational_++;
      if (!is_rational_prime(p)) continue;
      Prime pr{field_, GInt{p, 0}, p, 1};
      if (in_excluded(pr, excluded_)) continue;
      return pr;
    }
  }
  for (;;) {
    refill(0);
    Prime p = pending_.back();
    pending_.pop_back();
    if (degree1_only_ && p.degree != 1) continue;
    if (in_excluded(p, excluded_)) continue;
    return p;
  }
}

GaussianFactorization factor_gaussian(const GInt& z0) {
  if (z0.is_zero()) fail(ErrorKind::Unsupported, "factor of zero");
  GaussianFactorization out;
  GInt z = z0;
  long long n = z.norm();
  for (auto [p, e] : factor_rational(n)) {
    (void)e;
    if (p == 2) {
      GInt pi{1, 1};
      int k = ord_at(pi, z);
      if (k) out.factors.emplace_back(Prime{BaseField::GaussianRationals, pi, 2, 1}, k);
    } else if (p % 4 == 3) {
      GInt pi{p, 0};
      int k = ord_at(pi, z);
      if (k) out.factors.emplace_back(Prime{BaseField::GaussianRationals, pi, p * p, 2}, k);
    } else {
      GInt g = gaussian_prime_above_split(p);
      GInt h = g.conj();
      canonicalize_associate(h);
      int k1 = ord_at(g, z);
      int k2 = ord_at(h, z);
      if (k1) out.factors.emplace_back(Prime{BaseField::GaussianRationals, g, p, 1}, k1);
      if (k2) out.factors.emplace_back(Prime{BaseField::GaussianRationals, h, p, 1}, k2);
    }
  }
  for (int k = 0; k < 4; ++k) {
    if (z == unit_pow(k)) {
      out.unit_pow = k;
      std::sort(out.factors.begin(), out.factors.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      return out;
    }
  }
  fail(ErrorKind::Unsupported, "incomplete factorization of " + to_string(z0));
}

GaussianFactorization factor_element(BaseField field, const GInt& z) {
  if (field == BaseField::GaussianRationals) return factor_gaussian(z);
  if (!z.is_rational() || z.is_zero()) fail(ErrorKind::Unsupported, "rational element expected");
  GaussianFactorization out;
  out.unit_pow = z.re < 0 ? 2 : 0;
  for (auto [p, e] : factor_rational(std::llabs(z.re)))
    out.factors.emplace_back(Prime{field, GInt{p, 0}, p, 1}, e);
  return out;
}

namespace {

/// Local square test at the even place of Q(i): an odd z is a square in the
/// completion iff it is one mod (1+i)^5, and the square-root extension is
/// unramified iff the congruence holds mod (1+i)^4.
bool congruent_square_qi(const GInt& z, const GInt& modulus) {
  for (long long a = 0; a < 8; ++a)
    for (long long b = 0; b < 8; ++b) {
      GInt w{a, b};
      if (divides(GInt{1, 1}, w)) continue;  // need w odd
      if (divides(modulus, w * w - z)) return true;
    }
  return false;
}

int symbol_at_even(BaseField field, const GInt& rep, const Prime& p) {
  if (field == BaseField::Rationals) {
    long long d = rep.re;
    if (d % 2 == 0) fail(ErrorKind::RamifiedPrime, "2 divides " + to_string(rep));
    long long m = mod_positive(d, 8);
    if (m == 1) return 0;
    if (m == 5) return 1;
    fail(ErrorKind::RamifiedPrime, to_string(rep) + " is ramified at 2");
  }
  (void)p;
  GInt z = rep;
  GInt pi{1, 1};
  int e = 0;
  while (divides(pi, z)) {
    z = div_exact(z, pi);
    ++e;
  }
  if (e % 2 != 0) fail(ErrorKind::RamifiedPrime, to_string(rep) + " is ramified at 1+i");
  // 2i = (1+i)^2 is a square in Q(i), so stripping (1+i)-factors in pairs keeps the class.
  GInt pi4{-4, 0};      // (1+i)^4
  GInt pi5{-4, -4};     // (1+i)^5
  if (congruent_square_qi(z, pi5)) return 0;
  if (congruent_square_qi(z, pi4)) return 1;
  fail(ErrorKind::RamifiedPrime, to_string(rep) + " is ramified at 1+i");
}

}  // namespace

int splitting_symbol(const GInt& rep, const Prime& p) {
  if (rep.is_zero()) fail(ErrorKind::RamifiedPrime, "zero has no symbol");
  long long ell = rational_prime_below(p);
  if (ell == 2) return symbol_at_even(p.field, rep, p);
  if (p.degree == 1) {
    long long q = p.norm;
    long long v;
    if (p.field == BaseField::Rationals) {
      v = mod_positive(rep.re, q);
    } else {
      // i maps to r with c + d r = 0 mod q for pi = c + d i.
      long long c = mod_positive(p.gen.re, q), d = mod_positive(p.gen.im, q);
      long long dinv = static_cast<long long>(powmod(d, q - 2, q));
      long long r = mod_positive(-(i128)c * dinv % q, q);
      v = mod_positive(rep.re + (i128)rep.im * r % q, q);
    }
    return legendre_bit(v, q);
  }
  // Inert prime of Q(i): residue field F_p[i], q = p^2.
  long long pp = p.gen.re;
  Fp2 z{mod_positive(rep.re, pp), mod_positive(rep.im, pp), pp};
  if (z.x == 0 && z.y == 0) fail(ErrorKind::RamifiedPrime, "element vanishes in residue field");
  u64 exp = (u64)(((i128)pp * pp - 1) / 2);
  Fp2 e = fp2_pow(z, exp);
  if (e.y != 0 || (e.x != 1 && e.x != pp - 1))
    fail(ErrorKind::Unsupported, "euler criterion failed in F_p^2");
  return e.x == 1 ? 0 : 1;
}

GInt SelmerBasis::expand(const f2::BitVec& over_basis) const {
  f2::BitVec g = gen_coords(over_basis);
  GInt out{1, 0};
  for (int i = 0; i < static_cast<int>(gens.size()); ++i)
    if (g.get(i)) out = out * gens[i];
  return out;
}

f2::BitVec SelmerBasis::gen_coords(const f2::BitVec& over_basis) const {
  if (over_basis.size() != rank()) fail(ErrorKind::DimensionMismatch, "exponent vector length");
  f2::BitVec g(static_cast<int>(gens.size()));
  for (int i = 0; i < rank(); ++i)
    if (over_basis.get(i)) g ^= elems[i];
  return g;
}

Discriminant make_discriminant(const SelmerBasis& basis, const f2::BitVec& over_basis) {
  return Discriminant{basis.expand(over_basis), over_basis};
}

namespace {

std::vector<Prime> normalize_bad_set(BaseField field, std::vector<Prime> S) {
  for (auto& p : S)
    if (p.field != field) fail(ErrorKind::BadPrime, "bad-set prime from wrong field");
  std::sort(S.begin(), S.end());
  S.erase(std::unique(S.begin(), S.end()), S.end());
  return S;
}

}  // namespace

SelmerBasis selmer_group(BaseField field, std::vector<Prime> S) {
  SelmerBasis b;
  b.field = field;
  b.bad_set = normalize_bad_set(field, std::move(S));
  if (field == BaseField::Rationals) {
    b.gens.push_back(GInt{-1, 0});
    for (const auto& p : b.bad_set) b.gens.push_back(p.gen);
  } else {
    for (const auto& p : b.bad_set) b.gens.push_back(p.gen);
    b.gens.push_back(g_i);
  }
  int n = static_cast<int>(b.gens.size());
  for (int i = 0; i < n; ++i) {
    b.elems.push_back(f2::BitVec::unit(n, i));
    b.reps.push_back(b.gens[i]);
  }
  return b;
}

bool unramified_at_two(BaseField field, const GInt& rep, const std::vector<Prime>& S) {
  for (const auto& p : S)
    if (rational_prime_below(p) == 2) return true;
  if (field == BaseField::Rationals) {
    long long d = rep.re;
    if (d % 2 == 0) return false;
    return mod_positive(d, 4) == 1;
  }
  GInt z = rep;
  GInt pi{1, 1};
  int e = 0;
  while (divides(pi, z)) {
    z = div_exact(z, pi);
    ++e;
  }
  if (e % 2 != 0) return false;
  return congruent_square_qi(z, GInt{-4, 0});
}

SelmerBasis unramified_subgroup(const SelmerBasis& full) {
  bool covers_two = false;
  for (const auto& p : full.bad_set)
    if (rational_prime_below(p) == 2) covers_two = true;
  if (covers_two) return full;

  int r = full.rank();
  if (r > 20) fail(ErrorKind::Unsupported, "selmer rank too large for subset scan");
  f2::BitMatrix members(static_cast<int>(full.gens.size()));
  for (unsigned mask = 0; mask < (1u << r); ++mask) {
    f2::BitVec v(r);
    for (int i = 0; i < r; ++i)
      if (mask & (1u << i)) v.set(i, true);
    GInt rep = full.expand(v);
    if (unramified_at_two(full.field, rep, full.bad_set)) members.append_row(full.gen_coords(v));
  }
  f2::BitMatrix reduced = f2::rref(members);
  SelmerBasis sub;
  sub.field = full.field;
  sub.bad_set = full.bad_set;
  sub.gens = full.gens;
  for (int i = 0; i < reduced.rows(); ++i) {
    if (reduced.row(i).is_zero()) continue;
    sub.elems.push_back(reduced.row(i));
    GInt rep{1, 0};
    for (int j = 0; j < static_cast<int>(sub.gens.size()); ++j)
      if (reduced.row(i).get(j)) rep = rep * sub.gens[j];
    sub.reps.push_back(rep);
  }
  return sub;
}

f2::BitVec symbol_vector(const SelmerBasis& basis, const Prime& p) {
  f2::BitVec v(basis.rank());
  for (int i = 0; i < basis.rank(); ++i)
    v.set(i, splitting_symbol(basis.reps[i], p) == 1);
  return v;
}

std::vector<int> i_set(const Prime& p, const SelmerBasis& basis) {
  for (const auto& s : basis.bad_set)
    if (s == p) fail(ErrorKind::RamifiedPrime, "prime lies in the bad set");
  f2::BitVec v = symbol_vector(basis, p);
  std::vector<int> out;
  for (int i = 0; i < v.size(); ++i)
    if (v.get(i)) out.push_back(i + 1);
  return out;
}

f2::BitVec resolve_in_basis(const SelmerBasis& basis, const GInt& elem) {
  if (elem.is_zero()) fail(ErrorKind::NotInGroup, "zero element");
  GaussianFactorization f = factor_element(basis.field, elem);
  f2::BitVec coords(static_cast<int>(basis.gens.size()));
  auto gen_index = [&](const GInt& g) {
    for (int i = 0; i < static_cast<int>(basis.gens.size()); ++i)
      if (basis.gens[i] == g) return i;
    return -1;
  };
  for (const auto& [p, e] : f.factors) {
    if (e % 2 == 0) continue;
    int gi = gen_index(p.gen);
    if (gi < 0) fail(ErrorKind::NotInGroup, to_string(elem) + " has support outside S at " + to_string(p.gen));
    coords.set(gi, true);
  }
  if (basis.field == BaseField::Rationals) {
    if (f.unit_pow % 4 == 2) coords.set(gen_index(GInt{-1, 0}), true);
  } else {
    if (f.unit_pow % 2 == 1) coords.set(gen_index(g_i), true);
  }
  f2::BitMatrix m(static_cast<int>(basis.gens.size()));
  for (const auto& e : basis.elems) m.append_row(e);
  auto sol = f2::solve(m, coords);
  if (!sol) fail(ErrorKind::NotInGroup, to_string(elem) + " is not in the spanned subgroup");
  return *sol;
}

namespace {

long long parse_ll(std::string_view s) {
  if (s.empty()) fail(ErrorKind::ParseError, "empty integer");
  std::size_t pos = 0;
  bool neg = false;
  if (s[0] == '+' || s[0] == '-') {
    neg = s[0] == '-';
    pos = 1;
  }
  if (pos == s.size()) fail(ErrorKind::ParseError, "bare sign");
  long long v = 0;
  for (; pos < s.size(); ++pos) {
    if (s[pos] < '0' || s[pos] > '9') fail(ErrorKind::ParseError, "bad integer: " + std::string(s));
    v = v * 10 + (s[pos] - '0');
  }
  return neg ? -v : v;
}

/// One term: "12", "-3*i", "i", "-i", "+4".
std::pair<long long, bool> parse_term(std::string_view t) {
  bool imag = false;
  if (!t.empty() && t.back() == 'i') {
    imag = true;
    t.remove_suffix(1);
    if (!t.empty() && t.back() == '*') t.remove_suffix(1);
    if (t.empty() || t == "+") return {1, true};
    if (t == "-") return {-1, true};
  }
  return {parse_ll(t), imag};
}

}  // namespace

GInt parse_element(BaseField field, std::string_view s) {
  std::string compact;
  for (char c : s)
    if (!isspace(static_cast<unsigned char>(c))) compact.push_back(c);
  if (compact.empty()) fail(ErrorKind::ParseError, "empty element");
  // Split on '+'/'-' not in leading position.
  std::vector<std::string> terms;
  std::size_t start = 0;
  for (std::size_t i = 1; i < compact.size(); ++i)
    if (compact[i] == '+' || compact[i] == '-') {
      terms.push_back(compact.substr(start, i - start));
      start = i;
    }
  terms.push_back(compact.substr(start));
  if (terms.size() > 2) fail(ErrorKind::ParseError, "bad element: " + std::string(s));
  GInt z;
  bool seen_re = false, seen_im = false;
  for (const auto& t : terms) {
    auto [v, imag] = parse_term(t);
    if (imag) {
      if (seen_im) fail(ErrorKind::ParseError, "repeated imaginary part: " + std::string(s));
      z.im = v;
      seen_im = true;
    } else {
      if (seen_re) fail(ErrorKind::ParseError, "repeated real part: " + std::string(s));
      z.re = v;
      seen_re = true;
    }
  }
  if (field == BaseField::Rationals && z.im != 0)
    fail(ErrorKind::ParseError, "imaginary element over Q: " + std::string(s));
  return z;
}

Prime parse_prime(BaseField field, std::string_view s) {
  return make_prime(field, parse_element(field, s));
}

std::vector<Prime> parse_prime_list(BaseField field, std::string_view csv) {
  std::vector<Prime> out;
  std::size_t start = 0;
  while (start <= csv.size()) {
    std::size_t comma = csv.find(',', start);
    std::string_view tok =
        comma == std::string_view::npos ? csv.substr(start) : csv.substr(start, comma - start);
    if (!tok.empty()) out.push_back(parse_prime(field, tok));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

SelmerBasis rotate_first(const SelmerBasis& basis, const f2::BitVec& first) {
  if (first.is_zero()) fail(ErrorKind::Unsupported, "cannot rotate a trivial class to front");
  int pivot = first.lowest_set();
  SelmerBasis out;
  out.field = basis.field;
  out.bad_set = basis.bad_set;
  out.gens = basis.gens;
  out.elems.push_back(basis.gen_coords(first));
  out.reps.push_back(basis.expand(first));
  for (int i = 0; i < basis.rank(); ++i) {
    if (i == pivot) continue;
    out.elems.push_back(basis.elems[i]);
    out.reps.push_back(basis.reps[i]);
  }
  return out;
}

}  // namespace galrep
