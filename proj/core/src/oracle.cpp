#include "galrep/oracle.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <istream>
#include <ostream>
#include <sstream>

#include "galrep/errors.hpp"

namespace galrep {

namespace {

using i128 = __int128;

long long mod_positive(long long a, long long m) {
  long long r = a % m;
  return r < 0 ? r + m : r;
}

long long pow2ll(int n) {
  if (n < 0 || n > 62) fail(ErrorKind::Unsupported, "2-power out of range");
  return 1LL << n;
}

}  // namespace

PValue PValue::with_bits(long long v, int bits) {
  if (bits <= 0) fail(ErrorKind::ParseError, "precision must be positive");
  if (bits > 62) return exact(v);
  return PValue{mod_positive(v, pow2ll(bits)), Precision::bits_p(bits)};
}

long long PValue::mod_pow2(int n) const {
  if (!prec.at_least(n))
    fail(ErrorKind::PrecisionInsufficient,
         "value known mod 2^" + std::to_string(prec.bits) + ", need 2^" + std::to_string(n));
  return mod_positive(value, pow2ll(n));
}

PValue operator+(const PValue& a, const PValue& b) {
  Precision p = min(a.prec, b.prec);
  if (p.exact()) return PValue::exact(a.value + b.value);
  return PValue::with_bits(a.value + b.value, p.bits);
}

PValue operator-(const PValue& a, const PValue& b) {
  Precision p = min(a.prec, b.prec);
  if (p.exact()) return PValue::exact(a.value - b.value);
  return PValue::with_bits(a.value - b.value, p.bits);
}

FrobeniusAnswer FrobeniusAnswer::values(PValue t, PValue d) {
  if (d.prec.at_least(1) && d.mod_pow2(1) != 1)
    fail(ErrorKind::ParseError, "determinant must be a 2-adic unit");
  return FrobeniusAnswer{false, t, d};
}

PValue f_at_one(const FrobeniusAnswer& a) {
  if (a.ramified) fail(ErrorKind::RamifiedPrime, "F_p(1) of a ramified answer");
  return PValue::exact(1) - a.trace + a.det;
}

int valuation2(const PValue& v) {
  if (v.prec.exact()) {
    if (v.value == 0) return kInfiniteValuation;
    long long x = std::llabs(v.value);
    int k = 0;
    while ((x & 1) == 0) {
      x >>= 1;
      ++k;
    }
    return k;
  }
  if (v.value == 0) return v.prec.bits;  // >= bits; caller must mind the precision
  long long x = v.value;
  int k = 0;
  while ((x & 1) == 0) {
    x >>= 1;
    ++k;
  }
  return k;
}

Oracle::Oracle(BaseField field, std::vector<Prime> bad_set)
    : field_(field), bad_set_(std::move(bad_set)) {
  std::sort(bad_set_.begin(), bad_set_.end());
  bad_set_.erase(std::unique(bad_set_.begin(), bad_set_.end()), bad_set_.end());
}

FrobeniusAnswer Oracle::query(const Prime& p) const {
  if (p.field != field_) fail(ErrorKind::BadPrime, "prime from the wrong field");
  query_count_.fetch_add(1, std::memory_order_relaxed);
  for (const auto& s : bad_set_)
    if (s == p) return FrobeniusAnswer::make_ramified();
  return query_impl(p);
}

namespace {

class TableOracle final : public Oracle {
 public:
  TableOracle(BaseField field, std::vector<Prime> S, std::map<Prime, FrobeniusAnswer> rows)
      : Oracle(field, std::move(S)), rows_(std::move(rows)) {}

  std::string backend_name() const override { return "table"; }
  bool can_enumerate() const override { return false; }

 protected:
  FrobeniusAnswer query_impl(const Prime& p) const override {
    auto it = rows_.find(p);
    if (it == rows_.end()) fail(ErrorKind::UnknownPrime, to_string(p.gen) + " not in table");
    return it->second;
  }

 private:
  std::map<Prime, FrobeniusAnswer> rows_;
};

class EllipticCurveOracle final : public Oracle {
 public:
  EllipticCurveOracle(std::array<long long, 5> a, std::vector<Prime> S)
      : Oracle(BaseField::Rationals, std::move(S)), a_(a) {}

  std::string backend_name() const override { return "elliptic-curve"; }
  bool can_enumerate() const override { return true; }

 protected:
  FrobeniusAnswer query_impl(const Prime& p) const override {
    long long t = ec_trace_of_frobenius(a_, p.norm);
    return FrobeniusAnswer::values(PValue::exact(t), PValue::exact(p.norm));
  }

 private:
  std::array<long long, 5> a_;
};

class SyntheticOracle final : public Oracle {
 public:
  SyntheticOracle(SelmerBasis basis, Discriminant d1, Discriminant d2,
                  std::array<long long, 4> u)
      : Oracle(basis.field, basis.bad_set), basis_(std::move(basis)), d1_(std::move(d1)),
        d2_(std::move(d2)), u_(u) {
    long long det = u_[0] * u_[3] - u_[1] * u_[2];
    if (det != 1 && det != -1) fail(ErrorKind::BadModel, "conjugator must be unimodular");
    udet_ = det;
  }

  std::string backend_name() const override { return "synthetic"; }
  bool can_enumerate() const override { return true; }

 protected:
  FrobeniusAnswer query_impl(const Prime& p) const override {
    long long e1 = splitting_symbol(d1_.rep, p) ? -1 : 1;
    long long e2 = splitting_symbol(d2_.rep, p) ? -1 : 1;
    // U diag(e1,e2) U^-1, computed literally; trace and det are conjugation
    // invariants so the conjugator never shows through.
    long long m00 = u_[0] * e1, m01 = u_[1] * e2, m10 = u_[2] * e1, m11 = u_[3] * e2;
    long long inv00 = udet_ * u_[3], inv01 = -udet_ * u_[1];
    long long inv10 = -udet_ * u_[2], inv11 = udet_ * u_[0];
    long long tr = m00 * inv00 + m01 * inv10 + m10 * inv01 + m11 * inv11;
    long long det = (m00 * inv00 + m01 * inv10) * (m10 * inv01 + m11 * inv11) -
                    (m00 * inv01 + m01 * inv11) * (m10 * inv00 + m11 * inv10);
    return FrobeniusAnswer::values(PValue::exact(tr), PValue::exact(det));
  }

 private:
  SelmerBasis basis_;
  Discriminant d1_, d2_;
  std::array<long long, 4> u_;
  long long udet_;
};

class TruncatedOracle final : public Oracle {
 public:
  TruncatedOracle(std::shared_ptr<const Oracle> inner, int bits)
      : Oracle(inner->field(), inner->bad_set()), inner_(std::move(inner)), bits_(bits) {
    if (bits <= 0) fail(ErrorKind::Unsupported, "truncation bits must be positive");
  }

  std::string backend_name() const override {
    return inner_->backend_name() + "/mod2^" + std::to_string(bits_);
  }
  bool can_enumerate() const override { return inner_->can_enumerate(); }

 protected:
  FrobeniusAnswer query_impl(const Prime& p) const override {
    FrobeniusAnswer a = inner_->query(p);
    if (a.ramified) return a;
    auto cut = [&](const PValue& v) {
      int b = v.prec.exact() ? bits_ : std::min(bits_, v.prec.bits);
      return PValue::with_bits(v.value, b);
    };
    return FrobeniusAnswer{false, cut(a.trace), cut(a.det)};
  }

 private:
  std::shared_ptr<const Oracle> inner_;
  int bits_;
};

}  // namespace

std::unique_ptr<Oracle> make_table_oracle(BaseField field, std::vector<Prime> S,
                                          std::istream& in) {
  std::map<Prime, FrobeniusAnswer> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    std::string ptok;
    if (!(ls >> ptok)) continue;
    auto ctx = [&] { return "table line " + std::to_string(lineno); };
    Prime p = parse_prime(field, ptok);
    for (const auto& s : S)
      if (s == p) fail(ErrorKind::ParseError, ctx() + ": prime " + ptok + " lies in S");
    long long trace;
    if (!(ls >> trace)) fail(ErrorKind::ParseError, ctx() + ": missing trace");
    long long det = p.norm;
    int mod2pow = -1;
    if (ls >> det) {
      if (!(ls >> mod2pow)) mod2pow = -1;
    }
    std::string extra;
    if (ls >> extra) fail(ErrorKind::ParseError, ctx() + ": trailing data");
    PValue t = mod2pow < 0 ? PValue::exact(trace) : PValue::with_bits(trace, mod2pow);
    PValue d = mod2pow < 0 ? PValue::exact(det) : PValue::with_bits(det, mod2pow);
    auto [it, fresh] = rows.emplace(p, FrobeniusAnswer::values(t, d));
    (void)it;
    if (!fresh) fail(ErrorKind::DuplicatePrime, ctx() + ": repeated prime " + ptok);
  }
  return std::make_unique<TableOracle>(field, std::move(S), std::move(rows));
}

long long ec_model_discriminant(const std::array<long long, 5>& a) {
  auto [a1, a2, a3, a4, a6] = a;
  i128 b2 = (i128)a1 * a1 + 4 * (i128)a2;
  i128 b4 = 2 * (i128)a4 + (i128)a1 * a3;
  i128 b6 = (i128)a3 * a3 + 4 * (i128)a6;
  i128 b8 = (i128)a1 * a1 * a6 + 4 * (i128)a2 * a6 - (i128)a1 * a3 * a4 + (i128)a2 * a3 * a3 -
            (i128)a4 * a4;
  i128 disc = -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6;
  if (disc > std::numeric_limits<long long>::max() || disc < std::numeric_limits<long long>::min())
    fail(ErrorKind::Overflow, "model discriminant out of range");
  return static_cast<long long>(disc);
}

long long ec_trace_of_frobenius(const std::array<long long, 5>& a, long long p) {
  auto [a1, a2, a3, a4, a6] = a;
  if (p <= 3) {
    long long count = 1;  // point at infinity
    for (long long x = 0; x < p; ++x)
      for (long long y = 0; y < p; ++y) {
        long long lhs = mod_positive(y * y + a1 * x * y + a3 * y, p);
        long long rhs = mod_positive(((x + a2) * x + a4) * x + a6, p);
        if (lhs == rhs) ++count;
      }
    return p + 1 - count;
  }
  long long b2 = mod_positive(a1 * a1 + 4 * a2, p);
  long long b4 = mod_positive(2 * a4 + a1 * a3, p);
  long long b6 = mod_positive(a3 * a3 + 4 * a6, p);
  // y'^2 = 4x^3 + b2 x^2 + 2 b4 x + b6 has the same point count for odd p.
  long long sum = 0;
  for (long long x = 0; x < p; ++x) {
    i128 g = ((((i128)4 * x + b2) % p * x + 2 * b4) % p * x + b6) % p;
    long long v = mod_positive(static_cast<long long>(g), p);
    if (v == 0) continue;
    // Euler criterion
    long long e = 1, base = v, exp = (p - 1) / 2;
    while (exp) {
      if (exp & 1) e = static_cast<long long>((i128)e * base % p);
      base = static_cast<long long>((i128)base * base % p);
      exp >>= 1;
    }
    sum += (e == 1) ? 1 : -1;
  }
  return -sum;
}

std::unique_ptr<Oracle> make_ec_oracle_q(const std::array<long long, 5>& a,
                                         std::vector<Prime> S) {
  long long disc = ec_model_discriminant(a);
  if (disc == 0) fail(ErrorKind::BadModel, "singular model (disc = 0)");
  long long d = std::llabs(disc);
  bool has_two = false;
  for (const auto& p : S) {
    if (p.field != BaseField::Rationals) fail(ErrorKind::BadPrime, "S must be rational primes");
    has_two = has_two || p.norm == 2;
    while (d % p.norm == 0) d /= p.norm;
  }
  if (d != 1)
    fail(ErrorKind::SIncomplete,
         "model discriminant has bad primes outside S (cofactor " + std::to_string(d) + ")");
  // det(Frob_2) = 2 is not a 2-adic unit, so Frob_2 is never answerable.
  if (!has_two) fail(ErrorKind::SIncomplete, "2 must lie in S for a 2-adic black box");
  return std::make_unique<EllipticCurveOracle>(a, std::move(S));
}

std::unique_ptr<Oracle> make_synthetic_oracle(const SelmerBasis& basis, const Discriminant& d1,
                                              const Discriminant& d2,
                                              const std::array<long long, 4>& conjugator) {
  return std::make_unique<SyntheticOracle>(basis, d1, d2, conjugator);
}

std::unique_ptr<Oracle> truncate_oracle(std::shared_ptr<const Oracle> inner, int bits) {
  return std::make_unique<TruncatedOracle>(std::move(inner), bits);
}

void dump_oracle(const Oracle& o, long long max_norm, std::ostream& out) {
  if (!o.can_enumerate())
    fail(ErrorKind::Unsupported, "oracle backend '" + o.backend_name() + "' cannot be dumped");
  PrimeStream ps(o.field(), o.bad_set());
  for (;;) {
    Prime p = ps.next();
    if (p.norm > max_norm) break;
    FrobeniusAnswer a = o.query(p);
    out << to_string(p.gen) << '\t' << a.trace.value << '\t' << a.det.value;
    if (!a.trace.prec.exact()) out << '\t' << a.trace.prec.bits;
    out << '\n';
  }
}

}  // namespace galrep
