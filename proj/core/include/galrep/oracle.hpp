#pragma once

#include <array>
#include <atomic>
#include <cstddef>
#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "galrep/base_field.hpp"

namespace galrep {

/// 2-adic precision of a reported integer: exact, or known modulo 2^bits.
struct Precision {
  int bits = -1;  // -1 = exact

  bool exact() const { return bits < 0; }
  static Precision exact_p() { return Precision{-1}; }
  static Precision bits_p(int n) { return Precision{n}; }
  /// True if the value is pinned at least modulo 2^n.
  bool at_least(int n) const { return exact() || bits >= n; }
  friend Precision min(Precision a, Precision b) {
    if (a.exact()) return b;
    if (b.exact()) return a;
    return Precision{a.bits < b.bits ? a.bits : b.bits};
  }
  friend bool operator==(Precision a, Precision b) { return a.bits == b.bits; }
};

/// An integer carried with its 2-adic precision. Finite-precision values are
/// stored canonically in [0, 2^bits).
struct PValue {
  long long value = 0;
  Precision prec = Precision::exact_p();

  static PValue exact(long long v) { return PValue{v, Precision::exact_p()}; }
  static PValue with_bits(long long v, int bits);
  /// Residue modulo 2^n; requires prec.at_least(n).
  long long mod_pow2(int n) const;
};

PValue operator+(const PValue& a, const PValue& b);
PValue operator-(const PValue& a, const PValue& b);

struct FrobeniusAnswer {
  bool ramified = false;
  PValue trace, det;  // det is always odd

  static FrobeniusAnswer make_ramified() { return FrobeniusAnswer{true, {}, {}}; }
  static FrobeniusAnswer values(PValue t, PValue d);
};

/// F_p(1) = 1 - trace + det, at the min of the two precisions.
PValue f_at_one(const FrobeniusAnswer& a);

/// 2-adic valuation of F_p(1); kInfiniteValuation when the value is exactly 0.
/// For finite precision n, a residue of 0 means only "valuation >= n", which is
/// reported as n with `exact_zero` false.
inline constexpr int kInfiniteValuation = 1 << 20;
int valuation2(const PValue& v);

class Oracle {
 public:
  virtual ~Oracle() = default;

  FrobeniusAnswer query(const Prime& p) const;
  const std::vector<Prime>& bad_set() const { return bad_set_; }
  BaseField field() const { return field_; }
  virtual std::string backend_name() const = 0;
  /// Computed backends can answer any prime; table backends cannot.
  virtual bool can_enumerate() const = 0;
  std::size_t query_count() const { return query_count_.load(std::memory_order_relaxed); }

 protected:
  Oracle(BaseField field, std::vector<Prime> bad_set);
  virtual FrobeniusAnswer query_impl(const Prime& p) const = 0;

 private:
  BaseField field_;
  std::vector<Prime> bad_set_;
  mutable std::atomic<std::size_t> query_count_{0};
};

/// Oracle backed by a line-oriented table:
///   prime <ws> trace [<ws> det [<ws> mod2pow]]
/// '#' starts a comment. Missing det means det = N(p). Missing mod2pow means
/// the values are exact. Primes absent from the table raise UnknownPrime.
std::unique_ptr<Oracle> make_table_oracle(BaseField field, std::vector<Prime> S, std::istream& in);

/// Exhaustive-point-count oracle for an integral Weierstrass model over Q.
/// S must contain every prime dividing the model discriminant.
std::unique_ptr<Oracle> make_ec_oracle_q(const std::array<long long, 5>& a1_a2_a3_a4_a6,
                                         std::vector<Prime> S);

/// Trace of Frobenius by exhaustive counting; exposed for cross-checks.
long long ec_trace_of_frobenius(const std::array<long long, 5>& a, long long p);
long long ec_model_discriminant(const std::array<long long, 5>& a);

/// A genuinely reducible representation: the direct sum of the two quadratic
/// characters attached to d1, d2, presented through an integral conjugate so
/// that only trace and determinant are visible.
std::unique_ptr<Oracle> make_synthetic_oracle(const SelmerBasis& basis, const Discriminant& d1,
                                              const Discriminant& d2,
                                              const std::array<long long, 4>& conjugator = {1, 0,
                                                                                            0, 1});

/// Wrapper reducing every answer to `bits` bits of 2-adic precision.
std::unique_ptr<Oracle> truncate_oracle(std::shared_ptr<const Oracle> inner, int bits);

void dump_oracle(const Oracle& o, long long max_norm, std::ostream& out);

}  // namespace galrep
