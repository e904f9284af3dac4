#pragma once

#include <cstdint>
#include <string>

namespace galrep {

/// Gaussian integer a + b*i with 64-bit components and overflow-checked products.
/// Rational integers are the special case im == 0.
struct GInt {
  long long re = 0;
  long long im = 0;

  constexpr GInt() = default;
  constexpr GInt(long long r) : re(r) {}
  constexpr GInt(long long r, long long i) : re(r), im(i) {}

  bool is_zero() const { return re == 0 && im == 0; }
  bool is_one() const { return re == 1 && im == 0; }
  bool is_unit() const;
  bool is_rational() const { return im == 0; }

  GInt conj() const { return {re, -im}; }
  long long norm() const;  // throws Overflow if it does not fit

  friend constexpr bool operator==(const GInt& a, const GInt& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend constexpr bool operator!=(const GInt& a, const GInt& b) { return !(a == b); }
  /// Order by (norm, im, re); a total order used for canonical sorting only.
  friend bool operator<(const GInt& a, const GInt& b);

  friend GInt operator+(const GInt& a, const GInt& b);
  friend GInt operator-(const GInt& a, const GInt& b);
  friend GInt operator-(const GInt& a) { return {-a.re, -a.im}; }
  friend GInt operator*(const GInt& a, const GInt& b);
};

inline constexpr GInt g_one{1, 0};
inline constexpr GInt g_i{0, 1};

/// True iff d | z in Z[i].
bool divides(const GInt& d, const GInt& z);

/// z / d, which must be exact.
GInt div_exact(const GInt& z, const GInt& d);

/// Euclidean gcd in Z[i]; result is unit-normalized only to "some" associate.
GInt gcd(GInt a, GInt b);

/// i^k for k mod 4.
GInt unit_pow(int k);

/// Multiply by a unit so the result lies in the canonical sector:
/// re > 0 and im >= 0 (maps each nonzero associate class to one representative).
/// Returns the number of i-factors applied (0..3).
int canonicalize_associate(GInt& z);

std::string to_string(const GInt& z);  // "11+6*i", "i", "-5", "2*i", "1+i", ...

}  // namespace galrep
