#include "galrep/gaussian.hpp"

#include <cstdlib>
#include <limits>

#include "galrep/errors.hpp"

namespace galrep {

namespace {

using i128 = __int128;

long long narrow(i128 v, const char* what) {
  if (v > std::numeric_limits<long long>::max() || v < std::numeric_limits<long long>::min())
    fail(ErrorKind::Overflow, what);
  return static_cast<long long>(v);
}

}  // namespace

bool GInt::is_unit() const {
  return (re == 1 && im == 0) || (re == -1 && im == 0) || (re == 0 && im == 1) ||
         (re == 0 && im == -1);
}

long long GInt::norm() const {
  i128 n = i128(re) * re + i128(im) * im;
  return narrow(n, "norm out of 64-bit range");
}

bool operator<(const GInt& a, const GInt& b) {
  i128 na = i128(a.re) * a.re + i128(a.im) * a.im;
  i128 nb = i128(b.re) * b.re + i128(b.im) * b.im;
  if (na != nb) return na < nb;
  if (a.im != b.im) return a.im < b.im;
  return a.re < b.re;
}

GInt operator+(const GInt& a, const GInt& b) {
  return {narrow(i128(a.re) + b.re, "add overflow"), narrow(i128(a.im) + b.im, "add overflow")};
}

GInt operator-(const GInt& a, const GInt& b) {
  return {narrow(i128(a.re) - b.re, "sub overflow"), narrow(i128(a.im) - b.im, "sub overflow")};
}

GInt operator*(const GInt& a, const GInt& b) {
  i128 re = i128(a.re) * b.re - i128(a.im) * b.im;
  i128 im = i128(a.re) * b.im + i128(a.im) * b.re;
  return {narrow(re, "mul overflow"), narrow(im, "mul overflow")};
}

bool divides(const GInt& d, const GInt& z) {
  if (d.is_zero()) return z.is_zero();
  GInt w = z * d.conj();
  i128 n = i128(d.re) * d.re + i128(d.im) * d.im;
  return (w.re % n == 0) && (w.im % n == 0);
}

GInt div_exact(const GInt& z, const GInt& d) {
  if (d.is_zero()) fail(ErrorKind::Unsupported, "division by zero");
  GInt w = z * d.conj();
  i128 n = i128(d.re) * d.re + i128(d.im) * d.im;
  if (w.re % n != 0 || w.im % n != 0) fail(ErrorKind::Unsupported, "inexact gaussian division");
  return {narrow(w.re / n, "div overflow"), narrow(w.im / n, "div overflow")};
}

GInt gcd(GInt a, GInt b) {
  while (!b.is_zero()) {
    // Rounded quotient keeps the remainder norm strictly decreasing.
    GInt w = a * b.conj();
    i128 n = i128(b.re) * b.re + i128(b.im) * b.im;
    auto rounded = [&](i128 x) {
      i128 q = x >= 0 ? (x + n / 2) / n : -((-x + n / 2) / n);
      return narrow(q, "gcd overflow");
    };
    GInt q{rounded(w.re), rounded(w.im)};
    GInt r = a - q * b;
    a = b;
    b = r;
  }
  return a;
}

GInt unit_pow(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1, 0};
    case 1: return {0, 1};
    case 2: return {-1, 0};
    default: return {0, -1};
  }
}

int canonicalize_associate(GInt& z) {
  if (z.is_zero()) return 0;
  for (int k = 0; k < 4; ++k) {
    if (z.re > 0 && z.im >= 0) return (4 - k) % 4;
    z = z * g_i;
  }
  fail(ErrorKind::Unsupported, "unreachable: no canonical associate");
}

std::string to_string(const GInt& z) {
  auto imag_part = [](long long b, bool leading) {
    std::string s;
    if (b == 1)
      s = "i";
    else if (b == -1)
      s = "-i";
    else
      s = std::to_string(b) + "*i";
    if (!leading && b > 0) s = "+" + s;
    return s;
  };
  if (z.im == 0) return std::to_string(z.re);
  if (z.re == 0) return imag_part(z.im, true);
  return std::to_string(z.re) + imag_part(z.im, false);
}

const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::RamifiedPrime: return "RamifiedPrime";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::Singular: return "Singular";
    case ErrorKind::BadPrime: return "BadPrime";
    case ErrorKind::Reducible: return "Reducible";
    case ErrorKind::ReducibleCubic: return "ReducibleCubic";
    case ErrorKind::DuplicateCubic: return "DuplicateCubic";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::UnknownPrime: return "UnknownPrime";
    case ErrorKind::DuplicatePrime: return "DuplicatePrime";
    case ErrorKind::BadModel: return "BadModel";
    case ErrorKind::SIncomplete: return "SIncomplete";
    case ErrorKind::PrecisionInsufficient: return "PrecisionInsufficient";
    case ErrorKind::ExactnessRequired: return "ExactnessRequired";
    case ErrorKind::NoSignatureMatch: return "NoSignatureMatch";
    case ErrorKind::ValuationTooLow: return "ValuationTooLow";
    case ErrorKind::NotTrivialModLevel: return "NotTrivialModLevel";
    case ErrorKind::InconsistentData: return "InconsistentData";
    case ErrorKind::SearchExhausted: return "SearchExhausted";
    case ErrorKind::NotInGroup: return "NotInGroup";
    case ErrorKind::Unsupported: return "Unsupported";
    case ErrorKind::Overflow: return "Overflow";
  }
  return "Error";
}

}  // namespace galrep
