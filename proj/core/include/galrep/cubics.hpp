#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "galrep/base_field.hpp"

namespace galrep {

enum class GaloisType { C3, S3 };

/// Monic cubic x^3 + c2 x^2 + c1 x + c0 over the integers of the base field.
struct CubicPoly {
  BaseField field = BaseField::Rationals;
  GInt c2, c1, c0;

  friend bool operator==(const CubicPoly& a, const CubicPoly& b) {
    return a.field == b.field && a.c2 == b.c2 && a.c1 == b.c1 && a.c0 == b.c0;
  }
  std::string str() const;  // "x^3 - x^2 - 12*x - 11"
};

GInt discriminant(const CubicPoly& f);

/// 1 iff f has no root in the field (a cubic is irreducible iff rootless).
/// Integral roots of a monic integral cubic divide c0; candidates are
/// enumerated from a factorization of c0.
int is_irreducible(const CubicPoly& f);

/// C3 iff disc(f) is a square in K*; requires f irreducible.
GaloisType galois_type(const CubicPoly& f);

/// 1 iff f is irreducible in the residue field of p (no root there).
/// Throws BadPrime if p divides disc(f).
int lambda(const CubicPoly& f, const Prime& p);

struct CubicFamily {
  BaseField field = BaseField::Rationals;
  std::vector<Prime> S;
  std::vector<CubicPoly> cubics;
  std::vector<GaloisType> types;
  std::vector<GInt> discs;
  std::vector<Prime> bad_set;        // S(F) = S with all prime divisors of the discs
  std::vector<Prime> extra_primes;   // disc primes found outside S (recorded, allowed)

  std::size_t size() const { return cubics.size(); }
};

/// Parse "c2 c1 c0" per line ('#' comments), validate irreducibility, compute
/// types, discriminants and the enlarged bad set.
CubicFamily load_family(BaseField field, std::vector<Prime> S, std::istream& in);
CubicFamily make_family(BaseField field, std::vector<Prime> S, std::vector<CubicPoly> cubics);

}  // namespace galrep
