#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "galrep/f2.hpp"
#include "galrep/gaussian.hpp"

namespace galrep {

enum class BaseField { Rationals, GaussianRationals };

const char* field_tag(BaseField f);                 // "Q" / "Qi"
std::optional<BaseField> field_from_tag(std::string_view s);

/// A prime of the base field, held by its canonical generator.
/// Q: the positive rational prime. Q(i): the associate with re > 0, im >= 0
/// (so 1+i, 2+i, 1+2i, 3, ...). norm is the residue-field order.
struct Prime {
  BaseField field = BaseField::Rationals;
  GInt gen;
  long long norm = 0;
  int degree = 1;  // residue degree: norm == p (1) or p^2 (2)

  friend bool operator==(const Prime& a, const Prime& b) {
    return a.field == b.field && a.gen == b.gen;
  }
  friend bool operator!=(const Prime& a, const Prime& b) { return !(a == b); }
  friend bool operator<(const Prime& a, const Prime& b) {
    if (a.norm != b.norm) return a.norm < b.norm;
    return a.gen < b.gen;
  }
};

/// Validates and canonicalizes a claimed prime element; throws BadPrime.
Prime make_prime(BaseField field, GInt gen);

long long rational_prime_below(const Prime& p);  // residue characteristic

/// Deterministic stream of canonical primes in (norm, im)-ascending order.
class PrimeStream {
 public:
  PrimeStream(BaseField field, std::vector<Prime> excluded = {}, bool degree1_only = false);
  Prime next();

 private:
  BaseField field_;
  std::vector<Prime> excluded_;
  bool degree1_only_;
  long long next_rational_ = 2;
  std::vector<Prime> pending_;  // kept sorted, smallest last
  void refill(long long need_norm);
};

bool is_rational_prime(long long n);
std::vector<std::pair<long long, int>> factor_rational(long long n);  // n > 0

struct GaussianFactorization {
  int unit_pow = 0;  // z = i^unit_pow * prod gen^e
  std::vector<std::pair<Prime, int>> factors;
};
GaussianFactorization factor_gaussian(const GInt& z);

/// Factorization over either field; factors carry canonical prime generators.
/// Over Q the "unit" is recorded as i^2 = -1 when z < 0.
GaussianFactorization factor_element(BaseField field, const GInt& z);

/// Euler-criterion quadratic-residue bit in the residue field of p,
/// with the standard local-square treatment at residue characteristic 2.
/// Returns 0 if the class of `rep` is a square (split), 1 if not (inert).
/// Throws RamifiedPrime if p divides rep or the quadratic is ramified at p.
int splitting_symbol(const GInt& rep, const Prime& p);

/// An ordered basis of a subgroup of K(S,2), held as exponent vectors over a
/// fixed generator list (units first over Q, last over Q(i), matching the
/// canonical generator conventions).
struct SelmerBasis {
  BaseField field = BaseField::Rationals;
  std::vector<Prime> bad_set;        // S, sorted canonically
  std::vector<GInt> gens;            // coordinate generators of K(S,2)
  std::vector<f2::BitVec> elems;     // basis elements, exponent vectors over gens
  std::vector<GInt> reps;            // expanded representatives of elems

  int rank() const { return static_cast<int>(elems.size()); }
  /// Expand an exponent vector over this basis into a field element.
  GInt expand(const f2::BitVec& over_basis) const;
  f2::BitVec gen_coords(const f2::BitVec& over_basis) const;
};

/// An element of the discriminant group: normalized representative plus its
/// exponent vector over the basis it was produced from.
struct Discriminant {
  GInt rep{1};
  f2::BitVec exps;

  bool is_trivial() const { return exps.is_zero(); }
  friend bool operator==(const Discriminant& a, const Discriminant& b) {
    return a.exps == b.exps;
  }
  friend bool operator<(const Discriminant& a, const Discriminant& b) { return a.exps < b.exps; }
};

Discriminant make_discriminant(const SelmerBasis& basis, const f2::BitVec& over_basis);

/// Basis of the full 2-Selmer group K(S,2).
/// Q: (-1, p_1, p_2, ...). Q(i): (pi_1, ..., pi_m, i). Both fields have class
/// number 1 and known units, so no class-group machinery is involved.
SelmerBasis selmer_group(BaseField field, std::vector<Prime> S);

/// Basis of the subgroup of classes whose square-root extension is unramified
/// outside S. Equals the full group whenever S contains every prime above 2.
SelmerBasis unramified_subgroup(const SelmerBasis& full);

/// True iff K(sqrt(rep))/K is unramified at every prime above 2 outside S.
/// (Odd primes are controlled by the even-valuation condition already.)
bool unramified_at_two(BaseField field, const GInt& rep, const std::vector<Prime>& S);

/// Symbol vector ([Delta_1|p], ..., [Delta_r|p]) over the basis.
f2::BitVec symbol_vector(const SelmerBasis& basis, const Prime& p);

/// I(p) = { i : [Delta_i|p] = 1 }, 1-based.
std::vector<int> i_set(const Prime& p, const SelmerBasis& basis);

/// Coordinates of an arbitrary element over the basis, if it lies in the
/// subgroup spanned by it (modulo squares); NotInGroup otherwise.
f2::BitVec resolve_in_basis(const SelmerBasis& basis, const GInt& elem);

/// Replace the basis by one whose first element is the given nonzero class.
SelmerBasis rotate_first(const SelmerBasis& basis, const f2::BitVec& first);

/// Element syntax: decimal over Q ("-37"); "a+b*i" forms over Q(i)
/// ("11+6*i", "1+i", "-i", "2*i", "5").
GInt parse_element(BaseField field, std::string_view s);
Prime parse_prime(BaseField field, std::string_view s);
std::vector<Prime> parse_prime_list(BaseField field, std::string_view csv);

}  // namespace galrep
