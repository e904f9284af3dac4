#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "galrep/oracle.hpp"
#include "galrep/test_sets.hpp"

namespace galrep {

struct ResidualVerdict {
  bool irreducible = false;
  std::optional<CubicPoly> cubic;   // present when irreducible
  std::optional<GaloisType> group;  // present when irreducible
  std::string cubic_label;
  f2::BitVec parities;              // trace parities at the T0 primes
};

/// Trace parities on T0 decide reducibility; a nonzero parity vector names the
/// unique matching cubic.
ResidualVerdict residual_image(const Oracle& o, const CubicFamily& family, const T0Set& t0);
/// Table-driven variant using the signature table stored in the T0 set.
ResidualVerdict residual_image(const Oracle& o, const T0Set& t0);

/// The unique discriminant whose symbols at the T1 primes match `bits`.
Discriminant identify_quadratic(const std::vector<int>& bits, const T1Set& t1,
                                const SelmerBasis& basis);

/// 1 iff det(Frob_p) matches candidate[i] at t1.primes[i] for all i, to the
/// requested precision (exact when `req` is exact).
int det_character_equal(const Oracle& o, const std::vector<long long>& candidate, const T1Set& t1,
                        Precision req);

/// t_k(p) = F_p(1)/2^k mod 2. Throws ValuationTooLow when ord_2 F_p(1) < k,
/// PrecisionInsufficient when F_p(1) is not pinned mod 2^{k+1}.
int test_fn(const Oracle& o, const Prime& p, int k);

struct SmallLargeResult {
  bool large = false;
  std::optional<std::pair<Discriminant, Discriminant>> pair;  // sorted, present when small
  f2::BitVec v;     // t_1 at the singleton primes
  f2::BitMatrix w;  // t_1(p_ij) + t_1(p_i) + t_1(p_j)
};

/// Width-1 versus width->=2 for a residually reducible oracle, from t_1 on a
/// special quadratically independent set.
SmallLargeResult small_or_large(const Oracle& o, const SelmerBasis& basis, const T2Set& t2special);

/// The five character exponent vectors describing the reduction one level up
/// from a representation trivial mod 2^k.
struct CharacterVector {
  int k = 1;
  f2::BitVec u, v, x, y, z;  // u+v = x+y+z = det exponents

  f2::BitVec det_exps() const;
  bool all_trivial() const;
};

struct StructureResult {
  CharacterVector cv;
  SelmerBasis basis;        // the basis the exponent vectors refer to
  bool rotated = false;     // basis was rotated so the det class comes first
  bool deep_subcase = false;  // the mod-2^{2k+2} sub-procedure was needed

  std::vector<Discriminant> bc_multiset() const;          // {x,y,z} sorted
  std::pair<Discriminant, Discriminant> ad_pair() const;  // {u,v} sorted
  Discriminant det_disc() const;
};

StructureResult mod_next_level(const Oracle& o, int k, const SelmerBasis& basis,
                               const T2Set& t2special, const SearchOptions& opt = {});

struct TrivialLevel {
  int level = 0;      // largest k <= k_max with the representation trivial mod 2^k up to isogeny
  bool at_least = false;  // the ladder reached k_max without hitting an obstruction
  std::optional<StructureResult> obstruction;
};

TrivialLevel max_trivial_level(const Oracle& o, const SelmerBasis& basis, const T2Set& t2special,
                               int k_max, const SearchOptions& opt = {});

/// det = 1 exactly on T1 and trace = 2 exactly on T2; requires exact answers.
bool trivial_semisimplification(const Oracle& o, const T1Set& t1, const SelmerBasis& basis,
                                const T2Set& t2);

enum class WidthClass { Zero, One, AtLeastTwo };
const char* width_name(WidthClass w);

/// Star tree rendered when the width is exactly 2: a trivial center with the
/// three leaf discriminants.
struct TreeDescription {
  std::vector<Discriminant> leaves;
};

struct QueryRow {
  Prime p;
  FrobeniusAnswer ans;
};

struct IsogenyReport {
  BaseField field = BaseField::Rationals;
  ResidualVerdict residual;
  WidthClass width = WidthClass::Zero;
  std::optional<std::pair<Discriminant, Discriminant>> small_pair;
  int trivial_level = 0;
  bool trivial_at_least = false;
  std::optional<StructureResult> structure;
  std::optional<TreeDescription> tree;
  std::optional<bool> trivial_ss;  // absent when the oracle is not exact
  std::vector<QueryRow> queries;
  std::vector<std::string> notes;
};

struct ReportInputs {
  const CubicFamily* family = nullptr;  // optional; T0 signatures used otherwise
  T0Set t0;
  SelmerBasis basis;
  T2Set t2special;
  int k_max = 20;
  SearchOptions opt;
};

IsogenyReport isogeny_report(const Oracle& o, const ReportInputs& in);

}  // namespace galrep
