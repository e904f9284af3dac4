#include "galrep/analysis.hpp"

#include <algorithm>
#include <map>

#include "galrep/errors.hpp"

namespace galrep {

namespace {

long long pow2ll(int n) { return 1LL << n; }

long long mod_positive(long long a, long long m) {
  long long r = a % m;
  return r < 0 ? r + m : r;
}

/// t_k from an F_p(1) value: F/2^k mod 2, requiring F pinned mod 2^{k+1}.
int t_bit(const PValue& f1, int k, const Prime& p) {
  long long r = f1.mod_pow2(k + 1);
  if (r & (pow2ll(k) - 1))
    fail(ErrorKind::ValuationTooLow, "ord_2 F_p(1) < " + std::to_string(k) + " at " + to_string(p.gen));
  return static_cast<int>((r >> k) & 1);
}

struct Slot {
  std::vector<int> iset;
  Prime prime;
  FrobeniusAnswer ans;
  PValue f1;
};

std::vector<Slot> fetch_slots(const Oracle& o, const T2Set& t2) {
  if (!t2.is_special()) fail(ErrorKind::Unsupported, "analysis requires an indexed special T2 set");
  std::vector<Slot> out;
  for (const auto& s : *t2.indexing) {
    FrobeniusAnswer a = o.query(s.prime);
    if (a.ramified) fail(ErrorKind::RamifiedPrime, to_string(s.prime.gen) + " is ramified");
    out.push_back(Slot{s.iset, s.prime, a, f_at_one(a)});
  }
  return out;
}

/// Recover the unordered pair {x, y} with s(p_I) = x_I y_I from the bits of a
/// product of two additive characters; nullopt when at least one is trivial
/// with the other equal to v (the all-zero situation reports {0,0}).
struct PairRecovery {
  f2::BitVec x, y;  // sorted: x <= y
  bool some_trivial = false;
};

PairRecovery recover_pair(int r, const std::map<std::vector<int>, int>& s, int lo) {
  // lo = 1 for the full index range, 2 for the shortened one.
  int n = r - lo + 1;
  f2::BitVec v(n);
  for (int i = lo; i <= r; ++i) v.set(i - lo, s.at({i}) != 0);
  f2::BitMatrix w(n, n);
  for (int i = lo; i <= r; ++i)
    for (int j = i + 1; j <= r; ++j) {
      int bit = s.at({i, j}) ^ s.at({i}) ^ s.at({j});
      w.row(i - lo).set(j - lo, bit != 0);
      w.row(j - lo).set(i - lo, bit != 0);
    }
  int rk = f2::rank(w);
  if (rk != 0 && rk != 2)
    fail(ErrorKind::InconsistentData, "pair matrix has rank " + std::to_string(rk));
  PairRecovery out;
  bool wzero = rk == 0;
  if (wzero && v.is_zero()) {
    out.x = f2::BitVec(n);
    out.y = f2::BitVec(n);
    out.some_trivial = true;
    return out;
  }
  if (wzero) {
    out.x = v;
    out.y = v;
    return out;
  }
  if (v.is_zero()) {
    f2::BitVec first(n), second(n);
    bool have_first = false, have_second = false;
    for (int i = 0; i < n && !have_second; ++i) {
      if (w.row(i).is_zero()) continue;
      if (!have_first) {
        first = w.row(i);
        have_first = true;
      } else if (w.row(i) != first) {
        second = w.row(i);
        have_second = true;
      }
    }
    if (!have_second) fail(ErrorKind::InconsistentData, "rank-2 pair matrix with one row value");
    out.x = first;
    out.y = second;
  } else {
    int zi = -1;
    for (int i = 0; i < n; ++i)
      if (v.get(i)) {
        zi = i;
        break;
      }
    f2::BitVec zrow = w.row(zi);
    if (zrow.is_zero()) fail(ErrorKind::InconsistentData, "expected nonzero sum row");
    f2::BitVec xrow(n);
    bool found = false;
    for (int i = 0; i < n; ++i)
      if (!w.row(i).is_zero() && w.row(i) != zrow) {
        xrow = w.row(i);
        found = true;
        break;
      }
    if (!found) fail(ErrorKind::InconsistentData, "no row distinct from the sum row");
    out.x = xrow;
    out.y = xrow ^ zrow;
  }
  for (int i = 0; i < n; ++i)
    if (v.get(i) != (out.x.get(i) && out.y.get(i)))
      fail(ErrorKind::InconsistentData, "pair data disagrees with its diagonal");
  if (out.y < out.x) std::swap(out.x, out.y);
  return out;
}

}  // namespace

ResidualVerdict residual_image(const Oracle& o, const T0Set& t0) {
  ResidualVerdict out;
  int t = static_cast<int>(t0.primes.size());
  out.parities = f2::BitVec(t);
  for (int i = 0; i < t; ++i) {
    FrobeniusAnswer a = o.query(t0.primes[i]);
    if (a.ramified) fail(ErrorKind::RamifiedPrime, to_string(t0.primes[i].gen) + " is ramified");
    out.parities.set(i, a.trace.mod_pow2(1) != 0);
  }
  if (out.parities.is_zero()) return out;
  if (t0.signatures.empty())
    fail(ErrorKind::NoSignatureMatch,
         "odd trace parities but no cubic signature table is available");
  for (std::size_t i = 0; i < t0.signatures.size(); ++i) {
    if (t0.signatures[i] == out.parities) {
      out.irreducible = true;
      out.cubic_label = i < t0.labels.size() ? t0.labels[i] : ("#" + std::to_string(i + 1));
      return out;
    }
  }
  fail(ErrorKind::NoSignatureMatch,
       "trace parities (" + out.parities.str() +
           ") match no candidate splitting field; is the oracle unramified outside S?");
}

ResidualVerdict residual_image(const Oracle& o, const CubicFamily& family, const T0Set& t0) {
  T0Set full = t0;
  full.labels.clear();
  full.signatures.clear();
  for (const auto& f : family.cubics) {
    full.labels.push_back(f.str());
    f2::BitVec sig(static_cast<int>(t0.primes.size()));
    for (std::size_t k = 0; k < t0.primes.size(); ++k)
      sig.set(static_cast<int>(k), lambda(f, t0.primes[k]) != 0);
    full.signatures.push_back(sig);
  }
  ResidualVerdict out = residual_image(o, full);
  if (out.irreducible) {
    for (std::size_t i = 0; i < full.signatures.size(); ++i)
      if (full.signatures[i] == out.parities) {
        out.cubic = family.cubics[i];
        out.group = family.types[i];
        break;
      }
  }
  return out;
}

Discriminant identify_quadratic(const std::vector<int>& bits, const T1Set& t1,
                                const SelmerBasis& basis) {
  if (bits.size() != t1.primes.size())
    fail(ErrorKind::DimensionMismatch, "one bit per T1 prime expected");
  f2::BitVec acc(basis.rank());
  for (std::size_t j = 0; j < bits.size(); ++j)
    if (bits[j]) acc ^= t1.dual_elems[j];
  return make_discriminant(basis, acc);
}

int det_character_equal(const Oracle& o, const std::vector<long long>& candidate, const T1Set& t1,
                        Precision req) {
  if (candidate.size() != t1.primes.size())
    fail(ErrorKind::DimensionMismatch, "one candidate value per T1 prime expected");
  for (std::size_t i = 0; i < t1.primes.size(); ++i) {
    FrobeniusAnswer a = o.query(t1.primes[i]);
    if (a.ramified) fail(ErrorKind::RamifiedPrime, to_string(t1.primes[i].gen) + " is ramified");
    if (req.exact()) {
      if (!a.det.prec.exact())
        fail(ErrorKind::PrecisionInsufficient,
             "exact determinant required at " + to_string(t1.primes[i].gen));
      if (a.det.value != candidate[i]) return 0;
    } else {
      if (a.det.mod_pow2(req.bits) != mod_positive(candidate[i], pow2ll(req.bits))) return 0;
    }
  }
  return 1;
}

int test_fn(const Oracle& o, const Prime& p, int k) {
  FrobeniusAnswer a = o.query(p);
  if (a.ramified) fail(ErrorKind::RamifiedPrime, to_string(p.gen) + " is ramified");
  return t_bit(f_at_one(a), k, p);
}

SmallLargeResult small_or_large(const Oracle& o, const SelmerBasis& basis, const T2Set& t2) {
  int r = basis.rank();
  std::vector<Slot> slots = fetch_slots(o, t2);
  std::map<std::vector<int>, int> t1bit;
  for (const auto& s : slots) t1bit[s.iset] = t_bit(s.f1, 1, s.prime);

  SmallLargeResult out;
  out.v = f2::BitVec(r);
  out.w = f2::BitMatrix(r, r);
  for (int i = 1; i <= r; ++i) out.v.set(i - 1, t1bit.at({i}) != 0);
  for (int i = 1; i <= r; ++i)
    for (int j = i + 1; j <= r; ++j) {
      int bit = t1bit.at({i, j}) ^ t1bit.at({i}) ^ t1bit.at({j});
      out.w.row(i - 1).set(j - 1, bit != 0);
      out.w.row(j - 1).set(i - 1, bit != 0);
    }
  std::map<std::vector<int>, int> smap = t1bit;
  PairRecovery rec = recover_pair(r, smap, 1);
  if (rec.some_trivial) {
    out.large = true;
    return out;
  }
  out.large = false;
  Discriminant a = make_discriminant(basis, rec.x);
  Discriminant b = make_discriminant(basis, rec.y);
  out.pair = a < b ? std::make_pair(a, b) : std::make_pair(b, a);
  return out;
}

f2::BitVec CharacterVector::det_exps() const {
  f2::BitVec d = u;
  d ^= v;
  return d;
}

bool CharacterVector::all_trivial() const {
  return u.is_zero() && v.is_zero() && x.is_zero() && y.is_zero() && z.is_zero();
}

std::vector<Discriminant> StructureResult::bc_multiset() const {
  std::vector<Discriminant> m{make_discriminant(basis, cv.x), make_discriminant(basis, cv.y),
                              make_discriminant(basis, cv.z)};
  std::sort(m.begin(), m.end());
  return m;
}

std::pair<Discriminant, Discriminant> StructureResult::ad_pair() const {
  Discriminant a = make_discriminant(basis, cv.u);
  Discriminant d = make_discriminant(basis, cv.v);
  return a < d ? std::make_pair(a, d) : std::make_pair(d, a);
}

Discriminant StructureResult::det_disc() const { return make_discriminant(basis, cv.det_exps()); }

namespace {

/// Shared state for one structure-recovery run at level k.
struct LevelData {
  int k;
  int r;
  std::vector<Slot> slots;
  std::map<std::vector<int>, int> t2k;      // t_{2k} bits per slot
  std::map<std::vector<int>, int> detcase;  // (det-1)/2^k per slot
};

LevelData prepare_level(const Oracle& o, int k, const SelmerBasis& basis, const T2Set& t2) {
  LevelData d;
  d.k = k;
  d.r = basis.rank();
  d.slots = fetch_slots(o, t2);
  for (const auto& s : d.slots) {
    if (!s.f1.prec.at_least(2 * k + 1))
      fail(ErrorKind::PrecisionInsufficient,
           "F_p(1) needs " + std::to_string(2 * k + 1) + " bits at " + to_string(s.prime.gen));
    if (s.f1.mod_pow2(2 * k) != 0)
      fail(ErrorKind::NotTrivialModLevel,
           "F_p(1) not divisible by 2^" + std::to_string(2 * k) + " at " + to_string(s.prime.gen));
    if (!s.ans.det.prec.at_least(k + 1))
      fail(ErrorKind::PrecisionInsufficient,
           "det needs " + std::to_string(k + 1) + " bits at " + to_string(s.prime.gen));
    long long dd = s.ans.det.mod_pow2(k + 1);
    if ((dd & (pow2ll(k) - 1)) != 1)
      fail(ErrorKind::NotTrivialModLevel,
           "det not 1 mod 2^" + std::to_string(k) + " at " + to_string(s.prime.gen));
    d.t2k[s.iset] = t_bit(s.f1, 2 * k, s.prime);
    d.detcase[s.iset] = static_cast<int>((dd >> k) & 1);
  }
  return d;
}

/// bc_1 bit at one prime via the deeper tests, given the common parity of the
/// diagonal entries there.
int deep_bit(const Slot& s, int k, int parity) {
  if (!s.f1.prec.at_least(2 * k + 2))
    fail(ErrorKind::PrecisionInsufficient,
         "F_p(1) needs " + std::to_string(2 * k + 2) + " bits at " + to_string(s.prime.gen));
  long long f = s.f1.mod_pow2(2 * k + 2);
  if (parity == 0) {
    // diagonal even: F/2^{2k} = -2*bc1 mod 4
    if (f & (pow2ll(2 * k + 1) - 1))
      fail(ErrorKind::InconsistentData, "unexpected odd part at " + to_string(s.prime.gen));
    return static_cast<int>((f >> (2 * k + 1)) & 1);
  }
  if (!s.ans.trace.prec.at_least(2 * k + 2))
    fail(ErrorKind::PrecisionInsufficient,
         "trace needs " + std::to_string(2 * k + 2) + " bits at " + to_string(s.prime.gen));
  long long tr = s.ans.trace.mod_pow2(k + 2);
  long long num = mod_positive(tr - 2, pow2ll(k + 2));
  if (num & (pow2ll(k) - 1))
    fail(ErrorKind::InconsistentData, "trace not 2 mod 2^k at " + to_string(s.prime.gen));
  int ad_sum = static_cast<int>((num >> k) & 3);  // (a+d) mod 4
  if (ad_sum % 2 != 0)
    fail(ErrorKind::InconsistentData, "diagonal sum parity mismatch at " + to_string(s.prime.gen));
  long long shifted = ad_sum == 0 ? f + pow2ll(2 * k) : f - pow2ll(2 * k);
  shifted = mod_positive(shifted, pow2ll(2 * k + 2));
  if (shifted & (pow2ll(2 * k + 1) - 1))
    fail(ErrorKind::InconsistentData, "modified test undefined at " + to_string(s.prime.gen));
  return static_cast<int>((shifted >> (2 * k + 1)) & 1);
}

/// Off-diagonal matrix w_ij = t(p_i) + t(p_j) + t(p_ij) on an index window
/// [lo..r]; its nonzero rows are among {x, y, x+y} and its rank is 0 or 2.
f2::BitMatrix w_matrix(const LevelData& d, int lo) {
  int n = d.r - lo + 1;
  f2::BitMatrix w(n, n);
  for (int i = lo; i <= d.r; ++i)
    for (int j = i + 1; j <= d.r; ++j) {
      int bit = d.t2k.at({i, j}) ^ d.t2k.at({i}) ^ d.t2k.at({j});
      w.row(i - lo).set(j - lo, bit != 0);
      w.row(j - lo).set(i - lo, bit != 0);
    }
  return w;
}

/// First two distinct nonzero rows, in row order.
std::pair<f2::BitVec, f2::BitVec> two_distinct_rows(const f2::BitMatrix& w) {
  f2::BitVec first, second;
  bool have_first = false;
  for (int i = 0; i < w.rows(); ++i) {
    if (w.row(i).is_zero()) continue;
    if (!have_first) {
      first = w.row(i);
      have_first = true;
    } else if (w.row(i) != first) {
      second = w.row(i);
      return {first, second};
    }
  }
  fail(ErrorKind::InconsistentData, "rank-2 matrix without two distinct nonzero rows");
}

/// The common value of x on a window where y = 0 and x = z, determined by the
/// deeper tests on the same primes; the other member of the recovered pair
/// describes the next level down and is dropped.
f2::BitVec deep_x(const LevelData& d, int lo, const std::map<std::vector<int>, int>& u_bits,
                  bool& deep_used) {
  deep_used = true;
  std::map<std::vector<int>, int> s;
  for (const auto& slot : d.slots) {
    bool in_window = true;
    for (int i : slot.iset)
      if (i < lo) in_window = false;
    if (!in_window) continue;
    int parity = 0;
    for (int i : slot.iset) parity ^= u_bits.at({i});
    s[slot.iset] = deep_bit(slot, d.k, parity);
  }
  PairRecovery pr = recover_pair(d.r, s, lo);
  if (pr.some_trivial) return f2::BitVec(d.r - lo + 1);
  // Both nontrivial: either may play the role of x; pin the smaller one.
  return pr.x;
}

struct WindowVectors {
  f2::BitVec x, y, z, u;  // over the window [lo..r]
  bool deep_used = false;
  bool rank2 = false;
};

/// Shared core of the two determinant cases: recover (x,y,z,u) on a window.
WindowVectors window_vectors(const LevelData& d, int lo) {
  WindowVectors out;
  int n = d.r - lo + 1;
  f2::BitMatrix w = w_matrix(d, lo);
  int rk = f2::rank(w);
  if (rk != 0 && rk != 2)
    fail(ErrorKind::InconsistentData, "character matrix has rank " + std::to_string(rk));
  if (rk == 2) {
    out.rank2 = true;
    auto [a, b] = two_distinct_rows(w);
    out.x = a;
    out.y = b;
    out.z = a ^ b;
    out.u = f2::BitVec(n);
    for (int i = lo; i <= d.r; ++i)
      out.u.set(i - lo, (d.t2k.at({i}) ^ (out.x.get(i - lo) && out.y.get(i - lo) ? 1 : 0)) != 0);
    return out;
  }
  // w = 0: take y = 0 and x = z; the diagonal then reads off u directly.
  out.u = f2::BitVec(n);
  std::map<std::vector<int>, int> u_bits;
  for (int i = lo; i <= d.r; ++i) {
    out.u.set(i - lo, d.t2k.at({i}) != 0);
    u_bits[{i}] = d.t2k.at({i});
  }
  out.y = f2::BitVec(n);
  out.x = deep_x(d, lo, u_bits, out.deep_used);
  out.z = out.x;
  return out;
}

f2::BitVec prepend(int bit, const f2::BitVec& tail) {
  f2::BitVec v(tail.size() + 1);
  v.set(0, bit != 0);
  for (int i = 0; i < tail.size(); ++i) v.set(i + 1, tail.get(i));
  return v;
}

/// The det-trivial case: all of x, y, z, u, v live on the full window.
CharacterVector structure_det_trivial(const LevelData& d, bool& deep_used) {
  for (const auto& s : d.slots)
    if (d.detcase.at(s.iset) != 0)
      fail(ErrorKind::InconsistentData,
           "trivial det class but det != 1 mod 2^{k+1} at " + to_string(s.prime.gen));
  WindowVectors wv = window_vectors(d, 1);
  deep_used = wv.deep_used;
  CharacterVector cv;
  cv.k = d.k;
  cv.x = wv.x;
  cv.y = wv.y;
  cv.z = wv.z;
  cv.u = wv.u;
  cv.v = wv.u;
  return cv;
}

/// The det-nontrivial case; requires the det class to be the first basis
/// element, so that the shortened window [2..r] behaves like the trivial case.
CharacterVector structure_det_first(const LevelData& d, bool& deep_used) {
  for (const auto& s : d.slots) {
    int expected = std::find(s.iset.begin(), s.iset.end(), 1) != s.iset.end() ? 1 : 0;
    if (d.detcase.at(s.iset) != expected)
      fail(ErrorKind::InconsistentData,
           "det values disagree with the det class at " + to_string(s.prime.gen));
  }
  WindowVectors wv = window_vectors(d, 2);
  deep_used = wv.deep_used;
  int x1, y1, z1;
  if (d.t2k.at({1}) != 0) {
    x1 = y1 = z1 = 1;
  } else {
    f2::BitVec q(d.r - 1);
    for (int i = 2; i <= d.r; ++i)
      q.set(i - 2, (d.t2k.at({i}) ^ d.t2k.at({1, i}) ^ (wv.u.get(i - 2) ? 1 : 0)) != 0);
    if (wv.rank2) {
      // x', y' independent: q = y1 x' + x1 y' identifies the first coordinates.
      if (q.is_zero()) {
        x1 = y1 = 0;
        z1 = 1;
      } else if (q == wv.x) {
        x1 = 0;
        y1 = 1;
        z1 = 0;
      } else if (q == wv.y) {
        x1 = 1;
        y1 = 0;
        z1 = 0;
      } else {
        fail(ErrorKind::InconsistentData, "first-coordinate vector matches neither character");
      }
    } else if (wv.x.is_zero()) {
      if (!q.is_zero()) fail(ErrorKind::InconsistentData, "nonzero q with trivial characters");
      x1 = y1 = 0;
      z1 = 1;
    } else {
      // y' = 0 and x' = z' nonzero: q = y1 x'.
      if (q.is_zero()) {
        y1 = 0;
        x1 = 0;
        z1 = 1;
      } else if (q == wv.x) {
        y1 = 1;
        x1 = 0;
        z1 = 0;
      } else {
        fail(ErrorKind::InconsistentData, "first-coordinate vector off the character line");
      }
    }
  }
  CharacterVector cv;
  cv.k = d.k;
  cv.x = prepend(x1, wv.x);
  cv.y = prepend(y1, wv.y);
  cv.z = prepend(z1, wv.z);
  cv.u = prepend(1, wv.u);
  cv.v = prepend(0, wv.u);
  return cv;
}

}  // namespace

StructureResult mod_next_level(const Oracle& o, int k, const SelmerBasis& basis, const T2Set& t2,
                               const SearchOptions& opt) {
  if (k < 1) fail(ErrorKind::Unsupported, "level must be >= 1");
  LevelData d = prepare_level(o, k, basis, t2);
  f2::BitVec det_vec(d.r);
  for (int i = 1; i <= d.r; ++i) det_vec.set(i - 1, d.detcase.at({i}) != 0);

  StructureResult out;
  out.basis = basis;
  if (det_vec.is_zero()) {
    out.cv = structure_det_trivial(d, out.deep_subcase);
    return out;
  }
  if (det_vec == f2::BitVec::unit(d.r, 0)) {
    out.cv = structure_det_first(d, out.deep_subcase);
    return out;
  }
  // Rotate the det class into first position and re-derive an aligned special
  // set; table oracles must cover the re-derived primes.
  SelmerBasis rotated = rotate_first(basis, det_vec);
  T2Set t2rot = find_T2_special(rotated, opt);
  StructureResult inner = mod_next_level(o, k, rotated, t2rot, opt);
  inner.rotated = true;
  return inner;
}

TrivialLevel max_trivial_level(const Oracle& o, const SelmerBasis& basis, const T2Set& t2,
                               int k_max, const SearchOptions& opt) {
  if (k_max < 1) fail(ErrorKind::Unsupported, "k_max must be >= 1");
  if (k_max > 29) fail(ErrorKind::Unsupported, "k_max is limited to 29 by 64-bit arithmetic");
  // Level 1 (triviality mod 2 up to isogeny) is the caller-checked large case;
  // climb while det = 1 mod 2^{k+1} and F_p(1) = 0 mod 2^{2k+2} across T2.
  std::vector<Slot> slots = fetch_slots(o, t2);
  int k = 1;
  for (; k < k_max; ++k) {
    bool trivial = true;
    for (const auto& s : slots) {
      if (!s.ans.det.prec.at_least(k + 1))
        fail(ErrorKind::PrecisionInsufficient,
             "det bits exhausted while probing level " + std::to_string(k + 1) +
                 " (trivial at least mod 2^" + std::to_string(k) + ")");
      if (s.ans.det.mod_pow2(k + 1) != 1) {
        trivial = false;
        break;
      }
    }
    if (trivial) {
      for (const auto& s : slots) {
        if (!s.f1.prec.at_least(2 * k + 2))
          fail(ErrorKind::PrecisionInsufficient,
               "F_p(1) bits exhausted while probing level " + std::to_string(k + 1) +
                   " (trivial at least mod 2^" + std::to_string(k) + ")");
        if (s.f1.mod_pow2(2 * k + 2) != 0) {
          trivial = false;
          break;
        }
      }
    }
    if (!trivial) break;
  }
  TrivialLevel out;
  out.level = k;
  if (k == k_max) {
    out.at_least = true;
    return out;
  }
  out.obstruction = mod_next_level(o, k, basis, t2, opt);
  return out;
}

bool trivial_semisimplification(const Oracle& o, const T1Set& t1, const SelmerBasis& basis,
                                const T2Set& t2) {
  (void)basis;
  std::vector<FrobeniusAnswer> t1a, t2a;
  for (const auto& p : t1.primes) {
    FrobeniusAnswer a = o.query(p);
    if (a.ramified) fail(ErrorKind::RamifiedPrime, to_string(p.gen) + " is ramified");
    t1a.push_back(a);
  }
  for (const auto& p : t2.primes) {
    FrobeniusAnswer a = o.query(p);
    if (a.ramified) fail(ErrorKind::RamifiedPrime, to_string(p.gen) + " is ramified");
    t2a.push_back(a);
  }
  for (const auto& a : t1a)
    if (!a.det.prec.exact())
      fail(ErrorKind::ExactnessRequired, "exact determinants needed on T1");
  for (const auto& a : t2a)
    if (!a.trace.prec.exact()) fail(ErrorKind::ExactnessRequired, "exact traces needed on T2");
  for (const auto& a : t1a)
    if (a.det.value != 1) return false;
  for (const auto& a : t2a)
    if (a.trace.value != 2) return false;
  return true;
}

const char* width_name(WidthClass w) {
  switch (w) {
    case WidthClass::Zero: return "zero";
    case WidthClass::One: return "one";
    case WidthClass::AtLeastTwo: return "at_least_two";
  }
  return "?";
}

namespace {

class RecordingOracle final : public Oracle {
 public:
  RecordingOracle(const Oracle& inner, std::vector<QueryRow>* sink)
      : Oracle(inner.field(), inner.bad_set()), inner_(inner), sink_(sink) {}

  std::string backend_name() const override { return inner_.backend_name(); }
  bool can_enumerate() const override { return inner_.can_enumerate(); }

 protected:
  FrobeniusAnswer query_impl(const Prime& p) const override {
    FrobeniusAnswer a = inner_.query(p);
    for (const auto& row : *sink_)
      if (row.p == p) return a;
    sink_->push_back(QueryRow{p, a});
    return a;
  }

 private:
  const Oracle& inner_;
  std::vector<QueryRow>* sink_;
};

}  // namespace

IsogenyReport isogeny_report(const Oracle& o, const ReportInputs& in) {
  IsogenyReport rep;
  rep.field = o.field();
  RecordingOracle rec(o, &rep.queries);

  rep.residual = in.family ? residual_image(rec, *in.family, in.t0) : residual_image(rec, in.t0);
  if (rep.residual.irreducible) {
    rep.width = WidthClass::Zero;
    return rep;
  }

  SmallLargeResult sl = small_or_large(rec, in.basis, in.t2special);
  if (!sl.large) {
    rep.width = WidthClass::One;
    rep.small_pair = sl.pair;
    rep.trivial_level = 0;
  } else {
    rep.width = WidthClass::AtLeastTwo;
    TrivialLevel tl = max_trivial_level(rec, in.basis, in.t2special, in.k_max, in.opt);
    rep.trivial_level = tl.level;
    rep.trivial_at_least = tl.at_least;
    if (tl.obstruction) {
      rep.structure = *tl.obstruction;
      if (rep.structure->rotated)
        rep.notes.push_back("basis rotated so the determinant class comes first");
      if (rep.structure->deep_subcase)
        rep.notes.push_back("structure needed F_p(1) mod 2^(2k+2), not just 2^(2k+1)");
      const CharacterVector& cv = rep.structure->cv;
      if (tl.level == 1 && !cv.x.is_zero() && !cv.y.is_zero() && !cv.z.is_zero()) {
        // Width exactly 2: a trivial center with three pinned-down neighbours.
        TreeDescription tree;
        for (const auto& d : rep.structure->bc_multiset()) tree.leaves.push_back(d);
        rep.tree = tree;
      }
    }
  }

  T1Set t1 = t1_from_special(in.t2special, in.basis.rank());
  try {
    rep.trivial_ss = trivial_semisimplification(rec, t1, in.basis, in.t2special);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::ExactnessRequired) throw;
    rep.notes.push_back("triviality certificate skipped: oracle answers are not exact");
  }
  return rep;
}

}  // namespace galrep
