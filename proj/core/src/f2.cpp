#include "galrep/f2.hpp"

#include <bit>

#include "galrep/errors.hpp"

namespace galrep::f2 {

BitVec BitVec::unit(int len, int i) {
  BitVec v(len);
  v.set(i, true);
  return v;
}

BitVec BitVec::from_bits(std::initializer_list<int> bits) {
  BitVec v(static_cast<int>(bits.size()));
  int i = 0;
  for (int b : bits) v.set(i++, b != 0);
  return v;
}

BitVec BitVec::from_string(std::string_view s) {
  BitVec v(static_cast<int>(s.size()));
  for (int i = 0; i < static_cast<int>(s.size()); ++i) {
    if (s[i] != '0' && s[i] != '1') fail(ErrorKind::ParseError, "bit string must be 0/1");
    v.set(i, s[i] == '1');
  }
  return v;
}

bool BitVec::get(int i) const {
  if (i < 0 || i >= len_) fail(ErrorKind::DimensionMismatch, "bit index out of range");
  return (w_[i / 64] >> (i % 64)) & 1u;
}

void BitVec::set(int i, bool v) {
  if (i < 0 || i >= len_) fail(ErrorKind::DimensionMismatch, "bit index out of range");
  if (v)
    w_[i / 64] |= (std::uint64_t{1} << (i % 64));
  else
    w_[i / 64] &= ~(std::uint64_t{1} << (i % 64));
}

BitVec& BitVec::operator^=(const BitVec& o) {
  if (len_ != o.len_) fail(ErrorKind::DimensionMismatch, "xor of different lengths");
  for (std::size_t k = 0; k < w_.size(); ++k) w_[k] ^= o.w_[k];
  return *this;
}

bool BitVec::is_zero() const {
  for (auto w : w_)
    if (w) return false;
  return true;
}

int BitVec::count() const {
  int c = 0;
  for (auto w : w_) c += std::popcount(w);
  return c;
}

int BitVec::lowest_set() const {
  for (std::size_t k = 0; k < w_.size(); ++k)
    if (w_[k]) return static_cast<int>(k) * 64 + std::countr_zero(w_[k]);
  return -1;
}

bool BitVec::operator<(const BitVec& o) const {
  int n = len_ < o.len_ ? len_ : o.len_;
  for (int i = 0; i < n; ++i) {
    bool a = get(i), b = o.get(i);
    if (a != b) return b;  // 0 < 1
  }
  return len_ < o.len_;
}

std::string BitVec::str() const {
  std::string s(len_, '0');
  for (int i = 0; i < len_; ++i)
    if (get(i)) s[i] = '1';
  return s;
}

BitMatrix BitMatrix::identity(int n) {
  BitMatrix m(n, n);
  for (int i = 0; i < n; ++i) m.row(i).set(i, true);
  return m;
}

void BitMatrix::append_row(BitVec v) {
  if (v.size() != cols_) fail(ErrorKind::DimensionMismatch, "row length != matrix width");
  rows_.push_back(std::move(v));
}

BitMatrix rref(const BitMatrix& m) {
  BitMatrix r = m;
  int pivot_row = 0;
  for (int col = 0; col < r.cols() && pivot_row < r.rows(); ++col) {
    int sel = -1;
    for (int i = pivot_row; i < r.rows(); ++i)
      if (r.row(i).get(col)) {
        sel = i;
        break;
      }
    if (sel < 0) continue;
    std::swap(r.row(sel), r.row(pivot_row));
    for (int i = 0; i < r.rows(); ++i)
      if (i != pivot_row && r.row(i).get(col)) r.row(i) ^= r.row(pivot_row);
    ++pivot_row;
  }
  return r;
}

int rank(const BitMatrix& m) {
  BitMatrix r = rref(m);
  int n = 0;
  for (int i = 0; i < r.rows(); ++i)
    if (!r.row(i).is_zero()) ++n;
  return n;
}

bool in_rowspace(const BitMatrix& m, const BitVec& v) { return solve(m, v).has_value(); }

std::optional<BitVec> solve(const BitMatrix& m, const BitVec& v) {
  if (v.size() != m.cols()) fail(ErrorKind::DimensionMismatch, "vector length != matrix width");
  // Eliminate with bookkeeping: aug rows carry the combination that produced them.
  std::vector<BitVec> work, comb;
  for (int i = 0; i < m.rows(); ++i) {
    work.push_back(m.row(i));
    comb.push_back(BitVec::unit(m.rows(), i));
  }
  BitVec target = v;
  BitVec target_comb(m.rows());
  int pivot_row = 0;
  for (int col = 0; col < m.cols() && pivot_row < static_cast<int>(work.size()); ++col) {
    int sel = -1;
    for (int i = pivot_row; i < static_cast<int>(work.size()); ++i)
      if (work[i].get(col)) {
        sel = i;
        break;
      }
    if (sel < 0) continue;
    std::swap(work[sel], work[pivot_row]);
    std::swap(comb[sel], comb[pivot_row]);
    for (int i = 0; i < static_cast<int>(work.size()); ++i)
      if (i != pivot_row && work[i].get(col)) {
        work[i] ^= work[pivot_row];
        comb[i] ^= comb[pivot_row];
      }
    if (target.get(col)) {
      target ^= work[pivot_row];
      target_comb ^= comb[pivot_row];
    }
    ++pivot_row;
  }
  if (!target.is_zero()) return std::nullopt;
  return target_comb;
}

BitMatrix invert(const BitMatrix& m) {
  if (m.rows() != m.cols()) fail(ErrorKind::Singular, "invert of non-square matrix");
  int n = m.rows();
  BitMatrix a = m;
  BitMatrix inv = BitMatrix::identity(n);
  for (int col = 0; col < n; ++col) {
    int sel = -1;
    for (int i = col; i < n; ++i)
      if (a.row(i).get(col)) {
        sel = i;
        break;
      }
    if (sel < 0) fail(ErrorKind::Singular, "matrix is rank deficient");
    std::swap(a.row(sel), a.row(col));
    std::swap(inv.row(sel), inv.row(col));
    for (int i = 0; i < n; ++i)
      if (i != col && a.row(i).get(col)) {
        a.row(i) ^= a.row(col);
        inv.row(i) ^= inv.row(col);
      }
  }
  return inv;
}

BitMatrix multiply(const BitMatrix& a, const BitMatrix& b) {
  if (a.cols() != b.rows()) fail(ErrorKind::DimensionMismatch, "matrix product shape");
  BitMatrix c(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int k = 0; k < a.cols(); ++k)
      if (a.row(i).get(k)) c.row(i) ^= b.row(k);
  return c;
}

BitVec apply(const BitMatrix& m, const BitVec& x) {
  if (x.size() != m.rows()) fail(ErrorKind::DimensionMismatch, "vector length != matrix rows");
  BitVec out(m.cols());
  for (int i = 0; i < m.rows(); ++i)
    if (x.get(i)) out ^= m.row(i);
  return out;
}

}  // namespace galrep::f2
