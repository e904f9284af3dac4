#pragma once

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace galrep::f2 {

/// Fixed-length vector over F_2, bit-packed into 64-bit words. XOR is the group law.
class BitVec {
 public:
  BitVec() = default;
  explicit BitVec(int len) : len_(len), w_((len + 63) / 64, 0) {}

  static BitVec unit(int len, int i);
  static BitVec from_bits(std::initializer_list<int> bits);
  static BitVec from_string(std::string_view s);  // e.g. "1011"

  int size() const { return len_; }
  bool get(int i) const;
  void set(int i, bool v);

  BitVec& operator^=(const BitVec& o);
  friend BitVec operator^(BitVec a, const BitVec& b) { return a ^= b; }

  bool is_zero() const;
  int count() const;
  /// Index of the lowest set bit, or -1.
  int lowest_set() const;

  bool operator==(const BitVec& o) const { return len_ == o.len_ && w_ == o.w_; }
  bool operator!=(const BitVec& o) const { return !(*this == o); }
  /// Lexicographic on the bit sequence; a total order usable as a sort key.
  bool operator<(const BitVec& o) const;

  std::string str() const;

 private:
  int len_ = 0;
  std::vector<std::uint64_t> w_;
};

class BitMatrix {
 public:
  BitMatrix() = default;
  explicit BitMatrix(int cols) : cols_(cols) {}
  BitMatrix(int rows, int cols) : cols_(cols), rows_(rows, BitVec(cols)) {}

  static BitMatrix identity(int n);

  int rows() const { return static_cast<int>(rows_.size()); }
  int cols() const { return cols_; }
  void append_row(BitVec v);
  BitVec& row(int i) { return rows_[i]; }
  const BitVec& row(int i) const { return rows_[i]; }

  bool operator==(const BitMatrix& o) const { return cols_ == o.cols_ && rows_ == o.rows_; }

 private:
  int cols_ = 0;
  std::vector<BitVec> rows_;
};

int rank(const BitMatrix& m);
BitMatrix rref(const BitMatrix& m);
bool in_rowspace(const BitMatrix& m, const BitVec& v);

/// Coefficients c with xor_{i: c_i=1} row_i = v, if any.
std::optional<BitVec> solve(const BitMatrix& m, const BitVec& v);

/// Inverse of a square full-rank matrix; throws Singular otherwise.
BitMatrix invert(const BitMatrix& m);

BitMatrix multiply(const BitMatrix& a, const BitMatrix& b);
BitVec apply(const BitMatrix& m, const BitVec& x);  // x^T M (row-vector times matrix)

}  // namespace galrep::f2
