#pragma once

#include <cassert>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <type_traits>
#include <vector>

namespace hqrrp {

using Index = std::ptrdiff_t;

/// Accumulates floating point operations performed by the dense kernels.
/// A multiply and an add each count as one operation, so a multiply-add
/// pair contributes two.
class FlopCounter {
 public:
  void add(std::uint64_t n) { count_ += n; }
  std::uint64_t count() const { return count_; }
  void reset() { count_ = 0; }

 private:
  std::uint64_t count_ = 0;
};

inline void count_flops(FlopCounter* counter, double n) {
  if (counter != nullptr && n > 0) counter->add(static_cast<std::uint64_t>(n));
}

/// Non-owning column-major view with a leading dimension. `T` is either
/// `double` or `const double`.
template <typename T>
class BasicMatrixView {
 public:
  using value_type = std::remove_const_t<T>;

  BasicMatrixView() = default;
  BasicMatrixView(T* data, Index rows, Index cols, Index ld)
      : data_(data), rows_(rows), cols_(cols), ld_(ld < 1 ? 1 : ld) {
    assert(rows >= 0 && cols >= 0 && ld_ >= rows);
  }
  BasicMatrixView(T* data, Index rows, Index cols) : BasicMatrixView(data, rows, cols, rows) {}

  // mutable view -> const view
  template <typename U, typename = std::enable_if_t<std::is_const_v<T> && !std::is_const_v<U> &&
                                                    std::is_same_v<value_type, U>>>
  BasicMatrixView(const BasicMatrixView<U>& other)  // NOLINT(google-explicit-constructor)
      : data_(other.data()), rows_(other.rows()), cols_(other.cols()), ld_(other.ld()) {}

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  Index ld() const { return ld_; }
  T* data() const { return data_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  T& operator()(Index i, Index j) const {
    assert(i >= 0 && i < rows_ && j >= 0 && j < cols_);
    return data_[i + j * ld_];
  }

  std::span<T> col(Index j) const {
    assert(j >= 0 && j < cols_);
    return {data_ + j * ld_, static_cast<std::size_t>(rows_)};
  }

  BasicMatrixView block(Index i, Index j, Index r, Index c) const {
    assert(i >= 0 && j >= 0 && r >= 0 && c >= 0 && i + r <= rows_ && j + c <= cols_);
    if (r == 0 || c == 0) return BasicMatrixView(data_, r, c, ld_);
    return BasicMatrixView(data_ + i + j * ld_, r, c, ld_);
  }
  BasicMatrixView columns(Index j, Index c) const { return block(0, j, rows_, c); }
  BasicMatrixView row_range(Index i, Index r) const { return block(i, 0, r, cols_); }

 private:
  T* data_ = nullptr;
  Index rows_ = 0;
  Index cols_ = 0;
  Index ld_ = 1;
};

using MatrixView = BasicMatrixView<double>;
using ConstMatrixView = BasicMatrixView<const double>;

/// Dense owning matrix in column-major order: element (i, j) lives at
/// data()[i + j * rows()].
class Matrix {
 public:
  Matrix() = default;
  Matrix(Index rows, Index cols, double fill = 0.0);
  explicit Matrix(ConstMatrixView src);

  static Matrix identity(Index n) { return identity(n, n); }
  static Matrix identity(Index rows, Index cols);
  /// Builds a matrix from row-major nested initializer data; convenient in tests.
  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  double& operator()(Index i, Index j) {
    assert(i >= 0 && i < rows_ && j >= 0 && j < cols_);
    return data_[static_cast<std::size_t>(i + j * rows_)];
  }
  double operator()(Index i, Index j) const {
    assert(i >= 0 && i < rows_ && j >= 0 && j < cols_);
    return data_[static_cast<std::size_t>(i + j * rows_)];
  }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  MatrixView view() { return {data_.data(), rows_, cols_, rows_}; }
  ConstMatrixView view() const { return {data_.data(), rows_, cols_, rows_}; }
  operator MatrixView() { return view(); }              // NOLINT(google-explicit-constructor)
  operator ConstMatrixView() const { return view(); }   // NOLINT(google-explicit-constructor)

  MatrixView block(Index i, Index j, Index r, Index c) { return view().block(i, j, r, c); }
  ConstMatrixView block(Index i, Index j, Index r, Index c) const {
    return view().block(i, j, r, c);
  }
  std::span<double> col(Index j) { return view().col(j); }
  std::span<const double> col(Index j) const { return view().col(j); }

  bool operator==(const Matrix& other) const = default;

 private:
  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<double> data_;
};

/// Deep copy of a view.
inline Matrix copy_of(ConstMatrixView src) { return Matrix(src); }
void copy_into(ConstMatrixView src, MatrixView dst);
Matrix transpose(ConstMatrixView a);

/// Frobenius norm, accumulated with scaling so that huge or tiny entries
/// neither overflow nor underflow.
double frobenius_norm(ConstMatrixView a);
double norm2(std::span<const double> x);
double max_abs(ConstMatrixView a);
bool all_finite(ConstMatrixView a);

/// Column swap history. Entry i records that at step i column i was
/// exchanged with column swaps[i] (with swaps[i] >= i).
class PivotTrail {
 public:
  PivotTrail() = default;
  explicit PivotTrail(std::vector<Index> swaps) : swaps_(std::move(swaps)) {}

  Index size() const { return static_cast<Index>(swaps_.size()); }
  bool empty() const { return swaps_.empty(); }
  Index operator[](Index i) const { return swaps_[static_cast<std::size_t>(i)]; }
  void push_back(Index s) { swaps_.push_back(s); }
  const std::vector<Index>& swaps() const { return swaps_; }

  /// perm[j] = original index of the column that ends up at position j.
  std::vector<Index> to_permutation(Index n) const;
  /// Inverse of to_permutation: a trail of length perm.size() reproducing perm.
  static PivotTrail from_permutation(std::span<const Index> perm);

  bool operator==(const PivotTrail&) const = default;

 private:
  std::vector<Index> swaps_;
};

enum class Direction { kForward, kInverse };

/// Forward swaps column i with column swaps[i] for ascending i; inverse
/// replays the swaps in descending order. Throws std::out_of_range when a
/// swap index falls outside the column range.
void apply_pivot_trail(MatrixView a, const PivotTrail& trail,
                       Direction direction = Direction::kForward);
void apply_pivot_trail(std::span<double> v, const PivotTrail& trail,
                       Direction direction = Direction::kForward);

/// Gathers columns: out(:, j) = a(:, perm[j]).
Matrix permute_columns(ConstMatrixView a, std::span<const Index> perm);

}  // namespace hqrrp
