#include "hqrrp/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace hqrrp {

Matrix::Matrix(Index rows, Index cols, double fill) : rows_(rows), cols_(cols) {
  if (rows < 0 || cols < 0) throw std::invalid_argument("Matrix: negative dimension");
  data_.assign(static_cast<std::size_t>(rows * cols), fill);
}

Matrix::Matrix(ConstMatrixView src) : Matrix(src.rows(), src.cols()) {
  copy_into(src, view());
}

Matrix Matrix::identity(Index rows, Index cols) {
  Matrix m(rows, cols);
  for (Index i = 0; i < std::min(rows, cols); ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const auto m = static_cast<Index>(rows.size());
  const Index n = m == 0 ? 0 : static_cast<Index>(rows.begin()->size());
  Matrix a(m, n);
  Index i = 0;
  for (const auto& row : rows) {
    if (static_cast<Index>(row.size()) != n) throw std::invalid_argument("from_rows: ragged rows");
    Index j = 0;
    for (double v : row) a(i, j++) = v;
    ++i;
  }
  return a;
}

void copy_into(ConstMatrixView src, MatrixView dst) {
  if (src.rows() != dst.rows() || src.cols() != dst.cols())
    throw std::invalid_argument("copy_into: dimension mismatch");
  for (Index j = 0; j < src.cols(); ++j) std::ranges::copy(src.col(j), dst.col(j).begin());
}

Matrix transpose(ConstMatrixView a) {
  Matrix t(a.cols(), a.rows());
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = 0; i < a.rows(); ++i) t(j, i) = a(i, j);
  return t;
}

namespace {

// LAPACK dlassq-style scaled sum of squares.
struct ScaledSsq {
  double scale = 0.0;
  double ssq = 1.0;

  void add(double x) {
    if (x == 0.0) return;
    const double ax = std::abs(x);
    if (scale < ax) {
      ssq = 1.0 + ssq * (scale / ax) * (scale / ax);
      scale = ax;
    } else {
      ssq += (ax / scale) * (ax / scale);
    }
  }
  double norm() const { return scale * std::sqrt(ssq); }
};

}  // namespace

double frobenius_norm(ConstMatrixView a) {
  ScaledSsq acc;
  for (Index j = 0; j < a.cols(); ++j)
    for (double x : a.col(j)) acc.add(x);
  return acc.norm();
}

double norm2(std::span<const double> x) {
  ScaledSsq acc;
  for (double v : x) acc.add(v);
  return acc.norm();
}

double max_abs(ConstMatrixView a) {
  double m = 0.0;
  for (Index j = 0; j < a.cols(); ++j)
    for (double x : a.col(j)) m = std::max(m, std::abs(x));
  return m;
}

bool all_finite(ConstMatrixView a) {
  for (Index j = 0; j < a.cols(); ++j)
    for (double x : a.col(j))
      if (!std::isfinite(x)) return false;
  return true;
}

std::vector<Index> PivotTrail::to_permutation(Index n) const {
  std::vector<Index> perm(static_cast<std::size_t>(n));
  for (Index j = 0; j < n; ++j) perm[static_cast<std::size_t>(j)] = j;
  for (Index i = 0; i < size(); ++i) {
    const Index s = (*this)[i];
    if (i >= n || s < i || s >= n) throw std::out_of_range("PivotTrail: swap index out of range");
    std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(s)]);
  }
  return perm;
}

PivotTrail PivotTrail::from_permutation(std::span<const Index> perm) {
  const auto n = static_cast<Index>(perm.size());
  // cur[j]: original column at position j; where[c]: position of original column c.
  std::vector<Index> cur(perm.size()), where(perm.size());
  for (Index j = 0; j < n; ++j) {
    cur[static_cast<std::size_t>(j)] = j;
    where[static_cast<std::size_t>(j)] = j;
  }
  std::vector<Index> swaps(perm.size());
  for (Index i = 0; i < n; ++i) {
    const Index want = perm[static_cast<std::size_t>(i)];
    if (want < 0 || want >= n) throw std::out_of_range("from_permutation: index out of range");
    const Index pos = where[static_cast<std::size_t>(want)];
    if (pos < i) throw std::invalid_argument("from_permutation: not a permutation");
    swaps[static_cast<std::size_t>(i)] = pos;
    const Index displaced = cur[static_cast<std::size_t>(i)];
    std::swap(cur[static_cast<std::size_t>(i)], cur[static_cast<std::size_t>(pos)]);
    where[static_cast<std::size_t>(want)] = i;
    where[static_cast<std::size_t>(displaced)] = pos;
  }
  return PivotTrail(std::move(swaps));
}

namespace {

void check_trail(const PivotTrail& trail, Index n) {
  for (Index i = 0; i < trail.size(); ++i) {
    const Index s = trail[i];
    if (i >= n || s < i || s >= n)
      throw std::out_of_range("apply_pivot_trail: swap " + std::to_string(i) + " -> " +
                              std::to_string(s) + " outside " + std::to_string(n) + " columns");
  }
}

void swap_columns(MatrixView a, Index i, Index j) {
  if (i == j) return;
  std::swap_ranges(a.col(i).begin(), a.col(i).end(), a.col(j).begin());
}

}  // namespace

void apply_pivot_trail(MatrixView a, const PivotTrail& trail, Direction direction) {
  check_trail(trail, a.cols());
  if (direction == Direction::kForward) {
    for (Index i = 0; i < trail.size(); ++i) swap_columns(a, i, trail[i]);
  } else {
    for (Index i = trail.size() - 1; i >= 0; --i) swap_columns(a, i, trail[i]);
  }
}

void apply_pivot_trail(std::span<double> v, const PivotTrail& trail, Direction direction) {
  check_trail(trail, static_cast<Index>(v.size()));
  auto at = [&](Index i) -> double& { return v[static_cast<std::size_t>(i)]; };
  if (direction == Direction::kForward) {
    for (Index i = 0; i < trail.size(); ++i) std::swap(at(i), at(trail[i]));
  } else {
    for (Index i = trail.size() - 1; i >= 0; --i) std::swap(at(i), at(trail[i]));
  }
}

Matrix permute_columns(ConstMatrixView a, std::span<const Index> perm) {
  Matrix out(a.rows(), static_cast<Index>(perm.size()));
  for (Index j = 0; j < out.cols(); ++j) {
    const Index src = perm[static_cast<std::size_t>(j)];
    if (src < 0 || src >= a.cols()) throw std::out_of_range("permute_columns: index out of range");
    std::ranges::copy(a.col(src), out.col(j).begin());
  }
  return out;
}

}  // namespace hqrrp
