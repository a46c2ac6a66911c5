#pragma once

#include <functional>
#include <span>
#include <vector>

#include "hqrrp/householder.hpp"
#include "hqrrp/matrix.hpp"

namespace hqrrp {

/// Squared column norms of the not-yet-factored part of a matrix.
///
/// `v_orig` is the reference the recomputation safeguard measures drift
/// against. It starts as the original squared norms and is reset to the
/// exact value whenever a column is recomputed.
struct WeightVector {
  std::vector<double> v;
  std::vector<double> v_orig;

  Index size() const { return static_cast<Index>(v.size()); }
  void swap(Index i, Index j);
  /// Weights of columns [offset, size()).
  WeightVector tail(Index offset) const;
  void assign_tail(Index offset, const WeightVector& t);
};

/// A downdated weight below this fraction of its reference is recomputed.
inline constexpr double kWeightRecomputeTol = 1e-8;

/// Exact squared norm of the current trailing part of column j.
using ColumnNormFn = std::function<double(Index)>;

/// Weight arithmetic is counted in `flops` like any other vector kernel.
WeightVector compute_weights(ConstMatrixView a, FlopCounter* flops = nullptr);

/// v[offset + j] -= r_row[j]^2. Values that fall below
/// kWeightRecomputeTol * v_orig are recomputed through `recompute` when one
/// is supplied (and become the new reference); otherwise they are clamped at
/// zero.
void downdate_weights(WeightVector& w, std::span<const double> r_row, Index offset = 0,
                      const ColumnNormFn& recompute = {}, FlopCounter* flops = nullptr);

/// argmax_{j >= offset} v[j]; ties go to the smallest index.
Index determine_pivot(std::span<const double> v, Index offset = 0);
inline Index determine_pivot(const WeightVector& w, Index offset = 0) {
  return determine_pivot(w.v, offset);
}

struct MgspResult {
  Matrix q;  // m x steps, columns past `rank` are zero
  Matrix r;  // steps x n, rows past `rank` are zero
  PivotTrail trail;
  Index rank = 0;
};

/// Modified Gram-Schmidt with column pivoting: A P = Q R with non-increasing
/// positive diag(R). Stops early once every remaining weight is below
/// m * eps * max(original weights).
MgspResult mgsp(ConstMatrixView a);

/// Pivot selection only: runs up to `steps` pivoted MGS steps on `work`
/// (overwritten) and returns the swap trail (padded with identity swaps on
/// early termination).
PivotTrail mgsp_pivots(MatrixView work, Index steps, FlopCounter* flops = nullptr);

/// Householder QR with column pivoting, right-looking: `steps` steps of
/// pivot, reflect, rank-1 trailing update, weight downdate. `v` must hold the
/// weights of the columns of `a`. `t` may be empty; otherwise it is
/// steps x steps and receives the UT-transform T. Swaps are appended to
/// `trail` as indices local to `a`. Returns the taus.
std::vector<double> hqrp_unb_var1(MatrixView a, MatrixView t, PivotTrail& trail, WeightVector& v,
                                  Index steps, FlopCounter* flops = nullptr);

/// Crout-flavoured pivoted panel: completes `steps` rows of R and
/// Householder vectors while leaving A22 at its original contents. Row i of
/// `w` (steps x n) receives the part of W = T^{-T} U^T A-hat to the right of
/// the diagonal; after the call the caller finishes with
/// A22 -= U21 * W(:, steps:). `t` may be empty.
std::vector<double> hqrp_panel_var3(MatrixView a, MatrixView t, PivotTrail& trail, WeightVector& v,
                                    MatrixView w, Index steps, FlopCounter* flops = nullptr);

/// Classical pivoted QR run to completion with hqrp_unb_var1 (one T block).
QRFactors hqrp_unb(Matrix a, FlopCounter* flops = nullptr);

/// Blocked classical pivoted QR in the style of LAPACK's geqp3: var3 panels
/// followed by one rank-b update of the trailing matrix per panel.
QRFactors hqrp_blk(Matrix a, Index block_size, FlopCounter* flops = nullptr);

}  // namespace hqrrp
