#pragma once

#include <functional>

#include "hqrrp/householder.hpp"
#include "hqrrp/matrix.hpp"
#include "hqrrp/rng.hpp"

namespace hqrrp {

/// Randomized sampling state for block pivot selection.
///
/// `g` is the current effective randomizing matrix ((b + p) x m) and `y` the
/// sample matrix ((b + p) x n). At the head of each blocked step the trailing
/// columns satisfy y(:, col_offset:) = g(:, col_offset:) * A22.
struct Sketch {
  Matrix g;
  Matrix y;
  Index block_size = 0;
  Index oversampling = 0;
  Index col_offset = 0;

  Index sample_rows() const { return g.rows(); }
};

inline constexpr Index kDefaultOversampling = 5;

/// Draws G ((b + p) x rows(A)) from `rng` and forms Y = G A.
Sketch build_sketch(Rng& rng, ConstMatrixView a, Index block_size,
                    Index oversampling = kDefaultOversampling, FlopCounter* flops = nullptr);

/// Runs `count` steps of pivoted MGS on a copy of `y` and returns the swap
/// trail; `y` itself is left untouched. Throws when count > cols(y).
PivotTrail select_block_pivots(ConstMatrixView y, Index count, FlopCounter* flops = nullptr);

/// Moves the sketch past a finished panel of width nb = u.cols() that started
/// at sk.col_offset:
///   1. applies `iteration_trail` (the column swaps of this step, relative to
///      col_offset) to the trailing columns of Y;
///   2. G := G (I - U T^{-1} U^T) on the rows the panel touched;
///   3. Y2 := Y2 - G1 R12 with the updated G1, which equals
///      Y2 - (G1 - (G1 U11 + G2 U21) T^{-1} U11^T) R12;
///   4. advances col_offset by nb.
/// `u` is the panel's (m - col_offset) x nb block of Householder vectors,
/// `r12` the nb x (n - col_offset - nb) block of R to its right.
void downdate_sketch(Sketch& sk, ConstMatrixView u, ConstMatrixView t, ConstMatrixView r12,
                     const PivotTrail& iteration_trail, FlopCounter* flops = nullptr);

enum class SketchMode {
  kBasic,     // redraw G and recompute Y = G A22 every step
  kDowndate,  // keep one sketch and downdate it across steps
};

struct HqrrpOptions {
  Index block_size = 64;
  Index oversampling = kDefaultOversampling;
  SketchMode mode = SketchMode::kDowndate;
};

/// State visible at the head of every blocked step of hqrrp_blk.
struct HqrrpStepView {
  ConstMatrixView a;       // full working matrix (packed so far)
  const Sketch* sketch;    // null in basic mode
  Index col_offset;        // first unfinished column
};
using HqrrpObserver = std::function<void(const HqrrpStepView&)>;

/// Householder QR with randomized block column pivoting. Each step picks
/// min(b, remaining) pivot columns from the sketch, moves them to the front
/// of the trailing matrix, factors that panel with classical pivoting
/// restricted to the panel, and applies its UT transform to the remaining
/// columns. `observer`, when set, is called at every step head.
QRFactors hqrrp_blk(Matrix a, const HqrrpOptions& options, Rng& rng,
                    FlopCounter* flops = nullptr, const HqrrpObserver& observer = {});

}  // namespace hqrrp
