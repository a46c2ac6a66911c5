#include "hqrrp/randqr.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hqrrp/kernels.hpp"
#include "hqrrp/pivoting.hpp"

namespace hqrrp {

namespace {

// Applies a trail to a permutation vector the same way it is applied to columns.
void permute_index(std::vector<Index>& perm, const PivotTrail& trail, Index offset = 0) {
  for (Index i = 0; i < trail.size(); ++i)
    std::swap(perm[static_cast<std::size_t>(offset + i)],
              perm[static_cast<std::size_t>(offset + trail[i])]);
}

}  // namespace

Sketch build_sketch(Rng& rng, ConstMatrixView a, Index block_size, Index oversampling,
                    FlopCounter* flops) {
  if (block_size < 1) throw std::invalid_argument("build_sketch: block size must be >= 1");
  if (oversampling < 0) throw std::invalid_argument("build_sketch: oversampling must be >= 0");
  Sketch sk;
  sk.block_size = block_size;
  sk.oversampling = oversampling;
  sk.g = gaussian_matrix(rng, block_size + oversampling, a.rows());
  sk.y = Matrix(sk.g.rows(), a.cols());
  kernels::gemm(Op::kNoTrans, Op::kNoTrans, 1.0, sk.g, a, 0.0, sk.y, flops);
  return sk;
}

PivotTrail select_block_pivots(ConstMatrixView y, Index count, FlopCounter* flops) {
  if (count < 0 || count > y.cols())
    throw std::invalid_argument("select_block_pivots: more pivots requested than columns");
  Matrix work(y);
  return mgsp_pivots(work, count, flops);
}

void downdate_sketch(Sketch& sk, ConstMatrixView u, ConstMatrixView t, ConstMatrixView r12,
                     const PivotTrail& iteration_trail, FlopCounter* flops) {
  const Index k = sk.col_offset, nb = u.cols();
  const Index q = sk.g.rows(), m = sk.g.cols(), n = sk.y.cols();
  if (nb == 0) return;
  if (u.rows() != m - k || t.rows() != nb || t.cols() != nb || r12.rows() != nb ||
      r12.cols() != n - k - nb || sk.y.rows() != q)
    throw std::invalid_argument("downdate_sketch: panel does not conform with the sketch");

  apply_pivot_trail(sk.y.block(0, k, q, n - k), iteration_trail);

  auto g_active = sk.g.block(0, k, q, m - k);
  Matrix x(q, nb);
  kernels::mul_trapezoid(g_active, u, x, flops);
  kernels::trsm_upper_right(t, x, flops);
  kernels::sub_mul_trapezoid_t(x, u, g_active, flops);

  if (r12.cols() > 0) {
    kernels::gemm(Op::kNoTrans, Op::kNoTrans, -1.0, g_active.block(0, 0, q, nb), r12, 1.0,
                  sk.y.block(0, k + nb, q, n - k - nb), flops);
  }
  sk.col_offset += nb;
}

QRFactors hqrrp_blk(Matrix a, const HqrrpOptions& options, Rng& rng, FlopCounter* flops,
                    const HqrrpObserver& observer) {
  const Index b = options.block_size, p = options.oversampling;
  if (b < 1) throw std::invalid_argument("hqrrp_blk: block size must be >= 1");
  if (p < 0) throw std::invalid_argument("hqrrp_blk: oversampling must be >= 0");
  const Index m = a.rows(), n = a.cols(), steps = std::min(m, n);
  const bool downdate = options.mode == SketchMode::kDowndate;

  QRFactors f;
  f.taus.reserve(static_cast<std::size_t>(steps));
  std::vector<Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Index{0});

  Sketch sk;
  if (downdate && steps > 0) sk = build_sketch(rng, a, b, p, flops);

  for (Index k = 0; k < steps;) {
    const Index nb = std::min(b, steps - k);
    if (observer) observer({a, downdate ? &sk : nullptr, k});

    // local[j]: column of the step-head trailing matrix now at position j.
    std::vector<Index> local(static_cast<std::size_t>(n - k));
    std::iota(local.begin(), local.end(), Index{0});

    if (n - k > nb) {
      PivotTrail chosen;
      if (downdate) {
        chosen = select_block_pivots(sk.y.block(0, k, sk.y.rows(), n - k), nb, flops);
      } else {
        const Matrix g = gaussian_matrix(rng, b + p, m - k);
        Matrix y(g.rows(), n - k);
        kernels::gemm(Op::kNoTrans, Op::kNoTrans, 1.0, g, a.block(k, k, m - k, n - k), 0.0, y,
                      flops);
        chosen = select_block_pivots(y, nb, flops);
      }
      apply_pivot_trail(a.block(0, k, m, n - k), chosen);
      permute_index(local, chosen);
    }

    // Classical pivoting inside the panel orders the diagonal of this block.
    auto panel = a.block(k, k, m - k, nb);
    WeightVector vk = compute_weights(panel, flops);
    Matrix t(nb, nb);
    PivotTrail inner;
    const auto taus = hqrp_unb_var1(panel, t, inner, vk, nb, flops);
    apply_pivot_trail(a.block(0, k, k, nb), inner);
    permute_index(local, inner);

    if (k + nb < n) apply_block_qt(panel, t, a.block(k, k + nb, m - k, n - k - nb), flops);

    std::vector<Index> merged(local.size());
    for (std::size_t j = 0; j < local.size(); ++j)
      merged[j] = perm[static_cast<std::size_t>(k) + static_cast<std::size_t>(local[j])];
    std::ranges::copy(merged, perm.begin() + k);

    if (downdate && k + nb < steps) {
      downdate_sketch(sk, panel, t, a.block(k, k + nb, nb, n - k - nb),
                      PivotTrail::from_permutation(local), flops);
    }

    f.taus.insert(f.taus.end(), taus.begin(), taus.end());
    f.t_blocks.push_back(std::move(t));
    f.block_starts.push_back(k);
    k += nb;
  }

  f.trail = PivotTrail::from_permutation(perm);
  f.packed = std::move(a);
  return f;
}

}  // namespace hqrrp
