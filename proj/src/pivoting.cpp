#include "hqrrp/pivoting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "hqrrp/kernels.hpp"

namespace hqrrp {

namespace {

std::size_t at(Index i) { return static_cast<std::size_t>(i); }

double squared_norm(std::span<const double> x) {
  const double n = norm2(x);
  return n * n;
}

void swap_columns(MatrixView a, Index i, Index j) {
  if (i == j || a.rows() == 0) return;
  std::swap_ranges(a.col(i).begin(), a.col(i).end(), a.col(j).begin());
}

// Copies row i of `a` (columns [c0, c0 + len)) into `out`.
void gather_row(ConstMatrixView a, Index i, Index c0, Index len, std::vector<double>& out) {
  out.resize(at(len));
  for (Index j = 0; j < len; ++j) out[at(j)] = a(i, c0 + j);
}

}  // namespace

void WeightVector::swap(Index i, Index j) {
  std::swap(v[at(i)], v[at(j)]);
  std::swap(v_orig[at(i)], v_orig[at(j)]);
}

WeightVector WeightVector::tail(Index offset) const {
  WeightVector t;
  t.v.assign(v.begin() + offset, v.end());
  t.v_orig.assign(v_orig.begin() + offset, v_orig.end());
  return t;
}

void WeightVector::assign_tail(Index offset, const WeightVector& t) {
  if (offset + t.size() != size()) throw std::invalid_argument("assign_tail: size mismatch");
  std::ranges::copy(t.v, v.begin() + offset);
  std::ranges::copy(t.v_orig, v_orig.begin() + offset);
}

WeightVector compute_weights(ConstMatrixView a, FlopCounter* flops) {
  count_flops(flops, 2.0 * static_cast<double>(a.rows()) * static_cast<double>(a.cols()));
  WeightVector w;
  w.v.resize(at(a.cols()));
  for (Index j = 0; j < a.cols(); ++j) w.v[at(j)] = squared_norm(a.col(j));
  w.v_orig = w.v;
  return w;
}

void downdate_weights(WeightVector& w, std::span<const double> r_row, Index offset,
                      const ColumnNormFn& recompute, FlopCounter* flops) {
  if (offset < 0 || offset + static_cast<Index>(r_row.size()) > w.size())
    throw std::invalid_argument("downdate_weights: length mismatch");
  count_flops(flops, 2.0 * static_cast<double>(r_row.size()));
  for (Index k = 0; k < static_cast<Index>(r_row.size()); ++k) {
    const Index j = offset + k;
    double& vj = w.v[at(j)];
    if (vj == 0.0) continue;
    const double r = r_row[at(k)];
    vj = std::max(0.0, vj - r * r);
    if (vj < kWeightRecomputeTol * w.v_orig[at(j)]) {
      if (recompute) {
        vj = recompute(j);
        w.v_orig[at(j)] = vj;
      }
    }
  }
}

Index determine_pivot(std::span<const double> v, Index offset) {
  if (offset < 0 || offset >= static_cast<Index>(v.size()))
    throw std::out_of_range("determine_pivot: offset outside weight vector");
  Index best = offset;
  for (Index j = offset + 1; j < static_cast<Index>(v.size()); ++j)
    if (v[at(j)] > v[at(best)]) best = j;
  return best;
}

namespace {

// Shared MGSP engine. `work` is overwritten with Q; when `r` is non-empty it
// receives R (steps x n). Returns the number of completed steps.
Index mgsp_engine(MatrixView work, MatrixView r, PivotTrail& trail, Index steps,
                  FlopCounter* flops) {
  const Index m = work.rows(), n = work.cols();
  WeightVector w = compute_weights(work, flops);
  const double vmax = w.v.empty() ? 0.0 : *std::ranges::max_element(w.v);
  const double stop = static_cast<double>(m) * std::numeric_limits<double>::epsilon() * vmax;
  const bool want_r = !r.empty();
  std::vector<double> row(at(n));

  Index i = 0;
  for (; i < steps; ++i) {
    const Index p = determine_pivot(w, i);
    if (w.v[at(p)] <= stop || vmax == 0.0) break;
    trail.push_back(p);
    swap_columns(work, i, p);
    if (want_r) swap_columns(r.block(0, 0, i, n), i, p);
    w.swap(i, p);

    auto qi = work.col(i);
    const double rho = norm2(qi);
    if (rho == 0.0) break;
    for (double& x : qi) x /= rho;
    if (want_r) r(i, i) = rho;

    const Index nt = n - i - 1;
    if (nt == 0) continue;
    std::span<double> r12(row.data(), at(nt));
    auto a2 = work.block(0, i + 1, m, nt);
    kernels::gemv(Op::kTrans, 1.0, a2, qi, 0.0, r12, flops);
    kernels::ger(-1.0, qi, r12, a2, flops);
    if (want_r)
      for (Index j = 0; j < nt; ++j) r(i, i + 1 + j) = r12[at(j)];
    downdate_weights(
        w, r12, i + 1, [&](Index j) { return squared_norm(work.col(j)); }, flops);
  }
  const Index done = i;
  for (; i < steps; ++i) {
    trail.push_back(i);
    if (i < n) std::ranges::fill(work.col(i), 0.0);
  }
  return done;
}

}  // namespace

MgspResult mgsp(ConstMatrixView a) {
  if (a.rows() < 1) throw std::invalid_argument("mgsp: matrix needs at least one row");
  const Index steps = std::min(a.rows(), a.cols());
  Matrix work(a);
  MgspResult res;
  res.r = Matrix(steps, a.cols());
  res.rank = mgsp_engine(work, res.r, res.trail, steps, nullptr);
  res.q = Matrix(work.block(0, 0, a.rows(), steps));
  return res;
}

PivotTrail mgsp_pivots(MatrixView work, Index steps, FlopCounter* flops) {
  if (steps > work.cols()) throw std::invalid_argument("mgsp_pivots: more steps than columns");
  PivotTrail trail;
  mgsp_engine(work, MatrixView(), trail, steps, flops);
  return trail;
}

std::vector<double> hqrp_unb_var1(MatrixView a, MatrixView t, PivotTrail& trail, WeightVector& v,
                                  Index steps, FlopCounter* flops) {
  const Index m = a.rows(), n = a.cols();
  if (steps < 0 || steps > std::min(m, n))
    throw std::invalid_argument("hqrp_unb_var1: steps exceed min(rows, cols)");
  if (v.size() != n) throw std::invalid_argument("hqrp_unb_var1: weight vector length mismatch");
  const bool want_t = !t.empty();
  if (want_t && (t.rows() != steps || t.cols() != steps))
    throw std::invalid_argument("hqrp_unb_var1: T must be steps x steps");

  std::vector<double> taus(at(steps));
  std::vector<double> w(at(n));
  for (Index i = 0; i < steps; ++i) {
    const Index p = determine_pivot(v, i);
    trail.push_back(p);
    swap_columns(a, i, p);
    v.swap(i, p);

    const double tau = housev_inplace(a.block(i, i, m - i, 1).col(0));
    taus[at(i)] = tau;
    const auto u21 = a.block(i + 1, i, m - i - 1, 1).col(0);

    const Index nt = n - i - 1;
    if (nt > 0) {
      auto a12 = a.block(i, i + 1, 1, nt);
      auto a22 = a.block(i + 1, i + 1, m - i - 1, nt);
      std::span<double> wrow(w.data(), at(nt));
      kernels::gemv(Op::kTrans, 1.0, a22, u21, 0.0, wrow, flops);
      for (Index j = 0; j < nt; ++j) {
        wrow[at(j)] = (wrow[at(j)] + a12(0, j)) / tau;
        a12(0, j) -= wrow[at(j)];
      }
      kernels::ger(-1.0, u21, wrow, a22, flops);
      std::vector<double> r_row;
      gather_row(a, i, i + 1, nt, r_row);
      downdate_weights(v, r_row, i + 1, [&](Index j) {
        return squared_norm(a.block(i + 1, j, m - i - 1, 1).col(0));
      }, flops);
    }

    if (want_t) {
      auto t01 = t.block(0, i, i, 1).col(0);
      kernels::gemv(Op::kTrans, 1.0, a.block(i + 1, 0, m - i - 1, i), u21, 0.0, t01, flops);
      for (Index j = 0; j < i; ++j) t01[at(j)] += a(i, j);
      t(i, i) = tau;
      for (Index r = i + 1; r < steps; ++r) t(r, i) = 0.0;
    }
  }
  return taus;
}

std::vector<double> hqrp_panel_var3(MatrixView a, MatrixView t, PivotTrail& trail, WeightVector& v,
                                    MatrixView w, Index steps, FlopCounter* flops) {
  const Index m = a.rows(), n = a.cols();
  if (steps < 0 || steps > std::min(m, n))
    throw std::invalid_argument("hqrp_panel_var3: steps exceed min(rows, cols)");
  if (v.size() != n) throw std::invalid_argument("hqrp_panel_var3: weight vector length mismatch");
  if (w.rows() < steps || w.cols() != n)
    throw std::invalid_argument("hqrp_panel_var3: W must be at least steps x n");
  const bool want_t = !t.empty();
  if (want_t && (t.rows() != steps || t.cols() != steps))
    throw std::invalid_argument("hqrp_panel_var3: T must be steps x steps");

  std::vector<double> taus(at(steps));
  std::vector<double> u_row, a_row(at(n)), z(at(n)), s(at(steps));
  std::vector<double> col(at(m));

  for (Index i = 0; i < steps; ++i) {
    const Index p = determine_pivot(v, i);
    trail.push_back(p);
    swap_columns(a, i, p);
    swap_columns(w.block(0, 0, i, n), i, p);
    v.swap(i, p);

    const Index nt = n - i - 1;
    const auto w0 = w.block(0, 0, i, n);  // rows of W computed so far

    // alpha11 and a21 catch up with the delayed updates: a(i:, i) -= U(i:, 0:i) w01
    kernels::gemv(Op::kNoTrans, -1.0, a.block(i, 0, m - i, i), w0.col(i), 1.0,
                  a.block(i, i, m - i, 1).col(0), flops);
    // a12^T -= u10^T W02
    gather_row(a, i, 0, i, u_row);
    std::span<double> a12(a_row.data(), at(nt));
    for (Index j = 0; j < nt; ++j) a12[at(j)] = a(i, i + 1 + j);
    if (nt > 0) kernels::gemv(Op::kTrans, -1.0, w0.block(0, i + 1, i, nt), u_row, 1.0, a12, flops);

    const double tau = housev_inplace(a.block(i, i, m - i, 1).col(0));
    taus[at(i)] = tau;
    const auto u21 = a.block(i + 1, i, m - i - 1, 1).col(0);

    // s = U20^T u21, reused by T and by the delayed trailing product.
    std::span<double> s0(s.data(), at(i));
    kernels::gemv(Op::kTrans, 1.0, a.block(i + 1, 0, m - i - 1, i), u21, 0.0, s0, flops);

    if (nt > 0) {
      // u21^T A22-tilde = u21^T A22-hat - (U20^T u21)^T W02
      std::span<double> zr(z.data(), at(nt));
      kernels::gemv(Op::kTrans, 1.0, a.block(i + 1, i + 1, m - i - 1, nt), u21, 0.0, zr, flops);
      kernels::gemv(Op::kTrans, -1.0, w0.block(0, i + 1, i, nt), s0, 1.0, zr, flops);
      for (Index j = 0; j < nt; ++j) {
        const double wij = (a12[at(j)] + zr[at(j)]) / tau;
        w(i, i + 1 + j) = wij;
        a12[at(j)] -= wij;
        a(i, i + 1 + j) = a12[at(j)];
      }
    }
    for (Index j = 0; j <= i; ++j) w(i, j) = 0.0;

    if (want_t) {
      for (Index j = 0; j < i; ++j) t(j, i) = s0[at(j)] + a(i, j);
      t(i, i) = tau;
      for (Index r = i + 1; r < steps; ++r) t(r, i) = 0.0;
    }

    if (nt > 0) {
      const auto u_done = a.block(i + 1, 0, m - i - 1, i + 1);
      const auto w_done = w.block(0, 0, i + 1, n);
      downdate_weights(v, a12, i + 1, [&](Index j) {
        // Current trailing column: A-hat(i+1:, j) - U(i+1:, 0:i+1) W(0:i+1, j)
        std::span<double> c(col.data(), at(m - i - 1));
        std::ranges::copy(a.block(i + 1, j, m - i - 1, 1).col(0), c.begin());
        kernels::gemv(Op::kNoTrans, -1.0, u_done, w_done.col(j), 1.0, c);
        return squared_norm(c);
      }, flops);
    }
  }
  return taus;
}

QRFactors hqrp_unb(Matrix a, FlopCounter* flops) {
  const Index steps = std::min(a.rows(), a.cols());
  QRFactors f;
  WeightVector v = compute_weights(a, flops);
  Matrix t(steps, steps);
  f.taus = hqrp_unb_var1(a, t, f.trail, v, steps, flops);
  f.packed = std::move(a);
  if (steps > 0) {
    f.t_blocks.push_back(std::move(t));
    f.block_starts.push_back(0);
  }
  return f;
}

QRFactors hqrp_blk(Matrix a, Index block_size, FlopCounter* flops) {
  if (block_size < 1) throw std::invalid_argument("hqrp_blk: block size must be >= 1");
  const Index m = a.rows(), n = a.cols(), steps = std::min(m, n);
  QRFactors f;
  WeightVector v = compute_weights(a, flops);
  Matrix w(std::min(block_size, std::max<Index>(steps, 1)), n);

  for (Index k = 0; k < steps; k += block_size) {
    const Index nb = std::min(block_size, steps - k);
    auto trailing = a.block(k, k, m - k, n - k);
    auto wk = w.block(0, 0, nb, n - k);
    WeightVector vk = v.tail(k);
    Matrix t(nb, nb);
    PivotTrail local;
    const auto taus = hqrp_panel_var3(trailing, t, local, vk, wk, nb, flops);
    v.assign_tail(k, vk);

    apply_pivot_trail(a.block(0, k, k, n - k), local);
    for (Index i = 0; i < local.size(); ++i) f.trail.push_back(k + local[i]);
    f.taus.insert(f.taus.end(), taus.begin(), taus.end());

    // A22 -= U21 W2
    if (k + nb < m && k + nb < n) {
      kernels::gemm(Op::kNoTrans, Op::kNoTrans, -1.0, a.block(k + nb, k, m - k - nb, nb),
                    wk.block(0, nb, nb, n - k - nb), 1.0,
                    a.block(k + nb, k + nb, m - k - nb, n - k - nb), flops);
    }
    f.t_blocks.push_back(std::move(t));
    f.block_starts.push_back(k);
  }
  f.packed = std::move(a);
  return f;
}

}  // namespace hqrrp
