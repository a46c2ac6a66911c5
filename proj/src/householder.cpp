#include "hqrrp/householder.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "hqrrp/kernels.hpp"

namespace hqrrp {

double housev_inplace(std::span<double> x) {
  if (x.empty()) throw std::invalid_argument("housev: empty vector");
  const double norm_x = norm2(x);
  auto tail = x.subspan(1);
  if (norm_x == 0.0) {
    std::ranges::fill(tail, 0.0);
    x[0] = 0.0;
    return 0.5;
  }
  const double chi = x[0];
  const double rho = chi >= 0.0 ? -norm_x : norm_x;
  const double nu = chi - rho;  // same sign as chi, no cancellation
  for (double& v : tail) v /= nu;
  const double tail_norm = norm2(tail);
  x[0] = rho;
  return 0.5 * (1.0 + tail_norm * tail_norm);
}

Reflector housev(std::span<const double> x) {
  if (x.empty()) throw std::invalid_argument("housev: empty vector");
  std::vector<double> work(x.begin(), x.end());
  Reflector h;
  h.tau = housev_inplace(work);
  h.rho = work[0];
  h.u_tail.assign(work.begin() + 1, work.end());
  return h;
}

std::vector<double> hqr_unb_formT(MatrixView a, MatrixView t, FlopCounter* flops) {
  const Index m = a.rows(), n = a.cols();
  const Index steps = std::min(m, n);
  const bool want_t = !t.empty();
  if (want_t && (t.rows() != steps || t.cols() != steps))
    throw std::invalid_argument("hqr_unb_formT: T must be steps x steps");

  std::vector<double> taus(static_cast<std::size_t>(steps));
  std::vector<double> w(static_cast<std::size_t>(n));
  for (Index i = 0; i < steps; ++i) {
    const double tau = housev_inplace(a.block(i, i, m - i, 1).col(0));
    taus[static_cast<std::size_t>(i)] = tau;
    const auto u21 = a.block(i + 1, i, m - i - 1, 1).col(0);

    // [a12^T; A22] := H(u) [a12^T; A22]
    const Index nt = n - i - 1;
    if (nt > 0) {
      auto a12 = a.block(i, i + 1, 1, nt);
      auto a22 = a.block(i + 1, i + 1, m - i - 1, nt);
      std::span<double> wrow(w.data(), static_cast<std::size_t>(nt));
      kernels::gemv(Op::kTrans, 1.0, a22, u21, 0.0, wrow, flops);
      for (Index j = 0; j < nt; ++j) {
        wrow[static_cast<std::size_t>(j)] = (wrow[static_cast<std::size_t>(j)] + a12(0, j)) / tau;
        a12(0, j) -= wrow[static_cast<std::size_t>(j)];
      }
      kernels::ger(-1.0, u21, wrow, a22, flops);
    }

    if (want_t) {
      // t01 = U(:, 0:i)^T u_i = a10 + U20^T u21
      auto t01 = t.block(0, i, i, 1).col(0);
      kernels::gemv(Op::kTrans, 1.0, a.block(i + 1, 0, m - i - 1, i), u21, 0.0, t01, flops);
      for (Index j = 0; j < i; ++j) t01[static_cast<std::size_t>(j)] += a(i, j);
      t(i, i) = tau;
      for (Index r = i + 1; r < steps; ++r) t(r, i) = 0.0;
    }
  }
  return taus;
}

Matrix form_t(ConstMatrixView u, std::span<const double> taus, FlopCounter* flops) {
  const Index k = u.cols();
  if (u.rows() < k || static_cast<Index>(taus.size()) != k)
    throw std::invalid_argument("form_t: dimension mismatch");
  Matrix t(k, k);
  // U^T U restricted to the strict upper triangle; column i needs u_j^T u_i, j < i.
  for (Index i = 0; i < k; ++i) {
    if (i > 0) {
      auto t01 = t.block(0, i, i, 1).col(0);
      kernels::gemv(Op::kTrans, 1.0, u.block(i + 1, 0, u.rows() - i - 1, i),
                    u.block(i + 1, i, u.rows() - i - 1, 1).col(0), 0.0, t01, flops);
      for (Index j = 0; j < i; ++j) t01[static_cast<std::size_t>(j)] += u(i, j);
    }
    t(i, i) = taus[static_cast<std::size_t>(i)];
  }
  return t;
}

namespace {

void check_block(ConstMatrixView u, ConstMatrixView t, ConstMatrixView b, const char* who) {
  if (t.rows() != u.cols() || t.cols() != u.cols() || b.rows() != u.rows() || u.rows() < u.cols())
    throw std::invalid_argument(std::string(who) + ": dimension mismatch");
}

}  // namespace

void apply_block_qt(ConstMatrixView u, ConstMatrixView t, MatrixView b, FlopCounter* flops) {
  check_block(u, t, b, "apply_block_qt");
  if (u.cols() == 0 || b.cols() == 0) return;
  Matrix w(u.cols(), b.cols());
  kernels::trapezoid_t_mul(u, b, w, flops);
  kernels::trsm_upper_left(Op::kTrans, t, w, flops);
  kernels::trapezoid_mul_sub(u, w, b, flops);
}

void apply_block_q(ConstMatrixView u, ConstMatrixView t, MatrixView b, FlopCounter* flops) {
  check_block(u, t, b, "apply_block_q");
  if (u.cols() == 0 || b.cols() == 0) return;
  Matrix w(u.cols(), b.cols());
  kernels::trapezoid_t_mul(u, b, w, flops);
  kernels::trsm_upper_left(Op::kNoTrans, t, w, flops);
  kernels::trapezoid_mul_sub(u, w, b, flops);
}

QRFactors hqr_unb(Matrix a, FlopCounter* flops) {
  QRFactors f;
  const Index steps = std::min(a.rows(), a.cols());
  Matrix t(steps, steps);
  f.taus = hqr_unb_formT(a, t, flops);
  f.packed = std::move(a);
  if (steps > 0) {
    f.t_blocks.push_back(std::move(t));
    f.block_starts.push_back(0);
  }
  return f;
}

QRFactors hqr_blk(Matrix a, Index block_size, FlopCounter* flops) {
  if (block_size < 1) throw std::invalid_argument("hqr_blk: block size must be >= 1");
  const Index m = a.rows(), n = a.cols(), steps = std::min(m, n);
  QRFactors f;
  f.taus.reserve(static_cast<std::size_t>(steps));
  for (Index k = 0; k < steps; k += block_size) {
    const Index nb = std::min(block_size, steps - k);
    auto panel = a.block(k, k, m - k, nb);
    Matrix t(nb, nb);
    const auto taus = hqr_unb_formT(panel, t, flops);
    f.taus.insert(f.taus.end(), taus.begin(), taus.end());
    if (k + nb < n) apply_block_qt(panel, t, a.block(k, k + nb, m - k, n - k - nb), flops);
    f.t_blocks.push_back(std::move(t));
    f.block_starts.push_back(k);
  }
  f.packed = std::move(a);
  return f;
}

Matrix QRFactors::r() const {
  const Index k = steps();
  Matrix r(k, cols());
  for (Index j = 0; j < cols(); ++j)
    for (Index i = 0; i <= std::min(j, k - 1); ++i) r(i, j) = packed(i, j);
  return r;
}

Matrix form_q(const QRFactors& f, Index k) {
  const Index m = f.rows();
  if (k < 0 || k > m) throw std::invalid_argument("form_q: k must lie in [0, rows]");
  Matrix q = Matrix::identity(m, k);
  if (k == 0) return q;
  for (auto blk = static_cast<Index>(f.t_blocks.size()) - 1; blk >= 0; --blk) {
    const Index start = f.block_starts[static_cast<std::size_t>(blk)];
    const Matrix& t = f.t_blocks[static_cast<std::size_t>(blk)];
    const Index nb = t.rows();
    apply_block_q(f.packed.block(start, start, m - start, nb), t, q.block(start, 0, m - start, k));
  }
  return q;
}

Matrix reconstruct(const QRFactors& f) {
  const Matrix q = form_q(f, f.steps());
  return matmul(q, f.r());
}

}  // namespace hqrrp
