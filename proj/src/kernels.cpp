#include "hqrrp/kernels.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hqrrp {

namespace kernels {

namespace detail {

double gemm_flops(Index m, Index n, Index k) {
  return 2.0 * static_cast<double>(m) * static_cast<double>(n) * static_cast<double>(k);
}

double trsm_flops(Index order, Index rhs) {
  return static_cast<double>(order) * static_cast<double>(order) * static_cast<double>(rhs);
}

double trapezoid_flops(Index m, Index k, Index n) {
  const double md = static_cast<double>(m), kd = static_cast<double>(k);
  return (2.0 * md * kd - kd * kd) * static_cast<double>(n);
}

}  // namespace detail

namespace {

// Below this many multiply-adds a kernel runs on the calling thread.
constexpr double kParallelThreshold = 32768.0;

Index op_rows(Op t, ConstMatrixView a) { return t == Op::kNoTrans ? a.rows() : a.cols(); }
Index op_cols(Op t, ConstMatrixView a) { return t == Op::kNoTrans ? a.cols() : a.rows(); }

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

void check_trapezoid(ConstMatrixView u) {
  require(u.rows() >= u.cols(), "unit lower trapezoid needs rows >= cols");
}

}  // namespace

void gemm(Op trans_a, Op trans_b, double alpha, ConstMatrixView a, ConstMatrixView b, double beta,
          MatrixView c, FlopCounter* flops) {
  const Index m = op_rows(trans_a, a), k = op_cols(trans_a, a), n = op_cols(trans_b, b);
  require(op_rows(trans_b, b) == k && c.rows() == m && c.cols() == n, "gemm: dimension mismatch");
  count_flops(flops, detail::gemm_flops(m, n, k));
  const double work = static_cast<double>(m) * static_cast<double>(n) * static_cast<double>(k);

#pragma omp parallel if (work > kParallelThreshold)
  {
    std::vector<double> bcol(static_cast<std::size_t>(k));
#pragma omp for schedule(static)
    for (Index j = 0; j < n; ++j) {
      for (Index l = 0; l < k; ++l)
        bcol[static_cast<std::size_t>(l)] = trans_b == Op::kNoTrans ? b(l, j) : b(j, l);
      double* cj = c.col(j).data();
      if (trans_a == Op::kNoTrans) {
        if (beta == 0.0) {
          std::fill(cj, cj + m, 0.0);
        } else if (beta != 1.0) {
          for (Index i = 0; i < m; ++i) cj[i] *= beta;
        }
        for (Index l = 0; l < k; ++l) {
          const double s = alpha * bcol[static_cast<std::size_t>(l)];
          if (s == 0.0) continue;
          const double* al = a.col(l).data();
          for (Index i = 0; i < m; ++i) cj[i] += s * al[i];
        }
      } else {
        for (Index i = 0; i < m; ++i) {
          const double* ai = a.col(i).data();
          double sum = 0.0;
          for (Index l = 0; l < k; ++l) sum += ai[l] * bcol[static_cast<std::size_t>(l)];
          cj[i] = (beta == 0.0 ? 0.0 : beta * cj[i]) + alpha * sum;
        }
      }
    }
  }
}

void gemv(Op trans, double alpha, ConstMatrixView a, std::span<const double> x, double beta,
          std::span<double> y, FlopCounter* flops) {
  const Index m = op_rows(trans, a), n = op_cols(trans, a);
  require(static_cast<Index>(x.size()) == n && static_cast<Index>(y.size()) == m,
          "gemv: dimension mismatch");
  count_flops(flops, detail::gemm_flops(m, 1, n));
  const double work = static_cast<double>(m) * static_cast<double>(n);

  if (trans == Op::kTrans) {
#pragma omp parallel for schedule(static) if (work > kParallelThreshold)
    for (Index i = 0; i < m; ++i) {
      const double* ai = a.col(i).data();
      double sum = 0.0;
      for (Index l = 0; l < n; ++l) sum += ai[l] * x[static_cast<std::size_t>(l)];
      y[static_cast<std::size_t>(i)] =
          (beta == 0.0 ? 0.0 : beta * y[static_cast<std::size_t>(i)]) + alpha * sum;
    }
    return;
  }

  // Each thread owns a contiguous row range and sweeps all columns over it.
#pragma omp parallel if (work > kParallelThreshold)
  {
    Index lo = 0, hi = m;
#ifdef _OPENMP
    const Index nt = omp_get_num_threads(), id = omp_get_thread_num();
    const Index chunk = (m + nt - 1) / nt;
    lo = std::min(m, id * chunk);
    hi = std::min(m, lo + chunk);
#endif
    double* yp = y.data();
    for (Index i = lo; i < hi; ++i) yp[i] = beta == 0.0 ? 0.0 : beta * yp[i];
    for (Index l = 0; l < n; ++l) {
      const double s = alpha * x[static_cast<std::size_t>(l)];
      if (s == 0.0) continue;
      const double* al = a.col(l).data();
      for (Index i = lo; i < hi; ++i) yp[i] += s * al[i];
    }
  }
}

void ger(double alpha, std::span<const double> x, std::span<const double> y, MatrixView a,
         FlopCounter* flops) {
  const Index m = a.rows(), n = a.cols();
  require(static_cast<Index>(x.size()) == m && static_cast<Index>(y.size()) == n,
          "ger: dimension mismatch");
  count_flops(flops, detail::gemm_flops(m, n, 1));
  const double work = static_cast<double>(m) * static_cast<double>(n);
#pragma omp parallel for schedule(static) if (work > kParallelThreshold)
  for (Index j = 0; j < n; ++j) {
    const double s = alpha * y[static_cast<std::size_t>(j)];
    if (s == 0.0) continue;
    double* aj = a.col(j).data();
    for (Index i = 0; i < m; ++i) aj[i] += s * x[static_cast<std::size_t>(i)];
  }
}

void trsm_upper_left(Op trans, ConstMatrixView t, MatrixView b, FlopCounter* flops) {
  const Index k = t.rows();
  require(t.cols() == k && b.rows() == k, "trsm_upper_left: dimension mismatch");
  count_flops(flops, detail::trsm_flops(k, b.cols()));
  const double work = static_cast<double>(k) * static_cast<double>(k) * static_cast<double>(b.cols());
#pragma omp parallel for schedule(static) if (work > kParallelThreshold)
  for (Index c = 0; c < b.cols(); ++c) {
    double* x = b.col(c).data();
    if (trans == Op::kNoTrans) {
      for (Index j = k - 1; j >= 0; --j) {
        x[j] /= t(j, j);
        const double xj = x[j];
        const double* tj = t.col(j).data();
        for (Index i = 0; i < j; ++i) x[i] -= xj * tj[i];
      }
    } else {
      for (Index j = 0; j < k; ++j) {
        const double* tj = t.col(j).data();
        double s = x[j];
        for (Index i = 0; i < j; ++i) s -= tj[i] * x[i];
        x[j] = s / tj[j];
      }
    }
  }
}

void trsm_upper_right(ConstMatrixView t, MatrixView b, FlopCounter* flops) {
  const Index k = t.rows(), m = b.rows();
  require(t.cols() == k && b.cols() == k, "trsm_upper_right: dimension mismatch");
  count_flops(flops, detail::trsm_flops(k, m));
  const double work = static_cast<double>(k) * static_cast<double>(k) * static_cast<double>(m);
#pragma omp parallel if (work > kParallelThreshold)
  {
    Index lo = 0, hi = m;
#ifdef _OPENMP
    const Index nt = omp_get_num_threads(), id = omp_get_thread_num();
    const Index chunk = (m + nt - 1) / nt;
    lo = std::min(m, id * chunk);
    hi = std::min(m, lo + chunk);
#endif
    for (Index j = 0; j < k; ++j) {
      double* bj = b.col(j).data();
      for (Index l = 0; l < j; ++l) {
        const double tlj = t(l, j);
        if (tlj == 0.0) continue;
        const double* bl = b.col(l).data();
        for (Index i = lo; i < hi; ++i) bj[i] -= bl[i] * tlj;
      }
      const double d = t(j, j);
      for (Index i = lo; i < hi; ++i) bj[i] /= d;
    }
  }
}

void trapezoid_t_mul(ConstMatrixView u, ConstMatrixView b, MatrixView w, FlopCounter* flops) {
  check_trapezoid(u);
  const Index m = u.rows(), k = u.cols(), n = b.cols();
  require(b.rows() == m && w.rows() == k && w.cols() == n, "trapezoid_t_mul: dimension mismatch");
  count_flops(flops, detail::trapezoid_flops(m, k, n));
  const double work = static_cast<double>(m) * static_cast<double>(k) * static_cast<double>(n);
#pragma omp parallel for schedule(static) if (work > kParallelThreshold)
  for (Index c = 0; c < n; ++c) {
    const double* bc = b.col(c).data();
    for (Index j = 0; j < k; ++j) {
      const double* uj = u.col(j).data();
      double s = bc[j];
      for (Index i = j + 1; i < m; ++i) s += uj[i] * bc[i];
      w(j, c) = s;
    }
  }
}

void trapezoid_mul_sub(ConstMatrixView u, ConstMatrixView w, MatrixView b, FlopCounter* flops) {
  check_trapezoid(u);
  const Index m = u.rows(), k = u.cols(), n = b.cols();
  require(b.rows() == m && w.rows() == k && w.cols() == n, "trapezoid_mul_sub: dimension mismatch");
  count_flops(flops, detail::trapezoid_flops(m, k, n));
  const double work = static_cast<double>(m) * static_cast<double>(k) * static_cast<double>(n);
#pragma omp parallel for schedule(static) if (work > kParallelThreshold)
  for (Index c = 0; c < n; ++c) {
    double* bc = b.col(c).data();
    for (Index j = 0; j < k; ++j) {
      const double wjc = w(j, c);
      if (wjc == 0.0) continue;
      const double* uj = u.col(j).data();
      bc[j] -= wjc;
      for (Index i = j + 1; i < m; ++i) bc[i] -= wjc * uj[i];
    }
  }
}

void mul_trapezoid(ConstMatrixView g, ConstMatrixView u, MatrixView x, FlopCounter* flops) {
  check_trapezoid(u);
  const Index q = g.rows(), m = u.rows(), k = u.cols();
  require(g.cols() == m && x.rows() == q && x.cols() == k, "mul_trapezoid: dimension mismatch");
  count_flops(flops, detail::trapezoid_flops(m, k, q));
  const double work = static_cast<double>(m) * static_cast<double>(k) * static_cast<double>(q);
#pragma omp parallel for schedule(static) if (work > kParallelThreshold)
  for (Index j = 0; j < k; ++j) {
    double* xj = x.col(j).data();
    const double* gj = g.col(j).data();
    for (Index r = 0; r < q; ++r) xj[r] = gj[r];
    const double* uj = u.col(j).data();
    for (Index i = j + 1; i < m; ++i) {
      const double s = uj[i];
      if (s == 0.0) continue;
      const double* gi = g.col(i).data();
      for (Index r = 0; r < q; ++r) xj[r] += s * gi[r];
    }
  }
}

void sub_mul_trapezoid_t(ConstMatrixView x, ConstMatrixView u, MatrixView g, FlopCounter* flops) {
  check_trapezoid(u);
  const Index q = g.rows(), m = u.rows(), k = u.cols();
  require(g.cols() == m && x.rows() == q && x.cols() == k,
          "sub_mul_trapezoid_t: dimension mismatch");
  count_flops(flops, detail::trapezoid_flops(m, k, q));
  const double work = static_cast<double>(m) * static_cast<double>(k) * static_cast<double>(q);
#pragma omp parallel for schedule(static) if (work > kParallelThreshold)
  for (Index i = 0; i < m; ++i) {
    double* gi = g.col(i).data();
    const Index last = std::min(i, k - 1);
    for (Index j = 0; j <= last; ++j) {
      const double s = j == i ? 1.0 : u(i, j);
      if (s == 0.0) continue;
      const double* xj = x.col(j).data();
      for (Index r = 0; r < q; ++r) gi[r] -= s * xj[r];
    }
  }
}

}  // namespace kernels

Matrix matmul(ConstMatrixView a, ConstMatrixView b, Op trans_a, Op trans_b) {
  const Index m = trans_a == Op::kNoTrans ? a.rows() : a.cols();
  const Index n = trans_b == Op::kNoTrans ? b.cols() : b.rows();
  Matrix c(m, n);
  kernels::gemm(trans_a, trans_b, 1.0, a, b, 0.0, c);
  return c;
}

}  // namespace hqrrp
