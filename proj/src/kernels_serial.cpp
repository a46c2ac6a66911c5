// Reference loop nests. Each routine evaluates its defining formula entry by
// entry; they are deliberately free of blocking and threading.

#include <stdexcept>
#include <vector>

#include "hqrrp/kernels.hpp"

namespace hqrrp::kernels::serial {

namespace {

double op_at(Op t, ConstMatrixView a, Index i, Index j) {
  return t == Op::kNoTrans ? a(i, j) : a(j, i);
}

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

// Explicit value of a unit lower trapezoid at (i, j).
double trap_at(ConstMatrixView u, Index i, Index j) {
  if (i == j) return 1.0;
  return i > j ? u(i, j) : 0.0;
}

}  // namespace

void gemm(Op trans_a, Op trans_b, double alpha, ConstMatrixView a, ConstMatrixView b, double beta,
          MatrixView c, FlopCounter* flops) {
  const Index m = trans_a == Op::kNoTrans ? a.rows() : a.cols();
  const Index k = trans_a == Op::kNoTrans ? a.cols() : a.rows();
  const Index kb = trans_b == Op::kNoTrans ? b.rows() : b.cols();
  const Index n = trans_b == Op::kNoTrans ? b.cols() : b.rows();
  require(kb == k && c.rows() == m && c.cols() == n, "serial::gemm: dimension mismatch");
  count_flops(flops, detail::gemm_flops(m, n, k));
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < n; ++j) {
      double sum = 0.0;
      for (Index l = 0; l < k; ++l) sum += op_at(trans_a, a, i, l) * op_at(trans_b, b, l, j);
      c(i, j) = (beta == 0.0 ? 0.0 : beta * c(i, j)) + alpha * sum;
    }
  }
}

void gemv(Op trans, double alpha, ConstMatrixView a, std::span<const double> x, double beta,
          std::span<double> y, FlopCounter* flops) {
  const Index m = trans == Op::kNoTrans ? a.rows() : a.cols();
  const Index n = trans == Op::kNoTrans ? a.cols() : a.rows();
  require(static_cast<Index>(x.size()) == n && static_cast<Index>(y.size()) == m,
          "serial::gemv: dimension mismatch");
  count_flops(flops, detail::gemm_flops(m, 1, n));
  for (Index i = 0; i < m; ++i) {
    double sum = 0.0;
    for (Index l = 0; l < n; ++l) sum += op_at(trans, a, i, l) * x[static_cast<std::size_t>(l)];
    auto& yi = y[static_cast<std::size_t>(i)];
    yi = (beta == 0.0 ? 0.0 : beta * yi) + alpha * sum;
  }
}

void ger(double alpha, std::span<const double> x, std::span<const double> y, MatrixView a,
         FlopCounter* flops) {
  require(static_cast<Index>(x.size()) == a.rows() && static_cast<Index>(y.size()) == a.cols(),
          "serial::ger: dimension mismatch");
  count_flops(flops, detail::gemm_flops(a.rows(), a.cols(), 1));
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      a(i, j) += alpha * x[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(j)];
}

void trsm_upper_left(Op trans, ConstMatrixView t, MatrixView b, FlopCounter* flops) {
  const Index k = t.rows();
  require(t.cols() == k && b.rows() == k, "serial::trsm_upper_left: dimension mismatch");
  count_flops(flops, detail::trsm_flops(k, b.cols()));
  for (Index c = 0; c < b.cols(); ++c) {
    if (trans == Op::kNoTrans) {
      for (Index i = k - 1; i >= 0; --i) {
        double s = b(i, c);
        for (Index l = i + 1; l < k; ++l) s -= t(i, l) * b(l, c);
        b(i, c) = s / t(i, i);
      }
    } else {
      for (Index i = 0; i < k; ++i) {
        double s = b(i, c);
        for (Index l = 0; l < i; ++l) s -= t(l, i) * b(l, c);
        b(i, c) = s / t(i, i);
      }
    }
  }
}

void trsm_upper_right(ConstMatrixView t, MatrixView b, FlopCounter* flops) {
  const Index k = t.rows();
  require(t.cols() == k && b.cols() == k, "serial::trsm_upper_right: dimension mismatch");
  count_flops(flops, detail::trsm_flops(k, b.rows()));
  for (Index r = 0; r < b.rows(); ++r) {
    for (Index j = 0; j < k; ++j) {
      double s = b(r, j);
      for (Index l = 0; l < j; ++l) s -= b(r, l) * t(l, j);
      b(r, j) = s / t(j, j);
    }
  }
}

void trapezoid_t_mul(ConstMatrixView u, ConstMatrixView b, MatrixView w, FlopCounter* flops) {
  const Index m = u.rows(), k = u.cols();
  require(m >= k && b.rows() == m && w.rows() == k && w.cols() == b.cols(),
          "serial::trapezoid_t_mul: dimension mismatch");
  count_flops(flops, detail::trapezoid_flops(m, k, b.cols()));
  for (Index j = 0; j < k; ++j) {
    for (Index c = 0; c < b.cols(); ++c) {
      double s = 0.0;
      for (Index i = 0; i < m; ++i) s += trap_at(u, i, j) * b(i, c);
      w(j, c) = s;
    }
  }
}

void trapezoid_mul_sub(ConstMatrixView u, ConstMatrixView w, MatrixView b, FlopCounter* flops) {
  const Index m = u.rows(), k = u.cols();
  require(m >= k && b.rows() == m && w.rows() == k && w.cols() == b.cols(),
          "serial::trapezoid_mul_sub: dimension mismatch");
  count_flops(flops, detail::trapezoid_flops(m, k, b.cols()));
  for (Index i = 0; i < m; ++i) {
    for (Index c = 0; c < b.cols(); ++c) {
      double s = 0.0;
      for (Index j = 0; j < k; ++j) s += trap_at(u, i, j) * w(j, c);
      b(i, c) -= s;
    }
  }
}

void mul_trapezoid(ConstMatrixView g, ConstMatrixView u, MatrixView x, FlopCounter* flops) {
  const Index m = u.rows(), k = u.cols();
  require(m >= k && g.cols() == m && x.rows() == g.rows() && x.cols() == k,
          "serial::mul_trapezoid: dimension mismatch");
  count_flops(flops, detail::trapezoid_flops(m, k, g.rows()));
  for (Index r = 0; r < g.rows(); ++r) {
    for (Index j = 0; j < k; ++j) {
      double s = 0.0;
      for (Index i = 0; i < m; ++i) s += g(r, i) * trap_at(u, i, j);
      x(r, j) = s;
    }
  }
}

void sub_mul_trapezoid_t(ConstMatrixView x, ConstMatrixView u, MatrixView g, FlopCounter* flops) {
  const Index m = u.rows(), k = u.cols();
  require(m >= k && g.cols() == m && x.rows() == g.rows() && x.cols() == k,
          "serial::sub_mul_trapezoid_t: dimension mismatch");
  count_flops(flops, detail::trapezoid_flops(m, k, g.rows()));
  for (Index r = 0; r < g.rows(); ++r) {
    for (Index i = 0; i < m; ++i) {
      double s = 0.0;
      for (Index j = 0; j < k; ++j) s += x(r, j) * trap_at(u, i, j);
      g(r, i) -= s;
    }
  }
}

}  // namespace hqrrp::kernels::serial
