#include <gtest/gtest.h>

#include <tuple>

#include "hqrrp/kernels.hpp"
#include "test_util.hpp"

namespace hqrrp {
namespace {

using testing::diff_norm;
using testing::random_matrix;

// Plain triple loop, independent of both kernel families.
Matrix naive_product(ConstMatrixView a, ConstMatrixView b, Op ta, Op tb) {
  const Index m = ta == Op::kNoTrans ? a.rows() : a.cols();
  const Index k = ta == Op::kNoTrans ? a.cols() : a.rows();
  const Index n = tb == Op::kNoTrans ? b.cols() : b.rows();
  Matrix c(m, n);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < n; ++j) {
      double s = 0.0;
      for (Index l = 0; l < k; ++l)
        s += (ta == Op::kNoTrans ? a(i, l) : a(l, i)) * (tb == Op::kNoTrans ? b(l, j) : b(j, l));
      c(i, j) = s;
    }
  return c;
}

// Dense copy of the unit lower trapezoid stored in u.
Matrix unit_trapezoid(ConstMatrixView u) {
  Matrix d(u.rows(), u.cols());
  for (Index j = 0; j < u.cols(); ++j) {
    d(j, j) = 1.0;
    for (Index i = j + 1; i < u.rows(); ++i) d(i, j) = u(i, j);
  }
  return d;
}

Matrix upper_well_conditioned(Index k, std::uint64_t seed) {
  Matrix t = random_matrix(k, k, seed);
  for (Index j = 0; j < k; ++j) {
    for (Index i = j + 1; i < k; ++i) t(i, j) = 0.0;
    t(j, j) = 2.0 + std::abs(t(j, j));
    for (Index i = 0; i < j; ++i) t(i, j) *= 0.3;
  }
  return t;
}

class GemmShapes : public ::testing::TestWithParam<std::tuple<Index, Index, Index>> {};

TEST_P(GemmShapes, ParallelMatchesSerialAndNaive) {
  const auto [m, n, k] = GetParam();
  for (const Op ta : {Op::kNoTrans, Op::kTrans}) {
    for (const Op tb : {Op::kNoTrans, Op::kTrans}) {
      const Matrix a = ta == Op::kNoTrans ? random_matrix(m, k, 1) : random_matrix(k, m, 1);
      const Matrix b = tb == Op::kNoTrans ? random_matrix(k, n, 2) : random_matrix(n, k, 2);
      Matrix c0 = random_matrix(m, n, 3);
      Matrix c1 = c0;
      FlopCounter f0, f1;
      kernels::gemm(ta, tb, -0.5, a, b, 2.0, c0, &f0);
      kernels::serial::gemm(ta, tb, -0.5, a, b, 2.0, c1, &f1);
      Matrix expect = random_matrix(m, n, 3);
      const Matrix ab = naive_product(a, b, ta, tb);
      for (Index j = 0; j < n; ++j)
        for (Index i = 0; i < m; ++i) expect(i, j) = 2.0 * expect(i, j) - 0.5 * ab(i, j);
      const double scale = 1.0 + frobenius_norm(expect);
      EXPECT_LE(diff_norm(c0, expect), 1e-13 * scale * static_cast<double>(k + 1));
      EXPECT_LE(diff_norm(c1, expect), 1e-13 * scale * static_cast<double>(k + 1));
      EXPECT_EQ(f0.count(), f1.count());
      EXPECT_EQ(f0.count(), static_cast<std::uint64_t>(2 * m * n * k));
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Kernels, GemmShapes,
                         ::testing::Values(std::make_tuple(1, 1, 1), std::make_tuple(7, 5, 3),
                                           std::make_tuple(64, 48, 40), std::make_tuple(130, 70, 90),
                                           std::make_tuple(3, 200, 5)));

TEST(Gemm, BetaZeroIgnoresNanInOutput) {
  const Matrix a = random_matrix(4, 3, 1), b = random_matrix(3, 2, 2);
  Matrix c(4, 2, std::nan(""));
  kernels::gemm(Op::kNoTrans, Op::kNoTrans, 1.0, a, b, 0.0, c);
  EXPECT_TRUE(all_finite(c));
}

TEST(Gemm, WorksOnStridedViews) {
  Matrix big = random_matrix(100, 100, 4);
  const Matrix a = random_matrix(30, 20, 5), b = random_matrix(20, 40, 6);
  auto c = big.block(10, 20, 30, 40);
  const Matrix before = big;
  kernels::gemm(Op::kNoTrans, Op::kNoTrans, 1.0, a, b, 0.0, c);
  EXPECT_LE(diff_norm(Matrix(c), naive_product(a, b, Op::kNoTrans, Op::kNoTrans)), 1e-12);
  EXPECT_EQ(big(9, 20), before(9, 20));
  EXPECT_EQ(big(40, 59), before(40, 59));
}

TEST(Gemv, BothTransposes) {
  for (const auto [m, n] : {std::pair<Index, Index>{9, 4}, {300, 250}}) {
    const Matrix a = random_matrix(m, n, 8);
    for (const Op t : {Op::kNoTrans, Op::kTrans}) {
      const Index lx = t == Op::kNoTrans ? n : m, ly = t == Op::kNoTrans ? m : n;
      const Matrix x = random_matrix(lx, 1, 9);
      Matrix y0 = random_matrix(ly, 1, 10), y1 = y0;
      kernels::gemv(t, 1.5, a, x.col(0), -1.0, y0.col(0));
      kernels::serial::gemv(t, 1.5, a, x.col(0), -1.0, y1.col(0));
      Matrix expect = naive_product(a, x, t, Op::kNoTrans);
      const Matrix y = random_matrix(ly, 1, 10);
      for (Index i = 0; i < ly; ++i) expect(i, 0) = 1.5 * expect(i, 0) - y(i, 0);
      EXPECT_LE(diff_norm(y0, expect), 1e-12 * static_cast<double>(m));
      EXPECT_LE(diff_norm(y1, expect), 1e-12 * static_cast<double>(m));
    }
  }
}

TEST(Ger, RankOneUpdate) {
  for (const Index m : {Index{5}, Index{400}}) {
    const Matrix x = random_matrix(m, 1, 1), y = random_matrix(m / 2 + 1, 1, 2);
    Matrix a0 = random_matrix(m, m / 2 + 1, 3), a1 = a0, expect = a0;
    kernels::ger(-2.0, x.col(0), y.col(0), a0);
    kernels::serial::ger(-2.0, x.col(0), y.col(0), a1);
    for (Index j = 0; j < expect.cols(); ++j)
      for (Index i = 0; i < m; ++i) expect(i, j) -= 2.0 * x(i, 0) * y(j, 0);
    EXPECT_LE(diff_norm(a0, expect), 1e-13 * static_cast<double>(m));
    EXPECT_LE(diff_norm(a1, expect), 1e-13 * static_cast<double>(m));
  }
}

TEST(Trsm, LeftBothTransposesAndRight) {
  for (const Index k : {Index{1}, Index{8}, Index{64}}) {
    const Matrix t = upper_well_conditioned(k, 21);
    const Matrix b = random_matrix(k, 300, 22);
    for (const Op op : {Op::kNoTrans, Op::kTrans}) {
      Matrix x0 = b, x1 = b;
      kernels::trsm_upper_left(op, t, x0);
      kernels::serial::trsm_upper_left(op, t, x1);
      EXPECT_LE(diff_norm(naive_product(t, x0, op, Op::kNoTrans), b), 1e-12 * frobenius_norm(b));
      EXPECT_LE(diff_norm(x0, x1), 1e-12 * frobenius_norm(x1));
    }
    const Matrix br = random_matrix(300, k, 23);
    Matrix x0 = br, x1 = br;
    kernels::trsm_upper_right(t, x0);
    kernels::serial::trsm_upper_right(t, x1);
    EXPECT_LE(diff_norm(naive_product(x0, t, Op::kNoTrans, Op::kNoTrans), br),
              1e-12 * frobenius_norm(br));
    EXPECT_LE(diff_norm(x0, x1), 1e-12 * frobenius_norm(x1));
  }
}

TEST(Trapezoid, AllFourKernelsMatchDenseOracle) {
  for (const auto [m, k, n] :
       {std::tuple<Index, Index, Index>{6, 3, 4}, {5, 5, 2}, {300, 32, 200}}) {
    const Matrix u = random_matrix(m, k, 31);
    const Matrix ud = unit_trapezoid(u);
    const Matrix b = random_matrix(m, n, 32);
    const double tol = 1e-12 * static_cast<double>(m);

    Matrix w0(k, n), w1(k, n);
    FlopCounter f0, f1;
    kernels::trapezoid_t_mul(u, b, w0, &f0);
    kernels::serial::trapezoid_t_mul(u, b, w1, &f1);
    const Matrix w_expect = naive_product(ud, b, Op::kTrans, Op::kNoTrans);
    EXPECT_LE(diff_norm(w0, w_expect), tol * frobenius_norm(w_expect));
    EXPECT_LE(diff_norm(w1, w_expect), tol * frobenius_norm(w_expect));
    EXPECT_EQ(f0.count(), f1.count());

    Matrix b0 = b, b1 = b;
    kernels::trapezoid_mul_sub(u, w_expect, b0);
    kernels::serial::trapezoid_mul_sub(u, w_expect, b1);
    Matrix b_expect = b;
    const Matrix uw = naive_product(ud, w_expect, Op::kNoTrans, Op::kNoTrans);
    for (Index j = 0; j < n; ++j)
      for (Index i = 0; i < m; ++i) b_expect(i, j) -= uw(i, j);
    EXPECT_LE(diff_norm(b0, b_expect), tol * frobenius_norm(uw));
    EXPECT_LE(diff_norm(b1, b_expect), tol * frobenius_norm(uw));

    const Matrix g = random_matrix(n, m, 33);
    Matrix x0(n, k), x1(n, k);
    kernels::mul_trapezoid(g, u, x0);
    kernels::serial::mul_trapezoid(g, u, x1);
    const Matrix x_expect = naive_product(g, ud, Op::kNoTrans, Op::kNoTrans);
    EXPECT_LE(diff_norm(x0, x_expect), tol * frobenius_norm(x_expect));
    EXPECT_LE(diff_norm(x1, x_expect), tol * frobenius_norm(x_expect));

    Matrix g0 = g, g1 = g;
    kernels::sub_mul_trapezoid_t(x_expect, u, g0);
    kernels::serial::sub_mul_trapezoid_t(x_expect, u, g1);
    Matrix g_expect = g;
    const Matrix xu = naive_product(x_expect, ud, Op::kNoTrans, Op::kTrans);
    for (Index j = 0; j < m; ++j)
      for (Index i = 0; i < n; ++i) g_expect(i, j) -= xu(i, j);
    EXPECT_LE(diff_norm(g0, g_expect), tol * frobenius_norm(xu));
    EXPECT_LE(diff_norm(g1, g_expect), tol * frobenius_norm(xu));
  }
}

TEST(Trapezoid, IgnoresStoredUpperPart) {
  Matrix u = random_matrix(5, 3, 40);
  Matrix clean = u;
  for (Index j = 0; j < 3; ++j)
    for (Index i = 0; i <= j; ++i) clean(i, j) = 0.0;
  const Matrix b = random_matrix(5, 2, 41);
  Matrix w0(3, 2), w1(3, 2);
  kernels::trapezoid_t_mul(u, b, w0);
  kernels::trapezoid_t_mul(clean, b, w1);
  EXPECT_EQ(w0, w1);
}

TEST(Matmul, ReturnsProduct) {
  const Matrix a = Matrix::from_rows({{1, 2}, {3, 4}});
  EXPECT_EQ(matmul(a, a), Matrix::from_rows({{7, 10}, {15, 22}}));
  EXPECT_EQ(matmul(a, a, Op::kTrans), Matrix::from_rows({{10, 14}, {14, 20}}));
}

}  // namespace
}  // namespace hqrrp
