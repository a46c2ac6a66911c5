#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "hqrrp/householder.hpp"
#include "hqrrp/kernels.hpp"
#include "test_util.hpp"

namespace hqrrp {
namespace {

using testing::diff_norm;
using testing::explicit_reflector;
using testing::kEps;
using testing::panel_reflector;
using testing::random_matrix;

std::vector<double> apply_explicit(const Reflector& h, std::span<const double> x) {
  const Matrix hm = explicit_reflector(static_cast<Index>(x.size()), 0, h.u_tail, h.tau);
  Matrix xv(static_cast<Index>(x.size()), 1);
  std::ranges::copy(x, xv.col(0).begin());
  const Matrix y = matmul(hm, xv);
  return {y.col(0).begin(), y.col(0).end()};
}

TEST(Housev, ThreeFour) {
  const std::vector<double> x{3, 4};
  const Reflector h = housev(x);
  EXPECT_DOUBLE_EQ(h.rho, -5.0);
  ASSERT_EQ(h.u_tail.size(), 1u);
  EXPECT_DOUBLE_EQ(h.u_tail[0], 0.5);
  EXPECT_DOUBLE_EQ(h.tau, 0.625);
  const auto y = apply_explicit(h, x);
  EXPECT_NEAR(y[0], -5.0, 8 * kEps * 5);
  EXPECT_NEAR(y[1], 0.0, 8 * kEps * 5);
}

TEST(Housev, ScalarInput) {
  // u = [1], tau = u^T u / 2, so H = -1 and H x = rho.
  const std::vector<double> x{2.5};
  const Reflector h = housev(x);
  EXPECT_EQ(h.rho, -2.5);
  EXPECT_TRUE(h.u_tail.empty());
  EXPECT_EQ(h.tau, 0.5);
  EXPECT_EQ(apply_explicit(h, x)[0], -2.5);
}

TEST(Housev, LastComponentOnly) {
  for (const double c : {3.0, -7.0, 1e-300, 1e300}) {
    const std::vector<double> x{0, 0, 0, c};
    const Reflector h = housev(x);
    EXPECT_NEAR(std::abs(h.rho), std::abs(c), 8 * kEps * std::abs(c));
    EXPECT_EQ(h.rho, -std::abs(c));  // sign(0) = +1
    const auto y = apply_explicit(h, x);
    double tail = 0.0;
    for (std::size_t i = 1; i < y.size(); ++i) tail = std::hypot(tail, y[i]);
    EXPECT_LE(tail, 8 * kEps * std::abs(c));
  }
}

TEST(Housev, ZeroVectorIsDegenerate) {
  const std::vector<double> x{0, 0, 0};
  const Reflector h = housev(x);
  EXPECT_EQ(h.rho, 0.0);
  EXPECT_EQ(h.u_tail, std::vector<double>(2, 0.0));
  EXPECT_EQ(h.tau, 0.5);
  // Still an orthogonal reflector.
  const Matrix hm = explicit_reflector(3, 0, h.u_tail, h.tau);
  EXPECT_LE(diff_norm(matmul(hm, hm, Op::kTrans), Matrix::identity(3)), 1e-15);
}

TEST(Housev, EmptyThrows) {
  EXPECT_THROW(housev(std::vector<double>{}), std::invalid_argument);
}

TEST(Housev, PropertyOnRandomVectors) {
  Rng rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    const Index len = 1 + static_cast<Index>(rng.next_u64() % 40);
    const double scale = std::pow(10.0, static_cast<double>(rng.next_u64() % 41) - 20.0);
    std::vector<double> x(static_cast<std::size_t>(len));
    for (double& v : x) v = scale * rng.normal();
    const double nx = norm2(x);
    const Reflector h = housev(x);
    double tail2 = 0.0;
    for (const double u : h.u_tail) tail2 += u * u;
    EXPECT_NEAR(h.tau, (1.0 + tail2) / 2.0, 4 * kEps * h.tau);
    EXPECT_NEAR(std::abs(h.rho), nx, 8 * kEps * nx);
    EXPECT_EQ(std::signbit(h.rho), !std::signbit(x[0]) || x[0] == 0.0);
    auto y = apply_explicit(h, x);
    y[0] -= h.rho;
    EXPECT_LE(norm2(y), 8 * kEps * nx * std::sqrt(static_cast<double>(len)));
  }
}

TEST(HqrUnbFormT, OneByOne) {
  Matrix a = Matrix::from_rows({{2}});
  Matrix t(1, 1);
  const auto taus = hqr_unb_formT(a, t);
  EXPECT_EQ(a(0, 0), -2.0);
  EXPECT_EQ(taus, std::vector<double>{0.5});
  EXPECT_EQ(t(0, 0), 0.5);
}

TEST(HqrUnbFormT, UpperTriangularPositiveDiagonalFlipsSigns) {
  const Matrix a = Matrix::from_rows({{2, 1, -1}, {0, 3, 4}, {0, 0, 5}});
  const QRFactors f = hqr_unb(a);
  for (Index i = 0; i < 3; ++i) EXPECT_NEAR(f.packed(i, i), -a(i, i), 1e-14);
  EXPECT_LE(diff_norm(reconstruct(f), a), 1e-13 * frobenius_norm(a));
}

TEST(HqrUnbFormT, TIsStrictUpperUtUPlusDiagTau) {
  Matrix a = random_matrix(9, 5, 3);
  Matrix t(5, 5);
  const auto taus = hqr_unb_formT(a, t);
  const Matrix t_ref = form_t(a, taus);
  EXPECT_LE(diff_norm(t, t_ref), 1e-14 * frobenius_norm(t_ref));
  for (Index j = 0; j < 5; ++j) {
    EXPECT_EQ(t(j, j), taus[static_cast<std::size_t>(j)]);
    for (Index i = j + 1; i < 5; ++i) EXPECT_EQ(t(i, j), 0.0);
  }
}

// H(u_{b-1}) ... H(u_0) = I - U T^{-T} U^T and H(u_0) ... H(u_{b-1}) = I - U T^{-1} U^T.
TEST(UtTransform, MatchesExplicitReflectorProducts) {
  for (const Index b : {Index{1}, Index{2}, Index{3}, Index{8}}) {
    for (const Index m : {b, b + 1, Index{6}, Index{20}}) {
      if (m < b) continue;
      Matrix a = random_matrix(m, b, 100 + static_cast<std::uint64_t>(b * m));
      Matrix t(b, b);
      const auto taus = hqr_unb_formT(a, t);

      Matrix backward = Matrix::identity(m), forward = Matrix::identity(m);
      for (Index i = 0; i < b; ++i) {
        const Matrix h = panel_reflector(a, i, taus[static_cast<std::size_t>(i)]);
        backward = matmul(h, backward);
        forward = matmul(forward, h);
      }
      Matrix qt = Matrix::identity(m), q = Matrix::identity(m);
      apply_block_qt(a, t, qt);
      apply_block_q(a, t, q);
      EXPECT_LE(diff_norm(qt, backward), 1e-13 * static_cast<double>(b)) << "b=" << b << " m=" << m;
      EXPECT_LE(diff_norm(q, forward), 1e-13 * static_cast<double>(b)) << "b=" << b << " m=" << m;
    }
  }
}

TEST(ApplyBlockQt, SingleReflectorOnItsVector) {
  Matrix a = Matrix::from_rows({{3}, {4}});
  Matrix t(1, 1);
  hqr_unb_formT(a, t);
  Matrix b = Matrix::from_rows({{3}, {4}});
  apply_block_qt(a, t, b);
  EXPECT_NEAR(b(0, 0), -5.0, 1e-15);
  EXPECT_NEAR(b(1, 0), 0.0, 1e-15);
}

TEST(ApplyBlockQt, EmptyPanelLeavesB) {
  const Matrix u(4, 0), t(0, 0);
  Matrix b = random_matrix(4, 3, 1);
  const Matrix before = b;
  apply_block_qt(u, t, b);
  EXPECT_EQ(b, before);
}

TEST(ApplyBlockQt, DimensionMismatchThrows) {
  const Matrix u = random_matrix(5, 2, 1), t = Matrix::identity(2);
  Matrix b(4, 3);
  EXPECT_THROW(apply_block_qt(u, t, b), std::invalid_argument);
  Matrix b2(5, 3);
  EXPECT_THROW(apply_block_qt(u, Matrix::identity(3), b2), std::invalid_argument);
}

TEST(ApplyBlockQt, QThenQtRestoresB) {
  Matrix a = random_matrix(12, 4, 5);
  Matrix t(4, 4);
  hqr_unb_formT(a, t);
  Matrix b = random_matrix(12, 7, 6);
  const Matrix before = b;
  apply_block_qt(a, t, b);
  apply_block_q(a, t, b);
  EXPECT_LE(diff_norm(b, before), 1e-14 * frobenius_norm(before));
}

TEST(HqrBlk, SinglePanelIsBitwiseUnblocked) {
  const Matrix a = random_matrix(64, 64, 8);
  const QRFactors blk = hqr_blk(a, 64);
  const QRFactors unb = hqr_unb(a);
  EXPECT_EQ(blk.packed, unb.packed);
  EXPECT_EQ(blk.taus, unb.taus);
}

TEST(HqrBlk, AgreesWithUnblockedRectangular) {
  const Matrix a = random_matrix(200, 120, 9);
  const QRFactors blk = hqr_blk(a, 32);
  const QRFactors unb = hqr_unb(a);
  EXPECT_LE(diff_norm(blk.r(), unb.r()), 1e-12 * frobenius_norm(a));
}

TEST(HqrBlk, ReflectorsAgreeElementwise) {
  for (const Index b : {Index{1}, Index{5}, Index{16}, Index{40}}) {
    const Matrix a = random_matrix(90, 60, 10);
    const QRFactors blk = hqr_blk(a, b);
    const QRFactors unb = hqr_unb(a);
    for (std::size_t i = 0; i < unb.taus.size(); ++i)
      EXPECT_NEAR(blk.taus[i], unb.taus[i], 1e-12 * unb.taus[i]);
    double worst = 0.0;
    for (Index j = 0; j < 60; ++j)
      for (Index i = j + 1; i < 90; ++i) {
        const double x = unb.packed(i, j), y = blk.packed(i, j);
        worst = std::max(worst, std::abs(x - y) / std::abs(x));
      }
    EXPECT_LE(worst, 1e-12) << "b=" << b;
  }
}

TEST(HqrBlk, RaggedTail) {
  const Matrix a = random_matrix(90, 70, 11);
  const QRFactors f = hqr_blk(a, 32);
  ASSERT_EQ(f.t_blocks.size(), 3u);
  EXPECT_EQ(f.t_blocks[2].rows(), 6);
  EXPECT_EQ(f.block_starts, (std::vector<Index>{0, 32, 64}));
  EXPECT_LE(diff_norm(reconstruct(f), a), 1e-12 * frobenius_norm(a));
}

TEST(HqrBlk, RejectsZeroBlock) { EXPECT_THROW(hqr_blk(Matrix(3, 3), 0), std::invalid_argument); }

TEST(HqrBlk, ZeroColumnUsesDegenerateReflector) {
  Matrix a = random_matrix(6, 4, 12);
  for (Index i = 0; i < 6; ++i) a(i, 1) = 0.0;
  for (Index j = 0; j < 4; ++j) a(5, j) = 0.0;
  const QRFactors f = hqr_blk(a, 2);
  EXPECT_TRUE(all_finite(f.packed));
  EXPECT_LE(diff_norm(reconstruct(f), a), 1e-13 * frobenius_norm(a));
  EXPECT_LE(testing::orthogonality_error(f), 1e-13);
}

TEST(FormQ, EdgeCases) {
  const QRFactors f = hqr_blk(random_matrix(5, 3, 1), 2);
  EXPECT_EQ(form_q(f, 0).cols(), 0);
  EXPECT_THROW(form_q(f, 6), std::invalid_argument);
  QRFactors none;
  none.packed = Matrix(4, 0);
  EXPECT_EQ(form_q(none, 4), Matrix::identity(4));
}

TEST(FormQ, OrthogonalityAndReconstruction) {
  const Matrix a = random_matrix(50, 30, 13);
  const QRFactors f = hqr_blk(a, 8);
  const Matrix q = form_q(f, 30);
  EXPECT_LE(diff_norm(matmul(q, q, Op::kTrans), Matrix::identity(30)), 1e-12);
  EXPECT_LE(diff_norm(matmul(q, f.r()), a), 1e-12 * frobenius_norm(a));
  const Matrix qfull = form_q(f, 50);
  EXPECT_LE(diff_norm(matmul(qfull, qfull, Op::kTrans), Matrix::identity(50)), 50 * 50 * kEps);
}

TEST(HqrProperties, ReconstructionAndOrthogonalityBounds) {
  Rng rng(14);
  for (int trial = 0; trial < 10; ++trial) {
    const Index m = 10 + static_cast<Index>(rng.next_u64() % 90);
    const Index n = 5 + static_cast<Index>(rng.next_u64() % 90);
    const Index b = 1 + static_cast<Index>(rng.next_u64() % 20);
    const Matrix a = gaussian_matrix(rng, m, n);
    const QRFactors f = hqr_blk(a, b);
    const double bound = 50.0 * static_cast<double>(std::max(m, n)) * kEps;
    EXPECT_LE(diff_norm(reconstruct(f), a), bound * frobenius_norm(a));
    EXPECT_LE(testing::orthogonality_error(f), bound);
  }
}

}  // namespace
}  // namespace hqrrp
