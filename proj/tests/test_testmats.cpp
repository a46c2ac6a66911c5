#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "hqrrp/pivoting.hpp"
#include "hqrrp/randqr.hpp"
#include "hqrrp/testmats.hpp"
#include "test_util.hpp"

namespace hqrrp {
namespace {

using testing::diff_norm;
using testing::random_matrix;

TEST(FastDecay, Endpoints) {
  Rng rng(1);
  const TestMatrix tm = gen_fast_decay(50, rng);
  EXPECT_EQ(tm.sigmas.front(), 1.0);
  EXPECT_EQ(tm.sigmas.back(), 1e-5);
  EXPECT_TRUE(testing::non_increasing(tm.sigmas));
  Rng rng2(2);
  EXPECT_EQ(gen_fast_decay(2, rng2).sigmas, (std::vector<double>{1.0, 1e-5}));
  EXPECT_THROW(gen_fast_decay(1, rng2), std::invalid_argument);
}

TEST(FastDecay, SpectralNormIsOne) {
  for (const Index n : {Index{10}, Index{64}, Index{200}}) {
    Rng rng(3);
    const TestMatrix tm = gen_fast_decay(n, rng);
    EXPECT_NEAR(spectral_norm(tm.a, 500, 1e-12), 1.0, 1e-6) << n;
  }
}

TEST(FastDecay, DeterministicAtFixedSeed) {
  Rng r1(4), r2(4);
  EXPECT_EQ(gen_fast_decay(20, r1).a, gen_fast_decay(20, r2).a);
}

TEST(SShape, ProfileShape) {
  const auto d = s_shape_profile(100);
  EXPECT_GE(d.front(), 0.9);
  EXPECT_LE(d.front(), 1.1);
  EXPECT_EQ(d.back(), 1e-6);
  EXPECT_TRUE(testing::non_increasing(d));
  int big = 0, tiny = 0;
  for (const double x : d) {
    big += x > 0.5;
    tiny += x < 2e-6;
  }
  EXPECT_GE(big, 10);
  EXPECT_GE(tiny, 10);
  EXPECT_THROW(s_shape_profile(3), std::invalid_argument);
}

TEST(SShape, SingularValuesByConstruction) {
  Rng rng(5);
  const TestMatrix tm = gen_s_shape(40, rng);
  const auto sv = jacobi_svd_values(tm.a);
  for (std::size_t i = 0; i < sv.size(); ++i) EXPECT_NEAR(sv[i], tm.sigmas[i], 1e-12);
}

TEST(Bie, CircleIsSymmetric) {
  const Matrix a = gen_bie_single_layer(64, Curve::kCircle);
  EXPECT_LE(diff_norm(a, transpose(a)), 1e-12 * frobenius_norm(a));
}

TEST(Bie, DeterministicAndFinite) {
  const Matrix a = gen_bie_single_layer(40);
  EXPECT_EQ(a, gen_bie_single_layer(40));
  EXPECT_TRUE(all_finite(a));
  EXPECT_THROW(gen_bie_single_layer(7), std::invalid_argument);
}

TEST(Bie, ConditionGrowsWithN) {
  const auto s32 = jacobi_svd_values(gen_bie_single_layer(32));
  const auto s128 = jacobi_svd_values(gen_bie_single_layer(128));
  EXPECT_GT(s128.front() / s128.back(), s32.front() / s32.back());
}

TEST(Kahan, SmallExample) {
  const Matrix a = gen_kahan(2, 0.6);
  EXPECT_DOUBLE_EQ(a(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(a(0, 1), -0.8);
  EXPECT_DOUBLE_EQ(a(1, 1), 0.6);
  EXPECT_EQ(a(1, 0), 0.0);
}

TEST(Kahan, StructureAndErrors) {
  const Matrix a = gen_kahan(30, 0.99999);
  for (Index i = 0; i < 30; ++i) {
    EXPECT_NEAR(a(i, i), std::pow(0.99999, static_cast<double>(i)), 1e-14);
    if (i > 0) EXPECT_LT(a(i, i), a(i - 1, i - 1));
    for (Index j = 0; j < i; ++j) EXPECT_EQ(a(i, j), 0.0);
  }
  EXPECT_EQ(gen_kahan(4000, 0.99999).rows(), 4000);
  EXPECT_THROW(gen_kahan(4, 0.0), std::invalid_argument);
  EXPECT_THROW(gen_kahan(4, 1.0), std::invalid_argument);
  EXPECT_THROW(gen_kahan(4, -0.5), std::invalid_argument);
}

TEST(Jacobi, Diagonal) {
  const Matrix a = Matrix::from_rows({{3, 0, 0}, {0, 1, 0}, {0, 0, 2}});
  const auto s = jacobi_svd_values(a);
  EXPECT_EQ(s, (std::vector<double>{3, 2, 1}));
}

TEST(Jacobi, FastDecayMatchesConstruction) {
  Rng rng(6);
  const TestMatrix tm = gen_fast_decay(64, rng);
  const auto s = jacobi_svd_values(tm.a);
  for (std::size_t i = 0; i < s.size(); ++i) EXPECT_NEAR(s[i], tm.sigmas[i], 1e-10 * tm.sigmas[i]);
}

TEST(Jacobi, OrthogonalMatrix) {
  Rng rng(7);
  for (const double s : jacobi_svd_values(random_orthogonal(rng, 50))) EXPECT_NEAR(s, 1.0, 1e-12);
}

TEST(Jacobi, WideAndTallAgree) {
  const Matrix a = random_matrix(12, 30, 8);
  const auto s1 = jacobi_svd_values(a), s2 = jacobi_svd_values(transpose(a));
  ASSERT_EQ(s1.size(), 12u);
  for (std::size_t i = 0; i < s1.size(); ++i) EXPECT_NEAR(s1[i], s2[i], 1e-13 * s1[0]);
}

TEST(SpectralNorm, KnownValues) {
  EXPECT_NEAR(spectral_norm(Matrix::from_rows({{3, 0}, {0, 2}})), 3.0, 1e-6);
  EXPECT_EQ(spectral_norm(Matrix(0, 3)), 0.0);
  EXPECT_EQ(spectral_norm(Matrix(3, 3)), 0.0);
}

TEST(SpectralNorm, ClusteredTopSingularValues) {
  Rng rng(14);
  const TestMatrix tm = gen_s_shape(300, rng);
  ASSERT_LT(tm.sigmas[0] - tm.sigmas[1], 1e-4);
  EXPECT_NEAR(spectral_norm(tm.a), tm.sigmas[0], 1e-12);
  const Matrix g = random_matrix(100, 100, 15);
  EXPECT_NEAR(spectral_norm(g), jacobi_svd_values(g).front(), 1e-12 * frobenius_norm(g));
}

TEST(TruncationErrors, EdgeValues) {
  const Matrix a = random_matrix(30, 20, 9);
  const QRFactors f = hqrp_blk(a, 8);
  const std::vector<Index> ks{0, 20};
  const QualityReport rep = truncation_errors(a, f, ks, true);
  EXPECT_NEAR(rep.e_frob[0], frobenius_norm(a), 1e-12 * frobenius_norm(a));
  EXPECT_EQ(rep.e_frob[1], 0.0);
  EXPECT_EQ(rep.e_spec[1], 0.0);
  EXPECT_TRUE(rep.sv_bound_frob.empty());
  EXPECT_EQ(rep.r_diag.size(), 20u);
  const std::vector<Index> bad{21};
  EXPECT_THROW(truncation_errors(a, f, bad, false), std::out_of_range);
}

TEST(TruncationErrors, RankAnnihilation) {
  const Matrix a = matmul(random_matrix(40, 6, 10), random_matrix(6, 25, 11));
  const QRFactors f = hqrp_blk(a, 4);
  const std::vector<Index> ks{6};
  EXPECT_LE(truncation_errors(a, f, ks, false).e_frob[0], 1e-10 * frobenius_norm(a));
}

TEST(TruncationErrors, BothFormsAgreeAndRespectEckartYoung) {
  Rng rng(12);
  const TestMatrix tm = gen_fast_decay(96, rng);
  const Matrix& a = tm.a;
  std::vector<Index> ks;
  for (Index k = 0; k <= 96; k += 8) ks.push_back(k);
  Rng hrng(13);
  for (const QRFactors& f : {hqr_blk(a, 16), hqrp_blk(a, 16), hqrrp_blk(a, {16, 5, SketchMode::kDowndate}, hrng)}) {
    const QualityReport rep = truncation_errors(a, f, ks, true, tm.sigmas);
    ASSERT_EQ(rep.e_frob_explicit.size(), ks.size());
    EXPECT_TRUE(testing::non_increasing(rep.e_frob));
    for (std::size_t i = 0; i < ks.size(); ++i) {
      EXPECT_NEAR(rep.e_frob[i], rep.e_frob_explicit[i], 1e-9 * frobenius_norm(a));
      EXPECT_GE(rep.e_frob[i], rep.sv_bound_frob[i] * (1 - 1e-8));
      EXPECT_GE(rep.e_spec[i], rep.sv_bound_spec[i] * (1 - 1e-8));
    }
  }
}

}  // namespace
}  // namespace hqrrp
