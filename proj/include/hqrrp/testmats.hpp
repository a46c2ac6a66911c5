#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hqrrp/householder.hpp"
#include "hqrrp/matrix.hpp"
#include "hqrrp/rng.hpp"

namespace hqrrp {

/// A generated test matrix together with its singular values when they are
/// known by construction (empty otherwise), in descending order.
struct TestMatrix {
  Matrix a;
  std::vector<double> sigmas;
};

/// Q factor of the QR factorization of an n x n Gaussian matrix.
Matrix random_orthogonal(Rng& rng, Index n);

/// A = U diag(d) V^T with U, V random orthogonal; d must be non-increasing.
TestMatrix from_singular_values(Rng& rng, std::span<const double> d);

/// Matrix 1: d_j = beta^{(j-1)/(n-1)}, j = 1..n. Requires n >= 2.
TestMatrix gen_fast_decay(Index n, Rng& rng, double beta = 1e-5);

/// Matrix 2: logistic profile 1 / (1 + exp(alpha (j - n/2) / n)), alpha = 40,
/// rescaled linearly onto [1e-6, 1]. Requires n >= 4.
inline constexpr double kSShapeAlpha = 40.0;
inline constexpr double kSShapeFloor = 1e-6;
std::vector<double> s_shape_profile(Index n);
TestMatrix gen_s_shape(Index n, Rng& rng);

enum class Curve {
  kStar,    // r(theta) = 0.8 + 0.2 cos(3 theta)
  kCircle,  // unit circle
};

/// Matrix 3: trapezoid-rule discretisation of the single layer operator
/// -(1/2pi) log|x - y| on n equispaced parameter points of a closed curve.
/// Off-diagonal a_ij = -(1/2pi) log|x_i - x_j| w_j, diagonal
/// -(1/2pi) log(w_i / 2pi) w_i, where w_j is the arc-length weight.
/// Requires n >= 8.
Matrix gen_bie_single_layer(Index n, Curve curve = Curve::kStar);

/// Matrix 4: Kahan matrix, a_ii = zeta^i, a_ij = -zeta^i phi (j > i) with
/// phi = sqrt(1 - zeta^2). Throws std::invalid_argument unless 0 < zeta < 1.
Matrix gen_kahan(Index n, double zeta = 0.99999);

/// Singular values in descending order by one-sided Jacobi. Throws
/// std::runtime_error when 30 sweeps do not reach orthogonality 1e-14.
inline constexpr Index kJacobiMaxSweeps = 30;
inline constexpr Index kJacobiOracleLimit = 1024;
std::vector<double> jacobi_svd_values(ConstMatrixView a);

/// ||A||_2 from Lanczos on A^T A with full reorthogonalization, seeded
/// start vector. Krylov dimension is capped at min(max_steps, cols); at
/// cols the result is exact up to rounding.
double spectral_norm(ConstMatrixView a, Index max_steps = 1000, double rtol = 1e-14,
                     std::uint64_t seed = 0x5eed);

struct QualityReport {
  std::vector<Index> ks;
  std::vector<double> e_frob;
  std::vector<double> e_spec;          // empty unless requested
  std::vector<double> e_frob_explicit; // ||AP - Q_k R_k||_F, small problems only
  std::vector<double> r_diag;          // |r_ii|, i = 0..steps-1
  std::vector<double> sv_bound_frob;   // empty without singular values
  std::vector<double> sv_bound_spec;
  std::string algo_label;
  std::uint64_t seed = 0;
};

/// Problems with max(m, n) up to this size also get the explicit residual.
inline constexpr Index kExplicitResidualLimit = 128;

/// ||A P - Q(:, 0:k) R(0:k, :)||_F formed explicitly.
double explicit_residual(ConstMatrixView a_orig, const QRFactors& f, Index k);

/// e_k = ||R(k:, k:)|| for each k in `ks`, read from the packed factors.
/// `sigmas` (descending, possibly empty) supplies the Eckart-Young bounds
/// sqrt(sum_{j>k} sigma_j^2) and sigma_{k+1}. Throws std::out_of_range for
/// k outside [0, steps].
QualityReport truncation_errors(ConstMatrixView a_orig, const QRFactors& f,
                                std::span<const Index> ks, bool with_spectral,
                                std::span<const double> sigmas = {});

/// Frobenius norm of the upper trapezoidal part of packed rows k:steps,
/// columns k:n.
double trailing_r_norm(const QRFactors& f, Index k);
/// The same block as a dense matrix (zeros below the diagonal).
Matrix trailing_r(const QRFactors& f, Index k);

}  // namespace hqrrp
