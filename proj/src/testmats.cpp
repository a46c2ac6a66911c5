#include "hqrrp/testmats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "hqrrp/kernels.hpp"

namespace hqrrp {

Matrix random_orthogonal(Rng& rng, Index n) {
  QRFactors f = hqr_blk(gaussian_matrix(rng, n, n), 32);
  return form_q(f, n);
}

TestMatrix from_singular_values(Rng& rng, std::span<const double> d) {
  const auto n = static_cast<Index>(d.size());
  Matrix u = random_orthogonal(rng, n);
  const Matrix v = random_orthogonal(rng, n);
  for (Index j = 0; j < n; ++j)
    for (double& x : u.col(j)) x *= d[static_cast<std::size_t>(j)];
  return {matmul(u, v, Op::kNoTrans, Op::kTrans), std::vector<double>(d.begin(), d.end())};
}

TestMatrix gen_fast_decay(Index n, Rng& rng, double beta) {
  if (n < 2) throw std::invalid_argument("gen_fast_decay: n must be >= 2");
  std::vector<double> d(static_cast<std::size_t>(n));
  for (Index j = 0; j < n; ++j)
    d[static_cast<std::size_t>(j)] =
        std::pow(beta, static_cast<double>(j) / static_cast<double>(n - 1));
  d.front() = 1.0;
  d.back() = beta;
  return from_singular_values(rng, d);
}

std::vector<double> s_shape_profile(Index n) {
  if (n < 4) throw std::invalid_argument("gen_s_shape: n must be >= 4");
  const double half = static_cast<double>(n) / 2.0;
  auto logistic = [&](Index j) {
    return 1.0 / (1.0 + std::exp(kSShapeAlpha * (static_cast<double>(j) - half) /
                                 static_cast<double>(n)));
  };
  const double hi = logistic(1), lo = logistic(n);
  std::vector<double> d(static_cast<std::size_t>(n));
  for (Index j = 1; j <= n; ++j) {
    const double s = (logistic(j) - lo) / (hi - lo);
    d[static_cast<std::size_t>(j - 1)] = std::max(kSShapeFloor + (1.0 - kSShapeFloor) * s, kSShapeFloor);
  }
  d.front() = 1.0;
  d.back() = kSShapeFloor;
  return d;
}

TestMatrix gen_s_shape(Index n, Rng& rng) {
  const auto d = s_shape_profile(n);
  return from_singular_values(rng, d);
}

Matrix gen_bie_single_layer(Index n, Curve curve) {
  if (n < 8) throw std::invalid_argument("gen_bie_single_layer: n must be >= 8");
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  const double h = kTwoPi / static_cast<double>(n);
  std::vector<double> x(static_cast<std::size_t>(n)), y(x.size()), w(x.size());
  for (Index i = 0; i < n; ++i) {
    const double th = h * static_cast<double>(i);
    double r = 1.0, dr = 0.0;
    if (curve == Curve::kStar) {
      r = 0.8 + 0.2 * std::cos(3.0 * th);
      dr = -0.6 * std::sin(3.0 * th);
    }
    const auto k = static_cast<std::size_t>(i);
    x[k] = r * std::cos(th);
    y[k] = r * std::sin(th);
    w[k] = std::hypot(r, dr) * h;
  }
  Matrix a(n, n);
  for (Index j = 0; j < n; ++j) {
    const auto cj = static_cast<std::size_t>(j);
    for (Index i = 0; i < n; ++i) {
      const auto ci = static_cast<std::size_t>(i);
      const double dist = i == j ? w[cj] / kTwoPi : std::hypot(x[ci] - x[cj], y[ci] - y[cj]);
      a(i, j) = -std::log(dist) / kTwoPi * w[cj];
    }
  }
  return a;
}

Matrix gen_kahan(Index n, double zeta) {
  if (!(zeta > 0.0 && zeta < 1.0)) throw std::invalid_argument("gen_kahan: zeta must lie in (0, 1)");
  const double phi = std::sqrt(1.0 - zeta * zeta);
  Matrix a(n, n);
  double s = 1.0;
  for (Index i = 0; i < n; ++i) {
    a(i, i) = s;
    for (Index j = i + 1; j < n; ++j) a(i, j) = -s * phi;
    s *= zeta;
  }
  return a;
}

std::vector<double> jacobi_svd_values(ConstMatrixView a) {
  Matrix w = a.cols() > a.rows() ? transpose(a) : Matrix(a);
  const Index m = w.rows(), n = w.cols();
  constexpr double kTol = 1e-14;
  double worst = 0.0;
  bool converged = n < 2;
  for (Index sweep = 0; sweep < kJacobiMaxSweeps && !converged; ++sweep) {
    worst = 0.0;
    for (Index p = 0; p + 1 < n; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        auto cp = w.col(p);
        auto cq = w.col(q);
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (Index i = 0; i < m; ++i) {
          const auto k = static_cast<std::size_t>(i);
          alpha += cp[k] * cp[k];
          beta += cq[k] * cq[k];
          gamma += cp[k] * cq[k];
        }
        if (alpha == 0.0 || beta == 0.0) continue;
        const double off = std::abs(gamma) / std::sqrt(alpha * beta);
        worst = std::max(worst, off);
        if (off <= kTol) continue;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::hypot(1.0, zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (Index i = 0; i < m; ++i) {
          const auto k = static_cast<std::size_t>(i);
          const double xp = cp[k], xq = cq[k];
          cp[k] = c * xp - s * xq;
          cq[k] = s * xp + c * xq;
        }
      }
    }
    converged = worst <= kTol;
  }
  if (!converged) {
    std::ostringstream msg;
    msg << "jacobi_svd_values: no convergence after " << kJacobiMaxSweeps
        << " sweeps, largest off-diagonal cosine " << worst;
    throw std::runtime_error(msg.str());
  }
  std::vector<double> s(static_cast<std::size_t>(n));
  for (Index j = 0; j < n; ++j) s[static_cast<std::size_t>(j)] = norm2(w.col(j));
  std::ranges::sort(s, std::greater<>());
  return s;
}

namespace {

// Largest eigenvalue of the symmetric tridiagonal (alpha, beta) by Sturm
// bisection.
double tridiag_top_eigenvalue(const std::vector<double>& alpha, const std::vector<double>& beta, Index k) {
  const auto kk = static_cast<std::size_t>(k);
  double lo = alpha[0], hi = alpha[0];
  for (std::size_t i = 0; i < kk; ++i) {
    const double r = (i > 0 ? std::abs(beta[i - 1]) : 0.0) + (i + 1 < kk ? std::abs(beta[i]) : 0.0);
    lo = std::min(lo, alpha[i] - r);
    hi = std::max(hi, alpha[i] + r);
  }
  const double tiny = std::numeric_limits<double>::min();
  // eigenvalues strictly below x
  auto count_below = [&](double x) {
    std::size_t c = 0;
    double d = 1.0;
    for (std::size_t i = 0; i < kk; ++i) {
      const double b2 = i > 0 ? beta[i - 1] * beta[i - 1] : 0.0;
      d = alpha[i] - x - b2 / d;
      if (std::abs(d) < tiny) d = -tiny;
      c += d < 0.0;
    }
    return c;
  };
  for (int it = 0; it < 200 && hi - lo > 4 * std::numeric_limits<double>::epsilon() * std::max(std::abs(lo), std::abs(hi));
       ++it) {
    const double mid = 0.5 * (lo + hi);
    if (count_below(mid) == kk) hi = mid;
    else lo = mid;
  }
  return hi;
}

}  // namespace

double spectral_norm(ConstMatrixView a, Index max_steps, double rtol, std::uint64_t seed) {
  if (a.empty()) return 0.0;
  const Index n = a.cols(), kmax = std::min(max_steps, n);
  const auto nu = static_cast<std::size_t>(n);
  Rng rng(seed);
  Matrix v(n, kmax);
  std::vector<double> w(nu), y(static_cast<std::size_t>(a.rows())), coef(static_cast<std::size_t>(kmax));
  for (double& x : v.col(0)) x = rng.normal();
  double nv = norm2(v.col(0));
  for (double& x : v.col(0)) x /= nv;

  // Lanczos on A^T A, full reorthogonalization.
  std::vector<double> alpha, beta;
  double lambda = 0.0;
  for (Index j = 0; j < kmax; ++j) {
    kernels::gemv(Op::kNoTrans, 1.0, a, v.col(j), 0.0, y);
    kernels::gemv(Op::kTrans, 1.0, a, y, 0.0, w);
    double aj = 0.0;
    for (std::size_t i = 0; i < nu; ++i) aj += v.col(j)[i] * w[i];
    alpha.push_back(aj);
    const ConstMatrixView basis = v.block(0, 0, n, j + 1);
    const std::span<double> c(coef.data(), static_cast<std::size_t>(j + 1));
    for (int pass = 0; pass < 2; ++pass) {
      kernels::gemv(Op::kTrans, 1.0, basis, w, 0.0, c);
      kernels::gemv(Op::kNoTrans, -1.0, basis, c, 1.0, w);
    }
    const double bj = norm2(w);
    const bool last = j + 1 == kmax || bj <= 1e-14 * std::max(aj, lambda);
    if (last || (j + 1) % 8 == 0) {
      const double next = tridiag_top_eigenvalue(alpha, beta, j + 1);
      const bool done = std::abs(next - lambda) <= rtol * next;
      lambda = next;
      if (last || done) break;
    }
    beta.push_back(bj);
    for (std::size_t i = 0; i < nu; ++i) v.col(j + 1)[i] = w[i] / bj;
  }
  return std::sqrt(std::max(lambda, 0.0));
}

Matrix trailing_r(const QRFactors& f, Index k) {
  const Index steps = f.steps(), n = f.cols();
  if (k < 0 || k > steps) throw std::out_of_range("trailing_r: k outside [0, steps]");
  Matrix r(steps - k, n - k);
  for (Index j = k; j < n; ++j)
    for (Index i = k; i <= std::min(j, steps - 1); ++i) r(i - k, j - k) = f.packed(i, j);
  return r;
}

double trailing_r_norm(const QRFactors& f, Index k) { return frobenius_norm(trailing_r(f, k)); }

double explicit_residual(ConstMatrixView a_orig, const QRFactors& f, Index k) {
  if (k < 0 || k > f.steps()) throw std::out_of_range("explicit_residual: k outside [0, steps]");
  const auto perm = f.permutation();
  Matrix res = permute_columns(a_orig, perm);
  if (k > 0) {
    const Matrix q = form_q(f, k);
    const Matrix r = f.r();
    kernels::gemm(Op::kNoTrans, Op::kNoTrans, -1.0, q, r.block(0, 0, k, r.cols()), 1.0, res);
  }
  return frobenius_norm(res);
}

QualityReport truncation_errors(ConstMatrixView a_orig, const QRFactors& f,
                                std::span<const Index> ks, bool with_spectral,
                                std::span<const double> sigmas) {
  QualityReport rep;
  rep.ks.assign(ks.begin(), ks.end());
  const bool small = std::max(f.rows(), f.cols()) <= kExplicitResidualLimit;
  for (const Index k : ks) {
    const Matrix r22 = trailing_r(f, k);
    rep.e_frob.push_back(frobenius_norm(r22));
    if (with_spectral) rep.e_spec.push_back(spectral_norm(r22));
    if (small) rep.e_frob_explicit.push_back(explicit_residual(a_orig, f, k));
    if (!sigmas.empty()) {
      double tail = 0.0;
      for (auto j = static_cast<std::size_t>(k); j < sigmas.size(); ++j) tail += sigmas[j] * sigmas[j];
      rep.sv_bound_frob.push_back(std::sqrt(tail));
      rep.sv_bound_spec.push_back(static_cast<std::size_t>(k) < sigmas.size()
                                      ? sigmas[static_cast<std::size_t>(k)]
                                      : 0.0);
    }
  }
  for (Index i = 0; i < f.steps(); ++i) rep.r_diag.push_back(std::abs(f.packed(i, i)));
  return rep;
}

}  // namespace hqrrp
