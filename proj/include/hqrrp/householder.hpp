#pragma once

#include <span>
#include <vector>

#include "hqrrp/matrix.hpp"

namespace hqrrp {

/// H(u) = I - (1/tau) u u^T with u = [1; u_tail] and tau = u^T u / 2, chosen
/// so that H(u) x = rho e_0.
struct Reflector {
  double rho = 0.0;
  std::vector<double> u_tail;
  double tau = 0.5;
};

/// Computes the reflector for x. Sign convention rho = -sign(x_0) ||x||_2
/// with sign(0) = +1. For x = 0 the reflector degenerates to u = e_0,
/// tau = 1/2, rho = 0. Throws std::invalid_argument on an empty x.
Reflector housev(std::span<const double> x);

/// In-place form used by the factorizations: x[0] becomes rho, x[1:] becomes
/// u_tail; returns tau.
double housev_inplace(std::span<double> x);

/// Result of a (possibly pivoted) Householder QR factorization.
///
/// `packed` holds R on and above the diagonal and the Householder tails
/// below it. The reflectors are grouped into panels; panel i starts at
/// column block_starts[i] and its accumulated transform is
/// I - U T^{-1} U^T with T = t_blocks[i].
struct QRFactors {
  Matrix packed;
  std::vector<Matrix> t_blocks;
  std::vector<Index> block_starts;
  std::vector<double> taus;
  PivotTrail trail;

  Index rows() const { return packed.rows(); }
  Index cols() const { return packed.cols(); }
  Index steps() const { return static_cast<Index>(taus.size()); }

  /// Upper trapezoidal R, steps() x cols().
  Matrix r() const;
  /// Final column order: column j of A P is column permutation()[j] of A.
  std::vector<Index> permutation() const { return trail.to_permutation(cols()); }
};

/// Unblocked Householder QR of `a` (min(m, n) steps), overwriting it with
/// the packed U\R layout. When `t` is non-empty it must be steps x steps and
/// receives T = strict_upper(U^T U) + diag(tau), built column by column as
/// the reflectors are produced. Returns the taus.
std::vector<double> hqr_unb_formT(MatrixView a, MatrixView t, FlopCounter* flops = nullptr);

/// T = strict_upper(U^T U) + diag(taus) for the reflectors stored in `u`.
Matrix form_t(ConstMatrixView u, std::span<const double> taus, FlopCounter* flops = nullptr);

/// B := (I - U T^{-1} U^T)^T B = B - U W with W = T^{-T} (U^T B).
/// This is H(u_{k-1}) ... H(u_0) B.
void apply_block_qt(ConstMatrixView u, ConstMatrixView t, MatrixView b,
                    FlopCounter* flops = nullptr);

/// B := (I - U T^{-1} U^T) B = H(u_0) ... H(u_{k-1}) B.
void apply_block_q(ConstMatrixView u, ConstMatrixView t, MatrixView b,
                   FlopCounter* flops = nullptr);

/// Unblocked Householder QR producing a single T block.
QRFactors hqr_unb(Matrix a, FlopCounter* flops = nullptr);

/// Blocked Householder QR with block size b (b >= 1). Each panel is factored
/// by hqr_unb_formT and the trailing columns receive one block update.
QRFactors hqr_blk(Matrix a, Index block_size, FlopCounter* flops = nullptr);

/// First k columns of Q = H(u_0) H(u_1) ... H(u_{r-1}); k <= rows().
Matrix form_q(const QRFactors& f, Index k);

/// Q(:, 0:steps) * R, i.e. the factored approximation of A P.
Matrix reconstruct(const QRFactors& f);

}  // namespace hqrrp
