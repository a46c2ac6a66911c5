#pragma once

#include <span>

#include "hqrrp/matrix.hpp"

// Dense kernels used by the factorizations. `hqrrp::kernels` holds the
// OpenMP-parallel versions the algorithms call; `hqrrp::kernels::serial`
// holds straightforward loop-nest references with identical contracts that
// the tests and the benchmark compare against.
//
// A "unit lower trapezoid" U (m x k, m >= k) is a block of Householder
// vectors as stored in a packed factorization: U(j, j) is an implicit 1,
// entries above the diagonal are implicit zeros, and only the strictly lower
// part is read.
//
// Every kernel accepts an optional FlopCounter and adds the number of
// floating point operations it performs (multiply-add = 2).

namespace hqrrp {

enum class Op { kNoTrans, kTrans };

namespace kernels {

/// C := alpha * op(A) * op(B) + beta * C
void gemm(Op trans_a, Op trans_b, double alpha, ConstMatrixView a, ConstMatrixView b, double beta,
          MatrixView c, FlopCounter* flops = nullptr);

/// y := alpha * op(A) * x + beta * y
void gemv(Op trans, double alpha, ConstMatrixView a, std::span<const double> x, double beta,
          std::span<double> y, FlopCounter* flops = nullptr);

/// A := A + alpha * x * y^T
void ger(double alpha, std::span<const double> x, std::span<const double> y, MatrixView a,
         FlopCounter* flops = nullptr);

/// B := op(T)^{-1} B for upper triangular T.
void trsm_upper_left(Op trans, ConstMatrixView t, MatrixView b, FlopCounter* flops = nullptr);

/// B := B T^{-1} for upper triangular T.
void trsm_upper_right(ConstMatrixView t, MatrixView b, FlopCounter* flops = nullptr);

/// W := U^T B
void trapezoid_t_mul(ConstMatrixView u, ConstMatrixView b, MatrixView w,
                     FlopCounter* flops = nullptr);

/// B := B - U W
void trapezoid_mul_sub(ConstMatrixView u, ConstMatrixView w, MatrixView b,
                       FlopCounter* flops = nullptr);

/// X := G U
void mul_trapezoid(ConstMatrixView g, ConstMatrixView u, MatrixView x,
                   FlopCounter* flops = nullptr);

/// G := G - X U^T
void sub_mul_trapezoid_t(ConstMatrixView x, ConstMatrixView u, MatrixView g,
                         FlopCounter* flops = nullptr);

namespace serial {

void gemm(Op trans_a, Op trans_b, double alpha, ConstMatrixView a, ConstMatrixView b, double beta,
          MatrixView c, FlopCounter* flops = nullptr);
void gemv(Op trans, double alpha, ConstMatrixView a, std::span<const double> x, double beta,
          std::span<double> y, FlopCounter* flops = nullptr);
void ger(double alpha, std::span<const double> x, std::span<const double> y, MatrixView a,
         FlopCounter* flops = nullptr);
void trsm_upper_left(Op trans, ConstMatrixView t, MatrixView b, FlopCounter* flops = nullptr);
void trsm_upper_right(ConstMatrixView t, MatrixView b, FlopCounter* flops = nullptr);
void trapezoid_t_mul(ConstMatrixView u, ConstMatrixView b, MatrixView w,
                     FlopCounter* flops = nullptr);
void trapezoid_mul_sub(ConstMatrixView u, ConstMatrixView w, MatrixView b,
                       FlopCounter* flops = nullptr);
void mul_trapezoid(ConstMatrixView g, ConstMatrixView u, MatrixView x,
                   FlopCounter* flops = nullptr);
void sub_mul_trapezoid_t(ConstMatrixView x, ConstMatrixView u, MatrixView g,
                         FlopCounter* flops = nullptr);

}  // namespace serial

namespace detail {
// Exact operation counts shared by both implementations.
double gemm_flops(Index m, Index n, Index k);
double trsm_flops(Index order, Index rhs);
double trapezoid_flops(Index m, Index k, Index n);
}  // namespace detail

}  // namespace kernels

/// Convenience product for tests and tools: returns op(A) * op(B).
Matrix matmul(ConstMatrixView a, ConstMatrixView b, Op trans_a = Op::kNoTrans,
              Op trans_b = Op::kNoTrans);

}  // namespace hqrrp
