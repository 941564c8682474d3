#pragma once

#include "seqsparse/dense.hpp"

namespace seqsparse {

/// Number of worker threads the OpenMP kernels may use. Honors the
/// SEQSPARSE_THREADS environment variable, falling back to the OpenMP
/// default. Returns 1 when built without OpenMP.
int configured_threads();

/// Installs configured_threads() as the OpenMP thread count. Called once by
/// the CLI; library users may call it themselves.
void apply_thread_config();

// Every kernel accumulates each output element serially left-to-right, so
// results are bitwise reproducible for any thread count.

/// y = M v.
DenseVector mat_vec(const DenseMatrix& M, const DenseVector& v);

/// y = M^T v.
DenseVector mat_tvec(const DenseMatrix& M, const DenseVector& v);

/// C = A B.
DenseMatrix mat_mul(const DenseMatrix& A, const DenseMatrix& B);

/// C = A^T B.
DenseMatrix mat_tmul(const DenseMatrix& A, const DenseMatrix& B);

/// C = A B^T.
DenseMatrix mat_mul_t(const DenseMatrix& A, const DenseMatrix& B);

DenseMatrix transpose(const DenseMatrix& M);

/// M^T M, the Gram matrix.
DenseMatrix gram(const DenseMatrix& M);

DenseVector add(const DenseVector& a, const DenseVector& b);
DenseVector sub(const DenseVector& a, const DenseVector& b);
DenseVector scale(const DenseVector& a, double s);
double dot(const DenseVector& a, const DenseVector& b);
double norm2(const DenseVector& v);
double norm1(const DenseVector& v);
double norm_inf(const DenseVector& v);

/// a += s * b (in place).
void axpy(DenseVector& a, double s, const DenseVector& b);

DenseMatrix add(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix sub(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix scale(const DenseMatrix& a, double s);

/// Rank-1 update: M += s * u v^T.
void add_outer(DenseMatrix& M, double s, const DenseVector& u, const DenseVector& v);

/// Frobenius inner product sum_ij A_ij B_ij.
double frob_dot(const DenseMatrix& a, const DenseMatrix& b);

/// Max row l1 norm: max_i sum_j |M_ij|.
double norm_1_inf(const DenseMatrix& M);

/// Max row l2 norm: sqrt(max_i sum_j M_ij^2).
double norm_2_inf(const DenseMatrix& M);

/// sum_{k=0}^{T-1} r^k, with the removable singularity at r = 1 resolved by
/// continuity (returns T when |r - 1| < 1e-12).
double geom_sum(double r, std::size_t T);

/// Power-iteration estimate of the largest eigenvalue of a square symmetric
/// PSD matrix, inflated by 1.01 so the result upper-bounds the Rayleigh
/// estimate. Zero matrix maps to 0.
double spectral_upper(const DenseMatrix& M, std::size_t iters, std::uint64_t seed);

}  // namespace seqsparse
