#pragma once

#include "seqsparse/dense.hpp"
#include "seqsparse/prox.hpp"

namespace seqsparse::ref {

// Naive single-threaded kernels, written independently of the main library
// (plain index loops, no pragmas, no shared helpers). Tests use them as
// oracles and the benchmark compares them against the parallel versions.

DenseVector mat_vec(const DenseMatrix& M, const DenseVector& v);
DenseMatrix mat_mul(const DenseMatrix& A, const DenseMatrix& B);
double norm_1_inf(const DenseMatrix& M);
double norm_2_inf(const DenseMatrix& M);
double geom_sum_loop(double r, std::size_t T);

/// Largest-eigenvalue estimate for symmetric PSD matrices by repeated
/// squaring and a trace ratio: after k squarings S ~ M^(2^k) up to scale,
/// and tr(S M)/tr(S) -> lambda_max.
double top_eigenvalue(const DenseMatrix& M, std::size_t squarings = 6);

/// Grid minimizer of t1|v| + t2|v-anchor| + (v-u)^2/2 over [lo, hi].
struct GridMin {
    double v;
    double objective;
};
GridMin prox_objective_grid_min(double u, const ProxThresholds& p, double lo, double hi,
                                double step);

/// The same objective at a point, for oracle-optimality comparisons.
double prox_objective(double v, double u, const ProxThresholds& p);

}  // namespace seqsparse::ref
