#pragma once

#include <vector>

#include "seqsparse/dense.hpp"
#include "seqsparse/linalg.hpp"
#include "seqsparse/prox.hpp"

namespace seqsparse {

/// Knobs shared by the iterative reconstruction routines.
struct SolverConfig {
    std::size_t iters = 1;  // layer / iteration count d
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double c = 1.0;  // gradient step is 1/c; must upper-bound the Lipschitz constant
};

/// Proximal gradient descent on 0.5 ||x - A D h||^2 + lambda ||h||_1.
DenseVector ista(const DenseVector& x, const DenseMatrix& A, const DenseMatrix& D,
                 double lambda, double c, std::size_t iters, const DenseVector& h_init);

/// Nesterov-accelerated variant of ista; first iteration coincides with it.
/// No restart scheme.
DenseVector fista(const DenseVector& x, const DenseMatrix& A, const DenseMatrix& D,
                  double lambda, double c, std::size_t iters, const DenseVector& h_init);

/// 0.5 ||x - B h||^2 + lambda ||h||_1 with B = A D precomputed by the caller.
double objective_l1(const DenseVector& x, const DenseMatrix& B, const DenseVector& h,
                    double lambda);

/// 0.5||x - A D Z h||^2 + l1 ||g o Z h||_1 + l2 ||g o (Z h - G h_prev)||_1.
double objective_seq(const DenseVector& h, const DenseVector& x, const DenseVector& h_prev,
                     const DenseMatrix& A, const DenseMatrix& D, const DenseMatrix& G,
                     const DenseMatrix& Z, const DenseVector& g, double lambda1,
                     double lambda2);

/// Per-time-step, per-layer code trajectories. codes[t][0] is the warm start
/// G h_{t-1} and codes[t][l] for l = 1..d the iterates; the reconstruction at
/// time t is D codes[t][d].
struct SequentialCodes {
    std::vector<std::vector<DenseVector>> codes;
    const DenseVector& final_code(std::size_t t) const { return codes[t].back(); }
};

/// Sequential reweighted reconstruction: for each time step, d proximal
/// gradient iterations on the reweighted objective, anchored at G times the
/// previous step's final code. Z[l] and g[l] give layer l its own metric and
/// per-element thresholds; Z = I, g = 1 recovers the plain l1-l1 iteration.
SequentialCodes algorithm1(const std::vector<DenseVector>& x_seq, const DenseMatrix& A,
                           const DenseMatrix& D, const DenseMatrix& G,
                           const std::vector<DenseMatrix>& Z,
                           const std::vector<DenseVector>& g, const DenseVector& h0,
                           const SolverConfig& cfg);

}  // namespace seqsparse
