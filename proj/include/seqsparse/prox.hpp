#pragma once

#include <cstdint>

#include "seqsparse/dense.hpp"

namespace seqsparse {

/// Per-element parameters of the two-sided shrinkage activation:
/// t1 and t2 are the nonnegative thresholds on |v| and |v - anchor|, and
/// anchor is the point the second penalty pulls toward.
struct ProxThresholds {
    double t1 = 0.0;
    double t2 = 0.0;
    double anchor = 0.0;
};

/// One-sided derivatives of prox_rw on the active branch. Each entry is in
/// {-1, 0, 1}; flat branches win ties at breakpoints.
struct ProxPartials {
    double d_u = 0.0;
    double d_anchor = 0.0;
    double d_t1 = 0.0;
    double d_t2 = 0.0;
};

/// Branch ids in increasing order of u. Which flat branch holds zero and
/// which holds the anchor depends on the anchor's sign.
enum class ProxBranch : std::uint8_t {
    SlopedLow = 0,
    FlatLow = 1,
    SlopedMid = 2,
    FlatHigh = 3,
    SlopedHigh = 4,
};

inline double soft_threshold(double u, double gamma) {
    if (u > gamma) return u - gamma;
    if (u < -gamma) return u + gamma;
    return 0.0;
}

/// Minimizer of t1|v| + t2|v - anchor| + (v - u)^2 / 2 in closed form.
double prox_rw(double u, const ProxThresholds& p);

/// prox_rw together with the active branch id.
struct ProxValue {
    double value;
    ProxBranch branch;
};
ProxValue prox_rw_eval(double u, const ProxThresholds& p);

ProxPartials prox_rw_partials(double u, const ProxThresholds& p);

/// Partials of the branch identified by prox_rw_eval, without re-deriving it.
ProxPartials branch_partials(ProxBranch b, bool anchor_nonneg);

/// Element-wise prox with t1_i = lambda1 g_i / c, t2_i = lambda2 g_i / c.
/// Requires g > 0 element-wise and c > 0.
DenseVector prox_rw_vec(const DenseVector& u, const DenseVector& g, double lambda1,
                        double lambda2, double c, const DenseVector& anchor);

}  // namespace seqsparse
