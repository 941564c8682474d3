#include "seqsparse/prox.hpp"

namespace seqsparse {

// Case tables of the two-sided shrinkage. For anchor >= 0 the breakpoints in
// increasing order are -t1-t2, t1-t2, anchor+t1-t2, anchor+t1+t2 and the
// flat branches ([.,.] closed) hold 0 below the anchor region and the anchor
// above; for anchor < 0 the picture mirrors. The last branch of the
// anchor < 0 table is u + t1 + t2: on v < anchor < 0 both absolute-value
// terms contribute slope -(t1 + t2), so stationarity forces that form (and
// it is the only choice continuous at anchor - t1 - t2).
ProxValue prox_rw_eval(double u, const ProxThresholds& p) {
    const double t1 = p.t1, t2 = p.t2, a = p.anchor;
    if (a >= 0.0) {
        if (u > a + t1 + t2) return {u - t1 - t2, ProxBranch::SlopedHigh};
        if (u >= a + t1 - t2) return {a, ProxBranch::FlatHigh};
        if (u > t1 - t2) return {u - t1 + t2, ProxBranch::SlopedMid};
        if (u >= -t1 - t2) return {0.0, ProxBranch::FlatLow};
        return {u + t1 + t2, ProxBranch::SlopedLow};
    }
    if (u > t1 + t2) return {u - t1 - t2, ProxBranch::SlopedHigh};
    if (u >= -t1 + t2) return {0.0, ProxBranch::FlatHigh};
    if (u > a - t1 + t2) return {u + t1 - t2, ProxBranch::SlopedMid};
    if (u >= a - t1 - t2) return {a, ProxBranch::FlatLow};
    return {u + t1 + t2, ProxBranch::SlopedLow};
}

double prox_rw(double u, const ProxThresholds& p) { return prox_rw_eval(u, p).value; }

ProxPartials branch_partials(ProxBranch b, bool anchor_nonneg) {
    switch (b) {
        case ProxBranch::SlopedLow:
            return {1.0, 0.0, +1.0, +1.0};
        case ProxBranch::FlatLow:
            return anchor_nonneg ? ProxPartials{0.0, 0.0, 0.0, 0.0}
                                 : ProxPartials{0.0, 1.0, 0.0, 0.0};
        case ProxBranch::SlopedMid:
            return anchor_nonneg ? ProxPartials{1.0, 0.0, -1.0, +1.0}
                                 : ProxPartials{1.0, 0.0, +1.0, -1.0};
        case ProxBranch::FlatHigh:
            return anchor_nonneg ? ProxPartials{0.0, 1.0, 0.0, 0.0}
                                 : ProxPartials{0.0, 0.0, 0.0, 0.0};
        case ProxBranch::SlopedHigh:
            return {1.0, 0.0, -1.0, -1.0};
    }
    return {};
}

ProxPartials prox_rw_partials(double u, const ProxThresholds& p) {
    return branch_partials(prox_rw_eval(u, p).branch, p.anchor >= 0.0);
}

DenseVector prox_rw_vec(const DenseVector& u, const DenseVector& g, double lambda1,
                        double lambda2, double c, const DenseVector& anchor) {
    require(u.size() == g.size() && u.size() == anchor.size(),
            "prox_rw_vec: length mismatch");
    require(c > 0.0, "prox_rw_vec: c must be positive");
    DenseVector out(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        const ProxThresholds p{lambda1 * g[i] / c, lambda2 * g[i] / c, anchor[i]};
        out[i] = prox_rw(u[i], p);
    }
    return out;
}

}  // namespace seqsparse
