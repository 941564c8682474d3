#include "seqsparse/bounds.hpp"

#include <cmath>

#include <json.hpp>

#include "seqsparse/linalg.hpp"

namespace seqsparse {

std::string BoundReport::to_json() const {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [k, v] : values) j[k] = v;
    return j.dump(2);
}

double capital_lambda(const std::vector<double>& alpha, std::size_t l) {
    require(l <= alpha.size(), "capital_lambda: index out of range");
    double prod = 1.0;
    for (std::size_t k = l; k < alpha.size(); ++k) prod *= alpha[k];  // alpha[k] is alpha_{k+1}
    return prod;
}

namespace {

double log_prefactor(std::size_t dT_factor, std::size_t n, std::size_t h, std::size_t m) {
    // sqrt(2 (4 dT log2 + log n + log h) / m), natural logs.
    const double num = 4.0 * static_cast<double>(dT_factor) * std::log(2.0) +
                       std::log(static_cast<double>(n)) + std::log(static_cast<double>(h));
    return std::sqrt(2.0 * num / static_cast<double>(m));
}

double beta_lambda_sum(const std::vector<double>& alpha, const std::vector<double>& beta) {
    double acc = 0.0;
    for (std::size_t l = 0; l < beta.size(); ++l) acc += beta[l] * capital_lambda(alpha, l + 1);
    return acc;
}

}  // namespace

double bound_theorem2(const NormProfile& np) {
    require(np.alpha.size() == np.d && np.beta.size() == np.d,
            "bound_theorem2: need d alpha and beta values");
    const double lam0 = capital_lambda(np.alpha, 0);
    const double geom = geom_sum(lam0, np.T);
    const double bsum = beta_lambda_sum(np.alpha, np.beta);
    const double data_term = bsum * bsum * geom * geom * np.B_x * np.B_x;
    const double h0_term =
        std::pow(lam0, 2.0 * static_cast<double>(np.T)) * np.h0_inf * np.h0_inf;
    return log_prefactor(np.d * np.T, np.n, np.h, np.m) * std::sqrt(data_term + h0_term);
}

double bound_corollary(const NormProfile& np, CorollaryId which) {
    const double pre = log_prefactor(np.d, np.n, np.h, np.m);
    switch (which) {
        case CorollaryId::Cor1: {
            require(np.alpha.size() == np.d && np.beta.size() == np.d,
                    "cor1: need d alpha and beta values");
            const double bsum = beta_lambda_sum(np.alpha, np.beta);
            const double lam0 = capital_lambda(np.alpha, 0);
            return pre *
                   std::sqrt(bsum * bsum * np.B_x * np.B_x + lam0 * lam0 * np.B_h * np.B_h);
        }
        case CorollaryId::Cor2: {
            require(np.alpha.size() >= 2 && !np.beta.empty(),
                    "cor2: needs alpha1, alpha2 and beta1");
            const double a1 = np.alpha[0], a2 = np.alpha[1], b1 = np.beta[0];
            const double geom = geom_sum(a2, np.d);
            const double rec = a1 * std::pow(a2, static_cast<double>(np.d - 1));
            return pre * std::sqrt(b1 * b1 * geom * geom * np.B_x * np.B_x +
                                   rec * rec * np.B_h * np.B_h);
        }
        case CorollaryId::Cor3: {
            require(np.alpha.size() >= 2 && !np.beta.empty(),
                    "cor3: needs alpha1, alpha2, beta1 and beta2");
            const double a1 = np.alpha[0], a2 = np.alpha[1], b1 = np.beta[0];
            const double geom = geom_sum(a2, np.d);
            const double rec = a1 * std::pow(a2, static_cast<double>(np.d - 1)) +
                               (np.d >= 2 ? np.beta2 * geom_sum(a2, np.d - 1) : 0.0);
            return pre * std::sqrt(b1 * b1 * geom * geom * np.B_x * np.B_x +
                                   rec * rec * np.B_h * np.B_h);
        }
    }
    throw std::logic_error("bound_corollary: unreachable");
}

double bound_fastrnn(double alpha_F, double beta_F, double B, double a, std::size_t T,
                     std::size_t m, FastRnnVariant variant) {
    require(a >= 0.0 && a <= 1.0, "bound_fastrnn: a must lie in [0,1]");
    if (a == 0.0) return 0.0;  // both forms carry the 2a/sqrt(m) prefactor
    const double pre = 2.0 * a * B * beta_F / std::sqrt(static_cast<double>(m));
    const double x = 2.0 * alpha_F - 1.0;
    if (variant == FastRnnVariant::General) {
        // ((1+ax)^{T+1} - 1)/(ax) is the geometric sum of ratio 1 + ax.
        return pre * geom_sum(1.0 + a * x, T + 1);
    }
    require(x > 0.0, "bound_fastrnn: small-a variant needs alpha_F > 1/2");
    const double threshold = 1.0 / (2.0 * x * static_cast<double>(T));
    if (a > threshold)
        throw std::invalid_argument("bound_fastrnn: small-a variant requires a <= " +
                                    std::to_string(threshold));
    return pre * (2.0 * a * x * static_cast<double>(T + 1) - 1.0) / x;
}

double bound_spectralrnn(double W_F, double U_F, double Y_F, double W_2, double U_2,
                         double Y_2, double B, std::size_t T, double gamma, double xi,
                         std::size_t m, double delta) {
    require(gamma > 0.0, "bound_spectralrnn: gamma must be positive");
    require(delta > 0.0 && delta < 1.0, "bound_spectralrnn: delta must be in (0,1)");
    require(xi > 1.0, "bound_spectralrnn: xi must exceed 1");
    const double zeta =
        std::max(std::pow(W_2, 2.0 * static_cast<double>(T) - 2.0), 1.0) *
        std::max(U_2 * U_2, 1.0) * std::max(Y_2 * Y_2, 1.0);
    const double t4 = std::pow(static_cast<double>(T), 4.0);
    const double main = (B * B * t4 * xi * std::log(xi) / (gamma * gamma)) *
                        (W_F * W_F + U_F * U_F + Y_F * Y_F) * zeta;
    return std::sqrt((main + std::log(static_cast<double>(m) / delta)) /
                     static_cast<double>(m));
}

double bound_rw_d1(double alpha1, double beta1, double B_x, std::size_t T, std::size_t n,
                   std::size_t h, std::size_t m) {
    const double num = 4.0 * static_cast<double>(T) * std::log(2.0) +
                       std::log(static_cast<double>(n)) + std::log(static_cast<double>(h));
    return std::sqrt(num / static_cast<double>(m)) * std::sqrt(2.0) * beta1 *
           geom_sum(alpha1, T) * B_x;
}

double gen_error_bound(double rademacher, double eta, double delta, std::size_t m) {
    require(eta >= 0.0, "gen_error_bound: eta must be nonnegative");
    require(delta > 0.0 && delta < 1.0, "gen_error_bound: delta must be in (0,1)");
    require(m >= 1, "gen_error_bound: m must be >= 1");
    return 2.0 * rademacher +
           4.0 * eta * std::sqrt(2.0 * std::log(4.0 / delta) / static_cast<double>(m));
}

NormProfile norms_from_params(const ModelParams& p, const std::vector<FrameSequence>& seqs) {
    require(!seqs.empty(), "norms_from_params: empty dataset");
    const std::size_t m = seqs.size();
    const std::size_t T = seqs[0].frames.size();

    NormProfile np;
    np.d = p.d;
    np.T = T;
    np.n = p.n;
    np.h = p.h;
    np.m = m;
    np.h0_inf = norm_inf(p.h0);

    switch (p.variant) {
        case NetworkVariant::Reweighted:
        case NetworkVariant::L1L1: {
            const BuiltWeights bw = build_weights(p);
            for (std::size_t l = 0; l < p.d; ++l) {
                np.alpha.push_back(norm_1_inf(bw.W[l]));
                np.beta.push_back(norm_1_inf(bw.U[l]));
            }
            break;
        }
        case NetworkVariant::Sista: {
            np.alpha.push_back(norm_1_inf(p.sw1));
            for (std::size_t l = 1; l < p.d; ++l) np.alpha.push_back(norm_1_inf(p.sw2));
            np.beta.assign(p.d, norm_1_inf(p.su1));
            np.beta2 = norm_1_inf(p.su2);
            break;
        }
        case NetworkVariant::Vanilla: {
            for (std::size_t l = 0; l < p.d; ++l) {
                np.alpha.push_back(norm_1_inf(p.vw[l]));
                np.beta.push_back(norm_1_inf(p.vu[l]));
            }
            break;
        }
    }

    // Row l2 norms of the stacked measurement and hidden-state matrices,
    // X_t in R^{n x m} and H_t in R^{h x m}, maxima over time.
    DenseMatrix X(p.n, m), H(p.h, m);
    std::vector<ForwardTrace> traces(m);
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < m; ++i) traces[i] = forward(p, sense(p.A, seqs[i].frames));

    double bx = 0.0, bh = 0.0;
    // H_0 replicates h0 across columns.
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t r = 0; r < p.h; ++r) H(r, i) = p.h0[r];
    bh = norm_2_inf(H);
    for (std::size_t t = 0; t < T; ++t) {
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t r = 0; r < p.n; ++r) X(r, i) = traces[i].x_seq[t][r];
            const DenseVector& ht = traces[i].steps[t].layers.back().h;
            for (std::size_t r = 0; r < p.h; ++r) H(r, i) = ht[r];
        }
        bx = std::max(bx, norm_2_inf(X));
        if (t + 1 < T) bh = std::max(bh, norm_2_inf(H));  // only previous states matter
    }
    const double root_m = std::sqrt(static_cast<double>(m));
    np.B_x = bx / root_m;
    np.B_h = bh / root_m;
    return np;
}

std::vector<double> empirical_gap(const std::vector<double>& train_mse,
                                  const std::vector<double>& val_mse) {
    require(train_mse.size() == val_mse.size(), "empirical_gap: history length mismatch");
    std::vector<double> out(train_mse.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = val_mse[i] - train_mse[i];
    return out;
}

BoundReport report_for_params(const ModelParams& p, const std::vector<FrameSequence>& seqs,
                              std::size_t T, double eta, double delta) {
    NormProfile np = norms_from_params(p, seqs);
    np.T = T;

    BoundReport rep;
    double tightest = -1.0;
    switch (p.variant) {
        case NetworkVariant::Reweighted:
        case NetworkVariant::L1L1:
            rep.values["theorem2"] = bound_theorem2(np);
            rep.values["cor1"] = bound_corollary(np, CorollaryId::Cor1);
            if (p.variant == NetworkVariant::L1L1)
                rep.values["cor2"] = bound_corollary(np, CorollaryId::Cor2);
            if (p.d == 1)
                rep.values["rw_d1"] =
                    bound_rw_d1(np.alpha[0], np.beta[0], np.B_x, T, np.n, np.h, np.m);
            tightest = rep.values["theorem2"];
            break;
        case NetworkVariant::Sista: {
            NormProfile padded = np;
            if (padded.alpha.size() < 2)  // d = 1: alpha2 multiplies nothing
                padded.alpha.push_back(norm_1_inf(p.sw2));
            rep.values["cor2"] = bound_corollary(padded, CorollaryId::Cor2);
            rep.values["cor3"] = bound_corollary(padded, CorollaryId::Cor3);
            tightest = rep.values["cor3"];
            break;
        }
        case NetworkVariant::Vanilla:
            // No unfolding-family formula covers the per-layer recurrence;
            // only the measured norms are reported.
            break;
    }
    for (std::size_t l = 0; l < np.alpha.size(); ++l) {
        rep.values["alpha" + std::to_string(l + 1)] = np.alpha[l];
        rep.values["beta" + std::to_string(l + 1)] = np.beta[l];
    }
    rep.values["B_x"] = np.B_x;
    rep.values["B_h"] = np.B_h;
    rep.values["h0_inf"] = np.h0_inf;
    if (tightest >= 0.0) rep.values["gen_error"] = gen_error_bound(tightest, eta, delta, np.m);
    return rep;
}

}  // namespace seqsparse
