#pragma once

#include <map>
#include <string>
#include <vector>

#include "seqsparse/data.hpp"
#include "seqsparse/model.hpp"

namespace seqsparse {

/// Measured norm inputs for the generalization bounds: alpha[l] bounds
/// ||W_l||_{1,inf} (max row l1 norm), beta[l] bounds ||U_l||_{1,inf},
/// B_x and B_h bound the per-coordinate row l2 norms of the stacked
/// measurements and hidden states divided by sqrt(m).
struct NormProfile {
    std::vector<double> alpha;
    std::vector<double> beta;
    double beta2 = 0.0;  // second input-map norm (sista only)
    double B_x = 0.0;
    double B_h = 0.0;
    double h0_inf = 0.0;
    std::size_t d = 1;
    std::size_t T = 1;
    std::size_t n = 1;
    std::size_t h = 1;
    std::size_t m = 1;
};

/// Named bound values keyed by formula id (theorem2, cor1, cor2, cor3,
/// fastrnn_a, fastrnn_b, spectralrnn, rw_d1, gen_error).
struct BoundReport {
    std::map<std::string, double> values;
    std::string to_json() const;
};

/// Lambda_l = prod_{k=l+1}^{d} alpha_k, with Lambda_d = 1.
double capital_lambda(const std::vector<double>& alpha, std::size_t l);

/// Whole-sequence complexity bound for the reweighted network:
/// sqrt(2(4dT log2 + log n + log h)/m)
///   * sqrt((sum_l beta_l Lambda_l)^2 geom(Lambda_0,T)^2 B_x^2
///          + Lambda_0^{2T} ||h0||_inf^2).
double bound_theorem2(const NormProfile& np);

enum class CorollaryId { Cor1, Cor2, Cor3 };

/// Per-time-step complexity bounds. Cor1 takes the full alpha/beta lists;
/// Cor2 uses (alpha1, alpha2, beta1); Cor3 adds beta2.
double bound_corollary(const NormProfile& np, CorollaryId which);

enum class FastRnnVariant { General, SmallA };

/// The fast gated-cell bounds under a + b = 1. The General form equals
/// (2a/sqrt(m)) B beta_F geom(1 + a(2 alpha_F - 1), T+1); SmallA requires
/// a <= 1/(2(2 alpha_F - 1) T) and errors with that threshold otherwise.
double bound_fastrnn(double alpha_F, double beta_F, double B, double a, std::size_t T,
                     std::size_t m, FastRnnVariant variant);

/// Spectral-norm generalization expression with implied constant 1:
/// sqrt((B^2 T^4 xi ln(xi) / gamma^2)(W_F^2 + U_F^2 + Y_F^2) zeta
///      + ln(m/delta)) / sqrt(m),
/// zeta = max(W_2^{2T-2},1) max(U_2^2,1) max(Y_2^2,1).
double bound_spectralrnn(double W_F, double U_F, double Y_F, double W_2, double U_2,
                         double Y_2, double B, std::size_t T, double gamma, double xi,
                         std::size_t m, double delta);

/// Single-layer whole-sequence bound (h0 = 0):
/// sqrt((4T log2 + log n + log h)/m) * sqrt(2) beta1 geom(alpha1,T) B_x.
double bound_rw_d1(double alpha1, double beta1, double B_x, std::size_t T, std::size_t n,
                   std::size_t h, std::size_t m);

/// 2 R + 4 eta sqrt(2 ln(4/delta) / m).
double gen_error_bound(double rademacher, double eta, double delta, std::size_t m);

/// Measures the profile on a parameter set and dataset slice: alpha/beta
/// from the constructed (or free) layer matrices, B_x and B_h from sensing
/// and running the network over the m given sequences, the maxima taken
/// across time steps.
NormProfile norms_from_params(const ModelParams& p, const std::vector<FrameSequence>& seqs);

/// val_mse - train_mse per epoch.
std::vector<double> empirical_gap(const std::vector<double>& train_mse,
                                  const std::vector<double>& val_mse);

/// All formulas applicable to the variant, plus gen_error from the tightest
/// applicable complexity (eta supplied by the caller; the 1-Lipschitz loss
/// assumption is the caller's to meet).
BoundReport report_for_params(const ModelParams& p, const std::vector<FrameSequence>& seqs,
                              std::size_t T, double eta, double delta);

}  // namespace seqsparse
