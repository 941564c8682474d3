#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "seqsparse/dense.hpp"
#include "seqsparse/linalg.hpp"
#include "seqsparse/prox.hpp"

namespace seqsparse {

enum class NetworkVariant { Reweighted, L1L1, Sista, Vanilla };

std::string variant_name(NetworkVariant v);
NetworkVariant variant_from_name(const std::string& name);

/// The trainable set. Positivity of c, lambda1, lambda2, the per-layer
/// weight vectors and the shrinkage gammas is built in through exponential
/// reparameterization: only the *_raw fields are trained.
///
/// All four network variants share this container; which fields are live is
/// decided by `variant` (see param_refs for the authoritative list). The
/// unfolded variants keep Z and g_raw materialized even when pinned to the
/// identity (L1L1) so that both run the exact same forward arithmetic.
struct ModelParams {
    NetworkVariant variant = NetworkVariant::Reweighted;
    std::size_t n = 0;   // measurements
    std::size_t n0 = 0;  // signal dimension
    std::size_t h = 0;   // code dimension / hidden units
    std::size_t d = 1;   // layers

    DenseMatrix A;   // n x n0 sensing matrix
    DenseMatrix D;   // n0 x h dictionary
    DenseVector h0;  // initial code

    // Unfolded variants.
    DenseMatrix G;                   // h x h temporal transform
    std::vector<DenseMatrix> Z;      // d reweighting matrices, h x h
    std::vector<DenseVector> g_raw;  // d log weight vectors, g_l = exp(g_raw[l])
    double c_raw = 0.0;
    double l1_raw = 0.0;
    double l2_raw = 0.0;

    // Sista: free weights, shared shrinkage threshold.
    DenseMatrix sw1, sw2;  // h x h
    DenseMatrix su1;       // h x n
    DenseMatrix su2;       // h x h
    double sista_gamma_raw = 0.0;

    // Vanilla stacked cells: per-layer recurrence and input map.
    std::vector<DenseMatrix> vw;        // d recurrent maps, h x h
    std::vector<DenseMatrix> vu;        // vu[0] is h x n, the rest h x h
    std::vector<double> vanilla_gamma_raw;

    double c() const { return std::exp(c_raw); }
    double lambda1() const { return std::exp(l1_raw); }
    double lambda2() const { return std::exp(l2_raw); }
    DenseVector g(std::size_t l) const;
};

/// Flat view of one named parameter tensor (scalars have size 1).
struct ParamRef {
    std::string name;
    double* data;
    std::size_t rows;  // rows*cols == size; vectors and scalars use cols == 1
    std::size_t cols;
    std::size_t size() const { return rows * cols; }
};

/// The variant's live parameters in a fixed, documented order. This single
/// enumeration drives checkpoints, the optimizer, gradient clipping and the
/// finite-difference checks, so they can never disagree about what is
/// trainable.
std::vector<ParamRef> param_refs(ModelParams& p);

/// Gradients mirror the parameter container shape-for-shape; the *_raw
/// fields hold derivatives with respect to the raw (reparameterized) values.
using GradientSet = ModelParams;

GradientSet zero_like(const ModelParams& p);

/// Layer matrices constructed from the underlying parameter set. Rebuilt on
/// every forward pass so gradients reach A, D, Z_l, G and c.
/// W[0] = (Z_1 - (1/c) Z_1 M) G, W[l] = Z_{l+1} - (1/c) Z_{l+1} M for l >= 1,
/// U[l] = (1/c) Z_{l+1} P^T, with P = A D and M = P^T P.
struct BuiltWeights {
    std::vector<DenseMatrix> W;  // d entries, h x h
    std::vector<DenseMatrix> U;  // d entries, h x n
    DenseMatrix P;               // A D, kept for the backward pass
    DenseMatrix M;               // P^T P
    DenseMatrix K1;              // Z_1 - (1/c) Z_1 M (W[0] before the G factor)
};

BuiltWeights build_weights(const ModelParams& p);

/// Everything the backward pass needs to replay one forward evaluation:
/// pre-activations, codes and the active shrinkage branch per element.
/// For the unfolded variants branch ids follow ProxBranch; for the
/// soft-threshold variants 0 = dead zone, 1 = negative slope, 2 = positive.
struct LayerTrace {
    DenseVector u;
    DenseVector h;
    std::vector<std::uint8_t> branch;
};

struct StepTrace {
    DenseVector hprev;   // h_{t-1}^{(d)} entering this step (unfolded, sista)
    DenseVector anchor;  // G hprev (unfolded variants only)
    std::vector<LayerTrace> layers;
    DenseVector s_hat;
};

struct ForwardTrace {
    NetworkVariant variant = NetworkVariant::Reweighted;
    std::vector<DenseVector> x_seq;
    std::vector<StepTrace> steps;

    std::size_t T() const { return steps.size(); }
    const DenseVector& s_hat(std::size_t t) const { return steps[t].s_hat; }
    std::vector<DenseVector> s_hat_all() const;
    bool same_branches(const ForwardTrace& other) const;
};

ForwardTrace forward(const ModelParams& p, const std::vector<DenseVector>& x_seq);

/// Unfolded-variant forward reusing weights already constructed from p;
/// bit-identical to forward(p, x_seq) as long as bw == build_weights(p).
ForwardTrace forward(const ModelParams& p, const BuiltWeights& bw,
                     const std::vector<DenseVector>& x_seq);

/// s = D h.
DenseVector reconstruct(const DenseMatrix& D, const DenseVector& h);

/// Fresh parameters for a variant. A is Gaussian with variance 1/n, D the
/// overcomplete DCT dictionary, G and Z start at the identity, g_raw and h0
/// at zero, c at the spectral upper bound of (A D)^T (A D), and lambda1,
/// lambda2 are drawn log-uniform from [1e-5, 3]. Sista and the vanilla stack
/// start from the matching one-step shrinkage operator: W free parts at
/// zero or identity, input maps at (1/c) (A D)^T, gamma at lambda1 / c.
ModelParams init_params(NetworkVariant variant, std::size_t n, std::size_t n0, std::size_t h,
                        std::size_t d, std::uint64_t seed);

}  // namespace seqsparse
