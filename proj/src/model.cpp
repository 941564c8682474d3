#include "seqsparse/model.hpp"

#include "seqsparse/data.hpp"

namespace seqsparse {

std::string variant_name(NetworkVariant v) {
    switch (v) {
        case NetworkVariant::Reweighted: return "reweighted";
        case NetworkVariant::L1L1: return "l1l1";
        case NetworkVariant::Sista: return "sista";
        case NetworkVariant::Vanilla: return "vanilla";
    }
    return "?";
}

NetworkVariant variant_from_name(const std::string& name) {
    if (name == "reweighted") return NetworkVariant::Reweighted;
    if (name == "l1l1") return NetworkVariant::L1L1;
    if (name == "sista") return NetworkVariant::Sista;
    if (name == "vanilla") return NetworkVariant::Vanilla;
    throw std::invalid_argument("unknown model variant: " + name);
}

DenseVector ModelParams::g(std::size_t l) const {
    DenseVector out(g_raw[l].size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::exp(g_raw[l][i]);
    return out;
}

std::vector<ParamRef> param_refs(ModelParams& p) {
    std::vector<ParamRef> refs;
    auto mat = [&](const std::string& name, DenseMatrix& m) {
        refs.push_back({name, m.data(), m.rows(), m.cols()});
    };
    auto vec = [&](const std::string& name, DenseVector& v) {
        refs.push_back({name, v.data(), v.size(), 1});
    };
    auto scalar = [&](const std::string& name, double& s) {
        refs.push_back({name, &s, 1, 1});
    };

    mat("A", p.A);
    mat("D", p.D);
    switch (p.variant) {
        case NetworkVariant::Reweighted:
            mat("G", p.G);
            vec("h0", p.h0);
            for (std::size_t l = 0; l < p.d; ++l) mat("Z" + std::to_string(l + 1), p.Z[l]);
            for (std::size_t l = 0; l < p.d; ++l) vec("g" + std::to_string(l + 1), p.g_raw[l]);
            scalar("c_raw", p.c_raw);
            scalar("lambda1_raw", p.l1_raw);
            scalar("lambda2_raw", p.l2_raw);
            break;
        case NetworkVariant::L1L1:
            mat("G", p.G);
            vec("h0", p.h0);
            scalar("c_raw", p.c_raw);
            scalar("lambda1_raw", p.l1_raw);
            scalar("lambda2_raw", p.l2_raw);
            break;
        case NetworkVariant::Sista:
            vec("h0", p.h0);
            mat("W1", p.sw1);
            mat("W2", p.sw2);
            mat("U1", p.su1);
            mat("U2", p.su2);
            scalar("gamma_raw", p.sista_gamma_raw);
            break;
        case NetworkVariant::Vanilla:
            vec("h0", p.h0);
            for (std::size_t l = 0; l < p.d; ++l) mat("W" + std::to_string(l + 1), p.vw[l]);
            for (std::size_t l = 0; l < p.d; ++l) mat("U" + std::to_string(l + 1), p.vu[l]);
            for (std::size_t l = 0; l < p.d; ++l)
                scalar("gamma" + std::to_string(l + 1) + "_raw", p.vanilla_gamma_raw[l]);
            break;
    }
    return refs;
}

GradientSet zero_like(const ModelParams& p) {
    GradientSet g;
    g.variant = p.variant;
    g.n = p.n;
    g.n0 = p.n0;
    g.h = p.h;
    g.d = p.d;
    g.A = DenseMatrix(p.A.rows(), p.A.cols());
    g.D = DenseMatrix(p.D.rows(), p.D.cols());
    g.h0 = DenseVector(p.h0.size());
    g.G = DenseMatrix(p.G.rows(), p.G.cols());
    g.Z.assign(p.Z.size(), DenseMatrix(p.h, p.h));
    g.g_raw.assign(p.g_raw.size(), DenseVector(p.h));
    g.c_raw = g.l1_raw = g.l2_raw = 0.0;
    g.sw1 = DenseMatrix(p.sw1.rows(), p.sw1.cols());
    g.sw2 = DenseMatrix(p.sw2.rows(), p.sw2.cols());
    g.su1 = DenseMatrix(p.su1.rows(), p.su1.cols());
    g.su2 = DenseMatrix(p.su2.rows(), p.su2.cols());
    g.sista_gamma_raw = 0.0;
    g.vw.clear();
    g.vu.clear();
    for (const auto& m : p.vw) g.vw.emplace_back(m.rows(), m.cols());
    for (const auto& m : p.vu) g.vu.emplace_back(m.rows(), m.cols());
    g.vanilla_gamma_raw.assign(p.vanilla_gamma_raw.size(), 0.0);
    return g;
}

BuiltWeights build_weights(const ModelParams& p) {
    require(p.variant == NetworkVariant::Reweighted || p.variant == NetworkVariant::L1L1,
            "build_weights: only the unfolded variants construct weights");
    require(p.Z.size() == p.d && p.g_raw.size() == p.d, "build_weights: layer count mismatch");
    const double c = p.c();
    BuiltWeights bw;
    bw.P = mat_mul(p.A, p.D);
    bw.M = gram(bw.P);
    const DenseMatrix Pt = transpose(bw.P);
    bw.W.reserve(p.d);
    bw.U.reserve(p.d);
    for (std::size_t l = 0; l < p.d; ++l) {
        DenseMatrix K = sub(p.Z[l], scale(mat_mul(p.Z[l], bw.M), 1.0 / c));
        if (l == 0) {
            bw.K1 = K;
            bw.W.push_back(mat_mul(K, p.G));
        } else {
            bw.W.push_back(std::move(K));
        }
        bw.U.push_back(scale(mat_mul(p.Z[l], Pt), 1.0 / c));
    }
    return bw;
}

DenseVector reconstruct(const DenseMatrix& D, const DenseVector& h) { return mat_vec(D, h); }

std::vector<DenseVector> ForwardTrace::s_hat_all() const {
    std::vector<DenseVector> out;
    out.reserve(steps.size());
    for (const auto& st : steps) out.push_back(st.s_hat);
    return out;
}

bool ForwardTrace::same_branches(const ForwardTrace& other) const {
    if (steps.size() != other.steps.size()) return false;
    for (std::size_t t = 0; t < steps.size(); ++t) {
        if (steps[t].layers.size() != other.steps[t].layers.size()) return false;
        for (std::size_t l = 0; l < steps[t].layers.size(); ++l)
            if (steps[t].layers[l].branch != other.steps[t].layers[l].branch) return false;
    }
    return true;
}

namespace {

void check_input(const ModelParams& p, const std::vector<DenseVector>& x_seq) {
    require(!x_seq.empty(), "forward: empty input sequence");
    for (const auto& x : x_seq)
        require(x.size() == p.n, "forward: measurement length != n");
    require(p.h0.size() == p.h, "forward: h0 length != h");
}

ForwardTrace forward_unfolded(const ModelParams& p, const BuiltWeights& bw,
                              const std::vector<DenseVector>& x_seq) {
    const double c = p.c();
    const double l1 = p.lambda1(), l2 = p.lambda2();

    // Per-layer element thresholds; they only depend on (lambda1, lambda2, c, g_l).
    std::vector<DenseVector> tau1(p.d), tau2(p.d);
    for (std::size_t l = 0; l < p.d; ++l) {
        const DenseVector gl = p.g(l);
        tau1[l] = DenseVector(p.h);
        tau2[l] = DenseVector(p.h);
        for (std::size_t i = 0; i < p.h; ++i) {
            tau1[l][i] = l1 * gl[i] / c;
            tau2[l][i] = l2 * gl[i] / c;
        }
    }

    ForwardTrace trace;
    trace.variant = p.variant;
    trace.x_seq = x_seq;
    trace.steps.resize(x_seq.size());

    DenseVector hprev = p.h0;
    for (std::size_t t = 0; t < x_seq.size(); ++t) {
        StepTrace& st = trace.steps[t];
        st.hprev = hprev;
        st.anchor = mat_vec(p.G, hprev);
        st.layers.resize(p.d);
        const DenseVector* in = &hprev;  // layer 1 consumes h_{t-1}^{(d)} through W_1
        for (std::size_t l = 0; l < p.d; ++l) {
            LayerTrace& lt = st.layers[l];
            lt.u = mat_vec(bw.W[l], *in);
            axpy(lt.u, 1.0, mat_vec(bw.U[l], x_seq[t]));
            lt.h = DenseVector(p.h);
            lt.branch.resize(p.h);
            for (std::size_t i = 0; i < p.h; ++i) {
                const ProxThresholds th{tau1[l][i], tau2[l][i], st.anchor[i]};
                const ProxValue pv = prox_rw_eval(lt.u[i], th);
                lt.h[i] = pv.value;
                lt.branch[i] = static_cast<std::uint8_t>(pv.branch);
            }
            in = &lt.h;
        }
        st.s_hat = mat_vec(p.D, st.layers.back().h);
        hprev = st.layers.back().h;
    }
    return trace;
}

// Soft-threshold evaluation shared by sista and vanilla; branch 0 dead zone,
// 1 negative slope, 2 positive slope.
void apply_soft(LayerTrace& lt, double gamma) {
    const std::size_t n = lt.u.size();
    lt.h = DenseVector(n);
    lt.branch.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (lt.u[i] > gamma) {
            lt.h[i] = lt.u[i] - gamma;
            lt.branch[i] = 2;
        } else if (lt.u[i] < -gamma) {
            lt.h[i] = lt.u[i] + gamma;
            lt.branch[i] = 1;
        } else {
            lt.h[i] = 0.0;
            lt.branch[i] = 0;
        }
    }
}

ForwardTrace forward_sista(const ModelParams& p, const std::vector<DenseVector>& x_seq) {
    const double gamma = std::exp(p.sista_gamma_raw);
    ForwardTrace trace;
    trace.variant = p.variant;
    trace.x_seq = x_seq;
    trace.steps.resize(x_seq.size());

    DenseVector hprev = p.h0;
    for (std::size_t t = 0; t < x_seq.size(); ++t) {
        StepTrace& st = trace.steps[t];
        st.hprev = hprev;
        st.layers.resize(p.d);
        const DenseVector u1x = mat_vec(p.su1, x_seq[t]);
        for (std::size_t l = 0; l < p.d; ++l) {
            LayerTrace& lt = st.layers[l];
            if (l == 0) {
                lt.u = mat_vec(p.sw1, hprev);
            } else {
                lt.u = mat_vec(p.sw2, st.layers[l - 1].h);
                axpy(lt.u, 1.0, mat_vec(p.su2, hprev));
            }
            axpy(lt.u, 1.0, u1x);
            apply_soft(lt, gamma);
        }
        st.s_hat = mat_vec(p.D, st.layers.back().h);
        hprev = st.layers.back().h;
    }
    return trace;
}

ForwardTrace forward_vanilla(const ModelParams& p, const std::vector<DenseVector>& x_seq) {
    ForwardTrace trace;
    trace.variant = p.variant;
    trace.x_seq = x_seq;
    trace.steps.resize(x_seq.size());

    // Every layer carries its own state through time, all starting from h0.
    std::vector<DenseVector> state(p.d, p.h0);
    for (std::size_t t = 0; t < x_seq.size(); ++t) {
        StepTrace& st = trace.steps[t];
        st.layers.resize(p.d);
        const DenseVector* vin = &x_seq[t];
        for (std::size_t l = 0; l < p.d; ++l) {
            LayerTrace& lt = st.layers[l];
            lt.u = mat_vec(p.vw[l], state[l]);
            axpy(lt.u, 1.0, mat_vec(p.vu[l], *vin));
            apply_soft(lt, std::exp(p.vanilla_gamma_raw[l]));
            state[l] = lt.h;
            vin = &lt.h;
        }
        st.s_hat = mat_vec(p.D, st.layers.back().h);
    }
    return trace;
}

}  // namespace

ForwardTrace forward(const ModelParams& p, const std::vector<DenseVector>& x_seq) {
    check_input(p, x_seq);
    switch (p.variant) {
        case NetworkVariant::Reweighted:
        case NetworkVariant::L1L1: return forward_unfolded(p, build_weights(p), x_seq);
        case NetworkVariant::Sista: return forward_sista(p, x_seq);
        case NetworkVariant::Vanilla: return forward_vanilla(p, x_seq);
    }
    throw std::logic_error("forward: unreachable");
}

ForwardTrace forward(const ModelParams& p, const BuiltWeights& bw,
                     const std::vector<DenseVector>& x_seq) {
    check_input(p, x_seq);
    require(p.variant == NetworkVariant::Reweighted || p.variant == NetworkVariant::L1L1,
            "forward with prebuilt weights: unfolded variants only");
    return forward_unfolded(p, bw, x_seq);
}

ModelParams init_params(NetworkVariant variant, std::size_t n, std::size_t n0, std::size_t h,
                        std::size_t d, std::uint64_t seed) {
    require(n >= 1 && n0 >= 1 && h >= 1 && d >= 1, "init_params: bad dimensions");
    SeededRng rng(seed);

    ModelParams p;
    p.variant = variant;
    p.n = n;
    p.n0 = n0;
    p.h = h;
    p.d = d;

    p.A = DenseMatrix(n, n0);
    const double a_std = 1.0 / std::sqrt(static_cast<double>(n));
    for (std::size_t i = 0; i < p.A.size(); ++i) p.A.data()[i] = a_std * rng.normal();
    p.D = dct_atoms(n0, h);
    p.h0 = DenseVector(h);

    const DenseMatrix P = mat_mul(p.A, p.D);
    const double c = std::max(spectral_upper(gram(P), 100, seed ^ 0x9e3779b97f4a7c15ULL), 1e-8);
    p.c_raw = std::log(c);
    const double log_lo = std::log(1e-5), log_hi = std::log(3.0);
    p.l1_raw = rng.uniform(log_lo, log_hi);
    p.l2_raw = rng.uniform(log_lo, log_hi);

    p.G = DenseMatrix::identity(h);
    p.Z.assign(d, DenseMatrix::identity(h));
    p.g_raw.assign(d, DenseVector(h));

    const double gamma_raw = p.l1_raw - p.c_raw;  // log(lambda1 / c)
    const DenseMatrix Pt_over_c = scale(transpose(P), 1.0 / c);
    if (variant == NetworkVariant::Sista) {
        // One proximal-gradient step as the starting operator.
        DenseMatrix K = sub(DenseMatrix::identity(h), scale(gram(P), 1.0 / c));
        p.sw1 = K;
        p.sw2 = std::move(K);
        p.su1 = Pt_over_c;
        p.su2 = DenseMatrix(h, h);
        p.sista_gamma_raw = gamma_raw;
    } else {
        p.sw1 = p.sw2 = p.su2 = DenseMatrix();
        p.su1 = DenseMatrix();
    }
    if (variant == NetworkVariant::Vanilla) {
        // Generic stacked cells with the usual uniform(+-1/sqrt(fan_in))
        // weight init; no unfolding prior.
        const double bound_h = 1.0 / std::sqrt(static_cast<double>(h));
        p.vw.clear();
        p.vu.clear();
        for (std::size_t l = 0; l < d; ++l) {
            DenseMatrix W(h, h);
            for (std::size_t i = 0; i < W.size(); ++i)
                W.data()[i] = rng.uniform(-bound_h, bound_h);
            p.vw.push_back(std::move(W));
            const std::size_t fan_in = l == 0 ? n : h;
            const double bound_u = 1.0 / std::sqrt(static_cast<double>(fan_in));
            DenseMatrix U(h, fan_in);
            for (std::size_t i = 0; i < U.size(); ++i)
                U.data()[i] = rng.uniform(-bound_u, bound_u);
            p.vu.push_back(std::move(U));
        }
        p.vanilla_gamma_raw.assign(d, gamma_raw);
    }
    return p;
}

}  // namespace seqsparse
