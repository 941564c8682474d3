#include "seqsparse/train.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>

namespace seqsparse {

double seq_loss(const std::vector<DenseVector>& s_seq, const std::vector<DenseVector>& s_hat) {
    require(s_seq.size() == s_hat.size(), "seq_loss: sequence length mismatch");
    double acc = 0.0;
    for (std::size_t t = 0; t < s_seq.size(); ++t) {
        require(s_seq[t].size() == s_hat[t].size(), "seq_loss: frame length mismatch");
        for (std::size_t i = 0; i < s_seq[t].size(); ++i) {
            const double e = s_seq[t][i] - s_hat[t][i];
            acc += e * e;
        }
    }
    return acc;
}

double loss_seq_mse(const std::vector<std::vector<DenseVector>>& s_batch,
                    const std::vector<std::vector<DenseVector>>& s_hat_batch) {
    require(s_batch.size() == s_hat_batch.size(), "loss_seq_mse: batch size mismatch");
    require(!s_batch.empty(), "loss_seq_mse: empty batch");
    double acc = 0.0;
    for (std::size_t i = 0; i < s_batch.size(); ++i) acc += seq_loss(s_batch[i], s_hat_batch[i]);
    return acc / static_cast<double>(s_batch.size());
}

namespace {

// Stage one of the unfolded backward pass: adjoints of the constructed layer
// matrices plus everything that does not flow through the construction.
// Summing these over a batch and running the construction chain once is
// equivalent to chaining per sequence (the chain is linear in dW, dU).
struct StagedGrads {
    GradientSet direct;
    std::vector<DenseMatrix> dW, dU;
};

void accumulate(GradientSet& into, const GradientSet& g) {
    auto dst = param_refs(into);
    auto src = param_refs(const_cast<GradientSet&>(g));
    for (std::size_t r = 0; r < dst.size(); ++r)
        for (std::size_t i = 0; i < dst[r].size(); ++i) dst[r].data[i] += src[r].data[i];
}

void accumulate(StagedGrads& into, const StagedGrads& g) {
    accumulate(into.direct, g.direct);
    for (std::size_t l = 0; l < g.dW.size(); ++l) {
        for (std::size_t i = 0; i < g.dW[l].size(); ++i)
            into.dW[l].data()[i] += g.dW[l].data()[i];
        for (std::size_t i = 0; i < g.dU[l].size(); ++i)
            into.dU[l].data()[i] += g.dU[l].data()[i];
    }
}

void rescale(StagedGrads& g, double s) {
    auto refs = param_refs(g.direct);
    for (auto& r : refs)
        for (std::size_t i = 0; i < r.size(); ++i) r.data[i] *= s;
    for (std::size_t l = 0; l < g.dW.size(); ++l) {
        for (std::size_t i = 0; i < g.dW[l].size(); ++i) g.dW[l].data()[i] *= s;
        for (std::size_t i = 0; i < g.dU[l].size(); ++i) g.dU[l].data()[i] *= s;
    }
}

// Soft-threshold branch derivative w.r.t. gamma: branch 1 is the negative
// slope (+1), branch 2 the positive slope (-1), dead zone 0.
inline double soft_dgamma(std::uint8_t branch) {
    return branch == 1 ? 1.0 : (branch == 2 ? -1.0 : 0.0);
}

StagedGrads backward_unfolded_staged(const ForwardTrace& trace, const ModelParams& p,
                                     const BuiltWeights& bw,
                                     const std::vector<DenseVector>& s_seq,
                                     bool measurement_path) {
    const std::size_t T = trace.T(), d = p.d, h = p.h;
    const double c = p.c(), l1 = p.lambda1(), l2 = p.lambda2();

    StagedGrads sg;
    sg.direct = zero_like(p);
    sg.dW.assign(d, DenseMatrix(h, h));
    sg.dU.assign(d, DenseMatrix(h, p.n));
    GradientSet& gr = sg.direct;

    // Threshold adjoints per layer: gt1[l][i] collects d(loss)/d(t1_{l,i}).
    std::vector<DenseVector> gt1(d, DenseVector(h)), gt2(d, DenseVector(h));

    DenseVector carry(h);  // adjoint into h_t^{(d)} arriving from step t+1
    for (std::size_t t = T; t-- > 0;) {
        const StepTrace& st = trace.steps[t];
        DenseVector gs(st.s_hat.size());
        for (std::size_t i = 0; i < gs.size(); ++i) gs[i] = 2.0 * (st.s_hat[i] - s_seq[t][i]);

        add_outer(gr.D, 1.0, gs, st.layers.back().h);
        DenseVector gh = mat_tvec(p.D, gs);
        axpy(gh, 1.0, carry);

        DenseVector ganchor(h), ghprev(h), gx(p.n);
        for (std::size_t l = d; l-- > 0;) {
            const LayerTrace& lt = st.layers[l];
            DenseVector gu(h);
            for (std::size_t i = 0; i < h; ++i) {
                const ProxPartials pr = branch_partials(
                    static_cast<ProxBranch>(lt.branch[i]), st.anchor[i] >= 0.0);
                gu[i] = gh[i] * pr.d_u;
                ganchor[i] += gh[i] * pr.d_anchor;
                gt1[l][i] += gh[i] * pr.d_t1;
                gt2[l][i] += gh[i] * pr.d_t2;
            }
            const DenseVector& input = (l == 0) ? st.hprev : st.layers[l - 1].h;
            add_outer(sg.dW[l], 1.0, gu, input);
            add_outer(sg.dU[l], 1.0, gu, trace.x_seq[t]);
            if (measurement_path) axpy(gx, 1.0, mat_tvec(bw.U[l], gu));
            DenseVector gin = mat_tvec(bw.W[l], gu);
            if (l > 0)
                gh = std::move(gin);
            else
                axpy(ghprev, 1.0, gin);
        }
        add_outer(gr.G, 1.0, ganchor, st.hprev);
        axpy(ghprev, 1.0, mat_tvec(p.G, ganchor));
        if (measurement_path) add_outer(gr.A, 1.0, gx, s_seq[t]);
        carry = std::move(ghprev);
    }
    axpy(gr.h0, 1.0, carry);

    // Thresholds t1 = lambda1 g_l / c, t2 = lambda2 g_l / c.
    double dl1 = 0.0, dl2 = 0.0, dc = 0.0;
    for (std::size_t l = 0; l < d; ++l) {
        const DenseVector gl = p.g(l);
        double s1 = 0.0, s2 = 0.0;
        for (std::size_t i = 0; i < h; ++i) {
            s1 += gt1[l][i] * gl[i];
            s2 += gt2[l][i] * gl[i];
            const double dgi = (l1 * gt1[l][i] + l2 * gt2[l][i]) / c;
            gr.g_raw[l][i] += dgi * gl[i];
        }
        dl1 += s1 / c;
        dl2 += s2 / c;
        dc -= (l1 * s1 + l2 * s2) / (c * c);
    }
    gr.l1_raw += dl1 * l1;
    gr.l2_raw += dl2 * l2;
    gr.c_raw += dc * c;  // the construction chain adds its own c term later
    return sg;
}

// Stage two: push the summed layer-matrix adjoints through
// W_1 = K_1 G, K_l = Z_l - (1/c) Z_l M, U_l = (1/c) Z_l P^T,
// M = P^T P, P = A D.
void finish_weight_chain(const ModelParams& p, const BuiltWeights& bw,
                         const std::vector<DenseMatrix>& dW,
                         const std::vector<DenseMatrix>& dU, GradientSet& gr) {
    const double c = p.c();
    const std::size_t h = p.h;
    DenseMatrix dM(h, h);
    DenseMatrix dP(p.n, h);
    double dc = 0.0;

    for (std::size_t l = 0; l < p.d; ++l) {
        DenseMatrix dK;
        const DenseMatrix* K = nullptr;
        if (l == 0) {
            dK = mat_mul_t(dW[0], p.G);  // dW1 G^T
            DenseMatrix dG = mat_tmul(bw.K1, dW[0]);
            for (std::size_t i = 0; i < dG.size(); ++i) gr.G.data()[i] += dG.data()[i];
            K = &bw.K1;
        } else {
            dK = dW[l];
            K = &bw.W[l];
        }
        // K_l = Z_l (I - M/c):  dZ = dK (I - M/c),  dM -= Z^T dK / c,
        // dc += frob(Z - K, dK) / c  [since Z M = c (Z - K)].
        {
            DenseMatrix dKM = mat_mul(dK, bw.M);
            for (std::size_t i = 0; i < dK.size(); ++i)
                gr.Z[l].data()[i] += dK.data()[i] - dKM.data()[i] / c;
        }
        {
            DenseMatrix ztdk = mat_tmul(p.Z[l], dK);
            for (std::size_t i = 0; i < dM.size(); ++i) dM.data()[i] -= ztdk.data()[i] / c;
        }
        dc += (frob_dot(p.Z[l], dK) - frob_dot(*K, dK)) / c;

        // U_l = (1/c) Z_l P^T: dZ += dU P / c, dP += dU^T Z / c,
        // dc -= frob(U, dU) / c.
        {
            DenseMatrix dUP = mat_mul(dU[l], bw.P);
            for (std::size_t i = 0; i < dUP.size(); ++i) gr.Z[l].data()[i] += dUP.data()[i] / c;
        }
        {
            DenseMatrix dUtZ = mat_tmul(dU[l], p.Z[l]);
            for (std::size_t i = 0; i < dP.size(); ++i) dP.data()[i] += dUtZ.data()[i] / c;
        }
        dc -= frob_dot(bw.U[l], dU[l]) / c;
    }

    // M = P^T P.
    {
        DenseMatrix sym(h, h);
        for (std::size_t i = 0; i < h; ++i)
            for (std::size_t j = 0; j < h; ++j) sym(i, j) = dM(i, j) + dM(j, i);
        DenseMatrix PdM = mat_mul(bw.P, sym);
        for (std::size_t i = 0; i < dP.size(); ++i) dP.data()[i] += PdM.data()[i];
    }
    // P = A D.
    {
        DenseMatrix dA = mat_mul_t(dP, p.D);
        for (std::size_t i = 0; i < dA.size(); ++i) gr.A.data()[i] += dA.data()[i];
        DenseMatrix dD = mat_tmul(p.A, dP);
        for (std::size_t i = 0; i < dD.size(); ++i) gr.D.data()[i] += dD.data()[i];
    }
    gr.c_raw += dc * c;
}

GradientSet backward_sista(const ForwardTrace& trace, const ModelParams& p,
                           const std::vector<DenseVector>& s_seq, bool measurement_path) {
    const std::size_t T = trace.T(), d = p.d, h = p.h;
    const double gamma = std::exp(p.sista_gamma_raw);
    GradientSet gr = zero_like(p);
    double dgamma = 0.0;

    DenseVector carry(h);
    for (std::size_t t = T; t-- > 0;) {
        const StepTrace& st = trace.steps[t];
        DenseVector gs(st.s_hat.size());
        for (std::size_t i = 0; i < gs.size(); ++i) gs[i] = 2.0 * (st.s_hat[i] - s_seq[t][i]);
        add_outer(gr.D, 1.0, gs, st.layers.back().h);
        DenseVector gh = mat_tvec(p.D, gs);
        axpy(gh, 1.0, carry);

        DenseVector ghprev(h), gx(p.n);
        for (std::size_t l = d; l-- > 0;) {
            const LayerTrace& lt = st.layers[l];
            DenseVector gu(h);
            for (std::size_t i = 0; i < h; ++i) {
                gu[i] = lt.branch[i] == 0 ? 0.0 : gh[i];
                dgamma += gh[i] * soft_dgamma(lt.branch[i]);
            }
            add_outer(gr.su1, 1.0, gu, trace.x_seq[t]);
            if (measurement_path) axpy(gx, 1.0, mat_tvec(p.su1, gu));
            if (l == 0) {
                add_outer(gr.sw1, 1.0, gu, st.hprev);
                axpy(ghprev, 1.0, mat_tvec(p.sw1, gu));
            } else {
                add_outer(gr.sw2, 1.0, gu, st.layers[l - 1].h);
                add_outer(gr.su2, 1.0, gu, st.hprev);
                axpy(ghprev, 1.0, mat_tvec(p.su2, gu));
                gh = mat_tvec(p.sw2, gu);
            }
        }
        if (measurement_path) add_outer(gr.A, 1.0, gx, s_seq[t]);
        carry = std::move(ghprev);
    }
    axpy(gr.h0, 1.0, carry);
    gr.sista_gamma_raw = dgamma * gamma;
    return gr;
}

GradientSet backward_vanilla(const ForwardTrace& trace, const ModelParams& p,
                             const std::vector<DenseVector>& s_seq, bool measurement_path) {
    const std::size_t T = trace.T(), d = p.d, h = p.h;
    GradientSet gr = zero_like(p);
    std::vector<double> dgamma(d, 0.0);

    // carry[l]: adjoint into h_t^{(l)} arriving from step t+1 via vw[l].
    std::vector<DenseVector> carry(d, DenseVector(h));
    for (std::size_t t = T; t-- > 0;) {
        const StepTrace& st = trace.steps[t];
        DenseVector gs(st.s_hat.size());
        for (std::size_t i = 0; i < gs.size(); ++i) gs[i] = 2.0 * (st.s_hat[i] - s_seq[t][i]);
        add_outer(gr.D, 1.0, gs, st.layers.back().h);

        DenseVector from_above;  // adjoint via vu[l+1] of the layer above
        DenseVector gx(p.n);
        for (std::size_t l = d; l-- > 0;) {
            const LayerTrace& lt = st.layers[l];
            DenseVector a = carry[l];
            if (l == d - 1)
                axpy(a, 1.0, mat_tvec(p.D, gs));
            else
                axpy(a, 1.0, from_above);

            DenseVector gu(h);
            for (std::size_t i = 0; i < h; ++i) {
                gu[i] = lt.branch[i] == 0 ? 0.0 : a[i];
                dgamma[l] += a[i] * soft_dgamma(lt.branch[i]);
            }
            const DenseVector& prev_state = (t > 0) ? trace.steps[t - 1].layers[l].h : p.h0;
            add_outer(gr.vw[l], 1.0, gu, prev_state);
            carry[l] = mat_tvec(p.vw[l], gu);

            const DenseVector& vin = (l == 0) ? trace.x_seq[t] : st.layers[l - 1].h;
            add_outer(gr.vu[l], 1.0, gu, vin);
            if (l == 0) {
                if (measurement_path) gx = mat_tvec(p.vu[0], gu);
            } else {
                from_above = mat_tvec(p.vu[l], gu);
            }
        }
        if (measurement_path) add_outer(gr.A, 1.0, gx, s_seq[t]);
    }
    for (std::size_t l = 0; l < d; ++l) {
        axpy(gr.h0, 1.0, carry[l]);
        gr.vanilla_gamma_raw[l] = dgamma[l] * std::exp(p.vanilla_gamma_raw[l]);
    }
    return gr;
}

}  // namespace

GradientSet backward(const ForwardTrace& trace, const ModelParams& p,
                     const std::vector<DenseVector>& s_seq, bool measurement_path) {
    require(trace.T() == s_seq.size(), "backward: trace vs target length");
    require(trace.variant == p.variant, "backward: trace was produced by another variant");
    switch (p.variant) {
        case NetworkVariant::Reweighted:
        case NetworkVariant::L1L1: {
            const BuiltWeights bw = build_weights(p);
            StagedGrads sg = backward_unfolded_staged(trace, p, bw, s_seq, measurement_path);
            finish_weight_chain(p, bw, sg.dW, sg.dU, sg.direct);
            return std::move(sg.direct);
        }
        case NetworkVariant::Sista: return backward_sista(trace, p, s_seq, measurement_path);
        case NetworkVariant::Vanilla: return backward_vanilla(trace, p, s_seq, measurement_path);
    }
    throw std::logic_error("backward: unreachable");
}

double global_norm(GradientSet& g) {
    double acc = 0.0;
    for (auto& r : param_refs(g))
        for (std::size_t i = 0; i < r.size(); ++i) acc += r.data[i] * r.data[i];
    return std::sqrt(acc);
}

void clip_global_norm(GradientSet& g, double max_norm) {
    require(max_norm > 0.0, "clip_global_norm: max_norm must be positive");
    const double norm = global_norm(g);
    if (norm <= max_norm) return;
    const double s = max_norm / norm;
    for (auto& r : param_refs(g))
        for (std::size_t i = 0; i < r.size(); ++i) r.data[i] *= s;
}

AdamState make_adam_state(ModelParams& p) {
    AdamState st;
    for (const auto& r : param_refs(p)) {
        st.m.emplace_back(r.size(), 0.0);
        st.v.emplace_back(r.size(), 0.0);
    }
    return st;
}

void adam_step(ModelParams& p, GradientSet& g, AdamState& state, double lr) {
    auto prefs = param_refs(p);
    auto grefs = param_refs(g);
    require(prefs.size() == grefs.size() && prefs.size() == state.m.size(),
            "adam_step: parameter/gradient/state layout mismatch");
    state.step += 1;
    const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
    for (std::size_t r = 0; r < prefs.size(); ++r) {
        require(prefs[r].size() == grefs[r].size(), "adam_step: shape mismatch at " +
                                                        prefs[r].name);
        double* m = state.m[r].data();
        double* v = state.v[r].data();
        for (std::size_t i = 0; i < prefs[r].size(); ++i) {
            const double gi = grefs[r].data[i];
            m[i] = state.beta1 * m[i] + (1.0 - state.beta1) * gi;
            v[i] = state.beta2 * v[i] + (1.0 - state.beta2) * gi * gi;
            const double mhat = m[i] / bc1;
            const double vhat = v[i] / bc2;
            prefs[r].data[i] -= lr * mhat / (std::sqrt(vhat) + state.epsilon);
        }
    }
}

TrainResult train_loop(const ModelParams& init, const Dataset& ds, const TrainConfig& cfg) {
    require(!ds.tags.empty(), "train_loop: dataset has no split tags");
    const auto train_idx = ds.indices_of(SplitTag::Train);
    const auto val_idx = ds.indices_of(SplitTag::Val);
    require(!train_idx.empty(), "train_loop: empty train split");
    require(!val_idx.empty(), "train_loop: empty validation split");
    require(cfg.epochs >= 1 && cfg.batch_size >= 1, "train_loop: bad config");

    const bool unfolded = init.variant == NetworkVariant::Reweighted ||
                          init.variant == NetworkVariant::L1L1;

    TrainResult result;
    result.params = init;
    ModelParams& p = result.params;
    AdamState adam = make_adam_state(p);
    double lr = cfg.lr;
    SeededRng rng(cfg.seed);

    auto eval_loss = [&](const std::vector<std::size_t>& idx) {
        const BuiltWeights bw = unfolded ? build_weights(p) : BuiltWeights{};
        std::vector<double> losses(idx.size());
#pragma omp parallel for schedule(dynamic)
        for (std::size_t k = 0; k < idx.size(); ++k) {
            const auto& frames = ds.seqs[idx[k]].frames;
            const auto xs = sense(p.A, frames);
            const ForwardTrace tr = unfolded ? forward(p, bw, xs) : forward(p, xs);
            losses[k] = seq_loss(frames, tr.s_hat_all());
        }
        double acc = 0.0;
        for (double v : losses) acc += v;
        return acc / static_cast<double>(idx.size());
    };

    PlateauSchedule schedule{cfg.lr, cfg.plateau_patience, cfg.plateau_factor};

    std::vector<std::size_t> order = train_idx;
    for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
        // In-epoch shuffle, Fisher-Yates on the shared rng stream.
        for (std::size_t i = order.size(); i > 1; --i) {
            const auto j =
                static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i) - 1));
            std::swap(order[i - 1], order[j]);
        }

        // Per-sequence losses keyed by dataset index so the epoch average is
        // summed in one fixed order no matter how the epoch was shuffled.
        std::vector<double> epoch_loss(ds.seqs.size(), 0.0);
        for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
            const std::size_t count = std::min(cfg.batch_size, order.size() - start);
            const BuiltWeights bw = unfolded ? build_weights(p) : BuiltWeights{};

            std::vector<StagedGrads> per_seq(count);
            std::vector<double> per_loss(count);
#pragma omp parallel for schedule(dynamic)
            for (std::size_t k = 0; k < count; ++k) {
                const auto& frames = ds.seqs[order[start + k]].frames;
                const auto xs = sense(p.A, frames);
                if (unfolded) {
                    const ForwardTrace tr = forward(p, bw, xs);
                    per_loss[k] = seq_loss(frames, tr.s_hat_all());
                    per_seq[k] = backward_unfolded_staged(tr, p, bw, frames, cfg.train_sensing);
                } else {
                    const ForwardTrace tr = forward(p, xs);
                    per_loss[k] = seq_loss(frames, tr.s_hat_all());
                    per_seq[k].direct = backward(tr, p, frames, cfg.train_sensing);
                }
            }

            // Deterministic reduction: fixed index order regardless of the
            // parallel completion order above.
            StagedGrads batch = std::move(per_seq[0]);
            for (std::size_t k = 1; k < count; ++k) accumulate(batch, per_seq[k]);
            rescale(batch, 1.0 / static_cast<double>(count));
            if (unfolded) finish_weight_chain(p, bw, batch.dW, batch.dU, batch.direct);
            for (std::size_t k = 0; k < count; ++k) epoch_loss[order[start + k]] = per_loss[k];

            GradientSet& grad = batch.direct;
            if (!cfg.train_sensing) grad.A.fill(0.0);
            clip_global_norm(grad, cfg.clip_norm);
            for (auto& r : param_refs(grad))
                for (std::size_t i = 0; i < r.size(); ++i)
                    require(std::isfinite(r.data[i]), "train_loop: non-finite gradient in " +
                                                          r.name);
            adam_step(p, grad, adam, lr);
        }

        double train_loss_sum = 0.0;
        for (std::size_t i : train_idx) train_loss_sum += epoch_loss[i];
        const double train_mse = train_loss_sum / static_cast<double>(order.size());
        const double val_mse = eval_loss(val_idx);
        result.history.push_back({epoch, train_mse, val_mse, lr});
        lr = schedule.observe(val_mse);
    }
    return result;
}

FdReport finite_diff_check(const ModelParams& p, const std::vector<DenseVector>& s_seq,
                           double step, double corruption) {
    require(step > 0.0, "finite_diff_check: step must be positive");

    auto eval = [&s_seq](const ModelParams& q) {
        const auto xs = sense(q.A, s_seq);
        ForwardTrace tr = forward(q, xs);
        return std::make_pair(seq_loss(s_seq, tr.s_hat_all()), std::move(tr));
    };

    auto [f0, trace0] = eval(p);
    (void)f0;
    GradientSet grads = backward(trace0, p, s_seq, true);
    if (corruption != 0.0) *param_refs(grads).front().data += corruption;

    ModelParams q = p;
    auto qrefs = param_refs(q);
    auto grefs = param_refs(grads);

    FdReport report;
    report.step = step;
    report.step_coarse = step >= 1e-3;
    for (std::size_t r = 0; r < qrefs.size(); ++r) {
        FdGroupReport group;
        group.name = qrefs[r].name;
        for (std::size_t i = 0; i < qrefs[r].size(); ++i) {
            double& theta = qrefs[r].data[i];
            const double saved = theta;
            const double eps = step * std::max(1.0, std::fabs(saved));

            theta = saved + eps;
            auto [fp, trp] = eval(q);
            theta = saved - eps;
            auto [fm, trm] = eval(q);
            theta = saved;

            // A perturbation that flips any activation branch invalidates the
            // central difference (the loss has a kink inside the stencil).
            if (!trp.same_branches(trace0) || !trm.same_branches(trace0)) {
                ++group.excluded;
                continue;
            }
            const double fd = (fp - fm) / (2.0 * eps);
            const double an = grefs[r].data[i];
            const double rel =
                std::fabs(fd - an) / std::max({1.0, std::fabs(fd), std::fabs(an)});
            group.max_rel_err = std::max(group.max_rel_err, rel);
            ++group.checked;
        }
        report.max_rel_err = std::max(report.max_rel_err, group.max_rel_err);
        report.groups.push_back(std::move(group));
    }
    return report;
}

FdReport gradcheck_instance(NetworkVariant variant, std::uint64_t seed, double step,
                            double corruption) {
    const std::size_t n0 = 8, n = 4, h = 12, d = 2, T = 3;
    ModelParams p = init_params(variant, n, n0, h, d, seed);
    Dataset data = gen_synthetic_sparse(1, T, n0, h, 3, seed ^ 0xd1f4cULL, 0.2, 0.1);
    return finite_diff_check(p, data.seqs[0].frames, step, corruption);
}

void write_history_csv(const std::vector<EpochRecord>& history, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "epoch,train_mse,val_mse,lr\n";
    char buf[128];
    for (const auto& rec : history) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g\n", rec.epoch, rec.train_mse,
                      rec.val_mse, rec.lr);
        out << buf;
    }
}

}  // namespace seqsparse
