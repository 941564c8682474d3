#include "seqsparse/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "seqsparse/bounds.hpp"
#include "seqsparse/checkpoint.hpp"
#include "seqsparse/data.hpp"
#include "seqsparse/linalg.hpp"
#include "seqsparse/solvers.hpp"
#include "seqsparse/train.hpp"

namespace seqsparse {

namespace {

using nlohmann::json;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

struct MetricsRow {
    std::size_t seq;
    double mse;
    double psnr_db;
    double objective = std::numeric_limits<double>::quiet_NaN();
    bool has_objective = false;
};

std::string metrics_to_csv(const std::vector<MetricsRow>& rows) {
    const bool obj = !rows.empty() && rows[0].has_objective;
    std::ostringstream out;
    out << (obj ? "seq,mse,psnr,objective\n" : "seq,mse,psnr\n");
    double mse_sum = 0.0, psnr_sum = 0.0;
    for (const auto& r : rows) {
        out << r.seq << ',' << fmt(r.mse) << ',' << fmt(r.psnr_db);
        if (obj) out << ',' << fmt(r.objective);
        out << '\n';
        mse_sum += r.mse;
        psnr_sum += r.psnr_db;
    }
    if (!rows.empty()) {
        const auto n = static_cast<double>(rows.size());
        out << "# mean_mse=" << fmt(mse_sum / n) << " mean_psnr=" << fmt(psnr_sum / n) << '\n';
    }
    return out.str();
}

std::string metrics_to_json(const std::vector<MetricsRow>& rows) {
    json j;
    j["rows"] = json::array();
    double mse_sum = 0.0, psnr_sum = 0.0;
    for (const auto& r : rows) {
        json row = {{"seq", r.seq}, {"mse", r.mse}, {"psnr", r.psnr_db}};
        if (r.has_objective) row["objective"] = r.objective;
        j["rows"].push_back(row);
        mse_sum += r.mse;
        psnr_sum += r.psnr_db;
    }
    if (!rows.empty()) {
        j["mean_mse"] = mse_sum / static_cast<double>(rows.size());
        j["mean_psnr"] = psnr_sum / static_cast<double>(rows.size());
    }
    return j.dump(2) + "\n";
}

double mean_frame_psnr(const std::vector<DenseVector>& s, const std::vector<DenseVector>& sh) {
    double acc = 0.0;
    for (std::size_t t = 0; t < s.size(); ++t) acc += psnr(s[t], sh[t]);
    return acc / static_cast<double>(s.size());
}

double per_pixel_mse(const std::vector<DenseVector>& s, const std::vector<DenseVector>& sh) {
    return seq_loss(s, sh) / static_cast<double>(s.size() * s[0].size());
}

// ---- gen-data ----------------------------------------------------------

struct GenArgs {
    std::string kind;
    std::size_t count = 10;
    std::size_t T = 8;
    std::size_t n0 = 64;
    std::size_t latent_h = 128;
    std::size_t sparsity = 8;
    double resample_frac = 0.1;
    double innovation = 0.1;
    std::size_t side = 16;
    std::size_t square = 4;
    std::string idx_path;
    std::size_t decimate = 0;
    std::uint64_t seed = 0;
    std::string out;
};

int cmd_gen_data(const GenArgs& a) {
    Dataset ds;
    if (a.kind == "synthetic-sparse") {
        ds = gen_synthetic_sparse(a.count, a.T, a.n0, a.latent_h, a.sparsity, a.seed,
                                  a.resample_frac, a.innovation);
    } else if (a.kind == "moving-square") {
        ds = gen_moving_square(a.count, a.T, a.side, a.square, a.seed);
    } else if (a.kind == "idx-import") {
        const auto frames = load_idx(a.idx_path, a.decimate);
        const std::size_t n0 = frames.empty() ? 0 : frames[0].size();
        ds = dataset_from_frames(frames, a.T, n0, a.idx_path);
        ds.meta.seed = a.seed;
    } else {
        throw CLI::ValidationError("--kind", "unknown kind " + a.kind);
    }
    split(ds, 0.8, 0.1, 0.1, a.seed);
    save_dataset(ds, a.out);

    std::ifstream mf(a.out + "/manifest.json");
    std::cout << mf.rdbuf();
    return 0;
}

// ---- train ---------------------------------------------------------------

struct TrainArgs {
    std::string model = "reweighted";
    std::string dataset;
    std::string out;
    std::size_t depth = 3;
    std::size_t hidden = 128;
    double cs_rate = 0.2;
    TrainConfig cfg;
    bool freeze_sensing = false;
};

int cmd_train(const TrainArgs& a) {
    const Dataset ds = load_dataset(a.dataset);
    const auto variant = variant_from_name(a.model);
    const auto n = static_cast<std::size_t>(std::llround(a.cs_rate * static_cast<double>(ds.meta.n0)));
    require(n >= 1, "train: cs rate yields zero measurements");

    ModelParams p = init_params(variant, n, ds.meta.n0, a.hidden, a.depth, a.cfg.seed);
    TrainConfig cfg = a.cfg;
    cfg.train_sensing = !a.freeze_sensing;
    const TrainResult res = train_loop(p, ds, cfg);

    std::filesystem::create_directories(a.out);
    write_history_csv(res.history, a.out + "/history.csv");
    save_checkpoint(res.params, a.out, res.history.size(), cfg.seed);

    std::cout << "trained " << a.model << " for " << res.history.size()
              << " epochs; final train_mse=" << fmt(res.history.back().train_mse)
              << " val_mse=" << fmt(res.history.back().val_mse) << "\n";
    return 0;
}

// ---- eval ----------------------------------------------------------------

SplitTag tag_of(const std::string& s) {
    if (s == "train") return SplitTag::Train;
    if (s == "val") return SplitTag::Val;
    if (s == "test") return SplitTag::Test;
    throw CLI::ValidationError("--split", "unknown split " + s);
}

int cmd_eval(const std::string& checkpoint, const std::string& dataset, const std::string& out,
             const std::string& split_name, const std::string& format) {
    const Checkpoint ck = load_checkpoint(checkpoint);
    const Dataset ds = load_dataset(dataset);
    require(ck.params.n0 == ds.meta.n0, "eval: checkpoint n0 != dataset n0");
    const auto idx = ds.indices_of(tag_of(split_name));
    require(!idx.empty(), "eval: empty split " + split_name);

    std::vector<MetricsRow> rows(idx.size());
#pragma omp parallel for schedule(dynamic)
    for (std::size_t k = 0; k < idx.size(); ++k) {
        const auto& frames = ds.seqs[idx[k]].frames;
        const auto tr = forward(ck.params, sense(ck.params.A, frames));
        const auto sh = tr.s_hat_all();
        rows[k] = {idx[k], per_pixel_mse(frames, sh), mean_frame_psnr(frames, sh), 0.0, false};
    }
    const std::string text = format == "json" ? metrics_to_json(rows) : metrics_to_csv(rows);
    if (!out.empty())
        write_text(out, text);
    else
        std::cout << text;
    return 0;
}

// ---- solve ---------------------------------------------------------------

struct SolveArgs {
    std::string algo = "alg1";
    std::string dataset;
    std::string out;
    std::string format = "csv";
    double lambda1 = 0.1;
    double lambda2 = 0.1;
    std::size_t iters = 50;
    double cs_rate = 0.2;
    std::size_t hidden = 128;
    std::uint64_t seed = 0;
};

int cmd_solve(const SolveArgs& a) {
    const Dataset ds = load_dataset(a.dataset);
    const auto idx = ds.indices_of(SplitTag::Test);
    require(!idx.empty(), "solve: dataset has no test split");

    const auto n = static_cast<std::size_t>(
        std::llround(a.cs_rate * static_cast<double>(ds.meta.n0)));
    require(n >= 1 && a.hidden >= ds.meta.n0, "solve: bad cs rate or hidden size");

    // Fixed (non-learned) sensing and dictionary derived from the seed.
    SeededRng rng(a.seed);
    DenseMatrix A(n, ds.meta.n0);
    const double a_std = 1.0 / std::sqrt(static_cast<double>(n));
    for (std::size_t i = 0; i < A.size(); ++i) A.data()[i] = a_std * rng.normal();
    const DenseMatrix D = dct_dictionary(ds.meta.n0, a.hidden);
    const DenseMatrix B = mat_mul(A, D);
    const double c = std::max(spectral_upper(gram(B), 100, a.seed), 1e-8);
    const DenseMatrix G = DenseMatrix::identity(a.hidden);
    const std::vector<DenseMatrix> Z(std::max<std::size_t>(a.iters, 1),
                                     DenseMatrix::identity(a.hidden));
    const std::vector<DenseVector> gvec(std::max<std::size_t>(a.iters, 1),
                                        DenseVector(a.hidden, 1.0));
    const DenseVector h_zero(a.hidden);

    std::vector<MetricsRow> rows(idx.size());
#pragma omp parallel for schedule(dynamic)
    for (std::size_t k = 0; k < idx.size(); ++k) {
        const auto& frames = ds.seqs[idx[k]].frames;
        const auto xs = sense(A, frames);
        std::vector<DenseVector> sh(frames.size());
        double obj = 0.0;
        if (a.algo == "alg1") {
            SolverConfig cfg{std::max<std::size_t>(a.iters, 1), a.lambda1, a.lambda2, c};
            const auto codes = algorithm1(xs, A, D, G, Z, gvec, h_zero, cfg);
            DenseVector prev = h_zero;
            for (std::size_t t = 0; t < frames.size(); ++t) {
                const DenseVector& code =
                    a.iters == 0 ? h_zero : codes.final_code(t);
                sh[t] = mat_vec(D, code);
                obj += objective_seq(code, xs[t], prev, A, D, G, Z[0], gvec[0], a.lambda1,
                                     a.lambda2);
                prev = code;
            }
        } else {
            for (std::size_t t = 0; t < frames.size(); ++t) {
                const DenseVector code =
                    a.algo == "ista"
                        ? ista(xs[t], A, D, a.lambda1, c, a.iters, h_zero)
                        : fista(xs[t], A, D, a.lambda1, c, a.iters, h_zero);
                sh[t] = mat_vec(D, code);
                obj += objective_l1(xs[t], B, code, a.lambda1);
            }
        }
        rows[k] = {idx[k], per_pixel_mse(frames, sh), mean_frame_psnr(frames, sh),
                   obj / static_cast<double>(frames.size()), true};
    }
    const std::string text =
        a.format == "json" ? metrics_to_json(rows) : metrics_to_csv(rows);
    if (!a.out.empty())
        write_text(a.out, text);
    else
        std::cout << text;
    return 0;
}

// ---- bounds ----------------------------------------------------------------

struct BoundsArgs {
    std::string checkpoint;
    std::string dataset;
    std::string out;
    std::size_t T = 0;  // 0: dataset's T
    double eta = 1.0;
    double delta = 0.05;
    std::string sweep;    // "lo:hi" over T
    std::string sweep_d;  // "lo:hi" over depth
    std::vector<double> fastrnn;   // alpha_F beta_F B a
    std::vector<double> spectral;  // W_F U_F Y_F W_2 U_2 Y_2 B gamma xi
};

int cmd_bounds(const BoundsArgs& a) {
    const Checkpoint ck = load_checkpoint(a.checkpoint);
    const Dataset ds = load_dataset(a.dataset);
    std::vector<FrameSequence> train_seqs;
    for (std::size_t i : ds.indices_of(SplitTag::Train)) train_seqs.push_back(ds.seqs[i]);
    require(!train_seqs.empty(), "bounds: dataset has no train split");
    const std::size_t T = a.T ? a.T : ds.meta.T;

    auto enrich = [&](BoundReport& rep, std::size_t horizon) {
        if (a.fastrnn.size() == 4) {
            const double af = a.fastrnn[0], bf = a.fastrnn[1], B = a.fastrnn[2],
                         av = a.fastrnn[3];
            rep.values["fastrnn_a"] =
                bound_fastrnn(af, bf, B, av, horizon, train_seqs.size(),
                              FastRnnVariant::General);
            const double x = 2.0 * af - 1.0;
            if (x > 0.0 && av <= 1.0 / (2.0 * x * static_cast<double>(horizon)))
                rep.values["fastrnn_b"] = bound_fastrnn(af, bf, B, av, horizon,
                                                        train_seqs.size(),
                                                        FastRnnVariant::SmallA);
        }
        if (a.spectral.size() == 9) {
            rep.values["spectralrnn"] = bound_spectralrnn(
                a.spectral[0], a.spectral[1], a.spectral[2], a.spectral[3], a.spectral[4],
                a.spectral[5], a.spectral[6], horizon, a.spectral[7], a.spectral[8],
                train_seqs.size(), a.delta);
        }
    };

    auto parse_range = [](const std::string& text, const char* flag) {
        const auto colon = text.find(':');
        require(colon != std::string::npos, std::string("bounds: ") + flag + " wants lo:hi");
        const std::size_t lo = std::stoul(text.substr(0, colon));
        const std::size_t hi = std::stoul(text.substr(colon + 1));
        require(lo >= 1 && hi >= lo, std::string("bounds: bad range for ") + flag);
        return std::make_pair(lo, hi);
    };
    auto emit_rows = [&](const char* axis,
                         const std::vector<std::pair<std::size_t, BoundReport>>& reports) {
        // Union of keys across rows keeps the csv schema stable.
        std::vector<std::string> keys;
        for (const auto& [t, rep] : reports)
            for (const auto& [k, v] : rep.values)
                if (std::find(keys.begin(), keys.end(), k) == keys.end()) keys.push_back(k);
        std::sort(keys.begin(), keys.end());
        std::ostringstream csv;
        csv << axis;
        for (const auto& k : keys) csv << ',' << k;
        csv << '\n';
        for (const auto& [t, rep] : reports) {
            csv << t;
            for (const auto& k : keys) {
                csv << ',';
                const auto it = rep.values.find(k);
                if (it != rep.values.end()) csv << fmt(it->second);
            }
            csv << '\n';
        }
        if (!a.out.empty())
            write_text(a.out, csv.str());
        else
            std::cout << csv.str();
    };

    if (!a.sweep.empty()) {
        const auto [lo, hi] = parse_range(a.sweep, "--sweep-T");
        std::vector<std::pair<std::size_t, BoundReport>> reports;
        for (std::size_t t = lo; t <= hi; ++t) {
            BoundReport rep = report_for_params(ck.params, train_seqs, t, a.eta, a.delta);
            enrich(rep, t);
            reports.emplace_back(t, std::move(rep));
        }
        emit_rows("T", reports);
        return 0;
    }

    if (!a.sweep_d.empty()) {
        // Depth sweep on the measured profile; layers past the measured depth
        // reuse the last layer's norms (exact for the tied-weight variants).
        const auto [lo, hi] = parse_range(a.sweep_d, "--sweep-d");
        NormProfile base = norms_from_params(ck.params, train_seqs);
        base.T = T;
        std::vector<std::pair<std::size_t, BoundReport>> reports;
        for (std::size_t dd = lo; dd <= hi; ++dd) {
            NormProfile np = base;
            np.d = dd;
            np.alpha.resize(dd, base.alpha.back());
            np.beta.resize(dd, base.beta.back());
            BoundReport rep;
            rep.values["theorem2"] = bound_theorem2(np);
            rep.values["cor1"] = bound_corollary(np, CorollaryId::Cor1);
            if (np.alpha.size() >= 2) {
                rep.values["cor2"] = bound_corollary(np, CorollaryId::Cor2);
                rep.values["cor3"] = bound_corollary(np, CorollaryId::Cor3);
            }
            rep.values["gen_error"] =
                gen_error_bound(rep.values["theorem2"], a.eta, a.delta, np.m);
            reports.emplace_back(dd, std::move(rep));
        }
        emit_rows("d", reports);
        return 0;
    }

    BoundReport rep = report_for_params(ck.params, train_seqs, T, a.eta, a.delta);
    enrich(rep, T);
    const std::string text = rep.to_json() + "\n";
    if (!a.out.empty())
        write_text(a.out, text);
    else
        std::cout << text;
    return 0;
}

// ---- gradcheck -------------------------------------------------------------

int cmd_gradcheck(const std::string& model, std::uint64_t seed, double step, bool corrupt) {
    const auto variant = variant_from_name(model);
    FdReport rep = gradcheck_instance(variant, seed, step, corrupt ? 1.0 : 0.0);
    std::printf("finite-difference check: %s, step %.3g%s\n", model.c_str(), rep.step,
                rep.step_coarse ? " (step looks too coarse for a reliable check)" : "");
    for (const auto& g : rep.groups)
        std::printf("  %-14s max_rel_err %.3e  checked %zu  excluded %zu\n", g.name.c_str(),
                    g.max_rel_err, g.checked, g.excluded);
    const bool pass = rep.max_rel_err < 1e-4;
    std::printf("max relative error %.3e -> %s\n", rep.max_rel_err, pass ? "PASS" : "FAIL");
    return pass ? 0 : 3;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    apply_thread_config();

    CLI::App app{"sequential sparse-signal recovery toolkit"};
    app.require_subcommand(1);

    GenArgs gen;
    auto* sc_gen = app.add_subcommand("gen-data", "generate or import a dataset");
    sc_gen->add_option("--kind", gen.kind, "synthetic-sparse | moving-square | idx-import")
        ->required()
        ->check(CLI::IsMember({"synthetic-sparse", "moving-square", "idx-import"}));
    sc_gen->add_option("--count", gen.count, "number of sequences");
    sc_gen->add_option("--T", gen.T, "frames per sequence");
    sc_gen->add_option("--n0", gen.n0, "signal dimension (synthetic-sparse)");
    sc_gen->add_option("--latent-h", gen.latent_h, "latent code length (synthetic-sparse)");
    sc_gen->add_option("--sparsity", gen.sparsity, "nonzeros per code (synthetic-sparse)");
    sc_gen->add_option("--resample-frac", gen.resample_frac, "support churn per step");
    sc_gen->add_option("--innovation", gen.innovation, "per-step value noise");
    sc_gen->add_option("--side", gen.side, "frame side (moving-square)");
    sc_gen->add_option("--square", gen.square, "square side (moving-square)");
    sc_gen->add_option("--idx", gen.idx_path, "IDX image file (idx-import)");
    sc_gen->add_option("--decimate", gen.decimate, "target side for bilinear decimation");
    sc_gen->add_option("--seed", gen.seed, "rng seed")->required();
    sc_gen->add_option("--out", gen.out, "output directory")->required();

    TrainArgs tr;
    auto* sc_train = app.add_subcommand("train", "train a network on a dataset");
    sc_train->add_option("--model", tr.model, "reweighted | l1l1 | sista | vanilla")
        ->required()
        ->check(CLI::IsMember({"reweighted", "l1l1", "sista", "vanilla"}));
    sc_train->add_option("--dataset", tr.dataset, "dataset directory")->required();
    sc_train->add_option("--out", tr.out, "output directory")->required();
    sc_train->add_option("--depth", tr.depth, "hidden layers d");
    sc_train->add_option("--hidden", tr.hidden, "hidden units h");
    sc_train->add_option("--cs-rate", tr.cs_rate, "n / n0");
    sc_train->add_option("--epochs", tr.cfg.epochs, "training epochs");
    sc_train->add_option("--batch", tr.cfg.batch_size, "batch size");
    sc_train->add_option("--lr", tr.cfg.lr, "initial learning rate");
    sc_train->add_option("--clip", tr.cfg.clip_norm, "global gradient-norm cap");
    sc_train->add_option("--patience", tr.cfg.plateau_patience, "plateau patience (epochs)");
    sc_train->add_option("--factor", tr.cfg.plateau_factor, "plateau lr factor");
    sc_train->add_option("--seed", tr.cfg.seed, "rng seed")->required();
    sc_train->add_flag("--freeze-sensing", tr.freeze_sensing, "do not train A");

    std::string ev_ck, ev_ds, ev_out, ev_split = "test", ev_fmt = "csv";
    auto* sc_eval = app.add_subcommand("eval", "reconstruction metrics for a checkpoint");
    sc_eval->add_option("--checkpoint", ev_ck, "checkpoint directory")->required();
    sc_eval->add_option("--dataset", ev_ds, "dataset directory")->required();
    sc_eval->add_option("--out", ev_out, "output file (default stdout)");
    sc_eval->add_option("--split", ev_split, "train | val | test")
        ->check(CLI::IsMember({"train", "val", "test"}));
    sc_eval->add_option("--format", ev_fmt, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}));

    SolveArgs so;
    auto* sc_solve = app.add_subcommand("solve", "classical reconstruction baselines");
    sc_solve->add_option("--algo", so.algo, "ista | fista | alg1")
        ->required()
        ->check(CLI::IsMember({"ista", "fista", "alg1"}));
    sc_solve->add_option("--dataset", so.dataset, "dataset directory")->required();
    sc_solve->add_option("--out", so.out, "output file (default stdout)");
    sc_solve->add_option("--format", so.format, "csv | json");
    sc_solve->add_option("--lambda1", so.lambda1, "sparsity weight");
    sc_solve->add_option("--lambda2", so.lambda2, "temporal-similarity weight (alg1)");
    sc_solve->add_option("--iters", so.iters, "iterations / layers");
    sc_solve->add_option("--cs-rate", so.cs_rate, "n / n0");
    sc_solve->add_option("--hidden", so.hidden, "dictionary atoms h");
    sc_solve->add_option("--seed", so.seed, "rng seed for the fixed A")->required();

    BoundsArgs bo;
    auto* sc_bounds = app.add_subcommand("bounds", "generalization-bound report");
    sc_bounds->add_option("--checkpoint", bo.checkpoint, "checkpoint directory")->required();
    sc_bounds->add_option("--dataset", bo.dataset, "dataset directory")->required();
    sc_bounds->add_option("--out", bo.out, "output file (default stdout)");
    sc_bounds->add_option("--T", bo.T, "time horizon (default: dataset T)");
    sc_bounds->add_option("--eta", bo.eta, "loss bound eta");
    sc_bounds->add_option("--delta", bo.delta, "confidence delta");
    sc_bounds->add_option("--sweep-T", bo.sweep, "emit a csv over T = lo:hi");
    sc_bounds->add_option("--sweep-d", bo.sweep_d, "emit a csv over depth = lo:hi");
    sc_bounds->add_option("--fastrnn", bo.fastrnn,
                          "alpha_F beta_F B a: add the gated-cell rows")
        ->expected(4);
    sc_bounds->add_option("--spectral", bo.spectral,
                          "W_F U_F Y_F W_2 U_2 Y_2 B gamma xi: add the spectral row")
        ->expected(9);

    std::string gc_model = "reweighted";
    std::uint64_t gc_seed = 0;
    double gc_step = 1e-6;
    bool gc_corrupt = false;
    auto* sc_gc = app.add_subcommand("gradcheck", "finite-difference gradient check");
    sc_gc->add_option("--model", gc_model, "reweighted | l1l1 | sista | vanilla")
        ->check(CLI::IsMember({"reweighted", "l1l1", "sista", "vanilla"}));
    sc_gc->add_option("--seed", gc_seed, "rng seed")->required();
    sc_gc->add_option("--step", gc_step, "relative step");
    sc_gc->add_flag("--corrupt", gc_corrupt, "negative control: corrupt one gradient entry");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (sc_gen->parsed()) return cmd_gen_data(gen);
        if (sc_train->parsed()) return cmd_train(tr);
        if (sc_eval->parsed()) return cmd_eval(ev_ck, ev_ds, ev_out, ev_split, ev_fmt);
        if (sc_solve->parsed()) return cmd_solve(so);
        if (sc_bounds->parsed()) return cmd_bounds(bo);
        if (sc_gc->parsed()) return cmd_gradcheck(gc_model, gc_seed, gc_step, gc_corrupt);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}

}  // namespace seqsparse
