#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "seqsparse/data.hpp"
#include "seqsparse/model.hpp"

namespace seqsparse {

struct TrainConfig {
    std::size_t epochs = 200;
    std::size_t batch_size = 32;
    double lr = 3e-4;
    double clip_norm = 0.25;
    std::size_t plateau_patience = 5;
    double plateau_factor = 0.3;
    std::uint64_t seed = 0;
    bool train_sensing = true;  // when false the sensing matrix A is frozen
};

/// Sum over t of ||s_t - s_hat_t||_2^2 for one sequence.
double seq_loss(const std::vector<DenseVector>& s_seq, const std::vector<DenseVector>& s_hat);

/// Mean over the batch of the per-sequence loss.
double loss_seq_mse(const std::vector<std::vector<DenseVector>>& s_batch,
                    const std::vector<std::vector<DenseVector>>& s_hat_batch);

/// Exact reverse-mode gradients of seq_loss with respect to every raw
/// parameter of the trace's variant: through the reconstruction, the
/// piecewise activations (flat-branch subgradient at breakpoints), the
/// weight construction, and — when measurement_path is set — the sensing
/// x_t = A s_t.
GradientSet backward(const ForwardTrace& trace, const ModelParams& p,
                     const std::vector<DenseVector>& s_seq, bool measurement_path = true);

/// Global l2 norm over the variant's live parameters.
double global_norm(GradientSet& g);

/// Scales all gradients by max_norm / norm when the global norm exceeds
/// max_norm; identity otherwise. Idempotent.
void clip_global_norm(GradientSet& g, double max_norm);

/// Standard Adam with bias correction. Moment tensors are laid out in
/// param_refs order.
struct AdamState {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    std::size_t step = 0;
    std::vector<std::vector<double>> m;
    std::vector<std::vector<double>> v;
};

AdamState make_adam_state(ModelParams& p);
void adam_step(ModelParams& p, GradientSet& g, AdamState& state, double lr);

/// Validation-plateau learning-rate schedule: after `patience` consecutive
/// epochs without a new best validation loss, lr is multiplied by `factor`
/// once and the window restarts (the historical best is kept).
struct PlateauSchedule {
    double lr;
    std::size_t patience;
    double factor;

    double best = std::numeric_limits<double>::infinity();
    std::size_t wait = 0;

    /// Feeds one epoch's validation loss; returns the lr for the next epoch.
    double observe(double val_loss) {
        if (val_loss < best) {
            best = val_loss;
            wait = 0;
        } else if (++wait >= patience) {
            lr *= factor;
            wait = 0;
        }
        return lr;
    }
};

struct EpochRecord {
    std::size_t epoch;
    double train_mse;
    double val_mse;
    double lr;
};

struct TrainResult {
    std::vector<EpochRecord> history;
    ModelParams params;
};

/// Mini-batch Adam on the dataset's train split with the validation-plateau
/// schedule: after plateau_patience consecutive epochs without a new best
/// validation loss the learning rate is multiplied by plateau_factor and the
/// window restarts. Deterministic given (params, dataset, cfg): per-sequence
/// gradients may be computed in parallel but are reduced in index order.
TrainResult train_loop(const ModelParams& init, const Dataset& ds, const TrainConfig& cfg);

/// Central finite differences against backward() on one sequence.
struct FdGroupReport {
    std::string name;
    double max_rel_err = 0.0;
    std::size_t checked = 0;
    std::size_t excluded = 0;  // coordinates whose perturbation switched a branch
};

struct FdReport {
    double step = 0.0;
    bool step_coarse = false;  // flagged when step >= 1e-3
    double max_rel_err = 0.0;
    std::vector<FdGroupReport> groups;
};

/// corruption, when nonzero, is added to the first analytic gradient entry
/// before comparing — a negative control for the check itself.
FdReport finite_diff_check(const ModelParams& p, const std::vector<DenseVector>& s_seq,
                           double step = 1e-6, double corruption = 0.0);

/// The canonical tiny gradcheck instance (n0=8, n=4, h=12, d=2, T=3).
FdReport gradcheck_instance(NetworkVariant variant, std::uint64_t seed, double step = 1e-6,
                            double corruption = 0.0);

void write_history_csv(const std::vector<EpochRecord>& history, const std::string& path);

}  // namespace seqsparse
