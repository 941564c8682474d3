#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "seqsparse/dense.hpp"

namespace seqsparse {

enum class SplitTag : std::uint8_t { Train = 0, Val = 1, Test = 2 };

/// One sequence of ground-truth frames s_1..s_T (and, when sensed,
/// measurements x_1..x_T). The synthetic generator also keeps the latent
/// codes it rendered from.
struct FrameSequence {
    std::vector<DenseVector> frames;
    std::vector<DenseVector> measurements;  // optional, filled by sense()
    std::vector<DenseVector> latent_codes;  // synthetic-sparse only
};

/// Everything needed to regenerate a dataset byte-for-byte.
struct DatasetMeta {
    std::string kind;  // synthetic-sparse | moving-square | idx-import
    std::uint64_t seed = 0;
    std::size_t count = 0;
    std::size_t T = 0;
    std::size_t n0 = 0;

    // synthetic-sparse knobs
    std::size_t latent_h = 0;
    std::size_t sparsity = 0;
    double resample_frac = 0.1;
    double innovation = 0.1;

    // moving-square knobs
    std::size_t side = 16;
    std::size_t square = 4;

    // idx-import provenance (not regenerable without the source file)
    std::string source;
};

struct Dataset {
    DatasetMeta meta;
    std::vector<FrameSequence> seqs;
    std::vector<SplitTag> tags;  // empty until split() assigns them

    std::vector<std::size_t> indices_of(SplitTag tag) const;
};

/// Correlated sparse sequences: a k-sparse Gaussian code whose support is
/// 10% resampled per step (resample_frac) with small Gaussian innovation on
/// the values, rendered through a fixed DCT dictionary.
Dataset gen_synthetic_sparse(std::size_t count, std::size_t T, std::size_t n0, std::size_t h,
                             std::size_t k, std::uint64_t seed, double resample_frac = 0.1,
                             double innovation = 0.1);

/// A bright square on a dark background moving with constant integer
/// velocity and reflecting at the walls.
Dataset gen_moving_square(std::size_t count, std::size_t T, std::size_t side = 16,
                          std::size_t square = 4, std::uint64_t seed = 0);

/// Deterministic renderer behind gen_moving_square, exposed for tests.
FrameSequence render_square_sequence(std::size_t T, std::size_t side, std::size_t square,
                                     long px, long py, long vx, long vy);

/// Fills seq.measurements with x_t = A s_t.
void sense(const DenseMatrix& A, FrameSequence& seq);
std::vector<DenseVector> sense(const DenseMatrix& A, const std::vector<DenseVector>& frames);

/// n0 x h matrix of type-II cosine atoms, column j at frequency j of h,
/// each column normalized to unit l2 norm. Any h >= 1 is valid; widths below
/// n0 arise when a network is narrower than the signal.
DenseMatrix dct_atoms(std::size_t n0, std::size_t h);

/// The overcomplete DCT dictionary: dct_atoms with h >= n0 enforced.
/// h == n0 gives the orthonormal DCT.
DenseMatrix dct_dictionary(std::size_t n0, std::size_t h);

/// 10 log10(peak^2 / MSE) in dB, capped at 100 when MSE < peak^2 * 1e-10.
double psnr(const DenseVector& s, const DenseVector& s_hat, double peak = 1.0);

/// Seeded permutation then contiguous split; fractions must sum to 1.
void split(Dataset& ds, double train_frac, double val_frac, double test_frac,
           std::uint64_t seed);

/// IDX image file (magic 0x00000803, big-endian header, u8 pixels) scaled to
/// [0,1]. If target_side > 0 each frame is decimated to target_side x
/// target_side with a box (bilinear-average) kernel; the source side must be
/// an integer multiple of the target.
std::vector<DenseVector> load_idx(const std::string& path, std::size_t target_side = 0);

/// Builds a dataset by grouping imported frames into sequences of length T
/// (a trailing remainder is dropped).
Dataset dataset_from_frames(const std::vector<DenseVector>& frames, std::size_t T,
                            std::size_t n0, const std::string& source);

/// On-disk layout: <dir>/manifest.json plus <dir>/data.bin holding all
/// frames as little-endian doubles, sequence-major then time-major.
void save_dataset(const Dataset& ds, const std::string& dir);
Dataset load_dataset(const std::string& dir);

/// Regenerates a generated dataset from its metadata (kind, seed, dims).
Dataset regenerate(const DatasetMeta& meta);

}  // namespace seqsparse
