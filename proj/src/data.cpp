#include "seqsparse/data.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numeric>

#include <json.hpp>

#include "seqsparse/linalg.hpp"

static_assert(std::endian::native == std::endian::little,
              "sidecar files are little-endian; add byte swapping for this platform");

namespace seqsparse {

using nlohmann::json;

std::vector<std::size_t> Dataset::indices_of(SplitTag tag) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < tags.size(); ++i)
        if (tags[i] == tag) out.push_back(i);
    return out;
}

Dataset gen_synthetic_sparse(std::size_t count, std::size_t T, std::size_t n0, std::size_t h,
                             std::size_t k, std::uint64_t seed, double resample_frac,
                             double innovation) {
    require(T >= 1 && n0 >= 1 && h >= n0, "gen_synthetic_sparse: bad dimensions");
    require(k <= h, "gen_synthetic_sparse: sparsity exceeds code length");

    const DenseMatrix dict = dct_dictionary(n0, h);

    Dataset ds;
    ds.meta.kind = "synthetic-sparse";
    ds.meta.seed = seed;
    ds.meta.count = count;
    ds.meta.T = T;
    ds.meta.n0 = n0;
    ds.meta.latent_h = h;
    ds.meta.sparsity = k;
    ds.meta.resample_frac = resample_frac;
    ds.meta.innovation = innovation;
    ds.seqs.resize(count);

#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < count; ++i) {
        SeededRng rng(seed ^ static_cast<std::uint64_t>(i));
        std::vector<std::size_t> support;
        support.reserve(k);
        // k distinct indices by partial Fisher-Yates.
        std::vector<std::size_t> pool(h);
        std::iota(pool.begin(), pool.end(), std::size_t{0});
        for (std::size_t j = 0; j < k; ++j) {
            const std::size_t pick =
                j + static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(h - j) - 1));
            std::swap(pool[j], pool[pick]);
            support.push_back(pool[j]);
        }
        DenseVector code(h);
        for (std::size_t s : support) code[s] = rng.normal();

        FrameSequence& fs = ds.seqs[i];
        fs.frames.reserve(T);
        fs.latent_codes.reserve(T);
        fs.frames.push_back(mat_vec(dict, code));
        fs.latent_codes.push_back(code);
        const std::size_t n_resample =
            static_cast<std::size_t>(std::lround(resample_frac * static_cast<double>(k)));
        for (std::size_t t = 1; t < T; ++t) {
            for (std::size_t j = 0; j < n_resample; ++j) {
                const std::size_t slot =
                    static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(k) - 1));
                std::size_t fresh;
                do {
                    fresh = static_cast<std::size_t>(
                        rng.uniform_int(0, static_cast<std::int64_t>(h) - 1));
                } while (std::find(support.begin(), support.end(), fresh) != support.end());
                code[support[slot]] = 0.0;
                support[slot] = fresh;
                code[fresh] = rng.normal();
            }
            if (innovation > 0.0)
                for (std::size_t s : support) code[s] += innovation * rng.normal();
            fs.frames.push_back(mat_vec(dict, code));
            fs.latent_codes.push_back(code);
        }
    }
    return ds;
}

FrameSequence render_square_sequence(std::size_t T, std::size_t side, std::size_t square,
                                     long px, long py, long vx, long vy) {
    const long limit = static_cast<long>(side - square);
    FrameSequence fs;
    fs.frames.reserve(T);
    for (std::size_t t = 0; t < T; ++t) {
        DenseVector frame(side * side);
        for (std::size_t r = 0; r < square; ++r)
            for (std::size_t c = 0; c < square; ++c)
                frame[(static_cast<std::size_t>(py) + r) * side + static_cast<std::size_t>(px) + c] =
                    1.0;
        fs.frames.push_back(std::move(frame));

        px += vx;
        py += vy;
        if (px < 0) { px = -px; vx = -vx; }
        if (px > limit) { px = 2 * limit - px; vx = -vx; }
        if (py < 0) { py = -py; vy = -vy; }
        if (py > limit) { py = 2 * limit - py; vy = -vy; }
    }
    return fs;
}

Dataset gen_moving_square(std::size_t count, std::size_t T, std::size_t side,
                          std::size_t square, std::uint64_t seed) {
    require(square < side, "gen_moving_square: square must fit inside the frame");
    require(T >= 1, "gen_moving_square: T must be >= 1");

    Dataset ds;
    ds.meta.kind = "moving-square";
    ds.meta.seed = seed;
    ds.meta.count = count;
    ds.meta.T = T;
    ds.meta.n0 = side * side;
    ds.meta.side = side;
    ds.meta.square = square;
    ds.seqs.resize(count);

    const long limit = static_cast<long>(side - square);
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < count; ++i) {
        SeededRng rng(seed ^ static_cast<std::uint64_t>(i));
        const long px = rng.uniform_int(0, limit);
        const long py = rng.uniform_int(0, limit);
        // Nonzero velocity components in {-2,-1,1,2}. Draws are sequenced
        // explicitly; argument lists leave evaluation order open.
        auto draw_v = [&rng]() {
            const long v = rng.uniform_int(1, 2);
            return rng.uniform_int(0, 1) ? v : -v;
        };
        const long vx = draw_v();
        const long vy = draw_v();
        ds.seqs[i] = render_square_sequence(T, side, square, px, py, vx, vy);
    }
    return ds;
}

void sense(const DenseMatrix& A, FrameSequence& seq) {
    seq.measurements = sense(A, seq.frames);
}

std::vector<DenseVector> sense(const DenseMatrix& A, const std::vector<DenseVector>& frames) {
    std::vector<DenseVector> out;
    out.reserve(frames.size());
    for (const auto& s : frames) out.push_back(mat_vec(A, s));
    return out;
}

DenseMatrix dct_atoms(std::size_t n0, std::size_t h) {
    require(n0 >= 1 && h >= 1, "dct_atoms: empty shape");
    constexpr double pi = 3.14159265358979323846;
    DenseMatrix D(n0, h);
    for (std::size_t j = 0; j < h; ++j) {
        double nrm = 0.0;
        for (std::size_t i = 0; i < n0; ++i) {
            const double v = std::cos(pi * (2.0 * static_cast<double>(i) + 1.0) *
                                      static_cast<double>(j) / (2.0 * static_cast<double>(h)));
            D(i, j) = v;
            nrm += v * v;
        }
        nrm = std::sqrt(nrm);
        for (std::size_t i = 0; i < n0; ++i) D(i, j) /= nrm;
    }
    return D;
}

DenseMatrix dct_dictionary(std::size_t n0, std::size_t h) {
    require(h >= n0, "dct_dictionary: need h >= n0 for an overcomplete dictionary");
    return dct_atoms(n0, h);
}

double psnr(const DenseVector& s, const DenseVector& s_hat, double peak) {
    require(s.size() == s_hat.size(), "psnr: length mismatch");
    require(s.size() > 0, "psnr: empty frames");
    double mse = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double e = s[i] - s_hat[i];
        mse += e * e;
    }
    mse /= static_cast<double>(s.size());
    if (mse < peak * peak * 1e-10) return 100.0;
    return 10.0 * std::log10(peak * peak / mse);
}

void split(Dataset& ds, double train_frac, double val_frac, double test_frac,
           std::uint64_t seed) {
    require(train_frac > 0.0 && val_frac >= 0.0 && test_frac >= 0.0,
            "split: fractions must be nonnegative with a positive train share");
    require(std::fabs(train_frac + val_frac + test_frac - 1.0) < 1e-9,
            "split: fractions must sum to 1");
    const std::size_t n = ds.seqs.size();
    require(n >= 1, "split: empty dataset");

    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    SeededRng rng(seed);
    for (std::size_t i = n; i > 1; --i) {
        const std::size_t j =
            static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i) - 1));
        std::swap(perm[i - 1], perm[j]);
    }

    const std::size_t n_train =
        static_cast<std::size_t>(train_frac * static_cast<double>(n) + 1e-9);
    const std::size_t n_val = static_cast<std::size_t>(val_frac * static_cast<double>(n) + 1e-9);
    require(n_train >= 1, "split: train share is empty");

    ds.tags.assign(n, SplitTag::Test);
    for (std::size_t r = 0; r < n; ++r) {
        if (r < n_train)
            ds.tags[perm[r]] = SplitTag::Train;
        else if (r < n_train + n_val)
            ds.tags[perm[r]] = SplitTag::Val;
    }
}

namespace {

std::uint32_t read_be_u32(std::istream& in, std::size_t offset, const std::string& path) {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    if (!in)
        throw std::runtime_error("idx: truncated header at byte offset " +
                                 std::to_string(offset) + " in " + path);
    return (std::uint32_t(b[0]) << 24) | (std::uint32_t(b[1]) << 16) |
           (std::uint32_t(b[2]) << 8) | std::uint32_t(b[3]);
}

}  // namespace

std::vector<DenseVector> load_idx(const std::string& path, std::size_t target_side) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("idx: cannot open " + path);

    const std::uint32_t magic = read_be_u32(in, 0, path);
    if (magic != 0x00000803u) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "0x%08x", magic);
        throw std::runtime_error("idx: bad magic " + std::string(buf) + " at byte offset 0 in " +
                                 path + " (expected 0x00000803)");
    }
    const std::uint32_t count = read_be_u32(in, 4, path);
    const std::uint32_t rows = read_be_u32(in, 8, path);
    const std::uint32_t cols = read_be_u32(in, 12, path);

    std::vector<unsigned char> pixels(static_cast<std::size_t>(count) * rows * cols);
    in.read(reinterpret_cast<char*>(pixels.data()), static_cast<std::streamsize>(pixels.size()));
    if (static_cast<std::size_t>(in.gcount()) != pixels.size())
        throw std::runtime_error("idx: truncated pixel data in " + path + " (expected " +
                                 std::to_string(pixels.size()) + " bytes after the header, got " +
                                 std::to_string(in.gcount()) + ")");

    std::size_t out_rows = rows, out_cols = cols, factor = 1;
    if (target_side > 0) {
        require(rows == cols, "idx: decimation expects square frames");
        require(target_side <= rows && rows % target_side == 0,
                "idx: source side must be an integer multiple of the target side");
        factor = rows / target_side;
        out_rows = out_cols = target_side;
    }

    std::vector<DenseVector> frames;
    frames.reserve(count);
    for (std::size_t f = 0; f < count; ++f) {
        const unsigned char* src = pixels.data() + f * rows * cols;
        DenseVector frame(out_rows * out_cols);
        for (std::size_t r = 0; r < out_rows; ++r) {
            for (std::size_t c = 0; c < out_cols; ++c) {
                double acc = 0.0;
                for (std::size_t dr = 0; dr < factor; ++dr)
                    for (std::size_t dc = 0; dc < factor; ++dc)
                        acc += src[(r * factor + dr) * cols + (c * factor + dc)];
                frame[r * out_cols + c] =
                    acc / (255.0 * static_cast<double>(factor * factor));
            }
        }
        frames.push_back(std::move(frame));
    }
    return frames;
}

Dataset dataset_from_frames(const std::vector<DenseVector>& frames, std::size_t T,
                            std::size_t n0, const std::string& source) {
    require(T >= 1, "dataset_from_frames: T must be >= 1");
    Dataset ds;
    ds.meta.kind = "idx-import";
    ds.meta.T = T;
    ds.meta.n0 = n0;
    ds.meta.source = source;
    const std::size_t count = frames.size() / T;
    ds.meta.count = count;
    ds.seqs.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        for (std::size_t t = 0; t < T; ++t) {
            const DenseVector& f = frames[i * T + t];
            require(f.size() == n0, "dataset_from_frames: frame length != n0");
            ds.seqs[i].frames.push_back(f);
        }
    }
    return ds;
}

namespace {

const char* tag_name(SplitTag t) {
    switch (t) {
        case SplitTag::Train: return "train";
        case SplitTag::Val: return "val";
        case SplitTag::Test: return "test";
    }
    return "?";
}

SplitTag tag_from_name(const std::string& s) {
    if (s == "train") return SplitTag::Train;
    if (s == "val") return SplitTag::Val;
    if (s == "test") return SplitTag::Test;
    throw std::runtime_error("dataset: unknown split tag " + s);
}

}  // namespace

void save_dataset(const Dataset& ds, const std::string& dir) {
    std::filesystem::create_directories(dir);

    json j;
    j["format"] = "seqsparse-dataset-v1";
    j["kind"] = ds.meta.kind;
    j["seed"] = ds.meta.seed;
    j["count"] = ds.meta.count;
    j["T"] = ds.meta.T;
    j["n0"] = ds.meta.n0;
    if (ds.meta.kind == "synthetic-sparse") {
        j["latent_h"] = ds.meta.latent_h;
        j["sparsity"] = ds.meta.sparsity;
        j["resample_frac"] = ds.meta.resample_frac;
        j["innovation"] = ds.meta.innovation;
    } else if (ds.meta.kind == "moving-square") {
        j["side"] = ds.meta.side;
        j["square"] = ds.meta.square;
    } else if (ds.meta.kind == "idx-import") {
        j["source"] = ds.meta.source;
    }
    if (!ds.tags.empty()) {
        json tags = json::array();
        for (SplitTag t : ds.tags) tags.push_back(tag_name(t));
        j["splits"] = tags;
    }

    std::ofstream mf(dir + "/manifest.json");
    if (!mf) throw std::runtime_error("dataset: cannot write " + dir + "/manifest.json");
    mf << j.dump(2) << "\n";

    std::ofstream bf(dir + "/data.bin", std::ios::binary);
    if (!bf) throw std::runtime_error("dataset: cannot write " + dir + "/data.bin");
    for (const auto& seq : ds.seqs)
        for (const auto& frame : seq.frames)
            bf.write(reinterpret_cast<const char*>(frame.data()),
                     static_cast<std::streamsize>(frame.size() * sizeof(double)));
}

Dataset load_dataset(const std::string& dir) {
    std::ifstream mf(dir + "/manifest.json");
    if (!mf) throw std::runtime_error("dataset: cannot open " + dir + "/manifest.json");
    json j;
    mf >> j;

    Dataset ds;
    ds.meta.kind = j.at("kind").get<std::string>();
    ds.meta.seed = j.at("seed").get<std::uint64_t>();
    ds.meta.count = j.at("count").get<std::size_t>();
    ds.meta.T = j.at("T").get<std::size_t>();
    ds.meta.n0 = j.at("n0").get<std::size_t>();
    if (j.contains("latent_h")) ds.meta.latent_h = j["latent_h"].get<std::size_t>();
    if (j.contains("sparsity")) ds.meta.sparsity = j["sparsity"].get<std::size_t>();
    if (j.contains("resample_frac")) ds.meta.resample_frac = j["resample_frac"].get<double>();
    if (j.contains("innovation")) ds.meta.innovation = j["innovation"].get<double>();
    if (j.contains("side")) ds.meta.side = j["side"].get<std::size_t>();
    if (j.contains("square")) ds.meta.square = j["square"].get<std::size_t>();
    if (j.contains("source")) ds.meta.source = j["source"].get<std::string>();

    std::ifstream bf(dir + "/data.bin", std::ios::binary);
    if (!bf) throw std::runtime_error("dataset: cannot open " + dir + "/data.bin");
    ds.seqs.resize(ds.meta.count);
    for (auto& seq : ds.seqs) {
        seq.frames.resize(ds.meta.T);
        for (auto& frame : seq.frames) {
            frame = DenseVector(ds.meta.n0);
            bf.read(reinterpret_cast<char*>(frame.data()),
                    static_cast<std::streamsize>(ds.meta.n0 * sizeof(double)));
            if (static_cast<std::size_t>(bf.gcount()) != ds.meta.n0 * sizeof(double))
                throw std::runtime_error("dataset: truncated data.bin in " + dir);
        }
    }

    if (j.contains("splits")) {
        for (const auto& t : j["splits"]) ds.tags.push_back(tag_from_name(t.get<std::string>()));
        require(ds.tags.size() == ds.seqs.size(), "dataset: split tag count mismatch");
    }
    return ds;
}

Dataset regenerate(const DatasetMeta& meta) {
    if (meta.kind == "synthetic-sparse")
        return gen_synthetic_sparse(meta.count, meta.T, meta.n0, meta.latent_h, meta.sparsity,
                                    meta.seed, meta.resample_frac, meta.innovation);
    if (meta.kind == "moving-square")
        return gen_moving_square(meta.count, meta.T, meta.side, meta.square, meta.seed);
    throw std::runtime_error("regenerate: kind '" + meta.kind +
                             "' is not regenerable from metadata");
}

}  // namespace seqsparse
