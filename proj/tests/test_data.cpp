#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "oracles.hpp"
#include "seqsparse/data.hpp"
#include "seqsparse/linalg.hpp"
#include "seqsparse/reference.hpp"

using namespace seqsparse;

namespace {

std::string temp_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("seqsparse_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir.string();
}

std::string read_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_idx(const std::string& path, std::uint32_t magic, std::uint32_t count,
               std::uint32_t rows, std::uint32_t cols,
               const std::vector<unsigned char>& pixels) {
    std::ofstream out(path, std::ios::binary);
    auto be = [&](std::uint32_t v) {
        unsigned char b[4] = {static_cast<unsigned char>(v >> 24),
                              static_cast<unsigned char>(v >> 16),
                              static_cast<unsigned char>(v >> 8),
                              static_cast<unsigned char>(v)};
        out.write(reinterpret_cast<char*>(b), 4);
    };
    be(magic);
    be(count);
    be(rows);
    be(cols);
    out.write(reinterpret_cast<const char*>(pixels.data()),
              static_cast<std::streamsize>(pixels.size()));
}

}  // namespace

TEST_CASE("synthetic sparse sequences") {
    SUBCASE("zero sparsity means zero signals") {
        const Dataset ds = gen_synthetic_sparse(3, 4, 8, 12, 0, 1);
        for (const auto& seq : ds.seqs)
            for (const auto& f : seq.frames)
                for (std::size_t i = 0; i < f.size(); ++i) CHECK(f[i] == 0.0);
    }

    SUBCASE("no churn, no innovation: constant sequences") {
        const Dataset ds = gen_synthetic_sparse(3, 5, 8, 12, 4, 2, 0.0, 0.0);
        for (const auto& seq : ds.seqs)
            for (std::size_t t = 1; t < seq.frames.size(); ++t)
                CHECK(seq.frames[t] == seq.frames[0]);
    }

    SUBCASE("codes start exactly k-sparse") {
        const Dataset ds = gen_synthetic_sparse(5, 3, 8, 16, 6, 3);
        for (const auto& seq : ds.seqs) {
            std::size_t nz = 0;
            for (std::size_t i = 0; i < seq.latent_codes[0].size(); ++i)
                if (seq.latent_codes[0][i] != 0.0) ++nz;
            CHECK(nz == 6);
        }
    }

    SUBCASE("consecutive supports overlap strongly") {
        const Dataset ds = gen_synthetic_sparse(20, 6, 8, 20, 10, 4);
        double overlap_sum = 0.0;
        std::size_t pairs = 0;
        for (const auto& seq : ds.seqs) {
            for (std::size_t t = 1; t < seq.latent_codes.size(); ++t) {
                std::size_t common = 0;
                for (std::size_t i = 0; i < 20; ++i)
                    if (seq.latent_codes[t][i] != 0.0 && seq.latent_codes[t - 1][i] != 0.0)
                        ++common;
                overlap_sum += double(common) / 10.0;
                ++pairs;
            }
        }
        CHECK(overlap_sum / double(pairs) >= 0.85);
    }
}

TEST_CASE("moving square") {
    SUBCASE("zero velocity freezes the frame") {
        const FrameSequence fs = render_square_sequence(5, 16, 4, 3, 7, 0, 0);
        for (std::size_t t = 1; t < 5; ++t) CHECK(fs.frames[t] == fs.frames[0]);
    }

    SUBCASE("intensity mass is conserved") {
        const Dataset ds = gen_moving_square(10, 12, 16, 4, 5);
        for (const auto& seq : ds.seqs)
            for (const auto& f : seq.frames) {
                double sum = 0.0;
                for (std::size_t i = 0; i < f.size(); ++i) sum += f[i];
                CHECK(sum == 16.0);
            }
    }

    SUBCASE("wall reflection matches a scalar bounce") {
        const long limit = 12;  // side 16, square 4
        long pos = 11, v = 2;
        const FrameSequence fs = render_square_sequence(40, 16, 4, pos, 0, v, 0);
        for (std::size_t t = 0; t < 40; ++t) {
            // locate the square's left edge in the frame
            long found = -1;
            for (long c = 0; c < 16 && found < 0; ++c)
                if (fs.frames[t][static_cast<std::size_t>(c)] == 1.0) found = c;
            CHECK(found == pos);
            pos += v;
            if (pos < 0) { pos = -pos; v = -v; }
            if (pos > limit) { pos = 2 * limit - pos; v = -v; }
        }
    }
}

TEST_CASE("sensing") {
    SeededRng rng(6);
    FrameSequence seq;
    for (int t = 0; t < 3; ++t) seq.frames.push_back(oracles::random_vector(6, rng));

    SUBCASE("identity sensing is a copy") {
        const auto xs = sense(DenseMatrix::identity(6), seq.frames);
        for (int t = 0; t < 3; ++t) CHECK(xs[t] == seq.frames[t]);
    }
    SUBCASE("zero frames sense to zero") {
        const std::vector<DenseVector> zero(2, DenseVector(6));
        const auto xs = sense(oracles::random_matrix(3, 6, rng), zero);
        for (const auto& x : xs)
            for (std::size_t i = 0; i < x.size(); ++i) CHECK(x[i] == 0.0);
    }
    SUBCASE("random sensing matches the reference product") {
        const auto A = oracles::random_matrix(3, 6, rng);
        sense(A, seq);
        REQUIRE(seq.measurements.size() == 3);
        for (int t = 0; t < 3; ++t) {
            const auto want = ref::mat_vec(A, seq.frames[t]);
            for (std::size_t i = 0; i < 3; ++i)
                CHECK(seq.measurements[t][i] == doctest::Approx(want[i]).epsilon(1e-15));
        }
    }
}

TEST_CASE("dct dictionary") {
    SUBCASE("square case is orthonormal") {
        const DenseMatrix D = dct_dictionary(8, 8);
        const DenseMatrix G = gram(D);
        for (std::size_t i = 0; i < 8; ++i)
            for (std::size_t j = 0; j < 8; ++j)
                CHECK(std::fabs(G(i, j) - (i == j ? 1.0 : 0.0)) <= 1e-12);
    }
    SUBCASE("columns are unit norm") {
        const DenseMatrix D = dct_dictionary(8, 20);
        for (std::size_t j = 0; j < 20; ++j) {
            double nrm = 0.0;
            for (std::size_t i = 0; i < 8; ++i) nrm += D(i, j) * D(i, j);
            CHECK(std::sqrt(nrm) == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
    SUBCASE("first column is the constant atom") {
        const DenseMatrix D = dct_dictionary(8, 20);
        const double want = 1.0 / std::sqrt(8.0);
        for (std::size_t i = 0; i < 8; ++i)
            CHECK(D(i, 0) == doctest::Approx(want).epsilon(1e-14));
    }
    SUBCASE("undercomplete sizes are rejected") {
        CHECK_THROWS_AS(dct_dictionary(8, 6), dim_error);
    }
}

TEST_CASE("psnr") {
    const DenseVector s{0.2, 0.8, 0.5, 0.1};
    CHECK(psnr(s, s) == 100.0);

    DenseVector off(4);
    for (std::size_t i = 0; i < 4; ++i) off[i] = s[i] + 0.1;  // mse 0.01
    CHECK(psnr(s, off) == doctest::Approx(20.0).epsilon(1e-9));
    DenseVector off2(4);
    for (std::size_t i = 0; i < 4; ++i) off2[i] = s[i] + 0.01;  // mse 1e-4
    CHECK(psnr(s, off2) == doctest::Approx(40.0).epsilon(1e-9));

    // joint permutation invariance
    const DenseVector sp{0.8, 0.1, 0.2, 0.5};
    DenseVector offp{off[1], off[3], off[0], off[2]};
    CHECK(psnr(sp, offp) == doctest::Approx(psnr(s, off)).epsilon(1e-12));
}

TEST_CASE("split") {
    Dataset ds = gen_moving_square(10, 2, 16, 4, 7);
    split(ds, 0.8, 0.1, 0.1, 99);
    CHECK(ds.indices_of(SplitTag::Train).size() == 8);
    CHECK(ds.indices_of(SplitTag::Val).size() == 1);
    CHECK(ds.indices_of(SplitTag::Test).size() == 1);

    Dataset ds2 = gen_moving_square(10, 2, 16, 4, 7);
    split(ds2, 0.8, 0.1, 0.1, 99);
    CHECK(ds.tags == ds2.tags);

    // partition: every index tagged exactly once by construction
    std::size_t total = ds.indices_of(SplitTag::Train).size() +
                        ds.indices_of(SplitTag::Val).size() +
                        ds.indices_of(SplitTag::Test).size();
    CHECK(total == 10);

    CHECK_THROWS_AS(split(ds, 0.5, 0.2, 0.2, 1), dim_error);
}

TEST_CASE("idx loading") {
    const std::string dir = temp_dir("idx");

    SUBCASE("single zero image") {
        write_idx(dir + "/zeros.idx", 0x00000803, 1, 4, 4, std::vector<unsigned char>(16, 0));
        const auto frames = load_idx(dir + "/zeros.idx");
        REQUIRE(frames.size() == 1);
        for (std::size_t i = 0; i < 16; ++i) CHECK(frames[0][i] == 0.0);
    }

    SUBCASE("constant 255 scales to one") {
        write_idx(dir + "/ones.idx", 0x00000803, 2, 3, 3,
                  std::vector<unsigned char>(18, 255));
        const auto frames = load_idx(dir + "/ones.idx");
        REQUIRE(frames.size() == 2);
        for (const auto& f : frames)
            for (std::size_t i = 0; i < 9; ++i) CHECK(f[i] == 1.0);
    }

    SUBCASE("checkerboard decimated 2x averages to one half") {
        std::vector<unsigned char> board(16);
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) board[r * 4 + c] = ((r + c) % 2) ? 255 : 0;
        write_idx(dir + "/board.idx", 0x00000803, 1, 4, 4, board);
        const auto frames = load_idx(dir + "/board.idx", 2);
        REQUIRE(frames.size() == 1);
        REQUIRE(frames[0].size() == 4);
        for (std::size_t i = 0; i < 4; ++i)
            CHECK(frames[0][i] == doctest::Approx(0.5).epsilon(1e-12));
    }

    SUBCASE("bad magic names the offset") {
        write_idx(dir + "/bad.idx", 0xdeadbeef, 1, 2, 2, std::vector<unsigned char>(4, 0));
        try {
            load_idx(dir + "/bad.idx");
            FAIL("expected an exception");
        } catch (const std::runtime_error& e) {
            CHECK(std::string(e.what()).find("offset 0") != std::string::npos);
            CHECK(std::string(e.what()).find("0xdeadbeef") != std::string::npos);
        }
    }

    SUBCASE("truncated pixels are reported") {
        write_idx(dir + "/short.idx", 0x00000803, 2, 4, 4, std::vector<unsigned char>(10, 7));
        CHECK_THROWS_WITH_AS(load_idx(dir + "/short.idx"),
                             doctest::Contains("truncated"), std::runtime_error);
    }
}

TEST_CASE("dataset io round trip and regeneration") {
    const std::string dir = temp_dir("ds");
    Dataset ds = gen_synthetic_sparse(6, 3, 8, 12, 4, 10);
    split(ds, 0.8, 0.1, 0.1, 10);
    save_dataset(ds, dir);

    const Dataset loaded = load_dataset(dir);
    CHECK(loaded.meta.kind == ds.meta.kind);
    CHECK(loaded.seqs.size() == ds.seqs.size());
    CHECK(loaded.tags == ds.tags);
    for (std::size_t i = 0; i < ds.seqs.size(); ++i)
        CHECK(loaded.seqs[i].frames == ds.seqs[i].frames);

    // byte-identical regeneration
    const Dataset regen = regenerate(loaded.meta);
    const std::string dir2 = temp_dir("ds2");
    save_dataset(regen, dir2);  // no tags: compare data only
    CHECK(read_bytes(dir + "/data.bin") == read_bytes(dir2 + "/data.bin"));

    const Dataset square = gen_moving_square(4, 5, 16, 4, 11);
    const Dataset square2 = regenerate(square.meta);
    for (std::size_t i = 0; i < square.seqs.size(); ++i)
        CHECK(square.seqs[i].frames == square2.seqs[i].frames);
}
