#include <doctest.h>

#include "oracles.hpp"
#include "seqsparse/model.hpp"
#include "seqsparse/solvers.hpp"

using namespace seqsparse;

namespace {

// Random but well-scaled parameters for the unfolded variants.
ModelParams random_reweighted(std::size_t n, std::size_t n0, std::size_t h, std::size_t d,
                              std::uint64_t seed) {
    ModelParams p = init_params(NetworkVariant::Reweighted, n, n0, h, d, seed);
    SeededRng rng(seed ^ 0xabcdef);
    const auto gnoise = oracles::random_matrix(h, h, rng, 0.2 / std::sqrt(double(h)));
    for (std::size_t i = 0; i < p.G.size(); ++i) p.G.data()[i] += gnoise.data()[i];
    for (std::size_t l = 0; l < d; ++l) {
        const auto znoise = oracles::random_matrix(h, h, rng, 0.2 / std::sqrt(double(h)));
        for (std::size_t i = 0; i < p.Z[l].size(); ++i) p.Z[l].data()[i] += znoise.data()[i];
        for (std::size_t i = 0; i < h; ++i) p.g_raw[l][i] = rng.uniform(-0.5, 0.5);
    }
    for (std::size_t i = 0; i < h; ++i) p.h0[i] = rng.uniform(-0.5, 0.5);
    p.l1_raw = std::log(0.05);
    p.l2_raw = std::log(0.08);
    return p;
}

std::vector<DenseVector> random_measurements(const ModelParams& p, std::size_t T,
                                             std::uint64_t seed) {
    SeededRng rng(seed);
    std::vector<DenseVector> xs;
    for (std::size_t t = 0; t < T; ++t) xs.push_back(oracles::random_vector(p.n, rng));
    return xs;
}

}  // namespace

TEST_CASE("build_weights trivial cases") {
    SUBCASE("A = 0 kills the data terms") {
        ModelParams p = init_params(NetworkVariant::Reweighted, 3, 4, 6, 2, 1);
        p.A.fill(0.0);
        p.c_raw = 0.0;  // c = 1
        const BuiltWeights bw = build_weights(p);
        CHECK(bw.W[0] == DenseMatrix::identity(6));
        CHECK(bw.W[1] == DenseMatrix::identity(6));
        CHECK(bw.U[0] == DenseMatrix(6, 3));
        CHECK(bw.U[1] == DenseMatrix(6, 3));
    }

    SUBCASE("identity Z ties the upper layers") {
        const ModelParams p = init_params(NetworkVariant::L1L1, 3, 4, 6, 3, 2);
        const BuiltWeights bw = build_weights(p);
        CHECK(bw.W[1] == bw.W[2]);
        CHECK(bw.U[0] == bw.U[1]);
        // W_{l>1} = I - (1/c) D^T A^T A D
        const DenseMatrix want =
            sub(DenseMatrix::identity(6), scale(gram(mat_mul(p.A, p.D)), 1.0 / p.c()));
        for (std::size_t i = 0; i < want.size(); ++i)
            CHECK(bw.W[1].data()[i] == doctest::Approx(want.data()[i]).epsilon(1e-15));
    }
}

TEST_CASE("constructed weights reproduce the iterative update") {
    const ModelParams p = random_reweighted(4, 6, 9, 3, 3);
    const BuiltWeights bw = build_weights(p);
    SeededRng rng(33);
    const auto hvec = oracles::random_vector(9, rng);
    const auto x = oracles::random_vector(4, rng);

    // Layer 2 of the iterative update: u = [Z - (1/c) Z M] h + (1/c) Z P^T x.
    const double c = p.c();
    DenseVector step = hvec;
    axpy(step, -1.0 / c, mat_vec(bw.M, hvec));
    axpy(step, 1.0 / c, mat_tvec(bw.P, x));
    const DenseVector want = mat_vec(p.Z[1], step);

    DenseVector got = mat_vec(bw.W[1], hvec);
    axpy(got, 1.0, mat_vec(bw.U[1], x));
    for (std::size_t i = 0; i < 9; ++i)
        CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-14));
}

TEST_CASE("forward equals the iterative algorithm") {
    for (std::uint64_t seed = 100; seed < 104; ++seed) {
        const ModelParams p = random_reweighted(5, 8, 12, 3, seed);
        const auto xs = random_measurements(p, 5, seed ^ 7);
        const ForwardTrace tr = forward(p, xs);

        std::vector<DenseVector> gl;
        for (std::size_t l = 0; l < p.d; ++l) gl.push_back(p.g(l));
        const SolverConfig cfg{p.d, p.lambda1(), p.lambda2(), p.c()};
        const auto codes = algorithm1(xs, p.A, p.D, p.G, p.Z, gl, p.h0, cfg);

        for (std::size_t t = 0; t < 5; ++t)
            for (std::size_t l = 0; l < p.d; ++l)
                for (std::size_t i = 0; i < p.h; ++i)
                    CHECK(std::fabs(tr.steps[t].layers[l].h[i] - codes.codes[t][l + 1][i]) <=
                          1e-12);
    }
}

TEST_CASE("zero input, zero initial state: all reconstructions vanish") {
    for (auto variant : {NetworkVariant::Reweighted, NetworkVariant::L1L1,
                         NetworkVariant::Sista, NetworkVariant::Vanilla}) {
        const ModelParams p = init_params(variant, 4, 6, 8, 2, 5);
        const std::vector<DenseVector> xs(3, DenseVector(4));
        const ForwardTrace tr = forward(p, xs);
        for (std::size_t t = 0; t < 3; ++t)
            for (std::size_t i = 0; i < 6; ++i) CHECK(tr.s_hat(t)[i] == 0.0);
    }
}

TEST_CASE("reweighted with identity reweighting is the l1l1 network, bitwise") {
    ModelParams rw = init_params(NetworkVariant::Reweighted, 4, 6, 10, 3, 6);
    SeededRng rng(61);
    for (std::size_t i = 0; i < rw.h; ++i) rw.h0[i] = rng.uniform(-1, 1);
    ModelParams l1 = rw;
    l1.variant = NetworkVariant::L1L1;

    const auto xs = random_measurements(rw, 4, 62);
    const ForwardTrace a = forward(rw, xs);
    const ForwardTrace b = forward(l1, xs);
    for (std::size_t t = 0; t < 4; ++t) {
        CHECK(a.steps[t].s_hat == b.steps[t].s_hat);
        for (std::size_t l = 0; l < rw.d; ++l) {
            CHECK(a.steps[t].layers[l].u == b.steps[t].layers[l].u);
            CHECK(a.steps[t].layers[l].h == b.steps[t].layers[l].h);
        }
    }
}

TEST_CASE("forward is deterministic from its inputs") {
    for (auto variant : {NetworkVariant::Reweighted, NetworkVariant::Sista,
                         NetworkVariant::Vanilla}) {
        const ModelParams p = init_params(variant, 3, 5, 7, 2, 8);
        const auto xs = random_measurements(p, 3, 80);
        const ForwardTrace a = forward(p, xs);
        const ForwardTrace b = forward(p, xs);
        REQUIRE(a.T() == b.T());
        for (std::size_t t = 0; t < a.T(); ++t) {
            CHECK(a.steps[t].s_hat == b.steps[t].s_hat);
            for (std::size_t l = 0; l < p.d; ++l) {
                CHECK(a.steps[t].layers[l].u == b.steps[t].layers[l].u);
                CHECK(a.steps[t].layers[l].branch == b.steps[t].layers[l].branch);
            }
        }
        CHECK(a.same_branches(b));
    }
}

TEST_CASE("non-constant weights make two units with equal input differ") {
    ModelParams p = init_params(NetworkVariant::Reweighted, 3, 4, 6, 1, 9);
    // Two units share every input path but get different weights.
    p.A.fill(0.0);
    p.h0.fill(0.8);
    p.c_raw = 0.0;
    p.l1_raw = std::log(0.3);
    p.l2_raw = std::log(0.2);
    p.g_raw[0][0] = std::log(0.05);
    p.g_raw[0][1] = std::log(4.0);
    const std::vector<DenseVector> xs(1, DenseVector(3));
    const ForwardTrace tr = forward(p, xs);
    const auto& lt = tr.steps[0].layers[0];
    CHECK(lt.u[0] == lt.u[1]);
    CHECK(lt.h[0] != lt.h[1]);
}

TEST_CASE("reconstruct is the dictionary product") {
    SeededRng rng(10);
    const auto D = oracles::random_matrix(5, 9, rng);
    CHECK(reconstruct(D, DenseVector(9)) == DenseVector(5));
    CHECK(reconstruct(DenseMatrix::identity(4), DenseVector{1, 2, 3, 4}) ==
          DenseVector{1, 2, 3, 4});
    const auto hvec = oracles::random_vector(9, rng);
    CHECK(reconstruct(D, hvec) == mat_vec(D, hvec));
}

TEST_CASE("parameter enumeration matches the variant") {
    ModelParams rw = init_params(NetworkVariant::Reweighted, 3, 4, 5, 2, 11);
    auto names = [](ModelParams& p) {
        std::vector<std::string> out;
        for (const auto& r : param_refs(p)) out.push_back(r.name);
        return out;
    };
    CHECK(names(rw) == std::vector<std::string>{"A", "D", "G", "h0", "Z1", "Z2", "g1", "g2",
                                                "c_raw", "lambda1_raw", "lambda2_raw"});
    ModelParams sis = init_params(NetworkVariant::Sista, 3, 4, 5, 2, 11);
    CHECK(names(sis) ==
          std::vector<std::string>{"A", "D", "h0", "W1", "W2", "U1", "U2", "gamma_raw"});
    ModelParams va = init_params(NetworkVariant::Vanilla, 3, 4, 5, 2, 11);
    CHECK(names(va) == std::vector<std::string>{"A", "D", "h0", "W1", "W2", "U1", "U2",
                                                "gamma1_raw", "gamma2_raw"});
}
