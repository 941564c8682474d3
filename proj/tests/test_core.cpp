#include <doctest.h>

#include "oracles.hpp"
#include "seqsparse/linalg.hpp"
#include "seqsparse/reference.hpp"

using namespace seqsparse;

TEST_CASE("mat_vec basics") {
    CHECK(mat_vec(DenseMatrix::identity(3), DenseVector{1, 2, 3}) == DenseVector{1, 2, 3});

    DenseMatrix m(2, 2);
    m(0, 0) = 1; m(0, 1) = 2; m(1, 0) = 3; m(1, 1) = 4;
    CHECK(mat_vec(m, DenseVector{1, 1}) == DenseVector{3, 7});

    CHECK_THROWS_AS(mat_vec(m, DenseVector{1, 2, 3}), dim_error);
}

TEST_CASE("mat_vec agrees with the naive reference") {
    SeededRng rng(42);
    const auto M = oracles::random_matrix(8, 8, rng);
    const auto v = oracles::random_vector(8, rng);
    const auto got = mat_vec(M, v);
    const auto want = ref::mat_vec(M, v);
    for (std::size_t i = 0; i < 8; ++i)
        CHECK(std::fabs(got[i] - want[i]) <= 1e-15 * std::max(1.0, std::fabs(want[i])));
}

TEST_CASE("mat_vec is linear") {
    SeededRng rng(7);
    for (int rep = 0; rep < 10; ++rep) {
        const auto M = oracles::random_matrix(6, 5, rng);
        const auto u = oracles::random_vector(5, rng);
        const auto v = oracles::random_vector(5, rng);
        const double a = rng.uniform(-2, 2), b = rng.uniform(-2, 2);
        DenseVector combo(5);
        for (std::size_t i = 0; i < 5; ++i) combo[i] = a * u[i] + b * v[i];
        const auto lhs = mat_vec(M, combo);
        const auto mu = mat_vec(M, u), mv = mat_vec(M, v);
        for (std::size_t i = 0; i < 6; ++i) {
            const double rhs = a * mu[i] + b * mv[i];
            CHECK(std::fabs(lhs[i] - rhs) <= 1e-12 * std::max(1.0, std::fabs(rhs)));
        }
    }
}

TEST_CASE("row norms") {
    CHECK(norm_1_inf(DenseMatrix::identity(4)) == 1.0);
    DenseMatrix m(2, 2);
    m(0, 0) = 1; m(0, 1) = -2; m(1, 0) = 0.5; m(1, 1) = 0.5;
    CHECK(norm_1_inf(m) == 3.0);

    CHECK(norm_2_inf(DenseMatrix::identity(4)) == 1.0);
    DenseMatrix p(2, 2);
    p(0, 0) = 3; p(0, 1) = 4; p(1, 0) = 1; p(1, 1) = 0;
    CHECK(norm_2_inf(p) == doctest::Approx(5.0).epsilon(1e-15));

    SeededRng rng(3);
    const auto M = oracles::random_matrix(9, 13, rng);
    CHECK(norm_1_inf(M) == doctest::Approx(ref::norm_1_inf(M)).epsilon(1e-15));
    CHECK(norm_2_inf(M) == doctest::Approx(ref::norm_2_inf(M)).epsilon(1e-15));
}

TEST_CASE("norms are absolutely homogeneous") {
    SeededRng rng(5);
    const auto M = oracles::random_matrix(5, 7, rng);
    for (double c : {-3.5, -1.0, 0.0, 0.25, 2.0}) {
        CHECK(norm_1_inf(scale(M, c)) ==
              doctest::Approx(std::fabs(c) * norm_1_inf(M)).epsilon(1e-13));
        CHECK(norm_2_inf(scale(M, c)) ==
              doctest::Approx(std::fabs(c) * norm_2_inf(M)).epsilon(1e-13));
    }
}

TEST_CASE("geom_sum") {
    CHECK(geom_sum(1.0, 20) == 20.0);
    CHECK(geom_sum(2.0, 3) == 7.0);
    CHECK(geom_sum(0.5, 10) == doctest::Approx(ref::geom_sum_loop(0.5, 10)).epsilon(1e-14));

    for (std::size_t T : {std::size_t{2}, std::size_t{10}, std::size_t{50}}) {
        CHECK(std::fabs(geom_sum(1.0 + 1e-9, T) - double(T)) < 1e-6 * double(T));
        CHECK(std::fabs(geom_sum(1.0 - 1e-9, T) - double(T)) < 1e-6 * double(T));
    }
}

TEST_CASE("spectral_upper") {
    DenseMatrix diag(3, 3);
    diag(0, 0) = 1; diag(1, 1) = 2; diag(2, 2) = 5;
    CHECK(spectral_upper(diag, 200, 1) == doctest::Approx(5.05).epsilon(1e-9));

    CHECK(spectral_upper(DenseMatrix(4, 4), 50, 1) == 0.0);
    CHECK_THROWS_AS(spectral_upper(DenseMatrix(3, 4), 10, 1), dim_error);

    SeededRng rng(11);
    const auto Mh = oracles::random_matrix(16, 16, rng);
    const auto G = gram(Mh);
    const double est = spectral_upper(G, 300, 2);
    const double truth = ref::top_eigenvalue(G, 6);
    CHECK(std::fabs(est / 1.01 - truth) <= 0.02 * truth);
}

TEST_CASE("seeded rng reproducibility") {
    SeededRng a(123456), b(123456);
    for (int i = 0; i < 10000; ++i) {
        switch (i % 3) {
            case 0: CHECK(a.next_u64() == b.next_u64()); break;
            case 1: CHECK(a.uniform() == b.uniform()); break;
            default: CHECK(a.normal() == b.normal()); break;
        }
    }
    SeededRng c(99);
    CHECK(SeededRng(123456).next_u64() != c.next_u64());
}
