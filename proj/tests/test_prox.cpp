#include <doctest.h>

#include "oracles.hpp"
#include "seqsparse/prox.hpp"
#include "seqsparse/reference.hpp"

using namespace seqsparse;

TEST_CASE("soft threshold") {
    CHECK(soft_threshold(2.0, 0.5) == 1.5);
    CHECK(soft_threshold(-0.3, 0.5) == 0.0);
    SeededRng rng(1);
    for (int i = 0; i < 20; ++i) {
        const double u = rng.uniform(-4, 4);
        CHECK(soft_threshold(u, 0.0) == u);
    }
}

TEST_CASE("prox case table, anchor >= 0") {
    const ProxThresholds p{0.5, 0.3, 1.0};
    CHECK(prox_rw(2.5, p) == doctest::Approx(1.7).epsilon(1e-15));
    CHECK(prox_rw(1.5, p) == 1.0);
    CHECK(prox_rw(0.5, p) == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(prox_rw(0.0, p) == 0.0);
    CHECK(prox_rw(-1.0, p) == doctest::Approx(-0.2).epsilon(1e-15));
}

TEST_CASE("prox case table, anchor < 0: the last branch against the grid oracle") {
    const ProxThresholds p{0.5, 0.3, -1.0};
    CHECK(prox_rw(-1.5, p) == doctest::Approx(-1.0).epsilon(1e-15));
    // Deep negative side. The printed table's u - t1 + t2 form would give
    // -2.3 here and jump at the branch edge; the stationarity-consistent
    // form gives u + t1 + t2 = -1.7, which the grid minimizer confirms.
    CHECK(prox_rw(-2.5, p) == doctest::Approx(-1.7).epsilon(1e-12));
    const auto grid = ref::prox_objective_grid_min(-2.5, p, -10, 10, 1e-4);
    CHECK(std::fabs(prox_rw(-2.5, p) - grid.v) <= 2e-4);
    CHECK(ref::prox_objective(prox_rw(-2.5, p), -2.5, p) <= grid.objective + 1e-9);
}

TEST_CASE("t2 = 0 reduces to the soft threshold") {
    SeededRng rng(2);
    for (int i = 0; i < 100; ++i) {
        const double u = rng.uniform(-6, 6);
        const double t1 = rng.uniform(0, 2);
        const ProxThresholds p{t1, 0.0, rng.uniform(-3, 3)};
        CHECK(prox_rw(u, p) == doctest::Approx(soft_threshold(u, t1)).epsilon(1e-15));
    }
}

TEST_CASE("partials on branch interiors match finite differences") {
    const ProxThresholds p{0.5, 0.3, 1.0};
    ProxPartials pr = prox_rw_partials(2.5, p);
    CHECK(pr.d_u == 1.0);
    CHECK(pr.d_t1 == -1.0);
    CHECK(pr.d_t2 == -1.0);
    CHECK(pr.d_anchor == 0.0);

    pr = prox_rw_partials(1.5, p);
    CHECK(pr.d_u == 0.0);
    CHECK(pr.d_anchor == 1.0);
    CHECK(pr.d_t1 == 0.0);
    CHECK(pr.d_t2 == 0.0);

    SeededRng rng(3);
    const double eps = 1e-7;
    int checked = 0;
    while (checked < 10000) {
        const double u = rng.uniform(-5, 5);
        ProxThresholds q{rng.uniform(0, 2), rng.uniform(0, 2), rng.uniform(-3, 3)};
        // Stay on a branch interior: every perturbed evaluation must agree on
        // the active branch.
        const ProxBranch b = prox_rw_eval(u, q).branch;
        auto same = [&](double uu, ProxThresholds qq) {
            return prox_rw_eval(uu, qq).branch == b;
        };
        ProxThresholds q_t1p{q.t1 + eps, q.t2, q.anchor}, q_t1m{q.t1 - eps, q.t2, q.anchor};
        ProxThresholds q_t2p{q.t1, q.t2 + eps, q.anchor}, q_t2m{q.t1, q.t2 - eps, q.anchor};
        ProxThresholds q_ap{q.t1, q.t2, q.anchor + eps}, q_am{q.t1, q.t2, q.anchor - eps};
        if (q.t1 < eps || q.t2 < eps) continue;
        if (std::fabs(q.anchor) < eps) continue;  // anchor-sign flip, not a branch interior
        if (!same(u + eps, q) || !same(u - eps, q) || !same(u, q_t1p) || !same(u, q_t1m) ||
            !same(u, q_t2p) || !same(u, q_t2m) || !same(u, q_ap) || !same(u, q_am))
            continue;
        const ProxPartials got = prox_rw_partials(u, q);
        const double fd_u = (prox_rw(u + eps, q) - prox_rw(u - eps, q)) / (2 * eps);
        const double fd_t1 = (prox_rw(u, q_t1p) - prox_rw(u, q_t1m)) / (2 * eps);
        const double fd_t2 = (prox_rw(u, q_t2p) - prox_rw(u, q_t2m)) / (2 * eps);
        const double fd_a = (prox_rw(u, q_ap) - prox_rw(u, q_am)) / (2 * eps);
        REQUIRE(std::fabs(got.d_u - fd_u) <= 1e-6);
        REQUIRE(std::fabs(got.d_t1 - fd_t1) <= 1e-6);
        REQUIRE(std::fabs(got.d_t2 - fd_t2) <= 1e-6);
        REQUIRE(std::fabs(got.d_anchor - fd_a) <= 1e-6);
        ++checked;
    }
}

TEST_CASE("vector prox") {
    SeededRng rng(4);

    SUBCASE("all-ones weights with lambda2 = 0 is an element-wise soft threshold") {
        const DenseVector u = oracles::random_vector(6, rng, 2.0);
        const DenseVector g(6, 1.0);
        const DenseVector anchor = oracles::random_vector(6, rng);
        const double l1 = 0.7, c = 2.0;
        const DenseVector out = prox_rw_vec(u, g, l1, 0.0, c, anchor);
        for (std::size_t i = 0; i < 6; ++i)
            CHECK(out[i] == doctest::Approx(soft_threshold(u[i], l1 / c)).epsilon(1e-15));
    }

    SUBCASE("the anchor is a fixed point when t2 > 0") {
        const DenseVector anchor = oracles::random_vector(8, rng, 2.0);
        DenseVector g(8);
        for (std::size_t i = 0; i < 8; ++i) g[i] = rng.uniform(0.1, 3.0);
        const DenseVector out = prox_rw_vec(anchor, g, 0.4, 0.9, 1.5, anchor);
        for (std::size_t i = 0; i < 8; ++i)
            CHECK(out[i] == doctest::Approx(anchor[i]).epsilon(1e-15));
    }

    SUBCASE("per-element weights give per-element activation shapes") {
        const DenseVector u{1.0, 1.0, 1.0};
        const DenseVector g{0.1, 1.0, 10.0};
        const DenseVector anchor(3, 0.0);
        const DenseVector out = prox_rw_vec(u, g, 0.5, 0.25, 1.0, anchor);
        CHECK(out[0] != out[1]);
        CHECK(out[1] != out[2]);
    }

    SUBCASE("length mismatch throws") {
        CHECK_THROWS_AS(
            prox_rw_vec(DenseVector(3), DenseVector(2, 1.0), 1, 1, 1, DenseVector(3)),
            dim_error);
    }
}

TEST_CASE("prox is 1-Lipschitz and monotone") {
    SeededRng rng(5);
    for (int i = 0; i < 2000; ++i) {
        const ProxThresholds p{rng.uniform(0, 2), rng.uniform(0, 2), rng.uniform(-3, 3)};
        const double a = rng.uniform(-6, 6), b = rng.uniform(-6, 6);
        const double fa = prox_rw(a, p), fb = prox_rw(b, p);
        CHECK(std::fabs(fa - fb) <= std::fabs(a - b) + 1e-15);
        if (a <= b) CHECK(fa <= fb + 1e-15);
        if (b <= a) CHECK(fb <= fa + 1e-15);
    }
}

TEST_CASE("prox is continuous at every breakpoint") {
    SeededRng rng(6);
    const double eps = 1e-9;
    for (int i = 0; i < 500; ++i) {
        const ProxThresholds p{rng.uniform(0, 2), rng.uniform(0, 2), rng.uniform(-3, 3)};
        const double t1 = p.t1, t2 = p.t2, a = p.anchor;
        const double bps_pos[4] = {-t1 - t2, t1 - t2, a + t1 - t2, a + t1 + t2};
        const double bps_neg[4] = {a - t1 - t2, a - t1 + t2, -t1 + t2, t1 + t2};
        const double* bps = a >= 0 ? bps_pos : bps_neg;
        for (int k = 0; k < 4; ++k)
            CHECK(std::fabs(prox_rw(bps[k] - eps, p) - prox_rw(bps[k] + eps, p)) <= 3 * eps);
    }
}

TEST_CASE("anchor = 0 matches the limit from below") {
    SeededRng rng(7);
    for (int i = 0; i < 300; ++i) {
        const double t1 = rng.uniform(0, 2), t2 = rng.uniform(0, 2);
        const double u = rng.uniform(-6, 6);
        const double at_zero = prox_rw(u, {t1, t2, 0.0});
        const double from_below = prox_rw(u, {t1, t2, -1e-13});
        CHECK(std::fabs(at_zero - from_below) <= 1e-12);
    }
}

TEST_CASE("closed form beats the objective grid, t1 < t2 included") {
    SeededRng rng(8);
    for (int i = 0; i < 300; ++i) {
        const double u = rng.uniform(-5, 5);
        // force the t1 < t2 ordering for half the draws
        double t1 = rng.uniform(0, 2), t2 = rng.uniform(0, 2);
        if (i % 2 == 0 && t1 > t2) std::swap(t1, t2);
        const ProxThresholds p{t1, t2, rng.uniform(-3, 3)};
        const double v = prox_rw(u, p);
        const auto grid = ref::prox_objective_grid_min(u, p, -10, 10, 1e-3);
        CHECK(ref::prox_objective(v, u, p) <= grid.objective + 1e-6);
        CHECK(std::fabs(v - grid.v) <= 2e-3);
    }
}
