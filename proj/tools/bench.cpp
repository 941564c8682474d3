// Timing comparison between the serial reference kernels and the parallel
// library versions, plus the element-wise activation throughput that
// dominates the oracle tests.

#include <chrono>
#include <cstdio>

#include "seqsparse/linalg.hpp"
#include "seqsparse/prox.hpp"
#include "seqsparse/reference.hpp"

using namespace seqsparse;
using clock_t_ = std::chrono::steady_clock;

namespace {

double seconds(clock_t_::time_point a, clock_t_::time_point b) {
    return std::chrono::duration<double>(b - a).count();
}

template <typename F>
double time_best_of(int reps, F&& f) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = clock_t_::now();
        f();
        best = std::min(best, seconds(t0, clock_t_::now()));
    }
    return best;
}

DenseMatrix random_matrix(std::size_t r, std::size_t c, SeededRng& rng) {
    DenseMatrix m(r, c);
    for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = rng.normal();
    return m;
}

}  // namespace

int main() {
    apply_thread_config();
    std::printf("threads: %d\n\n", configured_threads());
    std::printf("%-28s %12s %12s %8s\n", "kernel", "serial [s]", "parallel [s]", "speedup");

    SeededRng rng(7);
    double sink = 0.0;

    {
        const auto M = random_matrix(2048, 2048, rng);
        DenseVector v(2048);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = rng.normal();
        const double ts = time_best_of(5, [&] { sink += ref::mat_vec(M, v)[0]; });
        const double tp = time_best_of(5, [&] { sink += mat_vec(M, v)[0]; });
        std::printf("%-28s %12.6f %12.6f %8.2f\n", "mat_vec 2048x2048", ts, tp, ts / tp);
    }
    {
        const auto A = random_matrix(384, 384, rng);
        const auto B = random_matrix(384, 384, rng);
        const double ts = time_best_of(3, [&] { sink += ref::mat_mul(A, B)(0, 0); });
        const double tp = time_best_of(3, [&] { sink += mat_mul(A, B)(0, 0); });
        std::printf("%-28s %12.6f %12.6f %8.2f\n", "mat_mul 384^3", ts, tp, ts / tp);
    }
    {
        // Activation throughput: one grid scan of the shrinkage objective vs
        // the closed form over the same tuples.
        const std::size_t tuples = 2000;
        std::vector<double> us(tuples);
        std::vector<ProxThresholds> ps(tuples);
        for (std::size_t i = 0; i < tuples; ++i) {
            us[i] = rng.uniform(-5, 5);
            ps[i] = {rng.uniform(0, 2), rng.uniform(0, 2), rng.uniform(-3, 3)};
        }
        const double ts = time_best_of(3, [&] {
            double acc = 0.0;
            for (std::size_t i = 0; i < tuples; ++i)
                acc += ref::prox_objective_grid_min(us[i], ps[i], -10, 10, 1e-3).v;
            sink += acc;
        });
        const double tp = time_best_of(3, [&] {
            double acc = 0.0;
#pragma omp parallel for reduction(+ : acc) schedule(static)
            for (std::size_t i = 0; i < tuples; ++i)
                acc += ref::prox_objective_grid_min(us[i], ps[i], -10, 10, 1e-3).v;
            sink += acc;
        });
        std::printf("%-28s %12.6f %12.6f %8.2f\n", "prox grid scan x2000", ts, tp, ts / tp);

        const double tc = time_best_of(3, [&] {
            double acc = 0.0;
            for (std::size_t i = 0; i < tuples; ++i) acc += prox_rw(us[i], ps[i]);
            sink += acc;
        });
        std::printf("%-28s %12.6f %12.6f %8s\n", "prox closed form x2000", tc, tc, "-");
    }
    std::printf("\n(checksum %g)\n", sink);
    return 0;
}
