#include "seqsparse/linalg.hpp"

#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace seqsparse {

int configured_threads() {
#ifdef _OPENMP
    if (const char* env = std::getenv("SEQSPARSE_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    return omp_get_max_threads();
#else
    return 1;
#endif
}

void apply_thread_config() {
#ifdef _OPENMP
    omp_set_num_threads(configured_threads());
#endif
}

namespace {
// Below this many output elements a parallel region costs more than it saves.
constexpr std::size_t kParallelCutoff = 4096;
}  // namespace

DenseVector mat_vec(const DenseMatrix& M, const DenseVector& v) {
    require(M.cols() == v.size(), "mat_vec: M is " + std::to_string(M.rows()) + "x" +
                                      std::to_string(M.cols()) + " but v has length " +
                                      std::to_string(v.size()));
    const std::size_t r = M.rows(), c = M.cols();
    DenseVector out(r);
#pragma omp parallel for schedule(static) if (r * c >= kParallelCutoff)
    for (std::size_t i = 0; i < r; ++i) {
        const double* row = M.row(i);
        double acc = 0.0;
        for (std::size_t j = 0; j < c; ++j) acc += row[j] * v[j];
        out[i] = acc;
    }
    return out;
}

DenseVector mat_tvec(const DenseMatrix& M, const DenseVector& v) {
    require(M.rows() == v.size(), "mat_tvec: M is " + std::to_string(M.rows()) + "x" +
                                      std::to_string(M.cols()) + " but v has length " +
                                      std::to_string(v.size()));
    const std::size_t r = M.rows(), c = M.cols();
    DenseVector out(c);
#pragma omp parallel for schedule(static) if (r * c >= kParallelCutoff)
    for (std::size_t j = 0; j < c; ++j) {
        double acc = 0.0;
        for (std::size_t i = 0; i < r; ++i) acc += M(i, j) * v[i];
        out[j] = acc;
    }
    return out;
}

DenseMatrix mat_mul(const DenseMatrix& A, const DenseMatrix& B) {
    require(A.cols() == B.rows(), "mat_mul: inner dims " + std::to_string(A.cols()) + " vs " +
                                      std::to_string(B.rows()));
    const std::size_t r = A.rows(), k = A.cols(), c = B.cols();
    DenseMatrix out(r, c);
#pragma omp parallel for schedule(static) if (r * k * c >= kParallelCutoff)
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < c; ++j) {
            double acc = 0.0;
            for (std::size_t p = 0; p < k; ++p) acc += A(i, p) * B(p, j);
            out(i, j) = acc;
        }
    }
    return out;
}

DenseMatrix mat_tmul(const DenseMatrix& A, const DenseMatrix& B) {
    require(A.rows() == B.rows(), "mat_tmul: inner dims " + std::to_string(A.rows()) + " vs " +
                                      std::to_string(B.rows()));
    const std::size_t r = A.cols(), k = A.rows(), c = B.cols();
    DenseMatrix out(r, c);
#pragma omp parallel for schedule(static) if (r * k * c >= kParallelCutoff)
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < c; ++j) {
            double acc = 0.0;
            for (std::size_t p = 0; p < k; ++p) acc += A(p, i) * B(p, j);
            out(i, j) = acc;
        }
    }
    return out;
}

DenseMatrix mat_mul_t(const DenseMatrix& A, const DenseMatrix& B) {
    require(A.cols() == B.cols(), "mat_mul_t: inner dims " + std::to_string(A.cols()) + " vs " +
                                      std::to_string(B.cols()));
    const std::size_t r = A.rows(), k = A.cols(), c = B.rows();
    DenseMatrix out(r, c);
#pragma omp parallel for schedule(static) if (r * k * c >= kParallelCutoff)
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < c; ++j) {
            double acc = 0.0;
            for (std::size_t p = 0; p < k; ++p) acc += A(i, p) * B(j, p);
            out(i, j) = acc;
        }
    }
    return out;
}

DenseMatrix transpose(const DenseMatrix& M) {
    DenseMatrix out(M.cols(), M.rows());
    for (std::size_t i = 0; i < M.rows(); ++i)
        for (std::size_t j = 0; j < M.cols(); ++j) out(j, i) = M(i, j);
    return out;
}

DenseMatrix gram(const DenseMatrix& M) { return mat_tmul(M, M); }

DenseVector add(const DenseVector& a, const DenseVector& b) {
    require(a.size() == b.size(), "add: length mismatch");
    DenseVector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

DenseVector sub(const DenseVector& a, const DenseVector& b) {
    require(a.size() == b.size(), "sub: length mismatch");
    DenseVector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

DenseVector scale(const DenseVector& a, double s) {
    DenseVector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * s;
    return out;
}

double dot(const DenseVector& a, const DenseVector& b) {
    require(a.size() == b.size(), "dot: length mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

double norm2(const DenseVector& v) { return std::sqrt(dot(v, v)); }

double norm1(const DenseVector& v) {
    double acc = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) acc += std::fabs(v[i]);
    return acc;
}

double norm_inf(const DenseVector& v) {
    double m = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) m = std::max(m, std::fabs(v[i]));
    return m;
}

void axpy(DenseVector& a, double s, const DenseVector& b) {
    require(a.size() == b.size(), "axpy: length mismatch");
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += s * b[i];
}

DenseMatrix add(const DenseMatrix& a, const DenseMatrix& b) {
    require(a.rows() == b.rows() && a.cols() == b.cols(), "add: shape mismatch");
    DenseMatrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.size(); ++i) out.data()[i] = a.data()[i] + b.data()[i];
    return out;
}

DenseMatrix sub(const DenseMatrix& a, const DenseMatrix& b) {
    require(a.rows() == b.rows() && a.cols() == b.cols(), "sub: shape mismatch");
    DenseMatrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.size(); ++i) out.data()[i] = a.data()[i] - b.data()[i];
    return out;
}

DenseMatrix scale(const DenseMatrix& a, double s) {
    DenseMatrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.size(); ++i) out.data()[i] = a.data()[i] * s;
    return out;
}

void add_outer(DenseMatrix& M, double s, const DenseVector& u, const DenseVector& v) {
    require(M.rows() == u.size() && M.cols() == v.size(), "add_outer: shape mismatch");
    for (std::size_t i = 0; i < u.size(); ++i) {
        double* row = M.row(i);
        const double su = s * u[i];
        for (std::size_t j = 0; j < v.size(); ++j) row[j] += su * v[j];
    }
}

double frob_dot(const DenseMatrix& a, const DenseMatrix& b) {
    require(a.rows() == b.rows() && a.cols() == b.cols(), "frob_dot: shape mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a.data()[i] * b.data()[i];
    return acc;
}

double norm_1_inf(const DenseMatrix& M) {
    double best = 0.0;
    for (std::size_t i = 0; i < M.rows(); ++i) {
        const double* row = M.row(i);
        double acc = 0.0;
        for (std::size_t j = 0; j < M.cols(); ++j) acc += std::fabs(row[j]);
        best = std::max(best, acc);
    }
    return best;
}

double norm_2_inf(const DenseMatrix& M) {
    double best = 0.0;
    for (std::size_t i = 0; i < M.rows(); ++i) {
        const double* row = M.row(i);
        double acc = 0.0;
        for (std::size_t j = 0; j < M.cols(); ++j) acc += row[j] * row[j];
        best = std::max(best, acc);
    }
    return std::sqrt(best);
}

double geom_sum(double r, std::size_t T) {
    require(T >= 1, "geom_sum: T must be >= 1");
    if (std::fabs(r - 1.0) < 1e-12) return static_cast<double>(T);
    return (std::pow(r, static_cast<double>(T)) - 1.0) / (r - 1.0);
}

double spectral_upper(const DenseMatrix& M, std::size_t iters, std::uint64_t seed) {
    require(M.rows() == M.cols(), "spectral_upper: matrix must be square");
    const std::size_t n = M.rows();
    if (n == 0) return 0.0;

    SeededRng rng(seed);
    DenseVector v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = rng.normal();
    double nv = norm2(v);
    if (nv == 0.0) v[0] = 1.0, nv = 1.0;
    for (std::size_t i = 0; i < n; ++i) v[i] /= nv;

    double lambda = 0.0;
    for (std::size_t k = 0; k < iters; ++k) {
        DenseVector w = mat_vec(M, v);
        const double nw = norm2(w);
        if (nw == 0.0) return 0.0;  // v in the kernel: zero matrix or unlucky start
        lambda = dot(v, w);         // Rayleigh quotient, v unit
        for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / nw;
    }
    return 1.01 * lambda;
}

}  // namespace seqsparse
