#include "seqsparse/reference.hpp"

namespace seqsparse::ref {

DenseVector mat_vec(const DenseMatrix& M, const DenseVector& v) {
    require(M.cols() == v.size(), "ref::mat_vec: dimension mismatch");
    DenseVector out(M.rows());
    for (std::size_t i = 0; i < M.rows(); ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < M.cols(); ++j) acc += M(i, j) * v[j];
        out[i] = acc;
    }
    return out;
}

DenseMatrix mat_mul(const DenseMatrix& A, const DenseMatrix& B) {
    require(A.cols() == B.rows(), "ref::mat_mul: dimension mismatch");
    DenseMatrix out(A.rows(), B.cols());
    for (std::size_t i = 0; i < A.rows(); ++i)
        for (std::size_t j = 0; j < B.cols(); ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < A.cols(); ++k) acc += A(i, k) * B(k, j);
            out(i, j) = acc;
        }
    return out;
}

double norm_1_inf(const DenseMatrix& M) {
    double best = 0.0;
    for (std::size_t i = 0; i < M.rows(); ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < M.cols(); ++j) acc += M(i, j) < 0 ? -M(i, j) : M(i, j);
        if (acc > best) best = acc;
    }
    return best;
}

double norm_2_inf(const DenseMatrix& M) {
    double best = 0.0;
    for (std::size_t i = 0; i < M.rows(); ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < M.cols(); ++j) acc += M(i, j) * M(i, j);
        if (acc > best) best = acc;
    }
    return std::sqrt(best);
}

double geom_sum_loop(double r, std::size_t T) {
    double acc = 0.0, term = 1.0;
    for (std::size_t k = 0; k < T; ++k) {
        acc += term;
        term *= r;
    }
    return acc;
}

double top_eigenvalue(const DenseMatrix& M, std::size_t squarings) {
    require(M.rows() == M.cols(), "ref::top_eigenvalue: square matrix expected");
    const std::size_t n = M.rows();
    // Normalize each squaring by the Frobenius norm; the scale cancels in the
    // final trace ratio.
    DenseMatrix S = M;
    for (std::size_t k = 0; k < squarings; ++k) {
        S = mat_mul(S, S);
        double f = 0.0;
        for (std::size_t i = 0; i < S.size(); ++i) f += S.data()[i] * S.data()[i];
        f = std::sqrt(f);
        if (f == 0.0) return 0.0;
        for (std::size_t i = 0; i < S.size(); ++i) S.data()[i] /= f;
    }
    const DenseMatrix SM = mat_mul(S, M);
    double tr_sm = 0.0, tr_s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        tr_sm += SM(i, i);
        tr_s += S(i, i);
    }
    if (tr_s == 0.0) return 0.0;
    return tr_sm / tr_s;
}

double prox_objective(double v, double u, const ProxThresholds& p) {
    const double av = v < 0 ? -v : v;
    const double aw = v - p.anchor < 0 ? p.anchor - v : v - p.anchor;
    return p.t1 * av + p.t2 * aw + 0.5 * (v - u) * (v - u);
}

GridMin prox_objective_grid_min(double u, const ProxThresholds& p, double lo, double hi,
                                double step) {
    GridMin best{lo, prox_objective(lo, u, p)};
    const auto count = static_cast<std::size_t>((hi - lo) / step + 0.5);
    for (std::size_t k = 1; k <= count; ++k) {
        const double v = lo + step * static_cast<double>(k);
        const double obj = prox_objective(v, u, p);
        if (obj < best.objective) best = {v, obj};
    }
    return best;
}

}  // namespace seqsparse::ref
