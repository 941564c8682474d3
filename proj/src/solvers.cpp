#include "seqsparse/solvers.hpp"

namespace seqsparse {

namespace {

void check_dims(const DenseVector& x, const DenseMatrix& A, const DenseMatrix& D,
                const DenseVector& h_init) {
    require(A.rows() == x.size(), "solver: A rows vs x length");
    require(A.cols() == D.rows(), "solver: A cols vs D rows");
    require(D.cols() == h_init.size(), "solver: D cols vs h length");
}

// One proximal gradient step from h: soft(h - (1/c) B^T (B h - x), lambda/c).
DenseVector ista_step(const DenseVector& h, const DenseVector& x, const DenseMatrix& B,
                      double lambda, double c) {
    DenseVector r = mat_vec(B, h);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= x[i];
    DenseVector grad = mat_tvec(B, r);
    DenseVector out(h.size());
    const double gamma = lambda / c;
    for (std::size_t i = 0; i < h.size(); ++i)
        out[i] = soft_threshold(h[i] - grad[i] / c, gamma);
    return out;
}

}  // namespace

DenseVector ista(const DenseVector& x, const DenseMatrix& A, const DenseMatrix& D,
                 double lambda, double c, std::size_t iters, const DenseVector& h_init) {
    check_dims(x, A, D, h_init);
    require(c > 0.0, "ista: c must be positive");
    const DenseMatrix B = mat_mul(A, D);
    DenseVector h = h_init;
    for (std::size_t k = 0; k < iters; ++k) h = ista_step(h, x, B, lambda, c);
    return h;
}

DenseVector fista(const DenseVector& x, const DenseMatrix& A, const DenseMatrix& D,
                  double lambda, double c, std::size_t iters, const DenseVector& h_init) {
    check_dims(x, A, D, h_init);
    require(c > 0.0, "fista: c must be positive");
    const DenseMatrix B = mat_mul(A, D);
    DenseVector h = h_init;
    DenseVector y = h_init;
    double t = 1.0;
    for (std::size_t k = 0; k < iters; ++k) {
        DenseVector h_next = ista_step(y, x, B, lambda, c);
        const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        const double mom = (t - 1.0) / t_next;
        for (std::size_t i = 0; i < y.size(); ++i)
            y[i] = h_next[i] + mom * (h_next[i] - h[i]);
        h = h_next;
        t = t_next;
    }
    return h;
}

double objective_l1(const DenseVector& x, const DenseMatrix& B, const DenseVector& h,
                    double lambda) {
    DenseVector r = mat_vec(B, h);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= x[i];
    return 0.5 * dot(r, r) + lambda * norm1(h);
}

double objective_seq(const DenseVector& h, const DenseVector& x, const DenseVector& h_prev,
                     const DenseMatrix& A, const DenseMatrix& D, const DenseMatrix& G,
                     const DenseMatrix& Z, const DenseVector& g, double lambda1,
                     double lambda2) {
    require(g.size() == h.size(), "objective_seq: g vs h length");
    const DenseVector zh = mat_vec(Z, h);
    DenseVector r = mat_vec(A, mat_vec(D, zh));
    require(r.size() == x.size(), "objective_seq: A D Z h vs x length");
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= x[i];
    const DenseVector gh_prev = mat_vec(G, h_prev);
    double pen1 = 0.0, pen2 = 0.0;
    for (std::size_t i = 0; i < zh.size(); ++i) {
        pen1 += g[i] * std::fabs(zh[i]);
        pen2 += g[i] * std::fabs(zh[i] - gh_prev[i]);
    }
    return 0.5 * dot(r, r) + lambda1 * pen1 + lambda2 * pen2;
}

SequentialCodes algorithm1(const std::vector<DenseVector>& x_seq, const DenseMatrix& A,
                           const DenseMatrix& D, const DenseMatrix& G,
                           const std::vector<DenseMatrix>& Z,
                           const std::vector<DenseVector>& g, const DenseVector& h0,
                           const SolverConfig& cfg) {
    require(!x_seq.empty(), "algorithm1: empty measurement sequence");
    require(cfg.iters >= 1, "algorithm1: need at least one iteration");
    require(cfg.c > 0.0, "algorithm1: c must be positive");
    require(Z.size() == cfg.iters && g.size() == cfg.iters,
            "algorithm1: one Z and g per iteration");
    check_dims(x_seq[0], A, D, h0);
    const std::size_t hdim = h0.size();
    require(G.rows() == hdim && G.cols() == hdim, "algorithm1: G must be h x h");
    for (std::size_t l = 0; l < cfg.iters; ++l) {
        require(Z[l].rows() == hdim && Z[l].cols() == hdim, "algorithm1: Z must be h x h");
        require(g[l].size() == hdim, "algorithm1: g must have length h");
        for (std::size_t i = 0; i < hdim; ++i)
            require(g[l][i] > 0.0, "algorithm1: g must be positive element-wise");
    }

    const DenseMatrix B = mat_mul(A, D);
    const DenseMatrix M = gram(B);

    SequentialCodes out;
    out.codes.resize(x_seq.size());
    DenseVector h_final = h0;
    for (std::size_t t = 0; t < x_seq.size(); ++t) {
        const DenseVector anchor = mat_vec(G, h_final);
        const DenseVector btx = mat_tvec(B, x_seq[t]);
        auto& layers = out.codes[t];
        layers.reserve(cfg.iters + 1);
        layers.push_back(anchor);  // h_t^(0) = G h_{t-1}
        DenseVector h = anchor;
        for (std::size_t l = 0; l < cfg.iters; ++l) {
            // Gradient step on the fidelity term, then reweight by Z_l.
            const DenseVector mh = mat_vec(M, h);
            DenseVector step(hdim);
            for (std::size_t i = 0; i < hdim; ++i)
                step[i] = h[i] - mh[i] / cfg.c + btx[i] / cfg.c;
            const DenseVector u = mat_vec(Z[l], step);
            h = prox_rw_vec(u, g[l], cfg.lambda1, cfg.lambda2, cfg.c, anchor);
            layers.push_back(h);
        }
        h_final = h;
    }
    return out;
}

}  // namespace seqsparse
