#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "gadget/sparse.hpp"

namespace gadget {

struct Spectrum {
    std::vector<double> eigenvalues; // ascending
    Eigen::MatrixXd eigenvectors;    // columns; may be empty
    std::vector<double> residuals;
    std::string method;
};

struct EigConfig {
    enum class Method { dense, iterative } method = Method::dense;
    double tol = 1e-11;
    int max_iter = 300; // Krylov dimension per restart cycle
    int max_restarts = 25;
    uint64_t seed = 0x9e3779b97f4a7c15ull;
};

// --- dense path ------------------------------------------------------------
inline Spectrum eigensolve_dense(const Eigen::MatrixXd& M, int k,
                                 bool vectors = true) {
    if ((M - M.transpose()).cwiseAbs().maxCoeff() >
        1e-12 * (1 + M.cwiseAbs().maxCoeff()))
        throw std::invalid_argument("eigensolve: matrix not symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.compute(M, vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    Spectrum sp;
    sp.method = "dense";
    k = std::min<int>(k, M.rows());
    for (int i = 0; i < k; ++i) sp.eigenvalues.push_back(es.eigenvalues()(i));
    if (vectors) {
        sp.eigenvectors = es.eigenvectors().leftCols(k);
        for (int i = 0; i < k; ++i)
            sp.residuals.push_back((M * sp.eigenvectors.col(i) -
                                    sp.eigenvalues[i] * sp.eigenvectors.col(i))
                                       .norm());
    }
    return sp;
}

// deterministic xorshift; fixed seed => bitwise reproducible start vector
inline double det_uniform(uint64_t& st) {
    st ^= st << 13; st ^= st >> 7; st ^= st << 17;
    return double(st >> 11) * (1.0 / 9007199254740992.0) - 0.5;
}

// Lanczos with full reorthogonalization and simple restarts (restart vector
// = lowest Ritz vector). Matrix-free: op(x,y) computes y = A x.
// Deterministic for fixed seed. For m >= dim the Krylov space is complete
// and the result is exact, so small matrices always converge.
inline Spectrum lanczos_lowest(int dim,
                               const std::function<void(const double*, double*)>& op,
                               int k, const EigConfig& cfg = {}) {
    if (k < 1 || k > dim) throw std::invalid_argument("lanczos: bad k");
    int m_per_cycle = std::min(dim, std::max(cfg.max_iter, 3 * k + 10));
    uint64_t st = cfg.seed;
    Eigen::VectorXd v(dim), w(dim);
    for (int i = 0; i < dim; ++i) v(i) = det_uniform(st);
    v.normalize();
    double prev = 1e300;
    for (int cycle = 0; cycle < cfg.max_restarts; ++cycle) {
        std::vector<Eigen::VectorXd> V;
        std::vector<double> alpha, beta;
        for (int it = 0; it < m_per_cycle; ++it) {
            V.push_back(v);
            op(v.data(), w.data());
            alpha.push_back(v.dot(w));
            // full reorthogonalization against the whole basis, twice
            for (int pass = 0; pass < 2; ++pass)
                for (auto& u : V) w -= u.dot(w) * u;
            double b = w.norm();
            if (b < 1e-13 || it == m_per_cycle - 1) {
                if (b >= 1e-13) beta.push_back(b);
                break;
            }
            beta.push_back(b);
            v = w / b;
        }
        int m = (int)alpha.size();
        Eigen::MatrixXd Tm = Eigen::MatrixXd::Zero(m, m);
        for (int i = 0; i < m; ++i) {
            Tm(i, i) = alpha[i];
            if (i + 1 < m && i < (int)beta.size())
                Tm(i, i + 1) = Tm(i + 1, i) = beta[i];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Tm);
        int kk = std::min(k, m);
        double low = es.eigenvalues()(kk - 1);
        bool exhausted = m < m_per_cycle; // Krylov space closed early
        bool converged =
            exhausted || m >= dim ||
            std::abs(low - prev) < cfg.tol * (1 + std::abs(low));
        // assemble lowest Ritz vector for restart / output
        auto ritz = [&](int i) {
            Eigen::VectorXd r = Eigen::VectorXd::Zero(dim);
            for (int j = 0; j < m; ++j) r += es.eigenvectors()(j, i) * V[j];
            return r;
        };
        if (converged) {
            Spectrum sp;
            sp.method = "iterative";
            sp.eigenvectors = Eigen::MatrixXd(dim, kk);
            for (int i = 0; i < kk; ++i) {
                sp.eigenvalues.push_back(es.eigenvalues()(i));
                sp.eigenvectors.col(i) = ritz(i).normalized();
                Eigen::VectorXd r(dim);
                op(sp.eigenvectors.col(i).data(), r.data());
                r -= sp.eigenvalues[i] * sp.eigenvectors.col(i);
                sp.residuals.push_back(r.norm());
            }
            return sp;
        }
        prev = low;
        v = ritz(0).normalized();
    }
    throw std::runtime_error("lanczos: no convergence");
}

inline Spectrum eigensolve(const CsrMatrix& M, int k, const EigConfig& cfg = {}) {
    if (cfg.method == EigConfig::Method::dense)
        return eigensolve_dense(M.dense(), k);
    return lanczos_lowest(
        M.dim, [&](const double* x, double* y) { M.matvec(x, y); }, k, cfg);
}

struct GroundInfo {
    double E0;
    int degeneracy;
    double gap;
};

inline GroundInfo ground_info(const Spectrum& sp, double deg_tol = 1e-9) {
    if (sp.eigenvalues.size() < 2)
        throw std::invalid_argument("ground_info: need >= 2 eigenvalues");
    double e0 = sp.eigenvalues.front();
    int deg = 0;
    double gap = -1;
    for (double e : sp.eigenvalues) {
        if (e - e0 <= deg_tol) ++deg;
        else { gap = e - e0; break; }
    }
    if (gap < 0)
        throw std::invalid_argument("ground_info: all returned levels degenerate");
    return {e0, deg, gap};
}

} // namespace gadget
