#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "gadget/model.hpp"
#include "gadget/subspace.hpp"

namespace gadget {

struct GapParams {
    double U = 1.0, t = 0.375, J = 0.09;
    double beta_lr = 0.25, beta_du = 0.0;
};

struct HsSpectrumInfo {
    double E0;         // lowest eigenvalue of h_s (even sector)
    double even_gap;   // gap within the even (lambda -> lambda+4 symmetric) sector
    double vortex_gap; // lowest odd-sector level minus E0
    double intra_gap;  // min(2*vortex_gap, even_gap): lowest intra-M(0) excitation
};

// dense 8x8 with the lambda -> lambda+4 sector split
inline HsSpectrumInfo hs_spectrum(double U, double t) {
    // Symmetric/antisymmetric combinations of |l>, |l+4> block-diagonalize
    // the 8-ring into two 4-chains whose wrap link carries the sector sign.
    Eigen::Matrix4d he = Eigen::Matrix4d::Zero(), ho = Eigen::Matrix4d::Zero();
    for (int l = 0; l < 3; ++l) {
        he(l + 1, l) = he(l, l + 1) = -t;
        ho(l + 1, l) = ho(l, l + 1) = -t;
    }
    he(0, 3) = he(3, 0) = -t; // |3> -> |4> ~ +|0> in even sector
    ho(0, 3) = ho(3, 0) = +t; // ... ~ -|0> in odd sector
    he(0, 0) -= U;
    ho(0, 0) -= U;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> ee(he), eo(ho);
    HsSpectrumInfo r;
    r.E0 = ee.eigenvalues()(0);
    r.even_gap = ee.eigenvalues()(1) - r.E0;
    r.vortex_gap = eo.eigenvalues()(0) - r.E0;
    r.intra_gap = std::min(2 * r.vortex_gap, r.even_gap);
    return r;
}

struct MaintextBound {
    double h1_min;        // three-ring minimum, computed (= -6t)
    double h2_bound;      // min(-3U+4J, -2U-4J)
    double chain_lhs;     // h1_min + h2_bound
    double chain_rhs;     // -3U
    double E0;            // lowest h_s eigenvalue
    bool verdict;         // chain_lhs > chain_rhs and -3U > 3 E0
    bool u_gt_12t;        // the stated sufficient condition
    double generalization_threshold = 16.0; // paper: "when U>16t"
};

inline MaintextBound maintext_bound(double U, double t, double J) {
    MaintextBound b;
    // H1: three decoupled 8-rings with hopping t; min eig of one ring = -2t
    Eigen::MatrixXd ring = Eigen::MatrixXd::Zero(8, 8);
    for (int l = 0; l < 8; ++l) {
        ring((l + 1) % 8, l) -= t;
        ring(l, (l + 1) % 8) -= t;
    }
    double one = eigensolve_dense(ring, 1, false).eigenvalues[0];
    b.h1_min = 3 * one;
    b.h2_bound = std::min(-3 * U + 4 * J, -2 * U - 4 * J);
    b.chain_lhs = b.h1_min + b.h2_bound;
    b.chain_rhs = -3 * U;
    b.E0 = hs_spectrum(U, t).E0;
    b.u_gt_12t = U > 12 * t;
    b.verdict = b.chain_lhs > b.chain_rhs && b.chain_rhs > 3 * b.E0;
    return b;
}

struct GapCertificate {
    GapParams params;
    double E0;
    std::map<std::array<int, 4>, double> pattern_minima; // (al,ar,ad,au)
    double per_star_margin;
    std::array<int, 4> worst_pattern;
    double vortex_gap;
    double inter_bound; // 3 * per_star_margin ("at least three stars")
    double intra_bound; // 2 * vortex_gap (paired odd excitations)
    double certified_gap;
    bool verdict_paper; // certified_gap >= 0.075 U (the paper's claim)
    std::vector<std::string> provenance;
};

// h'_s for one a-pattern: Appendix B diagonal corrections on the 8-ring
inline Eigen::MatrixXd hs_corrected(const GapParams& p, int al, int ar, int ad,
                                    int au) {
    Eigen::MatrixXd h = toric_hs_matrix(p.U, p.t);
    for (int l = 0; l < 8; ++l) {
        int m = l & 3;
        h(l, l) += 2 * p.J *
                   (al * (T_left(m) - 0.5 - p.beta_lr) +
                    ar * (T_right(m) - 0.5 + p.beta_lr) +
                    ad * (T_down(m) - 0.5 - p.beta_du) +
                    au * (T_up(m) - 0.5 + p.beta_du));
    }
    return h;
}

inline GapCertificate certify_appendixB(const GapParams& p) {
    GapCertificate c;
    c.params = p;
    auto hs = hs_spectrum(p.U, p.t);
    c.E0 = hs.E0;
    c.vortex_gap = hs.vortex_gap;
    c.per_star_margin = 1e300;
    for (int al = 0; al < 2; ++al)
        for (int ar = 0; ar < 2; ++ar)
            for (int ad = 0; ad < 2; ++ad)
                for (int au = 0; au < 2; ++au) {
                    if (!al && !ar && !ad && !au) continue;
                    Eigen::MatrixXd h = hs_corrected(p, al, ar, ad, au);
                    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
                        h, Eigen::EigenvaluesOnly);
                    double m = es.eigenvalues()(0) - c.E0;
                    c.pattern_minima[{al, ar, ad, au}] = m;
                    if (m < c.per_star_margin) {
                        c.per_star_margin = m;
                        c.worst_pattern = {al, ar, ad, au};
                    }
                }
    c.inter_bound = 3 * c.per_star_margin;   // ">= 3 stars" multiplicity
    c.intra_bound = 2 * c.vortex_gap;        // "even number of stars"
    c.certified_gap = std::min(c.inter_bound, c.intra_bound);
    c.verdict_paper = c.certified_gap >= 0.075 * p.U;
    c.provenance = {
        "E0, vortex_gap: dense 4x4 sector-split eigensolve of h_s",
        "pattern minima: dense 8x8 eigensolve of h'_s, 15 nonzero a-patterns",
        "inter bound: per-star margin x 3 (paper: 'at least three stars')",
        "intra bound: 2 x vortex gap (paper: 'even number of stars')",
        "product-to-sum inequality (Appendix B 'also serves as a lower "
        "bound') assumed for the a-pattern decomposition",
        "note: Appendix B prints the per-star threshold as 'E0 + 0.25U'; "
        "3 x 0.25U = 0.75U is inconsistent with the concluded 0.075U total, "
        "so 0.025U appears intended; this certifier reports computed margins "
        "and never hard-codes either reading",
        "note: main text prints T_d(m)=1-2*delta_{m,3}; the Appendix A "
        "derivation gives delta_{m,1}, which is what this artifact uses"};
    return c;
}

struct GridSpec {
    double J_lo = 0.02, J_hi = 0.20, J_step = 0.005;
    double t_lo = 0.05, t_hi = 0.60, t_step = 0.025;
    double b_lo = -0.5, b_hi = 0.5, b_step = 0.05;
};

struct OptimizeResult {
    GapParams best;
    double best_gap = -1e300;
    size_t points = 0;
    // landscape rows: J, t, blr, bdu, certified_gap
    std::vector<std::array<double, 5>> landscape;
};

inline std::vector<double> grid_axis(double lo, double hi, double step) {
    std::vector<double> v;
    for (int k = 0;; ++k) {
        double x = lo + k * step;
        if (x > hi + 1e-9) break;
        v.push_back(x);
    }
    return v;
}

// Exhaustive grid search; deterministic lexicographic tie-break on
// (J, t, beta_lr, beta_du). U is the scale (fixed to 1).
inline OptimizeResult optimize_params(const GridSpec& g, int threads = 1,
                                      bool keep_landscape = false) {
    auto Js = grid_axis(g.J_lo, g.J_hi, g.J_step);
    auto ts = grid_axis(g.t_lo, g.t_hi, g.t_step);
    auto bs = grid_axis(g.b_lo, g.b_hi, g.b_step);
    if (Js.empty() || ts.empty() || bs.empty())
        throw std::invalid_argument("optimize_params: empty grid");
    // vortex gap and E0 depend only on t: cache them
    std::vector<double> vort(ts.size()), E0s(ts.size());
    for (size_t i = 0; i < ts.size(); ++i) {
        auto hs = hs_spectrum(1.0, ts[i]);
        vort[i] = hs.vortex_gap;
        E0s[i] = hs.E0;
    }

    struct Best { double gap = -1e300; GapParams p; };
    size_t total = Js.size() * ts.size() * bs.size() * bs.size();
    std::vector<Best> bests(std::max(threads, 1));
    std::vector<std::vector<std::array<double, 5>>> lands(std::max(threads, 1));
    auto worker = [&](int w, int nw) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
        size_t idx = 0;
        for (size_t ji = 0; ji < Js.size(); ++ji)
            for (size_t ti = 0; ti < ts.size(); ++ti)
                for (size_t b1 = 0; b1 < bs.size(); ++b1)
                    for (size_t b2 = 0; b2 < bs.size(); ++b2, ++idx) {
                        if ((int)(idx % nw) != w) continue;
                        GapParams p{1.0, ts[ti], Js[ji], bs[b1], bs[b2]};
                        double margin = 1e300;
                        for (int pat = 1; pat < 16; ++pat) {
                            Eigen::MatrixXd h = hs_corrected(
                                p, pat & 1, (pat >> 1) & 1, (pat >> 2) & 1,
                                (pat >> 3) & 1);
                            es.compute(h, Eigen::EigenvaluesOnly);
                            margin = std::min(
                                margin, es.eigenvalues()(0));
                        }
                        margin -= E0s[ti];
                        double cert = std::min(3 * margin, 2 * vort[ti]);
                        if (keep_landscape)
                            lands[w].push_back(
                                {p.J, p.t, p.beta_lr, p.beta_du, cert});
                        if (cert > bests[w].gap) {
                            bests[w].gap = cert;
                            bests[w].p = p;
                        }
                    }
    };
    int nw = std::max(threads, 1);
    if (nw == 1) {
        worker(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < nw; ++w) pool.emplace_back(worker, w, nw);
        for (auto& th : pool) th.join();
    }
    OptimizeResult r;
    r.points = total;
    auto key = [](const GapParams& p) {
        return std::array<double, 4>{p.J, p.t, p.beta_lr, p.beta_du};
    };
    for (int w = 0; w < nw; ++w) {
        // deterministic tie-break: lexicographically smallest parameters win
        if (bests[w].gap > r.best_gap ||
            (bests[w].gap == r.best_gap && key(bests[w].p) < key(r.best))) {
            r.best_gap = bests[w].gap;
            r.best = bests[w].p;
        }
    }
    if (keep_landscape) {
        for (auto& l : lands)
            r.landscape.insert(r.landscape.end(), l.begin(), l.end());
        std::sort(r.landscape.begin(), r.landscape.end());
    }
    return r;
}

} // namespace gadget
