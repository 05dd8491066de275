#pragma once

#include <deque>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "gadget/model.hpp"
#include "gadget/sparse.hpp"
#include "gadget/spectral.hpp"

namespace gadget {

inline size_t default_state_budget() {
    if (const char* env = std::getenv("GADGET_BUDGET")) {
        long long v = std::atoll(env);
        if (v > 0) return (size_t)v;
    }
    return size_t(1) << 22;
}

// One computational basis state of the gadget model: per-star spin values
// plus the qubit configuration.
struct BasisState {
    std::vector<uint8_t> m;
    BitVec q;
    bool operator==(const BasisState& o) const { return m == o.m && q == o.q; }
};
struct BasisStateHash {
    size_t operator()(const BasisState& s) const {
        size_t h = s.q.hash();
        for (uint8_t v : s.m) h = h * 1099511628211ull + v;
        return h;
    }
};

// Invariant subspace M(d) with lambda bookkeeping. lam[i] is the canonical
// lambda-vector of state i (entries 0..7). On a torus the BFS discovers the
// global-shift identification (lambda ~ lambda + 4*1) rather than assuming
// it; `shift_identified` records whether it was seen.
struct SubspaceBasis {
    int N = 0; // stars
    std::vector<BasisState> states;
    std::unordered_map<BasisState, int, BasisStateHash> index;
    std::vector<std::vector<uint8_t>> lam;
    bool shift_identified = false;

    int find(const BasisState& s) const {
        auto it = index.find(s);
        return it == index.end() ? -1 : it->second;
    }
};

namespace detail {
inline std::vector<uint8_t> shift4(std::vector<uint8_t> l) {
    for (auto& v : l) v = (v + 4) & 7;
    return l;
}
inline std::vector<uint8_t> lexmin_label(const std::vector<uint8_t>& l) {
    auto l2 = shift4(l);
    return std::min(l, l2);
}
} // namespace detail

// Precomputed X-masks of the hop schedule, for fast BFS.
struct HopMasks {
    std::vector<std::array<BitVec, 4>> x; // [star][m]
    explicit HopMasks(const TermSet& T) {
        for (auto& sched : T.hop_schedule) {
            std::array<BitVec, 4> a{sched[0].xmask(), sched[1].xmask(),
                                    sched[2].xmask(), sched[3].xmask()};
            x.push_back(a);
        }
    }
};

// BFS closure of |0>_gadget |d>_qubit under the D-dagger / D moves.
inline SubspaceBasis enumerate_subspace(const TermSet& T, const BitVec& d,
                                        size_t budget = default_state_budget()) {
    int N = (int)T.stars.size();
    HopMasks hop(T);
    SubspaceBasis B;
    B.N = N;
    BasisState start{std::vector<uint8_t>(N, 0), d};
    B.states.push_back(start);
    B.index[start] = 0;
    B.lam.push_back(std::vector<uint8_t>(N, 0));
    std::deque<int> work{0};
    while (!work.empty()) {
        int ci = work.front();
        work.pop_front();
        BasisState cur = B.states[ci];           // copy: vector grows below
        std::vector<uint8_t> clam = B.lam[ci];
        for (int s = 0; s < N; ++s) {
            for (int dir : {+1, -1}) {
                BasisState nxt = cur;
                int m = cur.m[s];
                int flip_m = dir > 0 ? m : (m + 3) & 3;
                nxt.m[s] = uint8_t((m + dir + 4) & 3);
                nxt.q ^= hop.x[s][flip_m];
                std::vector<uint8_t> nlam = clam;
                nlam[s] = uint8_t((clam[s] + dir + 8) & 7);
                auto it = B.index.find(nxt);
                if (it == B.index.end()) {
                    if (B.states.size() >= budget)
                        throw std::runtime_error(
                            "enumerate_subspace: state budget exceeded");
                    B.index[nxt] = (int)B.states.size();
                    work.push_back((int)B.states.size());
                    B.states.push_back(nxt);
                    B.lam.push_back(nlam);
                } else {
                    // revisits must agree exactly or via the global shift
                    const auto& stored = B.lam[it->second];
                    if (nlam != stored) {
                        if (detail::shift4(nlam) == stored)
                            B.shift_identified = true;
                        else
                            throw std::runtime_error(
                                "enumerate_subspace: inconsistent lambda labels "
                                "(model bug)");
                    }
                }
            }
        }
    }
    if (B.shift_identified)
        for (auto& l : B.lam) l = detail::lexmin_label(l);
    return B;
}

// ---------------------------------------------------------------------------
// Restricted Hamiltonian assembly
// ---------------------------------------------------------------------------

inline double shield_energy(const TermSet& T, const std::vector<uint8_t>& m) {
    double e = 0;
    for (const auto& p : T.shield_pairs)
        e += p.horizontal ? T_left(m[p.s]) * T_right(m[p.s2])
                          : T_down(m[p.s]) * T_up(m[p.s2]);
    return T.spec.J * e;
}

inline double diag_energy(const TermSet& T, const BasisState& st) {
    double e = 0;
    const double J = T.spec.J, U = T.spec.U;
    for (const auto& b : T.plaquettes) e += -J * b.diag_sign(st.q);
    for (const auto& c : T.edges) e += -J * c.diag_sign(st.q);
    e += shield_energy(T, st.m);
    for (uint8_t ms : st.m)
        if (ms == 0) e += -U;
    return e;
}

inline CsrMatrix assemble_restricted(const TermSet& T, const SubspaceBasis& B) {
    HopMasks hop(T);
    const double t = T.spec.t;
    std::vector<std::tuple<int, int, double>> trip;
    for (int i = 0; i < (int)B.states.size(); ++i) {
        const BasisState& st = B.states[i];
        trip.emplace_back(i, i, diag_energy(T, st));
        for (int s = 0; s < B.N; ++s)
            for (int dir : {+1, -1}) {
                BasisState nxt = st;
                int m = st.m[s];
                nxt.m[s] = uint8_t((m + dir + 4) & 3);
                nxt.q ^= hop.x[s][dir > 0 ? m : (m + 3) & 3];
                int j = B.find(nxt);
                if (j < 0)
                    throw std::runtime_error(
                        "assemble_restricted: out-of-basis transition");
                trip.emplace_back(i, j, -t);
            }
    }
    return CsrMatrix::from_triplets((int)B.states.size(), std::move(trip));
}

// ---------------------------------------------------------------------------
// lambda-representation reduction
// ---------------------------------------------------------------------------

struct LambdaReduction {
    Eigen::MatrixXd hs;            // 8x8 one-body block (same for every star)
    std::vector<double> residual;  // <H_e + H_shield> per basis state
    double plaquette_const = 0;    // <H_p>, constant across the subspace
};

inline Eigen::MatrixXd toric_hs_matrix(double U, double t) {
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(8, 8);
    for (int l = 0; l < 8; ++l) {
        h((l + 1) % 8, l) -= t;
        h(l, (l + 1) % 8) -= t;
    }
    h(0, 0) -= U;
    h(4, 4) -= U;
    return h;
}

inline LambdaReduction lambda_reduce(const TermSet& T, const SubspaceBasis& B) {
    LambdaReduction R;
    R.hs = toric_hs_matrix(T.spec.U, T.spec.t);
    const double J = T.spec.J;
    bool first = true;
    for (const auto& st : B.states) {
        double he = 0;
        for (const auto& c : T.edges) he += -J * c.diag_sign(st.q);
        double hp = 0;
        for (const auto& b : T.plaquettes) hp += -J * b.diag_sign(st.q);
        if (first) {
            R.plaquette_const = hp;
            first = false;
        } else if (hp != R.plaquette_const) {
            throw std::runtime_error(
                "lambda_reduce: plaquette energy varies inside subspace");
        }
        R.residual.push_back(he + shield_energy(T, st.m));
    }
    return R;
}

// full 64-pair Appendix-A style tables; returns number of mismatches
struct ShieldTableReport {
    int horizontal_mismatches = 0;
    int vertical_mismatches = 0;
    std::vector<std::array<int, 3>> mismatches; // (lambda, lambda', hor?1:0)
};

inline BitVec prefix_xmask(const TermSet& T, int s, int lambda) {
    BitVec q(T.n_qubits());
    for (int k = 0; k < lambda; ++k) q ^= T.hop_schedule[s][k & 3].xmask();
    return q;
}

inline ShieldTableReport verify_shield_cancellation(const TermSet& T) {
    const TorusLattice& L = T.lattice;
    ShieldTableReport rep;
    int s = L.star(0, 0), sx = L.star(1, 0), sy = L.star(0, 1);
    PauliOp Ceh = T.edges[L.hedge(0, 0)], Cev = T.edges[L.vedge(0, 0)];
    for (int la = 0; la < 8; ++la)
        for (int lb = 0; lb < 8; ++lb) {
            BitVec qh = prefix_xmask(T, s, la);
            qh ^= prefix_xmask(T, sx, lb);
            double ce = Ceh.diag_sign(qh);
            double tt = T_left(la & 3) * T_right(lb & 3);
            if (ce != tt) {
                ++rep.horizontal_mismatches;
                rep.mismatches.push_back({la, lb, 1});
            }
            BitVec qv = prefix_xmask(T, s, la);
            qv ^= prefix_xmask(T, sy, lb);
            ce = Cev.diag_sign(qv);
            tt = T_down(la & 3) * T_up(lb & 3);
            if (ce != tt) {
                ++rep.vertical_mismatches;
                rep.mismatches.push_back({la, lb, 0});
            }
        }
    return rep;
}

// ---------------------------------------------------------------------------
// Ground states, unitary connection, excitations
// ---------------------------------------------------------------------------

// product state over the lambda-representation: amp = prod_s f_s(lambda_s)
inline Eigen::VectorXd product_state(const SubspaceBasis& B,
                                     const std::vector<Eigen::VectorXd>& factors) {
    Eigen::VectorXd v(B.states.size());
    for (size_t i = 0; i < B.states.size(); ++i) {
        // amplitude on the quotient: sum over the label representatives
        double a = 1, b = 1;
        for (int s = 0; s < B.N; ++s) {
            a *= factors[s](B.lam[i][s]);
            b *= factors[s]((B.lam[i][s] + 4) & 7);
        }
        v(i) = B.shift_identified ? a + b : a;
    }
    double n = v.norm();
    if (n < 1e-14)
        throw std::runtime_error(
            "product_state: vanishing norm (odd-parity product is identified "
            "to zero)");
    return v / n;
}

inline Eigen::VectorXd ground_alpha0(const TermSet& T) {
    auto sp = eigensolve_dense(toric_hs_matrix(T.spec.U, T.spec.t), 1);
    Eigen::VectorXd a0 = sp.eigenvectors.col(0);
    if (a0(0) < 0) a0 = -a0;
    return a0;
}

inline Eigen::VectorXd build_ground_state(const TermSet& T,
                                          const SubspaceBasis& B) {
    Eigen::VectorXd a0 = ground_alpha0(T);
    return product_state(B, std::vector<Eigen::VectorXd>(B.N, a0));
}

// sector representatives: qubit configs for the four logical sectors
inline std::vector<BitVec> logical_sector_reps(const TermSet& T) {
    BitVec zero(T.n_qubits());
    BitVec x1 = zero ^ T.logicals[0][0].xmask();
    BitVec x2 = zero ^ T.logicals[1][0].xmask();
    BitVec x12 = x1 ^ T.logicals[1][0].xmask();
    return {zero, x1, x2, x12};
}

// Image of a basis vector under the connector U = prod_s U_s
// (U_s = sum_m |m><m| prod_{m'<m} A_s(m')), as (state -> state) map; X-type
// prefixes carry no sign.
inline BasisState connector_image(const TermSet& T, const BasisState& st) {
    BasisState out = st;
    for (size_t s = 0; s < st.m.size(); ++s)
        out.q ^= prefix_xmask(T, (int)s, st.m[s]);
    return out;
}

// orbit of a qubit config under all A_s flips (the stabilizer group orbit)
inline std::vector<BitVec> star_orbit(const TermSet& T, const BitVec& d) {
    std::vector<BitVec> orbit{d};
    std::unordered_map<BitVec, int, BitVecHash> seen{{d, 0}};
    for (size_t i = 0; i < orbit.size(); ++i)
        for (const auto& A : T.stars) {
            BitVec nxt = orbit[i] ^ A.xmask();
            if (seen.emplace(nxt, (int)orbit.size()).second) orbit.push_back(nxt);
        }
    return orbit;
}

// fidelity |<alpha0~^{otimes N} (x) psi_Toric(d)| U |psi>| for a vector over B
inline double connector_fidelity(const TermSet& T, const SubspaceBasis& B,
                                 const Eigen::VectorXd& psi, const BitVec& d) {
    Eigen::VectorXd a0 = ground_alpha0(T);
    Eigen::Vector4d at;
    for (int m = 0; m < 4; ++m) at(m) = a0(m);
    at.normalize(); // alpha0(m) = alpha0(m+4): per-site gadget factor
    auto orbit = star_orbit(T, d);
    std::unordered_map<BitVec, int, BitVecHash> inorbit;
    for (auto& c : orbit) inorbit.emplace(c, 1);
    double toric_amp = 1.0 / std::sqrt((double)orbit.size());
    double ov = 0;
    for (size_t i = 0; i < B.states.size(); ++i) {
        BasisState img = connector_image(T, B.states[i]);
        if (!inorbit.count(img.q)) continue;
        double ta = toric_amp;
        for (uint8_t m : img.m) ta *= at(m);
        ov += psi(i) * ta;
    }
    return std::abs(ov);
}

// --- conjugated logical operators -----------------------------------------
// Xbar commutes with U, so the conjugated operator equals Xbar itself: it
// flips qubits and permutes basis states (possibly across sector blocks).
// Zbar conjugated by U becomes diagonal: sign = Zbar evaluated on
// q ^ (xor of connector prefixes at the current m-vector).
inline double conjugated_z_sign(const TermSet& T, const BasisState& st,
                                const PauliOp& zstring) {
    BasisState img = connector_image(T, st);
    return zstring.diag_sign(img.q);
}

struct Excitation {
    Eigen::VectorXd state;
    double energy_expect;
    double residual; // ||(H - E)v||
};

inline Excitation check_eigenstate(const CsrMatrix& H, const Eigen::VectorXd& v) {
    Eigen::VectorXd hv = H * v;
    double e = v.dot(hv);
    return {v, e, (hv - e * v).norm()};
}

// vortex pair: replace alpha0 by the lowest odd-sector eigenvector of h_s at
// two stars (odd factors must come in pairs on a torus).
inline Eigen::VectorXd vortex_pair_state(const TermSet& T, const SubspaceBasis& B,
                                         int s1, int s2) {
    Eigen::MatrixXd hs = toric_hs_matrix(T.spec.U, T.spec.t);
    auto sp = eigensolve_dense(hs, 8);
    Eigen::VectorXd a0 = sp.eigenvectors.col(0);
    // first eigenvector odd under lambda -> lambda+4
    Eigen::VectorXd beta;
    for (int i = 1; i < 8; ++i) {
        Eigen::VectorXd v = sp.eigenvectors.col(i);
        double odd = 0;
        for (int l = 0; l < 4; ++l) odd += std::abs(v(l) + v(l + 4));
        if (odd < 1e-8) { beta = v; break; }
    }
    if (beta.size() == 0)
        throw std::runtime_error("vortex_pair_state: no odd eigenvector found");
    std::vector<Eigen::VectorXd> fac(B.N, a0);
    fac[s1] = beta;
    fac[s2] = beta;
    return product_state(B, fac);
}

} // namespace gadget
