#pragma once

// Quantum-double generalization: group-valued qudits on the doubled edges,
// hopping species indexed by a generating set, and the lambda-representation
// with the |lam+4, g, f> = |lam, g, g f> redundancy.

#include <array>
#include <deque>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "gadget/group.hpp"
#include "gadget/lattice.hpp"
#include "gadget/model.hpp"
#include "gadget/sparse.hpp"
#include "gadget/spectral.hpp"
#include "gadget/subspace.hpp"

namespace gadget {

struct QdSpec {
    TorusLattice lattice;
    GroupTable G;
    double J = 0.09, U = 1.0, t = 0.375;

    void check() const {
        G.validate();
        if (lattice.kind != TorusLattice::Kind::square)
            throw std::invalid_argument("quantum double: square lattice only");
        if (U <= 0 || t < 0 || J <= 0)
            throw std::invalid_argument("quantum double: bad couplings");
    }
};

// one left/right multiplication acting on a qudit slot
struct QdAct {
    int q;
    bool plus; // true: z -> g z (L+), false: z -> z g^{-1} (L-)
};

struct QdTerms {
    QdSpec spec;
    int n_qudits = 0;
    // per star, per corner m: the two slot actions of A^g_s(m)
    std::vector<std::array<std::array<QdAct, 2>, 4>> sched;
    // B_p: projector onto z_top z_right^{-1} z_bottom^{-1} z_left = e
    struct Plaq {
        int top, right, bottom, left;
    };
    std::vector<Plaq> plaquettes;
    // C_e: projector onto equal slot values
    std::vector<std::array<int, 2>> edge_slots;
    std::vector<ShieldPair> shield_pairs; // one per edge, star-pair across it

    int n_stars() const { return (int)sched.size(); }
};

inline QdTerms build_quantum_double(QdSpec spec) {
    spec.check();
    QdTerms T;
    T.spec = std::move(spec);
    const auto& L = T.spec.lattice;
    T.n_qudits = L.n_qubits();
    T.sched.resize(L.n_stars());
    for (int j = 0; j < L.Ly; ++j)
        for (int i = 0; i < L.Lx; ++i) {
            int s = L.star(i, j);
            // corner species mirror the pinned toric schedule; the L+/L-
            // assignment makes neighboring stars act by commuting left/right
            // multiplications on shared slots
            T.sched[s][0] = {QdAct{L.q_hu(i - 1, j), false},
                             QdAct{L.q_vl(i, j), true}};
            T.sched[s][1] = {QdAct{L.q_hu(i, j), true},
                             QdAct{L.q_vr(i, j), true}};
            T.sched[s][2] = {QdAct{L.q_hd(i, j), true},
                             QdAct{L.q_vr(i, j - 1), false}};
            T.sched[s][3] = {QdAct{L.q_hd(i - 1, j), false},
                             QdAct{L.q_vl(i, j - 1), false}};
            T.plaquettes.push_back({L.q_hd(i, j + 1), L.q_vl(i + 1, j),
                                    L.q_hu(i, j), L.q_vr(i, j)});
            T.edge_slots.push_back({L.q_hu(i, j), L.q_hd(i, j)});
            T.edge_slots.push_back({L.q_vl(i, j), L.q_vr(i, j)});
            T.shield_pairs.push_back({s, L.star(i + 1, j), true});
            T.shield_pairs.push_back({s, L.star(i, j + 1), false});
        }
    return T;
}

// configuration basis state: per-star gadget (m, g) plus group-valued qudits
struct QdState {
    std::vector<uint8_t> m, g, z;
    bool operator==(const QdState& o) const = default;
};

struct QdStateHash {
    size_t operator()(const QdState& s) const {
        size_t h = 1469598103934665603ull;
        auto mix = [&h](const std::vector<uint8_t>& v) {
            for (uint8_t b : v) {
                h ^= b;
                h *= 1099511628211ull;
            }
            h ^= 0xff;
            h *= 1099511628211ull;
        };
        mix(s.m);
        mix(s.g);
        mix(s.z);
        return h;
    }
};

// apply A^g_s(m) (or its inverse) to a qudit configuration
inline void qd_apply_flip(const QdTerms& T, int s, int m, int gelt,
                          bool inverse, std::vector<uint8_t>& z) {
    const GroupTable& G = T.spec.G;
    int gg = inverse ? G.inv[gelt] : gelt;
    for (const auto& a : T.sched[s][m])
        z[a.q] = a.plus ? (uint8_t)G.mul(gg, z[a.q])
                        : (uint8_t)G.mul(z[a.q], G.inv[gg]);
}

// full star operator A^g_s = A^g_s(3) ... A^g_s(0) (slots are disjoint)
inline void qd_apply_star(const QdTerms& T, int s, int gelt,
                          std::vector<uint8_t>& z) {
    for (int m = 0; m < 4; ++m) qd_apply_flip(T, s, m, gelt, false, z);
}

inline bool qd_bp_value(const QdTerms& T, const QdTerms::Plaq& p,
                        const std::vector<uint8_t>& z) {
    const GroupTable& G = T.spec.G;
    int w = G.mul(z[p.top], G.inv[z[p.right]]);
    w = G.mul(w, G.inv[z[p.bottom]]);
    return G.mul(w, z[p.left]) == 0;
}

inline bool qd_ce_value(const QdTerms& T, int e, const std::vector<uint8_t>& z) {
    return z[T.edge_slots[e][0]] == z[T.edge_slots[e][1]];
}

// shield indicator for one star pair: J/4 (1+T)(1+T') + delta J/4 (1-T)(1-T')
// evaluated as a 0/1 projector value; horizontal delta = [g = g'],
// vertical delta = [g g' = e]
inline int qd_shield_value(const QdTerms& T, const ShieldPair& p,
                           const QdState& st) {
    const GroupTable& G = T.spec.G;
    double a = p.horizontal ? T_left(st.m[p.s]) : T_down(st.m[p.s]);
    double b = p.horizontal ? T_right(st.m[p.s2]) : T_up(st.m[p.s2]);
    if (a > 0 && b > 0) return 1;
    if (a < 0 && b < 0)
        return p.horizontal ? (st.g[p.s] == st.g[p.s2])
                            : (G.mul(st.g[p.s], st.g[p.s2]) == 0);
    return 0;
}

// lambda-label: per star (lam in 0..3, species g, accumulated flip f)
inline void qd_wrap_label(const GroupTable& G, uint8_t& f, int g, bool raise) {
    f = raise ? (uint8_t)G.mul(g, f) : (uint8_t)G.mul(G.inv[g], f);
}

struct QdBasis {
    int N = 0;
    std::vector<QdState> states;
    std::unordered_map<QdState, int, QdStateHash> index;
    // distinct accumulated-flip vectors per state (the discovered quotient)
    std::vector<std::vector<std::vector<uint8_t>>> flabels;
    std::string quotient_note;

    int find(const QdState& s) const {
        auto it = index.find(s);
        return it == index.end() ? -1 : it->second;
    }
};

// BFS closure of M(d): raise/lower every star with its current species
// (lowering applies the inverse flip), species change at m = 0 (Q_s moves).
// Flip accumulators f_s ride along; duplicate states with distinct f-vectors
// reveal the global identification, which is reported rather than assumed.
inline QdBasis qd_enumerate(const QdTerms& T, const std::vector<uint8_t>& d,
                            size_t budget = default_state_budget()) {
    const GroupTable& G = T.spec.G;
    if ((int)d.size() != T.n_qudits)
        throw std::invalid_argument("qd_enumerate: bad config size");
    int N = T.n_stars();
    QdBasis B;
    B.N = N;
    struct Node {
        QdState st;
        std::vector<uint8_t> f;
        bool operator==(const Node& o) const = default;
    };
    struct NodeHash {
        size_t operator()(const Node& n) const {
            size_t h = QdStateHash{}(n.st);
            for (uint8_t b : n.f) h = (h ^ b) * 1099511628211ull;
            return h;
        }
    };
    Node start;
    start.st.m.assign(N, 0);
    start.st.g.assign(N, (uint8_t)G.gens[0]);
    start.st.z = d;
    start.f.assign(N, 0);
    std::unordered_set<Node, NodeHash> seen{start};
    std::deque<Node> queue{start};
    auto record = [&](const QdState& st, const std::vector<uint8_t>& f) {
        int i = B.find(st);
        if (i < 0) {
            i = (int)B.states.size();
            B.states.push_back(st);
            B.index.emplace(st, i);
            B.flabels.emplace_back();
        }
        auto& fl = B.flabels[i];
        if (std::find(fl.begin(), fl.end(), f) == fl.end()) fl.push_back(f);
    };
    record(start.st, start.f);
    while (!queue.empty()) {
        Node cur = queue.front();
        queue.pop_front();
        std::vector<Node> next;
        for (int s = 0; s < N; ++s) {
            int m = cur.st.m[s], g = cur.st.g[s];
            Node up = cur;
            up.st.m[s] = (uint8_t)((m + 1) & 3);
            qd_apply_flip(T, s, m, g, false, up.st.z);
            if (m == 3) qd_wrap_label(G, up.f[s], g, true);
            next.push_back(std::move(up));
            Node dn = cur;
            dn.st.m[s] = (uint8_t)((m + 3) & 3);
            qd_apply_flip(T, s, (m + 3) & 3, g, true, dn.st.z);
            if (m == 0) qd_wrap_label(G, dn.f[s], g, false);
            next.push_back(std::move(dn));
            if (m == 0)
                for (int g2 : G.gens)
                    if (g2 != g) {
                        Node q = cur;
                        q.st.g[s] = (uint8_t)g2;
                        next.push_back(std::move(q));
                    }
        }
        for (auto& n : next)
            if (seen.insert(n).second) {
                if (seen.size() > budget)
                    throw std::runtime_error("qd_enumerate: state budget "
                                             "exceeded (set GADGET_BUDGET)");
                record(n.st, n.f);
                queue.push_back(std::move(n));
            }
    }
    // summarize the discovered identification structure
    std::set<size_t> mults;
    for (auto& fl : B.flabels) mults.insert(fl.size());
    std::ostringstream os;
    os << "states=" << B.states.size() << " f-label multiplicities={";
    for (size_t m : mults) os << m << ",";
    os << "}";
    if (mults == std::set<size_t>{1})
        os << " (no quotient: labels and states coincide)";
    else {
        // check whether the identification is a simultaneous left
        // multiplication of all f_s by a fixed element
        std::set<std::vector<uint8_t>> diffs;
        for (size_t i = 0; i < B.states.size(); ++i)
            for (size_t a = 1; a < B.flabels[i].size(); ++a) {
                std::vector<uint8_t> dvec(N);
                for (int s = 0; s < N; ++s)
                    dvec[s] = (uint8_t)G.mul(B.flabels[i][a][s],
                                             G.inv[B.flabels[i][0][s]]);
                diffs.insert(dvec);
            }
        os << " identification shifts={";
        for (auto& dv : diffs) {
            for (uint8_t x : dv) os << (int)x;
            os << ",";
        }
        os << "}";
    }
    B.quotient_note = os.str();
    return B;
}

inline double qd_diag_energy(const QdTerms& T, const QdState& st) {
    const QdSpec& sp = T.spec;
    double e = 0;
    for (int s = 0; s < T.n_stars(); ++s)
        if (st.m[s] == 0) e += -sp.U - sp.t; // -U projector + Q_s diagonal
    for (const auto& p : T.plaquettes)
        if (qd_bp_value(T, p, st.z)) e -= sp.J;
    for (int e2 = 0; e2 < (int)T.edge_slots.size(); ++e2)
        if (qd_ce_value(T, e2, st.z)) e -= sp.J;
    for (const auto& pr : T.shield_pairs) e += sp.J * qd_shield_value(T, pr, st);
    return e;
}

inline CsrMatrix qd_assemble(const QdTerms& T, const QdBasis& B) {
    const GroupTable& G = T.spec.G;
    std::vector<std::tuple<int, int, double>> trip;
    for (int i = 0; i < (int)B.states.size(); ++i) {
        const QdState& st = B.states[i];
        trip.emplace_back(i, i, qd_diag_energy(T, st));
        for (int s = 0; s < B.N; ++s) {
            int m = st.m[s], g = st.g[s];
            for (int dir : {+1, -1}) {
                QdState nxt = st;
                nxt.m[s] = (uint8_t)((m + dir + 4) & 3);
                qd_apply_flip(T, s, dir > 0 ? m : (m + 3) & 3, g, dir < 0,
                              nxt.z);
                int j = B.find(nxt);
                if (j < 0)
                    throw std::runtime_error("qd_assemble: hop left the basis "
                                             "(invariance bug)");
                trip.emplace_back(j, i, -T.spec.t);
            }
            if (m == 0)
                for (int g2 : G.gens)
                    if (g2 != g) {
                        QdState nxt = st;
                        nxt.g[s] = (uint8_t)g2;
                        int j = B.find(nxt);
                        if (j < 0)
                            throw std::runtime_error(
                                "qd_assemble: Q move left the basis");
                        trip.emplace_back(j, i, -T.spec.t);
                    }
        }
    }
    return CsrMatrix::from_triplets((int)B.states.size(), std::move(trip));
}

struct QdShieldReport {
    size_t checks = 0, mismatches = 0;
};

// audit C_e against the shield projector for every edge and basis state
inline QdShieldReport qd_verify_shield(const QdTerms& T, const QdBasis& B) {
    const auto& L = T.spec.lattice;
    QdShieldReport r;
    for (const auto& st : B.states)
        for (int j = 0; j < L.Ly; ++j)
            for (int i = 0; i < L.Lx; ++i) {
                ShieldPair hp{L.star(i, j), L.star(i + 1, j), true};
                ShieldPair vp{L.star(i, j), L.star(i, j + 1), false};
                int ce_h = qd_ce_value(T, L.hedge(i, j), st.z);
                int ce_v = qd_ce_value(T, L.vedge(i, j), st.z);
                r.checks += 2;
                if (ce_h != qd_shield_value(T, hp, st)) ++r.mismatches;
                if (ce_v != qd_shield_value(T, vp, st)) ++r.mismatches;
            }
    return r;
}

// -------------------------------------------------------------------------
// lambda-level one-body matrix: basis |lam, g, f>, lam in 0..3, g in gens,
// f in G; raising past lam = 3 wraps through the redundancy
// |lam+4, g, f> = |lam, g, g f>.
inline int qd_label_index(const GroupTable& G, int lam, int gi, int f) {
    return (lam * (int)G.gens.size() + gi) * G.order + f;
}

inline int qd_label_dim(const GroupTable& G) {
    return 4 * (int)G.gens.size() * G.order;
}

inline Eigen::MatrixXd qd_hs_matrix(const GroupTable& G, double U, double t) {
    int ng = (int)G.gens.size();
    int dim = qd_label_dim(G);
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    for (int gi = 0; gi < ng; ++gi)
        for (int f = 0; f < G.order; ++f) {
            h(qd_label_index(G, 0, gi, f), qd_label_index(G, 0, gi, f)) -= U;
            // Q_s mixes the species at lam = 0 (diagonal included)
            for (int gj = 0; gj < ng; ++gj)
                h(qd_label_index(G, 0, gi, f), qd_label_index(G, 0, gj, f)) -= t;
            for (int lam = 0; lam < 4; ++lam) {
                int from = qd_label_index(G, lam, gi, f);
                int to = lam < 3
                             ? qd_label_index(G, lam + 1, gi, f)
                             : qd_label_index(G, 0, gi, G.mul(G.gens[gi], f));
                h(to, from) -= t;
                h(from, to) -= t;
            }
        }
    return h;
}

// conjugated gadget Hamiltonian (qudit part factored out): basis |m, g>
inline Eigen::MatrixXd qd_hs_tilde(const GroupTable& G, double U, double t) {
    int ng = (int)G.gens.size();
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(4 * ng, 4 * ng);
    auto ix = [ng](int m, int gi) { return m * ng + gi; };
    for (int gi = 0; gi < ng; ++gi) {
        h(ix(0, gi), ix(0, gi)) -= U;
        for (int gj = 0; gj < ng; ++gj) h(ix(0, gi), ix(0, gj)) -= t;
        for (int m = 0; m < 4; ++m) {
            h(ix((m + 1) & 3, gi), ix(m, gi)) -= t;
            h(ix(m, gi), ix((m + 1) & 3, gi)) -= t;
        }
    }
    return h;
}

inline int qd_gen_index(const GroupTable& G, int g) {
    for (int gi = 0; gi < (int)G.gens.size(); ++gi)
        if (G.gens[gi] == g) return gi;
    throw std::runtime_error("qd: species is not a generator");
}

// |psi_GS> = prod_s alpha0 in label coordinates, summed over the discovered
// f-label representatives of each state
inline Eigen::VectorXd qd_ground_state(const QdTerms& T, const QdBasis& B) {
    const GroupTable& G = T.spec.G;
    auto sp = eigensolve_dense(qd_hs_matrix(G, T.spec.U, T.spec.t), 1);
    Eigen::VectorXd a0 = sp.eigenvectors.col(0);
    int imax;
    a0.cwiseAbs().maxCoeff(&imax);
    if (a0(imax) < 0) a0 = -a0;
    Eigen::VectorXd v(B.states.size());
    for (size_t i = 0; i < B.states.size(); ++i) {
        double amp = 0;
        for (const auto& f : B.flabels[i]) {
            double a = 1;
            for (int s = 0; s < B.N; ++s)
                a *= a0(qd_label_index(G, B.states[i].m[s],
                                       qd_gen_index(G, B.states[i].g[s]),
                                       f[s]));
            amp += a;
        }
        v(i) = amp;
    }
    double n = v.norm();
    if (n < 1e-14)
        throw std::runtime_error("qd_ground_state: vanishing norm");
    return v / n;
}

// orbit of a qudit configuration under all full star operators A^g_s
inline std::vector<std::vector<uint8_t>> qd_star_orbit(
    const QdTerms& T, const std::vector<uint8_t>& d) {
    std::set<std::vector<uint8_t>> seen{d};
    std::deque<std::vector<uint8_t>> queue{d};
    while (!queue.empty()) {
        auto z = queue.front();
        queue.pop_front();
        for (int s = 0; s < T.n_stars(); ++s)
            for (int g : T.spec.G.gens) {
                auto z2 = z;
                qd_apply_star(T, s, g, z2);
                if (seen.insert(z2).second) queue.push_back(z2);
            }
    }
    return {seen.begin(), seen.end()};
}

// fidelity |<alpha~0^N x psi_QD(0)| U |psi>| where U_s replaces the prefix
// flips prod_{m'<m} A^g_s(m')^dagger; different stars' prefixes commute
// because shared slots receive one left and one right multiplication.
inline double qd_connector_fidelity(const QdTerms& T, const QdBasis& B,
                                    const Eigen::VectorXd& psi,
                                    const std::vector<uint8_t>& d) {
    const GroupTable& G = T.spec.G;
    auto sp = eigensolve_dense(qd_hs_tilde(G, T.spec.U, T.spec.t), 1);
    Eigen::VectorXd at = sp.eigenvectors.col(0);
    int imax;
    at.cwiseAbs().maxCoeff(&imax);
    if (at(imax) < 0) at = -at;
    auto orbit = qd_star_orbit(T, d);
    std::set<std::vector<uint8_t>> in_orbit(orbit.begin(), orbit.end());
    double w = 1.0 / std::sqrt((double)orbit.size());
    int ng = (int)G.gens.size();
    double overlap = 0;
    for (size_t i = 0; i < B.states.size(); ++i) {
        const QdState& st = B.states[i];
        std::vector<uint8_t> z = st.z;
        for (int s = 0; s < B.N; ++s)
            for (int mp = 0; mp < st.m[s]; ++mp)
                qd_apply_flip(T, s, mp, st.g[s], true, z);
        if (!in_orbit.count(z)) continue;
        double amp = w;
        for (int s = 0; s < B.N; ++s)
            amp *= at(st.m[s] * ng + qd_gen_index(G, st.g[s]));
        overlap += amp * psi(i);
    }
    return std::abs(overlap);
}

// -------------------------------------------------------------------------
// one-star open fixture: a single gadget with its 8 dangling qudits, no
// B_p/C_e. Test scaffolding: labels and configurations must biject.
struct QdOneStar {
    GroupTable G;
    double U, t;
    struct St {
        uint8_t m, g;
        std::array<uint8_t, 8> z;
        auto operator<=>(const St&) const = default;
    };
    std::vector<St> states;
    std::map<St, int> index;
    std::vector<std::array<int, 3>> labels; // (lam, gen index, f) per state
};

inline QdOneStar qd_one_star_enumerate(const GroupTable& G, double U = 1.0,
                                       double t = 0.375) {
    // corner schedule mirrors one lattice star: (L-, L+), (L+, L+),
    // (L+, L-), (L-, L-) on 8 distinct slots
    static const std::array<std::array<std::pair<int, bool>, 2>, 4> sched{{
        {{{0, false}, {1, true}}},
        {{{2, true}, {3, true}}},
        {{{4, true}, {5, false}}},
        {{{6, false}, {7, false}}},
    }};
    QdOneStar F;
    F.G = G;
    F.U = U;
    F.t = t;
    auto flip = [&](std::array<uint8_t, 8> z, int m, int g, bool invflag) {
        int gg = invflag ? G.inv[g] : g;
        for (auto [q, plus] : sched[m])
            z[q] = plus ? (uint8_t)G.mul(gg, z[q])
                        : (uint8_t)G.mul(z[q], G.inv[gg]);
        return z;
    };
    struct Node {
        QdOneStar::St st;
        std::array<int, 3> lab;
    };
    Node start{{0, (uint8_t)G.gens[0], {}}, {0, 0, 0}};
    std::deque<Node> queue{start};
    auto record = [&](const Node& n) {
        if (F.index.count(n.st)) {
            if (F.labels[F.index[n.st]] != n.lab)
                throw std::runtime_error(
                    "one-star fixture: label/state bijection broken");
            return false;
        }
        F.index[n.st] = (int)F.states.size();
        F.states.push_back(n.st);
        F.labels.push_back(n.lab);
        return true;
    };
    record(start);
    while (!queue.empty()) {
        Node cur = queue.front();
        queue.pop_front();
        int m = cur.st.m, g = cur.st.g;
        std::vector<Node> next;
        Node up = cur;
        up.st.m = (uint8_t)((m + 1) & 3);
        up.st.z = flip(cur.st.z, m, g, false);
        up.lab[0] = up.st.m;
        if (m == 3) up.lab[2] = G.mul(g, up.lab[2]);
        next.push_back(up);
        Node dn = cur;
        dn.st.m = (uint8_t)((m + 3) & 3);
        dn.st.z = flip(cur.st.z, (m + 3) & 3, g, true);
        dn.lab[0] = dn.st.m;
        if (m == 0) dn.lab[2] = G.mul(G.inv[g], dn.lab[2]);
        next.push_back(dn);
        if (m == 0)
            for (int g2 : G.gens)
                if (g2 != g) {
                    Node q = cur;
                    q.st.g = (uint8_t)g2;
                    q.lab[1] = qd_gen_index(G, g2);
                    next.push_back(q);
                }
        for (auto& n : next)
            if (record(n)) queue.push_back(n);
    }
    return F;
}

// direct term application on the one-star configuration basis
inline Eigen::MatrixXd qd_one_star_direct(const QdOneStar& F) {
    const GroupTable& G = F.G;
    int dim = (int)F.states.size();
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dim, dim);
    static const std::array<std::array<std::pair<int, bool>, 2>, 4> sched{{
        {{{0, false}, {1, true}}},
        {{{2, true}, {3, true}}},
        {{{4, true}, {5, false}}},
        {{{6, false}, {7, false}}},
    }};
    auto flip = [&](std::array<uint8_t, 8> z, int m, int g, bool invflag) {
        int gg = invflag ? G.inv[g] : g;
        for (auto [q, plus] : sched[m])
            z[q] = plus ? (uint8_t)G.mul(gg, z[q])
                        : (uint8_t)G.mul(z[q], G.inv[gg]);
        return z;
    };
    for (int i = 0; i < dim; ++i) {
        const auto& st = F.states[i];
        if (st.m == 0) H(i, i) += -F.U - F.t;
        QdOneStar::St up = st;
        up.m = (uint8_t)((st.m + 1) & 3);
        up.z = flip(st.z, st.m, st.g, false);
        H(F.index.at(up), i) -= F.t;
        QdOneStar::St dn = st;
        dn.m = (uint8_t)((st.m + 3) & 3);
        dn.z = flip(st.z, (st.m + 3) & 3, st.g, true);
        H(F.index.at(dn), i) -= F.t;
        if (st.m == 0)
            for (int g2 : G.gens)
                if (g2 != st.g) {
                    QdOneStar::St q = st;
                    q.g = (uint8_t)g2;
                    H(F.index.at(q), i) -= F.t;
                }
    }
    return H;
}

// -------------------------------------------------------------------------
// two-star patch fixtures (one shared edge, dangling remainder): the
// smallest setting in which the shield/C_e cancellation can be audited.
struct QdPatchReport {
    size_t n_states = 0;
    size_t mismatches = 0;
    // states that share the full gadget label (m, g at both stars) yet
    // disagree on C_e: witnesses that no gadget-diagonal two-body term can
    // reproduce the edge term
    size_t label_collisions = 0;
};

inline QdPatchReport qd_patch_shield(const GroupTable& G, bool horizontal,
                                     size_t budget = default_state_budget()) {
    // qudits: 0, 1 = shared-edge slots; 2..13 dangling. Schedules lift the
    // lattice corner assignment to the patch (star A left/lower, B right/upper).
    using Sched = std::array<std::array<std::pair<int, bool>, 2>, 4>;
    Sched A, Bs;
    if (horizontal) {
        A = {{{{{2, false}, {3, true}}},
              {{{0, true}, {4, true}}},
              {{{1, true}, {5, false}}},
              {{{6, false}, {7, false}}}}};
        Bs = {{{{{0, false}, {8, true}}},
               {{{9, true}, {10, true}}},
               {{{11, true}, {12, false}}},
               {{{1, false}, {13, false}}}}};
    } else {
        A = {{{{{2, false}, {0, true}}},
              {{{3, true}, {1, true}}},
              {{{4, true}, {5, false}}},
              {{{6, false}, {7, false}}}}};
        Bs = {{{{{8, false}, {9, true}}},
               {{{10, true}, {11, true}}},
               {{{12, true}, {1, false}}},
               {{{13, false}, {0, false}}}}};
    }
    std::array<Sched, 2> scheds{A, Bs};
    auto flip = [&](std::array<uint8_t, 14> z, int star, int m, int g,
                    bool invflag) {
        int gg = invflag ? G.inv[g] : g;
        for (auto [q, plus] : scheds[star][m])
            z[q] = plus ? (uint8_t)G.mul(gg, z[q])
                        : (uint8_t)G.mul(z[q], G.inv[gg]);
        return z;
    };
    struct St {
        uint8_t mA, gA, mB, gB;
        std::array<uint8_t, 14> z;
        auto operator<=>(const St&) const = default;
    };
    std::set<St> seen;
    std::deque<St> queue;
    for (int ga : G.gens)
        for (int gb : G.gens) {
            St s{0, (uint8_t)ga, 0, (uint8_t)gb, {}};
            seen.insert(s);
            queue.push_back(s);
        }
    while (!queue.empty()) {
        St cur = queue.front();
        queue.pop_front();
        std::vector<St> next;
        St up = cur;
        up.mA = (uint8_t)((cur.mA + 1) & 3);
        up.z = flip(cur.z, 0, cur.mA, cur.gA, false);
        next.push_back(up);
        St dn = cur;
        dn.mA = (uint8_t)((cur.mA + 3) & 3);
        dn.z = flip(cur.z, 0, (cur.mA + 3) & 3, cur.gA, true);
        next.push_back(dn);
        St up2 = cur;
        up2.mB = (uint8_t)((cur.mB + 1) & 3);
        up2.z = flip(cur.z, 1, cur.mB, cur.gB, false);
        next.push_back(up2);
        St dn2 = cur;
        dn2.mB = (uint8_t)((cur.mB + 3) & 3);
        dn2.z = flip(cur.z, 1, (cur.mB + 3) & 3, cur.gB, true);
        next.push_back(dn2);
        if (cur.mA == 0)
            for (int g2 : G.gens)
                if (g2 != cur.gA) {
                    St q = cur;
                    q.gA = (uint8_t)g2;
                    next.push_back(q);
                }
        if (cur.mB == 0)
            for (int g2 : G.gens)
                if (g2 != cur.gB) {
                    St q = cur;
                    q.gB = (uint8_t)g2;
                    next.push_back(q);
                }
        for (auto& n : next)
            if (seen.insert(n).second) {
                if (seen.size() > budget)
                    throw std::runtime_error("qd_patch_shield: budget exceeded");
                queue.push_back(n);
            }
    }
    QdPatchReport r;
    r.n_states = seen.size();
    std::map<std::array<uint8_t, 4>, std::set<int>> by_label;
    for (const auto& st : seen) {
        int ce = st.z[0] == st.z[1];
        double a = horizontal ? T_left(st.mA) : T_down(st.mA);
        double b = horizontal ? T_right(st.mB) : T_up(st.mB);
        int sh;
        if (a > 0 && b > 0)
            sh = 1;
        else if (a < 0 && b < 0)
            sh = horizontal ? (st.gA == st.gB) : (G.mul(st.gA, st.gB) == 0);
        else
            sh = 0;
        if (ce != sh) ++r.mismatches;
        by_label[{st.mA, st.gA, st.mB, st.gB}].insert(ce);
    }
    for (const auto& [lab, ces] : by_label)
        if (ces.size() > 1) ++r.label_collisions;
    return r;
}

} // namespace gadget
