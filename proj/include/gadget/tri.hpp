#pragma once

// Triangular-lattice variant: six-corner gadgets with m in {0,1,2}, a
// conserved per-star particle number, and a 24-step hopping cycle whose
// twelfth power is the star operator.

#include <array>
#include <cstdint>
#include <deque>
#include <sstream>
#include <unordered_map>
#include <vector>

#include "gadget/lattice.hpp"
#include "gadget/sparse.hpp"
#include "gadget/spectral.hpp"
#include "gadget/subspace.hpp"

namespace gadget {

struct TriSpec {
    TorusLattice lattice;
    double J = 0.09, U = 1.0, t = 0.375, R = 1.0;

    void check() const {
        if (lattice.kind != TorusLattice::Kind::triangular)
            throw std::invalid_argument("triangular model: wrong lattice kind");
        if (U <= 0 || t < 0 || J <= 0 || R < 0)
            throw std::invalid_argument("triangular model: bad couplings");
        // packed-word state representation: 12 corner bits and 12 qubit
        // bits per star must fit in 64-bit words
        if (lattice.n_stars() > 5)
            throw std::invalid_argument("triangular model: torus too large "
                                        "for exact treatment");
    }
};

struct TriTerms {
    TriSpec spec;
    // per star, per corner k: the two qubit slots of A_s(k)
    std::vector<std::array<std::array<int, 2>, 6>> ask;
    // per edge (d,i,j): the two slots and the star pair (s, s + u_d)
    struct Edge {
        int q0, q1, s_minus, s_plus, d;
    };
    std::vector<Edge> edges;
    std::vector<std::array<int, 3>> triangles;

    int n_stars() const { return (int)ask.size(); }
    int n_qubits() const { return spec.lattice.n_qubits(); }
};

inline TriTerms build_triangular(TriSpec spec) {
    spec.check();
    TriTerms T;
    T.spec = std::move(spec);
    const auto& L = T.spec.lattice;
    static const int u[3][2] = {{1, 0}, {0, 1}, {-1, 1}};
    T.ask.resize(L.n_stars());
    for (int j = 0; j < L.Ly; ++j)
        for (int i = 0; i < L.Lx; ++i) {
            int s = L.star(i, j);
            T.ask[s][0] = {L.tqub(0, i - 1, j, 0), L.tqub(2, i, j, 0)};
            T.ask[s][1] = {L.tqub(1, i, j, 1), L.tqub(2, i, j, 1)};
            T.ask[s][2] = {L.tqub(0, i, j, 0), L.tqub(1, i, j, 0)};
            T.ask[s][3] = {L.tqub(0, i, j, 1), L.tqub(2, i + 1, j - 1, 1)};
            T.ask[s][4] = {L.tqub(1, i, j - 1, 0), L.tqub(2, i + 1, j - 1, 0)};
            T.ask[s][5] = {L.tqub(1, i, j - 1, 1), L.tqub(0, i - 1, j, 1)};
            for (int d = 0; d < 3; ++d)
                T.edges.push_back({L.tqub(d, i, j, 0), L.tqub(d, i, j, 1), s,
                                   L.star(i + u[d][0], j + u[d][1]), d});
            auto up = L.tri_up(i, j);
            auto dn = L.tri_dn(i, j);
            T.triangles.push_back({up[0], up[1], up[2]});
            T.triangles.push_back({dn[0], dn[1], dn[2]});
        }
    return T;
}

// packed state: 2 bits per corner (24 corners on 2x2), one bit per qubit
struct TriState {
    uint64_t g = 0, q = 0;
    auto operator<=>(const TriState&) const = default;
};
struct TriStateHash {
    size_t operator()(const TriState& s) const {
        uint64_t h = s.g * 0x9e3779b97f4a7c15ull;
        h ^= s.q + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        return (size_t)h;
    }
};

inline int tri_corner(const TriState& st, int s, int k) {
    return (int)((st.g >> (2 * (6 * s + k))) & 3);
}
inline void tri_set_corner(TriState& st, int s, int k, int v) {
    int sh = 2 * (6 * s + k);
    st.g = (st.g & ~(3ull << sh)) | ((uint64_t)v << sh);
}

inline TriState tri_rest_state(const TriTerms& T, uint64_t qmask = 0) {
    TriState st;
    st.q = qmask;
    for (int s = 0; s < T.n_stars(); ++s) tri_set_corner(st, s, 0, 1);
    return st;
}

inline int tri_ns(const TriState& st, int s) {
    int n = 0;
    for (int k = 0; k < 6; ++k)
        if (tri_corner(st, s, k) != 0) ++n;
    return n;
}

// the unique raise (dir=+1) or lower (dir=-1) of star s within n_s = 1;
// returns false if the star is not in the single-particle sector
inline bool tri_hop(const TriTerms& T, TriState& st, int s, int dir) {
    for (int k = 0; k < 6; ++k) {
        int m = tri_corner(st, s, k);
        if (m == 0) continue;
        if (dir > 0) {
            if (m == 1) { // type A: 1 -> 2, apply the corner flip
                tri_set_corner(st, s, k, 2);
                st.q ^= (1ull << T.ask[s][k][0]) | (1ull << T.ask[s][k][1]);
            } else { // type B: 2 -> 0, next corner 0 -> 1
                tri_set_corner(st, s, k, 0);
                tri_set_corner(st, s, (k + 1) % 6, 1);
            }
        } else {
            if (m == 2) { // reverse type A
                tri_set_corner(st, s, k, 1);
                st.q ^= (1ull << T.ask[s][k][0]) | (1ull << T.ask[s][k][1]);
            } else { // reverse type B
                tri_set_corner(st, s, k, 0);
                tri_set_corner(st, s, (k + 5) % 6, 2);
            }
        }
        return true;
    }
    return false;
}

// Appendix shield factors, diagonal in the corner occupations
inline int tri_T_minus(const TriState& st, int s, int d) {
    switch (d) {
        case 0: return 1 - 2 * ((tri_corner(st, s, 2) == 2) + (tri_corner(st, s, 3) == 1));
        case 1: return 1 - 2 * ((tri_corner(st, s, 1) == 2) + (tri_corner(st, s, 2) == 1));
        default: return 1 - 2 * ((tri_corner(st, s, 0) == 2) + (tri_corner(st, s, 1) == 1));
    }
}
inline int tri_T_plus(const TriState& st, int s, int d) {
    switch (d) {
        case 0: return 2 * ((tri_corner(st, s, 0) == 1) + (tri_corner(st, s, 5) == 2)) - 1;
        case 1: return 1 - 2 * ((tri_corner(st, s, 4) == 2) + (tri_corner(st, s, 5) == 1));
        default: return 1 - 2 * ((tri_corner(st, s, 3) == 2) + (tri_corner(st, s, 4) == 1));
    }
}

struct TriBasis {
    int N = 0;
    std::vector<TriState> states;
    std::unordered_map<TriState, int, TriStateHash> index;
    std::vector<std::vector<uint8_t>> lam; // canonical label, lam_s in 0..23
    bool shift_identified = false;

    int find(const TriState& s) const {
        auto it = index.find(s);
        return it == index.end() ? -1 : it->second;
    }
};

namespace detail {
inline std::vector<uint8_t> tri_shift12(const std::vector<uint8_t>& l) {
    std::vector<uint8_t> r(l.size());
    for (size_t i = 0; i < l.size(); ++i) r[i] = (uint8_t)((l[i] + 12) % 24);
    return r;
}
inline std::vector<uint8_t> tri_lexmin(const std::vector<uint8_t>& l) {
    auto s = tri_shift12(l);
    return s < l ? s : l;
}
} // namespace detail

inline TriBasis tri_enumerate(const TriTerms& T, uint64_t qmask = 0,
                              size_t budget = default_state_budget()) {
    int N = T.n_stars();
    TriBasis B;
    B.N = N;
    TriState start = tri_rest_state(T, qmask);
    B.states.push_back(start);
    B.index.emplace(start, 0);
    B.lam.push_back(std::vector<uint8_t>(N, 0));
    std::deque<int> queue{0};
    while (!queue.empty()) {
        int i = queue.front();
        queue.pop_front();
        TriState cur = B.states[i];
        std::vector<uint8_t> lam = B.lam[i];
        for (int s = 0; s < N; ++s)
            for (int dir : {+1, -1}) {
                TriState nxt = cur;
                if (!tri_hop(T, nxt, s, dir))
                    throw std::runtime_error("tri_enumerate: left n_s = 1");
                auto l2 = lam;
                l2[s] = (uint8_t)((lam[s] + dir + 24) % 24);
                int j = B.find(nxt);
                if (j < 0) {
                    if (B.states.size() >= budget)
                        throw std::runtime_error(
                            "tri_enumerate: state budget exceeded "
                            "(set GADGET_BUDGET)");
                    j = (int)B.states.size();
                    B.states.push_back(nxt);
                    B.index.emplace(nxt, j);
                    B.lam.push_back(l2);
                    queue.push_back(j);
                } else if (B.lam[j] != l2) {
                    if (B.lam[j] != detail::tri_shift12(l2))
                        throw std::runtime_error(
                            "tri_enumerate: inconsistent label revisit");
                    B.shift_identified = true;
                }
            }
    }
    if (B.shift_identified)
        for (auto& l : B.lam) l = detail::tri_lexmin(l);
    return B;
}

inline double tri_diag_energy(const TriTerms& T, const TriState& st) {
    const TriSpec& sp = T.spec;
    double e = 0;
    for (int s = 0; s < T.n_stars(); ++s) {
        if (tri_corner(st, s, 1) == 1) e -= sp.U;
        int dn = 1 - tri_ns(st, s);
        e += sp.R * dn * dn;
    }
    for (const auto& tr : T.triangles) {
        int flips = ((st.q >> tr[0]) & 1) + ((st.q >> tr[1]) & 1) +
                    ((st.q >> tr[2]) & 1);
        e -= sp.J * (flips % 2 ? -1 : 1);
    }
    for (const auto& ed : T.edges) {
        int ce = (((st.q >> ed.q0) & 1) ^ ((st.q >> ed.q1) & 1)) ? -1 : 1;
        e -= sp.J * ce;
        e += sp.J * tri_T_minus(st, ed.s_minus, ed.d) *
             tri_T_plus(st, ed.s_plus, ed.d);
    }
    return e;
}

struct TriShieldReport {
    size_t checks = 0, mismatches = 0;
};

inline TriShieldReport tri_verify_shield(const TriTerms& T, const TriBasis& B) {
    TriShieldReport r;
    for (const auto& st : B.states)
        for (const auto& ed : T.edges) {
            int ce = (((st.q >> ed.q0) & 1) ^ ((st.q >> ed.q1) & 1)) ? -1 : 1;
            int sh = tri_T_minus(st, ed.s_minus, ed.d) *
                     tri_T_plus(st, ed.s_plus, ed.d);
            ++r.checks;
            if (ce != sh) ++r.mismatches;
        }
    return r;
}

inline CsrMatrix tri_assemble(const TriTerms& T, const TriBasis& B) {
    std::vector<std::tuple<int, int, double>> trip;
    trip.reserve(B.states.size() * 9);
    for (int i = 0; i < (int)B.states.size(); ++i) {
        trip.emplace_back(i, i, tri_diag_energy(T, B.states[i]));
        for (int s = 0; s < B.N; ++s)
            for (int dir : {+1, -1}) {
                TriState nxt = B.states[i];
                tri_hop(T, nxt, s, dir);
                int j = B.find(nxt);
                if (j < 0)
                    throw std::runtime_error("tri_assemble: hop left the basis");
                trip.emplace_back(j, i, -T.spec.t);
            }
    }
    return CsrMatrix::from_triplets((int)B.states.size(), std::move(trip));
}

// lambda-level one-body ring: 24 sites, -t hops, -U at lambda in {2, 14}
// (the rest state sits at lambda = 0; the projected corner holds m = 1 two
// hops after each half-cycle)
inline Eigen::MatrixXd tri_hs_matrix(double U, double t) {
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(24, 24);
    for (int l = 0; l < 24; ++l) {
        h((l + 1) % 24, l) -= t;
        h(l, (l + 1) % 24) -= t;
    }
    h(2, 2) -= U;
    h(14, 14) -= U;
    return h;
}

inline Eigen::VectorXd tri_ground_state(const TriTerms& T, const TriBasis& B) {
    auto sp = eigensolve_dense(tri_hs_matrix(T.spec.U, T.spec.t), 1);
    Eigen::VectorXd a0 = sp.eigenvectors.col(0);
    int imax;
    a0.cwiseAbs().maxCoeff(&imax);
    if (a0(imax) < 0) a0 = -a0;
    Eigen::VectorXd v(B.states.size());
    for (size_t i = 0; i < B.states.size(); ++i) {
        double a = 1, b = 1;
        for (int s = 0; s < B.N; ++s) {
            a *= a0(B.lam[i][s]);
            b *= a0((B.lam[i][s] + 12) % 24);
        }
        v(i) = B.shift_identified ? a + b : a;
    }
    double n = v.norm();
    if (n < 1e-14) throw std::runtime_error("tri_ground_state: vanishing norm");
    return v / n;
}

// qubit masks of the four logical sectors: non-contractible flip strings
// crossing every triangle an even number of times
inline std::vector<uint64_t> tri_sector_masks(const TriTerms& T) {
    const auto& L = T.spec.lattice;
    uint64_t x1 = 0, x2 = 0;
    int j0 = 0, i0 = 0;
    for (int i = 0; i < L.Lx; ++i) {
        x1 ^= (1ull << L.tqub(1, i, j0, 0)) | (1ull << L.tqub(1, i, j0, 1));
        x1 ^= (1ull << L.tqub(2, i, j0, 0)) | (1ull << L.tqub(2, i, j0, 1));
    }
    for (int j = 0; j < L.Ly; ++j) {
        x2 ^= (1ull << L.tqub(0, i0, j, 0)) | (1ull << L.tqub(0, i0, j, 1));
        x2 ^= (1ull << L.tqub(2, i0 + 1, j, 0)) | (1ull << L.tqub(2, i0 + 1, j, 1));
    }
    return {0ull, x1, x2, x1 ^ x2};
}

} // namespace gadget
