#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <vector>

#include "gadget/group.hpp"
#include "gadget/lattice.hpp"
#include "gadget/pauli.hpp"

namespace gadget {

enum class Variant { toric, quantum_double, triangular };

struct ModelSpec {
    TorusLattice lattice;
    Variant variant = Variant::toric;
    double J = 0.09, U = 1.0, t = 0.375; // Appendix-B optimum defaults
    double R = 0.0;                      // triangular only
    std::optional<GroupTable> group;     // quantum_double only
    int logical_i0 = 0, logical_j0 = 0;

    void check() const {
        if (J <= 0 || U <= 0 || t <= 0)
            throw std::invalid_argument("model: couplings must be positive");
        if (variant == Variant::triangular && R <= 0)
            throw std::invalid_argument("model: triangular variant needs R > 0");
        if (variant == Variant::quantum_double && !group)
            throw std::invalid_argument("model: quantum double needs a group");
    }
};

// Shield T-factor profiles as functions of the gadget spin m (square toric).
// T_d uses the Appendix-A profile (-1 at m=1); the main text prints
// 1-2*delta_{m,3}, which contradicts the appendix derivation and is flagged
// in verification reports.
inline double T_left(int m) { return m == 2 ? -1.0 : 1.0; }
inline double T_right(int m) { return m == 0 ? 1.0 : -1.0; }
inline double T_down(int m) { return m == 1 ? -1.0 : 1.0; }
inline double T_up(int m) { return m == 3 ? -1.0 : 1.0; }

struct ShieldPair {
    int s, s2;       // star and its +x or +y neighbor
    bool horizontal; // true: T_l(m_s) T_r(m_s2); false: T_d(m_s) T_u(m_s2)
};

struct TermSet {
    TorusLattice lattice;
    ModelSpec spec;
    std::vector<PauliOp> stars;      // A_s
    std::vector<PauliOp> plaquettes; // B_p
    std::vector<PauliOp> edges;      // C_e
    // hop_schedule[s][m] = qubit part A_s(m) of the m -> m+1 move
    std::vector<std::array<PauliOp, 4>> hop_schedule;
    std::vector<ShieldPair> shield_pairs;
    // logicals[k] = {Xbar_k, Zbar_k}, k = 0,1
    std::array<std::array<PauliOp, 2>, 2> logicals;

    int n_qubits() const { return lattice.n_qubits(); }

    // prefix product prod_{m'<m} A_s(m') of the connector U_s, as a Pauli
    PauliOp connector_prefix(int s, int m) const {
        PauliOp p = PauliOp::identity(n_qubits());
        for (int k = 0; k < m; ++k) p = hop_schedule[s][k] * p;
        return p;
    }

    void validate() const;
};

// ---------------------------------------------------------------------------
// Builders (square toric)
// ---------------------------------------------------------------------------

inline PauliOp star_op(const TorusLattice& L, int i, int j) {
    int n = L.n_qubits();
    PauliOp A = PauliOp::identity(n);
    for (int q : {L.q_hu(i, j), L.q_hd(i, j), L.q_hu(i - 1, j), L.q_hd(i - 1, j),
                  L.q_vl(i, j), L.q_vr(i, j), L.q_vl(i, j - 1), L.q_vr(i, j - 1)})
        A = A * PauliOp::X(n, q);
    return A;
}

inline PauliOp plaquette_op(const TorusLattice& L, int p) {
    int n = L.n_qubits();
    PauliOp B = PauliOp::identity(n);
    for (int q : L.plaquette_qubits(p)) B = B * PauliOp::Z(n, q);
    return B;
}

inline PauliOp edge_op(const TorusLattice& L, int e) {
    int n = L.n_qubits();
    return PauliOp::Z(n, L.qub(e, 0)) * PauliOp::Z(n, L.qub(e, 1));
}

// Default hop schedule, back-solved from the Appendix A lambda-profiles
// (the content of Fig. 2(b), which the paper gives only pictorially):
//   A_s(0) = X[h^u(i-1,j)] X[v^l(i,j)]
//   A_s(1) = X[h^u(i,j)]   X[v^r(i,j)]
//   A_s(2) = X[h^d(i,j)]   X[v^r(i,j-1)]
//   A_s(3) = X[h^d(i-1,j)] X[v^l(i,j-1)]
inline std::array<PauliOp, 4> hop_schedule_for(const TorusLattice& L, int i,
                                               int j) {
    int n = L.n_qubits();
    auto two = [&](int a, int b) { return PauliOp::X(n, a) * PauliOp::X(n, b); };
    return {two(L.q_hu(i - 1, j), L.q_vl(i, j)),
            two(L.q_hu(i, j), L.q_vr(i, j)),
            two(L.q_hd(i, j), L.q_vr(i, j - 1)),
            two(L.q_hd(i - 1, j), L.q_vl(i, j - 1))};
}

inline std::array<std::array<PauliOp, 2>, 2> build_logicals(const TorusLattice& L,
                                                            int i0, int j0) {
    int n = L.n_qubits();
    PauliOp X1 = PauliOp::identity(n), Z1 = PauliOp::identity(n);
    PauliOp X2 = PauliOp::identity(n), Z2 = PauliOp::identity(n);
    for (int i = 0; i < L.Lx; ++i) Z1 = Z1 * PauliOp::Z(n, L.q_hu(i, j0));
    for (int j = 0; j < L.Ly; ++j)
        X1 = X1 * PauliOp::X(n, L.q_hu(i0, j)) * PauliOp::X(n, L.q_hd(i0, j));
    for (int j = 0; j < L.Ly; ++j) Z2 = Z2 * PauliOp::Z(n, L.q_vl(i0, j));
    for (int i = 0; i < L.Lx; ++i)
        X2 = X2 * PauliOp::X(n, L.q_vl(i, j0)) * PauliOp::X(n, L.q_vr(i, j0));
    return {{{X1, Z1}, {X2, Z2}}};
}

inline TermSet build_modified_toric(const ModelSpec& spec) {
    spec.check();
    const TorusLattice& L = spec.lattice;
    if (L.kind != TorusLattice::Kind::square)
        throw std::invalid_argument("toric builder needs a square lattice");
    TermSet T;
    T.lattice = L;
    T.spec = spec;
    for (int j = 0; j < L.Ly; ++j)
        for (int i = 0; i < L.Lx; ++i) {
            T.stars.push_back(star_op(L, i, j));
            T.hop_schedule.push_back(hop_schedule_for(L, i, j));
        }
    for (int p = 0; p < L.n_plaquettes(); ++p)
        T.plaquettes.push_back(plaquette_op(L, p));
    for (int e = 0; e < L.n_edges(); ++e) T.edges.push_back(edge_op(L, e));
    for (int j = 0; j < L.Ly; ++j)
        for (int i = 0; i < L.Lx; ++i) {
            T.shield_pairs.push_back({L.star(i, j), L.star(i + 1, j), true});
            T.shield_pairs.push_back({L.star(i, j), L.star(i, j + 1), false});
        }
    T.logicals = build_logicals(L, spec.logical_i0, spec.logical_j0);
    T.validate();
    return T;
}

inline void TermSet::validate() const {
    // stabilizer commutation
    auto all = [&]() {
        std::vector<const PauliOp*> v;
        for (auto& a : stars) v.push_back(&a);
        for (auto& b : plaquettes) v.push_back(&b);
        for (auto& c : edges) v.push_back(&c);
        return v;
    }();
    for (size_t a = 0; a < all.size(); ++a)
        for (size_t b = a + 1; b < all.size(); ++b)
            if (!all[a]->commutes(*all[b]))
                throw std::runtime_error("termset: stabilizer terms do not commute");
    // prod_s A_s = identity (every qubit in exactly two stars)
    PauliOp prod = PauliOp::identity(n_qubits());
    for (auto& a : stars) prod = prod * a;
    if (!prod.is_identity())
        throw std::runtime_error("termset: product of star terms is not identity");
    for (size_t s = 0; s < hop_schedule.size(); ++s) {
        PauliOp acc = PauliOp::identity(n_qubits());
        for (int m = 0; m < 4; ++m) {
            const PauliOp& h = hop_schedule[s][m];
            if (h.xmask().popcount() != 2 || h.zmask().any())
                throw std::runtime_error("termset: A_s(m) is not a two-X product");
            for (auto& b : plaquettes)
                if (!h.commutes(b))
                    throw std::runtime_error("termset: A_s(m) anticommutes with B_p");
            acc = acc * h;
        }
        if (!(acc == stars[s]))
            throw std::runtime_error("termset: prod_m A_s(m) != A_s");
    }
    // logicals
    for (int k = 0; k < 2; ++k)
        for (const PauliOp& l : logicals[k])
            for (auto* t : all)
                if (!l.commutes(*t))
                    throw std::runtime_error("termset: logical fails to commute");
    if (logicals[0][0].commutes(logicals[0][1]) ||
        logicals[1][0].commutes(logicals[1][1]) ||
        !logicals[0][0].commutes(logicals[1][1]) ||
        !logicals[1][0].commutes(logicals[0][1]))
        throw std::runtime_error("termset: logical pairing broken");
}

} // namespace gadget
