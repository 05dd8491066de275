#include <catch2/catch_amalgamated.hpp>

#include "gadget/model.hpp"

using namespace gadget;

static ModelSpec spec_for(int Lx, int Ly) {
    ModelSpec s;
    s.lattice = TorusLattice::build("square", Lx, Ly);
    return s;
}

TEST_CASE("2x2 torus: 16 stabilizer terms, all pairwise commuting") {
    auto T = build_modified_toric(spec_for(2, 2)); // validate() runs inside
    CHECK(T.stars.size() + T.plaquettes.size() + T.edges.size() == 16);
}

TEST_CASE("stabilizer algebra holds on 2x2, 3x3 and 4x4") {
    for (int L : {2, 3, 4}) {
        auto T = build_modified_toric(spec_for(L, L));
        PauliOp prod = PauliOp::identity(T.n_qubits());
        for (auto& a : T.stars) prod = prod * a;
        CHECK(prod.is_identity());
        // (D^dag)^4 = A_s tensor identity-on-gadget; qubit part check
        for (size_t s = 0; s < T.stars.size(); ++s) {
            PauliOp p4 = T.connector_prefix((int)s, 4);
            CHECK(p4 == T.stars[s]);
            // (D^dag)^8 = identity
            PauliOp p8 = p4 * p4;
            CHECK(p8.is_identity());
        }
    }
}

TEST_CASE("A_s(m) overlaps each B_p on 0 or 2 qubits") {
    for (int L : {2, 3, 4}) {
        auto T = build_modified_toric(spec_for(L, L));
        for (auto& sched : T.hop_schedule)
            for (auto& h : sched)
                for (auto& b : T.plaquettes) {
                    int ov = h.xmask().and_popcount(b.zmask());
                    CHECK((ov == 0 || ov == 2));
                }
    }
}

TEST_CASE("default schedule matches the pinned convention") {
    auto L = TorusLattice::build("square", 3, 3);
    auto T = build_modified_toric(spec_for(3, 3));
    int s = L.star(1, 1);
    auto& sched = T.hop_schedule[s];
    auto expect = [&](const PauliOp& p, int qa, int qb) {
        PauliOp e = PauliOp::X(L.n_qubits(), qa) * PauliOp::X(L.n_qubits(), qb);
        CHECK(p == e);
    };
    expect(sched[0], L.q_hu(0, 1), L.q_vl(1, 1));
    expect(sched[1], L.q_hu(1, 1), L.q_vr(1, 1));
    expect(sched[2], L.q_hd(1, 1), L.q_vr(1, 0));
    expect(sched[3], L.q_hd(0, 1), L.q_vl(1, 0));
}

TEST_CASE("shield T factors") {
    CHECK(T_left(2) == -1.0);
    for (int m : {0, 1, 3}) CHECK(T_left(m) == 1.0);
    CHECK(T_right(0) == 1.0);
    for (int m : {1, 2, 3}) CHECK(T_right(m) == -1.0);
    CHECK(T_down(1) == -1.0); // Appendix A profile, not the main-text typo
    CHECK(T_up(3) == -1.0);
}

TEST_CASE("logical operators: pairing and commutation with all terms") {
    auto T = build_modified_toric(spec_for(3, 3));
    auto& X1 = T.logicals[0][0];
    auto& Z1 = T.logicals[0][1];
    auto& X2 = T.logicals[1][0];
    auto& Z2 = T.logicals[1][1];
    CHECK(!X1.commutes(Z1));
    CHECK(!X2.commutes(Z2));
    CHECK(X1.commutes(Z2));
    CHECK(X2.commutes(Z1));
    for (auto& b : T.plaquettes) {
        CHECK(X1.commutes(b));
        int ov = X1.xmask().and_popcount(b.zmask());
        CHECK((ov == 0 || ov == 2));
    }
}

TEST_CASE("ground-space dimension of the stabilizer part is 4") {
    // stabilizer rank count: 4N qubits; independent stabilizers:
    // (N-1) stars + (N-1) plaquettes + ... easier: 2^{4N} / 2^{rank} = 4.
    // Rank over GF(2) of the symplectic vectors of all stabilizer terms.
    auto T = build_modified_toric(spec_for(2, 2));
    int n = T.n_qubits();
    std::vector<std::vector<int>> rows;
    auto to_row = [&](const PauliOp& p) {
        std::vector<int> r(2 * n, 0);
        for (int j = 0; j < n; ++j) {
            r[j] = p.xmask().get(j);
            r[n + j] = p.zmask().get(j);
        }
        return r;
    };
    for (auto& a : T.stars) rows.push_back(to_row(a));
    for (auto& b : T.plaquettes) rows.push_back(to_row(b));
    for (auto& c : T.edges) rows.push_back(to_row(c));
    // GF(2) Gaussian elimination
    int rank = 0;
    for (int col = 0; col < 2 * n && rank < (int)rows.size(); ++col) {
        int piv = -1;
        for (int r = rank; r < (int)rows.size(); ++r)
            if (rows[r][col]) { piv = r; break; }
        if (piv < 0) continue;
        std::swap(rows[rank], rows[piv]);
        for (int r = 0; r < (int)rows.size(); ++r)
            if (r != rank && rows[r][col])
                for (int c = 0; c < 2 * n; ++c) rows[r][c] ^= rows[rank][c];
        ++rank;
    }
    CHECK(rank == n - 2); // 2^{2n-... }: k = n - rank = 2 logical qubits
}

TEST_CASE("builder rejects bad input") {
    ModelSpec s;
    s.lattice = TorusLattice::build("triangular", 2, 2);
    CHECK_THROWS(build_modified_toric(s));
    auto s2 = spec_for(2, 2);
    s2.J = 0;
    CHECK_THROWS(build_modified_toric(s2));
}
