#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <complex>
#include <random>

#include "gadget/lattice.hpp"
#include "gadget/model.hpp"
#include "gadget/pauli.hpp"

using namespace gadget;
using Cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;

// dense 2^n oracle
static CMat dense(const PauliOp& p) {
    int n = p.sites();
    size_t dim = size_t(1) << n;
    CMat M = CMat::Zero(dim, dim);
    BitVec c(n), out(n);
    for (size_t b = 0; b < dim; ++b) {
        for (int j = 0; j < n; ++j) c.set(j, (b >> j) & 1);
        Cplx amp = p.apply_to_config(c, out);
        size_t b2 = 0;
        for (int j = 0; j < n; ++j)
            if (out.get(j)) b2 |= size_t(1) << j;
        M(b2, b) = amp;
    }
    return M;
}

static PauliOp random_op(std::mt19937& rng, int n) {
    PauliOp p(n);
    std::uniform_int_distribution<int> d(0, 3);
    for (int j = 0; j < n; ++j) {
        switch (d(rng)) {
        case 1: p = p * PauliOp::X(n, j); break;
        case 2: p = p * PauliOp::Z(n, j); break;
        case 3: p = p * PauliOp::X(n, j) * PauliOp::Z(n, j); break;
        default: break;
        }
    }
    if (d(rng) & 1) p.mul_phase_pow(d(rng));
    return p;
}

TEST_CASE("single-site involutions and anticommutation") {
    auto X0 = PauliOp::X(4, 0), Z0 = PauliOp::Z(4, 0);
    CHECK((X0 * X0).is_identity());
    CHECK((Z0 * Z0).is_identity());
    CHECK(!X0.commutes(Z0));
    CHECK(X0.commutes(PauliOp::Z(4, 1)));
}

TEST_CASE("star term squares to identity; schedule product gives A_s") {
    auto L = TorusLattice::build("square", 2, 2);
    auto A = star_op(L, 0, 0);
    CHECK((A * A).is_identity());
    auto sched = hop_schedule_for(L, 0, 0);
    PauliOp prod = PauliOp::identity(L.n_qubits());
    for (int m = 0; m < 4; ++m) prod = prod * sched[m];
    CHECK(prod == A);
}

TEST_CASE("A_s(0) anticommutes with the two adjacent edge terms it cuts") {
    auto L = TorusLattice::build("square", 2, 2);
    auto sched = hop_schedule_for(L, 1, 0); // star s* = (1,0)
    // A_{s*}(0) = X[h^u(0,0)] X[v^l(1,0)]: cuts edges h(0,0) and v(1,0)
    int anti = 0;
    for (int e = 0; e < L.n_edges(); ++e)
        if (!sched[0].commutes(edge_op(L, e))) ++anti;
    CHECK(anti == 2);
    CHECK(!sched[0].commutes(edge_op(L, L.hedge(0, 0))));
    CHECK(!sched[0].commutes(edge_op(L, L.vedge(1, 0))));
}

TEST_CASE("multiply matches the dense oracle and is associative") {
    std::mt19937 rng(12345);
    for (int trial = 0; trial < 40; ++trial) {
        int n = 2 + (int)(rng() % 5);
        auto p = random_op(rng, n), q = random_op(rng, n), r = random_op(rng, n);
        // dense product oracle
        CMat Mp = dense(p), Mq = dense(q);
        CHECK((dense(p * q) - Mp * Mq).cwiseAbs().maxCoeff() == 0.0);
        // commutes() vs dense commutator
        bool c = ((Mp * Mq - Mq * Mp).cwiseAbs().maxCoeff() < 1e-15);
        CHECK(p.commutes(q) == c);
        // associativity, exact
        CHECK(((p * q) * r) == (p * (q * r)));
    }
}

TEST_CASE("apply_to_config composes over multiply") {
    std::mt19937 rng(999);
    for (int trial = 0; trial < 30; ++trial) {
        int n = 3 + (int)(rng() % 4);
        auto p = random_op(rng, n), q = random_op(rng, n);
        BitVec c(n);
        for (int j = 0; j < n; ++j) c.set(j, rng() & 1);
        BitVec mid(n), out1(n), out2(n);
        Cplx a1 = q.apply_to_config(c, mid);
        Cplx a2 = p.apply_to_config(mid, out1);
        Cplx a = (p * q).apply_to_config(c, out2);
        CHECK(out1 == out2);
        CHECK(std::abs(a - a1 * a2) < 1e-15);
    }
}

TEST_CASE("C_e on |0...0>, Z on a flipped qubit") {
    auto L = TorusLattice::build("square", 2, 2);
    int n = L.n_qubits();
    BitVec zero(n), out(n);
    auto Ce = edge_op(L, 0);
    CHECK(Ce.apply_to_config(zero, out) == Cplx(1, 0));
    CHECK(out == zero);
    BitVec one(n);
    one.set(5, true);
    CHECK(PauliOp::Z(n, 5).apply_to_config(one, out) == Cplx(-1, 0));
}

TEST_CASE("mismatched site counts are rejected") {
    CHECK_THROWS(PauliOp::X(3, 0) * PauliOp::X(4, 0));
    CHECK_THROWS(PauliOp::X(3, 0).commutes(PauliOp::X(4, 0)));
}

TEST_CASE("text rendering") {
    auto p = PauliOp::X(4, 0) * PauliOp::X(4, 3) * PauliOp::Z(4, 1);
    CHECK(p.to_string() == "+X{0,3} Z{1}");
    CHECK(PauliOp::identity(2).to_string() == "+I");
}
