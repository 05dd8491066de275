#include <catch2/catch_amalgamated.hpp>

#include "gadget/group.hpp"

using namespace gadget;

TEST_CASE("Z2 preset") {
    auto G = GroupTable::cyclic(2);
    CHECK(G.order == 2);
    CHECK(G.inv[1] == 1);
    CHECK(G.mul(1, 1) == 0);
}

TEST_CASE("S3 closure of {transposition, 3-cycle} is all of S3") {
    auto G = GroupTable::s3(); // validate() checks generation
    CHECK(G.order == 6);
    // non-abelian witness
    bool nonab = false;
    for (int a = 0; a < 6 && !nonab; ++a)
        for (int b = 0; b < 6; ++b)
            if (G.mul(a, b) != G.mul(b, a)) { nonab = true; break; }
    CHECK(nonab);
}

TEST_CASE("D4 preset is a valid order-8 group") {
    auto G = GroupTable::d4();
    CHECK(G.order == 8);
    // r^4 = e, s^2 = e, s r s = r^-1
    CHECK(G.mul(1, G.mul(1, G.mul(1, 1))) == 0);
    CHECK(G.mul(4, 4) == 0);
    CHECK(G.mul(4, G.mul(1, 4)) == G.inv[1]);
}

TEST_CASE("invalid tables are rejected") {
    GroupTable G;
    G.order = 2;
    G.mult = {0, 1, 1, 1}; // not a group (1*1=1)
    G.inv = {0, 1};
    G.gens = {1};
    CHECK_THROWS(G.validate());

    auto Z4 = GroupTable::cyclic(4);
    Z4.gens = {2}; // <2> = {0,2} does not generate Z4
    CHECK_THROWS(Z4.validate());
}

TEST_CASE("L+ is a faithful permutation representation") {
    for (auto G : {GroupTable::s3(), GroupTable::cyclic(4)}) {
        GroupSiteOps ops(G);
        for (int g = 0; g < G.order; ++g) {
            auto Lg = ops.Lplus(g);
            CHECK((Lg.transpose() * Lg - Eigen::MatrixXd::Identity(G.order, G.order))
                      .cwiseAbs()
                      .maxCoeff() == 0.0);
            for (int h = 0; h < G.order; ++h)
                CHECK((ops.Lplus(g) * ops.Lplus(h) - ops.Lplus(G.mul(g, h)))
                          .cwiseAbs()
                          .maxCoeff() == 0.0);
        }
    }
}

TEST_CASE("L+ and L- commute even for non-abelian groups") {
    auto G = GroupTable::s3();
    GroupSiteOps ops(G);
    for (int g = 0; g < 6; ++g)
        for (int h = 0; h < 6; ++h) {
            auto C = ops.Lplus(g) * ops.Lminus(h) - ops.Lminus(h) * ops.Lplus(g);
            CHECK(C.cwiseAbs().maxCoeff() == 0.0);
        }
}

TEST_CASE("T projectors") {
    auto G = GroupTable::s3();
    GroupSiteOps ops(G);
    for (int h = 0; h < 6; ++h) {
        auto Tp = ops.Tplus(h);
        for (int z = 0; z < 6; ++z) CHECK(Tp(z, z) == (z == h ? 1.0 : 0.0));
        auto Tm = ops.Tminus(h);
        for (int z = 0; z < 6; ++z) CHECK(Tm(z, z) == (z == G.inv[h] ? 1.0 : 0.0));
    }
}
