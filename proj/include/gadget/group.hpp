#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace gadget {

// Finite group given by an explicit multiplication table, identity = index 0,
// plus an ordered generating set.
struct GroupTable {
    int order = 0;
    std::vector<int> mult; // order*order, row-major: mult[a*order+b] = a*b
    std::vector<int> inv;
    std::vector<int> gens; // generating set (indices), identity excluded

    int mul(int a, int b) const { return mult[a * order + b]; }

    void validate() const {
        if (order <= 0) throw std::invalid_argument("group: empty");
        if ((int)mult.size() != order * order)
            throw std::invalid_argument("group: bad table size");
        for (int v : mult)
            if (v < 0 || v >= order)
                throw std::invalid_argument("group: element out of range");
        // identity
        for (int a = 0; a < order; ++a)
            if (mul(0, a) != a || mul(a, 0) != a)
                throw std::invalid_argument("group: index 0 is not the identity");
        // inverses consistent
        if ((int)inv.size() != order)
            throw std::invalid_argument("group: bad inverse table");
        for (int a = 0; a < order; ++a)
            if (mul(a, inv[a]) != 0 || mul(inv[a], a) != 0)
                throw std::invalid_argument("group: inverse table inconsistent");
        // associativity (brute force; orders here are tiny)
        for (int a = 0; a < order; ++a)
            for (int b = 0; b < order; ++b)
                for (int c = 0; c < order; ++c)
                    if (mul(mul(a, b), c) != mul(a, mul(b, c)))
                        throw std::invalid_argument("group: non-associative table");
        // generators: none is the identity, and they generate G
        for (int g : gens)
            if (g <= 0 || g >= order)
                throw std::invalid_argument("group: invalid generator");
        std::set<int> closure = {0};
        bool grew = true;
        while (grew) {
            grew = false;
            for (int a : std::vector<int>(closure.begin(), closure.end()))
                for (int g : gens) {
                    if (closure.insert(mul(a, g)).second) grew = true;
                    if (closure.insert(mul(g, a)).second) grew = true;
                }
        }
        if ((int)closure.size() != order)
            throw std::invalid_argument("group: generators do not generate G");
    }

    static std::vector<int> inverse_from(const std::vector<int>& mult, int n) {
        std::vector<int> inv(n, -1);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                if (mult[a * n + b] == 0) inv[a] = b;
        return inv;
    }

    // --- presets -----------------------------------------------------------
    static GroupTable cyclic(int n, std::vector<int> gens = {1}) {
        GroupTable G;
        G.order = n;
        G.mult.resize(n * n);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) G.mult[a * n + b] = (a + b) % n;
        G.inv = inverse_from(G.mult, n);
        G.gens = std::move(gens);
        G.validate();
        return G;
    }

    // S3: elements are permutations of {0,1,2} in the fixed order
    // e, (12), (01), (021)? -- listed explicitly below; identity first.
    // Default generators: a transposition (index 1) and a 3-cycle (index 3).
    static GroupTable s3(std::vector<int> gens = {1, 3}) {
        static const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                        {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
        auto idx = [&](const int p[3]) {
            for (int k = 0; k < 6; ++k)
                if (perms[k][0] == p[0] && perms[k][1] == p[1] && perms[k][2] == p[2])
                    return k;
            return -1;
        };
        GroupTable G;
        G.order = 6;
        G.mult.resize(36);
        for (int a = 0; a < 6; ++a)
            for (int b = 0; b < 6; ++b) {
                int p[3];
                for (int x = 0; x < 3; ++x) p[x] = perms[a][perms[b][x]];
                G.mult[a * 6 + b] = idx(p);
            }
        G.inv = inverse_from(G.mult, 6);
        G.gens = std::move(gens);
        G.validate();
        return G;
    }

    // D4 as symmetries of the square: r = rotation by 90deg, s = reflection.
    // Elements 0..3 = r^k, 4..7 = s r^k. Default generators {r, s}.
    static GroupTable d4(std::vector<int> gens = {1, 4}) {
        GroupTable G;
        G.order = 8;
        G.mult.assign(64, -1);
        auto id = [](int refl, int rot) { return refl * 4 + ((rot % 4) + 4) % 4; };
        for (int ra = 0; ra < 2; ++ra)
            for (int ka = 0; ka < 4; ++ka)
                for (int rb = 0; rb < 2; ++rb)
                    for (int kb = 0; kb < 4; ++kb) {
                        // (s^ra r^ka)(s^rb r^kb) = s^{ra+rb} r^{kb +- ka}
                        int refl = (ra + rb) % 2;
                        int rot = rb ? (kb - ka) : (kb + ka);
                        // note: r^ka s = s r^{-ka}
                        G.mult[id(ra, ka) * 8 + id(rb, kb)] = id(refl, rot);
                    }
        G.inv = inverse_from(G.mult, 8);
        G.gens = std::move(gens);
        G.validate();
        return G;
    }

    static GroupTable preset(const std::string& name) {
        if (name == "Z2") return cyclic(2);
        if (name == "Z3") return cyclic(3);
        if (name == "Z4") return cyclic(4);
        if (name == "S3") return s3();
        if (name == "D4") return d4();
        throw std::invalid_argument("unknown group preset: " + name);
    }
};

// |G|-dimensional site operators of the quantum double construction.
struct GroupSiteOps {
    const GroupTable& G;
    explicit GroupSiteOps(const GroupTable& g) : G(g) {}

    // L+^g |z> = |gz>
    Eigen::MatrixXd Lplus(int g) const {
        Eigen::MatrixXd M = Eigen::MatrixXd::Zero(G.order, G.order);
        for (int z = 0; z < G.order; ++z) M(G.mul(g, z), z) = 1.0;
        return M;
    }
    // L-^g |z> = |z g^{-1}>
    Eigen::MatrixXd Lminus(int g) const {
        Eigen::MatrixXd M = Eigen::MatrixXd::Zero(G.order, G.order);
        for (int z = 0; z < G.order; ++z) M(G.mul(z, G.inv[g]), z) = 1.0;
        return M;
    }
    // T+^h |z> = delta_{h,z} |z>
    Eigen::MatrixXd Tplus(int h) const {
        Eigen::MatrixXd M = Eigen::MatrixXd::Zero(G.order, G.order);
        M(h, h) = 1.0;
        return M;
    }
    // T-^h |z> = delta_{h^{-1},z} |z>
    Eigen::MatrixXd Tminus(int h) const {
        Eigen::MatrixXd M = Eigen::MatrixXd::Zero(G.order, G.order);
        M(G.inv[h], G.inv[h]) = 1.0;
        return M;
    }
};

} // namespace gadget
