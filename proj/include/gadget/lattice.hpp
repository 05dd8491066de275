#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

namespace gadget {

// Torus geometries. Square lattice: stars = vertices (i,j), i fastest.
// Horizontal edge h(i,j) joins stars (i,j)-(i+1,j) and carries two qubit
// slots: h^u (upper, slot 0) and h^d (lower, slot 1). Vertical edge v(i,j)
// joins (i,j)-(i,j+1) with slots v^l (left, slot 0) and v^r (right, slot 1).
//
// Triangular lattice: stars on a triangular Bravais lattice with unit
// translations u0=(1,0), u1=(0,1), u2=(-1,1) in (i,j) coordinates. Three
// edge families d=0,1,2 (edge e_d(i,j) joins s=(i,j) and s+u_d). Each edge
// carries one slot per adjacent triangle: slot 0 = up-triangle side,
// slot 1 = down-triangle side. Six gadget corners per star, k = 0..5.
struct TorusLattice {
    enum class Kind { square, triangular };

    Kind kind = Kind::square;
    int Lx = 0, Ly = 0;

    static TorusLattice build(Kind kind, int Lx, int Ly) {
        if (Lx < 2 || Ly < 2)
            throw std::invalid_argument("lattice: extents must be >= 2");
        TorusLattice L;
        L.kind = kind;
        L.Lx = Lx;
        L.Ly = Ly;
        return L;
    }
    static TorusLattice build(const std::string& kind, int Lx, int Ly) {
        if (kind == "square") return build(Kind::square, Lx, Ly);
        if (kind == "triangular") return build(Kind::triangular, Lx, Ly);
        throw std::invalid_argument("lattice: unknown kind " + kind);
    }

    int wrapx(int i) const { return ((i % Lx) + Lx) % Lx; }
    int wrapy(int j) const { return ((j % Ly) + Ly) % Ly; }

    int n_stars() const { return Lx * Ly; }
    int n_edges() const { return kind == Kind::square ? 2 * Lx * Ly : 3 * Lx * Ly; }
    int n_plaquettes() const { return kind == Kind::square ? Lx * Ly : 2 * Lx * Ly; }
    int n_qubits() const { return 2 * n_edges(); }
    int n_gadget_sites() const {
        return kind == Kind::square ? n_stars() : 6 * n_stars();
    }

    int star(int i, int j) const { return wrapy(j) * Lx + wrapx(i); }
    std::pair<int, int> star_coords(int s) const { return {s % Lx, s / Lx}; }

    // ---- square indexing --------------------------------------------------
    int hedge(int i, int j) const { return 2 * star(i, j); }     // h(i,j)
    int vedge(int i, int j) const { return 2 * star(i, j) + 1; } // v(i,j)
    int qub(int edge, int slot) const { return 2 * edge + slot; }
    int q_hu(int i, int j) const { return qub(hedge(i, j), 0); }
    int q_hd(int i, int j) const { return qub(hedge(i, j), 1); }
    int q_vl(int i, int j) const { return qub(vedge(i, j), 0); }
    int q_vr(int i, int j) const { return qub(vedge(i, j), 1); }

    // plaquette p(i,j): bounded by h(i,j) below, h(i,j+1) above, v(i,j)
    // left, v(i+1,j) right. B_p uses the slot nearest the plaquette.
    std::vector<int> plaquette_qubits(int p) const {
        auto [i, j] = star_coords(p);
        if (kind == Kind::square)
            return {q_hu(i, j), q_hd(i, j + 1), q_vr(i, j), q_vl(i + 1, j)};
        // triangular: plaquettes are the 2N triangles; p < N: up-triangle
        // at (i,j), else down-triangle at (i,j) with p -= N.
        if (p < n_stars()) return tri_up(i, j);
        auto [i2, j2] = star_coords(p - n_stars());
        return tri_dn(i2, j2);
    }

    // edges incident to a square star, with direction roles
    struct Incident { int edge; std::string role; };
    std::vector<Incident> incident(int s) const {
        auto [i, j] = star_coords(s);
        if (kind == Kind::square)
            return {{hedge(i, j), "right"},
                    {hedge(i - 1, j), "left"},
                    {vedge(i, j), "up"},
                    {vedge(i, j - 1), "down"}};
        return {{tedge(0, i, j), "+u0"},     {tedge(0, i - 1, j), "-u0"},
                {tedge(1, i, j), "+u1"},     {tedge(1, i, j - 1), "-u1"},
                {tedge(2, i, j), "+u2"},     {tedge(2, i + 1, j - 1), "-u2"}};
    }

    // ---- triangular indexing ---------------------------------------------
    int tedge(int d, int i, int j) const { return 3 * star(i, j) + d; }
    // slot 0 = up-triangle side, 1 = down-triangle side
    int tqub(int d, int i, int j, int side) const {
        return 2 * tedge(d, i, j) + side;
    }
    // up triangle at x=(i,j): edges e0(x), e1(x), e2(x+u0), all up-side slots
    std::vector<int> tri_up(int i, int j) const {
        return {tqub(0, i, j, 0), tqub(1, i, j, 0), tqub(2, i + 1, j, 0)};
    }
    // down triangle at x=(i,j): edges e1(x), e2(x), e0(x-u0+u1), down-side
    std::vector<int> tri_dn(int i, int j) const {
        return {tqub(1, i, j, 1), tqub(2, i, j, 1), tqub(0, i - 1, j + 1, 1)};
    }
    int corner(int s, int k) const { return 6 * s + k; }
};

} // namespace gadget
