#pragma once

#include <complex>
#include <sstream>
#include <stdexcept>
#include <string>

#include "gadget/bitvec.hpp"

namespace gadget {

// Signed tensor product of single-site X/Z factors:
//     P = i^phase_pow * prod_j X_j^{x_j} * prod_j Z_j^{z_j}
// (X before Z on every site). phase_pow is a power of i in {0,1,2,3}.
// Model terms are real, but intermediate products (e.g. during conjugation
// checks) can pick up +-i, so the full phase group is kept.
class PauliOp {
public:
    PauliOp() = default;
    explicit PauliOp(int n) : x_(n), z_(n), ph_(0) {}

    static PauliOp identity(int n) { return PauliOp(n); }
    static PauliOp X(int n, int j) { PauliOp p(n); p.x_.flip(j); return p; }
    static PauliOp Z(int n, int j) { PauliOp p(n); p.z_.flip(j); return p; }

    int sites() const { return x_.size(); }
    const BitVec& xmask() const { return x_; }
    const BitVec& zmask() const { return z_; }
    int phase_pow() const { return ph_; }

    std::complex<double> phase() const {
        static const std::complex<double> tab[4] = {
            {1, 0}, {0, 1}, {-1, 0}, {0, -1}};
        return tab[ph_];
    }

    bool is_identity() const { return !x_.any() && !z_.any() && ph_ == 0; }

    // (i^a X^p Z^q)(i^b X^r Z^s) = i^{a+b} (-1)^{|q&r|} X^{p^r} Z^{q^s}
    PauliOp operator*(const PauliOp& o) const {
        if (sites() != o.sites())
            throw std::invalid_argument("PauliOp: mismatched site counts");
        PauliOp r(sites());
        r.x_ = x_ ^ o.x_;
        r.z_ = z_ ^ o.z_;
        r.ph_ = (ph_ + o.ph_ + 2 * (z_.and_popcount(o.x_) & 1)) & 3;
        return r;
    }

    bool commutes(const PauliOp& o) const {
        if (sites() != o.sites())
            throw std::invalid_argument("PauliOp: mismatched site counts");
        return ((x_.and_popcount(o.z_) + z_.and_popcount(o.x_)) & 1) == 0;
    }

    // P |c> = amp |c ^ x_mask>, amp = phase * (-1)^{|z & c|}
    std::complex<double> apply_to_config(const BitVec& c, BitVec& out) const {
        if (c.size() != sites())
            throw std::invalid_argument("PauliOp: config size mismatch");
        out = c ^ x_;
        int s = (ph_ + 2 * (z_.and_popcount(c) & 1)) & 3;
        static const std::complex<double> tab[4] = {
            {1, 0}, {0, 1}, {-1, 0}, {0, -1}};
        return tab[s];
    }

    // Diagonal (Z-type) expectation on a computational config; requires x
    // support empty.
    double diag_sign(const BitVec& c) const {
        return (z_.and_popcount(c) & 1) ? -1.0 : 1.0;
    }

    bool operator==(const PauliOp& o) const {
        return x_ == o.x_ && z_ == o.z_ && ph_ == o.ph_;
    }

    // Canonical text rendering "+X{0,3} Z{1}" etc.
    std::string to_string() const {
        std::ostringstream os;
        static const char* ph[4] = {"+", "+i ", "-", "-i "};
        os << ph[ph_];
        bool wrote = false;
        for (int pass = 0; pass < 2; ++pass) {
            const BitVec& m = pass == 0 ? x_ : z_;
            if (!m.any()) continue;
            if (wrote) os << ' ';
            os << (pass == 0 ? "X{" : "Z{");
            bool first = true;
            for (int j = 0; j < m.size(); ++j)
                if (m.get(j)) { os << (first ? "" : ",") << j; first = false; }
            os << '}';
            wrote = true;
        }
        if (!wrote) os << "I";
        return os.str();
    }

    void mul_phase_pow(int k) { ph_ = (ph_ + k) & 3; }

private:
    BitVec x_, z_;
    int ph_ = 0;
};

} // namespace gadget
