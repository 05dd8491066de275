#pragma once

#include <cstdint>
#include <vector>
#include <functional>
#include <bit>

namespace gadget {

// Fixed-length bit vector over 64-bit words. Used both for Pauli masks and
// for qubit configurations, so equality/hash must be exact (trailing bits
// are kept zero).
class BitVec {
public:
    BitVec() : n_(0) {}
    explicit BitVec(int n) : n_(n), w_((n + 63) / 64, 0) {}

    int size() const { return n_; }

    bool get(int i) const { return (w_[i >> 6] >> (i & 63)) & 1; }
    void set(int i, bool v) {
        uint64_t m = uint64_t(1) << (i & 63);
        if (v) w_[i >> 6] |= m; else w_[i >> 6] &= ~m;
    }
    void flip(int i) { w_[i >> 6] ^= uint64_t(1) << (i & 63); }

    BitVec& operator^=(const BitVec& o) {
        for (size_t k = 0; k < w_.size(); ++k) w_[k] ^= o.w_[k];
        return *this;
    }
    friend BitVec operator^(BitVec a, const BitVec& b) { a ^= b; return a; }

    // |this AND other| (popcount of the intersection)
    int and_popcount(const BitVec& o) const {
        int c = 0;
        for (size_t k = 0; k < w_.size(); ++k) c += std::popcount(w_[k] & o.w_[k]);
        return c;
    }
    int popcount() const {
        int c = 0;
        for (uint64_t w : w_) c += std::popcount(w);
        return c;
    }
    bool any() const {
        for (uint64_t w : w_) if (w) return true;
        return false;
    }

    bool operator==(const BitVec& o) const { return n_ == o.n_ && w_ == o.w_; }
    bool operator!=(const BitVec& o) const { return !(*this == o); }
    bool operator<(const BitVec& o) const { return w_ < o.w_; } // lex on words

    size_t hash() const {
        size_t h = 1469598103934665603ull;
        for (uint64_t w : w_) { h ^= w; h *= 1099511628211ull; }
        return h;
    }

    const std::vector<uint64_t>& words() const { return w_; }

private:
    int n_;
    std::vector<uint64_t> w_;
};

struct BitVecHash {
    size_t operator()(const BitVec& v) const { return v.hash(); }
};

} // namespace gadget
