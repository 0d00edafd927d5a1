#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <vector>

#include "tb/check.hpp"

namespace tb {

// Fixed-universe vertex set over [0, n). All set operations require equal
// universes; comparison is lexicographic on vertex ids so ties break towards
// the set containing the smallest id.
class VertexSet {
public:
    VertexSet() = default;
    explicit VertexSet(int n) : n_(n), w_((n + 63) / 64, 0) {}
    VertexSet(int n, std::initializer_list<int> ids) : VertexSet(n) {
        for (int v : ids) set(v);
    }

    static VertexSet all(int n) {
        VertexSet s(n);
        for (std::size_t i = 0; i < s.w_.size(); ++i) s.w_[i] = ~0ULL;
        s.trim();
        return s;
    }

    int universe() const { return n_; }

    bool test(int v) const { return (w_[v >> 6] >> (v & 63)) & 1ULL; }
    void set(int v) {
        check(0 <= v && v < n_, "VertexSet: id out of range");
        w_[v >> 6] |= 1ULL << (v & 63);
    }
    void reset(int v) { w_[v >> 6] &= ~(1ULL << (v & 63)); }

    int count() const {
        int c = 0;
        for (uint64_t x : w_) c += std::popcount(x);
        return c;
    }
    bool empty() const {
        for (uint64_t x : w_) if (x) return false;
        return true;
    }

    VertexSet& operator|=(const VertexSet& o) {
        for (std::size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i];
        return *this;
    }
    VertexSet& operator&=(const VertexSet& o) {
        for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
        return *this;
    }
    VertexSet& operator-=(const VertexSet& o) {
        for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= ~o.w_[i];
        return *this;
    }
    friend VertexSet operator|(VertexSet a, const VertexSet& b) { return a |= b; }
    friend VertexSet operator&(VertexSet a, const VertexSet& b) { return a &= b; }
    friend VertexSet operator-(VertexSet a, const VertexSet& b) { return a -= b; }

    VertexSet complement() const {
        VertexSet s(n_);
        for (std::size_t i = 0; i < w_.size(); ++i) s.w_[i] = ~w_[i];
        s.trim();
        return s;
    }

    bool operator==(const VertexSet& o) const { return n_ == o.n_ && w_ == o.w_; }
    bool operator!=(const VertexSet& o) const { return !(*this == o); }

    bool is_subset_of(const VertexSet& o) const {
        for (std::size_t i = 0; i < w_.size(); ++i)
            if (w_[i] & ~o.w_[i]) return false;
        return true;
    }
    bool intersects(const VertexSet& o) const {
        for (std::size_t i = 0; i < w_.size(); ++i)
            if (w_[i] & o.w_[i]) return true;
        return false;
    }

    // First set id >= from, or -1.
    int next(int from = 0) const {
        if (from >= n_) return -1;
        int word = from >> 6;
        uint64_t cur = w_[word] & (~0ULL << (from & 63));
        while (true) {
            if (cur) return (word << 6) + std::countr_zero(cur);
            if (++word >= static_cast<int>(w_.size())) return -1;
            cur = w_[word];
        }
    }

    std::vector<int> to_vector() const {
        std::vector<int> out;
        for (int v = next(0); v != -1; v = next(v + 1)) out.push_back(v);
        return out;
    }

    // Lexicographic by smallest differing id; the set containing it is smaller.
    bool operator<(const VertexSet& o) const {
        for (std::size_t i = 0; i < w_.size(); ++i) {
            if (w_[i] == o.w_[i]) continue;
            uint64_t diff = w_[i] ^ o.w_[i];
            uint64_t low = diff & (~diff + 1);
            return w_[i] & low;
        }
        return false;
    }

    std::size_t hash() const {
        std::size_t h = 1469598103934665603ULL;
        for (uint64_t x : w_) {
            h ^= x;
            h *= 1099511628211ULL;
        }
        return h;
    }
    struct Hash {
        std::size_t operator()(const VertexSet& s) const { return s.hash(); }
    };

private:
    void trim() {
        int r = n_ & 63;
        if (r && !w_.empty()) w_.back() &= (1ULL << r) - 1;
    }

    int n_ = 0;
    std::vector<uint64_t> w_;
};

}  // namespace tb
