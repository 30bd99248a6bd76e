#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace synergy::detail {

// Fixed-size bitset with the width chosen at construction. Used for
// graph footprints and subset-closure tables.
class DynBitset {
public:
    DynBitset() = default;
    explicit DynBitset(std::size_t bits) : bits_(bits), words_((bits + 63) / 64, 0) {}

    std::size_t size() const { return bits_; }

    bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
    void set(std::size_t i) { words_[i >> 6] |= std::uint64_t(1) << (i & 63); }

    DynBitset& operator|=(const DynBitset& other) {
        for (std::size_t w = 0; w < words_.size(); ++w) words_[w] |= other.words_[w];
        return *this;
    }

    DynBitset& operator&=(const DynBitset& other) {
        for (std::size_t w = 0; w < words_.size(); ++w) words_[w] &= other.words_[w];
        return *this;
    }

    static DynBitset intersection(const DynBitset& a, const DynBitset& b) {
        DynBitset out = a;
        out &= b;
        return out;
    }

    bool none() const {
        for (std::uint64_t w : words_)
            if (w) return false;
        return true;
    }

    std::size_t count() const {
        std::size_t n = 0;
        for (std::uint64_t w : words_) n += std::size_t(std::popcount(w));
        return n;
    }

    bool contains(const DynBitset& other) const {
        for (std::size_t w = 0; w < words_.size(); ++w)
            if ((other.words_[w] & ~words_[w]) != 0) return false;
        return true;
    }

    // Lowest index set in (a & b & ~c), or -1 when empty.
    static long first_in_and_not(const DynBitset& a, const DynBitset& b, const DynBitset& c) {
        for (std::size_t w = 0; w < a.words_.size(); ++w) {
            std::uint64_t word = a.words_[w] & b.words_[w] & ~c.words_[w];
            if (word) return long(w * 64 + std::size_t(std::countr_zero(word)));
        }
        return -1;
    }

    template <class F>
    void for_each(F f) const {
        for (std::size_t w = 0; w < words_.size(); ++w) {
            std::uint64_t word = words_[w];
            while (word) {
                std::size_t bit = std::size_t(std::countr_zero(word));
                f(w * 64 + bit);
                word &= word - 1;
            }
        }
    }

    bool operator==(const DynBitset&) const = default;

private:
    std::size_t bits_ = 0;
    std::vector<std::uint64_t> words_;
};

}  // namespace synergy::detail
