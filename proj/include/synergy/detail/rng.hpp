#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace synergy::detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(seed ^ splitmix64(stream + 1));
}

// Deterministic helpers on top of mt19937_64. The raw engine output is
// fully specified by the standard, so results are stable across
// standard libraries; std::uniform_*_distribution is not.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    // inclusive bounds
    int int_in(int lo, int hi) {
        return lo + int(next() % std::uint64_t(hi - lo + 1));
    }

    double real_in(double lo, double hi) {
        double unit = double(next() >> 11) * (1.0 / 9007199254740992.0);
        return lo + unit * (hi - lo);
    }

    bool chance(double p) { return real_in(0.0, 1.0) < p; }

    template <class T>
    const T& pick(const std::vector<T>& v) {
        return v[std::size_t(next() % v.size())];
    }

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i)
            std::swap(v[i - 1], v[std::size_t(next() % i)]);
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace synergy::detail
