#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace pv2vc {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Folds a seed with stream coordinates (phase, generation, index, ...) into a fresh seed.
inline std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> coords) {
    std::uint64_t h = splitmix64(seed);
    for (std::uint64_t c : coords) h = splitmix64(h ^ splitmix64(c + 0x632be59bd9b4e019ULL));
    return h;
}

// mt19937_64 with distribution helpers that do not depend on the standard
// library's distribution implementations, so draws match across platforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next() { return eng_(); }

    double unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return hi <= lo ? lo : lo + (hi - lo) * unit(); }

    // Uniform integer in [0, n); n > 0. Rejection keeps it unbiased.
    int below(int n) {
        const std::uint64_t range = static_cast<std::uint64_t>(n);
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % range;
        std::uint64_t x;
        do x = eng_();
        while (x >= limit);
        return static_cast<int>(x % range);
    }

    bool chance(double p) { return unit() < p; }

    template <class T>
    const T& pick(const std::vector<T>& items) {
        return items[static_cast<std::size_t>(below(static_cast<int>(items.size())))];
    }

    template <class T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i) std::swap(items[i - 1], items[below(static_cast<int>(i))]);
    }

    // Index drawn proportionally to non-negative weights with positive sum.
    int weighted(const std::vector<double>& w) {
        double total = 0.0;
        for (double x : w) total += x;
        double r = unit() * total;
        for (std::size_t k = 0; k < w.size(); ++k) {
            if (w[k] <= 0.0) continue;
            if (r < w[k]) return static_cast<int>(k);
            r -= w[k];
        }
        for (std::size_t k = w.size(); k-- > 0;)
            if (w[k] > 0.0) return static_cast<int>(k);
        return 0;
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace pv2vc
