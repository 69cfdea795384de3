#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace pseudoscore {

/// 64-bit FNV-1a over a byte string. Used for cache keys and seed derivation.
constexpr std::uint64_t fnv1a(std::string_view s,
                              std::uint64_t h = 14695981039346656037ull) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

/// Finalizer from splitmix64; mixes a 64-bit value thoroughly.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// Derives an independent stream seed from a base seed, a tag and up to two
/// indices. Stable across runs and thread counts.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::string_view tag,
                                    std::uint64_t a = 0, std::uint64_t b = 0) {
    std::uint64_t h = fnv1a(tag);
    h = mix64(h ^ mix64(base));
    h = mix64(h ^ mix64(a + 0x517cc1b727220a95ull));
    h = mix64(h ^ mix64(b + 0x2545f4914f6cdd1dull));
    return h;
}

/// mt19937_64 with explicit draw helpers. The helpers avoid
/// std::*_distribution so that draws are identical for a given seed no matter
/// which standard library the project is built against.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1).
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform integer in [lo, hi], inclusive. Requires lo <= hi.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        if (span == 0) return static_cast<std::int64_t>(next_u64());  // full range
        // Rejection sampling to remove modulo bias.
        const std::uint64_t limit = std::uint64_t(-1) - std::uint64_t(-1) % span;
        std::uint64_t r;
        do {
            r = next_u64();
        } while (r >= limit);
        return lo + static_cast<std::int64_t>(r % span);
    }

    bool bernoulli(double p) { return uniform01() < p; }

    /// Standard normal via Marsaglia polar method.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = uniform(-1.0, 1.0);
            v = uniform(-1.0, 1.0);
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        have_spare_ = true;
        return u * m;
    }

    /// Poisson draw, Knuth's method; fine for the small means used here.
    int poisson(double mean) {
        const double limit = std::exp(-mean);
        int k = 0;
        double p = 1.0;
        do {
            ++k;
            p *= uniform01();
        } while (p > limit);
        return k - 1;
    }

    /// Index draw from an unnormalized cumulative weight vector.
    int categorical_from_cumulative(const std::vector<double>& cum) {
        const double x = uniform01() * cum.back();
        auto it = std::lower_bound(cum.begin(), cum.end(), x);
        if (it == cum.end()) --it;
        return static_cast<int>(it - cum.begin());
    }

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const auto j =
                static_cast<std::size_t>(uniform_int(0, static_cast<std::int64_t>(i) - 1));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace pseudoscore
