#ifndef NARXSEL_RANDOM_HPP
#define NARXSEL_RANDOM_HPP

/** @file
 * Seeded random streams with platform-stable variate generation.
 *
 * std::mt19937_64 is bit-exact across standard libraries, but the std::
 * distributions are not, so every variate used by the optimizers and the
 * data synthesis is derived here from raw 64-bit engine output.
 */

#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace narxsel
{

/// SplitMix64 finalizer; used to derive independent stream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// 64-bit FNV-1a hash of a byte string; stable across platforms.
constexpr std::uint64_t fnv1a64(std::string_view text) noexcept
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : text) {
        h ^= static_cast<std::uint8_t>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Combine a base seed with a salt into a new, well-mixed seed.
constexpr std::uint64_t mix_seed(std::uint64_t base, std::uint64_t salt) noexcept
{
    return splitmix64(splitmix64(base) ^ salt);
}

/**
 * A random stream.  Satisfies UniformRandomBitGenerator so it can be handed
 * to std algorithms, but callers inside the library use the member
 * variates, which are defined purely in terms of engine output.
 */
class Rng
{
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    static constexpr result_type min() { return std::mt19937_64::min(); }
    static constexpr result_type max() { return std::mt19937_64::max(); }
    result_type operator()() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform()
    {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform on [lo, hi].
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Unbiased integer on [0, n); n must be positive.
    std::uint64_t index(std::uint64_t n)
    {
        const std::uint64_t limit = max() - max() % n;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % n;
    }

    bool bernoulli(double p) { return uniform() < p; }

    /// Standard normal via Box-Muller; the second variate is cached.
    double normal()
    {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

    /// Fisher-Yates permutation of 0..n-1.
    std::vector<std::size_t> permutation(std::size_t n)
    {
        std::vector<std::size_t> p(n);
        std::iota(p.begin(), p.end(), std::size_t{0});
        for (std::size_t i = n; i > 1; --i) {
            const auto j = static_cast<std::size_t>(index(i));
            std::swap(p[i - 1], p[j]);
        }
        return p;
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace narxsel

#endif
