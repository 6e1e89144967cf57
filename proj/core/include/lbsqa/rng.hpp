#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace lbsqa {

/// splitmix64 finalizer; the 64-bit mixing step used for all seed derivation.
inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline constexpr std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Folds one component into a seed chain.
inline constexpr std::uint64_t mix_seed(std::uint64_t h, std::uint64_t v) {
    return splitmix64(h ^ v);
}

/// Per-variant seed for the resampling grid. Fully determined by the variant
/// coordinates, so results do not depend on iteration or scheduling order.
/// rate_pct is quantized to 0.001 percentage points before mixing.
inline std::uint64_t derive_variant_seed(std::uint64_t master_seed, std::string_view user_id,
                                         std::int64_t day_index, double rate_pct, int repetition) {
    std::uint64_t h = splitmix64(master_seed);
    h = mix_seed(h, fnv1a64(user_id));
    h = mix_seed(h, static_cast<std::uint64_t>(day_index));
    h = mix_seed(h, static_cast<std::uint64_t>(std::llround(rate_pct * 1000.0)));
    h = mix_seed(h, static_cast<std::uint64_t>(repetition));
    return h;
}

/// Deterministic RNG wrapper. Bounded draws and the Gaussian are implemented
/// here (rejection sampling, Box-Muller) instead of <random> distributions,
/// whose output is not pinned down by the standard.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform integer in [0, bound). bound must be > 0.
    std::uint64_t uniform_below(std::uint64_t bound) {
        const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
        for (;;) {
            const std::uint64_t r = engine_();
            if (r >= threshold) return r % bound;
        }
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {  // inclusive bounds
        return lo + static_cast<std::int64_t>(uniform_below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    /// Standard normal via Box-Muller.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

    /// Normal truncated to [-max_sigmas, max_sigmas] by resampling.
    double truncated_normal(double max_sigmas) {
        for (;;) {
            const double z = normal();
            if (std::abs(z) <= max_sigmas) return z;
        }
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace lbsqa
