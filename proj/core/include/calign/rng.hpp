#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace calign {

/// Deterministic random stream derived from a single 64-bit seed.
///
/// Every consumer in the library derives its own stream by name, so adding a
/// new consumer never shifts the numbers another one sees. The generator is
/// splitmix64; normal deviates come from Box-Muller with a cached spare.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    /// Derive an independent stream for a named consumer.
    static Rng stream(std::uint64_t seed, std::string_view consumer) {
        std::uint64_t h = 0xcbf29ce484222325ull; // FNV-1a
        for (char c : consumer) {
            h ^= static_cast<std::uint64_t>(static_cast<unsigned char>(c));
            h *= 0x100000001b3ull;
        }
        return Rng(seed ^ h);
    }

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1).
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

    /// Standard normal deviate.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace calign
