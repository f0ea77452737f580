#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace ising {

/// Splittable counter-based generator. Every stream is identified by a
/// 64-bit key; drawing advances a counter and mixes (key, counter) through
/// a SplitMix64-style finalizer, so child streams derived via split() are
/// independent of the parent's position. Deterministic across runs.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : key_(mix(seed ^ 0x9e3779b97f4a7c15ull)) {}

    /// Child stream; stable function of (parent key, id), not of draw order.
    Rng split(std::uint64_t id) const {
        return Rng(from_key{}, mix(key_ ^ mix(id + 0x632be59bd9b4e019ull)));
    }

    std::uint64_t next_u64() {
        counter_ += 0x9e3779b97f4a7c15ull;
        return mix(key_ ^ counter_);
    }

    /// Uniform in [0, 1).
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform in [0, n).
    std::uint64_t next_below(std::uint64_t n) {
        // Modulo bias is negligible for n << 2^64 (desk-scale draws).
        return next_u64() % n;
    }

    /// Uniform in [lo, hi).
    double next_uniform(double lo, double hi) {
        return lo + (hi - lo) * next_double();
    }

    bool next_bool() { return (next_u64() & 1ull) != 0; }

    /// Standard normal via Box-Muller (no libstdc++ distribution involved,
    /// keeps byte-identical streams across platforms).
    double next_normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        do {
            u1 = next_double();
        } while (u1 <= 0.0);
        const double u2 = next_double();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

    double next_normal(double mean, double stddev) {
        return mean + stddev * next_normal();
    }

private:
    struct from_key {};
    Rng(from_key, std::uint64_t key) : key_(key) {}

    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ull;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::uint64_t key_ = 0;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace ising
