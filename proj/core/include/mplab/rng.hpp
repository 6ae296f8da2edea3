#pragma once

#include <cstdint>
#include <utility>

namespace mplab::rng {

inline constexpr std::uint64_t golden_gamma = 0x9E3779B97F4A7C15ULL;

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t z);

// Seed of stream `index` under `master`: mix64(master ^ mix64(index + golden_gamma)).
// Stable across versions; replicas use derive_seed(derive_seed(master, N), replica).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

inline std::uint64_t replica_seed(std::uint64_t master, long N, long replica) {
    return derive_seed(derive_seed(master, static_cast<std::uint64_t>(N)),
                       static_cast<std::uint64_t>(replica));
}

// Counter-based SplitMix64: the i-th output is mix64(seed + (i + 1) * golden_gamma).
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += golden_gamma;
        return mix64(state_);
    }

    // Uniform on the open interval (0, 1) with 52 random bits.
    double uniform() { return to_unit(next()); }

    // Two independent standard normals (Box-Muller).
    std::pair<double, double> normal_pair();

    static double to_unit(std::uint64_t bits) {
        return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
    }

private:
    std::uint64_t state_;
};

}  // namespace mplab::rng
