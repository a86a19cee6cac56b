#pragma once

#include <cstdint>

namespace rsvol::kernels {

// Counter-based SplitMix64. The n-th output of the stream with seed s is
// mix64(s + (n+1)*kGamma), so any draw is random-access: a path's k-th
// normal pair needs no sequential state. That is what makes the engine's
// output independent of thread count and SIMD lane by construction.

inline constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

inline std::uint64_t mix64(std::uint64_t z)
{
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
}

/// n-th output (0-based) of the SplitMix64 stream seeded with `seed`.
inline std::uint64_t stream_at(std::uint64_t seed, std::uint64_t n)
{
    return mix64(seed + (n + 1) * kGamma);
}

/// Decorrelated per-path seed: the path_index-th output of a master stream.
inline std::uint64_t path_seed(std::uint64_t seed, std::uint64_t path_index)
{
    return stream_at(seed, path_index);
}

/// Maps 64 random bits to the open interval (0, 1), symmetric around 1/2.
inline double to_unit_open(std::uint64_t bits)
{
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

/// Sequential convenience wrapper over the counter-based stream.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t next() { return stream_at(seed_, n_++); }
    double next_unit() { return to_unit_open(next()); }

private:
    std::uint64_t seed_;
    std::uint64_t n_ = 0;
};

} // namespace rsvol::kernels
