#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace qrlab {

/// Finalizer of the splitmix64 generator (Steele, Lea & Flood 2014).
/// Bijective on 64-bit words with strong avalanche behaviour, which makes it
/// equally usable as a hash combiner for substream derivation.
inline constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Small counter-based pseudo-random stream (splitmix64 core).
///
/// Chosen over <random> engines because the whole reproducibility contract
/// of this project rests on bit-identical draws for a given seed, across
/// runs and across worker-thread counts.  std::uniform_real_distribution
/// and friends do not promise a portable draw sequence; this generator and
/// its derived substreams do.  Independent streams for logically independent
/// events (trial i / part p, generation g / organism o) are obtained by
/// hashing the master seed together with the event coordinates, never by
/// sharing one sequential stream between events.
class RandomStream {
public:
    explicit constexpr RandomStream(std::uint64_t seed) noexcept : state_(seed) {}

    /// Stream for one addressable event: hash-combines the master seed with
    /// the event's coordinate path. Identical (seed, path) pairs give
    /// identical streams; any change to either gives an unrelated stream.
    static constexpr RandomStream substream(std::uint64_t master_seed,
                                            std::initializer_list<std::uint64_t> path) noexcept {
        std::uint64_t h = mix64(master_seed);
        for (std::uint64_t component : path) {
            h = mix64(h ^ mix64(component + 0x9E3779B97F4A7C15ull));
        }
        return RandomStream(h);
    }

    constexpr std::uint64_t next_u64() noexcept {
        state_ += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) with the full 53 bits of mantissa.
    double next_unit() noexcept {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Exponential waiting time by inversion: -log(1-U)/rate, U ~ [0,1).
    double next_exponential(double rate) noexcept {
        return -std::log1p(-next_unit()) / rate;
    }

private:
    std::uint64_t state_;
};

}  // namespace qrlab
