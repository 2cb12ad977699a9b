#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>

namespace qdist {

/// splitmix64 mixing step. Used to derive statistically independent
/// sub-seeds from a (seed, stream) pair so that separate consumers of
/// randomness (trajectory noise, replay sampling, dropout, ...) never
/// share or race on a single engine.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Deterministic random stream.
///
/// Wraps std::mt19937_64 (whose raw output sequence is pinned by the
/// standard) but converts to doubles and bounded integers by hand:
/// std::uniform_real_distribution and friends are implementation-defined,
/// which would silently break cross-toolchain reproducibility.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Derive the engine seed for a named sub-stream of `seed`.
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
        return splitmix64(seed + 0x632be59bd9b4e019ULL * (stream + 1));
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) throw std::invalid_argument("Rng::below: n must be positive");
        return engine_() % n;
    }

    std::uint64_t raw() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

} // namespace qdist
