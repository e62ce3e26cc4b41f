#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace lrd {

/// splitmix64 finalizer; used both as a seed scrambler and as the
/// documented stream-derivation mix for replication seeding.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Hash-combine for deriving independent substreams: each key folds into the
/// running seed through splitmix64.  Replication streams are derived as
/// chain(seed, model_key, d_key, n, b) so cells can be recomputed in isolation.
inline std::uint64_t seed_chain(std::uint64_t h, std::uint64_t key) {
    return splitmix64(h ^ (key + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)));
}

/// Deterministic Gaussian source: mt19937_64 (bit-reproducible across
/// platforms) with an explicit Box-Muller transform, so draws do not depend
/// on the standard library's std::normal_distribution implementation.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(splitmix64(seed)) {}

    /// Uniform on (0,1), never returning an endpoint.
    double uniform() {
        const std::uint64_t bits = eng_() >> 11;  // 53 random bits
        return (static_cast<double>(bits) + 0.5) * (1.0 / 9007199254740992.0);
    }

    double normal() {
        const double u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace lrd
