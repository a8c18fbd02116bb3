#pragma once

// Deterministic labeled random streams.
//
// Every stochastic component draws from a RandomStream constructed from
// (seed, label). Distinct labels yield independent reproducible streams, so
// per-evaluation streams can be pre-split before work is handed to a thread
// pool: worker count and scheduling never change what any evaluation draws.
//
// No std::*_distribution is used anywhere; those are implementation-defined.
// Doubles come from raw 53-bit draws, gaussians from Box-Muller, bounded
// integers from a 128-bit multiply-shift. Identical (seed, label, call
// sequence) therefore reproduces identical values bit for bit.

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace evolab::core {

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

class RandomStream {
  public:
    RandomStream(std::uint64_t seed, std::string_view label)
        : seed_(seed), label_hash_(fnv1a64(label)) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed_),
                          static_cast<std::uint32_t>(seed_ >> 32),
                          static_cast<std::uint32_t>(label_hash_),
                          static_cast<std::uint32_t>(label_hash_ >> 32)};
        engine_.seed(seq);
    }

    // Child stream derived from this stream's identity; does not consume state.
    RandomStream substream(std::string_view label) const {
        RandomStream child(seed_, "");
        child.label_hash_ = mix(label_hash_, fnv1a64(label));
        std::seed_seq seq{static_cast<std::uint32_t>(child.seed_),
                          static_cast<std::uint32_t>(child.seed_ >> 32),
                          static_cast<std::uint32_t>(child.label_hash_),
                          static_cast<std::uint32_t>(child.label_hash_ >> 32)};
        child.engine_.seed(seq);
        child.has_spare_ = false;
        return child;
    }

    std::uint64_t bits() { return engine_(); }

    // Uniform on [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform on {0, ..., n-1} via multiply-shift; n must be > 0.
    std::uint64_t uniform_int(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(engine_()) * n) >> 64);
    }

    // Standard normal, Box-Muller with cached spare.
    double gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();  // log(0) guard
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    Eigen::VectorXd uniform_vector(Eigen::Index n, double lo, double hi) {
        Eigen::VectorXd v(n);
        for (Eigen::Index i = 0; i < n; ++i) v[i] = uniform(lo, hi);
        return v;
    }

    Eigen::VectorXd gaussian_vector(Eigen::Index n) {
        Eigen::VectorXd v(n);
        for (Eigen::Index i = 0; i < n; ++i) v[i] = gaussian();
        return v;
    }

    // Fisher-Yates; deterministic given the stream state.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(uniform_int(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    std::uint64_t seed() const { return seed_; }

  private:
    static std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
        // splitmix64 finalizer over the combined words
        std::uint64_t z = a ^ (b + 0x9e3779b97f4a7c15ull + (a << 6) + (a >> 2));
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::uint64_t seed_;
    std::uint64_t label_hash_;
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

// Convenience factory mirroring the common call shape rng_stream(seed, label).
inline RandomStream rng_stream(std::uint64_t seed, std::string_view label) {
    return RandomStream(seed, label);
}

}  // namespace evolab::core
