#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "vlmc/errors.hpp"

namespace vlmc {

// Addresses one member of a family of independent random streams. Distinct
// stream indices under the same master seed give statistically independent
// streams; the pair fully determines the stream.
struct SeedSpec {
    std::uint64_t master_seed = 0;
    std::uint64_t stream_index = 0;

    friend bool operator==(const SeedSpec&, const SeedSpec&) = default;
};

inline SeedSpec derive_stream(std::uint64_t master_seed, std::uint64_t index) {
    return SeedSpec{master_seed, index};
}

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace detail

// Deterministic stream generator. The engine is std::mt19937_64 (its output
// sequence is pinned by the standard); variate mappings are hand-rolled so
// results do not depend on the standard library's distribution
// implementations.
class Rng {
public:
    explicit Rng(const SeedSpec& seed) {
        std::uint64_t s = seed.master_seed;
        std::uint64_t a = detail::splitmix64(s);
        s ^= 0xD1B54A32D192ED03ull * (seed.stream_index + 1);
        std::uint64_t b = detail::splitmix64(s);
        engine_.seed(a ^ (b << 1) ^ seed.stream_index);
    }

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // Index drawn from an unnormalized weight vector by CDF walk.
    std::size_t next_categorical(const std::vector<double>& weights) {
        double total = 0.0;
        for (double w : weights) total += w;
        if (!(total > 0.0))
            throw DomainError("next_categorical: weights must have positive sum");
        double u = next_double() * total;
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
            acc += weights[i];
            if (u < acc) return i;
        }
        return weights.empty() ? 0 : weights.size() - 1;
    }

    bool next_bernoulli(double p_true) { return next_double() < p_true; }

private:
    std::mt19937_64 engine_;
};

}  // namespace vlmc
