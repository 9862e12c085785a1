#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vlmc/context_tree.hpp"
#include "vlmc/random.hpp"
#include "vlmc/sample.hpp"

namespace vlmc {

enum class Regime { ZeroInflation, Process, Flip };

inline std::string to_string(Regime r) {
    switch (r) {
        case Regime::ZeroInflation: return "zero";
        case Regime::Process: return "process";
        case Regime::Flip: return "flip";
    }
    return "?";
}

inline Regime regime_from_string(const std::string& s) {
    if (s == "zero") return Regime::ZeroInflation;
    if (s == "process") return Regime::Process;
    if (s == "flip") return Regime::Flip;
    throw DomainError("unknown regime '" + s + "' (expected zero|process|flip)");
}

// Contamination description. The contaminant tree is required for the
// process regime only; zero-inflation and flip are binary-alphabet regimes.
struct NoiseSpec {
    Regime regime = Regime::ZeroInflation;
    double epsilon = 0.0;
    std::optional<ContextTree> contaminant;
    SeedSpec seed;
};

inline void check_noise_spec(const NoiseSpec& noise, int alphabet_size) {
    if (!(noise.epsilon >= 0.0 && noise.epsilon < 1.0))
        throw DomainError("epsilon must lie in [0,1)");
    switch (noise.regime) {
        case Regime::ZeroInflation:
        case Regime::Flip:
            if (alphabet_size != 2)
                throw AlphabetMismatch(to_string(noise.regime) +
                                       " contamination requires a binary alphabet");
            break;
        case Regime::Process:
            if (!noise.contaminant)
                throw MissingContaminant(
                    "process contamination requires a contaminant tree");
            if (noise.contaminant->alphabet_size != alphabet_size)
                throw AlphabetMismatch(
                    "contaminant tree alphabet differs from the chain alphabet");
            break;
    }
}

// The i.i.d. coin sequence: xi_t = 1 (keep the clean symbol) with
// probability 1 - epsilon.
inline std::vector<std::uint8_t> noise_mask(std::size_t n, double epsilon,
                                            const SeedSpec& seed) {
    if (n < 1) throw DomainError("noise_mask: n must be >= 1");
    if (!(epsilon >= 0.0 && epsilon < 1.0))
        throw DomainError("noise_mask: epsilon must lie in [0,1)");
    Rng rng(seed);
    std::vector<std::uint8_t> xi(n);
    for (std::size_t t = 0; t < n; ++t)
        xi[t] = rng.next_double() >= epsilon ? 1 : 0;
    return xi;
}

// Applies one regime at the positions where the mask is 0. Inputs are never
// mutated; the mask argument lets several regimes share one coin sequence.
inline Sample contaminate_with_mask(const Sample& x,
                                    const std::vector<std::uint8_t>& xi,
                                    Regime regime, const Sample* y = nullptr) {
    if (xi.size() != x.n())
        throw LengthMismatch("noise mask length differs from sample length");
    if (regime == Regime::Process) {
        if (!y) throw MissingContaminant("process regime requires a contaminant sample");
        if (y->alphabet_size != x.alphabet_size)
            throw AlphabetMismatch("contaminant sample alphabet differs from input");
        if (y->n() != x.n())
            throw LengthMismatch("contaminant sample length differs from input");
    } else {
        if (x.alphabet_size != 2)
            throw AlphabetMismatch(to_string(regime) +
                                   " contamination requires a binary alphabet");
        if (y) throw DomainError("contaminant sample is only meaningful for the process regime");
    }

    Sample z{x.alphabet_size, std::vector<Symbol>(x.n())};
    switch (regime) {
        case Regime::ZeroInflation:
            for (std::size_t t = 0; t < x.n(); ++t)
                z.symbols[t] = static_cast<Symbol>(x.symbols[t] * xi[t]);
            break;
        case Regime::Process:
            for (std::size_t t = 0; t < x.n(); ++t)
                z.symbols[t] = xi[t] ? x.symbols[t] : y->symbols[t];
            break;
        case Regime::Flip:
            for (std::size_t t = 0; t < x.n(); ++t)
                z.symbols[t] = static_cast<Symbol>((x.symbols[t] + (1 - xi[t])) % 2);
            break;
    }
    return z;
}

inline Sample contaminate(const Sample& x, const NoiseSpec& noise,
                          const Sample* y = nullptr) {
    if (!(noise.epsilon >= 0.0 && noise.epsilon < 1.0))
        throw DomainError("epsilon must lie in [0,1)");
    auto xi = noise_mask(x.n(), noise.epsilon, noise.seed);
    return contaminate_with_mask(x, xi, noise.regime, y);
}

}  // namespace vlmc
