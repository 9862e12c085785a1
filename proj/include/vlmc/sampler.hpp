#pragma once

#include <cstddef>
#include <iostream>
#include <vector>

#include "vlmc/oracle.hpp"
#include "vlmc/random.hpp"
#include "vlmc/sample.hpp"

namespace vlmc {

namespace detail {

// Exact init is used while the embedded state space stays desk-sized.
inline bool exact_init_feasible(const ContextTree& tree) {
    std::size_t s = 1;
    int order = std::max(tree.depth(), 1);
    for (int i = 0; i < order; ++i) {
        s *= static_cast<std::size_t>(tree.alphabet_size);
        if (s > 4096) return false;
    }
    return true;
}

}  // namespace detail

// Stationary sample of length n: the opening symbols are drawn from the
// exact stationary law of the embedded chain, the rest from the kernel.
// Deterministic given (tree, n, seed). Trees too deep for exact analysis
// fall back to a burn-in start and warn on stderr.
inline Sample sample_chain(const ContextTree& tree, std::size_t n,
                           const SeedSpec& seed) {
    if (n < 1) throw DomainError("sample_chain: n must be >= 1");
    Rng rng(seed);
    Sample out{tree.alphabet_size, {}};
    out.symbols.reserve(n);

    if (detail::exact_init_feasible(tree)) {
        Oracle oracle(tree);
        const int h = oracle.order();
        std::size_t state = rng.next_categorical(oracle.stationary());
        Word init = oracle.state_word(state);
        for (std::size_t i = 0; i < static_cast<std::size_t>(h) && out.n() < n; ++i)
            out.symbols.push_back(init[i]);
        while (out.n() < n) {
            const auto& row = oracle.state_row(state);
            auto a = static_cast<Symbol>(rng.next_categorical(row));
            out.symbols.push_back(a);
            state = oracle.shift_state(state, a);
        }
        return out;
    }

    std::cerr << "sample_chain: tree too deep for exact stationary start; "
                 "using a 10000-step burn-in\n";
    const std::size_t window = static_cast<std::size_t>(std::max(tree.depth(), 1));
    Word past(window, 0);
    for (std::size_t t = 0; t < 10000; ++t) {
        auto a = static_cast<Symbol>(rng.next_categorical(transition(tree, past)));
        past.erase(past.begin());
        past.push_back(a);
    }
    for (std::size_t t = 0; t < n; ++t) {
        auto a = static_cast<Symbol>(rng.next_categorical(transition(tree, past)));
        out.symbols.push_back(a);
        past.erase(past.begin());
        past.push_back(a);
    }
    return out;
}

}  // namespace vlmc
