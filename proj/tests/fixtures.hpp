#pragma once

#include "vlmc/context_tree.hpp"

namespace fixtures {

using vlmc::ContextTree;
using vlmc::word;

// Depth-2 binary tree with sharp kernel contrasts; the workhorse fixture.
// Exact stationary law over (prev, last): pi(00)=9/22, pi(01)=3/22,
// pi(10)=3/22, pi(11)=7/22, hence p(.|"0") = [3/4, 1/4] and the marginal
// next-symbol law is [6/11, 5/11].
inline ContextTree sharp_tree() {
    return ContextTree::create(2, {{word({1}), {0.3, 0.7}},
                                   {word({1, 0}), {0.6, 0.4}},
                                   {word({0, 0}), {0.8, 0.2}}});
}

// Depth-2 binary tree whose kernel ratios all stay below 2, so the
// continuity product stays positive and every bound is finite.
inline ContextTree smooth_tree() {
    return ContextTree::create(2, {{word({1}), {0.40, 0.60}},
                                   {word({1, 0}), {0.55, 0.45}},
                                   {word({0, 0}), {0.65, 0.35}}});
}

// Root-only tree: i.i.d. symbols with P(1) = p_one.
inline ContextTree coin_tree(double p_one = 0.5) {
    return ContextTree::create(2, {{word({}), {1.0 - p_one, p_one}}});
}

// Depth-1 tree whose two rows coincide: memoryless in disguise (beta = 0,
// every divergence set empty).
inline ContextTree flat_depth1_tree() {
    return ContextTree::create(2, {{word({0}), {0.5, 0.5}},
                                   {word({1}), {0.5, 0.5}}});
}

// Binary comb of the given depth: contexts 1, 10, 100, ..., 1 0^(depth-1)
// and 0^depth. Depth 13 pushes the sampler onto its burn-in fallback.
inline ContextTree comb_tree(int depth, double p_one = 0.5) {
    std::vector<vlmc::ContextEntry> entries;
    vlmc::Word w{1};
    for (int i = 0; i < depth; ++i) {
        entries.push_back({w, {1.0 - p_one, p_one}});
        w.push_back(0);
    }
    entries.push_back({vlmc::Word(static_cast<std::size_t>(depth), 0),
                       {1.0 - p_one, p_one}});
    return ContextTree::create(2, std::move(entries));
}

}  // namespace fixtures
