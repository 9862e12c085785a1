#pragma once

#include <cstddef>
#include <vector>

#include "vlmc/context_tree.hpp"

namespace vlmc {

// A finite observed sequence over {0..alphabet_size-1}.
struct Sample {
    int alphabet_size = 2;
    std::vector<Symbol> symbols;

    std::size_t n() const { return symbols.size(); }
};

}  // namespace vlmc
