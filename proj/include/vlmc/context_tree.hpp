#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "vlmc/errors.hpp"

namespace vlmc {

using Symbol = std::uint8_t;

// A finite string of symbols, stored oldest -> newest. The last element is
// the most recent symbol of the past it describes.
using Word = std::vector<Symbol>;

inline Word word(std::initializer_list<int> symbols) {
    Word w;
    w.reserve(symbols.size());
    for (int s : symbols) w.push_back(static_cast<Symbol>(s));
    return w;
}

inline std::string to_string(const Word& w) {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) os << ',';
        os << static_cast<int>(w[i]);
    }
    os << ']';
    return os.str();
}

// s is a suffix of w: w ends with s. Every word is a suffix of itself.
inline bool is_suffix(const Word& s, const Word& w) {
    if (s.size() > w.size()) return false;
    return std::equal(s.rbegin(), s.rend(), w.rbegin());
}

inline bool is_proper_suffix(const Word& s, const Word& w) {
    return s.size() < w.size() && is_suffix(s, w);
}

// Largest proper suffix: drop the oldest symbol.
inline Word suf(const Word& w) {
    if (w.empty()) throw DomainError("suf: empty word has no proper suffix");
    return Word(w.begin() + 1, w.end());
}

// The k most recent symbols of w (all of w if k >= |w|).
inline Word tail(const Word& w, std::size_t k) {
    if (k >= w.size()) return w;
    return Word(w.end() - static_cast<std::ptrdiff_t>(k), w.end());
}

struct ContextEntry {
    Word context;               // oldest -> newest
    std::vector<double> probs;  // probs[a] = p(a | context)
};

// A finite-depth probabilistic context tree. Instances built through
// ContextTree::create are structurally valid: rows are strictly positive and
// renormalized, the context set is suffix-free, and the suffix trie is
// complete. Immutable after construction.
struct ContextTree {
    int alphabet_size = 2;
    std::vector<ContextEntry> contexts;

    int depth() const {
        std::size_t d = 0;
        for (const auto& c : contexts) d = std::max(d, c.context.size());
        return static_cast<int>(d);
    }

    double alpha() const {
        double a = 1.0;
        for (const auto& c : contexts)
            for (double p : c.probs) a = std::min(a, p);
        return contexts.empty() ? 0.0 : a;
    }

    std::set<Word> context_set() const {
        std::set<Word> s;
        for (const auto& c : contexts) s.insert(c.context);
        return s;
    }

    static ContextTree create(int alphabet_size,
                              std::vector<ContextEntry> contexts);
};

struct ValidationReport {
    bool suffix_free = false;
    bool complete = false;
    bool rows_ok = false;
    double alpha = 0.0;

    bool ok() const { return suffix_free && complete && rows_ok; }
};

namespace detail {

// Trie over words keyed from the most recent symbol backward.
struct SuffixTrie {
    struct Node {
        std::vector<int> children;  // child index per symbol, -1 if absent
        bool terminal = false;      // a word ends here
        explicit Node(int alphabet) : children(alphabet, -1) {}
    };

    int alphabet;
    std::vector<Node> nodes;

    template <typename WordRange>
    SuffixTrie(int alphabet_size, const WordRange& words) : alphabet(alphabet_size) {
        nodes.emplace_back(alphabet);
        for (const Word& w : words) {
            int cur = 0;
            for (auto it = w.rbegin(); it != w.rend(); ++it) {
                int& slot = nodes[cur].children[*it];
                if (slot < 0) {
                    slot = static_cast<int>(nodes.size());
                    nodes.emplace_back(alphabet);
                }
                cur = slot;
            }
            nodes[cur].terminal = true;
        }
    }

    bool is_internal(const Node& n) const {
        return std::any_of(n.children.begin(), n.children.end(),
                           [](int c) { return c >= 0; });
    }

    // Every internal node carries all alphabet children.
    bool complete() const {
        for (const auto& node : nodes) {
            if (!is_internal(node)) continue;
            for (int child : node.children)
                if (child < 0) return false;
        }
        return true;
    }
};

}  // namespace detail

// Computes the four structural checks without throwing; a failing report is
// the normal way to learn why a candidate tree was rejected.
inline ValidationReport validate(const ContextTree& tree) {
    ValidationReport rep;
    const int n = tree.alphabet_size;

    rep.rows_ok = n >= 2 && !tree.contexts.empty();
    double alpha = 1.0;
    bool any_entry = false;
    for (const auto& c : tree.contexts) {
        for (Symbol s : c.context)
            if (static_cast<int>(s) >= n) rep.rows_ok = false;
        if (static_cast<int>(c.probs.size()) != n) {
            rep.rows_ok = false;
            continue;
        }
        double sum = 0.0;
        for (double p : c.probs) {
            if (!(p > 0.0)) rep.rows_ok = false;
            sum += p;
            alpha = std::min(alpha, p);
            any_entry = true;
        }
        if (std::abs(sum - 1.0) > 1e-9) rep.rows_ok = false;
    }
    rep.alpha = any_entry ? alpha : 0.0;

    // Suffix-freeness; duplicate contexts are reported under the same flag.
    rep.suffix_free = true;
    for (std::size_t i = 0; i < tree.contexts.size() && rep.suffix_free; ++i) {
        for (std::size_t j = 0; j < tree.contexts.size(); ++j) {
            if (i == j) continue;
            const Word& a = tree.contexts[i].context;
            const Word& b = tree.contexts[j].context;
            if (a == b || is_proper_suffix(a, b)) {
                rep.suffix_free = false;
                break;
            }
        }
    }

    if (tree.contexts.empty()) {
        rep.complete = false;
        return rep;
    }
    bool symbols_in_range = true;
    for (const auto& c : tree.contexts)
        for (Symbol s : c.context)
            if (static_cast<int>(s) >= n) symbols_in_range = false;
    if (!symbols_in_range || n < 2) {
        rep.complete = false;
        return rep;
    }
    std::vector<Word> words;
    words.reserve(tree.contexts.size());
    for (const auto& c : tree.contexts) words.push_back(c.context);
    rep.complete = detail::SuffixTrie(n, words).complete();
    return rep;
}

inline ContextTree ContextTree::create(int alphabet_size,
                                       std::vector<ContextEntry> contexts) {
    ContextTree tree{alphabet_size, std::move(contexts)};
    ValidationReport rep = validate(tree);
    if (!rep.rows_ok)
        throw InvalidTree(
            "tree rejected: a kernel row is malformed (entries must be > 0 and "
            "sum to 1 within 1e-9, alphabet_size must be >= 2)");
    if (!rep.suffix_free)
        throw InvalidTree(
            "tree rejected: context set is not suffix-free (a context is a "
            "suffix of another)");
    if (!rep.complete)
        throw InvalidTree(
            "tree rejected: context trie is incomplete (an internal node is "
            "missing a child)");
    // Rows passed the 1e-9 tolerance; renormalize so downstream arithmetic
    // sees rows that sum to 1 exactly up to rounding.
    for (auto& c : tree.contexts) {
        double sum = 0.0;
        for (double p : c.probs) sum += p;
        for (double& p : c.probs) p /= sum;
    }
    std::sort(tree.contexts.begin(), tree.contexts.end(),
              [](const ContextEntry& a, const ContextEntry& b) {
                  if (a.context.size() != b.context.size())
                      return a.context.size() < b.context.size();
                  return a.context < b.context;
              });
    return tree;
}

// The unique context that is a suffix of `past`. Valid trees partition all
// sufficiently long pasts, so at most one context can match.
inline const ContextEntry& context_of(const ContextTree& tree, const Word& past) {
    for (const auto& c : tree.contexts)
        if (is_suffix(c.context, past)) return c;
    throw UndeterminedContext("context_of: past " + to_string(past) +
                              " is shorter than the matching branch");
}

inline const std::vector<double>& transition(const ContextTree& tree,
                                             const Word& past) {
    return context_of(tree, past).probs;
}

// Truncation at level K: strings of length <= K, plus the length-K suffix of
// every longer string. Works for context sets and estimator outputs alike.
inline std::set<Word> truncate(const std::set<Word>& strings, int K) {
    if (K < 1) throw DomainError("truncate: K must be >= 1");
    std::set<Word> out;
    for (const auto& w : strings) {
        if (static_cast<int>(w.size()) <= K)
            out.insert(w);
        else
            out.insert(tail(w, static_cast<std::size_t>(K)));
    }
    return out;
}

// Shape comparison only; kernels are deliberately ignored.
inline bool tree_equal(const std::set<Word>& a, const std::set<Word>& b) {
    return a == b;
}

}  // namespace vlmc
