#pragma once

#include <cstdint>
#include <set>
#include <vector>

#include "vlmc/context_tree.hpp"
#include "vlmc/sample.hpp"

namespace vlmc {

// Output of the context-tree estimator: a plain set of strings. It is not
// guaranteed to be a valid context tree; see is_context_tree.
struct EstimatedTree {
    int alphabet_size = 2;
    std::set<Word> strings;
};

struct EstimationConfig {
    double delta = 0.0;  // significance threshold on kernel gaps
    int d = 1;           // maximum candidate length
    int K = 1;           // truncation level used when comparing to a truth
};

// Number of occurrences of w as a consecutive block of the sample.
inline std::uint64_t count(const Sample& sample, const Word& w) {
    const std::size_t n = sample.n();
    const std::size_t l = w.size();
    if (l > n) return 0;
    std::uint64_t c = 0;
    for (std::size_t t = 0; t + l <= n; ++t) {
        bool match = true;
        for (std::size_t i = 0; i < l && match; ++i)
            match = sample.symbols[t + i] == w[i];
        c += match;
    }
    return c;
}

// Occurrence counts of every string up to a fixed length, dense-coded per
// length (most recent symbol = least significant digit). One rolling pass
// per length.
class CountTable {
public:
    CountTable(const Sample& sample, int max_len)
        : alphabet_(sample.alphabet_size), max_len_(max_len), n_(sample.n()) {
        if (max_len < 1) throw DomainError("CountTable: max_len must be >= 1");
        pow_.assign(static_cast<std::size_t>(max_len) + 1, 1);
        for (int l = 1; l <= max_len; ++l) {
            if (pow_[static_cast<std::size_t>(l - 1)] >
                (std::size_t{1} << 24) / static_cast<std::size_t>(alphabet_))
                throw DomainError("CountTable: alphabet^max_len too large");
            pow_[static_cast<std::size_t>(l)] =
                pow_[static_cast<std::size_t>(l - 1)] * static_cast<std::size_t>(alphabet_);
        }
        counts_.resize(static_cast<std::size_t>(max_len) + 1);
        for (int l = 1; l <= max_len; ++l) {
            auto& table = counts_[static_cast<std::size_t>(l)];
            table.assign(pow_[static_cast<std::size_t>(l)], 0);
            if (static_cast<std::size_t>(l) > n_) continue;
            std::size_t code = 0;
            for (std::size_t t = 0; t < n_; ++t) {
                code = (code % pow_[static_cast<std::size_t>(l - 1)]) *
                           static_cast<std::size_t>(alphabet_) +
                       sample.symbols[t];
                if (t + 1 >= static_cast<std::size_t>(l)) ++table[code];
            }
        }
    }

    int alphabet_size() const { return alphabet_; }
    int max_len() const { return max_len_; }
    std::size_t n() const { return n_; }
    std::size_t code_count(int len) const { return pow_[static_cast<std::size_t>(len)]; }

    // N_n(w) for |w| <= max_len; the empty string occurs n+1 times.
    std::uint64_t occurrences(int len, std::size_t code) const {
        if (len == 0) return n_ + 1;
        if (len < 0 || len > max_len_)
            throw DomainError("CountTable: length outside the materialized range");
        return counts_[static_cast<std::size_t>(len)][code];
    }

    std::uint64_t occurrences(const Word& w) const {
        return occurrences(static_cast<int>(w.size()), code_of(w));
    }

    std::size_t code_of(const Word& w) const {
        std::size_t code = 0;
        for (Symbol s : w) code = code * static_cast<std::size_t>(alphabet_) + s;
        return code;
    }

    Word word_of(int len, std::size_t code) const {
        Word w(static_cast<std::size_t>(len));
        for (int i = len - 1; i >= 0; --i) {
            w[static_cast<std::size_t>(i)] =
                static_cast<Symbol>(code % static_cast<std::size_t>(alphabet_));
            code /= static_cast<std::size_t>(alphabet_);
        }
        return w;
    }

    // Smoothed empirical kernel (add-one over follower counts); defined for
    // every string, uniform when the string was never followed by anything.
    std::vector<double> empirical_kernel(int len, std::size_t code) const {
        if (len + 1 > max_len_)
            throw DomainError("CountTable: kernel needs counts one longer than the string");
        const auto N = static_cast<std::size_t>(alphabet_);
        std::vector<std::uint64_t> follow(N);
        std::uint64_t total = 0;
        for (std::size_t a = 0; a < N; ++a) {
            follow[a] = occurrences(len + 1, code * N + a);
            total += follow[a];
        }
        std::vector<double> p(N);
        for (std::size_t a = 0; a < N; ++a)
            p[a] = static_cast<double>(follow[a] + 1) /
                   static_cast<double>(total + N);
        return p;
    }

    std::vector<double> empirical_kernel(const Word& w) const {
        return empirical_kernel(static_cast<int>(w.size()), code_of(w));
    }

    // Largest per-symbol gap between the kernels of w and its largest proper
    // suffix (for |w| = 1 the suffix is the empty string).
    double kernel_gap(int len, std::size_t code) const {
        if (len < 1) throw DomainError("kernel_gap: needs a nonempty string");
        auto pw = empirical_kernel(len, code);
        auto ps = empirical_kernel(len - 1, code % pow_[static_cast<std::size_t>(len - 1)]);
        double gap = 0.0;
        for (std::size_t a = 0; a < pw.size(); ++a)
            gap = std::max(gap, std::abs(pw[a] - ps[a]));
        return gap;
    }

    double kernel_gap(const Word& w) const {
        return kernel_gap(static_cast<int>(w.size()), code_of(w));
    }

private:
    int alphabet_;
    int max_len_;
    std::size_t n_;
    std::vector<std::size_t> pow_;
    std::vector<std::vector<std::uint32_t>> counts_;
};

// Convenience single-string forms of the table queries.
inline std::vector<double> empirical_kernel(const Sample& sample, const Word& w) {
    return CountTable(sample, static_cast<int>(w.size()) + 1).empirical_kernel(w);
}

inline double kernel_gap(const Sample& sample, const Word& w) {
    return CountTable(sample, static_cast<int>(w.size()) + 1).kernel_gap(w);
}

// The context-tree estimator: keeps every string w with 1 <= |w| <= d whose
// largest proper suffix is significantly refined by some one-symbol older
// extension, while no older extension of w itself up to length d is
// significant. Candidates run over all strings, not only observed ones.
inline EstimatedTree estimate_tree(const Sample& sample, const EstimationConfig& cfg) {
    if (!(cfg.delta > 0.0)) throw DomainError("estimate_tree: delta must be > 0");
    if (cfg.d < 1) throw DomainError("estimate_tree: d must be >= 1");
    if (static_cast<std::size_t>(cfg.d) >= sample.n())
        throw DomainError("estimate_tree: requires d < n");

    const auto N = static_cast<std::size_t>(sample.alphabet_size);
    CountTable table(sample, cfg.d + 1);

    // All gaps once; the selection conditions are lookups.
    std::vector<std::vector<double>> gap(static_cast<std::size_t>(cfg.d) + 1);
    for (int l = 1; l <= cfg.d; ++l) {
        gap[static_cast<std::size_t>(l)].resize(table.code_count(l));
        for (std::size_t code = 0; code < table.code_count(l); ++code)
            gap[static_cast<std::size_t>(l)][code] = table.kernel_gap(l, code);
    }

    EstimatedTree est{sample.alphabet_size, {}};
    for (int l = 1; l <= cfg.d; ++l) {
        std::size_t suffix_block = table.code_count(l - 1);
        for (std::size_t code = 0; code < table.code_count(l); ++code) {
            std::size_t suffix_code = code % suffix_block;
            bool suffix_refined = false;
            for (std::size_t a = 0; a < N && !suffix_refined; ++a)
                suffix_refined =
                    gap[static_cast<std::size_t>(l)][a * suffix_block + suffix_code] >
                    cfg.delta;
            if (!suffix_refined) continue;

            bool self_stable = true;
            std::size_t ext_block = 1;
            for (int m = 1; m <= cfg.d - l && self_stable; ++m) {
                ext_block *= N;
                std::size_t own_block = table.code_count(l);
                for (std::size_t u = 0; u < ext_block && self_stable; ++u)
                    self_stable =
                        gap[static_cast<std::size_t>(l + m)][u * own_block + code] <=
                        cfg.delta;
            }
            if (self_stable) est.strings.insert(table.word_of(l, code));
        }
    }
    return est;
}

// Structural diagnostic: the output is suffix-free and trie-complete.
inline bool is_context_tree(const EstimatedTree& est) {
    if (est.strings.empty()) return false;
    for (const Word& a : est.strings)
        for (const Word& b : est.strings)
            if (is_proper_suffix(a, b)) return false;
    return detail::SuffixTrie(est.alphabet_size, est.strings).complete();
}

}  // namespace vlmc
