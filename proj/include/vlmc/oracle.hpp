#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <set>
#include <vector>

#include "vlmc/contamination.hpp"
#include "vlmc/context_tree.hpp"

namespace vlmc {

// beta[k] is the worst relative change of the next-symbol law between two
// pasts that agree on the k most recent symbols; zero from the tree depth on.
// beta_star is the product of (1 - beta[k]); it is reported as exactly 0 when
// some beta[k] >= 1, in which case the deviation bounds that divide by it
// degenerate to +infinity.
struct ContinuityProfile {
    std::vector<double> beta;  // k = 0..order
    double beta_sum = 0.0;
    double beta_star = 1.0;
};

// Nodes of the level-k truncated tree whose conditional law differs from
// their largest proper suffix's law, with the minimal max-coordinate gap.
// An empty set has no gap (min over an empty set is undefined).
struct DivergenceReport {
    int k = 0;
    std::set<Word> divergent;
    std::optional<double> min_gap;
};

namespace detail {

inline std::size_t checked_state_count(int alphabet, int order) {
    std::size_t s = 1;
    for (int i = 0; i < order; ++i) {
        if (s > (std::size_t{1} << 22) / static_cast<std::size_t>(alphabet))
            throw DomainError("state space too large for exact analysis");
        s *= static_cast<std::size_t>(alphabet);
    }
    return s;
}

}  // namespace detail

// Exact quantities of a finite-depth tree via its order-h Markov embedding:
// states are the N^h words of length h = max(depth, 1), and the stationary
// law is found by power iteration. All results refer to the stationary chain.
class Oracle {
public:
    explicit Oracle(ContextTree tree)
        : tree_(std::move(tree)),
          order_(std::max(tree_.depth(), 1)),
          n_states_(detail::checked_state_count(tree_.alphabet_size, order_)) {
        build_embedding();
        compute_stationary();
    }

    const ContextTree& tree() const { return tree_; }
    int order() const { return order_; }
    std::size_t state_count() const { return n_states_; }

    // pi over the words of length h, indexed by state code (most recent
    // symbol = least significant digit).
    const std::vector<double>& stationary() const { return pi_; }

    Word state_word(std::size_t code) const {
        Word w(static_cast<std::size_t>(order_));
        for (int i = order_ - 1; i >= 0; --i) {
            w[static_cast<std::size_t>(i)] =
                static_cast<Symbol>(code % static_cast<std::size_t>(tree_.alphabet_size));
            code /= static_cast<std::size_t>(tree_.alphabet_size);
        }
        return w;
    }

    // Kernel row used from a given state.
    const std::vector<double>& state_row(std::size_t code) const {
        return tree_.contexts[static_cast<std::size_t>(row_of_state_[code])].probs;
    }

    std::size_t shift_state(std::size_t code, Symbol a) const {
        std::size_t base = n_states_ / static_cast<std::size_t>(tree_.alphabet_size);
        return (code % base) * static_cast<std::size_t>(tree_.alphabet_size) + a;
    }

    // Exact stationary cylinder probability of w.
    double marginal_prob(const Word& w) const {
        const std::size_t j = w.size();
        const auto N = static_cast<std::size_t>(tree_.alphabet_size);
        if (j == 0) return 1.0;
        if (j <= static_cast<std::size_t>(order_)) {
            std::size_t suffix_code = 0;
            for (Symbol s : w) suffix_code = suffix_code * N + s;
            std::size_t block = 1;
            for (std::size_t i = 0; i < j; ++i) block *= N;
            // Sum over all states whose last j symbols equal w.
            double mu = 0.0;
            for (std::size_t c = suffix_code; c < n_states_; c += block)
                mu += pi_[c];
            return mu;
        }
        // Head of length h is a state; extend one symbol at a time.
        std::size_t code = 0;
        for (int i = 0; i < order_; ++i) code = code * N + w[static_cast<std::size_t>(i)];
        double mu = pi_[code];
        for (std::size_t t = static_cast<std::size_t>(order_); t < j; ++t) {
            mu *= state_row(code)[w[t]];
            code = shift_state(code, w[t]);
        }
        return mu;
    }

    // P(X_0 = a | the |s| most recent symbols equal s), stationary-weighted
    // over all pasts ending in s. For a context this is its kernel row.
    std::vector<double> conditional_on_string(const Word& s) const {
        const auto N = static_cast<std::size_t>(tree_.alphabet_size);
        std::vector<double> out(N, 0.0);
        if (s.size() >= static_cast<std::size_t>(order_)) {
            if (marginal_prob(s) <= 0.0)
                throw ZeroMassString("conditional_on_string: " + to_string(s) +
                                     " has zero stationary mass");
            return transition(tree_, s);
        }
        std::size_t suffix_code = 0;
        for (Symbol v : s) suffix_code = suffix_code * N + v;
        std::size_t block = 1;
        for (std::size_t i = 0; i < s.size(); ++i) block *= N;
        double mass = 0.0;
        for (std::size_t c = suffix_code; c < n_states_; c += block) {
            mass += pi_[c];
            const auto& row = state_row(c);
            for (std::size_t a = 0; a < N; ++a) out[a] += pi_[c] * row[a];
        }
        if (!(mass > 0.0))
            throw ZeroMassString("conditional_on_string: " + to_string(s) +
                                 " has zero stationary mass");
        for (double& v : out) v /= mass;
        return out;
    }

    ContinuityProfile continuity_rates() const {
        const auto N = static_cast<std::size_t>(tree_.alphabet_size);
        ContinuityProfile prof;
        prof.beta.assign(static_cast<std::size_t>(order_) + 1, 0.0);
        for (int k = 0; k < order_; ++k) {
            std::size_t groups = 1;
            for (int i = 0; i < k; ++i) groups *= N;
            // For states sharing the k most recent symbols, the extreme
            // ratio per symbol realizes the supremum |1 - p/q|.
            std::vector<double> mx(groups * N, 0.0), mn(groups * N, 2.0);
            for (std::size_t c = 0; c < n_states_; ++c) {
                std::size_t g = c % groups;
                const auto& row = state_row(c);
                for (std::size_t a = 0; a < N; ++a) {
                    mx[g * N + a] = std::max(mx[g * N + a], row[a]);
                    mn[g * N + a] = std::min(mn[g * N + a], row[a]);
                }
            }
            double beta_k = 0.0;
            for (std::size_t i = 0; i < groups * N; ++i)
                beta_k = std::max(beta_k, mx[i] / mn[i] - 1.0);
            prof.beta[static_cast<std::size_t>(k)] = beta_k;
        }
        prof.beta_sum = 0.0;
        for (double b : prof.beta) prof.beta_sum += b;
        bool degenerate = false;
        double star = 1.0;
        for (double b : prof.beta) {
            if (b >= 1.0) degenerate = true;
            star *= 1.0 - b;
        }
        prof.beta_star = degenerate ? 0.0 : star;
        return prof;
    }

    DivergenceReport divergence(int k) const {
        if (k < 1) throw DomainError("divergence: k must be >= 1");
        DivergenceReport rep;
        rep.k = k;
        for (const Word& u : truncate(tree_.context_set(), k)) {
            if (u.empty()) continue;  // the root has no proper suffix
            auto pu = conditional_on_string(u);
            auto ps = conditional_on_string(suf(u));
            double gap = 0.0;
            for (std::size_t a = 0; a < pu.size(); ++a)
                gap = std::max(gap, std::abs(pu[a] - ps[a]));
            if (gap > 1e-12) {
                rep.divergent.insert(u);
                rep.min_gap = rep.min_gap ? std::min(*rep.min_gap, gap) : gap;
            }
        }
        return rep;
    }

    // Smallest estimation depth witnessing every non-context string shorter
    // than K: d = max over such u of min{k : some divergent node of level k
    // has u as proper suffix}.
    int witness_depth(int K) const {
        if (K < 1) throw DomainError("witness_depth: K must be >= 1");
        const int depth = tree_.depth();
        if (depth < 1)
            throw NoWitness("witness_depth: tree has no non-root context");
        const auto N = static_cast<std::size_t>(tree_.alphabet_size);
        std::vector<std::set<Word>> divergent_by_level;
        for (int k = 1; k <= depth; ++k)
            divergent_by_level.push_back(divergence(k).divergent);
        const auto contexts = tree_.context_set();

        int d = 0;
        std::size_t len_count = 1;
        for (int l = 0; l < K; ++l) {
            if (l > 0) {
                if (len_count > (std::size_t{1} << 22) / N)
                    throw DomainError("witness_depth: K too large to enumerate");
                len_count *= N;
            }
            for (std::size_t code = 0; code < len_count; ++code) {
                Word u(static_cast<std::size_t>(l));
                std::size_t c = code;
                for (int i = l - 1; i >= 0; --i) {
                    u[static_cast<std::size_t>(i)] = static_cast<Symbol>(c % N);
                    c /= N;
                }
                if (contexts.count(u)) continue;
                int found = 0;
                for (int k = 1; k <= depth && !found; ++k) {
                    for (const Word& w : divergent_by_level[static_cast<std::size_t>(k - 1)]) {
                        if (is_proper_suffix(u, w)) {
                            found = k;
                            break;
                        }
                    }
                }
                if (!found)
                    throw NoWitness("witness_depth: no divergent node refines " +
                                    to_string(u));
                d = std::max(d, found);
            }
        }
        return d;
    }

private:
    ContextTree tree_;
    int order_;
    std::size_t n_states_;
    std::vector<int> row_of_state_;
    std::vector<double> pi_;

    void build_embedding() {
        row_of_state_.resize(n_states_);
        for (std::size_t c = 0; c < n_states_; ++c) {
            const ContextEntry& e = context_of(tree_, state_word(c));
            row_of_state_[c] = static_cast<int>(&e - tree_.contexts.data());
        }
    }

    void compute_stationary() {
        const auto N = static_cast<std::size_t>(tree_.alphabet_size);
        pi_.assign(n_states_, 1.0 / static_cast<double>(n_states_));
        std::vector<double> next(n_states_);
        const std::size_t cap = 1000000;
        bool converged = false;
        for (std::size_t it = 0; it < cap; ++it) {
            std::fill(next.begin(), next.end(), 0.0);
            for (std::size_t c = 0; c < n_states_; ++c) {
                const auto& row = state_row(c);
                for (std::size_t a = 0; a < N; ++a)
                    next[shift_state(c, static_cast<Symbol>(a))] += pi_[c] * row[a];
            }
            double tv = 0.0;
            for (std::size_t c = 0; c < n_states_; ++c)
                tv += std::abs(next[c] - pi_[c]);
            tv *= 0.5;
            pi_.swap(next);
            if (tv <= 1e-12) {
                converged = true;
                break;
            }
        }
        if (!converged)
            throw NoConvergence("stationary: power iteration did not converge");
        double sum = 0.0;
        for (double p : pi_) sum += p;
        for (double& p : pi_) p /= sum;
        // Fixed-point residual must be at noise level.
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t c = 0; c < n_states_; ++c) {
            const auto& row = state_row(c);
            for (std::size_t a = 0; a < N; ++a)
                next[shift_state(c, static_cast<Symbol>(a))] += pi_[c] * row[a];
        }
        double residual = 0.0;
        for (std::size_t c = 0; c < n_states_; ++c)
            residual = std::max(residual, std::abs(next[c] - pi_[c]));
        if (residual >= 1e-10)
            throw NoConvergence("stationary: fixed-point residual too large");
    }
};

// Exact conditional law of the observed (contaminated) chain, obtained by a
// forward pass over the hidden clean state (and the contaminant state for
// the process regime), started from the exact stationary laws.
class NoisyOracle {
public:
    NoisyOracle(const Oracle& clean, NoiseSpec noise)
        : x_(clean), noise_(std::move(noise)) {
        check_noise_spec(noise_, x_.tree().alphabet_size);
        if (noise_.regime == Regime::Process) y_.emplace(*noise_.contaminant);
    }

    // P(Z_0 = a | Z past = omega), omega oldest -> newest.
    std::vector<double> conditional(const Word& omega) const {
        auto weights = forward(omega);
        const auto N = static_cast<std::size_t>(x_.tree().alphabet_size);
        std::vector<double> out(N, 0.0);
        if (noise_.regime == Regime::Process) {
            const std::size_t sy = y_->state_count();
            for (std::size_t s = 0; s < x_.state_count(); ++s)
                for (std::size_t r = 0; r < sy; ++r) {
                    double w = weights[s * sy + r];
                    if (w == 0.0) continue;
                    const auto& rx = x_.state_row(s);
                    const auto& ry = y_->state_row(r);
                    for (std::size_t x = 0; x < N; ++x)
                        for (std::size_t y = 0; y < N; ++y) {
                            double p = w * rx[x] * ry[y];
                            if (p == 0.0) continue;
                            for (std::size_t a = 0; a < N; ++a)
                                out[a] += p * emission(static_cast<Symbol>(a),
                                                       static_cast<Symbol>(x),
                                                       static_cast<Symbol>(y));
                        }
                }
        } else {
            for (std::size_t s = 0; s < x_.state_count(); ++s) {
                double w = weights[s];
                if (w == 0.0) continue;
                const auto& rx = x_.state_row(s);
                for (std::size_t x = 0; x < N; ++x) {
                    double p = w * rx[x];
                    for (std::size_t a = 0; a < N; ++a)
                        out[a] += p * emission(static_cast<Symbol>(a),
                                               static_cast<Symbol>(x), 0);
                }
            }
        }
        return out;
    }

    // Stationary probability of observing the past omega.
    double past_mass(const Word& omega) const {
        double mass = 1.0;
        forward(omega, &mass);
        return mass;
    }

    // Largest coordinate gap between contaminated and clean conditionals over
    // all charged pasts of length 1..kmax.
    double deviation_sup(int kmax) const {
        if (kmax < 1) throw DomainError("deviation_sup: kmax must be >= 1");
        const auto N = static_cast<std::size_t>(x_.tree().alphabet_size);
        double dev = 0.0;
        Word omega;
        sweep(omega, static_cast<std::size_t>(kmax), N, dev);
        return dev;
    }

    // Smallest conditional probability over all charged pasts of length
    // 0..kmax; the exact counterpart of the lower "floor" guarantees.
    double min_conditional(int kmax) const {
        if (kmax < 0) throw DomainError("min_conditional: kmax must be >= 0");
        const auto N = static_cast<std::size_t>(x_.tree().alphabet_size);
        double lo = 1.0;
        std::vector<Word> stack{Word{}};
        while (!stack.empty()) {
            Word w = stack.back();
            stack.pop_back();
            bool charged = true;
            try {
                auto pz = conditional(w);
                for (double v : pz) lo = std::min(lo, v);
            } catch (const ZeroMassPast&) {
                charged = false;
            }
            if (charged && w.size() < static_cast<std::size_t>(kmax)) {
                for (std::size_t a = 0; a < N; ++a) {
                    Word next = w;
                    next.push_back(static_cast<Symbol>(a));
                    stack.push_back(std::move(next));
                }
            }
        }
        return lo;
    }

private:
    Oracle x_;
    NoiseSpec noise_;
    std::optional<Oracle> y_;

    double emission(Symbol z, Symbol x, Symbol y) const {
        const double eps = noise_.epsilon;
        switch (noise_.regime) {
            case Regime::ZeroInflation:
                if (x == 0) return z == 0 ? 1.0 : 0.0;
                return z == 1 ? 1.0 - eps : eps;
            case Regime::Flip:
                return z == x ? 1.0 - eps : eps;
            case Regime::Process:
                return (1.0 - eps) * (z == x ? 1.0 : 0.0) +
                       eps * (z == y ? 1.0 : 0.0);
        }
        return 0.0;
    }

    // Filtered hidden-state weights after observing omega, normalized per
    // step. When total_mass is given it receives P(Z past = omega).
    std::vector<double> forward(const Word& omega,
                                double* total_mass = nullptr) const {
        const auto N = static_cast<std::size_t>(x_.tree().alphabet_size);
        const bool process = noise_.regime == Regime::Process;
        const std::size_t sy = process ? y_->state_count() : 1;
        const std::size_t states = x_.state_count() * sy;

        std::vector<double> w(states);
        if (process) {
            for (std::size_t s = 0; s < x_.state_count(); ++s)
                for (std::size_t r = 0; r < sy; ++r)
                    w[s * sy + r] = x_.stationary()[s] * y_->stationary()[r];
        } else {
            w = x_.stationary();
        }

        double mass = 1.0;
        std::vector<double> next(states);
        for (Symbol z : omega) {
            std::fill(next.begin(), next.end(), 0.0);
            double step = 0.0;
            if (process) {
                for (std::size_t s = 0; s < x_.state_count(); ++s)
                    for (std::size_t r = 0; r < sy; ++r) {
                        double ws = w[s * sy + r];
                        if (ws == 0.0) continue;
                        const auto& rx = x_.state_row(s);
                        const auto& ry = y_->state_row(r);
                        for (std::size_t x = 0; x < N; ++x)
                            for (std::size_t y = 0; y < N; ++y) {
                                double e = emission(z, static_cast<Symbol>(x),
                                                    static_cast<Symbol>(y));
                                if (e == 0.0) continue;
                                double p = ws * rx[x] * ry[y] * e;
                                next[x_.shift_state(s, static_cast<Symbol>(x)) * sy +
                                     y_->shift_state(r, static_cast<Symbol>(y))] += p;
                                step += p;
                            }
                    }
            } else {
                for (std::size_t s = 0; s < x_.state_count(); ++s) {
                    double ws = w[s];
                    if (ws == 0.0) continue;
                    const auto& rx = x_.state_row(s);
                    for (std::size_t x = 0; x < N; ++x) {
                        double e = emission(z, static_cast<Symbol>(x), 0);
                        if (e == 0.0) continue;
                        double p = ws * rx[x] * e;
                        next[x_.shift_state(s, static_cast<Symbol>(x))] += p;
                        step += p;
                    }
                }
            }
            if (!(step > 0.0))
                throw ZeroMassPast("past " + to_string(omega) +
                                   " has zero mass under the contaminated law");
            mass *= step;
            for (double& v : next) v /= step;
            w.swap(next);
        }
        if (total_mass) *total_mass = mass;
        return w;
    }

    void sweep(Word& omega, std::size_t kmax, std::size_t N, double& dev) const {
        if (!omega.empty()) {
            try {
                auto pz = conditional(omega);
                auto px = x_.conditional_on_string(omega);
                for (std::size_t a = 0; a < N; ++a)
                    dev = std::max(dev, std::abs(pz[a] - px[a]));
            } catch (const ZeroMassPast&) {
                return;  // uncharged past; extensions are uncharged too
            }
        }
        if (omega.size() == kmax) return;
        for (std::size_t a = 0; a < N; ++a) {
            omega.push_back(static_cast<Symbol>(a));
            sweep(omega, kmax, N, dev);
            omega.pop_back();
        }
    }
};

inline std::vector<double> noisy_conditional(const Oracle& clean,
                                             const NoiseSpec& noise,
                                             const Word& omega) {
    return NoisyOracle(clean, noise).conditional(omega);
}

inline double deviation_sup(const Oracle& clean, const NoiseSpec& noise,
                            int kmax) {
    return NoisyOracle(clean, noise).deviation_sup(kmax);
}

}  // namespace vlmc
