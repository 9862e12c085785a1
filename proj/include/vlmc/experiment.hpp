#pragma once

#include <atomic>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "vlmc/bounds.hpp"
#include "vlmc/contamination.hpp"
#include "vlmc/estimator.hpp"
#include "vlmc/io.hpp"
#include "vlmc/oracle.hpp"
#include "vlmc/sampler.hpp"

namespace vlmc {

// One recovery experiment: simulate, contaminate, estimate, compare the
// truncated estimate with the truncated truth, over a grid of (eps, n).
struct ExperimentConfig {
    ContextTree tree;
    std::optional<ContextTree> contaminant;
    Regime regime = Regime::ZeroInflation;
    std::vector<double> eps_grid;
    std::vector<std::size_t> n_grid;
    int trials = 1;
    std::optional<double> delta;  // empty = auto: midpoint of the window
    std::optional<int> d;         // empty = auto: witness depth
    int K = 1;
    std::uint64_t master_seed = 0;
    int workers = 1;
};

struct RecoveryRow {
    Regime regime;
    double eps = 0.0;
    std::size_t n = 0;
    int trials = 0;
    int recovered = 0;
    double rate = 0.0;
};

namespace detail {

// Streams 3t, 3t+1 and 3t+2 drive the clean chain, the coin mask and the
// contaminant chain of trial t; every (eps, n) cell reuses them, so the
// schedule is deterministic no matter how trials land on workers.
struct TrialSeeds {
    SeedSpec chain, mask, contaminant;
};

inline TrialSeeds trial_seeds(std::uint64_t master, int trial) {
    auto t = static_cast<std::uint64_t>(trial);
    return {derive_stream(master, 3 * t), derive_stream(master, 3 * t + 1),
            derive_stream(master, 3 * t + 2)};
}

template <typename Fn>
inline void parallel_trials(int trials, int workers, Fn&& body) {
    workers = std::max(1, workers);
    if (workers == 1) {
        for (int t = 0; t < trials; ++t) body(t);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    auto run = [&] {
        for (int t = next.fetch_add(1); t < trials; t = next.fetch_add(1)) body(t);
    };
    for (int i = 0; i < workers; ++i) pool.emplace_back(run);
    for (auto& th : pool) th.join();
}

}  // namespace detail

// Resolved estimation parameters for a config whose true tree is known.
inline EstimationConfig resolve_estimation(const Oracle& oracle,
                                           const std::optional<double>& delta,
                                           const std::optional<int>& d, int K) {
    EstimationConfig cfg;
    cfg.K = K;
    cfg.d = d ? *d : oracle.witness_depth(K);
    if (delta) {
        cfg.delta = *delta;
    } else {
        auto div = oracle.divergence(cfg.d);
        if (!div.min_gap)
            throw DomainError(
                "auto delta: divergence gap undefined at the chosen depth");
        cfg.delta = *div.min_gap / 2.0;  // midpoint of (c1*eps, D_d - c1*eps)
    }
    return cfg;
}

inline std::vector<RecoveryRow> recover_rate(const ExperimentConfig& config) {
    if (config.trials < 1) throw DomainError("recover-rate: trials must be >= 1");
    if (config.eps_grid.empty() || config.n_grid.empty())
        throw DomainError("recover-rate: eps and n grids must be nonempty");
    if (config.regime == Regime::Process && !config.contaminant)
        throw MissingContaminant("recover-rate: process regime needs a contaminant tree");

    Oracle oracle(config.tree);
    EstimationConfig est_cfg =
        resolve_estimation(oracle, config.delta, config.d, config.K);
    const std::set<Word> truth = truncate(config.tree.context_set(), config.K);

    std::vector<RecoveryRow> rows;
    for (double eps : config.eps_grid) {
        if (!(eps >= 0.0 && eps < 1.0))
            throw DomainError("recover-rate: eps must lie in [0,1)");
        for (std::size_t n : config.n_grid) {
            std::vector<std::uint8_t> ok(static_cast<std::size_t>(config.trials), 0);
            detail::parallel_trials(config.trials, config.workers, [&](int t) {
                auto seeds = detail::trial_seeds(config.master_seed, t);
                Sample x = sample_chain(config.tree, n, seeds.chain);
                auto xi = noise_mask(n, eps, seeds.mask);
                Sample z;
                if (config.regime == Regime::Process) {
                    Sample y = sample_chain(*config.contaminant, n, seeds.contaminant);
                    z = contaminate_with_mask(x, xi, config.regime, &y);
                } else {
                    z = contaminate_with_mask(x, xi, config.regime);
                }
                EstimatedTree est = estimate_tree(z, est_cfg);
                ok[static_cast<std::size_t>(t)] =
                    tree_equal(truncate(est.strings, config.K), truth) ? 1 : 0;
            });
            RecoveryRow row;
            row.regime = config.regime;
            row.eps = eps;
            row.n = n;
            row.trials = config.trials;
            for (auto v : ok) row.recovered += v;
            row.rate = static_cast<double>(row.recovered) /
                       static_cast<double>(config.trials);
            rows.push_back(row);
        }
    }
    return rows;
}

inline std::string recovery_csv(const std::vector<RecoveryRow>& rows) {
    std::ostringstream out;
    out << "regime,eps,n,trials,recovered,rate\n";
    for (const auto& r : rows)
        out << to_string(r.regime) << ',' << format_17g(r.eps) << ',' << r.n << ','
            << r.trials << ',' << r.recovered << ',' << format_17g(r.rate) << '\n';
    return out.str();
}

// Exact deviation sweep against the matching closed-form bound.
struct OracleCheckRow {
    Regime regime;
    double eps = 0.0;
    int kmax = 0;
    double deviation = 0.0;
    double bound = 0.0;
    bool pass = false;
};

inline OracleCheckRow oracle_check(const Oracle& oracle, Regime regime,
                                   double eps, int kmax,
                                   const std::optional<ContextTree>& contaminant) {
    NoiseSpec noise;
    noise.regime = regime;
    noise.epsilon = eps;
    noise.contaminant = contaminant;
    NoisyOracle noisy(oracle, noise);

    OracleCheckRow row;
    row.regime = regime;
    row.eps = eps;
    row.kmax = kmax;
    row.deviation = noisy.deviation_sup(kmax);

    const auto prof = oracle.continuity_rates();
    const double alpha = oracle.tree().alpha();
    const double ab = alpha * prof.beta_star;
    switch (regime) {
        case Regime::ZeroInflation:
            row.bound = zero_inflation_bound(eps, alpha, prof.beta_sum, prof.beta_star);
            break;
        case Regime::Flip:
            row.bound = flip_bound(eps, alpha, prof.beta_sum, prof.beta_star);
            break;
        case Regime::Process: {
            const double alpha_y = contaminant ? contaminant->alpha() : alpha;
            row.bound = process_bound(eps, oracle.tree().alphabet_size,
                                      prof.beta_sum, std::min(ab, alpha_y));
            break;
        }
    }
    row.pass = row.deviation <= row.bound;
    return row;
}

inline json oracle_check_to_json(const std::vector<OracleCheckRow>& rows) {
    json arr = json::array();
    for (const auto& r : rows) {
        json j;
        j["regime"] = to_string(r.regime);
        j["eps"] = json_number(r.eps);
        j["kmax"] = r.kmax;
        j["deviation"] = json_number(r.deviation);
        j["bound"] = json_number(r.bound);
        j["pass"] = r.pass;
        arr.push_back(std::move(j));
    }
    return arr;
}

}  // namespace vlmc
