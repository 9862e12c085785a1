#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "vlmc/oracle.hpp"

namespace vlmc {

namespace detail {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// numerator / min(1, denom_arg), with the two degenerate directions fixed:
// a zero numerator wins over a vanishing denominator, and a nonpositive
// denominator makes the bound vacuous (+inf) rather than signed garbage.
inline double deviation_bracket(double numerator, double denom_arg) {
    if (numerator == 0.0) return 0.0;
    double denom = std::min(1.0, denom_arg);
    if (denom <= 0.0) return kInf;
    return numerator / denom;
}

inline void check_profile_args(double eps, double alpha, double beta,
                               double beta_star) {
    if (!(eps >= 0.0 && eps < 1.0))
        throw DomainError("deviation bound: eps must lie in [0,1)");
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw DomainError("deviation bound: alpha must lie in (0,1]");
    if (!(beta >= 0.0)) throw DomainError("deviation bound: beta must be >= 0");
    if (!(beta_star >= 0.0 && beta_star <= 1.0))
        throw DomainError("deviation bound: beta_star must lie in [0,1]");
}

}  // namespace detail

// Uniform deviation bound for zero-inflation noise:
// eps * [1 + 4*beta / min(1, (1+eps)*alpha*beta_star)].
inline double zero_inflation_bound(double eps, double alpha, double beta,
                                   double beta_star) {
    detail::check_profile_args(eps, alpha, beta, beta_star);
    if (eps == 0.0) return 0.0;
    double ab = alpha * beta_star;
    return eps * (1.0 + detail::deviation_bracket(4.0 * beta, (1.0 + eps) * ab));
}

// The prior flip-noise bound used for comparison:
// eps * [1 + 4*beta / min(1, alpha*beta_star)].
inline double flip_bound(double eps, double alpha, double beta,
                         double beta_star) {
    detail::check_profile_args(eps, alpha, beta, beta_star);
    if (eps == 0.0) return 0.0;
    double ab = alpha * beta_star;
    return eps * (1.0 + detail::deviation_bracket(4.0 * beta, ab));
}

// Uniform deviation bound for process contamination:
// eps * [2 + 4*(N-1)*beta_x / min(1, alpha_beta_star_min)],
// where alpha_beta_star_min = min(alpha_x*beta_star_x, alpha_y).
inline double process_bound(double eps, int alphabet_size, double beta_x,
                            double alpha_beta_star_min) {
    if (alphabet_size < 2)
        throw DomainError("process_bound: alphabet size must be >= 2");
    if (!(eps >= 0.0 && eps < 1.0))
        throw DomainError("process_bound: eps must lie in [0,1)");
    if (!(beta_x >= 0.0)) throw DomainError("process_bound: beta must be >= 0");
    if (!(alpha_beta_star_min >= 0.0 && alpha_beta_star_min <= 1.0))
        throw DomainError("process_bound: alpha_beta_star_min must lie in [0,1]");
    if (eps == 0.0) return 0.0;
    return eps * (2.0 + detail::deviation_bracket(
                            4.0 * (alphabet_size - 1) * beta_x,
                            alpha_beta_star_min));
}

// Every explicit constant of the recovery guarantees, evaluated from oracle
// quantities of the true process (never from samples), plus the coupled
// deviation triple k1/k2/k3.
struct BoundsReport {
    double alpha_X = 0.0, beta_X = 0.0, beta_star_X = 0.0;
    std::optional<double> alpha_Y, beta_Y, beta_star_min;

    double k1 = 0.0, k2 = 0.0, k3 = 0.0;

    double c1 = 0.0, c2 = 0.0, c3 = 0.0;
    int d = 0;
    double n0 = 0.0, k_bar = 0.0, D_d = 0.0;
    double delta_low = 0.0, delta_high = 0.0;
    bool valid = false;
    std::string reason;  // set when valid is false

    double eps = 0.0, delta = 0.0;
    long long n = 0;
    int K = 0;

    // Implied error bound c2*exp(-c3*(n-d)); reported even when > 1.
    double prob_bound = 0.0;
    bool prob_vacuous = false;
    bool n_above_threshold = false;

    // Process regime only: the mixing constant in its two printed variants
    // (the max form is the one used in c3).
    std::optional<double> beta_alpha_max;
    std::optional<double> beta_alpha_min_variant;
};

namespace detail {

inline double e_to_inv_e() { return std::exp(1.0 / std::exp(1.0)); }

inline double int_pow(double x, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= x;
    return r;
}

// d and D_d; a missing witness or an empty divergence set invalidates the
// report instead of guessing.
inline bool fill_depth_and_gap(const Oracle& oracle, int K, BoundsReport& rep) {
    try {
        rep.d = oracle.witness_depth(K);
    } catch (const NoWitness& e) {
        rep.reason = e.what();
        return false;
    }
    auto div = oracle.divergence(rep.d);
    if (!div.min_gap) {
        rep.reason = "D_d undefined: no divergent node at level d";
        return false;
    }
    rep.D_d = *div.min_gap;
    return true;
}

inline void fill_window_and_prob(BoundsReport& rep) {
    rep.delta_low = rep.c1 * rep.eps;
    rep.delta_high = rep.D_d - rep.c1 * rep.eps;
    bool admissible = rep.eps < rep.D_d / (2.0 * rep.c1);
    bool window_nonempty = rep.delta_low < rep.delta_high;
    rep.valid = admissible && window_nonempty;
    if (!rep.valid && rep.reason.empty())
        rep.reason = "eps outside the admissible range (eps >= D_d/(2*c1))";
    rep.prob_bound = rep.c2 * std::exp(-rep.c3 * static_cast<double>(rep.n - rep.d));
    rep.prob_vacuous = !(rep.prob_bound <= 1.0);
    rep.n_above_threshold = static_cast<double>(rep.n) > rep.n0;
}

}  // namespace detail

// Recovery constants under zero-inflation noise.
inline BoundsReport zero_inflation_recovery_report(const Oracle& oracle,
                                                   double eps, double delta,
                                                   int K, long long n) {
    if (!(eps >= 0.0 && eps < 1.0))
        throw DomainError("recovery report: eps must lie in [0,1)");
    if (K < 1) throw DomainError("recovery report: K must be >= 1");

    BoundsReport rep;
    rep.eps = eps;
    rep.delta = delta;
    rep.n = n;
    rep.K = K;

    const auto prof = oracle.continuity_rates();
    rep.alpha_X = oracle.tree().alpha();
    rep.beta_X = prof.beta_sum;
    rep.beta_star_X = prof.beta_star;

    const double ab = rep.alpha_X * rep.beta_star_X;
    rep.k2 = zero_inflation_bound(eps, rep.alpha_X, rep.beta_X, rep.beta_star_X);
    rep.k1 = flip_bound(eps, rep.alpha_X, rep.beta_X, rep.beta_star_X);
    rep.k3 = process_bound(eps, oracle.tree().alphabet_size, rep.beta_X,
                           std::min(ab, rep.alpha_X));

    rep.c1 = 2.0 * (1.0 + detail::deviation_bracket(4.0 * rep.beta_X, ab));
    if (!detail::fill_depth_and_gap(oracle, K, rep)) return rep;

    const int d = rep.d;
    rep.c2 = detail::int_pow(2.0, d) * 12.0 * detail::e_to_inv_e();

    const double small_mass =
        detail::int_pow(rep.alpha_X, d) * detail::int_pow(1.0 - eps, d);
    rep.k_bar = rep.k2 + (n > d ? 3.0 / (static_cast<double>(n - d) * small_mass)
                                : detail::kInf);
    const double margin = std::min(rep.D_d - delta, delta) - 2.0 * rep.k_bar;
    rep.c3 = margin * margin * detail::int_pow(rep.alpha_X, 2 * d) *
             detail::int_pow(1.0 - eps, 3 * d + 1) /
             (256.0 * std::exp(1.0) * (d + 1) * (1.0 + rep.beta_X / rep.alpha_X));
    const double n0_denom = (rep.D_d - delta - 2.0 * rep.k2) * small_mass;
    rep.n0 = n0_denom > 0.0 ? 6.0 / n0_denom + d : detail::kInf;

    detail::fill_window_and_prob(rep);
    return rep;
}

// Recovery constants under process contamination.
inline BoundsReport process_recovery_report(const Oracle& oracle_x,
                                            const Oracle& oracle_y, double eps,
                                            double delta, int K, long long n) {
    if (oracle_x.tree().alphabet_size != oracle_y.tree().alphabet_size)
        throw AlphabetMismatch("recovery report: trees use different alphabets");
    if (!(eps >= 0.0 && eps < 1.0))
        throw DomainError("recovery report: eps must lie in [0,1)");
    if (K < 1) throw DomainError("recovery report: K must be >= 1");

    BoundsReport rep;
    rep.eps = eps;
    rep.delta = delta;
    rep.n = n;
    rep.K = K;

    const int N = oracle_x.tree().alphabet_size;
    const auto prof_x = oracle_x.continuity_rates();
    const auto prof_y = oracle_y.continuity_rates();
    rep.alpha_X = oracle_x.tree().alpha();
    rep.beta_X = prof_x.beta_sum;
    rep.beta_star_X = prof_x.beta_star;
    rep.alpha_Y = oracle_y.tree().alpha();
    rep.beta_Y = prof_y.beta_sum;

    const double ab = rep.alpha_X * rep.beta_star_X;
    const double ab_min = std::min(ab, *rep.alpha_Y);
    rep.beta_star_min = ab_min;
    rep.k2 = zero_inflation_bound(eps, rep.alpha_X, rep.beta_X, rep.beta_star_X);
    rep.k1 = flip_bound(eps, rep.alpha_X, rep.beta_X, rep.beta_star_X);
    rep.k3 = process_bound(eps, N, rep.beta_X, ab_min);

    rep.c1 = 4.0 * (1.0 + detail::deviation_bracket(2.0 * (N - 1) * rep.beta_X,
                                                    ab_min));
    if (!detail::fill_depth_and_gap(oracle_x, K, rep)) return rep;

    const int d = rep.d;
    const double alpha_min = std::min(rep.alpha_X, *rep.alpha_Y);
    rep.beta_alpha_max = std::max(1.0 + rep.beta_X / rep.alpha_X,
                                  1.0 + *rep.beta_Y / *rep.alpha_Y);
    rep.beta_alpha_min_variant = std::min(1.0 + rep.beta_X / rep.alpha_X,
                                          1.0 + *rep.beta_Y / *rep.alpha_Y);

    rep.c2 = 48.0 * detail::int_pow(static_cast<double>(N), d) * (N + 1) *
             detail::e_to_inv_e();
    rep.k_bar = eps * rep.c1 / 2.0 +
                (n > d ? (N + 1) / (static_cast<double>(n - d) *
                                    detail::int_pow(alpha_min, d))
                       : detail::kInf);
    const double margin = std::min(rep.D_d - delta, delta) - 2.0 * rep.k_bar;
    rep.c3 = margin * margin * detail::int_pow(alpha_min, 2 * d) /
             (128.0 * N * N * std::exp(1.0) * (d + 1) * *rep.beta_alpha_max);
    const double n0_denom =
        (rep.D_d - delta - eps * rep.c1) * detail::int_pow(alpha_min, d);
    rep.n0 = n0_denom > 0.0 ? 2.0 * (N + 1) / n0_denom + d : detail::kInf;

    detail::fill_window_and_prob(rep);
    return rep;
}

}  // namespace vlmc
