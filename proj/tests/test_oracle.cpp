#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "fixtures.hpp"
#include "vlmc/oracle.hpp"

using namespace vlmc;
using Catch::Approx;

namespace {

// Balance-equation solution for sharp_tree, states coded (prev, last):
// pi(00)=9/22, pi(01)=3/22, pi(10)=3/22, pi(11)=7/22.
constexpr double kSharpPi[4] = {9.0 / 22.0, 3.0 / 22.0, 3.0 / 22.0, 7.0 / 22.0};

Word word_of_bits(int len, int code) {
    Word w(static_cast<std::size_t>(len));
    for (int i = 0; i < len; ++i)
        w[static_cast<std::size_t>(len - 1 - i)] = static_cast<Symbol>((code >> i) & 1);
    return w;
}

}  // namespace

TEST_CASE("stationary law of an i.i.d. tree is its root row") {
    Oracle oracle(fixtures::coin_tree(0.3));
    REQUIRE(oracle.state_count() == 2);
    CHECK(oracle.stationary()[0] == Approx(0.7).margin(1e-12));
    CHECK(oracle.stationary()[1] == Approx(0.3).margin(1e-12));
}

TEST_CASE("stationary law of the sharp tree matches the balance equations") {
    Oracle oracle(fixtures::sharp_tree());
    REQUIRE(oracle.state_count() == 4);
    for (std::size_t c = 0; c < 4; ++c)
        CHECK(oracle.stationary()[c] == Approx(kSharpPi[c]).margin(1e-10));

    // Fixed-point residual recomputed here, independently of the solver exit
    // test.
    std::vector<double> next(4, 0.0);
    for (std::size_t c = 0; c < 4; ++c) {
        const auto& row = oracle.state_row(c);
        for (Symbol a = 0; a < 2; ++a)
            next[oracle.shift_state(c, a)] += oracle.stationary()[c] * row[a];
    }
    double residual = 0.0, sum = 0.0;
    for (std::size_t c = 0; c < 4; ++c) {
        residual = std::max(residual, std::abs(next[c] - oracle.stationary()[c]));
        sum += oracle.stationary()[c];
    }
    CHECK(residual < 1e-10);
    CHECK(sum == Approx(1.0).margin(1e-12));
}

TEST_CASE("uniform rows give the uniform stationary law") {
    auto tree = ContextTree::create(2, {{word({1}), {0.5, 0.5}},
                                        {word({1, 0}), {0.5, 0.5}},
                                        {word({0, 0}), {0.5, 0.5}}});
    Oracle oracle(tree);
    for (double p : oracle.stationary()) CHECK(p == Approx(0.25).margin(1e-12));
}

TEST_CASE("marginal_prob basics") {
    Oracle coin(fixtures::coin_tree(0.5));
    CHECK(coin.marginal_prob(word({})) == 1.0);
    CHECK(coin.marginal_prob(word({0, 1})) == Approx(0.25).margin(1e-12));

    Oracle sharp(fixtures::sharp_tree());
    CHECK(sharp.marginal_prob(word({})) == 1.0);
    CHECK(sharp.marginal_prob(word({1, 0})) == Approx(3.0 / 22.0).margin(1e-10));
}

TEST_CASE("marginal_prob is additive in both directions up to length 6") {
    for (const auto& tree :
         {fixtures::sharp_tree(), fixtures::smooth_tree(), fixtures::coin_tree(0.4)}) {
        Oracle oracle(tree);
        for (int len = 0; len <= 5; ++len) {
            for (int code = 0; code < (1 << len); ++code) {
                Word w = word_of_bits(len, code);
                double mu = oracle.marginal_prob(w);
                double older = 0.0, newer = 0.0;
                for (int a = 0; a < 2; ++a) {
                    Word aw;
                    aw.push_back(static_cast<Symbol>(a));
                    aw.insert(aw.end(), w.begin(), w.end());
                    older += oracle.marginal_prob(aw);
                    Word wa = w;
                    wa.push_back(static_cast<Symbol>(a));
                    newer += oracle.marginal_prob(wa);
                }
                CHECK(std::abs(older - mu) < 1e-12);
                CHECK(std::abs(newer - mu) < 1e-12);
            }
        }
    }
}

TEST_CASE("conditional_on_string returns kernel rows on contexts") {
    for (const auto& tree : {fixtures::sharp_tree(), fixtures::smooth_tree()}) {
        Oracle oracle(tree);
        for (const auto& c : tree.contexts) {
            auto p = oracle.conditional_on_string(c.context);
            for (std::size_t a = 0; a < p.size(); ++a)
                CHECK(std::abs(p[a] - c.probs[a]) < 1e-12);
        }
    }
}

TEST_CASE("conditional_on_string mixes rows with stationary weights") {
    Oracle oracle(fixtures::sharp_tree());

    // Brute force over the two length-2 extensions of "0".
    double w00 = oracle.marginal_prob(word({0, 0}));
    double w10 = oracle.marginal_prob(word({1, 0}));
    double expected0 = (w00 * 0.8 + w10 * 0.6) / (w00 + w10);
    auto p = oracle.conditional_on_string(word({0}));
    CHECK(p[0] == Approx(expected0).margin(1e-12));
    CHECK(p[0] == Approx(0.75).margin(1e-10));
    CHECK(p[1] == Approx(0.25).margin(1e-10));

    // The empty string conditions on nothing: the stationary next-symbol law.
    auto marginal = oracle.conditional_on_string(word({}));
    CHECK(marginal[1] == Approx(5.0 / 11.0).margin(1e-10));

    // Pasts longer than the order resolve through the kernel directly.
    auto deep = oracle.conditional_on_string(word({1, 1, 1, 0}));
    CHECK(deep[0] == Approx(0.6).margin(1e-12));

    Oracle coin(fixtures::coin_tree(0.3));
    auto any = coin.conditional_on_string(word({0, 1}));
    CHECK(any[1] == Approx(0.3).margin(1e-12));
}

TEST_CASE("continuity rates of a memoryless tree vanish") {
    Oracle oracle(fixtures::coin_tree(0.5));
    auto prof = oracle.continuity_rates();
    for (double b : prof.beta) CHECK(b == 0.0);
    CHECK(prof.beta_sum == 0.0);
    CHECK(prof.beta_star == 1.0);
}

TEST_CASE("continuity rates of the sharp tree by exhaustive enumeration") {
    Oracle oracle(fixtures::sharp_tree());
    auto prof = oracle.continuity_rates();
    REQUIRE(prof.beta.size() == 3);

    // Worst pair with no agreement: p(1|.) = 0.7 vs 0.2 -> |1 - 3.5| = 2.5.
    CHECK(prof.beta[0] == Approx(2.5).margin(1e-12));
    // Same last symbol 0: p(1|10) = 0.4 vs p(1|00) = 0.2 -> 1 exactly.
    CHECK(prof.beta[1] == Approx(1.0).margin(1e-12));
    CHECK(prof.beta[2] == 0.0);
    CHECK(prof.beta_sum == Approx(3.5).margin(1e-12));
    // A unit rate collapses the continuity product.
    CHECK(prof.beta_star == 0.0);
}

TEST_CASE("continuity rates match a brute-force pair sweep on the smooth tree") {
    auto tree = fixtures::smooth_tree();
    Oracle oracle(tree);
    auto prof = oracle.continuity_rates();

    for (int k = 0; k < 2; ++k) {
        double expected = 0.0;
        for (int c1 = 0; c1 < 4; ++c1)
            for (int c2 = 0; c2 < 4; ++c2) {
                if (k >= 1 && (c1 & 1) != (c2 & 1)) continue;
                Word w1 = word_of_bits(2, c1), w2 = word_of_bits(2, c2);
                const auto& r1 = transition(tree, w1);
                const auto& r2 = transition(tree, w2);
                for (int a = 0; a < 2; ++a)
                    expected = std::max(expected, std::abs(1.0 - r1[static_cast<std::size_t>(a)] /
                                                                     r2[static_cast<std::size_t>(a)]));
            }
        CHECK(prof.beta[static_cast<std::size_t>(k)] ==
              Approx(expected).margin(1e-12));
    }

    // Symbol 1 drives level 0: 0.60 against 0.35.
    CHECK(prof.beta[0] == Approx(0.60 / 0.35 - 1.0).margin(1e-12));
    CHECK(prof.beta[1] == Approx(0.45 / 0.35 - 1.0).margin(1e-12));
    double expected_star = (1.0 - prof.beta[0]) * (1.0 - prof.beta[1]);
    CHECK(prof.beta_star == Approx(expected_star).margin(1e-12));
    CHECK(prof.beta_star > 0.0);
}

TEST_CASE("beta_k is nonincreasing and vanishes from the depth on") {
    for (const auto& tree :
         {fixtures::sharp_tree(), fixtures::smooth_tree(), fixtures::comb_tree(4, 0.45)}) {
        auto prof = Oracle(tree).continuity_rates();
        for (std::size_t k = 1; k < prof.beta.size(); ++k)
            CHECK(prof.beta[k] <= prof.beta[k - 1] + 1e-15);
        for (std::size_t k = static_cast<std::size_t>(tree.depth());
             k < prof.beta.size(); ++k)
            CHECK(prof.beta[k] == 0.0);
    }
}

TEST_CASE("divergence of a root-only tree is empty with an undefined gap") {
    Oracle oracle(fixtures::coin_tree(0.5));
    for (int k : {1, 2, 3}) {
        auto rep = oracle.divergence(k);
        CHECK(rep.divergent.empty());
        CHECK_FALSE(rep.min_gap.has_value());
    }
}

TEST_CASE("divergence of the sharp tree at levels 1 and 2") {
    Oracle oracle(fixtures::sharp_tree());

    auto rep1 = oracle.divergence(1);
    // "1": 0.7 vs marginal 5/11; "0": 0.25 vs 5/11.
    CHECK(rep1.divergent == std::set<Word>{word({1}), word({0})});
    REQUIRE(rep1.min_gap.has_value());
    CHECK(*rep1.min_gap == Approx(5.0 / 11.0 - 0.25).margin(1e-10));

    auto rep2 = oracle.divergence(2);
    CHECK(rep2.divergent.count(word({1, 0})) == 1);
    CHECK(rep2.divergent.count(word({0, 0})) == 1);
    CHECK(rep2.divergent.count(word({1})) == 1);
    REQUIRE(rep2.min_gap.has_value());
    // Tightest node: "00" against "0", |0.8 - 0.75| = 0.05.
    CHECK(*rep2.min_gap == Approx(0.05).margin(1e-10));
}

TEST_CASE("divergence needs k >= 1") {
    Oracle oracle(fixtures::sharp_tree());
    CHECK_THROWS_AS(oracle.divergence(0), DomainError);
}

TEST_CASE("witness_depth on the sharp tree") {
    Oracle oracle(fixtures::sharp_tree());
    // K=1: only the empty string needs a witness; divergence starts at level 1.
    CHECK(oracle.witness_depth(1) == 1);
    // K=2: "0" is first refined at level 2 by "10" and "00".
    CHECK(oracle.witness_depth(2) == 2);
    // K=3: "11" extends a context and no divergent node can ever end in it.
    CHECK_THROWS_AS(oracle.witness_depth(3), NoWitness);
}

TEST_CASE("witness_depth rejects trees with no non-root context") {
    Oracle oracle(fixtures::coin_tree(0.5));
    CHECK_THROWS_AS(oracle.witness_depth(1), NoWitness);
}

TEST_CASE("flat depth-1 tree has empty divergence everywhere") {
    Oracle oracle(fixtures::flat_depth1_tree());
    CHECK(oracle.divergence(1).divergent.empty());
    CHECK_THROWS_AS(oracle.witness_depth(1), NoWitness);
}
