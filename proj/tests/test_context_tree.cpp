#include <catch2/catch_amalgamated.hpp>

#include "fixtures.hpp"
#include "vlmc/context_tree.hpp"
#include "vlmc/random.hpp"

using namespace vlmc;
using Catch::Approx;

TEST_CASE("validate accepts the root-only tree") {
    ContextTree tree{2, {{word({}), {0.5, 0.5}}}};
    auto rep = validate(tree);
    CHECK(rep.suffix_free);
    CHECK(rep.complete);
    CHECK(rep.rows_ok);
    CHECK(rep.alpha == Approx(0.5));
}

TEST_CASE("validate accepts the sharp depth-2 tree") {
    auto rep = validate(fixtures::sharp_tree());
    CHECK(rep.suffix_free);
    CHECK(rep.complete);
    CHECK(rep.rows_ok);
    CHECK(rep.alpha == Approx(0.2));
}

TEST_CASE("validate flags a context that is a suffix of another") {
    ContextTree tree{2,
                     {{word({1}), {0.5, 0.5}},
                      {word({0}), {0.5, 0.5}},
                      {word({1, 0}), {0.5, 0.5}}}};
    auto rep = validate(tree);
    CHECK_FALSE(rep.suffix_free);
}

TEST_CASE("validate flags bad rows") {
    SECTION("row sum off by more than 1e-9") {
        ContextTree tree{2, {{word({}), {0.5, 0.500001}}}};
        CHECK_FALSE(validate(tree).rows_ok);
    }
    SECTION("zero entry breaks non-nullness") {
        ContextTree tree{2, {{word({}), {1.0, 0.0}}}};
        CHECK_FALSE(validate(tree).rows_ok);
    }
    SECTION("row sum inside the tolerance passes") {
        ContextTree tree{2, {{word({}), {0.5, 0.5 + 5e-10}}}};
        CHECK(validate(tree).rows_ok);
    }
}

TEST_CASE("validate flags an incomplete trie") {
    ContextTree tree{2, {{word({1}), {0.5, 0.5}}}};
    CHECK_FALSE(validate(tree).complete);
}

TEST_CASE("create renormalizes rows exactly") {
    auto tree = ContextTree::create(2, {{word({}), {0.5, 0.5 + 8e-10}}});
    double sum = tree.contexts[0].probs[0] + tree.contexts[0].probs[1];
    CHECK(sum == Approx(1.0).margin(1e-15));
}

TEST_CASE("create rejects invalid trees with a named invariant") {
    CHECK_THROWS_AS(ContextTree::create(2, {{word({1}), {0.5, 0.5}}}), InvalidTree);
    CHECK_THROWS_WITH(ContextTree::create(2, {{word({1}), {0.5, 0.5}}}),
                      Catch::Matchers::ContainsSubstring("incomplete"));
    CHECK_THROWS_WITH(
        ContextTree::create(2, {{word({1}), {0.5, 0.5}},
                                {word({0}), {0.5, 0.5}},
                                {word({1, 0}), {0.5, 0.5}}}),
        Catch::Matchers::ContainsSubstring("suffix-free"));
    CHECK_THROWS_WITH(ContextTree::create(2, {{word({}), {0.7, 0.2}}}),
                      Catch::Matchers::ContainsSubstring("row"));
}

TEST_CASE("context_of finds the leaf matching the most recent past") {
    auto tree = fixtures::sharp_tree();
    CHECK(context_of(tree, word({0, 1})).context == word({1}));
    CHECK(context_of(tree, word({1, 0})).context == word({1, 0}));
    CHECK(context_of(tree, word({1, 1, 1, 0, 0})).context == word({0, 0}));
    CHECK_THROWS_AS(context_of(tree, word({})), UndeterminedContext);
    CHECK_THROWS_AS(context_of(tree, word({0})), UndeterminedContext);
    // A short past can still be determined when it already ends in a context.
    CHECK(context_of(tree, word({1})).context == word({1}));
}

TEST_CASE("transition returns the kernel row of the matched context") {
    auto tree = fixtures::sharp_tree();
    CHECK(transition(tree, word({0, 0}))[0] == Approx(0.8));
    CHECK(transition(tree, word({1, 1}))[1] == Approx(0.7));
    auto coin = fixtures::coin_tree(0.5);
    CHECK(transition(coin, word({0, 1, 0}))[0] == Approx(0.5));
}

TEST_CASE("transition is constant over every extension of a context") {
    auto tree = fixtures::sharp_tree();
    for (int code = 0; code < 16; ++code) {
        Word past(4);
        for (int i = 0; i < 4; ++i) past[3 - i] = (code >> i) & 1;
        const auto& ctx = context_of(tree, past);
        CHECK(is_suffix(ctx.context, past));
        CHECK(transition(tree, past) == ctx.probs);
    }
}

TEST_CASE("truncate keeps short strings and cuts deep ones to their tails") {
    std::set<Word> t = {word({1}), word({1, 0}), word({0, 0})};
    CHECK(truncate(t, 2) == t);

    std::set<Word> deep = {word({1}), word({1, 0}), word({0, 0, 0}),
                           word({1, 0, 0})};
    std::set<Word> expected = {word({1}), word({1, 0}), word({0, 0})};
    CHECK(truncate(deep, 2) == expected);

    CHECK(truncate(deep, 5) == deep);
}

TEST_CASE("truncate is idempotent on random string sets") {
    Rng rng(SeedSpec{20240811, 0});
    for (int round = 0; round < 50; ++round) {
        std::set<Word> s;
        int count = 1 + static_cast<int>(rng.next_u64() % 8);
        for (int i = 0; i < count; ++i) {
            Word w(1 + rng.next_u64() % 6);
            for (auto& sym : w) sym = static_cast<Symbol>(rng.next_u64() % 2);
            s.insert(w);
        }
        int K = 1 + static_cast<int>(rng.next_u64() % 5);
        auto once = truncate(s, K);
        CHECK(truncate(once, K) == once);
    }
}

TEST_CASE("tree_equal compares string sets regardless of order") {
    std::set<Word> a = {word({1}), word({1, 0}), word({0, 0})};
    std::set<Word> b = {word({0, 0}), word({1}), word({1, 0})};
    CHECK(tree_equal(a, b));
    CHECK_FALSE(tree_equal({word({1})}, {word({0})}));
    CHECK(tree_equal({}, {}));
}
