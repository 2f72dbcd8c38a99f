#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "cegal/errors.hpp"
#include "cegal/model_check.hpp"
#include "cegal/pctl.hpp"
#include "support/oracles.hpp"

using namespace cegal;

namespace {

Dtmc chain_with_unsafe(std::vector<SparseRow> rows, std::vector<int> unsafe, int initial = 0) {
    LabelMap labels;
    labels["unsafe"] = std::move(unsafe);
    const int n = static_cast<int>(rows.size());
    return Dtmc(n, std::move(rows), initial, std::move(labels));
}

} // namespace

TEST_CASE("parse the bounded safety formula") {
    const PctlFormula f = pctl::parse("P<=0.2 [ true U<=64 \"unsafe\" ]");
    REQUIRE(f->kind == pctl::StateFormula::Kind::Prob);
    CHECK(f->cmp == pctl::Comparison::LessEq);
    CHECK(f->threshold == 0.2);
    REQUIRE(f->path->kind == pctl::PathFormula::Kind::Until);
    CHECK(f->path->bound == 64);
    CHECK(f->path->left->kind == pctl::StateFormula::Kind::True);
    CHECK(f->path->right->label == "unsafe");
    CHECK(pctl::to_string(*f) == "P<=0.2 [ true U<=64 \"unsafe\" ]");
}

TEST_CASE("parse an unbounded until") {
    const PctlFormula f = pctl::parse("P<=1.0 [ true U \"goal\" ]");
    CHECK(!f->path->bound);
    CHECK(f->threshold == 1.0);
    CHECK(pctl::to_string(*f) == "P<=1 [ true U \"goal\" ]");
    CHECK(pctl::equal(*pctl::parse(pctl::to_string(*f)), *f));
}

TEST_CASE("conjunction binds inside the right until operand") {
    const PctlFormula f = pctl::parse("P<0.5 [ \"a\" U<=3 \"b\" & \"c\" ]");
    REQUIRE(f->path->kind == pctl::PathFormula::Kind::Until);
    const auto& right = *f->path->right;
    REQUIRE(right.kind == pctl::StateFormula::Kind::And);
    CHECK(right.lhs->label == "b");
    CHECK(right.rhs->label == "c");
    // Round-trip through the canonical printer.
    const std::string printed = pctl::to_string(*f);
    CHECK(pctl::equal(*pctl::parse(printed), *f));
    CHECK(printed == "P<0.5 [ \"a\" U<=3 \"b\" & \"c\" ]");
}

TEST_CASE("printer round-trips negation, nesting and Next") {
    for (const char* text : {
             "P>=0.25 [ !\"a\" & !(\"b\" & \"c\") U \"d\" ]",
             "P>0.125 [ X !\"off\" ]",
             "P<=0.5 [ true U<=1 !(\"a\" & true) ]",
         }) {
        const PctlFormula f = pctl::parse(text);
        const std::string printed = pctl::to_string(*f);
        CHECK(pctl::equal(*pctl::parse(printed), *f));
    }
}

TEST_CASE("parse errors carry positions") {
    CHECK_THROWS_AS(pctl::parse("P<=0.2 [ true U<=64 unsafe ]"), ParseError);
    CHECK_THROWS_AS(pctl::parse("P=0.2 [ true U \"x\" ]"), ParseError);
    CHECK_THROWS_AS(pctl::parse("P<=1.5 [ true U \"x\" ]"), ParseError);
    CHECK_THROWS_AS(pctl::parse("P<=0.2 [ true U<=0 \"x\" ]"), ParseError);
    CHECK_THROWS_AS(pctl::parse("P<=0.2 [ true U \"x\" ] trailing"), ParseError);
    try {
        pctl::parse("P<=0.2 [ true U<=64 unsafe ]");
    } catch (const ParseError& e) {
        CHECK(e.position == 20);
    }
}

TEST_CASE("bounded until: initial state already satisfying") {
    const Dtmc chain = chain_with_unsafe({{{0, 1.0}}}, {0});
    const std::vector<char> phi1(1, 1), phi2(1, 1);
    for (int t : {1, 5, 64})
        CHECK(check_bounded_until(chain, phi1, phi2, t)[0] == 1.0);
}

TEST_CASE("bounded until on a half-and-half chain") {
    // s0 -> {s0: 0.5, s1: 0.5}, s1 unsafe and absorbing.
    const Dtmc chain = chain_with_unsafe({{{0, 0.5}, {1, 0.5}}, {{1, 1.0}}}, {1});
    const std::vector<char> phi1 = {1, 1};
    const std::vector<char> phi2 = {0, 1};
    const auto values = check_bounded_until(chain, phi1, phi2, 2);
    CHECK(values[0] == doctest::Approx(0.75).epsilon(1e-12)); // 0.5 + 0.25
    CHECK(oracles::bounded_until_brute_force(chain, phi1, phi2, 2) ==
          doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("bounded until equals path enumeration on small random chains") {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const Dtmc chain = oracles::random_dtmc(seed * 11 + 1, 2 + seed % 5, 3);
        Rng rng(seed + 1000);
        const std::vector<char> phi1 = oracles::random_predicate(rng, chain.n_states(), 0.7);
        const std::vector<char> phi2 = oracles::random_predicate(rng, chain.n_states(), 0.3);
        const int t = 1 + static_cast<int>(rng.next_double() * 6);
        const double expected = oracles::bounded_until_brute_force(chain, phi1, phi2, t);
        const double actual = check_bounded_until(chain, phi1, phi2, t)[chain.initial_state()];
        CHECK(actual == doctest::Approx(expected).epsilon(1e-10));
    }
}

TEST_CASE("bounded until is monotone in the bound") {
    const Dtmc chain = oracles::random_dtmc(77, 6, 3);
    Rng rng(4);
    const std::vector<char> phi1 = oracles::random_predicate(rng, 6, 0.8);
    const std::vector<char> phi2 = oracles::random_predicate(rng, 6, 0.3);
    std::vector<double> prev(6, -1.0);
    for (int t = 1; t <= 12; ++t) {
        const auto values = check_bounded_until(chain, phi1, phi2, t);
        for (int s = 0; s < 6; ++s) {
            CHECK(values[s] >= prev[s] - 1e-15);
        }
        prev = values;
    }
}

TEST_CASE("unbounded until: unreachable and certain targets") {
    // s0 -> s1 -> s1; s2 unreachable.
    {
        const Dtmc chain = chain_with_unsafe({{{1, 1.0}}, {{1, 1.0}}, {{2, 1.0}}}, {2});
        const std::vector<char> phi1 = {1, 1, 1};
        const std::vector<char> phi2 = {0, 0, 1};
        CHECK(check_unbounded_until(chain, phi1, phi2)[0] == 0.0);
    }
    {
        const Dtmc chain = chain_with_unsafe({{{1, 1.0}}, {{2, 1.0}}, {{2, 1.0}}}, {2});
        const std::vector<char> phi1 = {1, 1, 1};
        const std::vector<char> phi2 = {0, 0, 1};
        CHECK(check_unbounded_until(chain, phi1, phi2)[0] == 1.0);
    }
}

TEST_CASE("unbounded until on a gambler chain matches the analytic ratio") {
    // mid state: 0.3 to win, 0.2 to lose, 0.5 self-loop => P(win) = 0.3/0.5.
    std::vector<SparseRow> rows = {
        {{0, 1.0}},                       // lose, absorbing
        {{0, 0.2}, {1, 0.5}, {2, 0.3}},   // mid
        {{2, 1.0}},                       // win, absorbing
    };
    const Dtmc chain(3, std::move(rows), 1, {});
    const std::vector<char> phi1 = {1, 1, 1};
    const std::vector<char> phi2 = {0, 0, 1};
    CHECK(check_unbounded_until(chain, phi1, phi2)[1] == doctest::Approx(0.6).epsilon(1e-9));
}

TEST_CASE("bounded values converge to the unbounded value") {
    const Dtmc chain = oracles::random_dtmc(5150, 6, 3);
    Rng rng(6);
    const std::vector<char> phi1 = oracles::random_predicate(rng, 6, 0.9);
    const std::vector<char> phi2 = oracles::random_predicate(rng, 6, 0.25);
    const auto unbounded = check_unbounded_until(chain, phi1, phi2);
    const auto bounded = check_bounded_until(chain, phi1, phi2, 4000);
    for (int s = 0; s < 6; ++s)
        CHECK(std::abs(bounded[s] - unbounded[s]) < 1e-6);
}

TEST_CASE("verify compares against the threshold at the initial state") {
    // One-shot split into an unsafe sink (0.246) and a safe sink (0.754).
    const Dtmc chain =
        chain_with_unsafe({{{1, 0.246}, {2, 0.754}}, {{1, 1.0}}, {{2, 1.0}}}, {1});
    const Verdict tight = verify(chain, pctl::parse("P<=0.2 [ true U<=64 \"unsafe\" ]"));
    CHECK(tight.probability == doctest::Approx(0.246).epsilon(1e-12));
    CHECK_FALSE(tight.satisfied);

    const Verdict trivial = verify(chain, pctl::parse("P<=1.0 [ true U \"unsafe\" ]"));
    CHECK(trivial.satisfied);

    const Dtmc half = chain_with_unsafe({{{0, 0.5}, {1, 0.5}}, {{1, 1.0}}}, {1});
    CHECK(verify(half, pctl::parse("P<=0.8 [ true U<=2 \"unsafe\" ]")).satisfied);
    CHECK_FALSE(verify(half, pctl::parse("P<=0.7 [ true U<=2 \"unsafe\" ]")).satisfied);
}

TEST_CASE("verify satisfaction is monotone in the threshold") {
    const Dtmc chain = chain_with_unsafe({{{0, 0.3}, {1, 0.7}}, {{1, 1.0}}}, {1});
    bool previous = false;
    for (double p = 0.0; p <= 1.0; p += 0.05) {
        const bool sat =
            verify(chain, pctl::bounded_reach_bound(p, 8, "unsafe")).satisfied;
        CHECK((!previous || sat)); // once satisfied, stays satisfied as p grows
        previous = previous || sat;
    }
}

TEST_CASE("verify rejects unsupported shapes and unknown labels") {
    const Dtmc chain = chain_with_unsafe({{{0, 1.0}}}, {});
    CHECK_THROWS_AS(verify(chain, pctl::parse("P<=0.5 [ X \"unsafe\" ]")), UnsupportedFormula);
    CHECK_THROWS_AS(verify(chain, pctl::make_true()), UnsupportedFormula);
    CHECK_THROWS_AS(
        verify(chain, pctl::parse("P<=0.5 [ P<=0.1 [ true U \"unsafe\" ] U \"unsafe\" ]")),
        UnsupportedFormula);
    CHECK_THROWS_AS(verify(chain, pctl::parse("P<=0.5 [ true U \"nolabel\" ]")), UnknownLabel);
}
