#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "cegal/counterexample.hpp"
#include "cegal/errors.hpp"
#include "cegal/mdp_ops.hpp"
#include "cegal/model_check.hpp"
#include "cegal/pctl.hpp"
#include "support/oracles.hpp"

using namespace cegal;

namespace {

// Minimal path probabilities 0.4, 0.3 and 0.2 towards the unsafe sink.
Dtmc three_path_chain() {
    std::vector<SparseRow> rows = {
        {{1, 0.6}, {3, 0.4}},
        {{2, 0.5}, {3, 0.5}},
        {{3, 2.0 / 3.0}, {4, 1.0 / 3.0}},
        {{3, 1.0}},
        {{4, 1.0}},
    };
    LabelMap labels;
    labels["unsafe"] = {3};
    return Dtmc(5, std::move(rows), 0, std::move(labels));
}

Dtmc labeled_random_chain(std::uint64_t seed, int n, std::vector<char>& phi1,
                          std::vector<char>& phi2) {
    Rng rng(seed);
    phi1 = oracles::random_predicate(rng, n, 0.8);
    phi2 = oracles::random_predicate(rng, n, 0.3);
    LabelMap labels;
    for (int s = 0; s < n; ++s) {
        if (phi1[s]) labels["a"].push_back(s);
        if (phi2[s]) labels["b"].push_back(s);
    }
    return oracles::random_dtmc(seed * 7 + 3, n, 3, std::move(labels));
}

} // namespace

TEST_CASE("path graph weights are negative log probabilities") {
    const Dtmc chain = three_path_chain();
    const std::vector<char> phi1(5, 1);
    std::vector<char> phi2(5, 0);
    phi2[3] = 1;
    const PathGraph graph = build_path_graph(chain, phi1, phi2, std::nullopt);

    REQUIRE(graph.adjacency[1].size() == 2);
    CHECK(graph.adjacency[1][1].weight == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(graph.accepting[3]);
    CHECK(graph.adjacency[3].empty()); // accepting states keep no edges

    // A sure transition has weight exactly zero.
    std::vector<SparseRow> sure = {{{1, 1.0}}, {{1, 1.0}}};
    const Dtmc sure_chain(2, std::move(sure), 0, {});
    std::vector<char> p2 = {0, 1};
    const PathGraph g2 = build_path_graph(sure_chain, {1, 1}, p2, std::nullopt);
    CHECK(g2.adjacency[0][0].weight == 0.0);
}

TEST_CASE("shortest accepting weight matches the most probable satisfying path") {
    std::vector<char> phi1, phi2;
    const Dtmc chain = labeled_random_chain(31, 4, phi1, phi2);
    const PathGraph graph = build_path_graph(chain, phi1, phi2, 6);
    const double weight = shortest_accepting_weight(graph);

    const auto paths = oracles::enumerate_min_sat_paths(chain, phi1, phi2, 6);
    if (paths.empty()) {
        CHECK(std::isinf(weight));
    } else {
        double best = 0.0;
        for (const auto& p : paths) best = std::max(best, p.probability);
        CHECK(weight == doctest::Approx(-std::log(best)).epsilon(1e-12));
    }
}

TEST_CASE("counterexample takes the two heaviest paths") {
    const Dtmc chain = three_path_chain();
    const PctlFormula formula = pctl::parse("P<=0.5 [ true U \"unsafe\" ]");
    const Counterexample cex = enumerate_counterexample(chain, formula);

    REQUIRE(cex.size() == 2);
    CHECK(cex.paths[0].states == std::vector<int>{0, 3});
    CHECK(*cex.paths[0].probability == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(cex.paths[1].states == std::vector<int>{0, 1, 3});
    CHECK(*cex.paths[1].probability == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(cex.total_probability == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(cex.formal);
    CHECK_FALSE(cex.budget_exhausted);

    // No single path exceeds the threshold.
    CHECK(oracles::min_counterexample_size_brute_force({0.4, 0.3, 0.2}, 0.5) == 2);
}

TEST_CASE("a sure path alone is a counterexample") {
    std::vector<SparseRow> rows = {{{1, 1.0}}, {{1, 1.0}}};
    LabelMap labels;
    labels["unsafe"] = {1};
    const Dtmc chain(2, std::move(rows), 0, std::move(labels));
    const Counterexample cex =
        enumerate_counterexample(chain, pctl::parse("P<=0.9 [ true U<=5 \"unsafe\" ]"));
    REQUIRE(cex.size() == 1);
    CHECK(*cex.paths[0].probability == 1.0);
    CHECK(cex.paths[0].states == std::vector<int>{0, 1});
}

TEST_CASE("a satisfied formula admits no counterexample") {
    std::vector<SparseRow> rows = {{{1, 0.1}, {2, 0.9}}, {{1, 1.0}}, {{2, 1.0}}};
    LabelMap labels;
    labels["unsafe"] = {1};
    const Dtmc chain(3, std::move(rows), 0, std::move(labels));
    CHECK_THROWS_AS(
        enumerate_counterexample(chain, pctl::parse("P<=0.2 [ true U \"unsafe\" ]")),
        FormulaSatisfied);
    CHECK_THROWS_AS(
        enumerate_counterexample(chain, pctl::parse("P>=0.9 [ true U \"unsafe\" ]")),
        UnsupportedFormula);
}

TEST_CASE("budget exhaustion flags a partial witness") {
    const Dtmc chain = three_path_chain();
    const PctlFormula formula = pctl::parse("P<=0.8 [ true U \"unsafe\" ]");
    const Counterexample cex = enumerate_counterexample(chain, formula, /*max_paths=*/1);
    CHECK(cex.budget_exhausted);
    CHECK_FALSE(cex.formal);
    CHECK(cex.size() == 1);
    CHECK(cex.total_probability == doctest::Approx(0.4));
}

TEST_CASE("a threshold override yields sub-threshold evidence") {
    const Dtmc chain = three_path_chain();
    const PctlFormula formula = pctl::parse("P<=0.5 [ true U \"unsafe\" ]");
    const Counterexample cex = enumerate_counterexample(chain, formula, 100, 0.35);
    CHECK(cex.size() == 1); // 0.4 alone already exceeds the override
    CHECK_FALSE(cex.formal);
    CHECK(cex.threshold_used == 0.35);
}

TEST_CASE("counterexample features: single path identity") {
    const FeatureMap features(2, {{1.0, 0.0}, {0.0, 1.0}});
    Counterexample cex;
    cex.paths.push_back({{0, 0}, 0.5}); // two steps at state 0
    cex.total_probability = 0.5;
    const FeatureExpectation mu = counterexample_features(cex, features, 0.99);
    CHECK(mu.mu[0] == doctest::Approx(1.99).epsilon(1e-15));
    CHECK(mu.mu[1] == 0.0);
}

TEST_CASE("counterexample features: symmetric two-path average") {
    const FeatureMap features(2, {{1.0, 0.0}, {0.0, 1.0}});
    Counterexample cex;
    cex.paths.push_back({{0}, 0.25});
    cex.paths.push_back({{1}, 0.25});
    cex.total_probability = 0.5;
    const FeatureExpectation mu = counterexample_features(cex, features, 0.9);
    CHECK(mu.mu[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(mu.mu[1] == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("counterexample features: probability weights normalize to 4/7 and 3/7") {
    const Dtmc chain = three_path_chain();
    const FeatureMap features(
        2, {{1.0, 0.0}, {0.0, 1.0}, {0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}});
    const Counterexample cex =
        enumerate_counterexample(chain, pctl::parse("P<=0.5 [ true U \"unsafe\" ]"));
    const double gamma = 0.5;
    const FeatureExpectation mu = counterexample_features(cex, features, gamma);
    // Per-path sums: (0,3) gives f(0); (0,1,3) gives f(0) + gamma f(1).
    // Weighted mean with masses 0.4 and 0.3.
    const double w0 = 0.4 / 0.7, w1 = 0.3 / 0.7;
    CHECK(mu.mu[0] == doctest::Approx(w0 * 1.0 + w1 * 1.0).epsilon(1e-12));
    CHECK(mu.mu[1] == doctest::Approx(w1 * gamma).epsilon(1e-12));

    CHECK_THROWS_AS(counterexample_features(Counterexample{}, features, gamma),
                    EmptyCounterexample);
}

TEST_CASE("returned paths are minimally satisfying, ordered and minimal in count") {
    int checked_instances = 0;
    for (std::uint64_t seed = 0; seed < 60 && checked_instances < 25; ++seed) {
        std::vector<char> phi1, phi2;
        const int n = 3 + static_cast<int>(seed % 4);
        const Dtmc chain = labeled_random_chain(seed, n, phi1, phi2);
        const int bound = 2 + static_cast<int>(seed % 5);

        const auto all_paths = oracles::enumerate_min_sat_paths(chain, phi1, phi2, bound);
        double prob = 0.0;
        for (const auto& p : all_paths) prob += p.probability;
        if (prob < 0.05) continue;
        const double p_star = prob * (0.2 + 0.07 * static_cast<double>(seed % 9));

        auto formula = pctl::make_prob(
            pctl::Comparison::LessEq, p_star,
            pctl::make_until(pctl::make_atom("a"), pctl::make_atom("b"), bound));
        const Counterexample cex = enumerate_counterexample(chain, formula);
        ++checked_instances;

        CHECK(cex.total_probability > p_star);
        CHECK(cex.formal);
        for (int i = 0; i + 1 < cex.size(); ++i)
            CHECK(*cex.paths[i].probability >= *cex.paths[i + 1].probability);
        for (int i = 0; i + 1 < cex.size(); ++i)
            CHECK(cex.paths[i].states != cex.paths[i + 1].states);

        for (const auto& path : cex.paths) {
            REQUIRE(!path.states.empty());
            CHECK(path.states.size() <= static_cast<std::size_t>(bound) + 1);
            CHECK(path.states.front() == chain.initial_state());
            for (std::size_t i = 0; i + 1 < path.states.size(); ++i) {
                CHECK(phi1[path.states[i]]);
                CHECK(!phi2[path.states[i]]);
            }
            CHECK(phi2[path.states.back()]);
            // Path probability equals the product of transition masses.
            double p = 1.0;
            for (std::size_t i = 0; i + 1 < path.states.size(); ++i) {
                double step = 0.0;
                for (const auto& [succ, q] : chain.row(path.states[i]))
                    if (succ == path.states[i + 1]) step = q;
                CHECK(step > 0.0);
                p *= step;
            }
            CHECK(*path.probability == doctest::Approx(p).epsilon(1e-12));
        }

        std::vector<double> probabilities;
        for (const auto& p : all_paths) probabilities.push_back(p.probability);
        const int best = oracles::min_counterexample_size_brute_force(probabilities, p_star);
        CHECK(cex.size() == best);

        // Aggregated features stay inside the componentwise hull bounds.
        std::vector<std::vector<double>> values(n, std::vector<double>{0.0});
        for (int s = 0; s < n; ++s) values[s][0] = static_cast<double>(s) / n;
        const FeatureMap features(1, std::move(values));
        const FeatureExpectation mu = counterexample_features(cex, features, 0.9);
        double lo = 1e300, hi = -1e300;
        for (const auto& path : cex.paths) {
            const auto sum = discounted_feature_sum(path.states, features, 0.9);
            lo = std::min(lo, sum[0]);
            hi = std::max(hi, sum[0]);
        }
        CHECK(mu.mu[0] >= lo - 1e-12);
        CHECK(mu.mu[0] <= hi + 1e-12);
    }
    CHECK(checked_instances >= 20);
}
