#pragma once

#include <vector>

#include "cegal/types.hpp"

namespace cegal {

/// Inputs of the weighted separation objective: maximize over unit-ball
/// weight vectors the smallest value of
///   omega . ( k (mu_expert - mu_pi) + (1-k) (mu_pi~ - mu_cex) )
/// where pi and pi~ range independently over the safe candidates and cex over
/// the counterexample set. With an empty counterexample set the separation
/// term is dropped and the problem reduces to the plain matching objective,
/// independently of k.
struct MarginProblem {
    FeatureExpectation mu_expert;
    std::vector<FeatureExpectation> safe_candidates;
    std::vector<FeatureExpectation> counterexamples;
    double k = 1.0;
};

/// A maximizer on the unit sphere together with the achieved inner minimum.
/// `delta` always equals the inner minimum re-evaluated at `omega`; it is
/// positive exactly when the difference vectors are separable from the
/// origin, and non-positive otherwise.
struct MarginSolution {
    RewardWeights omega;
    double delta = 0.0;
};

/// Maximizes min_pi omega . (mu_expert - mu_pi) over the unit ball.
/// Separable instances are solved to machine precision via the minimum-norm
/// point of the difference hull; when the origin lies inside the hull the
/// direction maximizing the (then negative) margin is approximated by a
/// deterministic multi-start ascent on the sphere.
MarginSolution solve_max_margin(const FeatureExpectation& mu_expert,
                                const std::vector<FeatureExpectation>& candidates);

/// Weighted variant over all (pi, pi~, cex) triples; see MarginProblem.
MarginSolution solve_weighted_margin(const MarginProblem& problem);

} // namespace cegal
