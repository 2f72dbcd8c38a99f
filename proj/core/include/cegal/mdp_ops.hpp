#pragma once

#include <cstdint>
#include <vector>

#include "cegal/types.hpp"

namespace cegal {

/// Sup-norm residual at which dynamic-programming sweeps stop.
inline constexpr double kDpTolerance = 1e-9;
/// Hard cap on dynamic-programming sweeps.
inline constexpr int kDpMaxSweeps = 100000;

/// Fixes `policy` on `mdp`: row s of the result is the (s, policy(s)) row of
/// the MDP. Labels and initial state carry over unchanged.
/// Throws IncompletePolicy if the policy misses a state or names an action
/// out of range.
Dtmc induce_dtmc(const Mdp& mdp, const Policy& policy);

struct OptimalSolution {
    Policy policy;
    std::vector<double> value;
};

/// Optimal policy and value for a state reward, by value iteration to a
/// sup-norm residual below kDpTolerance. The policy is greedy with respect to
/// the returned value; ties pick the lowest action index.
OptimalSolution solve_optimal_policy(const Mdp& mdp, const std::vector<double>& reward);

/// Expected discounted feature sums, one k-vector per state: the fixed point
/// of mu(s) = f(s) + gamma * sum_s' T_pi(s,s') mu(s'), solved iteratively to
/// sup-norm residual kDpTolerance.
std::vector<std::vector<double>> expected_feature_matrix(const Dtmc& chain, double gamma,
                                                         const FeatureMap& features);

/// Expected features of `policy` on `mdp`, evaluated at the initial state.
FeatureExpectation expected_features(const Mdp& mdp, const Policy& policy,
                                     const FeatureMap& features);

/// Empirical mean of discounted feature sums over demonstrations. Each
/// trajectory is truncated to `horizon` states; shorter ones are padded by
/// repeating their last state. Throws NoDemonstrations on an empty list.
FeatureExpectation estimate_expert_features(const std::vector<Trajectory>& trajectories,
                                            const FeatureMap& features, double gamma,
                                            int horizon);

/// Discounted feature sum of a single state sequence (first state at t=0),
/// with no horizon padding.
std::vector<double> discounted_feature_sum(const std::vector<int>& states,
                                           const FeatureMap& features, double gamma);

/// Samples `n` trajectories of `horizon` transitions (horizon+1 states) from
/// the chain induced by `policy`, starting at the initial state. Reproducible
/// for a fixed seed.
std::vector<Trajectory> sample_trajectories(const Mdp& mdp, const Policy& policy, int n,
                                            int horizon, std::uint64_t seed);

} // namespace cegal
