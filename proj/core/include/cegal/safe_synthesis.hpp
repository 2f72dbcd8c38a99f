#pragma once

#include "cegal/model_check.hpp"
#include "cegal/pctl.hpp"
#include "cegal/types.hpp"

namespace cegal {

struct SynthesisResult {
    Policy policy;
    /// Verified probability of the path formula under the returned policy.
    double probability = 0.0;
};

/// Synthesizes the stationary deterministic policy minimizing the probability
/// of the until path formula inside `formula`, for use as an initial safe
/// policy. Unbounded untils are solved by value iteration to the least fixed
/// point; bounded untils by backward induction over the step horizon followed
/// by projection onto the step-0 decision rule. Ties pick the lowest action
/// index. The reported probability is always re-verified on the induced
/// chain.
///
/// Throws InfeasibleStationary when the stationary projection violates the
/// formula although the step-dependent minimizer satisfies it.
SynthesisResult synthesize_min_reach_policy(const Mdp& mdp, const PctlFormula& formula);

} // namespace cegal
