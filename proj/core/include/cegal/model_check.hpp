#pragma once

#include <vector>

#include "cegal/pctl.hpp"
#include "cegal/types.hpp"

namespace cegal {

/// Residual at which the unbounded-until linear solve stops.
inline constexpr double kCheckTolerance = 1e-10;

/// Outcome of checking a probability formula at the initial state.
struct Verdict {
    bool satisfied = false;
    double probability = 0.0;
    PctlFormula formula;
};

/// Per-state probability of reaching a phi2 state within `bound` steps along
/// phi1 states: the value x_t of the recurrence
///   x_0(s)   = [s in phi2]
///   x_{j+1}(s) = 1 if s in phi2; 0 if s outside phi1 and phi2;
///                sum_s' T(s,s') x_j(s') otherwise.
std::vector<double> check_bounded_until(const Dtmc& chain, const std::vector<char>& phi1,
                                        const std::vector<char>& phi2, int bound);

/// Per-state probability of eventually reaching phi2 along phi1 states.
/// Identifies the probability-0 and probability-1 partitions by graph
/// reachability and solves the residual system iteratively.
std::vector<double> check_unbounded_until(const Dtmc& chain, const std::vector<char>& phi1,
                                          const std::vector<char>& phi2);

/// Checks a top-level P{cmp}p[ phi1 U[<=t] phi2 ] formula at the initial
/// state. Throws UnsupportedFormula for anything else (Next, nested P).
Verdict verify(const Dtmc& chain, const PctlFormula& formula);

} // namespace cegal
