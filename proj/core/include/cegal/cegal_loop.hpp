#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "cegal/counterexample.hpp"
#include "cegal/margin.hpp"
#include "cegal/model_check.hpp"
#include "cegal/pctl.hpp"
#include "cegal/types.hpp"

namespace cegal {

/// Tunables of the verification-guided learning loop.
struct CegalConfig {
    /// Feature-distance bound: a policy within this L2 distance of the expert
    /// features terminates the loop.
    double epsilon = 10.0;
    /// The loop gives up shrinking k once |k - inf| falls below sigma.
    double sigma = 1e-5;
    /// Step length of the k shrink on an unsafe policy.
    double alpha = 0.5;
    int max_iters = 50;
    /// Path budget per counterexample extraction.
    int max_cex_paths = kDefaultMaxCexPaths;
    /// Optional smaller mass target for counterexample extraction; see
    /// enumerate_counterexample.
    std::optional<double> cex_threshold;
};

/// Why the loop stopped.
enum class StopReason { InitialPolicyClose, EpsilonClose, KExhausted, IterBudget };

const char* to_string(StopReason reason);

/// What the verifier concluded about one learned policy.
enum class IterationStatus { Sat, Unsat, Duplicate };

/// One transcript row. `k` and `inf` are the values after the update
/// triggered by this iteration's verdict; `delta` is the margin achieved by
/// the solve that produced the next policy (NaN on terminal rows).
struct IterationRecord {
    int iteration = 0;
    double k = 1.0;
    double inf = 0.0;
    double delta = 0.0;
    double probability = 0.0;
    IterationStatus status = IterationStatus::Sat;
    double mu_distance = 0.0;
    /// Set when the counterexample enumeration hit its path budget.
    bool cex_budget_exhausted = false;
};

struct CegalResult {
    Policy policy;
    FeatureExpectation mu;
    Verdict verdict;
    RewardWeights omega;
    StopReason reason = StopReason::InitialPolicyClose;
    std::vector<IterationRecord> transcript;
    int iterations = 0;
};

/// The k update: a safe policy raises the lower bound and resets k to sup;
/// an unsafe one contracts k towards inf by factor (1 - alpha).
struct KSchedule {
    double inf = 0.0;
    double sup = 1.0;
    double k = 1.0;

    void on_sat() {
        inf = k;
        k = sup;
    }
    void on_unsat(double alpha) { k = alpha * inf + (1.0 - alpha) * k; }
    bool exhausted(double sigma) const { return std::abs(k - inf) <= sigma; }
};

/// Runs the counterexample-guided loop: starting from a verified-safe initial
/// policy, alternate model checking with weighted margin optimization until a
/// safe policy epsilon-close to the expert features is found or the schedule
/// or iteration budget runs out. The result always satisfies the formula and
/// is never farther from the expert features than the initial policy.
///
/// Throws UnsafeInitialPolicy when pi0 fails verification.
CegalResult run_cegal(const Mdp& mdp, const FeatureMap& features,
                      const FeatureExpectation& mu_expert, const PctlFormula& formula,
                      const Policy& pi0, const CegalConfig& config);

/// Result of the unverified matching baseline.
struct AlResult {
    Policy policy;
    FeatureExpectation mu;
    RewardWeights omega;
    double delta = 0.0;
    double mu_distance = 0.0;
    int iterations = 0;
};

/// Plain feature-matching apprenticeship loop with no safety checking:
/// iterate margin solve and optimal-policy computation until the margin or
/// the feature distance drops below epsilon, then return the candidate
/// closest to the expert features.
AlResult run_al(const Mdp& mdp, const FeatureMap& features, const FeatureExpectation& mu_expert,
                const Policy& pi_init, double epsilon, int max_iters);

} // namespace cegal
