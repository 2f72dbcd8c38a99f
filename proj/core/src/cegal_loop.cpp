#include "cegal/cegal_loop.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cegal/errors.hpp"
#include "cegal/mdp_ops.hpp"

namespace cegal {

const char* to_string(StopReason reason) {
    switch (reason) {
        case StopReason::InitialPolicyClose: return "InitialPolicyClose";
        case StopReason::EpsilonClose: return "EpsilonClose";
        case StopReason::KExhausted: return "KExhausted";
        case StopReason::IterBudget: return "IterBudget";
    }
    return "?";
}

namespace {

struct SafeCandidate {
    Policy policy;
    FeatureExpectation mu;
    Verdict verdict;
    double distance = 0.0;
};

std::vector<double> to_reward(const RewardWeights& omega, const FeatureMap& features) {
    std::vector<double> reward(features.n_states(), 0.0);
    for (int s = 0; s < features.n_states(); ++s) {
        const auto& f = features.at(s);
        double acc = 0.0;
        for (int j = 0; j < features.k(); ++j) acc += omega.omega[j] * f[j];
        reward[s] = acc;
    }
    return reward;
}

const SafeCandidate& closest(const std::vector<SafeCandidate>& safe_set) {
    const SafeCandidate* best = &safe_set.front();
    for (const auto& c : safe_set)
        if (c.distance < best->distance) best = &c;
    return *best;
}

} // namespace

CegalResult run_cegal(const Mdp& mdp, const FeatureMap& features,
                      const FeatureExpectation& mu_expert, const PctlFormula& formula,
                      const Policy& pi0, const CegalConfig& config) {
    if (!(config.epsilon > 0.0)) throw InvalidModel("epsilon must be positive");
    if (!(config.sigma > 0.0 && config.sigma < 1.0)) throw InvalidModel("sigma must lie in (0,1)");
    if (!(config.alpha > 0.0 && config.alpha < 1.0)) throw InvalidModel("alpha must lie in (0,1)");
    if (config.max_iters < 1) throw InvalidModel("iteration budget must be positive");

    const double nan = std::numeric_limits<double>::quiet_NaN();
    CegalResult result;

    const Verdict v0 = verify(induce_dtmc(mdp, pi0), formula);
    if (!v0.satisfied)
        throw UnsafeInitialPolicy("initial policy reaches probability " +
                                  std::to_string(v0.probability));
    FeatureExpectation mu0 = expected_features(mdp, pi0, features);
    const double d0 = l2_distance(mu_expert, mu0);

    if (d0 <= config.epsilon) {
        result.policy = pi0;
        result.mu = std::move(mu0);
        result.verdict = v0;
        result.omega = RewardWeights{std::vector<double>(features.k(), 0.0)};
        result.reason = StopReason::InitialPolicyClose;
        return result;
    }

    std::vector<SafeCandidate> safe_set;
    safe_set.push_back({pi0, mu0, v0, d0});
    std::vector<FeatureExpectation> safe_features{mu0};
    std::vector<FeatureExpectation> cex_features;
    KSchedule schedule;

    auto solve = [&]() {
        MarginProblem problem;
        problem.mu_expert = mu_expert;
        problem.safe_candidates = safe_features;
        problem.counterexamples = cex_features;
        problem.k = schedule.k;
        return solve_weighted_margin(problem);
    };

    auto finish = [&](const SafeCandidate& chosen, StopReason reason,
                      const RewardWeights& omega) {
        result.policy = chosen.policy;
        result.mu = chosen.mu;
        result.verdict = chosen.verdict;
        result.omega = omega;
        result.reason = reason;
        // Both exits of the loop guarantee a safe result at least as close to
        // the expert features as the initial policy.
        if (!result.verdict.satisfied || chosen.distance > d0 + 1e-9)
            throw Error("internal: loop invariant violated");
        return result;
    };

    // The first learner step matches expert features only (the
    // counterexample set is empty, so the weighted solve degenerates).
    MarginSolution solution = solve();
    result.transcript.push_back({0, schedule.k, schedule.inf, solution.delta, v0.probability,
                                 IterationStatus::Sat, d0, false});
    Policy policy = solve_optimal_policy(mdp, to_reward(solution.omega, features)).policy;

    for (int iter = 1; iter <= config.max_iters; ++iter) {
        result.iterations = iter;

        // A policy identical to a known safe candidate would re-verify SAT
        // and reset k, looping forever; shrink k instead and re-solve.
        const auto known = std::find_if(safe_set.begin(), safe_set.end(),
                                        [&](const SafeCandidate& c) { return c.policy == policy; });
        if (known != safe_set.end()) {
            if (schedule.exhausted(config.sigma)) {
                result.transcript.push_back({iter, schedule.k, schedule.inf, nan,
                                             known->verdict.probability,
                                             IterationStatus::Duplicate, known->distance, false});
                return finish(closest(safe_set), StopReason::KExhausted, solution.omega);
            }
            schedule.on_unsat(config.alpha);
            solution = solve();
            result.transcript.push_back({iter, schedule.k, schedule.inf, solution.delta,
                                         known->verdict.probability, IterationStatus::Duplicate,
                                         known->distance, false});
            policy = solve_optimal_policy(mdp, to_reward(solution.omega, features)).policy;
            continue;
        }

        const Dtmc chain = induce_dtmc(mdp, policy);
        const Verdict verdict = verify(chain, formula);
        FeatureExpectation mu = expected_features(mdp, policy, features);
        const double distance = l2_distance(mu_expert, mu);
        bool budget_exhausted = false;

        if (verdict.satisfied) {
            if (distance <= config.epsilon) {
                result.transcript.push_back({iter, schedule.k, schedule.inf, nan,
                                             verdict.probability, IterationStatus::Sat, distance,
                                             false});
                // Returned directly, without joining the candidate set.
                SafeCandidate chosen{std::move(policy), std::move(mu), verdict, distance};
                return finish(chosen, StopReason::EpsilonClose, solution.omega);
            }
            safe_set.push_back({policy, mu, verdict, distance});
            safe_features.push_back(std::move(mu));
            schedule.on_sat();
        } else {
            Counterexample cex =
                enumerate_counterexample(chain, formula, config.max_cex_paths, config.cex_threshold);
            budget_exhausted = cex.budget_exhausted;
            cex_features.push_back(counterexample_features(cex, features, mdp.gamma()));
            if (schedule.exhausted(config.sigma)) {
                result.transcript.push_back({iter, schedule.k, schedule.inf, nan,
                                             verdict.probability, IterationStatus::Unsat, distance,
                                             budget_exhausted});
                return finish(closest(safe_set), StopReason::KExhausted, solution.omega);
            }
            schedule.on_unsat(config.alpha);
        }

        solution = solve();
        result.transcript.push_back({iter, schedule.k, schedule.inf, solution.delta,
                                     verdict.probability,
                                     verdict.satisfied ? IterationStatus::Sat : IterationStatus::Unsat,
                                     distance, budget_exhausted});
        policy = solve_optimal_policy(mdp, to_reward(solution.omega, features)).policy;
    }

    return finish(closest(safe_set), StopReason::IterBudget, solution.omega);
}

AlResult run_al(const Mdp& mdp, const FeatureMap& features, const FeatureExpectation& mu_expert,
                const Policy& pi_init, double epsilon, int max_iters) {
    if (!(epsilon > 0.0)) throw InvalidModel("epsilon must be positive");
    if (max_iters < 1) throw InvalidModel("iteration budget must be positive");

    struct Candidate {
        Policy policy;
        FeatureExpectation mu;
        double distance;
    };
    std::vector<Candidate> candidates;
    std::vector<FeatureExpectation> candidate_features;

    FeatureExpectation mu0 = expected_features(mdp, pi_init, features);
    candidates.push_back({pi_init, mu0, l2_distance(mu_expert, mu0)});
    candidate_features.push_back(std::move(mu0));

    AlResult result;
    result.omega = RewardWeights{std::vector<double>(features.k(), 0.0)};
    for (int iter = 1; iter <= max_iters; ++iter) {
        result.iterations = iter;
        MarginSolution solution = solve_max_margin(mu_expert, candidate_features);
        result.omega = solution.omega;
        result.delta = solution.delta;
        if (solution.delta <= epsilon) break;

        Policy policy = solve_optimal_policy(mdp, to_reward(solution.omega, features)).policy;
        const bool known = std::any_of(candidates.begin(), candidates.end(),
                                       [&](const Candidate& c) { return c.policy == policy; });
        if (known) break;
        FeatureExpectation mu = expected_features(mdp, policy, features);
        const double distance = l2_distance(mu_expert, mu);
        candidates.push_back({std::move(policy), mu, distance});
        candidate_features.push_back(std::move(mu));
        if (distance <= epsilon) break;
    }

    const Candidate* best = &candidates.front();
    for (const auto& c : candidates)
        if (c.distance < best->distance) best = &c;
    result.policy = best->policy;
    result.mu = best->mu;
    result.mu_distance = best->distance;
    return result;
}

} // namespace cegal
