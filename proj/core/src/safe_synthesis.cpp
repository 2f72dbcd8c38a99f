#include "cegal/safe_synthesis.hpp"

#include <algorithm>
#include <cmath>

#include "cegal/errors.hpp"
#include "cegal/mdp_ops.hpp"

namespace cegal {

namespace {

// One backward step of the minimizing Bellman operator for until values.
void min_until_step(const Mdp& mdp, const std::vector<char>& phi1, const std::vector<char>& phi2,
                    const std::vector<double>& in, std::vector<double>& out) {
    const int n = mdp.n_states();
    for (int s = 0; s < n; ++s) {
        if (phi2[s]) {
            out[s] = 1.0;
        } else if (!phi1[s]) {
            out[s] = 0.0;
        } else {
            double best = std::numeric_limits<double>::infinity();
            for (int a = 0; a < mdp.n_actions(); ++a) {
                double q = 0.0;
                for (const auto& [succ, p] : mdp.row(s, a)) q += p * in[succ];
                best = std::min(best, q);
            }
            out[s] = best;
        }
    }
}

Policy greedy_min_policy(const Mdp& mdp, const std::vector<char>& phi1,
                         const std::vector<char>& phi2, const std::vector<double>& value) {
    const int n = mdp.n_states();
    Policy policy;
    policy.action_of.assign(n, 0);
    for (int s = 0; s < n; ++s) {
        if (phi2[s] || !phi1[s]) continue; // value fixed; lowest action by default
        double best = std::numeric_limits<double>::infinity();
        int best_a = 0;
        for (int a = 0; a < mdp.n_actions(); ++a) {
            double q = 0.0;
            for (const auto& [succ, p] : mdp.row(s, a)) q += p * value[succ];
            if (q < best) {
                best = q;
                best_a = a;
            }
        }
        policy.action_of[s] = best_a;
    }
    return policy;
}

} // namespace

SynthesisResult synthesize_min_reach_policy(const Mdp& mdp, const PctlFormula& formula) {
    using pctl::PathFormula;
    using pctl::StateFormula;

    if (!formula || formula->kind != StateFormula::Kind::Prob ||
        formula->path->kind != PathFormula::Kind::Until)
        throw UnsupportedFormula("synthesis requires a probability bound over an until formula");
    if (formula->cmp != pctl::Comparison::LessEq && formula->cmp != pctl::Comparison::Less)
        throw UnsupportedFormula("synthesis minimizes the path probability, so the formula must be an upper bound");

    // Predicates are label sets, so any policy induces the same state truth
    // values; evaluate them once on an arbitrary induced chain.
    Policy probe;
    probe.action_of.assign(mdp.n_states(), 0);
    const Dtmc probe_chain = induce_dtmc(mdp, probe);
    const std::vector<char> phi1 = pctl::evaluate_states(*formula->path->left, probe_chain);
    const std::vector<char> phi2 = pctl::evaluate_states(*formula->path->right, probe_chain);

    const int n = mdp.n_states();
    std::vector<double> value(n, 0.0);
    std::vector<double> next(n, 0.0);
    for (int s = 0; s < n; ++s) value[s] = phi2[s] ? 1.0 : 0.0;

    if (formula->path->bound) {
        // Backward induction: after t steps, value[s] is the t-step optimum
        // and the previous iterate drives the step-0 decision rule.
        const int t = *formula->path->bound;
        for (int step = 0; step < t; ++step) {
            min_until_step(mdp, phi1, phi2, value, next);
            value.swap(next);
        }
        // value = x_t; the step-0 rule is greedy against x_{t-1}, which is
        // the t-1 step iterate. Recompute it once.
        std::vector<double> prev(n, 0.0);
        for (int s = 0; s < n; ++s) prev[s] = phi2[s] ? 1.0 : 0.0;
        std::vector<double> scratch(n, 0.0);
        for (int step = 0; step + 1 < t; ++step) {
            min_until_step(mdp, phi1, phi2, prev, scratch);
            prev.swap(scratch);
        }
        Policy policy = greedy_min_policy(mdp, phi1, phi2, prev);
        const Verdict projected = verify(induce_dtmc(mdp, policy), formula);
        const double nonstationary = value[mdp.initial_state()];
        const bool nonstationary_ok = formula->cmp == pctl::Comparison::LessEq
                                          ? nonstationary <= formula->threshold
                                          : nonstationary < formula->threshold;
        if (!projected.satisfied && nonstationary_ok) {
            throw InfeasibleStationary(
                "stationary projection reaches " + std::to_string(projected.probability) +
                    " although a step-dependent policy achieves " + std::to_string(nonstationary),
                projected.probability, nonstationary);
        }
        return {std::move(policy), projected.probability};
    }

    // Unbounded case: iterate the minimizing operator from below until the
    // least fixed point is reached.
    for (int sweep = 0; sweep < kDpMaxSweeps; ++sweep) {
        min_until_step(mdp, phi1, phi2, value, next);
        double residual = 0.0;
        for (int s = 0; s < n; ++s) residual = std::max(residual, std::abs(next[s] - value[s]));
        value.swap(next);
        if (residual < 1e-12) break;
    }
    Policy policy = greedy_min_policy(mdp, phi1, phi2, value);
    const Verdict achieved = verify(induce_dtmc(mdp, policy), formula);
    return {std::move(policy), achieved.probability};
}

} // namespace cegal
