#include "cegal/mdp_ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cegal/errors.hpp"
#include "cegal/rng.hpp"

namespace cegal {

Dtmc induce_dtmc(const Mdp& mdp, const Policy& policy) {
    if (policy.size() != mdp.n_states())
        throw IncompletePolicy("policy covers " + std::to_string(policy.size()) + " of " +
                               std::to_string(mdp.n_states()) + " states");
    std::vector<SparseRow> rows;
    rows.reserve(mdp.n_states());
    for (int s = 0; s < mdp.n_states(); ++s) {
        const int a = policy(s);
        if (a < 0 || a >= mdp.n_actions())
            throw IncompletePolicy("state " + std::to_string(s) + ": action " + std::to_string(a) +
                                   " out of range");
        rows.push_back(mdp.row(s, a));
    }
    return Dtmc(mdp.n_states(), std::move(rows), mdp.initial_state(), mdp.labels());
}

OptimalSolution solve_optimal_policy(const Mdp& mdp, const std::vector<double>& reward) {
    const int n = mdp.n_states();
    if (static_cast<int>(reward.size()) != n)
        throw InvalidModel("reward must assign a value to every state");
    for (double r : reward)
        if (!std::isfinite(r)) throw InvalidModel("reward must be finite");

    const double gamma = mdp.gamma();
    std::vector<double> value(n, 0.0);
    std::vector<double> next(n, 0.0);

    for (int sweep = 0; sweep < kDpMaxSweeps; ++sweep) {
        double residual = 0.0;
        for (int s = 0; s < n; ++s) {
            double best = -std::numeric_limits<double>::infinity();
            for (int a = 0; a < mdp.n_actions(); ++a) {
                double q = 0.0;
                for (const auto& [succ, p] : mdp.row(s, a)) q += p * value[succ];
                best = std::max(best, q);
            }
            next[s] = reward[s] + gamma * best;
            residual = std::max(residual, std::abs(next[s] - value[s]));
        }
        value.swap(next);
        if (residual < kDpTolerance) break;
    }

    Policy policy;
    policy.action_of.assign(n, 0);
    for (int s = 0; s < n; ++s) {
        double best = -std::numeric_limits<double>::infinity();
        int best_a = 0;
        for (int a = 0; a < mdp.n_actions(); ++a) {
            double q = 0.0;
            for (const auto& [succ, p] : mdp.row(s, a)) q += p * value[succ];
            if (q > best) {
                best = q;
                best_a = a;
            }
        }
        policy.action_of[s] = best_a;
    }
    return {std::move(policy), std::move(value)};
}

std::vector<std::vector<double>> expected_feature_matrix(const Dtmc& chain, double gamma,
                                                         const FeatureMap& features) {
    const int n = chain.n_states();
    if (features.n_states() != n)
        throw InvalidModel("feature map must cover every state");
    const int k = features.k();

    std::vector<std::vector<double>> mu(n, std::vector<double>(k, 0.0));
    std::vector<std::vector<double>> next(n, std::vector<double>(k, 0.0));

    for (int sweep = 0; sweep < kDpMaxSweeps; ++sweep) {
        double residual = 0.0;
        for (int s = 0; s < n; ++s) {
            auto& out = next[s];
            out.assign(features.at(s).begin(), features.at(s).end());
            for (const auto& [succ, p] : chain.row(s)) {
                const double w = gamma * p;
                const auto& in = mu[succ];
                for (int j = 0; j < k; ++j) out[j] += w * in[j];
            }
            for (int j = 0; j < k; ++j)
                residual = std::max(residual, std::abs(out[j] - mu[s][j]));
        }
        mu.swap(next);
        if (residual < kDpTolerance) break;
    }
    return mu;
}

FeatureExpectation expected_features(const Mdp& mdp, const Policy& policy,
                                     const FeatureMap& features) {
    const Dtmc chain = induce_dtmc(mdp, policy);
    auto mu = expected_feature_matrix(chain, mdp.gamma(), features);
    return FeatureExpectation{std::move(mu[chain.initial_state()])};
}

std::vector<double> discounted_feature_sum(const std::vector<int>& states,
                                           const FeatureMap& features, double gamma) {
    std::vector<double> acc(features.k(), 0.0);
    double w = 1.0;
    for (int s : states) {
        const auto& f = features.at(s);
        for (int j = 0; j < features.k(); ++j) acc[j] += w * f[j];
        w *= gamma;
    }
    return acc;
}

FeatureExpectation estimate_expert_features(const std::vector<Trajectory>& trajectories,
                                            const FeatureMap& features, double gamma,
                                            int horizon) {
    if (trajectories.empty())
        throw NoDemonstrations("at least one demonstration trajectory is required");
    if (horizon <= 0) throw InvalidModel("horizon must be positive");

    const int k = features.k();
    std::vector<double> acc(k, 0.0);
    for (const auto& traj : trajectories) {
        if (traj.states.empty())
            throw NoDemonstrations("demonstration with no states");
        double w = 1.0;
        for (int t = 0; t < horizon; ++t) {
            const int idx = std::min<int>(t, static_cast<int>(traj.states.size()) - 1);
            const auto& f = features.at(traj.states[idx]);
            for (int j = 0; j < k; ++j) acc[j] += w * f[j];
            w *= gamma;
        }
    }
    const double inv_m = 1.0 / static_cast<double>(trajectories.size());
    for (double& v : acc) v *= inv_m;
    return FeatureExpectation{std::move(acc)};
}

std::vector<Trajectory> sample_trajectories(const Mdp& mdp, const Policy& policy, int n,
                                            int horizon, std::uint64_t seed) {
    if (n < 1) throw InvalidModel("trajectory count must be positive");
    if (horizon < 0) throw InvalidModel("horizon must be nonnegative");
    const Dtmc chain = induce_dtmc(mdp, policy);

    Rng rng(seed);
    std::vector<Trajectory> out;
    out.reserve(n);
    for (int i = 0; i < n; ++i) {
        Trajectory traj;
        traj.states.reserve(horizon + 1);
        int s = chain.initial_state();
        traj.states.push_back(s);
        for (int t = 0; t < horizon; ++t) {
            const double u = rng.next_double();
            double cum = 0.0;
            const auto& row = chain.row(s);
            int next = row.back().first;
            for (const auto& [succ, p] : row) {
                cum += p;
                if (u < cum) {
                    next = succ;
                    break;
                }
            }
            s = next;
            traj.states.push_back(s);
        }
        out.push_back(std::move(traj));
    }
    return out;
}

} // namespace cegal
