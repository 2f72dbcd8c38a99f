#pragma once

// Independent reference implementations used by the test suites to compute
// expected values: dense linear solves, exhaustive policy enumeration,
// explicit path enumeration and sphere grid search. These deliberately avoid
// the library's solver paths.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "cegal/rng.hpp"
#include "cegal/types.hpp"

namespace oracles {

using cegal::Dtmc;
using cegal::FeatureMap;
using cegal::LabelMap;
using cegal::Mdp;
using cegal::Policy;
using cegal::SparseRow;

// --- dense linear algebra -------------------------------------------------

/// Solves A x = b by Gaussian elimination with partial pivoting.
inline std::vector<double> solve_dense(std::vector<std::vector<double>> a,
                                       std::vector<double> b) {
    const int n = static_cast<int>(a.size());
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int i = col + 1; i < n; ++i)
            if (std::abs(a[i][col]) > std::abs(a[pivot][col])) pivot = i;
        if (std::abs(a[pivot][col]) < 1e-14) throw std::runtime_error("singular system");
        std::swap(a[pivot], a[col]);
        std::swap(b[pivot], b[col]);
        for (int i = col + 1; i < n; ++i) {
            const double f = a[i][col] / a[col][col];
            for (int j = col; j < n; ++j) a[i][j] -= f * a[col][j];
            b[i] -= f * b[col];
        }
    }
    std::vector<double> x(n, 0.0);
    for (int i = n - 1; i >= 0; --i) {
        double acc = b[i];
        for (int j = i + 1; j < n; ++j) acc -= a[i][j] * x[j];
        x[i] = acc / a[i][i];
    }
    return x;
}

/// Exact policy value: solves (I - gamma T_pi) v = r densely.
inline std::vector<double> evaluate_policy_dense(const Mdp& mdp, const Policy& policy,
                                                 const std::vector<double>& reward) {
    const int n = mdp.n_states();
    std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
    for (int s = 0; s < n; ++s) {
        a[s][s] = 1.0;
        for (const auto& [succ, p] : mdp.row(s, policy(s))) a[s][succ] -= mdp.gamma() * p;
    }
    return solve_dense(std::move(a), reward);
}

/// Exact per-state expected discounted feature sums via one dense solve per
/// feature dimension.
inline std::vector<std::vector<double>> expected_features_dense(const Dtmc& chain, double gamma,
                                                                const FeatureMap& features) {
    const int n = chain.n_states();
    std::vector<std::vector<double>> result(n, std::vector<double>(features.k(), 0.0));
    for (int j = 0; j < features.k(); ++j) {
        std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
        std::vector<double> b(n, 0.0);
        for (int s = 0; s < n; ++s) {
            a[s][s] = 1.0;
            for (const auto& [succ, p] : chain.row(s)) a[s][succ] -= gamma * p;
            b[s] = features.at(s)[j];
        }
        const std::vector<double> mu_j = solve_dense(std::move(a), std::move(b));
        for (int s = 0; s < n; ++s) result[s][j] = mu_j[s];
    }
    return result;
}

// --- exhaustive policy enumeration ----------------------------------------

/// Calls `visit` with every deterministic stationary policy of the MDP.
inline void for_each_policy(const Mdp& mdp, const std::function<void(const Policy&)>& visit) {
    const int n = mdp.n_states();
    Policy policy;
    policy.action_of.assign(n, 0);
    while (true) {
        visit(policy);
        int i = 0;
        while (i < n) {
            if (++policy.action_of[i] < mdp.n_actions()) break;
            policy.action_of[i] = 0;
            ++i;
        }
        if (i == n) break;
    }
}

/// Best achievable initial-state value over all deterministic policies,
/// evaluated exactly.
inline double best_value_brute_force(const Mdp& mdp, const std::vector<double>& reward) {
    double best = -std::numeric_limits<double>::infinity();
    for_each_policy(mdp, [&](const Policy& policy) {
        best = std::max(best,
                        evaluate_policy_dense(mdp, policy, reward)[mdp.initial_state()]);
    });
    return best;
}

// --- explicit path enumeration --------------------------------------------

struct EnumeratedPath {
    std::vector<int> states;
    double probability;
};

/// All minimally satisfying paths of (phi1 U<=bound phi2) from the initial
/// state: the final state is the first satisfying phi2, every earlier state
/// satisfies phi1 and not phi2, and the length stays within the bound.
inline std::vector<EnumeratedPath> enumerate_min_sat_paths(const Dtmc& chain,
                                                           const std::vector<char>& phi1,
                                                           const std::vector<char>& phi2,
                                                           int bound) {
    std::vector<EnumeratedPath> result;
    std::vector<int> stack{chain.initial_state()};

    std::function<void(int, double, int)> dfs = [&](int state, double prob, int depth) {
        if (phi2[state]) {
            result.push_back({stack, prob});
            return;
        }
        if (!phi1[state] || depth == bound) return;
        for (const auto& [succ, p] : chain.row(state)) {
            if (p <= 0.0) continue;
            stack.push_back(succ);
            dfs(succ, prob * p, depth + 1);
            stack.pop_back();
        }
    };
    dfs(chain.initial_state(), 1.0, 0);
    return result;
}

/// Total probability of the bounded until, by explicit path enumeration.
inline double bounded_until_brute_force(const Dtmc& chain, const std::vector<char>& phi1,
                                        const std::vector<char>& phi2, int bound) {
    double total = 0.0;
    for (const auto& path : enumerate_min_sat_paths(chain, phi1, phi2, bound))
        total += path.probability;
    return total;
}

/// Smallest number of minimally satisfying paths whose mass exceeds the
/// threshold, by exhaustive subset search with a sound upper-bound prune.
/// Returns -1 when no subset (of any size) exceeds it.
inline int min_counterexample_size_brute_force(std::vector<double> probabilities,
                                               double threshold) {
    std::sort(probabilities.begin(), probabilities.end(), std::greater<>());
    const int n = static_cast<int>(probabilities.size());
    std::vector<double> suffix_top(n + 1, 0.0);

    for (int size = 1; size <= n; ++size) {
        // best achievable mass with `remaining` picks starting at index i
        // is the sum of the next `remaining` entries (sorted descending).
        bool found = false;
        std::function<void(int, int, double)> dfs = [&](int idx, int remaining, double mass) {
            if (found) return;
            if (remaining == 0) {
                if (mass > threshold) found = true;
                return;
            }
            if (idx + remaining > n) return;
            double optimistic = mass;
            for (int j = idx; j < idx + remaining; ++j) optimistic += probabilities[j];
            if (optimistic <= threshold) return;
            dfs(idx + 1, remaining - 1, mass + probabilities[idx]);
            dfs(idx + 1, remaining, mass);
        };
        dfs(0, size, 0.0);
        if (found) return size;
    }
    return -1;
}

// --- sphere grid search ----------------------------------------------------

/// Max over the unit circle (dim 2) or sphere (dim 3) of min_i omega . d_i.
/// Combines a dense angular scan (with local refinement around the best cell)
/// with an enumeration of all stationary directions: for every subset of up
/// to `dim` difference vectors, the +-normalized direction in their span on
/// which their inner products coincide. A maximizer either is smooth (subset
/// of size 1) or equalizes its active set, so the enumeration covers every
/// candidate optimum with independent vectors; the grid covers the rest.
inline double sphere_grid_max_min(const std::vector<std::vector<double>>& diffs, int resolution) {
    const int dim = static_cast<int>(diffs.front().size());
    auto value = [&](const std::vector<double>& w) {
        double m = std::numeric_limits<double>::infinity();
        for (const auto& d : diffs) {
            double acc = 0.0;
            for (int j = 0; j < dim; ++j) acc += w[j] * d[j];
            m = std::min(m, acc);
        }
        return m;
    };

    double stationary_best = -std::numeric_limits<double>::infinity();
    {
        const int n = static_cast<int>(diffs.size());
        std::vector<int> subset;
        std::function<void(int)> visit = [&](int from) {
            if (!subset.empty()) {
                const int m = static_cast<int>(subset.size());
                std::vector<std::vector<double>> gram(m, std::vector<double>(m, 0.0));
                for (int i = 0; i < m; ++i)
                    for (int j = 0; j < m; ++j)
                        for (int d = 0; d < dim; ++d)
                            gram[i][j] += diffs[subset[i]][d] * diffs[subset[j]][d];
                try {
                    const std::vector<double> beta = solve_dense(gram, std::vector<double>(m, 1.0));
                    std::vector<double> u(dim, 0.0);
                    for (int i = 0; i < m; ++i)
                        for (int d = 0; d < dim; ++d) u[d] += beta[i] * diffs[subset[i]][d];
                    double nrm = 0.0;
                    for (double x : u) nrm += x * x;
                    nrm = std::sqrt(nrm);
                    if (nrm > 1e-12) {
                        std::vector<double> w(dim);
                        for (int d = 0; d < dim; ++d) w[d] = u[d] / nrm;
                        stationary_best = std::max(stationary_best, value(w));
                        for (int d = 0; d < dim; ++d) w[d] = -w[d];
                        stationary_best = std::max(stationary_best, value(w));
                    }
                } catch (const std::runtime_error&) {
                    // singular subset; the grid scan covers it
                }
            }
            if (static_cast<int>(subset.size()) == dim) return;
            for (int i = from; i < n; ++i) {
                subset.push_back(i);
                visit(i + 1);
                subset.pop_back();
            }
        };
        visit(0);
    }

    const double pi = std::acos(-1.0);
    if (dim == 1) return std::max(value({1.0}), value({-1.0}));

    if (dim == 2) {
        double best = -std::numeric_limits<double>::infinity();
        double best_angle = 0.0;
        for (int i = 0; i < resolution; ++i) {
            const double a = 2.0 * pi * i / resolution;
            const double v = value({std::cos(a), std::sin(a)});
            if (v > best) {
                best = v;
                best_angle = a;
            }
        }
        double window = 2.0 * pi / resolution;
        for (int round = 0; round < 8; ++round) {
            const double lo = best_angle - window;
            for (int i = 0; i <= 200; ++i) {
                const double a = lo + 2.0 * window * i / 200;
                const double v = value({std::cos(a), std::sin(a)});
                if (v > best) {
                    best = v;
                    best_angle = a;
                }
            }
            window *= 0.1;
        }
        return std::max(best, stationary_best);
    }

    if (dim == 3) {
        auto embed = [](double phi, double theta) {
            return std::vector<double>{std::sin(phi) * std::cos(theta),
                                       std::sin(phi) * std::sin(theta), std::cos(phi)};
        };
        double best = -std::numeric_limits<double>::infinity();
        double best_phi = 0.0, best_theta = 0.0;
        for (int i = 0; i <= resolution; ++i) {
            const double phi = pi * i / resolution;
            const int m = std::max(1, static_cast<int>(2 * resolution * std::sin(phi)) + 1);
            for (int j = 0; j < m; ++j) {
                const double theta = 2.0 * pi * j / m;
                const double v = value(embed(phi, theta));
                if (v > best) {
                    best = v;
                    best_phi = phi;
                    best_theta = theta;
                }
            }
        }
        double window = pi / resolution;
        for (int round = 0; round < 10; ++round) {
            const double phi_lo = best_phi - window;
            const double theta_lo = best_theta - window;
            for (int i = 0; i <= 60; ++i) {
                for (int j = 0; j <= 60; ++j) {
                    const double phi = phi_lo + 2.0 * window * i / 60;
                    const double theta = theta_lo + 2.0 * window * j / 60;
                    const double v = value(embed(phi, theta));
                    if (v > best) {
                        best = v;
                        best_phi = phi;
                        best_theta = theta;
                    }
                }
            }
            window *= 0.2;
        }
        return std::max(best, stationary_best);
    }
    throw std::runtime_error("grid search supports dimensions 1-3");
}

// --- random model generators ------------------------------------------------

/// Random sparse probability row over `n` states with `fanout` successors and
/// probabilities bounded away from zero.
inline SparseRow random_row(cegal::Rng& rng, int n, int fanout) {
    std::vector<int> successors(n);
    std::iota(successors.begin(), successors.end(), 0);
    for (int i = 0; i < fanout; ++i) {
        const int j = i + static_cast<int>(rng.next_double() * (n - i));
        std::swap(successors[i], successors[std::min(j, n - 1)]);
    }
    successors.resize(fanout);
    std::sort(successors.begin(), successors.end());

    std::vector<double> weights(fanout);
    double total = 0.0;
    for (double& w : weights) {
        w = 0.05 + rng.next_double();
        total += w;
    }
    SparseRow row;
    double sum = 0.0;
    for (int i = 0; i < fanout; ++i) {
        double p = weights[i] / total;
        if (i == fanout - 1) p = 1.0 - sum;
        sum += p;
        row.push_back({successors[i], p});
    }
    return row;
}

inline Dtmc random_dtmc(std::uint64_t seed, int n_states, int max_fanout,
                        LabelMap labels = {}) {
    cegal::Rng rng(seed);
    std::vector<SparseRow> rows;
    for (int s = 0; s < n_states; ++s) {
        const int fanout = 1 + static_cast<int>(rng.next_double() * max_fanout);
        rows.push_back(random_row(rng, n_states, std::min(fanout, n_states)));
    }
    return Dtmc(n_states, std::move(rows), 0, std::move(labels));
}

inline Mdp random_mdp(std::uint64_t seed, int n_states, int n_actions, int max_fanout,
                      double gamma, LabelMap labels = {}) {
    cegal::Rng rng(seed);
    std::vector<std::vector<SparseRow>> transitions(n_states,
                                                    std::vector<SparseRow>(n_actions));
    for (int s = 0; s < n_states; ++s)
        for (int a = 0; a < n_actions; ++a) {
            const int fanout = 1 + static_cast<int>(rng.next_double() * max_fanout);
            transitions[s][a] = random_row(rng, n_states, std::min(fanout, n_states));
        }
    return Mdp(n_states, n_actions, std::move(transitions), gamma, 0, std::move(labels));
}

/// Random predicate with roughly `density` fraction of states set.
inline std::vector<char> random_predicate(cegal::Rng& rng, int n, double density) {
    std::vector<char> out(n, 0);
    for (int s = 0; s < n; ++s) out[s] = rng.next_double() < density ? 1 : 0;
    return out;
}

} // namespace oracles
