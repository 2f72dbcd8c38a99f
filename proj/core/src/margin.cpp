#include "cegal/margin.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>

#include "cegal/errors.hpp"
#include "cegal/rng.hpp"

namespace cegal {

namespace {

using Vec = std::vector<double>;

double dot(const Vec& a, const Vec& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

Vec normalized_or(const Vec& a, const Vec& fallback) {
    const double n = norm(a);
    if (n <= 0.0) return fallback;
    Vec out(a);
    for (double& v : out) v /= n;
    return out;
}

/// Linear minimization oracle over an implicit finite point set: returns the
/// point of the set minimizing x . d, with deterministic tie-breaking.
using MinDotOracle = std::function<Vec(const Vec&)>;

/// Wolfe's minimum-norm-point algorithm over conv(points). The point set is
/// accessed only through the oracle, so Minkowski-structured sets stay cheap.
/// Finitely convergent; the returned point is optimal up to the duality gap
/// ||x||^2 - min_i x.d_i <= eps.
Vec min_norm_point(int dim, const MinDotOracle& oracle) {
    // Particular solution of the affine least-norm system over the active
    // set: [G 1; 1^T 0] [alpha; -mu] = [0; 1]. Near-singular pivots (affinely
    // dependent active points) zero the corresponding coefficient.
    auto affine_minimizer = [](const std::vector<Vec>& pts) {
        const int m = static_cast<int>(pts.size());
        const int n = m + 1;
        std::vector<Vec> a(n, Vec(n + 1, 0.0));
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < m; ++j) a[i][j] = dot(pts[i], pts[j]);
            a[i][m] = 1.0;
        }
        for (int j = 0; j < m; ++j) a[m][j] = 1.0;
        a[m][n] = 1.0;

        double scale = 1.0;
        for (int i = 0; i < m; ++i) scale = std::max(scale, std::abs(a[i][i]));
        std::vector<int> where(n, -1);
        int row = 0;
        for (int col = 0; col < n && row < n; ++col) {
            int pivot = row;
            for (int i = row; i < n; ++i)
                if (std::abs(a[i][col]) > std::abs(a[pivot][col])) pivot = i;
            if (std::abs(a[pivot][col]) < 1e-13 * scale) continue;
            std::swap(a[pivot], a[row]);
            for (int i = 0; i < n; ++i) {
                if (i == row) continue;
                const double f = a[i][col] / a[row][col];
                for (int j = col; j <= n; ++j) a[i][j] -= f * a[row][j];
            }
            where[col] = row;
            ++row;
        }
        Vec alpha(m, 0.0);
        for (int j = 0; j < m; ++j)
            if (where[j] >= 0) alpha[j] = a[where[j]][n] / a[where[j]][j];
        return alpha;
    };

    std::vector<Vec> active;
    Vec lambda;

    Vec x = oracle(Vec(dim, 0.0));
    active.push_back(x);
    lambda.push_back(1.0);

    for (int major = 0; major < 10000; ++major) {
        const Vec candidate = oracle(x);
        const double xx = dot(x, x);
        if (dot(x, candidate) > xx - 1e-12 * std::max(1.0, xx)) break;
        if (std::find(active.begin(), active.end(), candidate) != active.end()) break;
        active.push_back(candidate);
        lambda.push_back(0.0);

        for (int minor = 0; minor < 1000; ++minor) {
            const Vec alpha = affine_minimizer(active);
            const bool feasible = std::all_of(alpha.begin(), alpha.end(),
                                              [](double v) { return v > -1e-12; });
            if (feasible) {
                lambda = alpha;
                break;
            }
            double theta = 1.0;
            for (std::size_t i = 0; i < alpha.size(); ++i)
                if (alpha[i] < lambda[i])
                    theta = std::min(theta, lambda[i] / (lambda[i] - alpha[i]));
            for (std::size_t i = 0; i < lambda.size(); ++i)
                lambda[i] = (1.0 - theta) * lambda[i] + theta * alpha[i];
            for (int i = static_cast<int>(lambda.size()) - 1; i >= 0; --i) {
                if (lambda[i] <= 1e-12) {
                    lambda.erase(lambda.begin() + i);
                    active.erase(active.begin() + i);
                }
            }
        }

        x.assign(dim, 0.0);
        for (std::size_t i = 0; i < active.size(); ++i)
            for (int j = 0; j < dim; ++j) x[j] += lambda[i] * active[i][j];
    }
    return x;
}

/// Deterministic search for a maximizer of min_i omega . d_i on the unit
/// sphere. Used only when the origin lies in the hull, where the ball optimum
/// degenerates to zero and the smooth min-norm route gives no direction.
/// Combines multi-start projected subgradient ascent with exact two-point
/// equalization candidates and a shrinking-radius local polish.
Vec sphere_ascent(int dim, const std::function<double(const Vec&)>& objective,
                  const MinDotOracle& oracle, const std::vector<Vec>& seed_points) {
    const Vec zero(dim, 0.0);
    std::vector<Vec> starts;
    for (int j = 0; j < dim && j < 8; ++j) {
        Vec e(dim, 0.0);
        e[j] = 1.0;
        starts.push_back(e);
        e[j] = -1.0;
        starts.push_back(e);
    }
    for (std::size_t i = 0; i < seed_points.size() && i < 16; ++i) {
        const Vec& p = seed_points[i];
        if (norm(p) == 0.0) continue;
        starts.push_back(normalized_or(p, zero));
        Vec neg(p);
        for (double& v : neg) v = -v;
        starts.push_back(normalized_or(neg, zero));
    }
    // Directions equalizing two seed constraints: the maximizer of a
    // piecewise-linear minimum typically activates more than one of them.
    for (std::size_t i = 0; i < seed_points.size() && i < 32; ++i) {
        for (std::size_t j = i + 1; j < seed_points.size() && j < 32; ++j) {
            const Vec& a = seed_points[i];
            const Vec& b = seed_points[j];
            const double aa = dot(a, a), ab = dot(a, b), bb = dot(b, b);
            const double ca = bb - ab, cb = aa - ab;
            if (std::abs(ca) + std::abs(cb) < 1e-15) continue;
            Vec u(dim);
            for (int d = 0; d < dim; ++d) u[d] = ca * a[d] + cb * b[d];
            if (norm(u) < 1e-12) continue;
            starts.push_back(normalized_or(u, zero));
            for (double& v : u) v = -v;
            starts.push_back(normalized_or(u, zero));
        }
    }
    Rng rng(0x5eedULL);
    for (int r = 0; r < 8; ++r) {
        Vec v(dim);
        for (double& x : v) x = rng.next_double() * 2.0 - 1.0;
        if (norm(v) > 0.0) starts.push_back(normalized_or(v, zero));
    }

    Vec best = starts.front();
    double best_value = objective(best);
    auto consider = [&](const Vec& w) {
        const double value = objective(w);
        if (value > best_value) {
            best_value = value;
            best = w;
        }
    };
    for (const auto& start : starts) {
        consider(start);
        Vec omega = start;
        for (int it = 1; it <= 600; ++it) {
            const Vec g = oracle(omega); // subgradient of the inner min
            const double gw = dot(g, omega);
            Vec tangent(dim);
            for (int j = 0; j < dim; ++j) tangent[j] = g[j] - gw * omega[j];
            const double tn = norm(tangent);
            if (tn < 1e-14) break;
            const double step = 0.5 / std::sqrt(static_cast<double>(it));
            for (int j = 0; j < dim; ++j) omega[j] += step * tangent[j] / tn;
            omega = normalized_or(omega, start);
            consider(omega);
        }
    }

    // Derivative-free polish around the incumbent.
    for (double radius = 0.1; radius > 1e-8; radius *= 0.4) {
        for (int trial = 0; trial < 48; ++trial) {
            Vec w = best;
            for (int j = 0; j < dim; ++j) w[j] += radius * (rng.next_double() * 2.0 - 1.0);
            if (norm(w) == 0.0) continue;
            consider(normalized_or(w, zero));
        }
    }
    return best;
}

struct DifferenceSet {
    int dim = 0;
    MinDotOracle argmin_dot;
    std::function<double(const Vec&)> min_value;
    std::vector<Vec> representatives; // a few members, used to seed fallbacks
};

MarginSolution solve_over(const DifferenceSet& set) {
    const Vec x = min_norm_point(set.dim, set.argmin_dot);

    Vec omega;
    if (norm(x) > 1e-9) {
        omega = normalized_or(x, Vec(set.dim, 0.0));
    } else {
        omega = sphere_ascent(set.dim, set.min_value, set.argmin_dot, set.representatives);
    }
    MarginSolution solution;
    solution.delta = set.min_value(omega);
    solution.omega = RewardWeights{std::move(omega)};
    return solution;
}

DifferenceSet plain_difference_set(const FeatureExpectation& mu_expert,
                                   const std::vector<FeatureExpectation>& candidates) {
    const int dim = mu_expert.dim();
    auto diffs = std::make_shared<std::vector<Vec>>();
    diffs->reserve(candidates.size());
    for (const auto& c : candidates) {
        if (c.dim() != dim)
            throw DimensionMismatch("candidate dimension " + std::to_string(c.dim()) +
                                    " does not match expert dimension " + std::to_string(dim));
        Vec d(dim);
        for (int j = 0; j < dim; ++j) d[j] = mu_expert.mu[j] - c.mu[j];
        diffs->push_back(std::move(d));
    }

    DifferenceSet set;
    set.dim = dim;
    set.argmin_dot = [diffs](const Vec& x) {
        const Vec* best = &diffs->front();
        double best_value = dot(x, *best);
        for (const auto& d : *diffs) {
            const double v = dot(x, d);
            if (v < best_value) {
                best_value = v;
                best = &d;
            }
        }
        return *best;
    };
    set.min_value = [diffs](const Vec& w) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& d : *diffs) best = std::min(best, dot(w, d));
        return best;
    };
    set.representatives = *diffs;
    return set;
}

} // namespace

MarginSolution solve_max_margin(const FeatureExpectation& mu_expert,
                                const std::vector<FeatureExpectation>& candidates) {
    if (candidates.empty())
        throw InvalidModel("candidate set must be nonempty");
    return solve_over(plain_difference_set(mu_expert, candidates));
}

MarginSolution solve_weighted_margin(const MarginProblem& problem) {
    if (!(problem.k >= 0.0 && problem.k <= 1.0))
        throw InvalidModel("k must lie in [0,1]");
    if (problem.safe_candidates.empty())
        throw InvalidModel("safe candidate set must be nonempty");

    // No counterexamples: the separation term is dropped and the objective
    // coincides with the plain matching objective for every k.
    if (problem.counterexamples.empty())
        return solve_max_margin(problem.mu_expert, problem.safe_candidates);

    const int dim = problem.mu_expert.dim();
    for (const auto& c : problem.safe_candidates)
        if (c.dim() != dim) throw DimensionMismatch("safe candidate dimension mismatch");
    for (const auto& c : problem.counterexamples)
        if (c.dim() != dim) throw DimensionMismatch("counterexample dimension mismatch");

    const double k = problem.k;
    auto expert = std::make_shared<Vec>(problem.mu_expert.mu);
    auto safe = std::make_shared<std::vector<Vec>>();
    for (const auto& c : problem.safe_candidates) safe->push_back(c.mu);
    auto cexs = std::make_shared<std::vector<Vec>>();
    for (const auto& c : problem.counterexamples) cexs->push_back(c.mu);

    // The inner minimum over (pi, pi~, cex) splits into three independent
    // scans, so the triple set never needs to be materialized.
    auto assemble = [expert, k, dim](const Vec& pi, const Vec& pi_tilde, const Vec& cex) {
        Vec out(dim);
        for (int j = 0; j < dim; ++j)
            out[j] = k * ((*expert)[j] - pi[j]) + (1.0 - k) * (pi_tilde[j] - cex[j]);
        return out;
    };

    DifferenceSet set;
    set.dim = dim;
    set.argmin_dot = [expert, safe, cexs, k, assemble](const Vec& x) {
        const Vec* best_pi = &safe->front();
        double best_pi_value = std::numeric_limits<double>::infinity();
        const Vec* best_tilde = &safe->front();
        double best_tilde_value = std::numeric_limits<double>::infinity();
        for (const auto& s : *safe) {
            const double match = k * (dot(x, *expert) - dot(x, s));
            if (match < best_pi_value) {
                best_pi_value = match;
                best_pi = &s;
            }
            const double sep = (1.0 - k) * dot(x, s);
            if (sep < best_tilde_value) {
                best_tilde_value = sep;
                best_tilde = &s;
            }
        }
        const Vec* best_cex = &cexs->front();
        double best_cex_value = -std::numeric_limits<double>::infinity();
        for (const auto& c : *cexs) {
            const double v = (1.0 - k) * dot(x, c);
            if (v > best_cex_value) {
                best_cex_value = v;
                best_cex = &c;
            }
        }
        return assemble(*best_pi, *best_tilde, *best_cex);
    };
    set.min_value = [expert, safe, cexs, k](const Vec& w) {
        double match = std::numeric_limits<double>::infinity();
        double keep = std::numeric_limits<double>::infinity();
        double push = -std::numeric_limits<double>::infinity();
        for (const auto& s : *safe) {
            match = std::min(match, dot(w, *expert) - dot(w, s));
            keep = std::min(keep, dot(w, s));
        }
        for (const auto& c : *cexs) push = std::max(push, dot(w, c));
        return k * match + (1.0 - k) * (keep - push);
    };
    for (std::size_t i = 0; i < safe->size() && i < 4; ++i)
        for (std::size_t j = 0; j < cexs->size() && j < 4; ++j)
            set.representatives.push_back(assemble((*safe)[i], (*safe)[i], (*cexs)[j]));
    return solve_over(set);
}

} // namespace cegal
