#include "cegal/model_check.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "cegal/errors.hpp"

namespace cegal {

namespace {

// Backward reachability: states from which `targets` can be reached through
// states where `through` holds (target states themselves always count).
std::vector<char> backward_reachable(const Dtmc& chain, const std::vector<char>& targets,
                                     const std::vector<char>& through) {
    const int n = chain.n_states();
    std::vector<std::vector<int>> predecessors(n);
    for (int s = 0; s < n; ++s)
        for (const auto& [succ, p] : chain.row(s))
            if (p > 0.0) predecessors[succ].push_back(s);

    std::vector<char> reached(n, 0);
    std::deque<int> queue;
    for (int s = 0; s < n; ++s)
        if (targets[s]) {
            reached[s] = 1;
            queue.push_back(s);
        }
    while (!queue.empty()) {
        const int s = queue.front();
        queue.pop_front();
        for (int pred : predecessors[s])
            if (!reached[pred] && through[pred]) {
                reached[pred] = 1;
                queue.push_back(pred);
            }
    }
    return reached;
}

} // namespace

std::vector<double> check_bounded_until(const Dtmc& chain, const std::vector<char>& phi1,
                                        const std::vector<char>& phi2, int bound) {
    const int n = chain.n_states();
    std::vector<double> x(n, 0.0);
    std::vector<double> next(n, 0.0);
    for (int s = 0; s < n; ++s) x[s] = phi2[s] ? 1.0 : 0.0;

    for (int step = 0; step < bound; ++step) {
        for (int s = 0; s < n; ++s) {
            if (phi2[s]) {
                next[s] = 1.0;
            } else if (!phi1[s]) {
                next[s] = 0.0;
            } else {
                double acc = 0.0;
                for (const auto& [succ, p] : chain.row(s)) acc += p * x[succ];
                next[s] = acc;
            }
        }
        x.swap(next);
    }
    return x;
}

std::vector<double> check_unbounded_until(const Dtmc& chain, const std::vector<char>& phi1,
                                          const std::vector<char>& phi2) {
    const int n = chain.n_states();

    // prob-0: complement of "can reach phi2 through phi1 states".
    std::vector<char> can_reach = backward_reachable(chain, phi2, phi1);

    // prob-1: complement of "can reach a prob-0 state through phi1 & !phi2".
    std::vector<char> prob0(n, 0);
    for (int s = 0; s < n; ++s) prob0[s] = can_reach[s] ? 0 : 1;
    std::vector<char> through(n, 0);
    for (int s = 0; s < n; ++s) through[s] = phi1[s] && !phi2[s];
    std::vector<char> reaches_prob0 = backward_reachable(chain, prob0, through);

    std::vector<double> x(n, 0.0);
    std::vector<char> interior(n, 0);
    for (int s = 0; s < n; ++s) {
        if (prob0[s]) {
            x[s] = 0.0;
        } else if (!reaches_prob0[s]) {
            x[s] = 1.0;
        } else {
            interior[s] = 1;
        }
    }

    // Gauss-Seidel on the remaining states. From each of them the process
    // leaves the interior set with probability 1, so the sweep contracts.
    for (int sweep = 0; sweep < 2000000; ++sweep) {
        double residual = 0.0;
        for (int s = 0; s < n; ++s) {
            if (!interior[s]) continue;
            double acc = 0.0;
            for (const auto& [succ, p] : chain.row(s)) acc += p * x[succ];
            residual = std::max(residual, std::abs(acc - x[s]));
            x[s] = acc;
        }
        if (residual < kCheckTolerance * 1e-2) break;
    }
    return x;
}

Verdict verify(const Dtmc& chain, const PctlFormula& formula) {
    using pctl::Comparison;
    using pctl::PathFormula;
    using pctl::StateFormula;

    if (!formula || formula->kind != StateFormula::Kind::Prob)
        throw UnsupportedFormula("top-level formula must be a probability operator");
    const PathFormula& path = *formula->path;
    if (path.kind != PathFormula::Kind::Until)
        throw UnsupportedFormula("only until path formulas are checkable");

    const std::vector<char> phi1 = pctl::evaluate_states(*path.left, chain);
    const std::vector<char> phi2 = pctl::evaluate_states(*path.right, chain);

    std::vector<double> values = path.bound
                                     ? check_bounded_until(chain, phi1, phi2, *path.bound)
                                     : check_unbounded_until(chain, phi1, phi2);
    const double probability = values[chain.initial_state()];

    bool satisfied = false;
    switch (formula->cmp) {
        case Comparison::LessEq: satisfied = probability <= formula->threshold; break;
        case Comparison::GreaterEq: satisfied = probability >= formula->threshold; break;
        case Comparison::Less: satisfied = probability < formula->threshold; break;
        case Comparison::Greater: satisfied = probability > formula->threshold; break;
    }
    return Verdict{satisfied, probability, formula};
}

} // namespace cegal
