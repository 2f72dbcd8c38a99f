#include "cegal/counterexample.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "cegal/errors.hpp"

namespace cegal {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

PathGraph build_path_graph(const Dtmc& chain, const std::vector<char>& phi1,
                           const std::vector<char>& phi2, std::optional<int> bound) {
    const int n = chain.n_states();
    PathGraph g;
    g.adjacency.resize(n);
    g.on_graph.assign(n, 0);
    g.accepting.assign(n, 0);
    g.bound = bound;
    g.initial = chain.initial_state();

    for (int s = 0; s < n; ++s) {
        g.on_graph[s] = phi1[s] || phi2[s];
        g.accepting[s] = phi2[s];
    }
    for (int s = 0; s < n; ++s) {
        if (!g.on_graph[s] || g.accepting[s]) continue; // accepting states keep no edges
        for (const auto& [succ, p] : chain.row(s)) {
            if (p <= 0.0 || !g.on_graph[succ]) continue;
            g.adjacency[s].push_back({succ, -std::log(p), p});
        }
    }
    return g;
}

double shortest_accepting_weight(const PathGraph& graph) {
    const int n = static_cast<int>(graph.adjacency.size());
    if (!graph.on_graph[graph.initial]) return kInf;

    if (!graph.bound) {
        // Dijkstra from the initial state; accepting states are the sink.
        std::vector<double> dist(n, kInf);
        using Item = std::pair<double, int>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
        dist[graph.initial] = 0.0;
        heap.push({0.0, graph.initial});
        while (!heap.empty()) {
            auto [d, s] = heap.top();
            heap.pop();
            if (d > dist[s]) continue;
            if (graph.accepting[s]) return d;
            for (const auto& e : graph.adjacency[s]) {
                if (d + e.weight < dist[e.to]) {
                    dist[e.to] = d + e.weight;
                    heap.push({dist[e.to], e.to});
                }
            }
        }
        return kInf;
    }

    // Layered relaxation over the hop expansion.
    const int t = *graph.bound;
    std::vector<double> dist(n, kInf);
    dist[graph.initial] = 0.0;
    double best = graph.accepting[graph.initial] ? 0.0 : kInf;
    for (int step = 0; step < t && !(best == 0.0); ++step) {
        std::vector<double> next(n, kInf);
        for (int s = 0; s < n; ++s) {
            if (dist[s] == kInf || graph.accepting[s]) continue;
            for (const auto& e : graph.adjacency[s])
                next[e.to] = std::min(next[e.to], dist[s] + e.weight);
        }
        for (int s = 0; s < n; ++s)
            if (graph.accepting[s]) best = std::min(best, next[s]);
        dist.swap(next);
    }
    return best;
}

namespace {

// Exact best-completion probabilities used to guide the path enumeration.
// Bounded case: table[r][s] = most probable minimally satisfying suffix from
// s with r steps of budget left. Unbounded case: a single vector computed by
// a max-probability Dijkstra towards the accepting states.
struct CompletionBound {
    std::vector<std::vector<double>> bounded; // indexed [remaining][state]
    std::vector<double> unbounded;
};

CompletionBound make_completion_bound(const PathGraph& g) {
    const int n = static_cast<int>(g.adjacency.size());
    CompletionBound h;
    if (g.bound) {
        const int t = *g.bound;
        h.bounded.assign(t + 1, std::vector<double>(n, 0.0));
        for (int s = 0; s < n; ++s)
            if (g.accepting[s])
                for (int r = 0; r <= t; ++r) h.bounded[r][s] = 1.0;
        for (int r = 1; r <= t; ++r) {
            for (int s = 0; s < n; ++s) {
                if (g.accepting[s] || !g.on_graph[s]) continue;
                double best = 0.0;
                for (const auto& e : g.adjacency[s])
                    best = std::max(best, e.probability * h.bounded[r - 1][e.to]);
                h.bounded[r][s] = best;
            }
        }
    } else {
        h.unbounded.assign(n, 0.0);
        std::vector<std::vector<PathGraph::Edge>> reverse(n);
        for (int s = 0; s < n; ++s)
            for (const auto& e : g.adjacency[s]) reverse[e.to].push_back({s, e.weight, e.probability});
        using Item = std::pair<double, int>; // (probability, state), max-heap
        std::priority_queue<Item> heap;
        for (int s = 0; s < n; ++s)
            if (g.accepting[s]) {
                h.unbounded[s] = 1.0;
                heap.push({1.0, s});
            }
        while (!heap.empty()) {
            auto [p, s] = heap.top();
            heap.pop();
            if (p < h.unbounded[s]) continue;
            for (const auto& e : reverse[s]) {
                const double cand = p * e.probability;
                if (cand > h.unbounded[e.to]) {
                    h.unbounded[e.to] = cand;
                    heap.push({cand, e.to});
                }
            }
        }
    }
    return h;
}

struct SearchNode {
    int state;
    int depth;
    double probability; // exact probability of the prefix
    double priority;    // probability * best completion, an upper bound
    int parent;         // index into the node arena, -1 at the root
};

std::vector<int> reconstruct(const std::vector<SearchNode>& arena, int index) {
    std::vector<int> states;
    for (int i = index; i >= 0; i = arena[i].parent) states.push_back(arena[i].state);
    std::reverse(states.begin(), states.end());
    return states;
}

// Orders the frontier by descending priority; exact priority ties fall back
// to lexicographic order of the (partial) state sequences so that equal-mass
// paths are emitted in a deterministic, reproducible order.
struct FrontierCompare {
    const std::vector<SearchNode>* arena;

    bool operator()(int a, int b) const {
        const auto& na = (*arena)[a];
        const auto& nb = (*arena)[b];
        if (na.priority != nb.priority) return na.priority < nb.priority;
        const std::vector<int> sa = reconstruct(*arena, a);
        const std::vector<int> sb = reconstruct(*arena, b);
        return sb < sa;
    }
};

} // namespace

Counterexample enumerate_counterexample(const Dtmc& chain, const PctlFormula& formula,
                                        int max_paths,
                                        std::optional<double> threshold_override) {
    using pctl::Comparison;
    using pctl::PathFormula;
    using pctl::StateFormula;

    if (!formula || formula->kind != StateFormula::Kind::Prob ||
        formula->path->kind != PathFormula::Kind::Until)
        throw UnsupportedFormula("counterexamples require a probability bound over an until formula");
    if (formula->cmp == Comparison::GreaterEq || formula->cmp == Comparison::Greater)
        throw UnsupportedFormula("counterexamples exist only for upper probability bounds");
    if (max_paths < 1) throw InvalidModel("max_paths must be positive");

    const Verdict verdict = verify(chain, formula);
    if (verdict.satisfied)
        throw FormulaSatisfied("probability " + std::to_string(verdict.probability) +
                               " respects the bound; no counterexample exists");

    const double target = threshold_override.value_or(formula->threshold);
    // For P<=p a witness needs mass strictly above p; for P<p mass >= p does.
    const bool strict_formula = formula->cmp == Comparison::LessEq;
    auto reached = [&](double mass) { return strict_formula ? mass > target : mass >= target; };

    const std::vector<char> phi1 = pctl::evaluate_states(*formula->path->left, chain);
    const std::vector<char> phi2 = pctl::evaluate_states(*formula->path->right, chain);
    const PathGraph graph = build_path_graph(chain, phi1, phi2, formula->path->bound);
    const CompletionBound bound = make_completion_bound(graph);
    const int hop_limit = graph.bound ? *graph.bound : std::numeric_limits<int>::max();

    Counterexample cex;
    cex.formula = formula;
    cex.threshold_used = target;

    std::vector<SearchNode> arena;
    FrontierCompare cmp{&arena};
    std::priority_queue<int, std::vector<int>, FrontierCompare> frontier(cmp);

    const int start = chain.initial_state();
    if (graph.on_graph[start]) {
        const double h = graph.bound ? bound.bounded[*graph.bound][start] : bound.unbounded[start];
        if (h > 0.0) {
            arena.push_back({start, 0, 1.0, h, -1});
            frontier.push(0);
        }
    }

    constexpr std::size_t kArenaLimit = 40u * 1000u * 1000u;
    while (!frontier.empty()) {
        const int idx = frontier.top();
        frontier.pop();
        const SearchNode node = arena[idx];

        if (graph.accepting[node.state]) {
            Trajectory path;
            path.states = reconstruct(arena, idx);
            path.probability = node.probability;
            cex.total_probability += node.probability;
            cex.paths.push_back(std::move(path));
            if (reached(cex.total_probability)) break;
            if (cex.size() >= max_paths) {
                cex.budget_exhausted = true;
                break;
            }
            continue;
        }

        if (node.depth >= hop_limit) continue;
        for (const auto& e : graph.adjacency[node.state]) {
            const double child_prob = node.probability * e.probability;
            const double completion = graph.bound
                                          ? bound.bounded[*graph.bound - (node.depth + 1)][e.to]
                                          : bound.unbounded[e.to];
            if (child_prob * completion <= 0.0) continue;
            arena.push_back({e.to, node.depth + 1, child_prob, child_prob * completion, idx});
            frontier.push(static_cast<int>(arena.size()) - 1);
        }
        if (arena.size() > kArenaLimit) {
            cex.budget_exhausted = true;
            break;
        }
    }

    cex.formal = !cex.budget_exhausted && !threshold_override &&
                 reached(cex.total_probability);
    return cex;
}

FeatureExpectation counterexample_features(const Counterexample& cex, const FeatureMap& features,
                                           double gamma) {
    if (cex.paths.empty())
        throw EmptyCounterexample("cannot aggregate features of an empty path set");

    const int k = features.k();
    std::vector<double> acc(k, 0.0);
    double mass = 0.0;
    for (const auto& path : cex.paths) {
        const double p = path.probability.value_or(0.0);
        mass += p;
        double w = p;
        for (int s : path.states) {
            const auto& f = features.at(s);
            for (int j = 0; j < k; ++j) acc[j] += w * f[j];
            w *= gamma;
        }
    }
    if (mass <= 0.0)
        throw EmptyCounterexample("path set carries no probability mass");
    for (double& v : acc) v /= mass;
    return FeatureExpectation{std::move(acc)};
}

} // namespace cegal
