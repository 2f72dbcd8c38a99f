#pragma once

#include <optional>
#include <vector>

#include "cegal/model_check.hpp"
#include "cegal/pctl.hpp"
#include "cegal/types.hpp"

namespace cegal {

/// Weighted digraph view of a chain for path search: edge weight -ln T(s,s').
/// States failing both predicates are excluded; accepting (phi2) states keep
/// no outgoing edges, which enforces minimal satisfaction, and feed a virtual
/// sink. For a bounded until the graph is traversed in (state, step) layers
/// up to the bound.
struct PathGraph {
    struct Edge {
        int to;
        double weight;       // -ln probability
        double probability;
    };
    std::vector<std::vector<Edge>> adjacency;
    std::vector<char> on_graph;   // state satisfies phi1 or phi2
    std::vector<char> accepting;  // state satisfies phi2
    std::optional<int> bound;     // step bound for bounded until
    int initial = 0;
};

PathGraph build_path_graph(const Dtmc& chain, const std::vector<char>& phi1,
                           const std::vector<char>& phi2, std::optional<int> bound);

/// Weight of the lightest initial-to-sink path (the negative log of the most
/// probable minimally satisfying path), or +infinity if none exists.
double shortest_accepting_weight(const PathGraph& graph);

/// A set of minimally satisfying paths witnessing that a probability bound is
/// exceeded. Paths are sorted by non-increasing probability (ties broken
/// lexicographically by state sequence) and are pairwise distinct.
struct Counterexample {
    std::vector<Trajectory> paths;
    double total_probability = 0.0;
    PctlFormula formula;
    /// Threshold the enumeration ran against (may be lowered via overrides).
    double threshold_used = 0.0;
    /// True when the set is a genuine counterexample: complete enumeration
    /// against the formula's own threshold.
    bool formal = false;
    /// True when max_paths stopped the enumeration before the mass target.
    bool budget_exhausted = false;

    int size() const { return static_cast<int>(paths.size()); }
};

inline constexpr int kDefaultMaxCexPaths = 10000;

/// Enumerates minimally satisfying paths of the until formula in order of
/// non-increasing probability until their mass exceeds the threshold, which
/// by the greedy argument yields a minimum-cardinality counterexample.
///
/// `threshold_override`, when set, replaces the formula threshold as the mass
/// target; the result is then marked not formal (sub-threshold evidence).
/// Throws FormulaSatisfied when the chain satisfies the formula and
/// UnsupportedFormula for lower-bounded (>=, >) properties.
Counterexample enumerate_counterexample(const Dtmc& chain, const PctlFormula& formula,
                                        int max_paths = kDefaultMaxCexPaths,
                                        std::optional<double> threshold_override = std::nullopt);

/// Probability-weighted average of the discounted feature sums of the paths,
/// normalized by the set's total mass, so the result is a convex combination
/// of per-path sums. Throws EmptyCounterexample on an empty set.
FeatureExpectation counterexample_features(const Counterexample& cex, const FeatureMap& features,
                                           double gamma);

} // namespace cegal
