#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace cegal {

/// Probability mass attached to a successor state. Rows are kept sparse and
/// sorted by state index.
using SparseRow = std::vector<std::pair<int, double>>;

/// Named state sets (e.g. "unsafe", "goal"). Indices are sorted and unique.
using LabelMap = std::map<std::string, std::vector<int>>;

/// Tolerance for "this probability row sums to one".
inline constexpr double kRowSumTolerance = 1e-9;

/// Finite Markov decision process without a reward function: states, actions,
/// transition kernel, discount and initial state. Labels mark state sets that
/// properties can refer to. Immutable after construction.
class Mdp {
public:
    Mdp(int n_states, int n_actions, std::vector<std::vector<SparseRow>> transitions,
        double gamma, int initial_state, LabelMap labels);

    int n_states() const { return n_states_; }
    int n_actions() const { return n_actions_; }
    double gamma() const { return gamma_; }
    int initial_state() const { return initial_state_; }
    const LabelMap& labels() const { return labels_; }

    /// Probability row of (state, action).
    const SparseRow& row(int state, int action) const { return transitions_[state][action]; }

    /// States carrying `name`, or an empty set if the label is absent.
    const std::vector<int>& label_states(const std::string& name) const;

    bool has_label(const std::string& name) const { return labels_.count(name) > 0; }

private:
    int n_states_;
    int n_actions_;
    std::vector<std::vector<SparseRow>> transitions_;
    double gamma_;
    int initial_state_;
    LabelMap labels_;
};

/// Deterministic stationary policy: one action per state.
struct Policy {
    std::vector<int> action_of;

    int operator()(int state) const { return action_of[state]; }
    int size() const { return static_cast<int>(action_of.size()); }
    bool operator==(const Policy& other) const { return action_of == other.action_of; }
};

/// Markov chain induced by fixing a policy on an MDP (or built directly).
/// One probability row per state; labels and initial state as in Mdp.
class Dtmc {
public:
    Dtmc(int n_states, std::vector<SparseRow> rows, int initial_state, LabelMap labels);

    int n_states() const { return n_states_; }
    int initial_state() const { return initial_state_; }
    const LabelMap& labels() const { return labels_; }
    const SparseRow& row(int state) const { return rows_[state]; }
    const std::vector<int>& label_states(const std::string& name) const;
    bool has_label(const std::string& name) const { return labels_.count(name) > 0; }

private:
    int n_states_;
    std::vector<SparseRow> rows_;
    int initial_state_;
    LabelMap labels_;
};

/// Per-state feature vectors f(s) in [0,1]^k; the unknown reward is assumed
/// linear in these.
class FeatureMap {
public:
    FeatureMap(int k, std::vector<std::vector<double>> values);

    int k() const { return k_; }
    int n_states() const { return static_cast<int>(values_.size()); }
    const std::vector<double>& at(int state) const { return values_[state]; }

private:
    int k_;
    std::vector<std::vector<double>> values_;
};

/// A finite state sequence, optionally with the probability of transitioning
/// along it from its first state.
struct Trajectory {
    std::vector<int> states;
    std::optional<double> probability;
};

/// Expected discounted feature sum; componentwise in [0, 1/(1-gamma)].
struct FeatureExpectation {
    std::vector<double> mu;

    int dim() const { return static_cast<int>(mu.size()); }
};

/// Weight vector of the linear reward, constrained to the unit L2 ball.
struct RewardWeights {
    std::vector<double> omega;

    int dim() const { return static_cast<int>(omega.size()); }
};

/// Euclidean distance between two feature expectations.
double l2_distance(const FeatureExpectation& a, const FeatureExpectation& b);

/// Validates that `w` lies in the unit ball (within 1e-9 slack).
void validate_weights(const RewardWeights& w);

} // namespace cegal
