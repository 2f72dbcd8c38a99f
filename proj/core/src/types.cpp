#include "cegal/types.hpp"

#include <algorithm>
#include <cmath>

#include "cegal/errors.hpp"

namespace cegal {

namespace {

const std::vector<int> kEmptyStateSet;

void check_row(const SparseRow& row, int n_states, const std::string& where) {
    double sum = 0.0;
    int prev = -1;
    for (const auto& [state, p] : row) {
        if (state < 0 || state >= n_states)
            throw InvalidModel(where + ": successor index " + std::to_string(state) + " out of range");
        if (state <= prev)
            throw InvalidModel(where + ": successors not strictly increasing");
        if (p < 0.0 || p > 1.0)
            throw InvalidModel(where + ": probability " + std::to_string(p) + " outside [0,1]");
        prev = state;
        sum += p;
    }
    if (std::abs(sum - 1.0) > kRowSumTolerance)
        throw InvalidModel(where + ": row sums to " + std::to_string(sum));
}

void check_labels(const LabelMap& labels, int n_states) {
    for (const auto& [name, states] : labels) {
        int prev = -1;
        for (int s : states) {
            if (s < 0 || s >= n_states)
                throw InvalidModel("label '" + name + "': state " + std::to_string(s) + " out of range");
            if (s <= prev)
                throw InvalidModel("label '" + name + "': states not sorted/unique");
            prev = s;
        }
    }
}

} // namespace

Mdp::Mdp(int n_states, int n_actions, std::vector<std::vector<SparseRow>> transitions,
         double gamma, int initial_state, LabelMap labels)
    : n_states_(n_states),
      n_actions_(n_actions),
      transitions_(std::move(transitions)),
      gamma_(gamma),
      initial_state_(initial_state),
      labels_(std::move(labels)) {
    if (n_states_ <= 0 || n_actions_ <= 0)
        throw InvalidModel("state and action counts must be positive");
    if (!(gamma_ >= 0.0 && gamma_ < 1.0))
        throw InvalidModel("discount must lie in [0,1)");
    if (initial_state_ < 0 || initial_state_ >= n_states_)
        throw InvalidModel("initial state out of range");
    if (static_cast<int>(transitions_.size()) != n_states_)
        throw InvalidModel("transition table must have one entry per state");
    for (int s = 0; s < n_states_; ++s) {
        if (static_cast<int>(transitions_[s].size()) != n_actions_)
            throw InvalidModel("state " + std::to_string(s) + ": one row per action required");
        for (int a = 0; a < n_actions_; ++a)
            check_row(transitions_[s][a], n_states_,
                      "T(" + std::to_string(s) + "," + std::to_string(a) + ")");
    }
    check_labels(labels_, n_states_);
}

const std::vector<int>& Mdp::label_states(const std::string& name) const {
    auto it = labels_.find(name);
    return it == labels_.end() ? kEmptyStateSet : it->second;
}

Dtmc::Dtmc(int n_states, std::vector<SparseRow> rows, int initial_state, LabelMap labels)
    : n_states_(n_states),
      rows_(std::move(rows)),
      initial_state_(initial_state),
      labels_(std::move(labels)) {
    if (n_states_ <= 0)
        throw InvalidModel("state count must be positive");
    if (initial_state_ < 0 || initial_state_ >= n_states_)
        throw InvalidModel("initial state out of range");
    if (static_cast<int>(rows_.size()) != n_states_)
        throw InvalidModel("one row per state required");
    for (int s = 0; s < n_states_; ++s)
        check_row(rows_[s], n_states_, "row " + std::to_string(s));
    check_labels(labels_, n_states_);
}

const std::vector<int>& Dtmc::label_states(const std::string& name) const {
    auto it = labels_.find(name);
    return it == labels_.end() ? kEmptyStateSet : it->second;
}

FeatureMap::FeatureMap(int k, std::vector<std::vector<double>> values)
    : k_(k), values_(std::move(values)) {
    if (k_ <= 0)
        throw InvalidModel("feature dimension must be positive");
    for (std::size_t s = 0; s < values_.size(); ++s) {
        if (static_cast<int>(values_[s].size()) != k_)
            throw InvalidModel("state " + std::to_string(s) + ": feature vector has wrong dimension");
        for (double v : values_[s])
            if (!(v >= 0.0 && v <= 1.0))
                throw InvalidModel("state " + std::to_string(s) + ": feature value outside [0,1]");
    }
}

double l2_distance(const FeatureExpectation& a, const FeatureExpectation& b) {
    if (a.dim() != b.dim())
        throw DimensionMismatch("feature expectations of dimension " + std::to_string(a.dim()) +
                                " and " + std::to_string(b.dim()));
    double acc = 0.0;
    for (int i = 0; i < a.dim(); ++i) {
        const double d = a.mu[i] - b.mu[i];
        acc += d * d;
    }
    return std::sqrt(acc);
}

void validate_weights(const RewardWeights& w) {
    double norm2 = 0.0;
    for (double x : w.omega) norm2 += x * x;
    if (std::sqrt(norm2) > 1.0 + 1e-9)
        throw InvalidModel("weight vector leaves the unit ball");
}

} // namespace cegal
