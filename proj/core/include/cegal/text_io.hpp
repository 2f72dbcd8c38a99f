#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cegal/cegal_loop.hpp"
#include "cegal/types.hpp"

namespace cegal {

/// Shortest decimal form that parses back to exactly the same double.
std::string format_double(double v);

struct LoadedModel {
    Mdp mdp;
    std::optional<FeatureMap> features;
};

/// Plain-text model format. Lines, whitespace separated, '#' starts a
/// comment:
///   MDP <n_states> <n_actions> <gamma> <initial_state>
///   <s> <a> <s'> <p>          one transition entry per line
///   LABEL <name> <s1> <s2> ...
///   FEAT <s> <f1> ... <fk>
/// FEAT lines are optional but must cover every state when present.
LoadedModel load_model(const std::string& path);
void save_model(const std::string& path, const Mdp& mdp, const FeatureMap* features);

/// Policy format: one "<state> <action>" line per state.
Policy load_policy(const std::string& path, int n_states);
void save_policy(const std::string& path, const Policy& policy);

/// Trajectory format: one whitespace-separated state sequence per line.
std::vector<Trajectory> load_trajectories(const std::string& path, int n_states);
void save_trajectories(const std::string& path, const std::vector<Trajectory>& trajectories);

/// Weight vector format: all components on one line.
RewardWeights load_weights(const std::string& path);
void save_weights(const std::string& path, const RewardWeights& weights);

/// Per-iteration transcript with the effective configuration echoed as
/// leading '# key=value' lines, then a CSV table
///   iter,k,inf,delta,probability,verdict,mu_dist
/// where verdict is SAT, UNSAT or DUP (a duplicate policy that forced a k
/// shrink). A trailing '*' marks iterations whose counterexample hit the
/// path budget.
void write_transcript(const std::string& path, const std::vector<IterationRecord>& transcript,
                      const std::vector<std::pair<std::string, std::string>>& header);

/// Reward map exports for a width x height grid layout (state = y*width+x):
/// CSV with one row per y, and an 8-bit binary portable graymap scaled so the
/// smallest value maps to 0 and the largest to 255.
void export_reward_map_csv(const std::string& path, const std::vector<double>& values, int width,
                           int height);
void export_reward_map_pgm(const std::string& path, const std::vector<double>& values, int width,
                           int height);

} // namespace cegal
