#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "cegal/types.hpp"

namespace cegal {

/// Parametric grid-world: noisy 5-action navigation with unsafe regions, one
/// or more absorbing goal cells, and radial-basis features centered on
/// distinguished cells. Cell (x, y) maps to state y*width + x.
struct GridWorldSpec {
    int width = 8;
    int height = 8;
    std::pair<int, int> start{0, 0};
    std::vector<std::pair<int, int>> goal_cells;
    std::vector<std::pair<int, int>> unsafe_cells;
    /// Probability of executing a uniformly random action instead of the
    /// chosen one (the chosen action is part of the uniform support).
    double noise = 0.2;
    std::vector<std::pair<int, int>> rbf_centers;
    double rbf_bandwidth = 2.0;
    double gamma = 0.99;
    /// Ground-truth reward per state, used only to construct the expert.
    std::vector<double> true_reward;

    int state_of(int x, int y) const { return y * width + x; }

    /// The 8x8 two-band instance used throughout the experiments: two
    /// absorbing goal cells in the lower right, two low-reward cells inside
    /// the unsafe bands, and a one-column corridor between the bands.
    static GridWorldSpec paper_like();
};

/// Grid-world actions in index order.
enum GridAction { kStay = 0, kUp = 1, kDown = 2, kLeft = 3, kRight = 4 };

/// Builds the MDP and feature map of a grid-world. Moves that would leave
/// the grid stay in place; goal cells are absorbing under every action.
/// Labels: "unsafe", "goal".
std::pair<Mdp, FeatureMap> build_gridworld(const GridWorldSpec& spec);

/// Discretized mountain-car with speed-limit labels. The continuous dynamics
///   v' = clip(v + 0.001*(a-1) - 0.0025*cos(3 p)),  p' = clip(p + v')
/// are abstracted by sampling `samples_per_cell` points per (cell, action)
/// and recording the empirical distribution over destination cells.
struct MountainCarSpec {
    double pos_min = -1.2, pos_max = 0.6;
    double vel_min = -0.07, vel_max = 0.07;
    int n_pos = 40, n_vel = 40;
    int horizon = 66;
    /// Speed limits near the two edges: entering a cell whose center violates
    /// either conjunction is unsafe.
    double left_pos = -1.1, left_vel = -0.04;
    double right_pos = 0.5, right_vel = 0.04;
    /// Cells whose center position reaches this mark carry the goal label
    /// and absorb.
    double goal_pos = 0.5;
    /// Start cell contains this continuous state.
    double start_pos = -0.5, start_vel = 0.0;
    double gamma = 0.99;
    /// Feature layout: two exponential coordinates plus a grid of RBFs.
    int rbf_pos = 6, rbf_vel = 3;
    double rbf_bandwidth = 0.25;

    int n_states() const { return n_pos * n_vel; }
    int feature_dim() const { return 2 + rbf_pos * rbf_vel; }
};

std::pair<Mdp, FeatureMap> build_mountain_car(const MountainCarSpec& spec, int samples_per_cell,
                                              std::uint64_t seed);

/// Reference reward for constructing the mountain-car expert: positive on
/// safe goal cells, negative on unsafe cells.
std::vector<double> mountain_car_reference_reward(const Mdp& mdp);

/// Expert policy (optimal for the ground-truth reward) and its expected
/// features on the initial state.
std::pair<Policy, FeatureExpectation> make_expert(const Mdp& mdp, const FeatureMap& features,
                                                  const std::vector<double>& true_reward);

/// Samples `m` demonstrations of `horizon` transitions. With `filter_safe`,
/// trajectories touching a state labeled "unsafe" are rejected and resampled,
/// up to 100*m attempts (FilterExhausted beyond that).
std::vector<Trajectory> generate_demonstrations(const Mdp& mdp, const Policy& policy, int m,
                                                int horizon, std::uint64_t seed,
                                                bool filter_safe);

} // namespace cegal
