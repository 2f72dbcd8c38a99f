#include "cegal/envs.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>

#include "cegal/errors.hpp"
#include "cegal/mdp_ops.hpp"
#include "cegal/rng.hpp"

namespace cegal {

namespace {

void check_cell(const GridWorldSpec& spec, std::pair<int, int> cell, const char* what) {
    if (cell.first < 0 || cell.first >= spec.width || cell.second < 0 ||
        cell.second >= spec.height)
        throw InvalidModel(std::string(what) + " cell (" + std::to_string(cell.first) + "," +
                           std::to_string(cell.second) + ") outside the grid");
}

std::vector<int> sorted_states(const GridWorldSpec& spec,
                               const std::vector<std::pair<int, int>>& cells) {
    std::set<int> states;
    for (auto c : cells) states.insert(spec.state_of(c.first, c.second));
    return {states.begin(), states.end()};
}

} // namespace

GridWorldSpec GridWorldSpec::paper_like() {
    GridWorldSpec spec;
    spec.width = 8;
    spec.height = 8;
    spec.start = {0, 0};
    spec.goal_cells = {{7, 6}, {6, 7}};
    spec.noise = 0.2;
    spec.rbf_bandwidth = 2.0;
    spec.gamma = 0.99;

    // Two unsafe bands across rows 3..5 with a one-column corridor at x=3.
    for (int y = 3; y <= 5; ++y)
        for (int x = 0; x < 8; ++x)
            if (x != 3) spec.unsafe_cells.push_back({x, y});

    // Low-reward cells sit inside the bands; together with the goal cells
    // they anchor the radial-basis features.
    const std::pair<int, int> black_a{1, 4};
    const std::pair<int, int> black_b{6, 4};
    spec.rbf_centers = {spec.goal_cells[0], spec.goal_cells[1], black_a, black_b};

    // Ground truth: reward is the feature combination that rewards goal
    // proximity and penalizes the band interior.
    const double inv_two_bw2 = 1.0 / (2.0 * spec.rbf_bandwidth * spec.rbf_bandwidth);
    spec.true_reward.assign(64, 0.0);
    for (int y = 0; y < 8; ++y) {
        for (int x = 0; x < 8; ++x) {
            double r = 0.0;
            int i = 0;
            for (auto c : spec.rbf_centers) {
                const double dx = x - c.first;
                const double dy = y - c.second;
                const double f = std::exp(-(dx * dx + dy * dy) * inv_two_bw2);
                r += (i < 2 ? 0.5 : -0.5) * f;
                ++i;
            }
            spec.true_reward[spec.state_of(x, y)] = r;
        }
    }
    return spec;
}

std::pair<Mdp, FeatureMap> build_gridworld(const GridWorldSpec& spec) {
    if (spec.width < 1 || spec.height < 1) throw InvalidModel("grid dimensions must be positive");
    if (!(spec.noise >= 0.0 && spec.noise < 1.0)) throw InvalidModel("noise must lie in [0,1)");
    if (!(spec.rbf_bandwidth > 0.0)) throw InvalidModel("bandwidth must be positive");
    check_cell(spec, spec.start, "start");
    for (auto c : spec.goal_cells) check_cell(spec, c, "goal");
    for (auto c : spec.unsafe_cells) check_cell(spec, c, "unsafe");
    for (auto c : spec.rbf_centers) check_cell(spec, c, "feature center");
    if (spec.rbf_centers.empty()) throw InvalidModel("at least one feature center required");

    const int n = spec.width * spec.height;
    if (!spec.true_reward.empty() && static_cast<int>(spec.true_reward.size()) != n)
        throw InvalidModel("ground-truth reward must cover every state");

    const std::vector<int> goal_states = sorted_states(spec, spec.goal_cells);
    std::vector<char> is_goal(n, 0);
    for (int s : goal_states) is_goal[s] = 1;

    auto move = [&spec](int x, int y, int action) -> std::pair<int, int> {
        int nx = x, ny = y;
        switch (action) {
            case kStay: break;
            case kUp: ny = y - 1; break;
            case kDown: ny = y + 1; break;
            case kLeft: nx = x - 1; break;
            case kRight: nx = x + 1; break;
        }
        if (nx < 0 || nx >= spec.width || ny < 0 || ny >= spec.height) return {x, y};
        return {nx, ny};
    };

    constexpr int kNumActions = 5;
    std::vector<std::vector<SparseRow>> transitions(n, std::vector<SparseRow>(kNumActions));
    for (int y = 0; y < spec.height; ++y) {
        for (int x = 0; x < spec.width; ++x) {
            const int s = spec.state_of(x, y);
            for (int a = 0; a < kNumActions; ++a) {
                std::map<int, double> mass;
                if (is_goal[s]) {
                    mass[s] = 1.0;
                } else {
                    auto [cx, cy] = move(x, y, a);
                    mass[spec.state_of(cx, cy)] += 1.0 - spec.noise;
                    for (int b = 0; b < kNumActions; ++b) {
                        auto [rx, ry] = move(x, y, b);
                        mass[spec.state_of(rx, ry)] += spec.noise / kNumActions;
                    }
                }
                SparseRow& row = transitions[s][a];
                row.assign(mass.begin(), mass.end());
            }
        }
    }

    LabelMap labels;
    labels["goal"] = goal_states;
    labels["unsafe"] = sorted_states(spec, spec.unsafe_cells);

    Mdp mdp(n, kNumActions, std::move(transitions), spec.gamma,
            spec.state_of(spec.start.first, spec.start.second), std::move(labels));

    const int k = static_cast<int>(spec.rbf_centers.size());
    const double inv_two_bw2 = 1.0 / (2.0 * spec.rbf_bandwidth * spec.rbf_bandwidth);
    std::vector<std::vector<double>> values(n, std::vector<double>(k, 0.0));
    for (int y = 0; y < spec.height; ++y) {
        for (int x = 0; x < spec.width; ++x) {
            auto& f = values[spec.state_of(x, y)];
            for (int i = 0; i < k; ++i) {
                const double dx = x - spec.rbf_centers[i].first;
                const double dy = y - spec.rbf_centers[i].second;
                f[i] = std::exp(-(dx * dx + dy * dy) * inv_two_bw2);
            }
        }
    }
    return {std::move(mdp), FeatureMap(k, std::move(values))};
}

namespace {

struct CarGrid {
    const MountainCarSpec& spec;
    double pos_step;
    double vel_step;

    explicit CarGrid(const MountainCarSpec& s)
        : spec(s),
          pos_step((s.pos_max - s.pos_min) / s.n_pos),
          vel_step((s.vel_max - s.vel_min) / s.n_vel) {}

    int state_of(int pi, int vi) const { return pi * spec.n_vel + vi; }

    int cell_of(double p, double v) const {
        int pi = static_cast<int>((p - spec.pos_min) / pos_step);
        int vi = static_cast<int>((v - spec.vel_min) / vel_step);
        pi = std::clamp(pi, 0, spec.n_pos - 1);
        vi = std::clamp(vi, 0, spec.n_vel - 1);
        return state_of(pi, vi);
    }

    double pos_center(int pi) const { return spec.pos_min + (pi + 0.5) * pos_step; }
    double vel_center(int vi) const { return spec.vel_min + (vi + 0.5) * vel_step; }
};

} // namespace

std::pair<Mdp, FeatureMap> build_mountain_car(const MountainCarSpec& spec, int samples_per_cell,
                                              std::uint64_t seed) {
    if (spec.n_pos < 2 || spec.n_vel < 2)
        throw InvalidModel("at least two cells per axis required");
    if (samples_per_cell < 1) throw InvalidModel("samples_per_cell must be positive");
    if (!(spec.left_pos >= spec.pos_min && spec.right_pos <= spec.pos_max &&
          spec.left_vel >= spec.vel_min && spec.right_vel <= spec.vel_max))
        throw InvalidModel("speed-limit thresholds must lie inside the state ranges");

    const CarGrid grid(spec);
    const int n = spec.n_states();
    constexpr int kNumActions = 3;

    std::vector<int> goal_states;
    std::vector<int> unsafe_states;
    std::vector<char> is_goal(n, 0);
    for (int pi = 0; pi < spec.n_pos; ++pi) {
        for (int vi = 0; vi < spec.n_vel; ++vi) {
            const int s = grid.state_of(pi, vi);
            const double p = grid.pos_center(pi);
            const double v = grid.vel_center(vi);
            if (p >= spec.goal_pos) {
                goal_states.push_back(s);
                is_goal[s] = 1;
            }
            if ((p <= spec.left_pos && v <= spec.left_vel) ||
                (p >= spec.right_pos && v >= spec.right_vel))
                unsafe_states.push_back(s);
        }
    }
    std::sort(goal_states.begin(), goal_states.end());
    std::sort(unsafe_states.begin(), unsafe_states.end());

    auto step_dynamics = [&spec](double p, double v, int action) {
        double nv = v + 0.001 * (action - 1) - 0.0025 * std::cos(3.0 * p);
        nv = std::clamp(nv, spec.vel_min, spec.vel_max);
        double np = std::clamp(p + nv, spec.pos_min, spec.pos_max);
        return std::pair<double, double>{np, nv};
    };

    const Rng master(seed);
    std::vector<std::vector<SparseRow>> transitions(n, std::vector<SparseRow>(kNumActions));
    for (int pi = 0; pi < spec.n_pos; ++pi) {
        for (int vi = 0; vi < spec.n_vel; ++vi) {
            const int s = grid.state_of(pi, vi);
            for (int a = 0; a < kNumActions; ++a) {
                if (is_goal[s]) {
                    transitions[s][a] = {{s, 1.0}};
                    continue;
                }
                std::map<int, int> counts;
                if (samples_per_cell == 1) {
                    auto [np, nv] = step_dynamics(grid.pos_center(pi), grid.vel_center(vi), a);
                    counts[grid.cell_of(np, nv)] = 1;
                } else {
                    Rng rng = master.split(static_cast<std::uint64_t>(s) * kNumActions + a);
                    for (int i = 0; i < samples_per_cell; ++i) {
                        const double p = spec.pos_min + (pi + rng.next_double()) * grid.pos_step;
                        const double v = spec.vel_min + (vi + rng.next_double()) * grid.vel_step;
                        auto [np, nv] = step_dynamics(p, v, a);
                        counts[grid.cell_of(np, nv)] += 1;
                    }
                }
                SparseRow& row = transitions[s][a];
                for (auto [succ, c] : counts)
                    row.push_back({succ, static_cast<double>(c) / samples_per_cell});
            }
        }
    }

    LabelMap labels;
    labels["goal"] = goal_states;
    labels["unsafe"] = unsafe_states;
    Mdp mdp(n, kNumActions, std::move(transitions), spec.gamma,
            grid.cell_of(spec.start_pos, spec.start_vel), std::move(labels));

    // Features at cell centers, in coordinates normalized to [0,1].
    const int k = spec.feature_dim();
    const double inv_two_bw2 = 1.0 / (2.0 * spec.rbf_bandwidth * spec.rbf_bandwidth);
    std::vector<std::vector<double>> values(n, std::vector<double>(k, 0.0));
    for (int pi = 0; pi < spec.n_pos; ++pi) {
        for (int vi = 0; vi < spec.n_vel; ++vi) {
            const double ph = (grid.pos_center(pi) - spec.pos_min) / (spec.pos_max - spec.pos_min);
            const double vh = (grid.vel_center(vi) - spec.vel_min) / (spec.vel_max - spec.vel_min);
            auto& f = values[grid.state_of(pi, vi)];
            f[0] = std::exp(ph - 1.0);
            f[1] = std::exp(vh - 1.0);
            int idx = 2;
            for (int i = 0; i < spec.rbf_pos; ++i) {
                for (int j = 0; j < spec.rbf_vel; ++j) {
                    const double cp = (i + 0.5) / spec.rbf_pos;
                    const double cv = (j + 0.5) / spec.rbf_vel;
                    const double dp = ph - cp;
                    const double dv = vh - cv;
                    f[idx++] = std::exp(-(dp * dp + dv * dv) * inv_two_bw2);
                }
            }
        }
    }
    return {std::move(mdp), FeatureMap(k, std::move(values))};
}

std::vector<double> mountain_car_reference_reward(const Mdp& mdp) {
    std::vector<double> reward(mdp.n_states(), 0.0);
    for (int s : mdp.label_states("goal")) reward[s] = 1.0;
    for (int s : mdp.label_states("unsafe")) reward[s] = -1.0;
    return reward;
}

std::pair<Policy, FeatureExpectation> make_expert(const Mdp& mdp, const FeatureMap& features,
                                                  const std::vector<double>& true_reward) {
    OptimalSolution solution = solve_optimal_policy(mdp, true_reward);
    FeatureExpectation mu = expected_features(mdp, solution.policy, features);
    return {std::move(solution.policy), std::move(mu)};
}

std::vector<Trajectory> generate_demonstrations(const Mdp& mdp, const Policy& policy, int m,
                                                int horizon, std::uint64_t seed,
                                                bool filter_safe) {
    if (m < 1) throw InvalidModel("demonstration count must be positive");
    if (!filter_safe) return sample_trajectories(mdp, policy, m, horizon, seed);

    std::vector<char> unsafe(mdp.n_states(), 0);
    for (int s : mdp.label_states("unsafe")) unsafe[s] = 1;

    const Dtmc chain = induce_dtmc(mdp, policy);
    Rng rng(seed);
    std::vector<Trajectory> accepted;
    accepted.reserve(m);
    const long long cap = 100LL * m;
    long long attempts = 0;
    while (static_cast<int>(accepted.size()) < m) {
        if (attempts >= cap)
            throw FilterExhausted("accepted " + std::to_string(accepted.size()) + " of " +
                                  std::to_string(m) + " trajectories in " + std::to_string(cap) +
                                  " attempts");
        ++attempts;
        Trajectory traj;
        traj.states.reserve(horizon + 1);
        int s = chain.initial_state();
        bool safe = !unsafe[s];
        traj.states.push_back(s);
        for (int t = 0; t < horizon && safe; ++t) {
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
            if (unsafe[s]) safe = false;
            traj.states.push_back(s);
        }
        if (safe) accepted.push_back(std::move(traj));
    }
    return accepted;
}

} // namespace cegal
