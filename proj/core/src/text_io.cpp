#include "cegal/text_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "cegal/errors.hpp"

namespace cegal {

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> tokens;
    std::istringstream in(line.substr(0, line.find('#')));
    std::string tok;
    while (in >> tok) tokens.push_back(tok);
    return tokens;
}

double parse_double(const std::string& tok, const std::string& context) {
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end != tok.c_str() + tok.size())
        throw FileError(context + ": expected a number, got '" + tok + "'");
    return v;
}

int parse_int(const std::string& tok, const std::string& context) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size())
        throw FileError(context + ": expected an integer, got '" + tok + "'");
    return v;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FileError("cannot open '" + path + "' for reading");
    return in;
}

std::ofstream open_out(const std::string& path, std::ios::openmode mode = std::ios::out) {
    std::ofstream out(path, mode);
    if (!out) throw FileError("cannot open '" + path + "' for writing");
    return out;
}

} // namespace

LoadedModel load_model(const std::string& path) {
    std::ifstream in = open_in(path);

    std::string line;
    int line_no = 0;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++line_no;
        header = tokenize(line);
        if (!header.empty()) break;
    }
    const std::string where = path + ":" + std::to_string(line_no);
    if (header.size() != 5 || header[0] != "MDP")
        throw FileError(where + ": expected header 'MDP <n_states> <n_actions> <gamma> <initial_state>'");
    const int n_states = parse_int(header[1], where);
    const int n_actions = parse_int(header[2], where);
    const double gamma = parse_double(header[3], where);
    const int initial = parse_int(header[4], where);
    if (n_states <= 0 || n_actions <= 0)
        throw FileError(where + ": state and action counts must be positive");

    std::vector<std::vector<std::map<int, double>>> mass(
        n_states, std::vector<std::map<int, double>>(n_actions));
    LabelMap labels;
    std::map<int, std::vector<double>> feat_rows;
    int feature_dim = -1;

    while (std::getline(in, line)) {
        ++line_no;
        const std::vector<std::string> tokens = tokenize(line);
        if (tokens.empty()) continue;
        const std::string at = path + ":" + std::to_string(line_no);
        if (tokens[0] == "LABEL") {
            if (tokens.size() < 2) throw FileError(at + ": LABEL needs a name");
            auto& states = labels[tokens[1]];
            for (std::size_t i = 2; i < tokens.size(); ++i) {
                const int s = parse_int(tokens[i], at);
                if (s < 0 || s >= n_states) throw FileError(at + ": label state out of range");
                states.push_back(s);
            }
            std::sort(states.begin(), states.end());
            states.erase(std::unique(states.begin(), states.end()), states.end());
        } else if (tokens[0] == "FEAT") {
            if (tokens.size() < 3) throw FileError(at + ": FEAT needs a state and values");
            const int s = parse_int(tokens[1], at);
            if (s < 0 || s >= n_states) throw FileError(at + ": FEAT state out of range");
            std::vector<double> values;
            for (std::size_t i = 2; i < tokens.size(); ++i)
                values.push_back(parse_double(tokens[i], at));
            if (feature_dim < 0) feature_dim = static_cast<int>(values.size());
            if (static_cast<int>(values.size()) != feature_dim)
                throw FileError(at + ": inconsistent feature dimension");
            feat_rows[s] = std::move(values);
        } else {
            if (tokens.size() != 4)
                throw FileError(at + ": expected '<s> <a> <s'> <p>'");
            const int s = parse_int(tokens[0], at);
            const int a = parse_int(tokens[1], at);
            const int succ = parse_int(tokens[2], at);
            const double p = parse_double(tokens[3], at);
            if (s < 0 || s >= n_states || succ < 0 || succ >= n_states)
                throw FileError(at + ": state index out of range");
            if (a < 0 || a >= n_actions) throw FileError(at + ": action index out of range");
            mass[s][a][succ] += p;
        }
    }

    std::vector<std::vector<SparseRow>> transitions(n_states, std::vector<SparseRow>(n_actions));
    for (int s = 0; s < n_states; ++s)
        for (int a = 0; a < n_actions; ++a)
            transitions[s][a].assign(mass[s][a].begin(), mass[s][a].end());

    LoadedModel loaded{Mdp(n_states, n_actions, std::move(transitions), gamma, initial,
                           std::move(labels)),
                       std::nullopt};
    if (feature_dim > 0) {
        if (static_cast<int>(feat_rows.size()) != n_states)
            throw FileError(path + ": FEAT lines must cover every state");
        std::vector<std::vector<double>> values(n_states);
        for (auto& [s, row] : feat_rows) values[s] = std::move(row);
        loaded.features = FeatureMap(feature_dim, std::move(values));
    }
    return loaded;
}

void save_model(const std::string& path, const Mdp& mdp, const FeatureMap* features) {
    std::ofstream out = open_out(path);
    out << "MDP " << mdp.n_states() << ' ' << mdp.n_actions() << ' ' << format_double(mdp.gamma())
        << ' ' << mdp.initial_state() << '\n';
    for (int s = 0; s < mdp.n_states(); ++s)
        for (int a = 0; a < mdp.n_actions(); ++a)
            for (const auto& [succ, p] : mdp.row(s, a))
                out << s << ' ' << a << ' ' << succ << ' ' << format_double(p) << '\n';
    for (const auto& [name, states] : mdp.labels()) {
        if (states.empty()) continue;
        out << "LABEL " << name;
        for (int s : states) out << ' ' << s;
        out << '\n';
    }
    if (features) {
        for (int s = 0; s < mdp.n_states(); ++s) {
            out << "FEAT " << s;
            for (double v : features->at(s)) out << ' ' << format_double(v);
            out << '\n';
        }
    }
    if (!out) throw FileError("failed writing '" + path + "'");
}

Policy load_policy(const std::string& path, int n_states) {
    std::ifstream in = open_in(path);
    Policy policy;
    policy.action_of.assign(n_states, -1);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::vector<std::string> tokens = tokenize(line);
        if (tokens.empty()) continue;
        const std::string at = path + ":" + std::to_string(line_no);
        if (tokens.size() != 2) throw FileError(at + ": expected '<state> <action>'");
        const int s = parse_int(tokens[0], at);
        if (s < 0 || s >= n_states) throw FileError(at + ": state out of range");
        policy.action_of[s] = parse_int(tokens[1], at);
    }
    for (int s = 0; s < n_states; ++s)
        if (policy.action_of[s] < 0)
            throw IncompletePolicy(path + ": no action for state " + std::to_string(s));
    return policy;
}

void save_policy(const std::string& path, const Policy& policy) {
    std::ofstream out = open_out(path);
    for (int s = 0; s < policy.size(); ++s) out << s << ' ' << policy.action_of[s] << '\n';
    if (!out) throw FileError("failed writing '" + path + "'");
}

std::vector<Trajectory> load_trajectories(const std::string& path, int n_states) {
    std::ifstream in = open_in(path);
    std::vector<Trajectory> out;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::vector<std::string> tokens = tokenize(line);
        if (tokens.empty()) continue;
        Trajectory traj;
        for (const auto& tok : tokens) {
            const int s = parse_int(tok, path + ":" + std::to_string(line_no));
            if (s < 0 || s >= n_states)
                throw FileError(path + ":" + std::to_string(line_no) + ": state out of range");
            traj.states.push_back(s);
        }
        out.push_back(std::move(traj));
    }
    return out;
}

void save_trajectories(const std::string& path, const std::vector<Trajectory>& trajectories) {
    std::ofstream out = open_out(path);
    for (const auto& traj : trajectories) {
        for (std::size_t i = 0; i < traj.states.size(); ++i) {
            if (i) out << ' ';
            out << traj.states[i];
        }
        out << '\n';
    }
    if (!out) throw FileError("failed writing '" + path + "'");
}

RewardWeights load_weights(const std::string& path) {
    std::ifstream in = open_in(path);
    RewardWeights weights;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        for (const auto& tok : tokenize(line))
            weights.omega.push_back(parse_double(tok, path + ":" + std::to_string(line_no)));
    }
    if (weights.omega.empty()) throw FileError(path + ": no weight components found");
    return weights;
}

void save_weights(const std::string& path, const RewardWeights& weights) {
    std::ofstream out = open_out(path);
    for (int i = 0; i < weights.dim(); ++i) {
        if (i) out << ' ';
        out << format_double(weights.omega[i]);
    }
    out << '\n';
    if (!out) throw FileError("failed writing '" + path + "'");
}

void write_transcript(const std::string& path, const std::vector<IterationRecord>& transcript,
                      const std::vector<std::pair<std::string, std::string>>& header) {
    std::ofstream out = open_out(path);
    for (const auto& [key, value] : header) out << "# " << key << '=' << value << '\n';
    out << "iter,k,inf,delta,probability,verdict,mu_dist\n";
    for (const auto& rec : transcript) {
        const char* verdict = rec.status == IterationStatus::Sat     ? "SAT"
                              : rec.status == IterationStatus::Unsat ? "UNSAT"
                                                                     : "DUP";
        out << rec.iteration << ',' << format_double(rec.k) << ',' << format_double(rec.inf) << ','
            << format_double(rec.delta) << ',' << format_double(rec.probability) << ',' << verdict
            << (rec.cex_budget_exhausted ? "*" : "") << ',' << format_double(rec.mu_distance)
            << '\n';
    }
    if (!out) throw FileError("failed writing '" + path + "'");
}

void export_reward_map_csv(const std::string& path, const std::vector<double>& values, int width,
                           int height) {
    if (static_cast<int>(values.size()) != width * height)
        throw FileError("reward map needs width*height values");
    std::ofstream out = open_out(path);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            if (x) out << ',';
            out << format_double(values[y * width + x]);
        }
        out << '\n';
    }
    if (!out) throw FileError("failed writing '" + path + "'");
}

void export_reward_map_pgm(const std::string& path, const std::vector<double>& values, int width,
                           int height) {
    if (static_cast<int>(values.size()) != width * height)
        throw FileError("reward map needs width*height values");
    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    const double lo = *lo_it;
    const double span = *hi_it - lo;

    std::ofstream out = open_out(path, std::ios::out | std::ios::binary);
    out << "P5\n" << width << ' ' << height << "\n255\n";
    for (double v : values) {
        const double scaled = span > 0.0 ? (v - lo) / span * 255.0 : 0.0;
        out.put(static_cast<char>(static_cast<unsigned char>(std::lround(scaled))));
    }
    if (!out) throw FileError("failed writing '" + path + "'");
}

} // namespace cegal
