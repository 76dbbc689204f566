#include "jamgame/agents.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace jamgame {

void LearningConfig::validate() const {
    if (!(learning_rate > 0.0) || learning_rate > 1.0)
        throw std::domain_error("LearningConfig: learning_rate in (0, 1]");
    if (!(discount >= 0.0) || discount >= 1.0)
        throw std::domain_error("LearningConfig: discount in [0, 1)");
    if (!(eps_min > 0.0) || eps_min >= 1.0)
        throw std::domain_error("LearningConfig: eps_min in (0, 1)");
    if (total_steps < 1) throw std::domain_error("LearningConfig: total_steps >= 1");
    if (decay_horizon < 1 || decay_horizon > total_steps)
        throw std::domain_error("LearningConfig: requires 1 <= decay_horizon <= total_steps");
}

QTable::QTable(GameVariant variant, const GridSpec& grid) {
    grid.validate();
    joint_ = variant != GameVariant::g3;
    n_positions_ = grid.n_positions;
    max_step_ = grid.max_step;
    n_states_ = joint_ ? n_positions_ * n_positions_ : n_positions_;
    values_.assign(static_cast<size_t>(n_states_) * n_actions(), 0.0);
}

int QTable::encode(const Observation& obs) const {
    if (joint_) {
        if (!obs.opponent)
            throw std::invalid_argument("QTable: joint table needs an opponent index");
        return obs.own * n_positions_ + *obs.opponent;
    }
    return obs.own;
}

std::vector<Action> QTable::legal(int state) const {
    if (state < 0 || state >= n_states_)
        throw std::invalid_argument("QTable: state out of range");
    GridSpec g;
    g.n_positions = n_positions_;
    g.max_step = max_step_;
    return legal_actions(own_position(state), g);
}

bool QTable::is_legal(int state, Action a) const {
    if (state < 0 || state >= n_states_) return false;
    if (a.delta < -max_step_ || a.delta > max_step_) return false;
    const int next = own_position(state) + a.delta;
    return next >= 0 && next < n_positions_;
}

void QTable::check(int state, Action a) const {
    if (!is_legal(state, a))
        throw std::invalid_argument("QTable: illegal (state, action) access");
}

double QTable::get(int state, Action a) const {
    check(state, a);
    return values_[static_cast<size_t>(state) * n_actions() + (a.delta + max_step_)];
}

void QTable::set(int state, Action a, double v) {
    check(state, a);
    values_[static_cast<size_t>(state) * n_actions() + (a.delta + max_step_)] = v;
}

long QTable::legal_entry_count() const {
    long count = 0;
    for (int s = 0; s < n_states_; ++s)
        for (int d = -max_step_; d <= max_step_; ++d)
            if (is_legal(s, {d})) ++count;
    return count;
}

void QTable::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("QTable: cannot write " + path);
    out << "# qtable joint=" << (joint_ ? 1 : 0) << " n_positions=" << n_positions_
        << " max_step=" << max_step_ << "\n";
    out.precision(17);
    for (int s = 0; s < n_states_; ++s)
        for (int d = -max_step_; d <= max_step_; ++d)
            if (is_legal(s, {d})) out << s << " " << d << " " << get(s, {d}) << "\n";
    if (!out) throw std::runtime_error("QTable: write failed for " + path);
}

QTable QTable::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("QTable: cannot open " + path);
    std::string header;
    std::getline(in, header);
    int joint = -1, n = 0, step = 0;
    if (std::sscanf(header.c_str(), "# qtable joint=%d n_positions=%d max_step=%d",
                    &joint, &n, &step) != 3 || joint < 0 || n < 2 || step < 1)
        throw std::runtime_error("QTable: bad header in " + path);
    QTable t;
    t.joint_ = joint == 1;
    t.n_positions_ = n;
    t.max_step_ = step;
    t.n_states_ = t.joint_ ? n * n : n;
    t.values_.assign(static_cast<size_t>(t.n_states_) * t.n_actions(), 0.0);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        int s, d;
        double v;
        if (!(ls >> s >> d >> v))
            throw std::runtime_error("QTable: bad entry line in " + path + ": " + line);
        t.set(s, {d}, v);
    }
    return t;
}

void q_update(QTable& table, int s, Action a, double r, int s_next,
              const LearningConfig& cfg) {
    double best_next = 0.0;
    bool first = true;
    for (const Action an : table.legal(s_next)) {
        const double q = table.get(s_next, an);
        if (first || q > best_next) best_next = q;
        first = false;
    }
    const double target = r + cfg.discount * best_next;
    table.set(s, a, (1.0 - cfg.learning_rate) * table.get(s, a) +
                        cfg.learning_rate * target);
}

Action greedy_action(const QTable& table, int s, const std::vector<Action>& legal) {
    if (legal.empty()) throw std::invalid_argument("greedy_action: no legal actions");
    Action best = legal.front();
    double best_q = table.get(s, best);
    for (size_t i = 1; i < legal.size(); ++i) {
        const double q = table.get(s, legal[i]);
        if (q > best_q || (q == best_q && legal[i].delta < best.delta)) {
            best = legal[i];
            best_q = q;
        }
    }
    return best;
}

double epsilon_schedule(long t, const LearningConfig& cfg) {
    if (t < 0) throw std::invalid_argument("epsilon_schedule: t >= 0");
    const double beta = std::acosh(1.0 / cfg.eps_min) / static_cast<double>(cfg.decay_horizon);
    return std::max(cfg.eps_min, 1.0 / std::cosh(beta * static_cast<double>(t)));
}

Action epsilon_greedy(const QTable& table, int s, const std::vector<Action>& legal,
                      double eps, std::mt19937_64& rng) {
    if (eps < 0.0 || eps > 1.0) throw std::invalid_argument("epsilon_greedy: eps in [0,1]");
    if (eps > 0.0) {
        std::uniform_real_distribution<double> coin(0.0, 1.0);
        if (coin(rng) < eps) {
            std::uniform_int_distribution<size_t> pick(0, legal.size() - 1);
            return legal[pick(rng)];
        }
    }
    return greedy_action(table, s, legal);
}

double state_value(const QTable& table, int s) {
    double best = 0.0;
    bool first = true;
    for (const Action a : table.legal(s)) {
        const double q = table.get(s, a);
        if (first || q > best) best = q;
        first = false;
    }
    return best;
}

Action greedy_jammer(int y_idx, int x_idx, const GridSpec& grid) {
    if (y_idx == x_idx) return {0};
    const int gap = x_idx - y_idx;
    const int step = std::min(grid.max_step, std::abs(gap));
    return {gap > 0 ? step : -step};
}

Action mixed_jammer(int y_idx, int x_idx, const GridSpec& grid, std::mt19937_64& rng) {
    auto clamped = [&](int delta) -> Action {
        return is_legal(y_idx, {delta}, grid) ? Action{delta} : Action{0};
    };
    if (x_idx < y_idx) return clamped(-1);  // R nearer the AP: fall back toward it
    std::uniform_int_distribution<int> coin(0, 1);
    const bool move = coin(rng) == 1;
    if (!move) return {0};
    return y_idx == x_idx ? clamped(-1) : clamped(+1);
}

}  // namespace jamgame
