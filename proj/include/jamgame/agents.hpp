#pragma once

#include <random>
#include <string>
#include <vector>

#include "jamgame/dynamic_env.hpp"

namespace jamgame {

struct LearningConfig {
    double learning_rate = 0.0;  // l in the Bellman update; 0 = resolve from context
    double discount = 0.99;      // gamma
    double eps_min = 0.01;
    long total_steps = 1'500'000;  // T
    long decay_horizon = 0;        // T_d, epsilon hits eps_min here; 0 = 2/3 of T

    void validate() const;
};

// Per-player action-value table. States are (own, opponent) position pairs
// for the complete-information games and the own position alone for g3;
// only the legal (state, action) pairs of the acting player are addressable.
class QTable {
  public:
    QTable() = default;
    QTable(GameVariant variant, const GridSpec& grid);

    int n_states() const { return n_states_; }
    int n_actions() const { return 2 * max_step_ + 1; }
    bool joint_state() const { return joint_; }
    int n_positions() const { return n_positions_; }
    int max_step() const { return max_step_; }

    int encode(const Observation& obs) const;
    int own_position(int state) const { return joint_ ? state / n_positions_ : state; }
    std::vector<Action> legal(int state) const;
    bool is_legal(int state, Action a) const;

    double get(int state, Action a) const;
    void set(int state, Action a, double v);

    // Count of addressable (state, action) pairs; 39 per player for the
    // incomplete-information game at N=9, S=2.
    long legal_entry_count() const;

    // One "state action value" line per legal pair, plus a '#' header
    // carrying the shape for validation on reload.
    void save(const std::string& path) const;
    static QTable load(const std::string& path);

  private:
    void check(int state, Action a) const;

    bool joint_ = true;
    int n_positions_ = 0;
    int max_step_ = 1;
    int n_states_ = 0;
    std::vector<double> values_;
};

// Q(s,a) <- (1-l) Q(s,a) + l (r + gamma max_{a' legal in s'} Q(s',a')).
void q_update(QTable& table, int s, Action a, double r, int s_next,
              const LearningConfig& cfg);

// Argmax over the supplied legal actions; ties go to the lowest delta.
Action greedy_action(const QTable& table, int s, const std::vector<Action>& legal);

// max(eps_min, 1/cosh(beta t)) with beta chosen so the floor is hit exactly
// at t = decay_horizon.
double epsilon_schedule(long t, const LearningConfig& cfg);

Action epsilon_greedy(const QTable& table, int s, const std::vector<Action>& legal,
                      double eps, std::mt19937_64& rng);

// max over legal actions of Q(s, .)
double state_value(const QTable& table, int s);

// Scripted jammer of the exploitation experiments: stay when co-located,
// otherwise close the gap by min(S, distance).
Action greedy_jammer(int y_idx, int x_idx, const GridSpec& grid);

// Scripted randomized jammer: co-located -> stay or step toward the AP with
// equal probability; nearer the AP than R -> stay or step away from the AP;
// farther -> step toward the AP. Single-index steps, clamped at the borders.
Action mixed_jammer(int y_idx, int x_idx, const GridSpec& grid, std::mt19937_64& rng);

}  // namespace jamgame
