#pragma once

#include <optional>
#include <random>
#include <vector>

#include "jamgame/channel.hpp"
#include "jamgame/static_game.hpp"  // Player

namespace jamgame {

// The three dynamic information structures:
//   g1 - sequential moves, both positions always visible
//   g2 - simultaneous moves, opponent visible with one round of delay
//   g3 - simultaneous moves, opponent never visible
enum class GameVariant { g1, g2, g3 };

struct GridSpec {
    int n_positions = 9;
    double l = 10.0;
    double m = 50.0;
    int max_step = 1;  // S

    void validate() const;
    double step() const { return (m - l) / (n_positions - 1); }
    double position(int idx) const { return l + step() * idx; }
};

struct Action {
    int delta = 0;  // position-index displacement, |delta| <= S
};

inline bool operator==(Action a, Action b) { return a.delta == b.delta; }

struct EnvState {
    int x_idx = 0;           // receiver
    int y_idx = 0;           // jammer
    Player turn = Player::receiver;  // mover (g1 only)
    long t = 0;              // half-turn counter for g1, round counter otherwise
};

struct Observation {
    int own = 0;
    std::optional<int> opponent;  // absent in g3
};

// How the per-step reward is produced from the post-move positions.
struct RewardModel {
    enum class Kind { normalized_value, spectral_efficiency };
    Kind kind = Kind::normalized_value;
    ScenarioConfig cfg;

    // rng is only touched in spectral-efficiency mode (shadowing draws).
    double reward(double x_m, double y_m, std::mt19937_64* rng) const;
};

struct StepOutcome {
    EnvState state;
    double reward_r = 0.0;
    double reward_j = 0.0;  // always -reward_r
};

// All deltas keeping idx + delta inside [0, N-1], ascending by delta.
std::vector<Action> legal_actions(int pos_idx, const GridSpec& grid);
bool is_legal(int pos_idx, Action a, const GridSpec& grid);

// Uniform independent positions; uniform first mover for g1.
EnvState reset(const GridSpec& grid, GameVariant variant, std::mt19937_64& rng);

// One half-turn of g1: the player on turn moves, the turn flips, both
// players are credited with the post-move payoff (zero-sum complement).
StepOutcome step_sequential(const EnvState& state, Action action, const GridSpec& grid,
                            const RewardModel& reward, std::mt19937_64* rng = nullptr);

// One round of g2/g3: both indices update atomically.
StepOutcome step_simultaneous(const EnvState& state, Action action_r, Action action_j,
                              const GridSpec& grid, const RewardModel& reward,
                              std::mt19937_64* rng = nullptr);

// g1/g2 -> (own index, opponent index); g3 -> own index only. For g2 the
// state held between rounds pairs each player's current position with the
// opponent's last resolved one, which is exactly the information available
// when the next simultaneous action is chosen.
Observation observe(const EnvState& state, Player player, GameVariant variant);

}  // namespace jamgame
