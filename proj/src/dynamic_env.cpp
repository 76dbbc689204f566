#include "jamgame/dynamic_env.hpp"

#include <stdexcept>

namespace jamgame {

void GridSpec::validate() const {
    if (n_positions < 2) throw std::domain_error("GridSpec: requires n_positions >= 2");
    if (!(l > 0.0) || !(m > l)) throw std::domain_error("GridSpec: requires 0 < l < m");
    if (max_step != 1 && max_step != 2)
        throw std::domain_error("GridSpec: max_step must be 1 or 2");
}

double RewardModel::reward(double x_m, double y_m, std::mt19937_64* rng) const {
    if (kind == Kind::normalized_value) return normalized_value(x_m, y_m, cfg.alpha);
    if (rng == nullptr)
        throw std::invalid_argument("RewardModel: spectral efficiency needs a random source");
    return spectral_efficiency({x_m, y_m}, cfg, *rng);
}

std::vector<Action> legal_actions(int pos_idx, const GridSpec& grid) {
    if (pos_idx < 0 || pos_idx >= grid.n_positions)
        throw std::invalid_argument("legal_actions: position index out of range");
    std::vector<Action> acts;
    for (int d = -grid.max_step; d <= grid.max_step; ++d) {
        const int next = pos_idx + d;
        if (next >= 0 && next < grid.n_positions) acts.push_back({d});
    }
    return acts;
}

bool is_legal(int pos_idx, Action a, const GridSpec& grid) {
    if (a.delta < -grid.max_step || a.delta > grid.max_step) return false;
    const int next = pos_idx + a.delta;
    return pos_idx >= 0 && pos_idx < grid.n_positions && next >= 0 &&
           next < grid.n_positions;
}

EnvState reset(const GridSpec& grid, GameVariant variant, std::mt19937_64& rng) {
    grid.validate();
    std::uniform_int_distribution<int> pos(0, grid.n_positions - 1);
    EnvState s;
    s.x_idx = pos(rng);
    s.y_idx = pos(rng);
    if (variant == GameVariant::g1) {
        std::uniform_int_distribution<int> coin(0, 1);
        s.turn = coin(rng) == 0 ? Player::receiver : Player::jammer;
    }
    s.t = 0;
    return s;
}

StepOutcome step_sequential(const EnvState& state, Action action, const GridSpec& grid,
                            const RewardModel& reward, std::mt19937_64* rng) {
    const int mover_idx = state.turn == Player::receiver ? state.x_idx : state.y_idx;
    if (!is_legal(mover_idx, action, grid))
        throw std::invalid_argument("step_sequential: illegal action");
    StepOutcome out;
    out.state = state;
    if (state.turn == Player::receiver)
        out.state.x_idx += action.delta;
    else
        out.state.y_idx += action.delta;
    out.state.turn = state.turn == Player::receiver ? Player::jammer : Player::receiver;
    out.state.t = state.t + 1;
    out.reward_r = reward.reward(grid.position(out.state.x_idx),
                                 grid.position(out.state.y_idx), rng);
    out.reward_j = -out.reward_r;
    return out;
}

StepOutcome step_simultaneous(const EnvState& state, Action action_r, Action action_j,
                              const GridSpec& grid, const RewardModel& reward,
                              std::mt19937_64* rng) {
    if (!is_legal(state.x_idx, action_r, grid))
        throw std::invalid_argument("step_simultaneous: illegal receiver action");
    if (!is_legal(state.y_idx, action_j, grid))
        throw std::invalid_argument("step_simultaneous: illegal jammer action");
    StepOutcome out;
    out.state = state;
    out.state.x_idx += action_r.delta;
    out.state.y_idx += action_j.delta;
    out.state.t = state.t + 1;
    out.reward_r = reward.reward(grid.position(out.state.x_idx),
                                 grid.position(out.state.y_idx), rng);
    out.reward_j = -out.reward_r;
    return out;
}

Observation observe(const EnvState& state, Player player, GameVariant variant) {
    Observation obs;
    obs.own = player == Player::receiver ? state.x_idx : state.y_idx;
    if (variant != GameVariant::g3)
        obs.opponent = player == Player::receiver ? state.y_idx : state.x_idx;
    return obs;
}

}  // namespace jamgame
