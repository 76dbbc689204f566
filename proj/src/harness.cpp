#include "jamgame/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "jamgame/rng.hpp"
#include "jamgame/static_game.hpp"

namespace jamgame {

const char* to_string(AgentKind kind) {
    switch (kind) {
        case AgentKind::tabular: return "tabular";
        case AgentKind::deep: return "deep";
        case AgentKind::greedy: return "greedy";
        case AgentKind::mixed: return "mixed";
        case AgentKind::random: return "random";
        case AgentKind::static_optimal: return "static-optimal";
    }
    return "?";
}

const char* to_string(GameVariant variant) {
    switch (variant) {
        case GameVariant::g1: return "g1";
        case GameVariant::g2: return "g2";
        case GameVariant::g3: return "g3";
    }
    return "?";
}

AgentKind agent_kind_from_string(const std::string& s) {
    if (s == "tabular") return AgentKind::tabular;
    if (s == "deep") return AgentKind::deep;
    if (s == "greedy") return AgentKind::greedy;
    if (s == "mixed") return AgentKind::mixed;
    if (s == "random") return AgentKind::random;
    if (s == "static-optimal" || s == "static_optimal") return AgentKind::static_optimal;
    throw std::runtime_error("unknown agent kind: " + s);
}

GameVariant game_variant_from_string(const std::string& s) {
    if (s == "g1") return GameVariant::g1;
    if (s == "g2") return GameVariant::g2;
    if (s == "g3") return GameVariant::g3;
    throw std::runtime_error("unknown game variant: " + s);
}

namespace {

bool is_learning(AgentKind k) { return k == AgentKind::tabular || k == AgentKind::deep; }

double default_tabular_lr(GameVariant v) {
    switch (v) {
        case GameVariant::g1: return 1e-4;
        case GameVariant::g2: return 5e-2;
        case GameVariant::g3: return 1e-2;
    }
    return 1e-4;
}

}  // namespace

void ExperimentConfig::finalize() {
    grid.l = scenario.l;
    grid.m = scenario.m;
    for (auto side : {std::pair{&learn_r, agent_r}, std::pair{&learn_j, agent_j}}) {
        LearningConfig& lc = *side.first;
        if (lc.learning_rate == 0.0)
            lc.learning_rate = side.second == AgentKind::deep ? 1e-4
                                                              : default_tabular_lr(variant);
        lc.total_steps = total_steps;
        if (lc.decay_horizon == 0) lc.decay_horizon = std::max<long>(1, 2 * total_steps / 3);
    }
}

void ExperimentConfig::validate() const {
    scenario.validate();
    grid.validate();
    if (grid.l != scenario.l || grid.m != scenario.m)
        throw std::domain_error("ExperimentConfig: grid and scenario disagree on [L, M]");
    if (total_steps < 1) throw std::domain_error("ExperimentConfig: total_steps >= 1");
    if (ma_window < 1) throw std::domain_error("ExperimentConfig: ma_window >= 1");
    if (agent_r == AgentKind::greedy || agent_r == AgentKind::mixed)
        throw std::domain_error("ExperimentConfig: scripted jammer policies are J-only");
    if (variant == GameVariant::g3 &&
        (agent_j == AgentKind::greedy || agent_j == AgentKind::mixed))
        throw std::domain_error(
            "ExperimentConfig: greedy/mixed jammers track the opponent and need g1/g2");
    if (is_learning(agent_r)) learn_r.validate();
    if (is_learning(agent_j)) learn_j.validate();
    if (agent_r == AgentKind::deep || agent_j == AgentKind::deep) deep.validate();
}

namespace {

// ---------------------------------------------------------------------------
// Per-player controllers

class PlayerAgent {
  public:
    virtual ~PlayerAgent() = default;
    virtual Action act(const Observation& obs, const std::vector<Action>& legal,
                       long t) = 0;
    virtual void learn(const Observation& s, Action a, double r, const Observation& s2,
                       const std::vector<Action>& legal2) {}
    virtual void fill_value_grid(RunMetrics* metrics, const GridSpec& grid,
                                 GameVariant variant) const {}
    virtual void save_state(const std::string& path) const {}
};

class TabularAgent final : public PlayerAgent {
  public:
    TabularAgent(GameVariant variant, const GridSpec& grid, const LearningConfig& cfg,
                 std::mt19937_64 rng, const std::string& load_path)
        : table_(variant, grid), cfg_(cfg), rng_(rng) {
        if (load_path.empty()) return;
        QTable loaded = QTable::load(load_path);
        if (loaded.joint_state() != table_.joint_state() ||
            loaded.n_positions() != table_.n_positions() ||
            loaded.max_step() != table_.max_step())
            throw std::runtime_error("qtable warm start: shape mismatch in " + load_path);
        table_ = std::move(loaded);
    }

    Action act(const Observation& obs, const std::vector<Action>& legal, long t) override {
        const double eps = epsilon_schedule(t, cfg_);
        return epsilon_greedy(table_, table_.encode(obs), legal, eps, rng_);
    }

    void learn(const Observation& s, Action a, double r, const Observation& s2,
               const std::vector<Action>& legal2) override {
        q_update(table_, table_.encode(s), a, r, table_.encode(s2), cfg_);
    }

    void fill_value_grid(RunMetrics* metrics, const GridSpec& grid,
                         GameVariant variant) const override {
        const int n = grid.n_positions;
        if (variant == GameVariant::g3) {
            metrics->value_rows = 1;
            metrics->value_cols = n;
            metrics->value_grid.resize(n);
            for (int x = 0; x < n; ++x)
                metrics->value_grid[x] = state_value(table_, x);
            return;
        }
        metrics->value_rows = n;
        metrics->value_cols = n;
        metrics->value_grid.resize(static_cast<size_t>(n) * n);
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y)
                metrics->value_grid[static_cast<size_t>(x) * n + y] =
                    state_value(table_, x * n + y);
    }

    void save_state(const std::string& path) const override { table_.save(path); }

    QTable& table() { return table_; }

  private:
    QTable table_;
    LearningConfig cfg_;
    std::mt19937_64 rng_;
};

class DeepAgent final : public PlayerAgent {
  public:
    DeepAgent(GameVariant variant, const GridSpec& grid, const LearningConfig& lcfg,
              const DeepConfig& dcfg, std::mt19937_64 rng, const std::string& load_path)
        : lcfg_(lcfg),
          dcfg_(dcfg),
          buffer_(dcfg.replay_capacity),
          rng_(rng),
          grid_(grid) {
        const int input_dim =
            variant == GameVariant::g3 ? grid.n_positions : 2 * grid.n_positions;
        net_ = DuelingNet(input_dim, dcfg.hidden, 2 * grid.max_step + 1, rng_);
        if (!load_path.empty()) {
            DuelingNet loaded = DuelingNet::load(load_path);
            if (loaded.input_dim() != net_.input_dim() ||
                loaded.n_actions() != net_.n_actions())
                throw std::runtime_error("weights warm start: shape mismatch in " +
                                         load_path);
            net_ = std::move(loaded);
        }
        target_ = net_;
    }

    Action act(const Observation& obs, const std::vector<Action>& legal, long t) override {
        const double eps = epsilon_schedule(t, lcfg_);
        std::uniform_real_distribution<double> coin(0.0, 1.0);
        if (coin(rng_) < eps) {
            std::uniform_int_distribution<size_t> pick(0, legal.size() - 1);
            return legal[pick(rng_)];
        }
        const auto q = net_.forward(encode_state(obs, grid_));
        Action best = legal.front();
        double best_q = -std::numeric_limits<double>::infinity();
        for (const Action a : legal) {
            const double qa = q[a.delta + grid_.max_step];
            if (qa > best_q) {
                best_q = qa;
                best = a;
            }
        }
        return best;
    }

    void learn(const Observation& s, Action a, double r, const Observation& s2,
               const std::vector<Action>& legal2) override {
        Transition t;
        t.state = encode_state(s, grid_);
        t.action = a.delta + grid_.max_step;
        t.reward = r;
        t.next_state = encode_state(s2, grid_);
        t.next_legal.assign(net_.n_actions(), 0);
        for (const Action an : legal2) t.next_legal[an.delta + grid_.max_step] = 1;
        buffer_.push(std::move(t));

        if (buffer_.size() >= static_cast<size_t>(dcfg_.batch)) {
            const auto batch = buffer_.sample(dcfg_.batch, rng_);
            td_train_step(net_, target_, batch, lcfg_);
        }
        if (++updates_ % dcfg_.sync_every == 0) sync_target(net_, target_);
    }

    void fill_value_grid(RunMetrics* metrics, const GridSpec& grid,
                         GameVariant variant) const override {
        const int n = grid.n_positions;
        auto value_of = [&](const Observation& obs) {
            const auto q = net_.forward(encode_state(obs, grid));
            double best = -std::numeric_limits<double>::infinity();
            for (const Action a : legal_actions(obs.own, grid))
                best = std::max(best, q[a.delta + grid.max_step]);
            return best;
        };
        if (variant == GameVariant::g3) {
            metrics->value_rows = 1;
            metrics->value_cols = n;
            metrics->value_grid.resize(n);
            for (int x = 0; x < n; ++x) metrics->value_grid[x] = value_of({x, {}});
            return;
        }
        metrics->value_rows = n;
        metrics->value_cols = n;
        metrics->value_grid.resize(static_cast<size_t>(n) * n);
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y)
                metrics->value_grid[static_cast<size_t>(x) * n + y] = value_of({x, y});
    }

    void save_state(const std::string& path) const override { net_.save(path); }

    DuelingNet& net() { return net_; }

  private:
    LearningConfig lcfg_;
    DeepConfig dcfg_;
    DuelingNet net_, target_;
    ReplayBuffer buffer_;
    std::mt19937_64 rng_;
    GridSpec grid_;
    long updates_ = 0;
};

class GreedyJammerAgent final : public PlayerAgent {
  public:
    explicit GreedyJammerAgent(const GridSpec& grid) : grid_(grid) {}
    Action act(const Observation& obs, const std::vector<Action>&, long) override {
        return greedy_jammer(obs.own, obs.opponent.value(), grid_);
    }

  private:
    GridSpec grid_;
};

class MixedJammerAgent final : public PlayerAgent {
  public:
    MixedJammerAgent(const GridSpec& grid, std::mt19937_64 rng) : grid_(grid), rng_(rng) {}
    Action act(const Observation& obs, const std::vector<Action>&, long) override {
        return mixed_jammer(obs.own, obs.opponent.value(), grid_, rng_);
    }

  private:
    GridSpec grid_;
    std::mt19937_64 rng_;
};

class RandomAgent final : public PlayerAgent {
  public:
    explicit RandomAgent(std::mt19937_64 rng) : rng_(rng) {}
    Action act(const Observation&, const std::vector<Action>& legal, long) override {
        std::uniform_int_distribution<size_t> pick(0, legal.size() - 1);
        return legal[pick(rng_)];
    }

  private:
    std::mt19937_64 rng_;
};

// Plays the one-shot solution in the dynamic world: walks to a fixed target
// cell and sits there. The jammer targets the grid point nearest j*; the
// receiver samples L or M from the equilibrium mixture and re-samples
// whenever it arrives.
class StaticOptimalAgent final : public PlayerAgent {
  public:
    StaticOptimalAgent(Player role, const GridSpec& grid, const ScenarioConfig& scenario,
                       std::mt19937_64 rng)
        : role_(role), grid_(grid), rng_(rng) {
        const StaticEquilibrium ne = nash_noiseless(scenario.l, scenario.m, scenario.alpha);
        if (role_ == Player::jammer) {
            target_ = nearest_index(ne.jammer_pos);
        } else {
            p_low_ = ne.receiver_strategy.probs[0];
            target_ = sample_extreme();
        }
    }

    Action act(const Observation& obs, const std::vector<Action>&, long) override {
        if (role_ == Player::receiver && obs.own == target_) target_ = sample_extreme();
        const int gap = target_ - obs.own;
        if (gap == 0) return {0};
        const int step = std::min(grid_.max_step, std::abs(gap));
        return {gap > 0 ? step : -step};
    }

  private:
    int nearest_index(double coord) const {
        return static_cast<int>(std::lround((coord - grid_.l) / grid_.step()));
    }
    int sample_extreme() {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        return u(rng_) < p_low_ ? 0 : grid_.n_positions - 1;
    }

    Player role_;
    GridSpec grid_;
    std::mt19937_64 rng_;
    int target_ = 0;
    double p_low_ = 0.0;
};

std::unique_ptr<PlayerAgent> make_agent(Player role, const ExperimentConfig& cfg,
                                        std::mt19937_64 rng) {
    const bool receiver = role == Player::receiver;
    const AgentKind kind = receiver ? cfg.agent_r : cfg.agent_j;
    const LearningConfig& lc = receiver ? cfg.learn_r : cfg.learn_j;
    switch (kind) {
        case AgentKind::tabular:
            return std::make_unique<TabularAgent>(
                cfg.variant, cfg.grid, lc, rng,
                receiver ? cfg.load_qtable_r : cfg.load_qtable_j);
        case AgentKind::deep:
            return std::make_unique<DeepAgent>(
                cfg.variant, cfg.grid, lc, cfg.deep, rng,
                receiver ? cfg.load_weights_r : cfg.load_weights_j);
        case AgentKind::greedy:
            return std::make_unique<GreedyJammerAgent>(cfg.grid);
        case AgentKind::mixed:
            return std::make_unique<MixedJammerAgent>(cfg.grid, rng);
        case AgentKind::random:
            return std::make_unique<RandomAgent>(rng);
        case AgentKind::static_optimal:
            return std::make_unique<StaticOptimalAgent>(role, cfg.grid, cfg.scenario, rng);
    }
    throw std::logic_error("make_agent: unhandled kind");
}

struct Pending {
    bool armed = false;
    Observation obs;
    Action action;
    double reward = 0.0;
};

}  // namespace

RunMetrics run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto t0 = std::chrono::steady_clock::now();

    auto env_rng = make_stream(cfg.seed, "env");
    auto shadow_rng = make_stream(cfg.seed, "shadow");
    auto agent_r = make_agent(Player::receiver, cfg, make_stream(cfg.seed, "agent-r"));
    auto agent_j = make_agent(Player::jammer, cfg, make_stream(cfg.seed, "agent-j"));

    RewardModel reward{cfg.reward, cfg.scenario};
    const GridSpec& grid = cfg.grid;

    RunMetrics metrics;
    metrics.rewards.reserve(cfg.total_steps);
    metrics.trace.reserve(cfg.total_steps);

    EnvState state = reset(grid, cfg.variant, env_rng);

    if (cfg.variant == GameVariant::g1) {
        Pending pending_r, pending_j;
        for (long t = 0; t < cfg.total_steps; ++t) {
            const Player mover = state.turn;
            PlayerAgent& agent = mover == Player::receiver ? *agent_r : *agent_j;
            Pending& pending = mover == Player::receiver ? pending_r : pending_j;

            const Observation obs = observe(state, mover, cfg.variant);
            const int own = mover == Player::receiver ? state.x_idx : state.y_idx;
            const auto legal = legal_actions(own, grid);
            if (pending.armed)
                agent.learn(pending.obs, pending.action, pending.reward, obs, legal);

            const Action a = agent.act(obs, legal, t);
            const StepOutcome out = step_sequential(state, a, grid, reward, &shadow_rng);
            pending = {true, obs, a,
                       mover == Player::receiver ? out.reward_r : out.reward_j};
            state = out.state;
            metrics.rewards.push_back(out.reward_r);
            metrics.trace.emplace_back(state.x_idx, state.y_idx);
        }
    } else {
        for (long t = 0; t < cfg.total_steps; ++t) {
            const Observation obs_r = observe(state, Player::receiver, cfg.variant);
            const Observation obs_j = observe(state, Player::jammer, cfg.variant);
            const auto legal_r = legal_actions(state.x_idx, grid);
            const auto legal_j = legal_actions(state.y_idx, grid);
            const Action ar = agent_r->act(obs_r, legal_r, t);
            const Action aj = agent_j->act(obs_j, legal_j, t);
            const StepOutcome out =
                step_simultaneous(state, ar, aj, grid, reward, &shadow_rng);
            state = out.state;
            const Observation next_r = observe(state, Player::receiver, cfg.variant);
            const Observation next_j = observe(state, Player::jammer, cfg.variant);
            agent_r->learn(obs_r, ar, out.reward_r, next_r,
                           legal_actions(state.x_idx, grid));
            agent_j->learn(obs_j, aj, out.reward_j, next_j,
                           legal_actions(state.y_idx, grid));
            metrics.rewards.push_back(out.reward_r);
            metrics.trace.emplace_back(state.x_idx, state.y_idx);
        }
    }

    metrics.occupancy = joint_occupancy(metrics.trace, grid.n_positions);
    agent_r->fill_value_grid(&metrics, grid, cfg.variant);
    if (!cfg.save_qtable_r.empty() && cfg.agent_r == AgentKind::tabular)
        agent_r->save_state(cfg.save_qtable_r);
    if (!cfg.save_qtable_j.empty() && cfg.agent_j == AgentKind::tabular)
        agent_j->save_state(cfg.save_qtable_j);
    if (!cfg.save_weights_r.empty() && cfg.agent_r == AgentKind::deep)
        agent_r->save_state(cfg.save_weights_r);
    if (!cfg.save_weights_j.empty() && cfg.agent_j == AgentKind::deep)
        agent_j->save_state(cfg.save_weights_j);
    metrics.wall_clock_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return metrics;
}

double RunMetrics::late_window_mean() const {
    if (rewards.empty()) return 0.0;
    const size_t n = std::max<size_t>(1, rewards.size() / 10);
    double sum = 0.0;
    for (size_t i = rewards.size() - n; i < rewards.size(); ++i) sum += rewards[i];
    return sum / static_cast<double>(n);
}

double RunMetrics::late_window_std() const {
    if (rewards.empty()) return 0.0;
    const size_t n = std::max<size_t>(1, rewards.size() / 10);
    const double mean = late_window_mean();
    double acc = 0.0;
    for (size_t i = rewards.size() - n; i < rewards.size(); ++i)
        acc += (rewards[i] - mean) * (rewards[i] - mean);
    return std::sqrt(acc / static_cast<double>(n));
}

std::vector<double> moving_average(const std::vector<double>& series, long w) {
    if (w < 1) throw std::invalid_argument("moving_average: w >= 1");
    std::vector<double> out(series.size());
    double acc = 0.0;
    for (size_t i = 0; i < series.size(); ++i) {
        acc += series[i];
        if (i >= static_cast<size_t>(w)) acc -= series[i - w];
        const double len = std::min<double>(static_cast<double>(w),
                                            static_cast<double>(i + 1));
        out[i] = acc / len;
    }
    return out;
}

std::vector<double> joint_occupancy(std::span<const std::pair<int, int>> trace, int n) {
    if (trace.empty()) throw std::invalid_argument("joint_occupancy: empty trace");
    std::vector<double> occ(static_cast<size_t>(n) * n, 0.0);
    for (const auto& [x, y] : trace) {
        if (x < 0 || x >= n || y < 0 || y >= n)
            throw std::invalid_argument("joint_occupancy: index outside grid");
        occ[static_cast<size_t>(x) * n + y] += 1.0;
    }
    for (double& v : occ) v /= static_cast<double>(trace.size());
    return occ;
}

GainConfig::GainConfig() {
    scenario.l = 10.0;
    scenario.m = 570.0;
    scenario.alpha = 2.0;
    scenario.p_tx_dbm = 23.0;
    scenario.p_j_dbm = 23.0;
    scenario.noise_density_dbm_hz = -174.0;
    scenario.bandwidth_hz = 20e6;
    scenario.shadow_var_db = 2.5;
    grid.n_positions = 15;
    grid.l = scenario.l;
    grid.m = scenario.m;
    grid.max_step = 1;
}

GainResult strategic_gain_experiment(const GainConfig& cfg) {
    GainResult res;
    for (size_t ai = 0; ai < cfg.alphas.size(); ++ai) {
        double strategic_sum = 0.0, random_sum = 0.0;
        for (int run = 0; run < cfg.runs_per_alpha; ++run) {
            ExperimentConfig ec;
            ec.scenario = cfg.scenario;
            ec.scenario.alpha = cfg.alphas[ai];
            ec.grid = cfg.grid;
            ec.variant = GameVariant::g1;
            ec.reward = RewardModel::Kind::spectral_efficiency;
            ec.total_steps = cfg.total_steps;
            ec.agent_j = AgentKind::tabular;
            ec.seed = stream_seed(cfg.seed, "gain-a" + std::to_string(ai) + "-r" +
                                                std::to_string(run));

            ec.agent_r = AgentKind::tabular;
            ec.finalize();
            strategic_sum += run_experiment(ec).late_window_mean();

            ec.agent_r = AgentKind::random;
            ec.finalize();
            random_sum += run_experiment(ec).late_window_mean();
        }
        res.alphas.push_back(cfg.alphas[ai]);
        res.strategic_se.push_back(strategic_sum / cfg.runs_per_alpha);
        res.random_se.push_back(random_sum / cfg.runs_per_alpha);
        res.ratio.push_back(res.strategic_se.back() / res.random_se.back());
    }
    return res;
}

// ---------------------------------------------------------------------------
// Config parsing and export

namespace {

double kv_double(const std::map<std::string, std::string>& kv, const char* key,
                 double fallback) {
    auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    if (it->second == "-inf") return -std::numeric_limits<double>::infinity();
    return std::stod(it->second);
}

long kv_long(const std::map<std::string, std::string>& kv, const char* key, long fallback) {
    auto it = kv.find(key);
    return it == kv.end() ? fallback : std::stol(it->second);
}

std::vector<int> parse_hidden(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stoi(tok));
    return out;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_kv(const std::map<std::string, std::string>& kv) {
    ExperimentConfig cfg;
    cfg.scenario = ScenarioConfig::from_kv(kv);
    cfg.grid.n_positions = static_cast<int>(kv_long(kv, "n_positions", cfg.grid.n_positions));
    cfg.grid.max_step = static_cast<int>(kv_long(kv, "max_step", cfg.grid.max_step));
    if (auto it = kv.find("game"); it != kv.end())
        cfg.variant = game_variant_from_string(it->second);
    if (auto it = kv.find("agent_r"); it != kv.end())
        cfg.agent_r = agent_kind_from_string(it->second);
    if (auto it = kv.find("agent_j"); it != kv.end())
        cfg.agent_j = agent_kind_from_string(it->second);
    if (auto it = kv.find("reward"); it != kv.end()) {
        if (it->second == "value")
            cfg.reward = RewardModel::Kind::normalized_value;
        else if (it->second == "spectral-efficiency" || it->second == "se")
            cfg.reward = RewardModel::Kind::spectral_efficiency;
        else
            throw std::runtime_error("unknown reward kind: " + it->second);
    }
    cfg.total_steps = kv_long(kv, "steps", cfg.total_steps);
    cfg.seed = static_cast<uint64_t>(kv_long(kv, "seed", static_cast<long>(cfg.seed)));
    cfg.ma_window = kv_long(kv, "ma_window", cfg.ma_window);
    cfg.learn_r.learning_rate = kv_double(kv, "lr_r", 0.0);
    cfg.learn_j.learning_rate = kv_double(kv, "lr_j", 0.0);
    const double gamma = kv_double(kv, "discount", 0.99);
    const double eps_min = kv_double(kv, "eps_min", 0.01);
    const long decay = kv_long(kv, "decay_horizon", 0);
    for (LearningConfig* lc : {&cfg.learn_r, &cfg.learn_j}) {
        lc->discount = gamma;
        lc->eps_min = eps_min;
        lc->decay_horizon = decay;
    }
    if (auto it = kv.find("hidden"); it != kv.end()) cfg.deep.hidden = parse_hidden(it->second);
    cfg.deep.batch = static_cast<int>(kv_long(kv, "batch", cfg.deep.batch));
    cfg.deep.replay_capacity =
        static_cast<int>(kv_long(kv, "replay", cfg.deep.replay_capacity));
    cfg.deep.sync_every = kv_long(kv, "sync", cfg.deep.sync_every);
    auto kv_str = [&](const char* key, std::string* out) {
        if (auto it = kv.find(key); it != kv.end()) *out = it->second;
    };
    kv_str("load_qtable_r", &cfg.load_qtable_r);
    kv_str("load_qtable_j", &cfg.load_qtable_j);
    kv_str("save_qtable_r", &cfg.save_qtable_r);
    kv_str("save_qtable_j", &cfg.save_qtable_j);
    kv_str("load_weights_r", &cfg.load_weights_r);
    kv_str("load_weights_j", &cfg.load_weights_j);
    kv_str("save_weights_r", &cfg.save_weights_r);
    kv_str("save_weights_j", &cfg.save_weights_j);
    cfg.finalize();
    return cfg;
}

void ExperimentConfig::write_kv(std::ostream& os) const {
    scenario.write_kv(os);
    os << "game = " << to_string(variant) << "\n"
       << "n_positions = " << grid.n_positions << "\n"
       << "max_step = " << grid.max_step << "\n"
       << "agent_r = " << to_string(agent_r) << "\n"
       << "agent_j = " << to_string(agent_j) << "\n"
       << "reward = "
       << (reward == RewardModel::Kind::normalized_value ? "value" : "spectral-efficiency")
       << "\n"
       << "steps = " << total_steps << "\n"
       << "seed = " << seed << "\n"
       << "ma_window = " << ma_window << "\n"
       << "lr_r = " << learn_r.learning_rate << "\n"
       << "lr_j = " << learn_j.learning_rate << "\n"
       << "discount = " << learn_r.discount << "\n"
       << "eps_min = " << learn_r.eps_min << "\n"
       << "decay_horizon = " << learn_r.decay_horizon << "\n";
}

namespace {

nlohmann::json config_json(const ExperimentConfig& cfg) {
    nlohmann::json j;
    j["scenario"] = {{"l", cfg.scenario.l},
                     {"m", cfg.scenario.m},
                     {"alpha", cfg.scenario.alpha},
                     {"p_tx_dbm", cfg.scenario.p_tx_dbm},
                     {"p_j_dbm", cfg.scenario.p_j_dbm},
                     {"noise_density_dbm_hz", cfg.scenario.noise_density_dbm_hz},
                     {"bandwidth_hz", cfg.scenario.bandwidth_hz},
                     {"shadow_var_db", cfg.scenario.shadow_var_db}};
    j["grid"] = {{"n_positions", cfg.grid.n_positions}, {"max_step", cfg.grid.max_step}};
    j["game"] = to_string(cfg.variant);
    j["agent_r"] = to_string(cfg.agent_r);
    j["agent_j"] = to_string(cfg.agent_j);
    j["reward"] = cfg.reward == RewardModel::Kind::normalized_value ? "value"
                                                                    : "spectral-efficiency";
    j["steps"] = cfg.total_steps;
    j["seed"] = cfg.seed;
    j["ma_window"] = cfg.ma_window;
    j["lr_r"] = cfg.learn_r.learning_rate;
    j["lr_j"] = cfg.learn_j.learning_rate;
    j["discount"] = cfg.learn_r.discount;
    j["eps_min"] = cfg.learn_r.eps_min;
    j["decay_horizon"] = cfg.learn_r.decay_horizon;
    return j;
}

void write_or_throw(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("export: cannot write " + path.string());
    out << content;
    if (!out) throw std::runtime_error("export: write failed for " + path.string());
}

}  // namespace

void export_metrics(const RunMetrics& metrics, const ExperimentConfig& cfg,
                    ExportFormat format, const std::string& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error("export: cannot create directory " + dir);

    const int n = cfg.grid.n_positions;
    if (format == ExportFormat::csv) {
        {
            std::ostringstream ss;
            ss.precision(17);
            ss << "step,reward\n";
            for (size_t i = 0; i < metrics.rewards.size(); ++i)
                ss << i << "," << metrics.rewards[i] << "\n";
            write_or_throw(fs::path(dir) / "rewards.csv", ss.str());
        }
        {
            std::ostringstream ss;
            ss << "step,x_idx,y_idx\n";
            for (size_t i = 0; i < metrics.trace.size(); ++i)
                ss << i << "," << metrics.trace[i].first << "," << metrics.trace[i].second
                   << "\n";
            write_or_throw(fs::path(dir) / "positions.csv", ss.str());
        }
        {
            std::ostringstream ss;
            ss.precision(17);
            for (int y = 0; y < n; ++y) ss << (y ? "," : "") << "y" << y;
            ss << "\n";
            for (int x = 0; x < n; ++x) {
                for (int y = 0; y < n; ++y)
                    ss << (y ? "," : "") << metrics.occupancy[static_cast<size_t>(x) * n + y];
                ss << "\n";
            }
            write_or_throw(fs::path(dir) / "occupancy.csv", ss.str());
        }
        if (!metrics.value_grid.empty()) {
            std::ostringstream ss;
            ss.precision(17);
            for (int c = 0; c < metrics.value_cols; ++c) ss << (c ? "," : "") << "c" << c;
            ss << "\n";
            for (int r = 0; r < metrics.value_rows; ++r) {
                for (int c = 0; c < metrics.value_cols; ++c)
                    ss << (c ? "," : "")
                       << metrics.value_grid[static_cast<size_t>(r) * metrics.value_cols + c];
                ss << "\n";
            }
            write_or_throw(fs::path(dir) / "value_grid.csv", ss.str());
        }
        return;
    }

    nlohmann::json j;
    j["config"] = config_json(cfg);
    j["summary"] = {{"steps", metrics.rewards.size()},
                    {"late_window_mean", metrics.late_window_mean()},
                    {"late_window_std", metrics.late_window_std()},
                    {"wall_clock_s", metrics.wall_clock_s}};
    j["files"] = {"rewards.csv", "positions.csv", "occupancy.csv", "value_grid.csv"};
    write_or_throw(fs::path(dir) / "summary.json", j.dump(2) + "\n");
}

}  // namespace jamgame
