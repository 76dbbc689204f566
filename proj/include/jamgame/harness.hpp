#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "jamgame/agents.hpp"
#include "jamgame/deep_agent.hpp"
#include "jamgame/dynamic_env.hpp"

namespace jamgame {

enum class AgentKind { tabular, deep, greedy, mixed, random, static_optimal };

const char* to_string(AgentKind kind);
const char* to_string(GameVariant variant);
AgentKind agent_kind_from_string(const std::string& s);
GameVariant game_variant_from_string(const std::string& s);

struct ExperimentConfig {
    ScenarioConfig scenario;
    GridSpec grid;  // l/m mirror the scenario; see finalize()
    GameVariant variant = GameVariant::g1;
    AgentKind agent_r = AgentKind::tabular;
    AgentKind agent_j = AgentKind::tabular;
    LearningConfig learn_r;
    LearningConfig learn_j;
    DeepConfig deep;
    RewardModel::Kind reward = RewardModel::Kind::normalized_value;
    long total_steps = 1'500'000;
    uint64_t seed = 1;
    long ma_window = 5'000;
    // Optional warm-start / checkpoint paths, honored by the matching agent
    // kinds (qtable: tabular, weights: deep).
    std::string load_qtable_r, load_qtable_j, save_qtable_r, save_qtable_j;
    std::string load_weights_r, load_weights_j, save_weights_r, save_weights_j;

    // Copies l/m into the grid and resolves deferred defaults: a zero
    // learning rate becomes the per-game tabular default (1e-4, 5e-2, 1e-2)
    // or 1e-4 for deep agents, and a zero decay horizon becomes 2/3 of the
    // run length.
    void finalize();
    // Rejects inconsistent configs (scripted jammers in the receiver role,
    // opponent-tracking jammers in g3, bad ranges) before any simulation.
    void validate() const;

    static ExperimentConfig from_kv(const std::map<std::string, std::string>& kv);
    void write_kv(std::ostream& os) const;
};

struct RunMetrics {
    std::vector<double> rewards;                 // receiver payoff per step
    std::vector<std::pair<int, int>> trace;      // (x_idx, y_idx) after each step
    std::vector<double> occupancy;               // N x N visit frequencies
    std::vector<double> value_grid;              // receiver state values
    int value_rows = 0;
    int value_cols = 0;
    double wall_clock_s = 0.0;

    double late_window_mean() const;  // final 10% of the reward series
    double late_window_std() const;
};

// Trains/plays both agents online for cfg.total_steps; deterministic for a
// fixed seed (all randomness flows through named sub-streams).
RunMetrics run_experiment(const ExperimentConfig& cfg);

// Trailing moving average; the first w-1 outputs average the available
// prefix.
std::vector<double> moving_average(const std::vector<double>& series, long w);

// Fraction of steps spent in each (x_idx, y_idx) cell; entries sum to 1.
std::vector<double> joint_occupancy(std::span<const std::pair<int, int>> trace, int n);

struct GainConfig {
    ScenarioConfig scenario;
    GridSpec grid;
    std::vector<double> alphas = {2.0, 2.25, 2.5, 2.75, 3.0};
    int runs_per_alpha = 10;
    long total_steps = 1'500'000;
    uint64_t seed = 1;

    GainConfig();  // noisy shadowed wide-area defaults (L=10 m, M=570 m, N=15)
};

struct GainResult {
    std::vector<double> alphas;
    std::vector<double> strategic_se;  // seed-averaged late-window spectral efficiency
    std::vector<double> random_se;
    std::vector<double> ratio;
};

// Learning receiver vs learning jammer against a random-walk receiver
// baseline, both with the spectral-efficiency reward.
GainResult strategic_gain_experiment(const GainConfig& cfg);

enum class ExportFormat { csv, json };

// csv: one file per series/matrix (rewards.csv, positions.csv,
// occupancy.csv, value_grid.csv). json: a single summary.json with the
// config echo, late-window statistics and the file manifest.
void export_metrics(const RunMetrics& metrics, const ExperimentConfig& cfg,
                    ExportFormat format, const std::string& dir);

}  // namespace jamgame
