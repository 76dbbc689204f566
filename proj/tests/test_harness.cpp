#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "jamgame/harness.hpp"
#include "jamgame/rng.hpp"

using namespace jamgame;

namespace {

ExperimentConfig base_config(GameVariant variant, long steps, uint64_t seed) {
    ExperimentConfig cfg;
    cfg.variant = variant;
    cfg.grid.n_positions = 9;
    cfg.grid.max_step = 1;
    cfg.total_steps = steps;
    cfg.seed = seed;
    cfg.finalize();
    return cfg;
}

}  // namespace

TEST_CASE("moving average trailing-window convention") {
    CHECK(moving_average({1.0, 2.0, 3.0}, 2) == std::vector<double>{1.0, 1.5, 2.5});
    const std::vector<double> constant(10, 4.2);
    CHECK(moving_average(constant, 5) == constant);
    const std::vector<double> any = {3.0, 1.0, 4.0, 1.0, 5.0};
    CHECK(moving_average(any, 1) == any);
    CHECK_THROWS_AS(moving_average(any, 0), std::invalid_argument);
}

TEST_CASE("occupancy matrix normalization") {
    std::vector<std::pair<int, int>> one(17, {3, 5});
    const auto occ = joint_occupancy(one, 9);
    CHECK(occ[3 * 9 + 5] == 1.0);
    double sum = 0.0;
    for (double v : occ) sum += v;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));

    auto rng = make_stream(3, "occ");
    std::uniform_int_distribution<int> pos(0, 8);
    std::vector<std::pair<int, int>> trace;
    const int n = 1'000'000;
    trace.reserve(n);
    for (int i = 0; i < n; ++i) trace.emplace_back(pos(rng), pos(rng));
    const auto uocc = joint_occupancy(trace, 9);
    const double p = 1.0 / 81.0;
    const double tol = 3.0 * std::sqrt(p * (1 - p) / n);
    double total = 0.0;
    for (double v : uocc) {
        CHECK(std::abs(v - p) <= tol);
        total += v;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    CHECK_THROWS_AS(joint_occupancy(std::vector<std::pair<int, int>>{}, 9),
                    std::invalid_argument);
}

TEST_CASE("experiments replay bit-identically under one seed") {
    for (GameVariant v : {GameVariant::g1, GameVariant::g2, GameVariant::g3}) {
        const auto cfg = base_config(v, 20000, 77);
        const RunMetrics a = run_experiment(cfg);
        const RunMetrics b = run_experiment(cfg);
        CHECK(a.rewards == b.rewards);
        CHECK(a.trace == b.trace);
        CHECK(a.occupancy == b.occupancy);
        CHECK(a.value_grid == b.value_grid);
        CHECK(a.rewards.size() == static_cast<size_t>(cfg.total_steps));
    }
}

TEST_CASE("different seeds diverge") {
    const auto a = run_experiment(base_config(GameVariant::g2, 5000, 1));
    const auto b = run_experiment(base_config(GameVariant::g2, 5000, 2));
    CHECK(a.rewards != b.rewards);
}

TEST_CASE("config validation rejects role and variant mismatches") {
    auto cfg = base_config(GameVariant::g2, 100, 1);
    cfg.agent_r = AgentKind::greedy;
    CHECK_THROWS_AS(cfg.validate(), std::domain_error);
    cfg = base_config(GameVariant::g3, 100, 1);
    cfg.agent_j = AgentKind::greedy;
    CHECK_THROWS_AS(cfg.validate(), std::domain_error);
    cfg = base_config(GameVariant::g3, 100, 1);
    cfg.agent_j = AgentKind::mixed;
    CHECK_THROWS_AS(cfg.validate(), std::domain_error);
    cfg = base_config(GameVariant::g1, 0, 1);
    CHECK_THROWS_AS(cfg.validate(), std::domain_error);
    cfg = base_config(GameVariant::g1, 100, 1);
    cfg.grid.l = 11.0;
    CHECK_THROWS_AS(cfg.validate(), std::domain_error);
}

TEST_CASE("kv config resolves per-game defaults and overrides") {
    const auto g1 = ExperimentConfig::from_kv(parse_kv_text("game = g1\n"));
    CHECK(g1.learn_r.learning_rate == 1e-4);
    CHECK(g1.learn_r.decay_horizon == 2 * g1.total_steps / 3);
    const auto g2 = ExperimentConfig::from_kv(parse_kv_text("game = g2\n"));
    CHECK(g2.learn_r.learning_rate == 5e-2);
    const auto g3 = ExperimentConfig::from_kv(parse_kv_text("game = g3\n"));
    CHECK(g3.learn_j.learning_rate == 1e-2);
    const auto custom = ExperimentConfig::from_kv(
        parse_kv_text("game = g2\nlr_r = 0.25\nsteps = 900\ndecay_horizon = 300\n"
                      "agent_j = greedy\nmax_step = 2\nseed = 9\n"));
    CHECK(custom.learn_r.learning_rate == 0.25);
    CHECK(custom.learn_j.learning_rate == 5e-2);
    CHECK(custom.total_steps == 900);
    CHECK(custom.learn_r.decay_horizon == 300);
    CHECK(custom.agent_j == AgentKind::greedy);
    CHECK(custom.grid.max_step == 2);
    CHECK(custom.seed == 9);
}

TEST_CASE("scripted, random and static-optimal opponents run end to end") {
    auto cfg = base_config(GameVariant::g2, 20000, 5);
    cfg.agent_j = AgentKind::greedy;
    CHECK_NOTHROW(run_experiment(cfg));
    cfg.agent_j = AgentKind::mixed;
    CHECK_NOTHROW(run_experiment(cfg));
    cfg.agent_j = AgentKind::static_optimal;
    cfg.agent_r = AgentKind::random;
    CHECK_NOTHROW(run_experiment(cfg));
    cfg = base_config(GameVariant::g1, 20000, 5);
    cfg.agent_r = AgentKind::static_optimal;
    cfg.agent_j = AgentKind::static_optimal;
    const auto metrics = run_experiment(cfg);
    // the jammer parks at the grid cell nearest 2LM/(L+M) ~ 16.67 -> index 1
    double j_at_target = 0.0;
    for (int x = 0; x < 9; ++x) j_at_target += metrics.occupancy[x * 9 + 1];
    CHECK(j_at_target > 0.9);
}

TEST_CASE("a chased receiver camps by the AP against a reactive jammer") {
    auto cfg = base_config(GameVariant::g2, 300000, 11);
    cfg.agent_j = AgentKind::greedy;
    const auto metrics = run_experiment(cfg);
    const size_t late = metrics.trace.size() - metrics.trace.size() / 10;
    std::vector<std::pair<int, int>> tail(metrics.trace.begin() + late,
                                          metrics.trace.end());
    const auto occ = joint_occupancy(tail, 9);
    // late mass concentrates on near-AP cells with the jammer one step off
    double near_ap = 0.0, adjacent = 0.0;
    for (int x = 0; x < 9; ++x)
        for (int y = 0; y < 9; ++y) {
            if (x <= 1) near_ap += occ[x * 9 + y];
            if (std::abs(x - y) == 1) adjacent += occ[x * 9 + y];
        }
    CHECK(near_ap >= 0.6);
    CHECK(adjacent >= 0.6);
}

TEST_CASE("export writes the advertised artifacts") {
    namespace fs = std::filesystem;
    const auto cfg = base_config(GameVariant::g2, 3000, 21);
    const auto metrics = run_experiment(cfg);
    const auto dir = fs::temp_directory_path() / "jamgame_export_test";
    fs::remove_all(dir);
    export_metrics(metrics, cfg, ExportFormat::csv, dir.string());
    export_metrics(metrics, cfg, ExportFormat::json, dir.string());

    // occupancy: header + N rows, N columns each
    std::ifstream occ(dir / "occupancy.csv");
    REQUIRE(occ.good());
    std::string line;
    int rows = 0, header_cols = 0;
    std::getline(occ, line);
    header_cols = 1 + static_cast<int>(std::count(line.begin(), line.end(), ','));
    while (std::getline(occ, line)) {
        ++rows;
        CHECK(1 + static_cast<int>(std::count(line.begin(), line.end(), ',')) ==
              header_cols);
    }
    CHECK(rows == cfg.grid.n_positions);
    CHECK(header_cols == cfg.grid.n_positions);

    // json summary round-trips the numbers exactly and echoes the config
    std::ifstream sj(dir / "summary.json");
    REQUIRE(sj.good());
    const auto j = nlohmann::json::parse(sj);
    CHECK(j["summary"]["late_window_mean"].get<double>() == metrics.late_window_mean());
    CHECK(j["summary"]["late_window_std"].get<double>() == metrics.late_window_std());
    CHECK(j["config"]["game"] == "g2");
    CHECK(j["config"]["scenario"]["l"].get<double>() == cfg.scenario.l);
    CHECK(j["config"]["scenario"]["m"].get<double>() == cfg.scenario.m);
    CHECK(j["config"]["steps"].get<long>() == cfg.total_steps);
    CHECK(j["config"]["seed"].get<uint64_t>() == cfg.seed);
    CHECK(j["config"]["lr_r"].get<double>() == cfg.learn_r.learning_rate);

    fs::remove_all(dir);
    CHECK_THROWS(export_metrics(metrics, cfg, ExportFormat::csv, "/proc/noexist/dir"));
}

TEST_CASE("late-window statistics cover the final tenth") {
    RunMetrics m;
    m.rewards.assign(90, 0.0);
    m.rewards.insert(m.rewards.end(), 10, 2.0);
    CHECK(m.late_window_mean() == 2.0);
    CHECK(m.late_window_std() == 0.0);
}

TEST_CASE("qtable checkpoints restore the learned table") {
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / "jamgame_ckpt_test";
    fs::create_directories(dir);
    auto cfg = base_config(GameVariant::g2, 20000, 31);
    cfg.save_qtable_r = (dir / "r.qtable").string();
    cfg.save_qtable_j = (dir / "j.qtable").string();
    run_experiment(cfg);
    REQUIRE(fs::exists(cfg.save_qtable_r));
    REQUIRE(fs::exists(cfg.save_qtable_j));

    // a warm-started greedy replay of the saved table is deterministic
    auto warm = base_config(GameVariant::g2, 1000, 32);
    warm.load_qtable_r = cfg.save_qtable_r;
    warm.load_qtable_j = cfg.save_qtable_j;
    CHECK_NOTHROW(run_experiment(warm));

    // shape mismatches are rejected
    auto bad = base_config(GameVariant::g3, 1000, 33);
    bad.load_qtable_r = cfg.save_qtable_r;
    CHECK_THROWS(run_experiment(bad));
    fs::remove_all(dir);
}

TEST_CASE("deep agents train end to end and checkpoint") {
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / "jamgame_deepckpt_test";
    fs::create_directories(dir);
    auto cfg = base_config(GameVariant::g2, 3000, 41);
    cfg.agent_r = AgentKind::deep;
    cfg.agent_j = AgentKind::greedy;
    cfg.deep.hidden = {16, 16};
    cfg.save_weights_r = (dir / "r.net").string();
    cfg.finalize();
    const auto metrics = run_experiment(cfg);
    CHECK(metrics.rewards.size() == 3000);
    CHECK(metrics.value_rows == 9);
    CHECK(metrics.value_cols == 9);
    REQUIRE(fs::exists(cfg.save_weights_r));

    auto warm = cfg;
    warm.total_steps = 500;
    warm.learn_r.decay_horizon = 0;  // re-derive for the shorter run
    warm.learn_j.decay_horizon = 0;
    warm.load_weights_r = cfg.save_weights_r;
    warm.save_weights_r.clear();
    warm.finalize();
    CHECK_NOTHROW(run_experiment(warm));
    fs::remove_all(dir);
}

TEST_CASE("tiny strategic-gain sweep is deterministic and structurally sound") {
    GainConfig gc;
    gc.alphas = {2.0};
    gc.runs_per_alpha = 1;
    gc.total_steps = 4000;
    gc.grid.n_positions = 5;
    gc.seed = 5;
    const auto a = strategic_gain_experiment(gc);
    const auto b = strategic_gain_experiment(gc);
    REQUIRE(a.alphas.size() == 1);
    CHECK(a.strategic_se[0] > 0.0);
    CHECK(a.random_se[0] > 0.0);
    CHECK(a.ratio[0] == a.strategic_se[0] / a.random_se[0]);
    CHECK(a.strategic_se[0] == b.strategic_se[0]);
    CHECK(a.random_se[0] == b.random_se[0]);
}
