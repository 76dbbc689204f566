// Command-line front end: static-game solvers, dynamic-game simulation and
// training, exact oracles, and the strategic-gain sweep.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "jamgame/harness.hpp"
#include "jamgame/oracle.hpp"
#include "jamgame/rng.hpp"
#include "jamgame/static_game.hpp"

namespace {

using namespace jamgame;

// Flags shared by simulate/train-deep/oracle/gain-experiment. Values are
// staged as strings so that explicit flags can override --config file keys.
struct CommonFlags {
    std::string config_file;
    std::map<std::string, std::string> overrides;

    void add_option(CLI::App* app, const char* flag, const char* key, const char* desc) {
        app->add_option_function<std::string>(
               flag,
               [this, key](const std::string& v) { overrides[std::string(key)] = v; }, desc);
    }

    std::map<std::string, std::string> merged() const {
        std::map<std::string, std::string> kv;
        if (!config_file.empty()) kv = parse_kv_file(config_file);
        for (const auto& [k, v] : overrides) kv[k] = v;
        return kv;
    }
};

void add_scenario_flags(CLI::App* app, CommonFlags* flags) {
    app->add_option("--config", flags->config_file,
                    "key=value config file (flags override file values)");
    flags->add_option(app, "--l", "l", "closest allowed coordinate [m]");
    flags->add_option(app, "--m", "m", "farthest allowed coordinate [m]");
    flags->add_option(app, "--alpha", "alpha", "path-loss exponent");
    flags->add_option(app, "--p-tx-dbm", "p_tx_dbm", "AP transmit power [dBm]");
    flags->add_option(app, "--p-j-dbm", "p_j_dbm", "jammer power [dBm]");
    flags->add_option(app, "--noise-density-dbm-hz", "noise_density_dbm_hz",
                      "noise density [dBm/Hz], -inf for a noise-free channel");
    flags->add_option(app, "--bandwidth-hz", "bandwidth_hz", "channel bandwidth [Hz]");
    flags->add_option(app, "--shadow-var-db", "shadow_var_db",
                      "log-normal shadowing variance [dB^2]");
}

void add_experiment_flags(CLI::App* app, CommonFlags* flags) {
    add_scenario_flags(app, flags);
    flags->add_option(app, "--game", "game", "g1 | g2 | g3");
    flags->add_option(app, "--agent-r", "agent_r",
                      "tabular | deep | random | static-optimal");
    flags->add_option(app, "--agent-j", "agent_j",
                      "tabular | deep | greedy | mixed | random | static-optimal");
    flags->add_option(app, "--steps", "steps", "simulation steps");
    flags->add_option(app, "--seed", "seed", "master seed");
    flags->add_option(app, "--n-positions", "n_positions", "grid size N");
    flags->add_option(app, "--max-step", "max_step", "per-move index range S");
    flags->add_option(app, "--reward", "reward", "value | spectral-efficiency");
    flags->add_option(app, "--lr-r", "lr_r", "receiver learning rate (0 = default)");
    flags->add_option(app, "--lr-j", "lr_j", "jammer learning rate (0 = default)");
    flags->add_option(app, "--discount", "discount", "discount factor");
    flags->add_option(app, "--eps-min", "eps_min", "exploration floor");
    flags->add_option(app, "--decay-horizon", "decay_horizon",
                      "epsilon decay horizon (0 = 2/3 of steps)");
    flags->add_option(app, "--ma-window", "ma_window", "moving-average window");
    flags->add_option(app, "--hidden", "hidden", "hidden layer sizes, e.g. 64,64");
    flags->add_option(app, "--batch", "batch", "replay batch size");
    flags->add_option(app, "--replay", "replay", "replay buffer capacity");
    flags->add_option(app, "--sync", "sync", "target sync period");
}

// PREFIX expands to PREFIX.r.<ext> / PREFIX.j.<ext> for the two players.
void add_checkpoint_flags(CLI::App* app, CommonFlags* flags) {
    auto expand = [flags](const char* base, const char* ext) {
        return [flags, base, ext](const std::string& prefix) {
            flags->overrides[std::string(base) + "_r"] = prefix + ".r." + ext;
            flags->overrides[std::string(base) + "_j"] = prefix + ".j." + ext;
        };
    };
    app->add_option_function<std::string>("--load-qtable", expand("load_qtable", "qtable"),
                                          "warm-start tabular agents from PREFIX.{r,j}.qtable");
    app->add_option_function<std::string>("--save-qtable", expand("save_qtable", "qtable"),
                                          "write tabular agents to PREFIX.{r,j}.qtable");
    app->add_option_function<std::string>("--load-weights", expand("load_weights", "net"),
                                          "warm-start deep agents from PREFIX.{r,j}.net");
    app->add_option_function<std::string>("--save-weights", expand("save_weights", "net"),
                                          "write deep agents to PREFIX.{r,j}.net");
}

int run_static_solve(const CommonFlags& flags, const std::string& out_file) {
    const ScenarioConfig cfg = ScenarioConfig::from_kv(flags.merged());
    std::ostringstream doc;
    doc.precision(12);
    const StaticEquilibrium ne = nash_noiseless(cfg.l, cfg.m, cfg.alpha);
    doc << "l = " << cfg.l << "\n"
        << "m = " << cfg.m << "\n"
        << "alpha = " << cfg.alpha << "\n"
        << "j_star = " << ne.jammer_pos << "\n"
        << "p_star = " << ne.receiver_strategy.probs[0] << "\n"
        << "value = " << ne.game_value << "\n";
    if (!cfg.effectively_noiseless()) {
        const StaticEquilibrium noisy = nash_with_noise(cfg);
        doc << "j_star_noise = " << noisy.jammer_pos << "\n"
            << "w = " << noisy.receiver_strategy.support[1] << "\n"
            << "p_noise = " << noisy.receiver_strategy.probs[0] << "\n"
            << "value_noise = " << noisy.game_value << "\n";
    }
    std::cout << doc.str();
    if (!out_file.empty()) {
        std::ofstream out(out_file);
        if (!out) throw std::runtime_error("cannot write " + out_file);
        out << doc.str();
    }
    return 0;
}

int run_simulate(const CommonFlags& flags, const std::string& out_dir, bool deep_default) {
    auto kv = flags.merged();
    if (deep_default) {
        kv.try_emplace("agent_r", "deep");
        kv.try_emplace("agent_j", "deep");
    }
    ExperimentConfig cfg = ExperimentConfig::from_kv(kv);
    cfg.validate();
    const RunMetrics metrics = run_experiment(cfg);
    std::cout.precision(12);
    std::cout << "steps = " << metrics.rewards.size() << "\n"
              << "late_window_mean = " << metrics.late_window_mean() << "\n"
              << "late_window_std = " << metrics.late_window_std() << "\n"
              << "wall_clock_s = " << metrics.wall_clock_s << "\n";
    if (!out_dir.empty()) {
        export_metrics(metrics, cfg, ExportFormat::csv, out_dir);
        export_metrics(metrics, cfg, ExportFormat::json, out_dir);
        std::cout << "out_dir = " << out_dir << "\n";
    }
    return 0;
}

void write_value_csv(const std::string& path, int n,
                     const std::function<double(int, int)>& value) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out.precision(17);
    for (int y = 0; y < n; ++y) out << (y ? "," : "") << "y" << y;
    out << "\n";
    for (int x = 0; x < n; ++x) {
        for (int y = 0; y < n; ++y) out << (y ? "," : "") << value(x, y);
        out << "\n";
    }
}

int run_oracle(const CommonFlags& flags, const std::string& game, const std::string& out_dir,
               double discount, double tol, long fp_iters, long iters) {
    namespace fs = std::filesystem;
    auto kv = flags.merged();
    const ScenarioConfig scenario = ScenarioConfig::from_kv(kv);
    GridSpec grid;
    grid.l = scenario.l;
    grid.m = scenario.m;
    grid.n_positions = kv.count("n_positions") ? std::stoi(kv.at("n_positions")) : 9;
    grid.max_step = kv.count("max_step") ? std::stoi(kv.at("max_step")) : 1;
    if (!out_dir.empty()) fs::create_directories(out_dir);
    std::cout.precision(12);

    if (game == "static") {
        const auto m =
            build_static_payoff_matrix(scenario.l, scenario.m, scenario.alpha,
                                       grid.n_positions);
        const auto fp = fictitious_play(m, iters);
        std::cout << "value = " << fp.value << "\n"
                  << "lower = " << fp.lower << "\n"
                  << "upper = " << fp.upper << "\n";
        const auto ne = nash_noiseless(scenario.l, scenario.m, scenario.alpha);
        std::cout << "closed_form_value = " << ne.game_value << "\n"
                  << "closed_form_j_star = " << ne.jammer_pos << "\n";
        if (!out_dir.empty()) {
            write_value_csv((fs::path(out_dir) / "payoff_matrix.csv").string(),
                            grid.n_positions, [&](int x, int y) { return m.at(x, y); });
            std::ofstream row(fs::path(out_dir) / "row_strategy.csv");
            row << "coord,prob\n";
            for (size_t i = 0; i < fp.row_strategy.support.size(); ++i)
                row << fp.row_strategy.support[i] << "," << fp.row_strategy.probs[i] << "\n";
            std::ofstream col(fs::path(out_dir) / "col_strategy.csv");
            col << "coord,prob\n";
            for (size_t i = 0; i < fp.col_strategy.support.size(); ++i)
                col << fp.col_strategy.support[i] << "," << fp.col_strategy.probs[i] << "\n";
        }
        return 0;
    }

    if (game == "g1") {
        const auto vi = alternating_minimax_vi(grid, scenario, discount, tol);
        auto rng = make_stream(1, "oracle-g1");
        const double avg = alternating_vi_average_reward(vi, scenario, 1'000'000, rng);
        std::cout << "sweeps = " << vi.sweeps << "\n"
                  << "residual = " << vi.residuals.back() << "\n"
                  << "greedy_long_run_average = " << avg << "\n";
        if (!out_dir.empty()) {
            write_value_csv((fs::path(out_dir) / "value_r_to_move.csv").string(),
                            grid.n_positions, [&](int x, int y) {
                                return vi.at(x, y, Player::receiver);
                            });
            write_value_csv((fs::path(out_dir) / "value_j_to_move.csv").string(),
                            grid.n_positions,
                            [&](int x, int y) { return vi.at(x, y, Player::jammer); });
        }
        return 0;
    }

    if (game == "g2") {
        const auto vi = shapley_vi(grid, scenario, discount, tol, fp_iters);
        auto rng = make_stream(1, "oracle-g2");
        const double avg = shapley_average_reward(vi, scenario, 1'000'000, rng);
        std::cout << "sweeps = " << vi.sweeps << "\n"
                  << "residual = " << vi.residuals.back() << "\n"
                  << "fp_gap = " << vi.max_fp_gap << "\n"
                  << "converged = " << (vi.converged ? 1 : 0) << "\n"
                  << "equilibrium_long_run_average = " << avg << "\n";
        if (!vi.converged)
            std::cerr << "warning: residual " << vi.residuals.back()
                      << " above tolerance; widest matrix-game bracket " << vi.max_fp_gap
                      << "\n";
        if (!out_dir.empty())
            write_value_csv((fs::path(out_dir) / "value.csv").string(), grid.n_positions,
                            [&](int x, int y) { return vi.at(x, y); });
        return 0;
    }

    throw std::runtime_error("oracle: unknown game " + game);
}

int run_gain(const CommonFlags& flags, const std::string& alphas_csv, int runs, long steps,
             uint64_t seed, const std::string& out_dir) {
    GainConfig gc;
    auto kv = flags.merged();
    if (!kv.empty()) {
        // Scenario keys override the wide-area defaults.
        std::map<std::string, std::string> merged;
        ScenarioConfig base = gc.scenario;
        std::ostringstream ss;
        base.write_kv(ss);
        merged = parse_kv_text(ss.str());
        for (const auto& [k, v] : kv) merged[k] = v;
        gc.scenario = ScenarioConfig::from_kv(merged);
        gc.grid.l = gc.scenario.l;
        gc.grid.m = gc.scenario.m;
        if (kv.count("n_positions")) gc.grid.n_positions = std::stoi(kv.at("n_positions"));
        if (kv.count("max_step")) gc.grid.max_step = std::stoi(kv.at("max_step"));
    }
    if (!alphas_csv.empty()) {
        gc.alphas.clear();
        std::stringstream ss(alphas_csv);
        std::string tok;
        while (std::getline(ss, tok, ',')) gc.alphas.push_back(std::stod(tok));
    }
    gc.runs_per_alpha = runs;
    gc.total_steps = steps;
    gc.seed = seed;

    const GainResult res = strategic_gain_experiment(gc);
    std::cout.precision(12);
    std::ostringstream csv;
    csv.precision(17);
    csv << "alpha,strategic_se,random_se,ratio\n";
    for (size_t i = 0; i < res.alphas.size(); ++i) {
        std::cout << "alpha = " << res.alphas[i]
                  << "  strategic_se = " << res.strategic_se[i]
                  << "  random_se = " << res.random_se[i] << "  ratio = " << res.ratio[i]
                  << "\n";
        csv << res.alphas[i] << "," << res.strategic_se[i] << "," << res.random_se[i] << ","
            << res.ratio[i] << "\n";
    }
    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        std::ofstream out(std::filesystem::path(out_dir) / "gain.csv");
        if (!out) throw std::runtime_error("cannot write gain.csv under " + out_dir);
        out << csv.str();
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mobile jamming game: solvers, simulators and oracles"};
    app.require_subcommand(1);

    CommonFlags static_flags;
    std::string static_out;
    auto* solve = app.add_subcommand("static-solve", "solve the one-shot game");
    add_scenario_flags(solve, &static_flags);
    solve->add_option("--out", static_out, "also write the key=value record here");

    CommonFlags sim_flags;
    std::string sim_out;
    auto* sim = app.add_subcommand("simulate", "run a dynamic-game experiment");
    add_experiment_flags(sim, &sim_flags);
    add_checkpoint_flags(sim, &sim_flags);
    sim->add_option("--out", sim_out, "artifact directory (CSV + JSON)");

    CommonFlags deep_flags;
    std::string deep_out;
    auto* deep = app.add_subcommand("train-deep", "simulate with dueling deep-Q agents");
    add_experiment_flags(deep, &deep_flags);
    add_checkpoint_flags(deep, &deep_flags);
    deep->add_option("--out", deep_out, "artifact directory (CSV + JSON)");

    CommonFlags oracle_flags;
    std::string oracle_game = "static", oracle_out;
    double oracle_discount = 0.99, oracle_tol = 1e-9;
    long oracle_fp_iters = 200'000, oracle_iters = 200'000;
    auto* orc = app.add_subcommand("oracle", "exact/converging reference solvers");
    add_scenario_flags(orc, &oracle_flags);
    oracle_flags.add_option(orc, "--n-positions", "n_positions", "grid size N");
    oracle_flags.add_option(orc, "--max-step", "max_step", "per-move index range S");
    orc->add_option("--game", oracle_game, "static | g1 | g2")->required();
    orc->add_option("--discount", oracle_discount, "discount factor");
    orc->add_option("--tol", oracle_tol, "sup-norm convergence tolerance");
    orc->add_option("--fp-iters", oracle_fp_iters, "fictitious-play iterations per sweep");
    orc->add_option("--iters", oracle_iters, "fictitious-play iterations (static)");
    orc->add_option("--out", oracle_out, "CSV directory");

    CommonFlags gain_flags;
    std::string gain_alphas, gain_out;
    int gain_runs = 10;
    long gain_steps = 1'500'000;
    uint64_t gain_seed = 1;
    auto* gain = app.add_subcommand("gain-experiment",
                                    "strategic vs random receiver spectral efficiency");
    add_scenario_flags(gain, &gain_flags);
    gain_flags.add_option(gain, "--n-positions", "n_positions", "grid size N");
    gain_flags.add_option(gain, "--max-step", "max_step", "per-move index range S");
    gain->add_option("--alphas", gain_alphas, "comma-separated path-loss exponents");
    gain->add_option("--runs", gain_runs, "runs per exponent");
    gain->add_option("--steps", gain_steps, "steps per run");
    gain->add_option("--seed", gain_seed, "master seed");
    gain->add_option("--out", gain_out, "CSV directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) return run_static_solve(static_flags, static_out);
        if (sim->parsed()) return run_simulate(sim_flags, sim_out, false);
        if (deep->parsed()) return run_simulate(deep_flags, deep_out, true);
        if (orc->parsed())
            return run_oracle(oracle_flags, oracle_game, oracle_out, oracle_discount,
                              oracle_tol, oracle_fp_iters, oracle_iters);
        if (gain->parsed())
            return run_gain(gain_flags, gain_alphas, gain_runs, gain_steps, gain_seed,
                            gain_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
