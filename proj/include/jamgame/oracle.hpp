#pragma once

#include <random>
#include <vector>

#include "jamgame/dynamic_env.hpp"
#include "jamgame/static_game.hpp"

namespace jamgame {

// Receiver payoffs of a finite zero-sum game: rows are receiver pure
// strategies, columns jammer pure strategies (jammer payoff = negation).
struct PayoffMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> entries;           // row-major
    std::vector<double> row_coords;        // optional labels (grid coordinates)
    std::vector<double> col_coords;

    double at(int r, int c) const { return entries[static_cast<size_t>(r) * cols + c]; }
    double& at(int r, int c) { return entries[static_cast<size_t>(r) * cols + c]; }
};

// Discretized one-shot game on an n-point grid over [L, M].
PayoffMatrix build_static_payoff_matrix(double l, double m, double alpha, int n);

struct FictitiousPlayResult {
    double value = 0.0;      // midpoint of the running bounds
    double lower = 0.0;      // best guaranteed row payoff seen
    double upper = 0.0;      // best guaranteed col cap seen
    MixedStrategy row_strategy;  // empirical frequencies
    MixedStrategy col_strategy;
};

// Brown's fictitious play for zero-sum matrix games. The running bounds
// max_i (M q_t)_i and min_j (p_t^T M)_j bracket the game value at every
// iteration, so `lower <= value <= upper` holds on return by construction.
FictitiousPlayResult fictitious_play(const PayoffMatrix& m, long iters);

// Incrementally extendable fictitious-play state. Used standalone by
// fictitious_play and persisted per game state by shapley_vi so that inner
// solves warm-start across sweeps.
class FictitiousPlayState {
  public:
    void reset(int rows, int cols);
    // Runs `iters` best-response rounds against `m` (which may have changed
    // since the last call), extending the empirical history.
    void run(const PayoffMatrix& m, long iters);
    // Exact bounds of the current matrix under the empirical mixtures.
    void bounds(const PayoffMatrix& m, double* lower, double* upper) const;
    std::vector<double> row_probs() const;
    std::vector<double> col_probs() const;
    long iterations() const { return total_; }

  private:
    std::vector<double> row_payoff_;  // cumulative payoff of each row vs col history
    std::vector<double> col_payoff_;  // cumulative payoff of each col vs row history
    std::vector<long> row_counts_;
    std::vector<long> col_counts_;
    long total_ = 0;
};

// Exact solution of the alternating-move dynamic game: value table over
// (x_idx, y_idx, mover) with Jacobi backups, so the sup-norm residual
// sequence contracts monotonically.
struct AlternatingVIResult {
    GridSpec grid;
    double discount = 0.0;
    std::vector<double> values;     // [x * N + y] * 2 + turn, turn 0 = receiver
    std::vector<double> residuals;  // one per sweep
    int sweeps = 0;

    double at(int x_idx, int y_idx, Player turn) const;
};

AlternatingVIResult alternating_minimax_vi(const GridSpec& grid, const ScenarioConfig& cfg,
                                           double discount, double tol,
                                           int max_sweeps = 1'000'000);

// Greedy policies extracted from the table (lowest-delta tie break),
// simulated from uniform starts; returns the long-run mean of the
// receiver's per-half-turn payoff.
double alternating_vi_average_reward(const AlternatingVIResult& vi, const ScenarioConfig& cfg,
                                     long steps, std::mt19937_64& rng, int n_starts = 100);

// Simultaneous-move counterpart: each state's backup is the value of the
// matrix game with entries r(s') + gamma V(s'), solved by warm-started
// fictitious play.
struct ShapleyVIResult {
    GridSpec grid;
    double discount = 0.0;
    std::vector<double> values;           // [x * N + y]
    std::vector<double> residuals;
    std::vector<double> fp_gaps;          // per sweep: widest matrix-game bracket
    std::vector<std::vector<double>> row_policies;  // per-state mixtures over legal actions
    std::vector<std::vector<double>> col_policies;
    double max_fp_gap = 0.0;              // final sweep's widest bracket
    bool converged = false;
    int sweeps = 0;

    double at(int x_idx, int y_idx) const;
};

ShapleyVIResult shapley_vi(const GridSpec& grid, const ScenarioConfig& cfg, double discount,
                           double tol, long fp_iters = 200'000, int max_sweeps = 2000);

// Long-run mean receiver payoff when both players sample the per-state
// equilibrium mixtures of a shapley_vi solution.
double shapley_average_reward(const ShapleyVIResult& vi, const ScenarioConfig& cfg,
                              long steps, std::mt19937_64& rng, int n_starts = 100);

}  // namespace jamgame
