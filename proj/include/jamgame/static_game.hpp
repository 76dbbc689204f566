#pragma once

#include <vector>

#include "jamgame/channel.hpp"

namespace jamgame {

enum class Player { receiver, jammer };

struct MixedStrategy {
    std::vector<double> support;  // coordinates in [L, M]
    std::vector<double> probs;    // same length, sums to 1

    void validate(double l, double m) const;
    bool is_pure(double* coord = nullptr) const;
};

struct StaticEquilibrium {
    double jammer_pos = 0.0;
    MixedStrategy receiver_strategy;
    double game_value = 0.0;
};

// Receiver utility of the one-shot game: the normalized value when the
// scenario is noise-free, otherwise log2(1 + SNJR) with deterministic gains.
double static_utility(double x, double y, const ScenarioConfig& cfg);

// Closed-form NE of the noiseless game: jammer at 2LM/(L+M), receiver mixing
// L with probability L/(L+M) and M otherwise, value ((M-L)/(M+L))^alpha.
StaticEquilibrium nash_noiseless(double l, double m, double alpha);

// Maximizers of u_R(., y). Noise-free scenarios use the closed-form split at
// j* (both extremes inside the indifference tolerance); noisy scenarios take
// the argmax over a grid_n-point evaluation grid.
std::vector<double> best_response_receiver(double y, const ScenarioConfig& cfg,
                                           int grid_n = 4001);

// Pure receiver -> same coordinate (value 0); mixed -> grid minimizer of the
// expected utility.
double best_response_jammer(const MixedStrategy& receiver, const ScenarioConfig& cfg,
                            int grid_n = 4001);

// Unique root in (L, upper) of u_R(L, y) = u_R(upper, y), found by bisection.
double indifference_point(const ScenarioConfig& cfg, double upper);

// Fixed point of (j <- indifference_point(cfg, W), W <- argmax_x u_R(x, j))
// for the noisy game; the receiver mixes {L, W} with the probability that
// makes the jammer locally indifferent around j. Throws std::runtime_error
// if the alternation has not settled within max_iters.
StaticEquilibrium nash_with_noise(const ScenarioConfig& cfg, int grid_n = 4001,
                                  int max_iters = 100);

struct StackelbergOutcome {
    StaticEquilibrium equilibrium;
    double value = 0.0;
};

// Sequential version of the noiseless game. Leader J or mixed-capable leader
// R reproduce the NE; a pure-only leader R is cornered and the value is 0.
StackelbergOutcome stackelberg(Player leader, const ScenarioConfig& cfg,
                               bool allow_mixed_leader = true);

}  // namespace jamgame
