#include "jamgame/static_game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace jamgame {

namespace {

constexpr double kIndifferenceTol = 1e-6;  // relative to (M - L)

std::vector<double> make_grid(double lo, double hi, int n) {
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = lo + (hi - lo) * i / (n - 1);
    g.back() = hi;
    return g;
}

}  // namespace

void MixedStrategy::validate(double l, double m) const {
    if (support.size() != probs.size() || support.empty())
        throw std::invalid_argument("MixedStrategy: support/probs size mismatch");
    double sum = 0.0;
    for (size_t i = 0; i < probs.size(); ++i) {
        if (probs[i] < 0.0)
            throw std::invalid_argument("MixedStrategy: negative probability");
        if (support[i] < l - 1e-9 || support[i] > m + 1e-9)
            throw std::invalid_argument("MixedStrategy: support point outside [L, M]");
        sum += probs[i];
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("MixedStrategy: probabilities do not sum to 1");
}

bool MixedStrategy::is_pure(double* coord) const {
    for (size_t i = 0; i < probs.size(); ++i) {
        if (probs[i] > 1.0 - 1e-12) {
            if (coord) *coord = support[i];
            return true;
        }
    }
    if (support.size() == 1) {
        if (coord) *coord = support[0];
        return true;
    }
    return false;
}

double static_utility(double x, double y, const ScenarioConfig& cfg) {
    if (cfg.effectively_noiseless()) return normalized_value(x, y, cfg.alpha);
    return spectral_efficiency_mean({x, y}, cfg);
}

StaticEquilibrium nash_noiseless(double l, double m, double alpha) {
    if (!(l > 0.0) || !(m > l))
        throw std::domain_error("nash_noiseless: requires 0 < L < M");
    if (!(alpha >= 1.0))
        throw std::domain_error("nash_noiseless: requires alpha >= 1");
    StaticEquilibrium eq;
    eq.jammer_pos = 2.0 * l * m / (l + m);
    eq.receiver_strategy.support = {l, m};
    eq.receiver_strategy.probs = {l / (l + m), m / (l + m)};
    eq.game_value = std::pow((m - l) / (m + l), alpha);
    return eq;
}

std::vector<double> best_response_receiver(double y, const ScenarioConfig& cfg,
                                           int grid_n) {
    cfg.validate();
    if (cfg.effectively_noiseless()) {
        const double j_star = 2.0 * cfg.l * cfg.m / (cfg.l + cfg.m);
        if (std::abs(y - j_star) < kIndifferenceTol * (cfg.m - cfg.l))
            return {cfg.l, cfg.m};
        return y < j_star ? std::vector<double>{cfg.m} : std::vector<double>{cfg.l};
    }
    if (grid_n < 2) throw std::invalid_argument("best_response_receiver: grid_n >= 2");
    const auto grid = make_grid(cfg.l, cfg.m, grid_n);
    double best = -1.0;
    for (double x : grid) best = std::max(best, static_utility(x, y, cfg));
    std::vector<double> argmax;
    for (double x : grid)
        if (static_utility(x, y, cfg) >= best - 1e-9 * std::max(best, 1e-300))
            argmax.push_back(x);
    return argmax;
}

double best_response_jammer(const MixedStrategy& receiver, const ScenarioConfig& cfg,
                            int grid_n) {
    cfg.validate();
    receiver.validate(cfg.l, cfg.m);
    double pure_coord;
    if (receiver.is_pure(&pure_coord)) return pure_coord;
    if (grid_n < 2) throw std::invalid_argument("best_response_jammer: grid_n >= 2");
    const auto grid = make_grid(cfg.l, cfg.m, grid_n);
    double best_y = grid.front();
    double best_e = std::numeric_limits<double>::infinity();
    for (double y : grid) {
        double e = 0.0;
        for (size_t i = 0; i < receiver.support.size(); ++i)
            e += receiver.probs[i] * static_utility(receiver.support[i], y, cfg);
        if (e < best_e) {
            best_e = e;
            best_y = y;
        }
    }
    return best_y;
}

double indifference_point(const ScenarioConfig& cfg, double upper) {
    cfg.validate();
    if (!(upper > cfg.l) || upper > cfg.m + 1e-9)
        throw std::domain_error("indifference_point: requires L < upper <= M");
    // u_R(L, y) - u_R(upper, y) is increasing through zero on (L, upper):
    // it is negative near y = L and positive near y = upper (Appendix B
    // monotonicity), so bisection cannot fail on valid inputs.
    const double eps = 1e-9 * (cfg.m - cfg.l);
    double lo = cfg.l + eps, hi = upper - eps;
    auto f = [&](double y) {
        return static_utility(cfg.l, y, cfg) - static_utility(upper, y, cfg);
    };
    double flo = f(lo), fhi = f(hi);
    if (!(flo < 0.0 && fhi > 0.0))
        throw std::runtime_error("indifference_point: bracketing failed");
    const double tol = 1e-10 * (cfg.m - cfg.l);
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

StaticEquilibrium nash_with_noise(const ScenarioConfig& cfg, int grid_n, int max_iters) {
    cfg.validate();
    if (cfg.effectively_noiseless())
        throw std::domain_error("nash_with_noise: requires a noisy scenario (nu0 > 0)");
    if (grid_n < 2) throw std::invalid_argument("nash_with_noise: grid_n >= 2");

    const auto grid = make_grid(cfg.l, cfg.m, grid_n);
    const double cell = (cfg.m - cfg.l) / (grid_n - 1);

    // The receiver's upper support point: the argmax on the far side of the
    // jammer. The near-side payoff peaks at L itself, which is already the
    // other support point, so restricting to x > j keeps the {L, W} split
    // well defined at every iterate.
    auto argmax_far_side = [&](double j) {
        double best_x = cfg.m, best_u = -1.0;
        for (int i = 1; i < grid_n; ++i) {
            if (grid[i] <= j) continue;
            const double u = static_utility(grid[i], j, cfg);
            if (u > best_u) {
                best_u = u;
                best_x = grid[i];
            }
        }
        return best_x;
    };

    double j = 2.0 * cfg.l * cfg.m / (cfg.l + cfg.m);  // noiseless j* as the seed
    double w = cfg.m;
    bool converged = false;
    for (int it = 0; it < max_iters; ++it) {
        w = argmax_far_side(j);
        const double j_next = indifference_point(cfg, w);
        const bool settled = std::abs(j_next - j) < cell;
        j = j_next;
        if (settled) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw std::runtime_error("nash_with_noise: no fixed point within iteration cap");
    w = argmax_far_side(j);

    // Mixing probability: make J locally indifferent at j, i.e. zero the
    // derivative of p*u_R(L, y) + (1-p)*u_R(W, y) at y = j.
    const double h = 1e-5 * (cfg.m - cfg.l);
    auto dudy = [&](double x) {
        return (static_utility(x, j + h, cfg) - static_utility(x, j - h, cfg)) / (2.0 * h);
    };
    const double d_l = dudy(cfg.l);   // > 0: moving up hurts more at L
    const double d_w = dudy(w);       // < 0
    double p = 0.5;
    if (d_l - d_w > 0.0) p = -d_w / (d_l - d_w);
    p = std::clamp(p, 0.0, 1.0);

    StaticEquilibrium eq;
    eq.jammer_pos = j;
    eq.receiver_strategy.support = {cfg.l, w};
    eq.receiver_strategy.probs = {p, 1.0 - p};
    eq.game_value = static_utility(cfg.l, j, cfg);
    return eq;
}

StackelbergOutcome stackelberg(Player leader, const ScenarioConfig& cfg,
                               bool allow_mixed_leader) {
    cfg.validate();
    StackelbergOutcome out;
    const StaticEquilibrium ne = nash_noiseless(cfg.l, cfg.m, cfg.alpha);
    if (leader == Player::jammer || allow_mixed_leader) {
        out.equilibrium = ne;
        out.value = ne.game_value;
        return out;
    }
    // Pure-only leader R: wherever R commits, J sits on top of it.
    out.equilibrium.jammer_pos = cfg.l;
    out.equilibrium.receiver_strategy.support = {cfg.l};
    out.equilibrium.receiver_strategy.probs = {1.0};
    out.equilibrium.game_value = 0.0;
    out.value = 0.0;
    return out;
}

}  // namespace jamgame
