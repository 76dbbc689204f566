#include "jamgame/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace jamgame {

PayoffMatrix build_static_payoff_matrix(double l, double m, double alpha, int n) {
    if (n < 2) throw std::invalid_argument("build_static_payoff_matrix: n >= 2");
    PayoffMatrix pm;
    pm.rows = pm.cols = n;
    pm.entries.resize(static_cast<size_t>(n) * n);
    pm.row_coords.resize(n);
    pm.col_coords.resize(n);
    for (int i = 0; i < n; ++i) {
        const double coord = i == n - 1 ? m : l + (m - l) * i / (n - 1);
        pm.row_coords[i] = coord;
        pm.col_coords[i] = coord;
    }
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            pm.at(r, c) = normalized_value(pm.row_coords[r], pm.col_coords[c], alpha);
    return pm;
}

void FictitiousPlayState::reset(int rows, int cols) {
    row_payoff_.assign(rows, 0.0);
    col_payoff_.assign(cols, 0.0);
    row_counts_.assign(rows, 0);
    col_counts_.assign(cols, 0);
    total_ = 0;
}

void FictitiousPlayState::run(const PayoffMatrix& m, long iters) {
    const int nr = m.rows, nc = m.cols;
    for (long it = 0; it < iters; ++it) {
        // Best responses to the opponent's empirical history (ties -> lowest
        // index, for determinism). On the very first round both sides face
        // an empty history and the zero vector picks index 0.
        int br = 0, bc = 0;
        for (int i = 1; i < nr; ++i)
            if (row_payoff_[i] > row_payoff_[br]) br = i;
        for (int j = 1; j < nc; ++j)
            if (col_payoff_[j] < col_payoff_[bc]) bc = j;
        ++row_counts_[br];
        ++col_counts_[bc];
        ++total_;
        for (int i = 0; i < nr; ++i) row_payoff_[i] += m.at(i, bc);
        for (int j = 0; j < nc; ++j) col_payoff_[j] += m.at(br, j);
    }
}

void FictitiousPlayState::bounds(const PayoffMatrix& m, double* lower, double* upper) const {
    if (total_ == 0) throw std::logic_error("FictitiousPlayState: no iterations yet");
    const auto p = row_probs();
    const auto q = col_probs();
    // Row mixture guarantees at least min_j p^T M e_j; col mixture caps the
    // row player at max_i e_i^T M q.
    double lo = std::numeric_limits<double>::infinity();
    for (int j = 0; j < m.cols; ++j) {
        double v = 0.0;
        for (int i = 0; i < m.rows; ++i) v += p[i] * m.at(i, j);
        lo = std::min(lo, v);
    }
    double hi = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < m.rows; ++i) {
        double v = 0.0;
        for (int j = 0; j < m.cols; ++j) v += m.at(i, j) * q[j];
        hi = std::max(hi, v);
    }
    *lower = lo;
    *upper = hi;
}

std::vector<double> FictitiousPlayState::row_probs() const {
    std::vector<double> p(row_counts_.size());
    for (size_t i = 0; i < p.size(); ++i)
        p[i] = static_cast<double>(row_counts_[i]) / static_cast<double>(total_);
    return p;
}

std::vector<double> FictitiousPlayState::col_probs() const {
    std::vector<double> q(col_counts_.size());
    for (size_t j = 0; j < q.size(); ++j)
        q[j] = static_cast<double>(col_counts_[j]) / static_cast<double>(total_);
    return q;
}

namespace {

MixedStrategy to_strategy(const std::vector<double>& probs,
                          const std::vector<double>& coords) {
    MixedStrategy s;
    for (size_t i = 0; i < probs.size(); ++i) {
        if (probs[i] == 0.0) continue;
        s.support.push_back(coords.empty() ? static_cast<double>(i) : coords[i]);
        s.probs.push_back(probs[i]);
    }
    return s;
}

}  // namespace

FictitiousPlayResult fictitious_play(const PayoffMatrix& m, long iters) {
    if (iters < 1) throw std::invalid_argument("fictitious_play: iters >= 1");
    if (m.rows < 1 || m.cols < 1 ||
        m.entries.size() != static_cast<size_t>(m.rows) * m.cols)
        throw std::invalid_argument("fictitious_play: malformed matrix");

    FictitiousPlayState fp;
    fp.reset(m.rows, m.cols);
    double best_lower = -std::numeric_limits<double>::infinity();
    double best_upper = std::numeric_limits<double>::infinity();
    // Track the running extremes of the per-iteration bounds in chunks; the
    // per-iteration bounds are free byproducts of the cumulative payoffs.
    const long chunk = std::max<long>(1, iters / 256);
    long done = 0;
    while (done < iters) {
        const long todo = std::min(chunk, iters - done);
        fp.run(m, todo);
        done += todo;
        double lo, hi;
        fp.bounds(m, &lo, &hi);
        best_lower = std::max(best_lower, lo);
        best_upper = std::min(best_upper, hi);
    }

    FictitiousPlayResult out;
    out.lower = best_lower;
    out.upper = best_upper;
    out.value = 0.5 * (best_lower + best_upper);
    out.row_strategy = to_strategy(fp.row_probs(), m.row_coords);
    out.col_strategy = to_strategy(fp.col_probs(), m.col_coords);
    return out;
}

double AlternatingVIResult::at(int x_idx, int y_idx, Player turn) const {
    const int n = grid.n_positions;
    return values[((static_cast<size_t>(x_idx) * n) + y_idx) * 2 +
                  (turn == Player::receiver ? 0 : 1)];
}

AlternatingVIResult alternating_minimax_vi(const GridSpec& grid, const ScenarioConfig& cfg,
                                           double discount, double tol, int max_sweeps) {
    grid.validate();
    if (!(discount >= 0.0) || discount >= 1.0)
        throw std::domain_error("alternating_minimax_vi: discount in [0, 1)");
    const int n = grid.n_positions;
    const size_t n_states = static_cast<size_t>(n) * n * 2;

    // Immediate receiver payoff after the move, by post positions.
    std::vector<double> r(static_cast<size_t>(n) * n);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            r[static_cast<size_t>(x) * n + y] =
                normalized_value(grid.position(x), grid.position(y), cfg.alpha);

    AlternatingVIResult out;
    out.grid = grid;
    out.discount = discount;
    out.values.assign(n_states, 0.0);
    std::vector<double> next(n_states, 0.0);

    auto idx = [n](int x, int y, int turn) {
        return ((static_cast<size_t>(x) * n) + y) * 2 + turn;
    };

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double residual = 0.0;
        for (int x = 0; x < n; ++x) {
            for (int y = 0; y < n; ++y) {
                // Receiver to move: maximize over its own displacement.
                {
                    double best = -std::numeric_limits<double>::infinity();
                    for (const Action a : legal_actions(x, grid)) {
                        const int x2 = x + a.delta;
                        const double v = r[static_cast<size_t>(x2) * n + y] +
                                         discount * out.values[idx(x2, y, 1)];
                        best = std::max(best, v);
                    }
                    next[idx(x, y, 0)] = best;
                }
                // Jammer to move: minimize.
                {
                    double best = std::numeric_limits<double>::infinity();
                    for (const Action a : legal_actions(y, grid)) {
                        const int y2 = y + a.delta;
                        const double v = r[static_cast<size_t>(x) * n + y2] +
                                         discount * out.values[idx(x, y2, 0)];
                        best = std::min(best, v);
                    }
                    next[idx(x, y, 1)] = best;
                }
            }
        }
        for (size_t i = 0; i < n_states; ++i)
            residual = std::max(residual, std::abs(next[i] - out.values[i]));
        out.values.swap(next);
        out.residuals.push_back(residual);
        out.sweeps = sweep + 1;
        if (residual < tol) return out;
    }
    throw std::runtime_error("alternating_minimax_vi: tolerance not reached");
}

double alternating_vi_average_reward(const AlternatingVIResult& vi, const ScenarioConfig& cfg,
                                     long steps, std::mt19937_64& rng, int n_starts) {
    const GridSpec& grid = vi.grid;
    const int n = grid.n_positions;
    std::vector<double> r(static_cast<size_t>(n) * n);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            r[static_cast<size_t>(x) * n + y] =
                normalized_value(grid.position(x), grid.position(y), cfg.alpha);

    auto greedy = [&](int x, int y, Player turn) -> int {
        const bool receiver = turn == Player::receiver;
        const int own = receiver ? x : y;
        int best_pos = own;
        double best = receiver ? -std::numeric_limits<double>::infinity()
                               : std::numeric_limits<double>::infinity();
        for (const Action a : legal_actions(own, grid)) {
            const int p2 = own + a.delta;
            const int x2 = receiver ? p2 : x;
            const int y2 = receiver ? y : p2;
            const double v = r[static_cast<size_t>(x2) * n + y2] +
                             vi.discount * vi.at(x2, y2, receiver ? Player::jammer
                                                                  : Player::receiver);
            if (receiver ? v > best : v < best) {
                best = v;
                best_pos = p2;
            }
        }
        return best_pos;
    };

    std::uniform_int_distribution<int> pos(0, n - 1);
    std::uniform_int_distribution<int> coin(0, 1);
    const long steps_per_start = std::max<long>(1, steps / n_starts);
    double total = 0.0;
    long count = 0;
    for (int start = 0; start < n_starts; ++start) {
        int x = pos(rng), y = pos(rng);
        Player turn = coin(rng) == 0 ? Player::receiver : Player::jammer;
        for (long t = 0; t < steps_per_start; ++t) {
            if (turn == Player::receiver) {
                x = greedy(x, y, turn);
                turn = Player::jammer;
            } else {
                y = greedy(x, y, turn);
                turn = Player::receiver;
            }
            total += r[static_cast<size_t>(x) * n + y];
            ++count;
        }
    }
    return total / static_cast<double>(count);
}

double ShapleyVIResult::at(int x_idx, int y_idx) const {
    return values[static_cast<size_t>(x_idx) * grid.n_positions + y_idx];
}

ShapleyVIResult shapley_vi(const GridSpec& grid, const ScenarioConfig& cfg, double discount,
                           double tol, long fp_iters, int max_sweeps) {
    grid.validate();
    if (!(discount >= 0.0) || discount >= 1.0)
        throw std::domain_error("shapley_vi: discount in [0, 1)");
    if (fp_iters < 1) throw std::invalid_argument("shapley_vi: fp_iters >= 1");
    const int n = grid.n_positions;
    const size_t n_states = static_cast<size_t>(n) * n;

    std::vector<double> r(n_states);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            r[static_cast<size_t>(x) * n + y] =
                normalized_value(grid.position(x), grid.position(y), cfg.alpha);

    std::vector<std::vector<Action>> legal(n);
    for (int p = 0; p < n; ++p) legal[p] = legal_actions(p, grid);

    ShapleyVIResult out;
    out.grid = grid;
    out.discount = discount;
    out.values.assign(n_states, 0.0);
    std::vector<double> next(n_states, 0.0);

    std::vector<FictitiousPlayState> fp(n_states);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            fp[static_cast<size_t>(x) * n + y].reset(static_cast<int>(legal[x].size()),
                                                     static_cast<int>(legal[y].size()));

    PayoffMatrix m;  // reused per-state stage game
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double residual = 0.0;
        double max_gap = 0.0;
        for (int x = 0; x < n; ++x) {
            for (int y = 0; y < n; ++y) {
                const size_t s = static_cast<size_t>(x) * n + y;
                m.rows = static_cast<int>(legal[x].size());
                m.cols = static_cast<int>(legal[y].size());
                m.entries.assign(static_cast<size_t>(m.rows) * m.cols, 0.0);
                for (int ar = 0; ar < m.rows; ++ar) {
                    const int x2 = x + legal[x][ar].delta;
                    for (int aj = 0; aj < m.cols; ++aj) {
                        const int y2 = y + legal[y][aj].delta;
                        const size_t s2 = static_cast<size_t>(x2) * n + y2;
                        m.at(ar, aj) = r[s2] + discount * out.values[s2];
                    }
                }
                fp[s].run(m, fp_iters);
                double lo, hi;
                fp[s].bounds(m, &lo, &hi);
                next[s] = 0.5 * (lo + hi);
                max_gap = std::max(max_gap, hi - lo);
            }
        }
        for (size_t s = 0; s < n_states; ++s)
            residual = std::max(residual, std::abs(next[s] - out.values[s]));
        out.values.swap(next);
        out.residuals.push_back(residual);
        out.fp_gaps.push_back(max_gap);
        out.max_fp_gap = max_gap;
        out.sweeps = sweep + 1;
        if (residual < tol) {
            out.converged = true;
            break;
        }
    }

    out.row_policies.resize(n_states);
    out.col_policies.resize(n_states);
    for (size_t s = 0; s < n_states; ++s) {
        out.row_policies[s] = fp[s].row_probs();
        out.col_policies[s] = fp[s].col_probs();
    }
    return out;
}

double shapley_average_reward(const ShapleyVIResult& vi, const ScenarioConfig& cfg,
                              long steps, std::mt19937_64& rng, int n_starts) {
    const GridSpec& grid = vi.grid;
    const int n = grid.n_positions;
    std::vector<double> r(static_cast<size_t>(n) * n);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            r[static_cast<size_t>(x) * n + y] =
                normalized_value(grid.position(x), grid.position(y), cfg.alpha);

    std::vector<std::vector<Action>> legal(n);
    for (int p = 0; p < n; ++p) legal[p] = legal_actions(p, grid);

    auto sample = [&](const std::vector<double>& probs) {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        double mass = u(rng);
        for (size_t i = 0; i < probs.size(); ++i) {
            mass -= probs[i];
            if (mass <= 0.0) return i;
        }
        return probs.size() - 1;
    };

    std::uniform_int_distribution<int> pos(0, n - 1);
    const long steps_per_start = std::max<long>(1, steps / n_starts);
    double total = 0.0;
    long count = 0;
    for (int start = 0; start < n_starts; ++start) {
        int x = pos(rng), y = pos(rng);
        for (long t = 0; t < steps_per_start; ++t) {
            const size_t s = static_cast<size_t>(x) * n + y;
            const int ar = static_cast<int>(sample(vi.row_policies[s]));
            const int aj = static_cast<int>(sample(vi.col_policies[s]));
            x += legal[x][ar].delta;
            y += legal[y][aj].delta;
            total += r[static_cast<size_t>(x) * n + y];
            ++count;
        }
    }
    return total / static_cast<double>(count);
}

}  // namespace jamgame
