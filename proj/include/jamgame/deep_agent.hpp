#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "jamgame/agents.hpp"
#include "jamgame/dynamic_env.hpp"

namespace jamgame {

struct DeepConfig {
    std::vector<int> hidden = {64, 64};
    int batch = 32;
    int replay_capacity = 10'000;
    long sync_every = 1'000;

    void validate() const;
};

// One-hot per position index: g1/g2 observations concatenate the two
// one-hots (length 2N), g3 uses the own position only (length N).
std::vector<double> encode_state(const Observation& obs, const GridSpec& grid);

struct Linear {
    int in = 0, out = 0;
    std::vector<double> w;  // out x in, row-major
    std::vector<double> b;

    Linear() = default;
    Linear(int in_dim, int out_dim) : in(in_dim), out(out_dim),
        w(static_cast<size_t>(in_dim) * out_dim, 0.0), b(out_dim, 0.0) {}
};

// Q-function approximator with a shared rectifier trunk and separate value /
// advantage heads, aggregated as Q(a) = V + A(a) - mean_a A(a). Subtracting
// the mean pins the otherwise unidentifiable per-state split between V and A
// without moving the argmax.
class DuelingNet {
  public:
    DuelingNet() = default;
    DuelingNet(int input_dim, const std::vector<int>& hidden, int n_actions,
               std::mt19937_64& rng);

    int input_dim() const { return input_dim_; }
    int n_actions() const { return n_actions_; }

    std::vector<double> forward(std::span<const double> input) const;
    // Splits the forward pass: raw V, raw advantage vector, aggregated Q.
    void forward_detailed(std::span<const double> input, std::vector<double>* q,
                          double* v, std::vector<double>* adv) const;

    std::vector<Linear>& trunk() { return trunk_; }
    const std::vector<Linear>& trunk() const { return trunk_; }
    Linear& value_head() { return value_head_; }
    const Linear& value_head() const { return value_head_; }
    Linear& advantage_head() { return adv_head_; }
    const Linear& advantage_head() const { return adv_head_; }

    // Flat views over every parameter, in a fixed order; used by the SGD
    // step, the finite-difference checks and serialization.
    std::vector<double*> parameters();
    std::vector<const double*> parameters() const;

    void save(const std::string& path) const;
    static DuelingNet load(const std::string& path);

  private:
    friend struct NetGradients;
    int input_dim_ = 0;
    int n_actions_ = 0;
    std::vector<Linear> trunk_;
    Linear value_head_;
    Linear adv_head_;
};

// Same shapes as the net, holding d(loss)/d(parameter).
struct NetGradients {
    std::vector<Linear> trunk;
    Linear value_head;
    Linear adv_head;

    static NetGradients zeros_like(const DuelingNet& net);
    std::vector<double*> parameters();
};

struct Transition {
    std::vector<double> state;
    int action = 0;  // column index in the Q output
    double reward = 0.0;
    std::vector<double> next_state;
    std::vector<uint8_t> next_legal;  // mask over action columns of next_state
};

class ReplayBuffer {
  public:
    explicit ReplayBuffer(size_t capacity);

    void push(Transition t);
    size_t size() const { return size_; }
    size_t capacity() const { return buffer_.size(); }
    // Uniform with replacement; k must not exceed the current size.
    std::vector<Transition> sample(size_t k, std::mt19937_64& rng) const;

  private:
    std::vector<Transition> buffer_;
    size_t cursor_ = 0;
    size_t size_ = 0;
};

// Mean squared TD error of the batch against frozen targets
// r + gamma max_{legal} Q_target(s'). Pure: no parameter is touched.
double td_loss(const DuelingNet& net, const DuelingNet& target_net,
               const std::vector<Transition>& batch, const LearningConfig& cfg);

// Loss plus analytic gradients (returned through *grads).
double td_gradients(const DuelingNet& net, const DuelingNet& target_net,
                    const std::vector<Transition>& batch, const LearningConfig& cfg,
                    NetGradients* grads);

// One plain SGD step on `net` at cfg.learning_rate; returns the batch loss.
double td_train_step(DuelingNet& net, const DuelingNet& target_net,
                     const std::vector<Transition>& batch, const LearningConfig& cfg);

// Hard copy of all weights into the target.
void sync_target(const DuelingNet& net, DuelingNet& target_net);

}  // namespace jamgame
