#include "jamgame/deep_agent.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace jamgame {

void DeepConfig::validate() const {
    if (hidden.empty()) throw std::domain_error("DeepConfig: at least one hidden layer");
    for (int h : hidden)
        if (h < 1) throw std::domain_error("DeepConfig: hidden sizes >= 1");
    if (batch < 1) throw std::domain_error("DeepConfig: batch >= 1");
    if (replay_capacity < batch)
        throw std::domain_error("DeepConfig: replay_capacity >= batch");
    if (sync_every < 1) throw std::domain_error("DeepConfig: sync_every >= 1");
}

std::vector<double> encode_state(const Observation& obs, const GridSpec& grid) {
    const int n = grid.n_positions;
    if (obs.own < 0 || obs.own >= n ||
        (obs.opponent && (*obs.opponent < 0 || *obs.opponent >= n)))
        throw std::invalid_argument("encode_state: observation index out of range");
    std::vector<double> v(obs.opponent ? 2 * n : n, 0.0);
    v[obs.own] = 1.0;
    if (obs.opponent) v[n + *obs.opponent] = 1.0;
    return v;
}

namespace {

void init_layer(Linear& layer, std::mt19937_64& rng) {
    const double bound = std::sqrt(6.0 / (layer.in + layer.out));
    std::uniform_real_distribution<double> u(-bound, bound);
    for (double& w : layer.w) w = u(rng);
    std::fill(layer.b.begin(), layer.b.end(), 0.0);
}

void affine(const Linear& layer, std::span<const double> in, std::vector<double>& out) {
    out.assign(layer.out, 0.0);
    for (int o = 0; o < layer.out; ++o) {
        double acc = layer.b[o];
        const double* row = layer.w.data() + static_cast<size_t>(o) * layer.in;
        for (int i = 0; i < layer.in; ++i) acc += row[i] * in[i];
        out[o] = acc;
    }
}

void collect(Linear& l, std::vector<double*>& out) {
    for (double& w : l.w) out.push_back(&w);
    for (double& b : l.b) out.push_back(&b);
}

void collect_const(const Linear& l, std::vector<const double*>& out) {
    for (const double& w : l.w) out.push_back(&w);
    for (const double& b : l.b) out.push_back(&b);
}

// Activations kept for backpropagation.
struct Trace {
    std::vector<std::vector<double>> h;  // h[0] = input copy, then post-ReLU
    double value = 0.0;
    std::vector<double> adv;
    std::vector<double> q;
};

void run_forward(const DuelingNet& net, std::span<const double> input, Trace& tr) {
    if (static_cast<int>(input.size()) != net.input_dim())
        throw std::invalid_argument("DuelingNet: input dimension mismatch");
    const auto& trunk = net.trunk();
    tr.h.resize(trunk.size() + 1);
    tr.h[0].assign(input.begin(), input.end());
    std::vector<double> z;
    for (size_t li = 0; li < trunk.size(); ++li) {
        affine(trunk[li], tr.h[li], z);
        for (double& v : z) v = std::max(v, 0.0);
        tr.h[li + 1] = z;
    }
    std::vector<double> vout;
    affine(net.value_head(), tr.h.back(), vout);
    tr.value = vout[0];
    affine(net.advantage_head(), tr.h.back(), tr.adv);
    double mean = 0.0;
    for (double a : tr.adv) mean += a;
    mean /= static_cast<double>(tr.adv.size());
    tr.q.resize(tr.adv.size());
    for (size_t a = 0; a < tr.adv.size(); ++a) tr.q[a] = tr.value + tr.adv[a] - mean;
}

// Accumulates gradients for one sample given dLoss/dQ[action] = g.
void run_backward(const DuelingNet& net, const Trace& tr, int action, double g,
                  NetGradients& grads) {
    const int na = net.n_actions();
    // Q[a*] = V + A[a*] - mean(A): dQ/dV = 1, dQ/dA[k] = [k == a*] - 1/na.
    const double gv = g;
    std::vector<double> ga(na, -g / na);
    ga[action] += g;

    const auto& hid = tr.h.back();
    std::vector<double> dh(hid.size(), 0.0);

    {  // value head
        const Linear& l = net.value_head();
        Linear& gl = grads.value_head;
        for (int i = 0; i < l.in; ++i) {
            gl.w[i] += gv * hid[i];
            dh[i] += gv * l.w[i];
        }
        gl.b[0] += gv;
    }
    {  // advantage head
        const Linear& l = net.advantage_head();
        Linear& gl = grads.adv_head;
        for (int o = 0; o < l.out; ++o) {
            const double go = ga[o];
            const double* row = l.w.data() + static_cast<size_t>(o) * l.in;
            double* grow = gl.w.data() + static_cast<size_t>(o) * l.in;
            for (int i = 0; i < l.in; ++i) {
                grow[i] += go * hid[i];
                dh[i] += go * row[i];
            }
            gl.b[o] += go;
        }
    }
    // trunk, back to front; ReLU gate: output was max(z, 0), so h > 0 <=> pass
    for (int li = static_cast<int>(net.trunk().size()) - 1; li >= 0; --li) {
        const Linear& l = net.trunk()[li];
        Linear& gl = grads.trunk[li];
        const auto& in = tr.h[li];
        const auto& out = tr.h[li + 1];
        std::vector<double> din(in.size(), 0.0);
        for (int o = 0; o < l.out; ++o) {
            if (out[o] <= 0.0) continue;
            const double go = dh[o];
            const double* row = l.w.data() + static_cast<size_t>(o) * l.in;
            double* grow = gl.w.data() + static_cast<size_t>(o) * l.in;
            for (int i = 0; i < l.in; ++i) {
                grow[i] += go * in[i];
                din[i] += go * row[i];
            }
            gl.b[o] += go;
        }
        dh = std::move(din);
    }
}

double target_value(const DuelingNet& target_net, const Transition& t,
                    const LearningConfig& cfg) {
    const auto q = target_net.forward(t.next_state);
    if (t.next_legal.size() != q.size())
        throw std::invalid_argument("td target: legal mask size mismatch");
    double best = -std::numeric_limits<double>::infinity();
    bool any = false;
    for (size_t a = 0; a < q.size(); ++a) {
        if (!t.next_legal[a]) continue;
        best = std::max(best, q[a]);
        any = true;
    }
    if (!any) throw std::invalid_argument("td target: no legal next action");
    return t.reward + cfg.discount * best;
}

}  // namespace

DuelingNet::DuelingNet(int input_dim, const std::vector<int>& hidden, int n_actions,
                       std::mt19937_64& rng)
    : input_dim_(input_dim), n_actions_(n_actions) {
    if (input_dim < 1 || n_actions < 1 || hidden.empty())
        throw std::invalid_argument("DuelingNet: bad dimensions");
    int prev = input_dim;
    for (int h : hidden) {
        if (h < 1) throw std::invalid_argument("DuelingNet: bad hidden size");
        trunk_.emplace_back(prev, h);
        init_layer(trunk_.back(), rng);
        prev = h;
    }
    value_head_ = Linear(prev, 1);
    init_layer(value_head_, rng);
    adv_head_ = Linear(prev, n_actions);
    init_layer(adv_head_, rng);
}

std::vector<double> DuelingNet::forward(std::span<const double> input) const {
    Trace tr;
    run_forward(*this, input, tr);
    return tr.q;
}

void DuelingNet::forward_detailed(std::span<const double> input, std::vector<double>* q,
                                  double* v, std::vector<double>* adv) const {
    Trace tr;
    run_forward(*this, input, tr);
    if (q) *q = tr.q;
    if (v) *v = tr.value;
    if (adv) *adv = tr.adv;
}

std::vector<double*> DuelingNet::parameters() {
    std::vector<double*> out;
    for (auto& l : trunk_) collect(l, out);
    collect(value_head_, out);
    collect(adv_head_, out);
    return out;
}

std::vector<const double*> DuelingNet::parameters() const {
    std::vector<const double*> out;
    for (const auto& l : trunk_) collect_const(l, out);
    collect_const(value_head_, out);
    collect_const(adv_head_, out);
    return out;
}

NetGradients NetGradients::zeros_like(const DuelingNet& net) {
    NetGradients g;
    for (const auto& l : net.trunk()) g.trunk.emplace_back(l.in, l.out);
    g.value_head = Linear(net.value_head().in, net.value_head().out);
    g.adv_head = Linear(net.advantage_head().in, net.advantage_head().out);
    return g;
}

std::vector<double*> NetGradients::parameters() {
    std::vector<double*> out;
    for (auto& l : trunk) collect(l, out);
    collect(value_head, out);
    collect(adv_head, out);
    return out;
}

void DuelingNet::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("DuelingNet: cannot write " + path);
    out << "jamgame-net v1\n";
    out << input_dim_ << " " << n_actions_ << " " << trunk_.size() << "\n";
    out.precision(17);
    auto dump = [&](const Linear& l, const char* name) {
        out << name << " " << l.in << " " << l.out << "\n";
        for (double w : l.w) out << w << "\n";
        for (double b : l.b) out << b << "\n";
    };
    for (size_t i = 0; i < trunk_.size(); ++i) dump(trunk_[i], "trunk");
    dump(value_head_, "value");
    dump(adv_head_, "advantage");
    if (!out) throw std::runtime_error("DuelingNet: write failed for " + path);
}

DuelingNet DuelingNet::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("DuelingNet: cannot open " + path);
    std::string header;
    std::getline(in, header);
    if (header != "jamgame-net v1")
        throw std::runtime_error("DuelingNet: unsupported format in " + path);
    DuelingNet net;
    size_t n_trunk = 0;
    if (!(in >> net.input_dim_ >> net.n_actions_ >> n_trunk))
        throw std::runtime_error("DuelingNet: bad shape line in " + path);
    auto read_layer = [&](const char* expect) {
        std::string name;
        int li, lo;
        if (!(in >> name >> li >> lo) || name != expect)
            throw std::runtime_error("DuelingNet: bad layer header in " + path);
        Linear l(li, lo);
        for (double& w : l.w)
            if (!(in >> w)) throw std::runtime_error("DuelingNet: truncated " + path);
        for (double& b : l.b)
            if (!(in >> b)) throw std::runtime_error("DuelingNet: truncated " + path);
        return l;
    };
    for (size_t i = 0; i < n_trunk; ++i) net.trunk_.push_back(read_layer("trunk"));
    net.value_head_ = read_layer("value");
    net.adv_head_ = read_layer("advantage");
    return net;
}

ReplayBuffer::ReplayBuffer(size_t capacity) : buffer_(capacity) {
    if (capacity == 0) throw std::invalid_argument("ReplayBuffer: capacity >= 1");
}

void ReplayBuffer::push(Transition t) {
    buffer_[cursor_] = std::move(t);
    cursor_ = (cursor_ + 1) % buffer_.size();
    size_ = std::min(size_ + 1, buffer_.size());
}

std::vector<Transition> ReplayBuffer::sample(size_t k, std::mt19937_64& rng) const {
    if (size_ == 0) throw std::logic_error("ReplayBuffer: sample from empty buffer");
    if (k > size_) throw std::invalid_argument("ReplayBuffer: k exceeds current size");
    std::uniform_int_distribution<size_t> pick(0, size_ - 1);
    std::vector<Transition> batch;
    batch.reserve(k);
    for (size_t i = 0; i < k; ++i) batch.push_back(buffer_[pick(rng)]);
    return batch;
}

double td_loss(const DuelingNet& net, const DuelingNet& target_net,
               const std::vector<Transition>& batch, const LearningConfig& cfg) {
    if (batch.empty()) throw std::invalid_argument("td_loss: empty batch");
    double loss = 0.0;
    for (const Transition& t : batch) {
        const auto q = net.forward(t.state);
        const double err = q[t.action] - target_value(target_net, t, cfg);
        loss += err * err;
    }
    return loss / static_cast<double>(batch.size());
}

double td_gradients(const DuelingNet& net, const DuelingNet& target_net,
                    const std::vector<Transition>& batch, const LearningConfig& cfg,
                    NetGradients* grads) {
    if (batch.empty()) throw std::invalid_argument("td_gradients: empty batch");
    *grads = NetGradients::zeros_like(net);
    double loss = 0.0;
    Trace tr;
    for (const Transition& t : batch) {
        run_forward(net, t.state, tr);
        if (t.action < 0 || t.action >= static_cast<int>(tr.q.size()))
            throw std::invalid_argument("td_gradients: action index out of range");
        const double err = tr.q[t.action] - target_value(target_net, t, cfg);
        loss += err * err;
        run_backward(net, tr, t.action, 2.0 * err / static_cast<double>(batch.size()),
                     *grads);
    }
    return loss / static_cast<double>(batch.size());
}

double td_train_step(DuelingNet& net, const DuelingNet& target_net,
                     const std::vector<Transition>& batch, const LearningConfig& cfg) {
    NetGradients grads;
    const double loss = td_gradients(net, target_net, batch, cfg, &grads);
    auto params = net.parameters();
    auto gparams = grads.parameters();
    for (size_t i = 0; i < params.size(); ++i)
        *params[i] -= cfg.learning_rate * *gparams[i];
    return loss;
}

void sync_target(const DuelingNet& net, DuelingNet& target_net) {
    target_net = net;
}

}  // namespace jamgame
