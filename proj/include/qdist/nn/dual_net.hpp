#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "qdist/action_space.hpp"
#include "qdist/circuit.hpp"
#include "qdist/rng.hpp"

namespace qdist {

/// Shape hyperparameters of the dual network. The trunk widths are tied
/// to the action count G (4G then 2G); the convolution stack preserves
/// sequence length, so the flattened trunk input is channels * seq_len.
struct NetConfig {
    int actions = 0;      // G: policy width and symbol alphabet minus one
    int encoded_len = 0;  // N: slots in the integer circuit encoding
    int seq_len = 0;      // L: conv sequence length (>= encoded_len)
    int channels = 256;
    int conv_layers = 5;
    double bn_eps = 1e-5;
    double bn_momentum = 0.1;
    double leaky_slope = 0.01;
    double dropout = 0.3;

    int vocab() const { return actions + 1; }  // one-hot channels: empty + G gates
    int trunk1() const { return 4 * actions; }
    int trunk2() const { return 2 * actions; }
    int flat() const { return channels * seq_len; }

    /// The standard layout: pad the encoding up to G so the flattened
    /// width matches the reference table's channels * G.
    static NetConfig standard(int actions, int max_len, int channels = 256) {
        NetConfig cfg;
        cfg.actions = actions;
        cfg.encoded_len = max_len;
        cfg.seq_len = std::max(max_len, actions);
        cfg.channels = channels;
        return cfg;
    }

    void validate() const {
        if (actions < 1 || encoded_len < 1 || seq_len < encoded_len || channels < 1 ||
            conv_layers < 1)
            throw std::invalid_argument("invalid network configuration");
    }
};

/// Optimizer hyperparameters (adaptive moment estimation).
struct TrainConfig {
    double learning_rate = 0.001;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double adam_eps = 1e-8;
    int batch_size = 32;
};

/// One self-play supervision record: encoded circuit, MCTS visit policy,
/// and the episode's terminal reward.
struct TrainingExample {
    std::vector<int> state;    // length N, entries in [0, G]
    std::vector<double> pi;    // length G, sums to 1
    double z = 0.0;            // episode reward in {1, -1}
};

/// A named parameter tensor with its gradient and optimizer moments.
/// Non-trainable blocks (batch-norm running stats) share the container so
/// checkpointing walks a single list.
struct ParamBlock {
    std::string name;
    std::vector<int> shape;
    bool trainable = true;
    std::vector<double> w;  // values; always exactly representable in f32
    std::vector<double> g;  // gradient accumulator
    std::vector<double> m;  // first moment
    std::vector<double> v;  // second moment

    std::size_t size() const { return w.size(); }
};

namespace detail {

inline double round_f32(double x) { return static_cast<double>(static_cast<float>(x)); }

inline std::size_t shape_size(const std::vector<int>& shape) {
    std::size_t total = 1;
    for (int d : shape) total *= static_cast<std::size_t>(d);
    return total;
}

} // namespace detail

/// Encode a circuit as the length-N integer vector the network consumes:
/// slot i holds 1 + the action-space index of gate i, 0 for empty slots.
inline std::vector<int> encode_state(const Circuit& circuit, const ActionSpace& space,
                                     int max_len) {
    if (static_cast<int>(circuit.gates.size()) > max_len)
        throw std::invalid_argument("circuit longer than the encoding window");
    std::vector<int> out(static_cast<std::size_t>(max_len), 0);
    for (std::size_t i = 0; i < circuit.gates.size(); ++i) {
        const auto idx = space.index_of(circuit.gates[i]);
        if (!idx)
            throw std::invalid_argument("circuit contains a gate outside the action space");
        out[i] = 1 + *idx;
    }
    return out;
}

/// The dual policy/value network: five kernel-3 convolution blocks
/// (conv + batch-norm + leaky ReLU) over the one-hot circuit encoding,
/// a two-layer fully-connected trunk (widths 4G, 2G, each with batch-norm,
/// leaky ReLU, dropout), a log-softmax policy head of width G and a tanh
/// value head. All arithmetic is double precision, but every stored
/// parameter is rounded through f32 after initialization and after every
/// update so checkpoints (f32 blobs) round-trip bit-identically.
class DualNet {
public:
    struct Prediction {
        std::vector<double> log_policy;  // length G; exp sums to 1
        double value = 0.0;              // in [-1, 1]
    };

    DualNet(const NetConfig& cfg, std::uint64_t seed) : cfg_(cfg) {
        cfg_.validate();
        build_blocks();
        init_params(seed);
    }

    const NetConfig& config() const { return cfg_; }
    std::int64_t steps_taken() const { return step_; }
    void set_steps_taken(std::int64_t s) { step_ = s; }

    std::vector<ParamBlock>& blocks() { return blocks_; }
    const std::vector<ParamBlock>& blocks() const { return blocks_; }

    ParamBlock& block(const std::string& name) {
        for (auto& b : blocks_)
            if (b.name == name) return b;
        throw std::out_of_range("no parameter block named " + name);
    }

    /// Inference: eval-mode forward (running batch-norm statistics, no
    /// dropout) on a single encoded state. Deterministic.
    Prediction predict(const std::vector<int>& state) const {
        if (static_cast<int>(state.size()) != cfg_.encoded_len)
            throw std::invalid_argument("encoded state length does not match the network");
        Workspace ws;
        const_cast<DualNet*>(this)->forward({state}, /*training=*/false,
                                            /*update_stats=*/false, nullptr, ws);
        Prediction out;
        out.log_policy.assign(ws.logq.begin(), ws.logq.begin() + cfg_.actions);
        out.value = ws.v[0];
        return out;
    }

    /// Mean loss of a batch, (z - v)^2 - pi . log q, computed without
    /// touching any state (dropout off, batch statistics used but not
    /// stored). Pure in the parameters: the finite-difference oracle
    /// differentiates exactly this.
    double loss_only(const std::vector<TrainingExample>& batch) {
        Workspace ws;
        forward(states_of(batch), /*training=*/true, /*update_stats=*/false, nullptr, ws);
        return loss_of(batch, ws);
    }

    /// Analytic gradients of loss_only into every trainable block's g.
    double gradients(const std::vector<TrainingExample>& batch) {
        Workspace ws;
        forward(states_of(batch), /*training=*/true, /*update_stats=*/false, nullptr, ws);
        const double loss = loss_of(batch, ws);
        backward(batch, ws);
        return loss;
    }

    /// One optimizer step on the mean batch loss: train-mode forward
    /// (dropout active, running stats updated), backward, adaptive-moment
    /// update. Returns the batch loss (measured before the update).
    double train_step(const std::vector<TrainingExample>& batch, const TrainConfig& tc,
                      Rng& dropout_rng) {
        if (batch.empty()) throw std::invalid_argument("train_step needs a nonempty batch");
        Workspace ws;
        forward(states_of(batch), /*training=*/true, /*update_stats=*/true, &dropout_rng, ws);
        const double loss = loss_of(batch, ws);
        backward(batch, ws);
        adam_update(tc);
        return loss;
    }

private:
    // ---- layer bookkeeping -------------------------------------------

    struct BnLayer {
        std::string prefix;  // parameter-name prefix
        int features = 0;    // normalized feature count
    };

    NetConfig cfg_;
    std::vector<ParamBlock> blocks_;
    std::int64_t step_ = 0;

    void add_block(const std::string& name, std::vector<int> shape, bool trainable) {
        ParamBlock b;
        b.name = name;
        b.shape = std::move(shape);
        b.trainable = trainable;
        const std::size_t n = detail::shape_size(b.shape);
        b.w.assign(n, 0.0);
        b.g.assign(n, 0.0);
        if (trainable) {
            b.m.assign(n, 0.0);
            b.v.assign(n, 0.0);
        }
        blocks_.push_back(std::move(b));
    }

    void add_bn(const std::string& prefix, int features) {
        add_block(prefix + ".gamma", {features}, true);
        add_block(prefix + ".beta", {features}, true);
        add_block(prefix + ".running_mean", {features}, false);
        add_block(prefix + ".running_var", {features}, false);
    }

    void build_blocks() {
        int in_ch = cfg_.vocab();
        for (int i = 0; i < cfg_.conv_layers; ++i) {
            const std::string id = "conv" + std::to_string(i + 1);
            add_block(id + ".weight", {cfg_.channels, in_ch, 3}, true);
            add_block(id + ".bias", {cfg_.channels}, true);
            add_bn("bn" + std::to_string(i + 1), cfg_.channels);
            in_ch = cfg_.channels;
        }
        add_block("fc1.weight", {cfg_.trunk1(), cfg_.flat()}, true);
        add_block("fc1.bias", {cfg_.trunk1()}, true);
        add_bn("bnf1", cfg_.trunk1());
        add_block("fc2.weight", {cfg_.trunk2(), cfg_.trunk1()}, true);
        add_block("fc2.bias", {cfg_.trunk2()}, true);
        add_bn("bnf2", cfg_.trunk2());
        add_block("policy.weight", {cfg_.actions, cfg_.trunk2()}, true);
        add_block("policy.bias", {cfg_.actions}, true);
        add_block("value.weight", {1, cfg_.trunk2()}, true);
        add_block("value.bias", {1}, true);
    }

    void init_params(std::uint64_t seed) {
        Rng rng(Rng::derive(seed, 0x696e6974ULL));
        for (auto& b : blocks_) {
            if (!b.trainable) {
                // running stats start at mean 0, variance 1
                const bool is_var = b.name.size() > 3 && b.name.ends_with("running_var");
                std::fill(b.w.begin(), b.w.end(), is_var ? 1.0 : 0.0);
                continue;
            }
            if (b.name.ends_with(".gamma")) {
                std::fill(b.w.begin(), b.w.end(), 1.0);
                continue;
            }
            if (b.name.ends_with(".beta")) continue;  // zeros
            // fan-in: product of all dimensions except the leading output one
            std::size_t fan_in = 1;
            for (std::size_t d = 1; d < b.shape.size(); ++d)
                fan_in *= static_cast<std::size_t>(b.shape[d]);
            if (b.name.ends_with(".bias")) {
                // biases pair with the preceding weight block's fan-in
                const auto& weights = blocks_[&b - blocks_.data() - 1];
                fan_in = 1;
                for (std::size_t d = 1; d < weights.shape.size(); ++d)
                    fan_in *= static_cast<std::size_t>(weights.shape[d]);
                const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
                for (auto& x : b.w) x = detail::round_f32((2.0 * rng.uniform() - 1.0) * bound);
                continue;
            }
            const double bound = std::sqrt(6.0 / static_cast<double>(fan_in));
            for (auto& x : b.w) x = detail::round_f32((2.0 * rng.uniform() - 1.0) * bound);
        }
    }

    // ---- forward/backward workspace ----------------------------------

    struct Workspace {
        int batch = 0;
        std::vector<double> x0;                 // one-hot input [B][V][L]
        std::vector<std::vector<double>> conv_z;     // per conv layer, pre-BN [B][C][L]
        std::vector<std::vector<double>> conv_xhat;  // normalized
        std::vector<std::vector<double>> conv_a;     // post-activation
        std::vector<std::vector<double>> conv_mu, conv_var;  // batch stats [C]
        // trunk
        std::vector<double> fc1_z, fc1_xhat, fc1_a, fc1_mask, fc1_d;
        std::vector<double> fc1_mu, fc1_var;
        std::vector<double> fc2_z, fc2_xhat, fc2_a, fc2_mask, fc2_d;
        std::vector<double> fc2_mu, fc2_var;
        std::vector<double> logits, logq;  // [B][G]
        std::vector<double> vpre, v;       // [B]
    };

    static std::vector<std::vector<int>> states_of(const std::vector<TrainingExample>& batch) {
        std::vector<std::vector<int>> out;
        out.reserve(batch.size());
        for (const auto& e : batch) out.push_back(e.state);
        return out;
    }

    // ---- primitive layers --------------------------------------------

    void conv_forward(const std::vector<double>& in, int in_ch, const ParamBlock& weight,
                      const ParamBlock& bias, int batch, std::vector<double>& out) const {
        const int L = cfg_.seq_len, C = cfg_.channels;
        out.assign(static_cast<std::size_t>(batch) * C * L, 0.0);
        for (int b = 0; b < batch; ++b)
            for (int co = 0; co < C; ++co) {
                const double* wrow = weight.w.data() + static_cast<std::size_t>(co) * in_ch * 3;
                double* orow = out.data() + (static_cast<std::size_t>(b) * C + co) * L;
                for (int pos = 0; pos < L; ++pos) orow[pos] = bias.w[static_cast<std::size_t>(co)];
                for (int ci = 0; ci < in_ch; ++ci) {
                    const double* irow =
                        in.data() + (static_cast<std::size_t>(b) * in_ch + ci) * L;
                    const double w0 = wrow[ci * 3 + 0], w1 = wrow[ci * 3 + 1],
                                 w2 = wrow[ci * 3 + 2];
                    for (int pos = 0; pos < L; ++pos) {
                        double acc = w1 * irow[pos];
                        if (pos > 0) acc += w0 * irow[pos - 1];
                        if (pos + 1 < L) acc += w2 * irow[pos + 1];
                        orow[pos] += acc;
                    }
                }
            }
    }

    void conv_backward(const std::vector<double>& in, int in_ch, ParamBlock& weight,
                       ParamBlock& bias, int batch, const std::vector<double>& dout,
                       std::vector<double>& din) const {
        const int L = cfg_.seq_len, C = cfg_.channels;
        din.assign(static_cast<std::size_t>(batch) * in_ch * L, 0.0);
        for (int b = 0; b < batch; ++b)
            for (int co = 0; co < C; ++co) {
                const double* drow = dout.data() + (static_cast<std::size_t>(b) * C + co) * L;
                double* gwrow = weight.g.data() + static_cast<std::size_t>(co) * in_ch * 3;
                const double* wrow = weight.w.data() + static_cast<std::size_t>(co) * in_ch * 3;
                double gb = 0.0;
                for (int pos = 0; pos < L; ++pos) gb += drow[pos];
                bias.g[static_cast<std::size_t>(co)] += gb;
                for (int ci = 0; ci < in_ch; ++ci) {
                    const double* irow =
                        in.data() + (static_cast<std::size_t>(b) * in_ch + ci) * L;
                    double* dirow = din.data() + (static_cast<std::size_t>(b) * in_ch + ci) * L;
                    double gw0 = 0.0, gw1 = 0.0, gw2 = 0.0;
                    const double w0 = wrow[ci * 3 + 0], w1 = wrow[ci * 3 + 1],
                                 w2 = wrow[ci * 3 + 2];
                    for (int pos = 0; pos < L; ++pos) {
                        const double d = drow[pos];
                        gw1 += d * irow[pos];
                        dirow[pos] += w1 * d;
                        if (pos > 0) {
                            gw0 += d * irow[pos - 1];
                            dirow[pos - 1] += w0 * d;
                        }
                        if (pos + 1 < L) {
                            gw2 += d * irow[pos + 1];
                            dirow[pos + 1] += w2 * d;
                        }
                    }
                    gwrow[ci * 3 + 0] += gw0;
                    gwrow[ci * 3 + 1] += gw1;
                    gwrow[ci * 3 + 2] += gw2;
                }
            }
    }

    /// Batch norm over layout [B][F][S] (S = 1 for the trunk). Training
    /// mode normalizes with biased batch statistics; eval mode uses the
    /// stored running statistics. Running stats use the unbiased variance.
    void bn_forward(const std::vector<double>& x, const std::string& prefix, int batch,
                    int features, int spatial, bool training, bool update_stats,
                    std::vector<double>& xhat, std::vector<double>& y, std::vector<double>& mu,
                    std::vector<double>& var) {
        auto& gamma = block(prefix + ".gamma");
        auto& beta = block(prefix + ".beta");
        auto& rmean = block(prefix + ".running_mean");
        auto& rvar = block(prefix + ".running_var");
        const std::size_t total = x.size();
        xhat.assign(total, 0.0);
        y.assign(total, 0.0);
        mu.assign(static_cast<std::size_t>(features), 0.0);
        var.assign(static_cast<std::size_t>(features), 0.0);
        const double count = static_cast<double>(batch) * spatial;
        if (training && count < 2.0)
            throw std::invalid_argument(
                "batch normalization needs more than one value per feature in training mode");
        for (int f = 0; f < features; ++f) {
            double mean_f, var_f;
            if (training) {
                double sum = 0.0, sq = 0.0;
                for (int b = 0; b < batch; ++b) {
                    const double* row =
                        x.data() + (static_cast<std::size_t>(b) * features + f) * spatial;
                    for (int s = 0; s < spatial; ++s) {
                        sum += row[s];
                        sq += row[s] * row[s];
                    }
                }
                mean_f = sum / count;
                var_f = std::max(0.0, sq / count - mean_f * mean_f);
                if (update_stats) {
                    const double unbiased =
                        count > 1.0 ? var_f * count / (count - 1.0) : var_f;
                    rmean.w[static_cast<std::size_t>(f)] = detail::round_f32(
                        (1.0 - cfg_.bn_momentum) * rmean.w[static_cast<std::size_t>(f)] +
                        cfg_.bn_momentum * mean_f);
                    rvar.w[static_cast<std::size_t>(f)] = detail::round_f32(
                        (1.0 - cfg_.bn_momentum) * rvar.w[static_cast<std::size_t>(f)] +
                        cfg_.bn_momentum * unbiased);
                }
            } else {
                mean_f = rmean.w[static_cast<std::size_t>(f)];
                var_f = rvar.w[static_cast<std::size_t>(f)];
            }
            mu[static_cast<std::size_t>(f)] = mean_f;
            var[static_cast<std::size_t>(f)] = var_f;
            const double inv = 1.0 / std::sqrt(var_f + cfg_.bn_eps);
            const double gf = gamma.w[static_cast<std::size_t>(f)];
            const double bf = beta.w[static_cast<std::size_t>(f)];
            for (int b = 0; b < batch; ++b) {
                const std::size_t base = (static_cast<std::size_t>(b) * features + f) * spatial;
                for (int s = 0; s < spatial; ++s) {
                    const double xh = (x[base + s] - mean_f) * inv;
                    xhat[base + s] = xh;
                    y[base + s] = gf * xh + bf;
                }
            }
        }
    }

    void bn_backward(const std::vector<double>& dy, const std::vector<double>& xhat,
                     const std::string& prefix, int batch, int features, int spatial,
                     const std::vector<double>& var, std::vector<double>& dx) {
        auto& gamma = block(prefix + ".gamma");
        auto& gamma_g = gamma.g;
        auto& beta_g = block(prefix + ".beta").g;
        dx.assign(dy.size(), 0.0);
        const double count = static_cast<double>(batch) * spatial;
        for (int f = 0; f < features; ++f) {
            double sum_dy = 0.0, sum_dy_xhat = 0.0;
            for (int b = 0; b < batch; ++b) {
                const std::size_t base = (static_cast<std::size_t>(b) * features + f) * spatial;
                for (int s = 0; s < spatial; ++s) {
                    sum_dy += dy[base + s];
                    sum_dy_xhat += dy[base + s] * xhat[base + s];
                }
            }
            gamma_g[static_cast<std::size_t>(f)] += sum_dy_xhat;
            beta_g[static_cast<std::size_t>(f)] += sum_dy;
            const double inv = gamma.w[static_cast<std::size_t>(f)] /
                               std::sqrt(var[static_cast<std::size_t>(f)] + cfg_.bn_eps);
            for (int b = 0; b < batch; ++b) {
                const std::size_t base = (static_cast<std::size_t>(b) * features + f) * spatial;
                for (int s = 0; s < spatial; ++s)
                    dx[base + s] = inv * (dy[base + s] - sum_dy / count -
                                          xhat[base + s] * sum_dy_xhat / count);
            }
        }
    }

    void leaky_forward(std::vector<double>& x) const {
        for (auto& v : x)
            if (v < 0.0) v *= cfg_.leaky_slope;
    }

    void leaky_backward(const std::vector<double>& activated, std::vector<double>& d) const {
        for (std::size_t i = 0; i < d.size(); ++i)
            if (activated[i] <= 0.0) d[i] *= cfg_.leaky_slope;
    }

    void linear_forward(const std::vector<double>& in, const ParamBlock& weight,
                        const ParamBlock& bias, int batch, int in_f, int out_f,
                        std::vector<double>& out) const {
        out.assign(static_cast<std::size_t>(batch) * out_f, 0.0);
        for (int b = 0; b < batch; ++b) {
            const double* irow = in.data() + static_cast<std::size_t>(b) * in_f;
            double* orow = out.data() + static_cast<std::size_t>(b) * out_f;
            for (int o = 0; o < out_f; ++o) {
                const double* wrow = weight.w.data() + static_cast<std::size_t>(o) * in_f;
                double acc = bias.w[static_cast<std::size_t>(o)];
                for (int i = 0; i < in_f; ++i) acc += wrow[i] * irow[i];
                orow[o] = acc;
            }
        }
    }

    void linear_backward(const std::vector<double>& in, ParamBlock& weight, ParamBlock& bias,
                         int batch, int in_f, int out_f, const std::vector<double>& dout,
                         std::vector<double>& din) const {
        din.assign(static_cast<std::size_t>(batch) * in_f, 0.0);
        for (int b = 0; b < batch; ++b) {
            const double* irow = in.data() + static_cast<std::size_t>(b) * in_f;
            const double* drow = dout.data() + static_cast<std::size_t>(b) * out_f;
            double* dirow = din.data() + static_cast<std::size_t>(b) * in_f;
            for (int o = 0; o < out_f; ++o) {
                const double d = drow[o];
                bias.g[static_cast<std::size_t>(o)] += d;
                double* gwrow = weight.g.data() + static_cast<std::size_t>(o) * in_f;
                const double* wrow = weight.w.data() + static_cast<std::size_t>(o) * in_f;
                for (int i = 0; i < in_f; ++i) {
                    gwrow[i] += d * irow[i];
                    dirow[i] += wrow[i] * d;
                }
            }
        }
    }

    // ---- full passes --------------------------------------------------

    void forward(const std::vector<std::vector<int>>& states, bool training, bool update_stats,
                 Rng* dropout_rng, Workspace& ws) {
        const int B = static_cast<int>(states.size());
        if (B == 0) throw std::invalid_argument("empty batch");
        const int V = cfg_.vocab(), L = cfg_.seq_len, C = cfg_.channels, G = cfg_.actions;
        ws.batch = B;
        // one-hot encode; positions beyond the encoded window hold symbol 0
        ws.x0.assign(static_cast<std::size_t>(B) * V * L, 0.0);
        for (int b = 0; b < B; ++b) {
            const auto& s = states[static_cast<std::size_t>(b)];
            if (static_cast<int>(s.size()) != cfg_.encoded_len)
                throw std::invalid_argument("encoded state length does not match the network");
            for (int pos = 0; pos < L; ++pos) {
                const int sym = pos < cfg_.encoded_len ? s[static_cast<std::size_t>(pos)] : 0;
                if (sym < 0 || sym > G)
                    throw std::invalid_argument("encoded symbol out of range");
                ws.x0[(static_cast<std::size_t>(b) * V + sym) * L + pos] = 1.0;
            }
        }

        ws.conv_z.assign(static_cast<std::size_t>(cfg_.conv_layers), {});
        ws.conv_xhat.assign(static_cast<std::size_t>(cfg_.conv_layers), {});
        ws.conv_a.assign(static_cast<std::size_t>(cfg_.conv_layers), {});
        ws.conv_mu.assign(static_cast<std::size_t>(cfg_.conv_layers), {});
        ws.conv_var.assign(static_cast<std::size_t>(cfg_.conv_layers), {});

        const std::vector<double>* in = &ws.x0;
        int in_ch = V;
        for (int layer = 0; layer < cfg_.conv_layers; ++layer) {
            const std::string id = std::to_string(layer + 1);
            auto& z = ws.conv_z[static_cast<std::size_t>(layer)];
            conv_forward(*in, in_ch, block("conv" + id + ".weight"), block("conv" + id + ".bias"),
                         B, z);
            auto& a = ws.conv_a[static_cast<std::size_t>(layer)];
            bn_forward(z, "bn" + id, B, C, L, training, update_stats,
                       ws.conv_xhat[static_cast<std::size_t>(layer)], a,
                       ws.conv_mu[static_cast<std::size_t>(layer)],
                       ws.conv_var[static_cast<std::size_t>(layer)]);
            leaky_forward(a);
            in = &a;
            in_ch = C;
        }

        // trunk: flatten is a no-op on the [B][C][L] layout
        const int F1 = cfg_.trunk1(), F2 = cfg_.trunk2();
        linear_forward(*in, block("fc1.weight"), block("fc1.bias"), B, cfg_.flat(), F1, ws.fc1_z);
        bn_forward(ws.fc1_z, "bnf1", B, F1, 1, training, update_stats, ws.fc1_xhat, ws.fc1_a,
                   ws.fc1_mu, ws.fc1_var);
        leaky_forward(ws.fc1_a);
        apply_dropout(ws.fc1_a, training, dropout_rng, ws.fc1_mask, ws.fc1_d);

        linear_forward(ws.fc1_d, block("fc2.weight"), block("fc2.bias"), B, F1, F2, ws.fc2_z);
        bn_forward(ws.fc2_z, "bnf2", B, F2, 1, training, update_stats, ws.fc2_xhat, ws.fc2_a,
                   ws.fc2_mu, ws.fc2_var);
        leaky_forward(ws.fc2_a);
        apply_dropout(ws.fc2_a, training, dropout_rng, ws.fc2_mask, ws.fc2_d);

        linear_forward(ws.fc2_d, block("policy.weight"), block("policy.bias"), B, F2, G,
                       ws.logits);
        ws.logq.assign(ws.logits.size(), 0.0);
        for (int b = 0; b < B; ++b) {
            const double* row = ws.logits.data() + static_cast<std::size_t>(b) * G;
            double* out = ws.logq.data() + static_cast<std::size_t>(b) * G;
            double peak = row[0];
            for (int a = 1; a < G; ++a) peak = std::max(peak, row[a]);
            double lse = 0.0;
            for (int a = 0; a < G; ++a) lse += std::exp(row[a] - peak);
            lse = peak + std::log(lse);
            for (int a = 0; a < G; ++a) out[a] = row[a] - lse;
        }

        linear_forward(ws.fc2_d, block("value.weight"), block("value.bias"), B, F2, 1, ws.vpre);
        ws.v.assign(static_cast<std::size_t>(B), 0.0);
        for (int b = 0; b < B; ++b) ws.v[static_cast<std::size_t>(b)] =
            std::tanh(ws.vpre[static_cast<std::size_t>(b)]);
    }

    void apply_dropout(const std::vector<double>& in, bool training, Rng* rng,
                       std::vector<double>& mask, std::vector<double>& out) const {
        out = in;
        mask.assign(in.size(), 1.0);
        if (!training || rng == nullptr || cfg_.dropout <= 0.0) return;
        const double keep = 1.0 - cfg_.dropout;
        for (std::size_t i = 0; i < in.size(); ++i) {
            if (rng->uniform() < cfg_.dropout) {
                mask[i] = 0.0;
                out[i] = 0.0;
            } else {
                mask[i] = 1.0 / keep;
                out[i] = in[i] * mask[i];
            }
        }
    }

    double loss_of(const std::vector<TrainingExample>& batch, const Workspace& ws) const {
        const int B = ws.batch, G = cfg_.actions;
        double total = 0.0;
        for (int b = 0; b < B; ++b) {
            const auto& e = batch[static_cast<std::size_t>(b)];
            if (static_cast<int>(e.pi.size()) != G)
                throw std::invalid_argument("policy target width does not match the network");
            const double dv = e.z - ws.v[static_cast<std::size_t>(b)];
            double ce = 0.0;
            const double* lq = ws.logq.data() + static_cast<std::size_t>(b) * G;
            for (int a = 0; a < G; ++a) ce -= e.pi[static_cast<std::size_t>(a)] * lq[a];
            total += dv * dv + ce;
        }
        return total / static_cast<double>(B);
    }

    void backward(const std::vector<TrainingExample>& batch, Workspace& ws) {
        const int B = ws.batch, G = cfg_.actions, F1 = cfg_.trunk1(), F2 = cfg_.trunk2();
        for (auto& blk : blocks_)
            if (blk.trainable) std::fill(blk.g.begin(), blk.g.end(), 0.0);

        // heads
        std::vector<double> dlogits(static_cast<std::size_t>(B) * G, 0.0);
        std::vector<double> dvpre(static_cast<std::size_t>(B), 0.0);
        const double invB = 1.0 / static_cast<double>(B);
        for (int b = 0; b < B; ++b) {
            const auto& e = batch[static_cast<std::size_t>(b)];
            double* drow = dlogits.data() + static_cast<std::size_t>(b) * G;
            const double* lq = ws.logq.data() + static_cast<std::size_t>(b) * G;
            double dsum = 0.0;
            for (int a = 0; a < G; ++a) {
                drow[a] = -e.pi[static_cast<std::size_t>(a)] * invB;
                dsum += drow[a];
            }
            for (int a = 0; a < G; ++a) drow[a] -= std::exp(lq[a]) * dsum;
            const double v = ws.v[static_cast<std::size_t>(b)];
            dvpre[static_cast<std::size_t>(b)] =
                2.0 * (v - e.z) * invB * (1.0 - v * v);
        }

        std::vector<double> d_fc2d_policy, d_fc2d_value;
        linear_backward(ws.fc2_d, block("policy.weight"), block("policy.bias"), B, F2, G,
                        dlogits, d_fc2d_policy);
        linear_backward(ws.fc2_d, block("value.weight"), block("value.bias"), B, F2, 1, dvpre,
                        d_fc2d_value);
        std::vector<double> d6(d_fc2d_policy.size());
        for (std::size_t i = 0; i < d6.size(); ++i)
            d6[i] = d_fc2d_policy[i] + d_fc2d_value[i];

        // trunk layer 2
        for (std::size_t i = 0; i < d6.size(); ++i) d6[i] *= ws.fc2_mask[i];
        leaky_backward(ws.fc2_a, d6);
        std::vector<double> d6z;
        bn_backward(d6, ws.fc2_xhat, "bnf2", B, F2, 1, ws.fc2_var, d6z);
        std::vector<double> d5;
        linear_backward(ws.fc1_d, block("fc2.weight"), block("fc2.bias"), B, F1, F2, d6z, d5);

        // trunk layer 1
        for (std::size_t i = 0; i < d5.size(); ++i) d5[i] *= ws.fc1_mask[i];
        leaky_backward(ws.fc1_a, d5);
        std::vector<double> d5z;
        bn_backward(d5, ws.fc1_xhat, "bnf1", B, F1, 1, ws.fc1_var, d5z);
        std::vector<double> dflat;
        linear_backward(ws.conv_a.back(), block("fc1.weight"), block("fc1.bias"), B, cfg_.flat(),
                        F1, d5z, dflat);

        // conv stack, last to first
        std::vector<double> d = std::move(dflat);
        for (int layer = cfg_.conv_layers - 1; layer >= 0; --layer) {
            const std::string id = std::to_string(layer + 1);
            leaky_backward(ws.conv_a[static_cast<std::size_t>(layer)], d);
            std::vector<double> dz;
            bn_backward(d, ws.conv_xhat[static_cast<std::size_t>(layer)], "bn" + id, B,
                        cfg_.channels, cfg_.seq_len, ws.conv_var[static_cast<std::size_t>(layer)],
                        dz);
            const std::vector<double>& in =
                layer == 0 ? ws.x0 : ws.conv_a[static_cast<std::size_t>(layer - 1)];
            const int in_ch = layer == 0 ? cfg_.vocab() : cfg_.channels;
            std::vector<double> din;
            conv_backward(in, in_ch, block("conv" + id + ".weight"), block("conv" + id + ".bias"),
                          B, dz, din);
            d = std::move(din);
        }
    }

    void adam_update(const TrainConfig& tc) {
        ++step_;
        const double t = static_cast<double>(step_);
        const double bc1 = 1.0 - std::pow(tc.beta1, t);
        const double bc2 = 1.0 - std::pow(tc.beta2, t);
        for (auto& blk : blocks_) {
            if (!blk.trainable) continue;
            for (std::size_t i = 0; i < blk.w.size(); ++i) {
                const double g = blk.g[i];
                blk.m[i] = tc.beta1 * blk.m[i] + (1.0 - tc.beta1) * g;
                blk.v[i] = tc.beta2 * blk.v[i] + (1.0 - tc.beta2) * g * g;
                const double mhat = blk.m[i] / bc1;
                const double vhat = blk.v[i] / bc2;
                blk.w[i] = detail::round_f32(
                    blk.w[i] - tc.learning_rate * mhat / (std::sqrt(vhat) + tc.adam_eps));
            }
        }
    }
};

} // namespace qdist
