#include "adriana/neural.hpp"

#include "adriana/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace adriana {

namespace {

using Vec = Eigen::VectorXd;
using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MatMap = Eigen::Map<RowMat>;
using ConstMatMap = Eigen::Map<const RowMat>;
using VecMap = Eigen::Map<Vec>;
using ConstVecMap = Eigen::Map<const Vec>;

constexpr std::size_t kHiddenLayers = 3;

std::size_t gates_for(ModelKind kind) {
    switch (kind) {
    case ModelKind::Lstm: return 4;
    case ModelKind::Gru: return 3;
    case ModelKind::Mlp: return 0;
    default: throw Error(ErrorCode::NotANeuralSpec, to_string(kind));
    }
}

// Flat-vector block offsets. For the MLP the per-layer blocks are
// [W (h x i), b (h)]; for recurrent nets [Wx (g*h x i), Wh (g*h x h),
// b (g*h)]. The output head [Wo (h), bo] comes last.
struct Layout {
    struct Block {
        std::size_t offset;
        std::size_t rows;
        std::size_t cols;  // 0 marks a bias vector
    };
    std::vector<Block> blocks;
    std::size_t total = 0;

    std::size_t add(std::size_t rows, std::size_t cols) {
        blocks.push_back({total, rows, cols});
        total += rows * (cols == 0 ? 1 : cols);
        return blocks.size() - 1;
    }
};

Layout make_layout(const NetworkConfig& config) {
    const std::size_t h = config.neurons;
    const std::size_t w = config.window_size;
    Layout layout;
    if (config.kind == ModelKind::Mlp) {
        layout.add(h, w);
        layout.add(h, 0);
        for (int l = 0; l < 2; ++l) {
            layout.add(h, h);
            layout.add(h, 0);
        }
    } else {
        const std::size_t g = gates_for(config.kind);
        for (std::size_t l = 0; l < kHiddenLayers; ++l) {
            const std::size_t input = l == 0 ? 1 : h;
            layout.add(g * h, input);
            layout.add(g * h, h);
            layout.add(g * h, 0);
        }
    }
    layout.add(1, h);  // output weights
    layout.add(1, 0);  // output bias
    return layout;
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

struct SampleCaches {
    // recurrent: [layer][time] hidden / cell / gate activations
    std::vector<std::vector<Vec>> h, c, tanh_c, gates, inputs;
    // mlp: layer activations
    std::vector<Vec> mlp_pre, mlp_act;
};

} // namespace

void NetworkConfig::validate() const {
    if (kind != ModelKind::Mlp && kind != ModelKind::Gru && kind != ModelKind::Lstm)
        throw Error(ErrorCode::NotANeuralSpec, to_string(kind));
    if (neurons == 0 || window_size == 0)
        throw Error(ErrorCode::InvalidConfig, "neurons and window size must be positive");
    if (!(dropout_rate >= 0.0 && dropout_rate < 1.0))
        throw Error(ErrorCode::InvalidConfig, "dropout rate must lie in [0,1)");
    if (batch_size == 0 || max_epochs == 0)
        throw Error(ErrorCode::InvalidConfig, "batch size and max epochs must be positive");
}

NetworkConfig network_config_from_spec(const ModelSpec& spec) {
    NetworkConfig config;
    config.kind = spec.kind;
    config.neurons = static_cast<std::size_t>(spec.get("neurons", 58));
    config.window_size = static_cast<std::size_t>(spec.get("window_size", 9));
    config.dropout_rate = spec.get("dropout_rate", 0.0);
    config.learning_rate = spec.get("learning_rate", 1e-3);
    config.batch_size = static_cast<std::size_t>(spec.get("batch_size", 32));
    config.max_epochs = static_cast<std::size_t>(spec.get("max_epochs", 200));
    config.patience = static_cast<std::size_t>(spec.get("patience", 10));
    config.seed = static_cast<std::uint64_t>(spec.get("seed", 1));
    config.validate();
    return config;
}

std::size_t count_params(const ModelSpec& spec) {
    NetworkConfig config = network_config_from_spec(spec);
    return make_layout(config).total;
}

NeuralModel::NeuralModel(const NetworkConfig& config) : config_(config) {
    config_.validate();
    const Layout layout = make_layout(config_);
    params_.assign(layout.total, 0.0);
    Rng rng(config_.seed);
    for (const auto& block : layout.blocks) {
        if (block.cols == 0) continue;  // biases start at zero
        const double limit =
            std::sqrt(6.0 / static_cast<double>(block.rows + block.cols));
        for (std::size_t k = 0; k < block.rows * block.cols; ++k)
            params_[block.offset + k] = rng.uniform(-limit, limit);
    }
}

NeuralModel::NeuralModel(const NetworkConfig& config, std::vector<double> params)
    : config_(config), params_(std::move(params)) {
    config_.validate();
    if (params_.size() != make_layout(config_).total)
        throw Error(ErrorCode::LengthMismatch, "parameter vector length mismatch");
}

std::map<std::string, double> NeuralModel::hyperparameters() const {
    return {
        {"neurons", static_cast<double>(config_.neurons)},
        {"window_size", static_cast<double>(config_.window_size)},
        {"dropout_rate", config_.dropout_rate},
        {"learning_rate", config_.learning_rate},
        {"batch_size", static_cast<double>(config_.batch_size)},
        {"max_epochs", static_cast<double>(config_.max_epochs)},
        {"patience", static_cast<double>(config_.patience)},
        {"seed", static_cast<double>(config_.seed)},
    };
}

namespace {

// Everything below operates on the flat parameter vector through the
// layout; gradient accumulation mirrors the forward walk exactly.
class Network {
public:
    Network(const NetworkConfig& config, std::span<const double> params)
        : config_(config), layout_(make_layout(config)), params_(params) {}

    ConstMatMap weight(std::size_t block) const {
        const auto& b = layout_.blocks[block];
        return ConstMatMap(params_.data() + b.offset, static_cast<Eigen::Index>(b.rows),
                           static_cast<Eigen::Index>(b.cols));
    }
    ConstVecMap bias(std::size_t block) const {
        const auto& b = layout_.blocks[block];
        return ConstVecMap(params_.data() + b.offset, static_cast<Eigen::Index>(b.rows));
    }
    MatMap grad_weight(std::vector<double>& grads, std::size_t block) const {
        const auto& b = layout_.blocks[block];
        return MatMap(grads.data() + b.offset, static_cast<Eigen::Index>(b.rows),
                      static_cast<Eigen::Index>(b.cols));
    }
    VecMap grad_bias(std::vector<double>& grads, std::size_t block) const {
        const auto& b = layout_.blocks[block];
        return VecMap(grads.data() + b.offset, static_cast<Eigen::Index>(b.rows));
    }

    std::size_t total_params() const { return layout_.total; }

    // masks: per hidden-layer scaled dropout mask (empty -> identity)
    double forward(std::span<const double> window,
                   const std::vector<Vec>* masks, SampleCaches* caches) const {
        if (config_.kind == ModelKind::Mlp) return forward_mlp(window, masks, caches);
        return forward_rnn(window, masks, caches);
    }

    // dLdy: upstream scalar gradient; caches from forward(); grads
    // accumulated in place.
    void backward(std::span<const double> window, double dLdy, const SampleCaches& caches,
                  const std::vector<Vec>* masks, std::vector<double>& grads) const {
        if (config_.kind == ModelKind::Mlp)
            backward_mlp(window, dLdy, caches, masks, grads);
        else
            backward_rnn(dLdy, caches, masks, grads);
    }

private:
    NetworkConfig config_;
    Layout layout_;
    std::span<const double> params_;

    static void apply_mask(Vec& v, const std::vector<Vec>* masks, std::size_t layer) {
        if (masks) v.array() *= (*masks)[layer].array();
    }

    double forward_mlp(std::span<const double> window, const std::vector<Vec>* masks,
                       SampleCaches* caches) const {
        Vec a = ConstVecMap(window.data(), static_cast<Eigen::Index>(window.size()));
        if (caches) {
            caches->mlp_pre.clear();
            caches->mlp_act.clear();
            caches->mlp_act.push_back(a);
        }
        for (std::size_t l = 0; l < kHiddenLayers; ++l) {
            const Vec z = weight(2 * l) * a + bias(2 * l + 1);
            Vec act = z.cwiseMax(0.0);
            apply_mask(act, masks, l);
            if (caches) {
                caches->mlp_pre.push_back(z);
                caches->mlp_act.push_back(act);
            }
            a = std::move(act);
        }
        const std::size_t out_w = 2 * kHiddenLayers;
        return (weight(out_w) * a)(0) + bias(out_w + 1)(0);
    }

    void backward_mlp(std::span<const double> window, double dLdy,
                      const SampleCaches& caches, const std::vector<Vec>* masks,
                      std::vector<double>& grads) const {
        const std::size_t out_w = 2 * kHiddenLayers;
        grad_weight(grads, out_w).noalias() += dLdy * caches.mlp_act.back().transpose();
        grad_bias(grads, out_w + 1)(0) += dLdy;
        Vec da = dLdy * weight(out_w).transpose();
        for (std::size_t l = kHiddenLayers; l-- > 0;) {
            if (masks) da.array() *= (*masks)[l].array();
            Vec dz = (caches.mlp_pre[l].array() > 0.0).select(da, 0.0);
            grad_weight(grads, 2 * l).noalias() += dz * caches.mlp_act[l].transpose();
            grad_bias(grads, 2 * l + 1) += dz;
            if (l > 0) da = weight(2 * l).transpose() * dz;
        }
        (void)window;
    }

    double forward_rnn(std::span<const double> window, const std::vector<Vec>* masks,
                       SampleCaches* caches) const {
        const std::size_t h = config_.neurons;
        const std::size_t T = window.size();
        const bool lstm = config_.kind == ModelKind::Lstm;
        const std::size_t g = gates_for(config_.kind);

        if (caches) {
            caches->h.assign(kHiddenLayers, {});
            caches->c.assign(kHiddenLayers, {});
            caches->tanh_c.assign(kHiddenLayers, {});
            caches->gates.assign(kHiddenLayers, {});
            caches->inputs.assign(kHiddenLayers, {});
        }

        std::vector<Vec> hidden(kHiddenLayers, Vec::Zero(static_cast<Eigen::Index>(h)));
        std::vector<Vec> cell(kHiddenLayers, Vec::Zero(static_cast<Eigen::Index>(h)));

        for (std::size_t t = 0; t < T; ++t) {
            Vec input(1);
            input(0) = window[t];
            for (std::size_t l = 0; l < kHiddenLayers; ++l) {
                const std::size_t base = 3 * l;
                const Vec& h_prev = hidden[l];
                Vec pre = weight(base) * input + bias(base + 2);
                Vec gate_values(static_cast<Eigen::Index>(g * h));
                Vec h_new;
                if (lstm) {
                    pre.noalias() += weight(base + 1) * h_prev;
                    // gate order [i f g o]
                    for (std::size_t k = 0; k < h; ++k) {
                        gate_values(static_cast<Eigen::Index>(k)) =
                            sigmoid(pre(static_cast<Eigen::Index>(k)));
                        gate_values(static_cast<Eigen::Index>(h + k)) =
                            sigmoid(pre(static_cast<Eigen::Index>(h + k)));
                        gate_values(static_cast<Eigen::Index>(2 * h + k)) =
                            std::tanh(pre(static_cast<Eigen::Index>(2 * h + k)));
                        gate_values(static_cast<Eigen::Index>(3 * h + k)) =
                            sigmoid(pre(static_cast<Eigen::Index>(3 * h + k)));
                    }
                    Vec c_new(static_cast<Eigen::Index>(h));
                    Vec tanh_new(static_cast<Eigen::Index>(h));
                    h_new.resize(static_cast<Eigen::Index>(h));
                    for (std::size_t k = 0; k < h; ++k) {
                        const double ig = gate_values(static_cast<Eigen::Index>(k));
                        const double fg = gate_values(static_cast<Eigen::Index>(h + k));
                        const double cg = gate_values(static_cast<Eigen::Index>(2 * h + k));
                        const double og = gate_values(static_cast<Eigen::Index>(3 * h + k));
                        c_new(static_cast<Eigen::Index>(k)) =
                            fg * cell[l](static_cast<Eigen::Index>(k)) + ig * cg;
                        tanh_new(static_cast<Eigen::Index>(k)) =
                            std::tanh(c_new(static_cast<Eigen::Index>(k)));
                        h_new(static_cast<Eigen::Index>(k)) =
                            og * tanh_new(static_cast<Eigen::Index>(k));
                    }
                    if (caches) {
                        caches->c[l].push_back(c_new);
                        caches->tanh_c[l].push_back(tanh_new);
                    }
                    cell[l] = std::move(c_new);
                } else {
                    // GRU, gate order [r u n]; n uses the reset-scaled state
                    const auto wh = weight(base + 1);
                    Vec rec = wh * h_prev;  // all three gate blocks; n fixed below
                    for (std::size_t k = 0; k < 2 * h; ++k)
                        gate_values(static_cast<Eigen::Index>(k)) = sigmoid(
                            pre(static_cast<Eigen::Index>(k)) + rec(static_cast<Eigen::Index>(k)));
                    Vec reset_state(static_cast<Eigen::Index>(h));
                    for (std::size_t k = 0; k < h; ++k)
                        reset_state(static_cast<Eigen::Index>(k)) =
                            gate_values(static_cast<Eigen::Index>(k)) *
                            h_prev(static_cast<Eigen::Index>(k));
                    const Vec n_rec =
                        wh.bottomRows(static_cast<Eigen::Index>(h)) * reset_state;
                    h_new.resize(static_cast<Eigen::Index>(h));
                    for (std::size_t k = 0; k < h; ++k) {
                        const double n = std::tanh(pre(static_cast<Eigen::Index>(2 * h + k)) +
                                                   n_rec(static_cast<Eigen::Index>(k)));
                        gate_values(static_cast<Eigen::Index>(2 * h + k)) = n;
                        const double u = gate_values(static_cast<Eigen::Index>(h + k));
                        h_new(static_cast<Eigen::Index>(k)) =
                            u * h_prev(static_cast<Eigen::Index>(k)) + (1.0 - u) * n;
                    }
                }
                if (caches) {
                    caches->inputs[l].push_back(input);
                    caches->gates[l].push_back(gate_values);
                    caches->h[l].push_back(h_new);
                }
                hidden[l] = std::move(h_new);
                // inter-layer dropout on the connection upward
                input = hidden[l];
                apply_mask(input, masks, l);
            }
        }
        const std::size_t out_w = 3 * kHiddenLayers;
        Vec top = hidden.back();
        apply_mask(top, masks, kHiddenLayers - 1);
        return (weight(out_w) * top)(0) + bias(out_w + 1)(0);
    }

    void backward_rnn(double dLdy, const SampleCaches& caches,
                      const std::vector<Vec>* masks, std::vector<double>& grads) const {
        const std::size_t h = config_.neurons;
        const std::size_t T = caches.h[0].size();
        const bool lstm = config_.kind == ModelKind::Lstm;
        const std::size_t out_w = 3 * kHiddenLayers;

        Vec top = caches.h.back().back();
        if (masks) top.array() *= (*masks)[kHiddenLayers - 1].array();
        grad_weight(grads, out_w).noalias() += dLdy * top.transpose();
        grad_bias(grads, out_w + 1)(0) += dLdy;

        // dh from the layer above, per timestep (top layer: only at t = T-1)
        std::vector<Vec> upstream(T, Vec::Zero(static_cast<Eigen::Index>(h)));
        upstream[T - 1] = dLdy * weight(out_w).transpose();
        if (masks) upstream[T - 1].array() *= (*masks)[kHiddenLayers - 1].array();

        for (std::size_t l = kHiddenLayers; l-- > 0;) {
            const std::size_t base = 3 * l;
            std::vector<Vec> downstream(
                T, Vec::Zero(static_cast<Eigen::Index>(l == 0 ? 1 : h)));
            Vec dh_next = Vec::Zero(static_cast<Eigen::Index>(h));
            Vec dc_next = Vec::Zero(static_cast<Eigen::Index>(h));
            auto wx = weight(base);
            auto wh = weight(base + 1);
            auto g_wx = grad_weight(grads, base);
            auto g_wh = grad_weight(grads, base + 1);
            auto g_b = grad_bias(grads, base + 2);

            for (std::size_t t = T; t-- > 0;) {
                const Vec& gate = caches.gates[l][t];
                const Vec h_prev = t == 0 ? Vec(Vec::Zero(static_cast<Eigen::Index>(h)))
                                          : caches.h[l][t - 1];
                Vec dh = upstream[t] + dh_next;
                if (lstm) {
                    const Vec c_prev = t == 0 ? Vec(Vec::Zero(static_cast<Eigen::Index>(h)))
                                              : caches.c[l][t - 1];
                    Vec dz(static_cast<Eigen::Index>(4 * h));
                    Vec dc(static_cast<Eigen::Index>(h));
                    for (std::size_t k = 0; k < h; ++k) {
                        const auto ki = static_cast<Eigen::Index>(k);
                        const double ig = gate(ki);
                        const double fg = gate(static_cast<Eigen::Index>(h + k));
                        const double cg = gate(static_cast<Eigen::Index>(2 * h + k));
                        const double og = gate(static_cast<Eigen::Index>(3 * h + k));
                        const double tc = caches.tanh_c[l][t](ki);
                        const double d_o = dh(ki) * tc;
                        dc(ki) = dh(ki) * og * (1.0 - tc * tc) + dc_next(ki);
                        const double d_i = dc(ki) * cg;
                        const double d_f = dc(ki) * c_prev(ki);
                        const double d_g = dc(ki) * ig;
                        dz(ki) = d_i * ig * (1.0 - ig);
                        dz(static_cast<Eigen::Index>(h + k)) = d_f * fg * (1.0 - fg);
                        dz(static_cast<Eigen::Index>(2 * h + k)) = d_g * (1.0 - cg * cg);
                        dz(static_cast<Eigen::Index>(3 * h + k)) = d_o * og * (1.0 - og);
                    }
                    g_wx.noalias() += dz * caches.inputs[l][t].transpose();
                    g_wh.noalias() += dz * h_prev.transpose();
                    g_b += dz;
                    downstream[t] = wx.transpose() * dz;
                    dh_next = wh.transpose() * dz;
                    for (std::size_t k = 0; k < h; ++k)
                        dc_next(static_cast<Eigen::Index>(k)) =
                            dc(static_cast<Eigen::Index>(k)) *
                            gate(static_cast<Eigen::Index>(h + k));
                } else {
                    Vec dz(static_cast<Eigen::Index>(3 * h));
                    Vec dh_prev = Vec::Zero(static_cast<Eigen::Index>(h));
                    Vec dzn(static_cast<Eigen::Index>(h));
                    for (std::size_t k = 0; k < h; ++k) {
                        const auto ki = static_cast<Eigen::Index>(k);
                        const double u = gate(static_cast<Eigen::Index>(h + k));
                        const double n = gate(static_cast<Eigen::Index>(2 * h + k));
                        const double du = dh(ki) * (h_prev(ki) - n);
                        const double dn = dh(ki) * (1.0 - u);
                        dh_prev(ki) += dh(ki) * u;
                        dzn(ki) = dn * (1.0 - n * n);
                        dz(static_cast<Eigen::Index>(h + k)) = du * u * (1.0 - u);
                    }
                    // n gate: pre = Wn x + bn + Un (r o h_prev)
                    const auto un = wh.bottomRows(static_cast<Eigen::Index>(h));
                    const Vec d_reset_state = un.transpose() * dzn;
                    for (std::size_t k = 0; k < h; ++k) {
                        const auto ki = static_cast<Eigen::Index>(k);
                        const double r = gate(ki);
                        const double dr = d_reset_state(ki) * h_prev(ki);
                        dh_prev(ki) += d_reset_state(ki) * r;
                        dz(ki) = dr * r * (1.0 - r);
                    }
                    dz.segment(static_cast<Eigen::Index>(2 * h),
                               static_cast<Eigen::Index>(h)) = dzn;

                    Vec reset_state(static_cast<Eigen::Index>(h));
                    for (std::size_t k = 0; k < h; ++k)
                        reset_state(static_cast<Eigen::Index>(k)) =
                            gate(static_cast<Eigen::Index>(k)) *
                            h_prev(static_cast<Eigen::Index>(k));

                    g_wx.noalias() += dz * caches.inputs[l][t].transpose();
                    // r and u gates see h_prev; n sees the reset-scaled state
                    g_wh.topRows(static_cast<Eigen::Index>(2 * h)).noalias() +=
                        dz.topRows(static_cast<Eigen::Index>(2 * h)) * h_prev.transpose();
                    g_wh.bottomRows(static_cast<Eigen::Index>(h)).noalias() +=
                        dzn * reset_state.transpose();
                    g_b += dz;
                    downstream[t] = wx.transpose() * dz;
                    dh_prev.noalias() +=
                        wh.topRows(static_cast<Eigen::Index>(2 * h)).transpose() *
                        dz.topRows(static_cast<Eigen::Index>(2 * h));
                    dh_next = std::move(dh_prev);
                }
            }
            if (l > 0) {
                for (std::size_t t = 0; t < T; ++t) {
                    if (masks) downstream[t].array() *= (*masks)[l - 1].array();
                    upstream[t] = downstream[t];
                }
            }
        }
    }
};

} // namespace

double NeuralModel::predict(std::span<const double> window) const {
    check_window(window);
    Network network(config_, params_);
    return network.forward(window, nullptr, nullptr);
}

std::pair<double, std::vector<double>> NeuralModel::loss_and_gradient(
    const WindowedDataset& batch, std::span<const std::size_t> indices) const {
    return loss_grad_impl(batch, indices, nullptr);
}

std::pair<double, std::vector<double>> NeuralModel::loss_grad_impl(
    const WindowedDataset& batch, std::span<const std::size_t> indices,
    const std::vector<std::vector<double>>* /*unused*/) const {
    Network network(config_, params_);
    std::vector<double> grads(params_.size(), 0.0);
    double loss = 0.0;
    const double scale = 1.0 / static_cast<double>(indices.size());
    SampleCaches caches;
    for (std::size_t idx : indices) {
        const auto& window = batch.inputs[idx];
        const double y = network.forward(window, nullptr, &caches);
        const double err = y - batch.targets[idx];
        loss += err * err * scale;
        network.backward(window, 2.0 * err * scale, caches, nullptr, grads);
    }
    return {loss, std::move(grads)};
}

Adam::Adam(std::size_t dimension, double learning_rate, double beta1, double beta2,
           double epsilon)
    : learning_rate_(learning_rate), beta1_(beta1), beta2_(beta2), epsilon_(epsilon),
      m_(dimension, 0.0), v_(dimension, 0.0) {}

void Adam::step(std::vector<double>& params, std::span<const double> gradient) {
    ++t_;
    const double bias1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    const double bias2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
    for (std::size_t i = 0; i < params.size(); ++i) {
        m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * gradient[i];
        v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * gradient[i] * gradient[i];
        const double m_hat = m_[i] / bias1;
        const double v_hat = v_[i] / bias2;
        params[i] -= learning_rate_ * m_hat / (std::sqrt(v_hat) + epsilon_);
    }
}

std::unique_ptr<NeuralModel> fit_neural(const NetworkConfig& config,
                                        const WindowedDataset& train,
                                        const WindowedDataset& valid) {
    config.validate();
    if (train.size() == 0) throw Error(ErrorCode::EmptyTrainingSet, "no training samples");

    auto model = std::make_unique<NeuralModel>(config);
    Network network(config, model->params_);
    Rng rng(config.seed ^ 0x5eedf00dULL);
    Adam adam(model->params_.size(), config.learning_rate);

    const std::size_t h = config.neurons;
    const bool use_dropout = config.dropout_rate > 0.0;
    const double keep = 1.0 - config.dropout_rate;

    auto evaluate_rmse = [&](const WindowedDataset& data) {
        Network net(config, model->params_);
        double sum = 0.0;
        for (std::size_t i = 0; i < data.size(); ++i) {
            const double err = net.forward(data.inputs[i], nullptr, nullptr) - data.targets[i];
            sum += err * err;
        }
        return std::sqrt(sum / static_cast<double>(data.size()));
    };
    const WindowedDataset& monitor = valid.size() > 0 ? valid : train;

    std::vector<std::size_t> order(train.size());
    std::iota(order.begin(), order.end(), 0);

    double best_rmse = std::numeric_limits<double>::infinity();
    std::vector<double> best_params = model->params_;
    std::size_t best_epoch = 0;
    bool early_stopped = false;
    std::size_t epoch = 0;

    std::vector<double> grads(model->params_.size());
    SampleCaches caches;
    std::vector<Vec> masks(kHiddenLayers);

    for (; epoch < config.max_epochs; ++epoch) {
        rng.shuffle(order);
        for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
            const std::size_t end = std::min(start + config.batch_size, order.size());
            const double scale = 1.0 / static_cast<double>(end - start);
            std::fill(grads.begin(), grads.end(), 0.0);
            double batch_loss = 0.0;
            Network net(config, model->params_);
            for (std::size_t k = start; k < end; ++k) {
                const std::size_t idx = order[k];
                const std::vector<Vec>* mask_ptr = nullptr;
                if (use_dropout) {
                    for (auto& m : masks) {
                        m.resize(static_cast<Eigen::Index>(h));
                        for (std::size_t j = 0; j < h; ++j)
                            m(static_cast<Eigen::Index>(j)) =
                                rng.uniform01() < keep ? 1.0 / keep : 0.0;
                    }
                    mask_ptr = &masks;
                }
                const double y = net.forward(train.inputs[idx], mask_ptr, &caches);
                const double err = y - train.targets[idx];
                batch_loss += err * err * scale;
                net.backward(train.inputs[idx], 2.0 * err * scale, caches, mask_ptr, grads);
            }
            if (!std::isfinite(batch_loss))
                throw Error(ErrorCode::NonFiniteLoss,
                            "training diverged at epoch " + std::to_string(epoch));
            adam.step(model->params_, grads);
        }
        const double rmse = evaluate_rmse(monitor);
        if (!std::isfinite(rmse))
            throw Error(ErrorCode::NonFiniteLoss, "non-finite validation loss");
        if (rmse < best_rmse) {
            best_rmse = rmse;
            best_params = model->params_;
            best_epoch = epoch;
        } else if (epoch - best_epoch >= config.patience) {
            early_stopped = true;
            ++epoch;
            break;
        }
    }

    model->params_ = std::move(best_params);
    model->report_.epochs_run = epoch;
    model->report_.final_loss = best_rmse;
    model->report_.early_stopped = early_stopped;
    return model;
}

} // namespace adriana
