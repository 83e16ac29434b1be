#pragma once

#include "adriana/model.hpp"
#include "adriana/rng.hpp"

#include <cstdint>

namespace adriana {

/// Fixed topology: one input, three hidden layers of `neurons` units,
/// one linear output unit. Dense paths use ReLU; recurrent layers use
/// their gate activations.
struct NetworkConfig {
    ModelKind kind = ModelKind::Lstm;  // Mlp, Gru or Lstm
    std::size_t window_size = 9;
    std::size_t neurons = 58;
    double dropout_rate = 0.0;     // inverted dropout, training only
    double learning_rate = 1e-3;   // Adam step size
    std::size_t batch_size = 32;
    std::size_t max_epochs = 200;
    std::size_t patience = 10;     // early-stopping epochs
    std::uint64_t seed = 1;

    void validate() const;
};

NetworkConfig network_config_from_spec(const ModelSpec& spec);

/// Exact trainable-parameter count for a neural spec:
/// dense (i->o) = i*o + o; LSTM layer = 4(h(i+h)+h); GRU = 3(h(i+h)+h).
std::size_t count_params(const ModelSpec& spec);

class NeuralModel final : public Model {
public:
    /// Fresh model with seeded uniform +-sqrt(6/(fan_in+fan_out)) weights.
    explicit NeuralModel(const NetworkConfig& config);
    /// Reconstruction from a serialized parameter vector.
    NeuralModel(const NetworkConfig& config, std::vector<double> params);

    ModelKind kind() const override { return config_.kind; }
    std::size_t window_size() const override { return config_.window_size; }
    double predict(std::span<const double> window) const override;
    std::vector<double> parameters() const override { return params_; }
    std::map<std::string, double> hyperparameters() const override;

    const NetworkConfig& config() const { return config_; }

    /// Mean-squared-error loss and its analytic gradient over a batch,
    /// with dropout disabled. Exposed for gradient verification.
    std::pair<double, std::vector<double>> loss_and_gradient(
        const WindowedDataset& batch, std::span<const std::size_t> indices) const;

    friend std::unique_ptr<NeuralModel> fit_neural(const NetworkConfig& config,
                                                   const WindowedDataset& train,
                                                   const WindowedDataset& valid);

private:
    NetworkConfig config_;
    std::vector<double> params_;

    std::pair<double, std::vector<double>> loss_grad_impl(
        const WindowedDataset& batch, std::span<const std::size_t> indices,
        const std::vector<std::vector<double>>* dropout_masks) const;
};

/// Mini-batch Adam training with early stopping on validation RMSE.
/// Returns the best-validation parameter snapshot. `valid` may be empty,
/// in which case training RMSE drives early stopping.
std::unique_ptr<NeuralModel> fit_neural(const NetworkConfig& config,
                                        const WindowedDataset& train,
                                        const WindowedDataset& valid);

/// First-order Adam optimizer over a flat parameter vector.
class Adam {
public:
    Adam(std::size_t dimension, double learning_rate, double beta1 = 0.9,
         double beta2 = 0.999, double epsilon = 1e-8);

    void step(std::vector<double>& params, std::span<const double> gradient);

private:
    double learning_rate_, beta1_, beta2_, epsilon_;
    std::vector<double> m_, v_;
    std::size_t t_ = 0;
};

} // namespace adriana
