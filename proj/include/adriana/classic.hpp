#pragma once

#include "adriana/model.hpp"

namespace adriana {

/// Linear predictor over the input window: y = w . x + intercept.
/// Covers OLS lag-1 regression, AR(p) and the linear eps-SVR.
class LinearModel final : public Model {
public:
    LinearModel(ModelKind kind, std::vector<double> weights, double intercept,
                std::size_t window_size);

    ModelKind kind() const override { return kind_; }
    std::size_t window_size() const override { return window_size_; }
    double predict(std::span<const double> window) const override;
    std::vector<double> parameters() const override;
    std::map<std::string, double> hyperparameters() const override;

    /// Weight on the most recent lag (the single coefficient for lag-1
    /// regression).
    double coefficient() const { return weights_.back(); }
    double intercept() const { return intercept_; }
    std::span<const double> weights() const { return weights_; }

    TrainingReport& mutable_report() { return report_; }

private:
    ModelKind kind_;
    std::vector<double> weights_;  // ordered oldest lag first, like the window
    double intercept_;
    std::size_t window_size_;
};

/// OLS on the window's last element only (lag-1 feature).
std::unique_ptr<LinearModel> fit_linear(const WindowedDataset& train);

/// OLS autoregression of order p on a plain series.
std::unique_ptr<LinearModel> fit_ar(std::span<const double> series, std::size_t p);

/// AR(1) on the first-differenced series; predictions reintegrate.
class Arima110Model final : public Model {
public:
    Arima110Model(double phi, double intercept, double aic);

    ModelKind kind() const override { return ModelKind::Arima110; }
    std::size_t window_size() const override { return 2; }
    /// window = (x_{t-1}, x_t); returns x_t + c + phi * (x_t - x_{t-1}).
    double predict(std::span<const double> window) const override;
    std::vector<double> parameters() const override;
    std::map<std::string, double> hyperparameters() const override;

    double phi() const { return phi_; }
    double intercept() const { return intercept_; }
    /// n*ln(RSS/n) + 2k with k = 2 (phi, intercept).
    double aic() const { return aic_; }

private:
    double phi_, intercept_, aic_;
};

std::unique_ptr<Arima110Model> fit_arima_110(std::span<const double> series);

struct SvrConfig {
    double epsilon = 0.6;
    double l2_penalty = 1e-4;
    std::size_t iterations = 2000;
    double initial_step = 0.5;
};

/// Linear eps-insensitive regression by deterministic projected
/// subgradient descent with a diminishing step schedule.
std::unique_ptr<LinearModel> fit_svr_linear(const WindowedDataset& train,
                                            const SvrConfig& config = {});

} // namespace adriana
