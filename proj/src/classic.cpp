#include "adriana/classic.hpp"

#include "adriana/error.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace adriana {

namespace {

// OLS via normal equations; throws SingularDesign on rank deficiency.
Eigen::VectorXd ols_solve(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
    const Eigen::MatrixXd xtx = x.transpose() * x;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(xtx);
    if (!lu.isInvertible())
        throw Error(ErrorCode::SingularDesign, "design matrix is rank deficient");
    return lu.solve(x.transpose() * y);
}

} // namespace

LinearModel::LinearModel(ModelKind kind, std::vector<double> weights, double intercept,
                         std::size_t window_size)
    : kind_(kind), weights_(std::move(weights)), intercept_(intercept),
      window_size_(window_size) {}

double LinearModel::predict(std::span<const double> window) const {
    check_window(window);
    double value = intercept_;
    // weights cover the trailing |weights| lags of the window
    const std::size_t offset = window.size() - weights_.size();
    for (std::size_t i = 0; i < weights_.size(); ++i) value += weights_[i] * window[offset + i];
    return value;
}

std::vector<double> LinearModel::parameters() const {
    std::vector<double> out = weights_;
    out.push_back(intercept_);
    return out;
}

std::map<std::string, double> LinearModel::hyperparameters() const {
    return {{"window_size", static_cast<double>(window_size_)},
            {"n_weights", static_cast<double>(weights_.size())}};
}

std::unique_ptr<LinearModel> fit_linear(const WindowedDataset& train) {
    if (train.size() < 2) throw Error(ErrorCode::EmptyTrainingSet, "need at least 2 samples");
    const auto n = static_cast<Eigen::Index>(train.size());
    Eigen::MatrixXd x(n, 2);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        x(i, 0) = 1.0;
        x(i, 1) = train.inputs[static_cast<std::size_t>(i)].back();  // lag-1 feature
        y(i) = train.targets[static_cast<std::size_t>(i)];
    }
    const Eigen::VectorXd coef = ols_solve(x, y);
    auto model = std::make_unique<LinearModel>(ModelKind::Linear,
                                               std::vector<double>{coef(1)}, coef(0),
                                               train.window_size);
    const Eigen::VectorXd residuals = y - x * coef;
    model->mutable_report().final_loss =
        std::sqrt(residuals.squaredNorm() / static_cast<double>(n));
    return model;
}

std::unique_ptr<LinearModel> fit_ar(std::span<const double> series, std::size_t p) {
    if (p == 0) throw Error(ErrorCode::InvalidConfig, "lag order must be positive");
    if (series.size() <= 2 * p)
        throw Error(ErrorCode::SeriesTooShort, "need more than 2p points");
    const auto n = static_cast<Eigen::Index>(series.size() - p);
    Eigen::MatrixXd x(n, static_cast<Eigen::Index>(p + 1));
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        x(i, 0) = 1.0;
        // oldest lag first, matching window order
        for (std::size_t j = 0; j < p; ++j)
            x(i, static_cast<Eigen::Index>(1 + j)) = series[static_cast<std::size_t>(i) + j];
        y(i) = series[static_cast<std::size_t>(i) + p];
    }
    const Eigen::VectorXd coef = ols_solve(x, y);
    std::vector<double> weights(p);
    for (std::size_t j = 0; j < p; ++j) weights[j] = coef(static_cast<Eigen::Index>(1 + j));
    auto model = std::make_unique<LinearModel>(ModelKind::Ar, std::move(weights), coef(0), p);
    const Eigen::VectorXd residuals = y - x * coef;
    model->mutable_report().final_loss =
        std::sqrt(residuals.squaredNorm() / static_cast<double>(n));
    return model;
}

Arima110Model::Arima110Model(double phi, double intercept, double aic)
    : phi_(phi), intercept_(intercept), aic_(aic) {}

double Arima110Model::predict(std::span<const double> window) const {
    check_window(window);
    const double last_diff = window[1] - window[0];
    return window[1] + intercept_ + phi_ * last_diff;
}

std::vector<double> Arima110Model::parameters() const { return {phi_, intercept_, aic_}; }

std::map<std::string, double> Arima110Model::hyperparameters() const {
    return {{"p", 1.0}, {"d", 1.0}, {"q", 0.0}};
}

std::unique_ptr<Arima110Model> fit_arima_110(std::span<const double> series) {
    if (series.size() < 10) throw Error(ErrorCode::SeriesTooShort, "need at least 10 points");
    const DifferencedSeries diffs = difference(series, 1);
    const auto ar = fit_ar(diffs.values, 1);
    // residual sum of squares on the differenced scale
    double rss = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 1; i < diffs.values.size(); ++i) {
        const double fitted = ar->intercept() + ar->coefficient() * diffs.values[i - 1];
        const double err = diffs.values[i] - fitted;
        rss += err * err;
        ++n;
    }
    const double aic =
        static_cast<double>(n) * std::log(rss / static_cast<double>(n)) + 2.0 * 2.0;
    return std::make_unique<Arima110Model>(ar->coefficient(), ar->intercept(), aic);
}

std::unique_ptr<LinearModel> fit_svr_linear(const WindowedDataset& train,
                                            const SvrConfig& config) {
    if (train.size() == 0) throw Error(ErrorCode::EmptyTrainingSet, "no samples");
    const std::size_t w = train.window_size;
    const std::size_t n = train.size();

    std::vector<double> weights(w, 0.0);
    double intercept = 0.0;

    auto loss_of = [&](const std::vector<double>& wt, double b) {
        double loss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double pred = b;
            for (std::size_t j = 0; j < w; ++j) pred += wt[j] * train.inputs[i][j];
            const double slack = std::abs(train.targets[i] - pred) - config.epsilon;
            if (slack > 0.0) loss += slack;
        }
        loss /= static_cast<double>(n);
        for (double v : wt) loss += config.l2_penalty * v * v;
        return loss;
    };

    const double initial_loss = loss_of(weights, intercept);
    std::vector<double> grad(w);
    std::vector<double> best_weights = weights;
    double best_intercept = intercept;
    double best_loss = initial_loss;

    for (std::size_t it = 0; it < config.iterations; ++it) {
        std::fill(grad.begin(), grad.end(), 0.0);
        double grad_b = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double pred = intercept;
            for (std::size_t j = 0; j < w; ++j) pred += weights[j] * train.inputs[i][j];
            const double err = pred - train.targets[i];
            if (std::abs(err) <= config.epsilon) continue;
            const double sign = err > 0.0 ? 1.0 : -1.0;
            for (std::size_t j = 0; j < w; ++j) grad[j] += sign * train.inputs[i][j];
            grad_b += sign;
        }
        const double scale = 1.0 / static_cast<double>(n);
        const double step =
            config.initial_step / (1.0 + static_cast<double>(it) * 0.01);
        for (std::size_t j = 0; j < w; ++j) {
            grad[j] = grad[j] * scale + 2.0 * config.l2_penalty * weights[j];
            weights[j] -= step * grad[j];
        }
        intercept -= step * grad_b * scale;
        if (!std::isfinite(intercept))
            throw Error(ErrorCode::NonFiniteLoss, "SVR descent diverged");
        const double loss = loss_of(weights, intercept);
        if (!std::isfinite(loss)) throw Error(ErrorCode::NonFiniteLoss, "SVR loss non-finite");
        if (loss < best_loss) {
            best_loss = loss;
            best_weights = weights;
            best_intercept = intercept;
        }
    }

    auto model = std::make_unique<LinearModel>(ModelKind::SvrLinear, std::move(best_weights),
                                               best_intercept, w);
    model->mutable_report().final_loss = best_loss;
    model->mutable_report().epochs_run = config.iterations;
    return model;
}

} // namespace adriana
