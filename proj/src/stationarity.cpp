#include "adriana/stationarity.hpp"

#include "adriana/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace adriana {

namespace {

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

// MacKinnon approximate asymptotic p-value, constant-only regression,
// single series. Response-surface polynomials in the test statistic.
double mackinnon_p(double tau) {
    constexpr double tau_star = -1.61;
    constexpr double tau_min = -18.83;
    constexpr double tau_max = 2.74;
    if (tau > tau_max) return 1.0;
    if (tau < tau_min) return 0.0;
    double poly;
    if (tau <= tau_star) {
        poly = 2.1659 + tau * (1.4412 + tau * 0.038269);
    } else {
        poly = 1.7339 + tau * (0.93202 + tau * (-0.12745 + tau * -0.010368));
    }
    return normal_cdf(poly);
}

struct OlsFit {
    Eigen::VectorXd coef;
    double rss = 0.0;
    Eigen::MatrixXd xtx_inverse;
    std::size_t n = 0;
};

OlsFit ols(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
    const Eigen::MatrixXd xtx = x.transpose() * x;
    Eigen::LDLT<Eigen::MatrixXd> solver(xtx);
    if (solver.info() != Eigen::Success || !solver.isPositive())
        throw Error(ErrorCode::SingularRegression, "design matrix is rank deficient");
    OlsFit fit;
    fit.coef = solver.solve(x.transpose() * y);
    const Eigen::VectorXd residuals = y - x * fit.coef;
    fit.rss = residuals.squaredNorm();
    fit.xtx_inverse = solver.solve(Eigen::MatrixXd::Identity(x.cols(), x.cols()));
    fit.n = static_cast<std::size_t>(x.rows());
    // LDLT can silently succeed on near-singular inputs
    if (!fit.coef.allFinite())
        throw Error(ErrorCode::SingularRegression, "non-finite coefficients");
    return fit;
}

double gaussian_aic(double rss, std::size_t nobs, std::size_t k_params) {
    const double n = static_cast<double>(nobs);
    const double llf = -0.5 * n * (std::log(2.0 * std::numbers::pi) + std::log(rss / n) + 1.0);
    return -2.0 * llf + 2.0 * static_cast<double>(k_params);
}

// Design matrix for the ADF regression with `lags` lagged differences,
// fitted on the last `nobs` observations of the differenced series.
// Columns: [const, level lag, d-lag 1 .. d-lag `lags`].
void build_adf_design(std::span<const double> y, std::size_t lags, std::size_t nobs,
                      Eigen::MatrixXd& x, Eigen::VectorXd& target) {
    const std::size_t n = y.size();
    const std::size_t n_diff = n - 1;
    x.resize(static_cast<Eigen::Index>(nobs), static_cast<Eigen::Index>(2 + lags));
    target.resize(static_cast<Eigen::Index>(nobs));
    const std::size_t offset = n_diff - nobs;  // first diff index used as target
    for (std::size_t i = 0; i < nobs; ++i) {
        const std::size_t t = offset + i;              // diff index: dy[t] = y[t+1]-y[t]
        target(static_cast<Eigen::Index>(i)) = y[t + 1] - y[t];
        x(static_cast<Eigen::Index>(i), 0) = 1.0;
        x(static_cast<Eigen::Index>(i), 1) = y[t];     // lagged level
        for (std::size_t j = 1; j <= lags; ++j)
            x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(1 + j)) =
                y[t - j + 1] - y[t - j];
    }
}

void require_non_constant(std::span<const double> series) {
    const double first = series.front();
    for (double v : series)
        if (v != first) return;
    throw Error(ErrorCode::ConstantSeries, "series has zero variance");
}

} // namespace

DifferencedSeries difference(std::span<const double> series, std::size_t d) {
    if (series.size() <= d)
        throw Error(ErrorCode::SeriesTooShort,
                    "need more than " + std::to_string(d) + " points");
    DifferencedSeries out;
    std::vector<double> current(series.begin(), series.end());
    for (std::size_t round = 0; round < d; ++round) {
        out.seeds.push_back(current.front());
        std::vector<double> next(current.size() - 1);
        for (std::size_t i = 0; i + 1 < current.size(); ++i) next[i] = current[i + 1] - current[i];
        current = std::move(next);
    }
    out.values = std::move(current);
    return out;
}

std::vector<double> undifference(std::span<const double> diffs,
                                 std::span<const double> seeds) {
    if (seeds.empty()) throw Error(ErrorCode::MissingSeeds, "no seed values");
    std::vector<double> current(diffs.begin(), diffs.end());
    for (std::size_t round = seeds.size(); round-- > 0;) {
        std::vector<double> next(current.size() + 1);
        next[0] = seeds[round];
        for (std::size_t i = 0; i < current.size(); ++i) next[i + 1] = next[i] + current[i];
        current = std::move(next);
    }
    return current;
}

AcfResult acf(std::span<const double> series, std::size_t max_lag) {
    const std::size_t n = series.size();
    if (max_lag >= n) throw Error(ErrorCode::SeriesTooShort, "max_lag >= series length");
    require_non_constant(series);
    double mean = 0.0;
    for (double v : series) mean += v;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double v : series) var += (v - mean) * (v - mean);
    AcfResult result;
    result.confidence_half_width = 1.96 / std::sqrt(static_cast<double>(n));
    result.values.resize(max_lag + 1);
    result.values[0] = 1.0;
    for (std::size_t k = 1; k <= max_lag; ++k) {
        double cov = 0.0;
        for (std::size_t t = k; t < n; ++t) cov += (series[t] - mean) * (series[t - k] - mean);
        result.values[k] = cov / var;
    }
    return result;
}

std::vector<double> pacf(std::span<const double> series, std::size_t max_lag) {
    const auto rho = acf(series, max_lag).values;
    std::vector<double> out(max_lag + 1, 0.0);
    out[0] = 1.0;
    if (max_lag == 0) return out;
    // Durbin-Levinson
    std::vector<double> phi_prev(max_lag + 1, 0.0);
    std::vector<double> phi(max_lag + 1, 0.0);
    phi_prev[1] = rho[1];
    out[1] = rho[1];
    double err = 1.0 - rho[1] * rho[1];
    for (std::size_t k = 2; k <= max_lag; ++k) {
        double num = rho[k];
        for (std::size_t j = 1; j < k; ++j) num -= phi_prev[j] * rho[k - j];
        const double reflection = err > 0.0 ? num / err : 0.0;
        phi[k] = reflection;
        for (std::size_t j = 1; j < k; ++j) phi[j] = phi_prev[j] - reflection * phi_prev[k - j];
        err *= (1.0 - reflection * reflection);
        out[k] = reflection;
        phi_prev = phi;
    }
    return out;
}

AdfResult adf_test(std::span<const double> series, std::optional<std::size_t> max_lag) {
    const std::size_t n = series.size();
    if (n < 20) throw Error(ErrorCode::SeriesTooShort, "need at least 20 points");
    require_non_constant(series);
    const std::size_t n_diff = n - 1;

    std::size_t maxlag = max_lag.value_or(static_cast<std::size_t>(
        std::ceil(12.0 * std::pow(static_cast<double>(n) / 100.0, 0.25))));
    // Schwert's rule is capped so the trimmed regression keeps enough
    // observations: n/2 minus the trend term minus one.
    const std::size_t cap = n / 2 >= 2 ? n / 2 - 2 : 0;
    maxlag = std::min(maxlag, cap);

    // Lag selection: all candidate regressions share the maxlag-trimmed
    // sample so their AICs are comparable.
    const std::size_t nobs_sel = n_diff - maxlag;
    Eigen::MatrixXd x;
    Eigen::VectorXd target;
    build_adf_design(series, maxlag, nobs_sel, x, target);
    std::size_t best_lag = 0;
    double best_aic = std::numeric_limits<double>::infinity();
    for (std::size_t lag = 0; lag <= maxlag; ++lag) {
        const Eigen::MatrixXd sub = x.leftCols(static_cast<Eigen::Index>(2 + lag));
        const OlsFit fit = ols(sub, target);
        const double aic = gaussian_aic(fit.rss, nobs_sel, 2 + lag);
        if (aic < best_aic) {
            best_aic = aic;
            best_lag = lag;
        }
    }

    // Final regression re-trimmed to the chosen lag only.
    const std::size_t nobs = n_diff - best_lag;
    build_adf_design(series, best_lag, nobs, x, target);
    const OlsFit fit = ols(x, target);
    const std::size_t k_params = 2 + best_lag;
    const double sigma2 = fit.rss / static_cast<double>(nobs - k_params);
    const double se = std::sqrt(sigma2 * fit.xtx_inverse(1, 1));
    if (!(se > 0.0) || !std::isfinite(se))
        throw Error(ErrorCode::SingularRegression, "zero standard error");

    AdfResult result;
    result.statistic = fit.coef(1) / se;
    result.p_value = mackinnon_p(result.statistic);
    result.lags_used = best_lag;
    result.reject_unit_root_at_5pct = result.p_value < 0.05;
    return result;
}

ScalerParams minmax_fit(std::span<const double> series) {
    if (series.empty()) throw Error(ErrorCode::SeriesTooShort, "empty series");
    const auto [lo, hi] = std::minmax_element(series.begin(), series.end());
    if (*lo == *hi) throw Error(ErrorCode::DegenerateRange, "max equals min");
    return ScalerParams{*lo, *hi};
}

std::vector<double> minmax_apply(std::span<const double> series, const ScalerParams& params) {
    if (params.max <= params.min) throw Error(ErrorCode::DegenerateRange, "max <= min");
    std::vector<double> out(series.size());
    const double range = params.max - params.min;
    for (std::size_t i = 0; i < series.size(); ++i) out[i] = (series[i] - params.min) / range;
    return out;
}

std::vector<double> minmax_invert(std::span<const double> series, const ScalerParams& params) {
    if (params.max <= params.min) throw Error(ErrorCode::DegenerateRange, "max <= min");
    std::vector<double> out(series.size());
    const double range = params.max - params.min;
    for (std::size_t i = 0; i < series.size(); ++i) out[i] = series[i] * range + params.min;
    return out;
}

WindowedDataset make_windows(std::span<const double> series, std::size_t window_size) {
    if (window_size == 0 || series.size() <= window_size)
        throw Error(ErrorCode::SeriesTooShort, "series length must exceed window size");
    WindowedDataset dataset;
    dataset.window_size = window_size;
    const std::size_t count = series.size() - window_size;
    dataset.inputs.reserve(count);
    dataset.targets.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        dataset.inputs.emplace_back(series.begin() + static_cast<std::ptrdiff_t>(i),
                                    series.begin() + static_cast<std::ptrdiff_t>(i + window_size));
        dataset.targets.push_back(series[i + window_size]);
    }
    return dataset;
}

std::pair<WindowedDataset, WindowedDataset> chrono_split(const WindowedDataset& dataset,
                                                         double train_fraction) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw Error(ErrorCode::InvalidConfig, "train fraction must lie in (0,1)");
    const std::size_t n = dataset.size();
    const std::size_t n_train =
        static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(n)));
    if (n_train == 0 || n_train == n)
        throw Error(ErrorCode::EmptyPartition, "split leaves an empty partition");
    return {slice(dataset, 0, n_train), slice(dataset, n_train, n)};
}

std::vector<Fold> forward_chain_folds(std::size_t n_samples, std::size_t k) {
    if (k == 0 || n_samples < 2 * k)
        throw Error(ErrorCode::TooFewSamples,
                    "need at least 2k samples for " + std::to_string(k) + " folds");
    std::vector<Fold> folds;
    folds.reserve(k);
    for (std::size_t j = 1; j <= k; ++j) {
        Fold fold;
        fold.train_begin = 0;
        fold.train_end = j * n_samples / (k + 1);
        fold.valid_begin = fold.train_end;
        fold.valid_end = (j + 1) * n_samples / (k + 1);
        if (fold.train_end == 0 || fold.valid_end <= fold.valid_begin)
            throw Error(ErrorCode::TooFewSamples, "fold " + std::to_string(j) + " is empty");
        folds.push_back(fold);
    }
    return folds;
}

WindowedDataset slice(const WindowedDataset& dataset, std::size_t begin, std::size_t end) {
    WindowedDataset out;
    out.window_size = dataset.window_size;
    out.inputs.assign(dataset.inputs.begin() + static_cast<std::ptrdiff_t>(begin),
                      dataset.inputs.begin() + static_cast<std::ptrdiff_t>(end));
    out.targets.assign(dataset.targets.begin() + static_cast<std::ptrdiff_t>(begin),
                       dataset.targets.begin() + static_cast<std::ptrdiff_t>(end));
    return out;
}

} // namespace adriana
