#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace adriana {

struct AdfResult {
    double statistic = 0.0;
    double p_value = 1.0;
    std::size_t lags_used = 0;
    bool reject_unit_root_at_5pct = false;
};

struct ScalerParams {
    double min = 0.0;
    double max = 1.0;
};

struct WindowedDataset {
    std::size_t window_size = 0;
    std::vector<std::vector<double>> inputs;
    std::vector<double> targets;

    std::size_t size() const { return targets.size(); }
};

struct DifferencedSeries {
    std::vector<double> values;
    /// The d values discarded by differencing, oldest first; required to
    /// invert the transform.
    std::vector<double> seeds;
};

/// First-difference applied d times. Requires series.len > d.
DifferencedSeries difference(std::span<const double> series, std::size_t d);

/// Exact inverse of difference(); undifference(difference(x, d)) == x.
std::vector<double> undifference(std::span<const double> diffs,
                                 std::span<const double> seeds);

struct AcfResult {
    std::vector<double> values;     // values[0] == 1
    double confidence_half_width;   // 1.96 / sqrt(n)
};

/// Autocorrelation with mean-centered series and biased (1/n) normalization.
AcfResult acf(std::span<const double> series, std::size_t max_lag);

/// Partial autocorrelation via the Durbin-Levinson recursion.
std::vector<double> pacf(std::span<const double> series, std::size_t max_lag);

/// Augmented Dickey-Fuller unit-root test, constant-only regression.
/// Lag order chosen by AIC up to max_lag (default floor(12*(n/100)^0.25));
/// p-value from the MacKinnon approximate response surface.
AdfResult adf_test(std::span<const double> series,
                   std::optional<std::size_t> max_lag = std::nullopt);

ScalerParams minmax_fit(std::span<const double> series);
std::vector<double> minmax_apply(std::span<const double> series, const ScalerParams& params);
std::vector<double> minmax_invert(std::span<const double> series, const ScalerParams& params);

/// inputs[i] = series[i..i+w), targets[i] = series[i+w].
WindowedDataset make_windows(std::span<const double> series, std::size_t window_size);

/// Chronological split: first floor(fraction*n) samples train, rest test.
std::pair<WindowedDataset, WindowedDataset> chrono_split(const WindowedDataset& dataset,
                                                         double train_fraction);

struct Fold {
    std::size_t train_begin = 0;
    std::size_t train_end = 0;  // exclusive
    std::size_t valid_begin = 0;
    std::size_t valid_end = 0;  // exclusive
};

/// Forward-chaining folds: fold j trains on the first (j+1)*n/(k+1)
/// samples and validates on the next block. Validation always postdates
/// training.
std::vector<Fold> forward_chain_folds(std::size_t n_samples, std::size_t k);

WindowedDataset slice(const WindowedDataset& dataset, std::size_t begin, std::size_t end);

} // namespace adriana
