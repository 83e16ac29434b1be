#pragma once

#include "adriana/stationarity.hpp"

#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace adriana {

enum class ModelKind {
    Mlp,
    Gru,
    Lstm,
    Linear,
    Ar,
    Arima110,
    Tree,
    Forest,
    Boost,
    SvrLinear,
};

const char* to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& name);

/// Model family plus its hyperparameters, keyed by name.
struct ModelSpec {
    ModelKind kind = ModelKind::Lstm;
    std::map<std::string, double> hyper;

    double get(const std::string& key, double fallback) const {
        const auto it = hyper.find(key);
        return it == hyper.end() ? fallback : it->second;
    }
};

struct TrainingReport {
    std::size_t epochs_run = 0;
    double final_loss = 0.0;
    bool early_stopped = false;
};

/// The transforms a forecast must invert to land on the original scale.
/// `integration_tail[j]` is the last value of the j-times-differenced
/// series; empty means no differencing was applied.
struct ScaleTrace {
    std::optional<ScalerParams> scaler;
    std::vector<double> integration_tail;
};

inline constexpr std::size_t kMaxForecastHorizon = 500;

struct Forecast {
    std::size_t horizon = 0;
    std::vector<double> values;  // original (inverted) scale
    ScaleTrace scale_trace;
};

/// A trained forecaster over fixed-width input windows.
class Model {
public:
    virtual ~Model() = default;

    virtual ModelKind kind() const = 0;
    virtual std::size_t window_size() const = 0;
    virtual double predict(std::span<const double> window) const = 0;

    /// Flat serializable parameter vector.
    virtual std::vector<double> parameters() const = 0;
    virtual std::map<std::string, double> hyperparameters() const = 0;

    const TrainingReport& training_report() const { return report_; }

    void save(std::ostream& out) const;

protected:
    TrainingReport report_;

    void check_window(std::span<const double> window) const;
};

/// Reads the versioned text layout written by Model::save.
std::unique_ptr<Model> load_model(std::istream& in);

/// Multi-step forecast: each prediction is appended to the window, then
/// the whole path is inverted through the scale trace.
Forecast recursive_forecast(const Model& model, std::span<const double> last_window,
                            std::size_t horizon, const ScaleTrace& trace);

/// Applies only the inversion half of recursive_forecast to a path that
/// is already on the transformed scale.
std::vector<double> invert_scale(std::span<const double> values, const ScaleTrace& trace);

/// Predicts from the trailing model.window_size() values of a window that
/// may be wider than the model needs (e.g. ARIMA inside a width-9 pipeline).
double predict_tail(const Model& model, std::span<const double> window);

} // namespace adriana
