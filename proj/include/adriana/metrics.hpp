#pragma once

#include <span>
#include <string>
#include <vector>

namespace adriana {

enum class MetricScale { Raw, Normalized };

struct EvalReport {
    std::string model_name;
    double rmse = 0.0;
    double mae = 0.0;
    double r2 = 0.0;
    MetricScale scale = MetricScale::Raw;
};

double rmse(std::span<const double> actual, std::span<const double> predicted);
double mae(std::span<const double> actual, std::span<const double> predicted);
double r2(std::span<const double> actual, std::span<const double> predicted);

struct RankedModel {
    std::string model_name;
    int score = 0;  // n for the best model down to 1
    double mean_rank = 0.0;
};

/// Composite ranking: per-metric ranks (rmse asc, mae asc, r2 desc)
/// averaged; ties broken by lower rmse. All reports must share a scale.
std::vector<RankedModel> rank_models(const std::vector<EvalReport>& reports);

} // namespace adriana
