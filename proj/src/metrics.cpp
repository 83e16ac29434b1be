#include "adriana/metrics.hpp"

#include "adriana/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace adriana {

namespace {

void check_lengths(std::span<const double> actual, std::span<const double> predicted) {
    if (actual.empty() || actual.size() != predicted.size())
        throw Error(ErrorCode::LengthMismatch,
                    std::to_string(actual.size()) + " vs " + std::to_string(predicted.size()));
}

// Average rank with ties sharing the mean of their positions.
std::vector<double> ranks_of(const std::vector<double>& keys) {
    const std::size_t n = keys.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && keys[order[j + 1]] == keys[order[i]]) ++j;
        const double shared = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = shared;
        i = j + 1;
    }
    return ranks;
}

} // namespace

double rmse(std::span<const double> actual, std::span<const double> predicted) {
    check_lengths(actual, predicted);
    double sum = 0.0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        const double err = actual[i] - predicted[i];
        sum += err * err;
    }
    return std::sqrt(sum / static_cast<double>(actual.size()));
}

double mae(std::span<const double> actual, std::span<const double> predicted) {
    check_lengths(actual, predicted);
    double sum = 0.0;
    for (std::size_t i = 0; i < actual.size(); ++i) sum += std::abs(actual[i] - predicted[i]);
    return sum / static_cast<double>(actual.size());
}

double r2(std::span<const double> actual, std::span<const double> predicted) {
    check_lengths(actual, predicted);
    double mean = 0.0;
    for (double v : actual) mean += v;
    mean /= static_cast<double>(actual.size());
    double ss_tot = 0.0;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        ss_tot += (actual[i] - mean) * (actual[i] - mean);
        const double err = actual[i] - predicted[i];
        ss_res += err * err;
    }
    if (ss_tot == 0.0) throw Error(ErrorCode::ConstantActuals, "actuals have zero variance");
    return 1.0 - ss_res / ss_tot;
}

std::vector<RankedModel> rank_models(const std::vector<EvalReport>& reports) {
    if (reports.empty()) throw Error(ErrorCode::LengthMismatch, "no reports");
    for (const auto& report : reports)
        if (report.scale != reports.front().scale)
            throw Error(ErrorCode::MixedScales, "reports mix raw and normalized metrics");

    const std::size_t n = reports.size();
    std::vector<double> rmse_keys(n), mae_keys(n), r2_keys(n);
    for (std::size_t i = 0; i < n; ++i) {
        rmse_keys[i] = reports[i].rmse;
        mae_keys[i] = reports[i].mae;
        r2_keys[i] = -reports[i].r2;  // descending
    }
    const auto rank_rmse = ranks_of(rmse_keys);
    const auto rank_mae = ranks_of(mae_keys);
    const auto rank_r2 = ranks_of(r2_keys);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> mean_rank(n);
    for (std::size_t i = 0; i < n; ++i)
        mean_rank[i] = (rank_rmse[i] + rank_mae[i] + rank_r2[i]) / 3.0;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (mean_rank[a] != mean_rank[b]) return mean_rank[a] < mean_rank[b];
        return reports[a].rmse < reports[b].rmse;
    });

    std::vector<RankedModel> out;
    out.reserve(n);
    for (std::size_t pos = 0; pos < n; ++pos) {
        const std::size_t i = order[pos];
        out.push_back({reports[i].model_name, static_cast<int>(n - pos), mean_rank[i]});
    }
    return out;
}

} // namespace adriana
