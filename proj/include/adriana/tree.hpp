#pragma once

#include "adriana/model.hpp"

#include <cstdint>

namespace adriana {

struct TreeConfig {
    std::size_t max_depth = 4;
    std::size_t min_split = 7;  // minimum samples to attempt a split
    std::size_t min_leaf = 3;   // minimum samples in each child
};

/// CART regression tree: greedy variance-reduction splits, mean leaves.
/// Ties break on lowest feature index, then lowest threshold.
class TreeModel final : public Model {
public:
    struct Node {
        bool is_leaf = true;
        std::size_t feature = 0;
        double threshold = 0.0;
        std::int32_t left = -1;   // node indices
        std::int32_t right = -1;
        double value = 0.0;
    };

    TreeModel(std::vector<Node> nodes, std::size_t window_size, TreeConfig config);
    /// Reconstruction from the flat serialized layout.
    TreeModel(std::span<const double> flat, std::size_t window_size, TreeConfig config);

    ModelKind kind() const override { return ModelKind::Tree; }
    std::size_t window_size() const override { return window_size_; }
    double predict(std::span<const double> window) const override;
    std::vector<double> parameters() const override;
    std::map<std::string, double> hyperparameters() const override;

    const std::vector<Node>& nodes() const { return nodes_; }

private:
    std::vector<Node> nodes_;
    std::size_t window_size_;
    TreeConfig config_;
};

std::unique_ptr<TreeModel> fit_tree(const WindowedDataset& train, const TreeConfig& config);

struct ForestConfig {
    std::size_t estimators = 25;
    std::size_t max_depth = 4;
    std::size_t min_split = 2;
    std::size_t min_leaf = 1;
    bool bootstrap = true;
    std::uint64_t seed = 1;
};

/// Bootstrap-bagged trees with sqrt(features) per-split subsampling.
class ForestModel final : public Model {
public:
    ForestModel(std::vector<TreeModel> trees, std::size_t window_size, ForestConfig config);

    ModelKind kind() const override { return ModelKind::Forest; }
    std::size_t window_size() const override { return window_size_; }
    double predict(std::span<const double> window) const override;
    std::vector<double> parameters() const override;
    std::map<std::string, double> hyperparameters() const override;

    const std::vector<TreeModel>& trees() const { return trees_; }

private:
    std::vector<TreeModel> trees_;
    std::size_t window_size_;
    ForestConfig config_;
};

std::unique_ptr<ForestModel> fit_forest(const WindowedDataset& train,
                                        const ForestConfig& config);

struct BoostConfig {
    std::size_t estimators = 25;
    double learning_rate = 0.1;
    std::size_t max_depth = 1;
};

/// Squared-loss gradient boosting: base prediction is the target mean,
/// each stage fits a shallow tree to the residuals.
class BoostModel final : public Model {
public:
    BoostModel(double base, std::vector<TreeModel> stages, std::size_t window_size,
               BoostConfig config);

    ModelKind kind() const override { return ModelKind::Boost; }
    std::size_t window_size() const override { return window_size_; }
    double predict(std::span<const double> window) const override;
    std::vector<double> parameters() const override;
    std::map<std::string, double> hyperparameters() const override;

private:
    double base_;
    std::vector<TreeModel> stages_;
    std::size_t window_size_;
    BoostConfig config_;
};

std::unique_ptr<BoostModel> fit_boosted(const WindowedDataset& train,
                                        const BoostConfig& config);

} // namespace adriana
