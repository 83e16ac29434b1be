#include "adriana/tree.hpp"

#include "adriana/error.hpp"
#include "adriana/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace adriana {

namespace {

struct SplitChoice {
    bool found = false;
    std::size_t feature = 0;
    double threshold = 0.0;
    double score = 0.0;  // variance reduction, higher is better
};

double sum_of(const WindowedDataset& data, const std::vector<std::size_t>& idx) {
    double s = 0.0;
    for (std::size_t i : idx) s += data.targets[i];
    return s;
}

double sse_of(const WindowedDataset& data, const std::vector<std::size_t>& idx) {
    const double mean = sum_of(data, idx) / static_cast<double>(idx.size());
    double sse = 0.0;
    for (std::size_t i : idx) {
        const double d = data.targets[i] - mean;
        sse += d * d;
    }
    return sse;
}

// Best split over the given features: maximal SSE reduction, ties broken
// by lowest feature index then lowest threshold. Thresholds are midpoints
// between consecutive distinct feature values.
SplitChoice best_split(const WindowedDataset& data, const std::vector<std::size_t>& idx,
                       const std::vector<std::size_t>& features, std::size_t min_leaf) {
    SplitChoice best;
    const double parent_sse = sse_of(data, idx);
    std::vector<std::size_t> order;
    for (std::size_t feature : features) {
        order = idx;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return data.inputs[a][feature] < data.inputs[b][feature];
        });
        // prefix sums over the sorted order
        double left_sum = 0.0, left_sq = 0.0;
        double total_sum = 0.0, total_sq = 0.0;
        for (std::size_t i : order) {
            total_sum += data.targets[i];
            total_sq += data.targets[i] * data.targets[i];
        }
        const std::size_t n = order.size();
        for (std::size_t k = 0; k + 1 < n; ++k) {
            const double y = data.targets[order[k]];
            left_sum += y;
            left_sq += y * y;
            const double xv = data.inputs[order[k]][feature];
            const double xn = data.inputs[order[k + 1]][feature];
            if (xv == xn) continue;
            const std::size_t n_left = k + 1;
            const std::size_t n_right = n - n_left;
            if (n_left < min_leaf || n_right < min_leaf) continue;
            const double right_sum = total_sum - left_sum;
            const double right_sq = total_sq - left_sq;
            const double child_sse =
                (left_sq - left_sum * left_sum / static_cast<double>(n_left)) +
                (right_sq - right_sum * right_sum / static_cast<double>(n_right));
            const double score = parent_sse - child_sse;
            const double threshold = 0.5 * (xv + xn);
            const bool better =
                !best.found || score > best.score ||
                (score == best.score &&
                 (feature < best.feature ||
                  (feature == best.feature && threshold < best.threshold)));
            if (better && score > 0.0) {
                best.found = true;
                best.feature = feature;
                best.threshold = threshold;
                best.score = score;
            }
        }
    }
    return best;
}

class TreeBuilder {
public:
    TreeBuilder(const WindowedDataset& data, const TreeConfig& config, Rng* rng,
                std::size_t features_per_split)
        : data_(data), config_(config), rng_(rng),
          features_per_split_(features_per_split) {}

    std::vector<TreeModel::Node> build(std::vector<std::size_t> idx) {
        nodes_.clear();
        grow(std::move(idx), 0);
        return std::move(nodes_);
    }

private:
    const WindowedDataset& data_;
    TreeConfig config_;
    Rng* rng_;  // null -> use all features
    std::size_t features_per_split_;
    std::vector<TreeModel::Node> nodes_;

    std::int32_t grow(std::vector<std::size_t> idx, std::size_t depth) {
        const auto node_id = static_cast<std::int32_t>(nodes_.size());
        nodes_.emplace_back();
        nodes_[static_cast<std::size_t>(node_id)].value =
            sum_of(data_, idx) / static_cast<double>(idx.size());
        if (depth >= config_.max_depth || idx.size() < config_.min_split) return node_id;

        std::vector<std::size_t> features(data_.window_size);
        std::iota(features.begin(), features.end(), 0);
        if (rng_ && features_per_split_ < features.size()) {
            rng_->shuffle(features);
            features.resize(features_per_split_);
            std::sort(features.begin(), features.end());
        }
        const SplitChoice split = best_split(data_, idx, features, config_.min_leaf);
        if (!split.found) return node_id;

        std::vector<std::size_t> left, right;
        for (std::size_t i : idx)
            (data_.inputs[i][split.feature] <= split.threshold ? left : right).push_back(i);
        idx.clear();
        idx.shrink_to_fit();

        const std::int32_t left_id = grow(std::move(left), depth + 1);
        const std::int32_t right_id = grow(std::move(right), depth + 1);
        auto& node = nodes_[static_cast<std::size_t>(node_id)];
        node.is_leaf = false;
        node.feature = split.feature;
        node.threshold = split.threshold;
        node.left = left_id;
        node.right = right_id;
        return node_id;
    }
};

double predict_tree(const std::vector<TreeModel::Node>& nodes,
                    std::span<const double> window) {
    std::size_t at = 0;
    while (!nodes[at].is_leaf)
        at = static_cast<std::size_t>(window[nodes[at].feature] <= nodes[at].threshold
                                          ? nodes[at].left
                                          : nodes[at].right);
    return nodes[at].value;
}

// Flat layout per node: [is_leaf, feature, threshold, left, right, value]
constexpr std::size_t kFieldsPerNode = 6;

std::vector<double> flatten_nodes(const std::vector<TreeModel::Node>& nodes) {
    std::vector<double> out;
    out.reserve(nodes.size() * kFieldsPerNode);
    for (const auto& node : nodes) {
        out.push_back(node.is_leaf ? 1.0 : 0.0);
        out.push_back(static_cast<double>(node.feature));
        out.push_back(node.threshold);
        out.push_back(static_cast<double>(node.left));
        out.push_back(static_cast<double>(node.right));
        out.push_back(node.value);
    }
    return out;
}

std::vector<TreeModel::Node> unflatten_nodes(std::span<const double> flat) {
    if (flat.size() % kFieldsPerNode != 0)
        throw Error(ErrorCode::LengthMismatch, "bad tree parameter vector");
    std::vector<TreeModel::Node> nodes(flat.size() / kFieldsPerNode);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const double* f = flat.data() + i * kFieldsPerNode;
        nodes[i].is_leaf = f[0] != 0.0;
        nodes[i].feature = static_cast<std::size_t>(f[1]);
        nodes[i].threshold = f[2];
        nodes[i].left = static_cast<std::int32_t>(f[3]);
        nodes[i].right = static_cast<std::int32_t>(f[4]);
        nodes[i].value = f[5];
    }
    return nodes;
}

} // namespace

TreeModel::TreeModel(std::vector<Node> nodes, std::size_t window_size, TreeConfig config)
    : nodes_(std::move(nodes)), window_size_(window_size), config_(config) {}

TreeModel::TreeModel(std::span<const double> flat, std::size_t window_size, TreeConfig config)
    : nodes_(unflatten_nodes(flat)), window_size_(window_size), config_(config) {}

double TreeModel::predict(std::span<const double> window) const {
    check_window(window);
    return predict_tree(nodes_, window);
}

std::vector<double> TreeModel::parameters() const { return flatten_nodes(nodes_); }

std::map<std::string, double> TreeModel::hyperparameters() const {
    return {{"window_size", static_cast<double>(window_size_)},
            {"max_depth", static_cast<double>(config_.max_depth)},
            {"min_split", static_cast<double>(config_.min_split)},
            {"min_leaf", static_cast<double>(config_.min_leaf)}};
}

std::unique_ptr<TreeModel> fit_tree(const WindowedDataset& train, const TreeConfig& config) {
    if (train.size() == 0) throw Error(ErrorCode::EmptyTrainingSet, "no samples");
    std::vector<std::size_t> idx(train.size());
    std::iota(idx.begin(), idx.end(), 0);
    TreeBuilder builder(train, config, nullptr, train.window_size);
    return std::make_unique<TreeModel>(builder.build(std::move(idx)), train.window_size,
                                       config);
}

ForestModel::ForestModel(std::vector<TreeModel> trees, std::size_t window_size,
                         ForestConfig config)
    : trees_(std::move(trees)), window_size_(window_size), config_(config) {}

double ForestModel::predict(std::span<const double> window) const {
    check_window(window);
    double sum = 0.0;
    for (const auto& tree : trees_) sum += tree.predict(window);
    return sum / static_cast<double>(trees_.size());
}

std::vector<double> ForestModel::parameters() const {
    // [tree count, then per tree: node count, nodes...]
    std::vector<double> out;
    out.push_back(static_cast<double>(trees_.size()));
    for (const auto& tree : trees_) {
        const auto flat = tree.parameters();
        out.push_back(static_cast<double>(flat.size()));
        out.insert(out.end(), flat.begin(), flat.end());
    }
    return out;
}

std::map<std::string, double> ForestModel::hyperparameters() const {
    return {{"window_size", static_cast<double>(window_size_)},
            {"estimators", static_cast<double>(config_.estimators)},
            {"max_depth", static_cast<double>(config_.max_depth)},
            {"min_split", static_cast<double>(config_.min_split)},
            {"min_leaf", static_cast<double>(config_.min_leaf)},
            {"bootstrap", config_.bootstrap ? 1.0 : 0.0},
            {"seed", static_cast<double>(config_.seed)}};
}

std::unique_ptr<ForestModel> fit_forest(const WindowedDataset& train,
                                        const ForestConfig& config) {
    if (train.size() == 0) throw Error(ErrorCode::EmptyTrainingSet, "no samples");
    if (config.estimators == 0)
        throw Error(ErrorCode::InvalidConfig, "need at least one estimator");
    const auto features_per_split = static_cast<std::size_t>(std::max(
        1.0, std::floor(std::sqrt(static_cast<double>(train.window_size)))));
    Rng rng(config.seed);
    TreeConfig tree_config{config.max_depth, config.min_split, config.min_leaf};
    std::vector<TreeModel> trees;
    trees.reserve(config.estimators);
    for (std::size_t m = 0; m < config.estimators; ++m) {
        Rng tree_rng = rng.split(m);
        std::vector<std::size_t> idx(train.size());
        if (config.bootstrap) {
            for (auto& i : idx) i = tree_rng.uniform_int(train.size());
        } else {
            std::iota(idx.begin(), idx.end(), 0);
        }
        const bool subsample = config.bootstrap;  // single full tree when disabled
        TreeBuilder builder(train, tree_config, subsample ? &tree_rng : nullptr,
                            features_per_split);
        trees.emplace_back(builder.build(std::move(idx)), train.window_size, tree_config);
    }
    return std::make_unique<ForestModel>(std::move(trees), train.window_size, config);
}

BoostModel::BoostModel(double base, std::vector<TreeModel> stages, std::size_t window_size,
                       BoostConfig config)
    : base_(base), stages_(std::move(stages)), window_size_(window_size), config_(config) {}

double BoostModel::predict(std::span<const double> window) const {
    check_window(window);
    double value = base_;
    for (const auto& stage : stages_)
        value += config_.learning_rate * stage.predict(window);
    return value;
}

std::vector<double> BoostModel::parameters() const {
    std::vector<double> out;
    out.push_back(base_);
    out.push_back(static_cast<double>(stages_.size()));
    for (const auto& stage : stages_) {
        const auto flat = stage.parameters();
        out.push_back(static_cast<double>(flat.size()));
        out.insert(out.end(), flat.begin(), flat.end());
    }
    return out;
}

std::map<std::string, double> BoostModel::hyperparameters() const {
    return {{"window_size", static_cast<double>(window_size_)},
            {"estimators", static_cast<double>(config_.estimators)},
            {"learning_rate", config_.learning_rate},
            {"max_depth", static_cast<double>(config_.max_depth)}};
}

std::unique_ptr<BoostModel> fit_boosted(const WindowedDataset& train,
                                        const BoostConfig& config) {
    if (train.size() == 0) throw Error(ErrorCode::EmptyTrainingSet, "no samples");
    if (config.estimators == 0)
        throw Error(ErrorCode::InvalidConfig, "need at least one estimator");
    const double base = std::accumulate(train.targets.begin(), train.targets.end(), 0.0) /
                        static_cast<double>(train.size());
    WindowedDataset residual = train;
    for (auto& target : residual.targets) target -= base;

    TreeConfig tree_config{config.max_depth, 2, 1};
    std::vector<TreeModel> stages;
    stages.reserve(config.estimators);
    std::vector<std::size_t> idx(train.size());
    for (std::size_t m = 0; m < config.estimators; ++m) {
        std::iota(idx.begin(), idx.end(), 0);
        TreeBuilder builder(residual, tree_config, nullptr, train.window_size);
        TreeModel stage(builder.build(idx), train.window_size, tree_config);
        for (std::size_t i = 0; i < residual.size(); ++i)
            residual.targets[i] -= config.learning_rate * stage.predict(residual.inputs[i]);
        stages.push_back(std::move(stage));
    }
    return std::make_unique<BoostModel>(base, std::move(stages), train.window_size, config);
}

} // namespace adriana
