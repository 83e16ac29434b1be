#include "adriana/surrogates.hpp"

#include "adriana/classic.hpp"
#include "adriana/error.hpp"
#include "adriana/metrics.hpp"
#include "adriana/neural.hpp"
#include "adriana/tree.hpp"

#include <cmath>
#include <limits>

namespace adriana {

std::unique_ptr<Model> fit_model(const ModelSpec& spec, const WindowedDataset& train,
                                 const WindowedDataset& valid) {
    switch (spec.kind) {
    case ModelKind::Mlp:
    case ModelKind::Gru:
    case ModelKind::Lstm: {
        ModelSpec with_window = spec;
        with_window.hyper["window_size"] = static_cast<double>(train.window_size);
        return fit_neural(network_config_from_spec(with_window), train, valid);
    }
    case ModelKind::Linear:
        return fit_linear(train);
    case ModelKind::Ar: {
        // OLS on every lag in the window
        const auto series = series_from_windows(train);
        return fit_ar(series, train.window_size);
    }
    case ModelKind::Arima110:
        return fit_arima_110(series_from_windows(train));
    case ModelKind::Tree: {
        TreeConfig config;
        config.max_depth = static_cast<std::size_t>(spec.get("max_depth", 4));
        config.min_split = static_cast<std::size_t>(spec.get("min_split", 7));
        config.min_leaf = static_cast<std::size_t>(spec.get("min_leaf", 3));
        return fit_tree(train, config);
    }
    case ModelKind::Forest: {
        ForestConfig config;
        config.estimators = static_cast<std::size_t>(spec.get("estimators", 25));
        config.max_depth = static_cast<std::size_t>(spec.get("max_depth", 8));
        config.min_split = static_cast<std::size_t>(spec.get("min_split", 2));
        config.min_leaf = static_cast<std::size_t>(spec.get("min_leaf", 1));
        config.bootstrap = spec.get("bootstrap", 1.0) != 0.0;
        config.seed = static_cast<std::uint64_t>(spec.get("seed", 1));
        return fit_forest(train, config);
    }
    case ModelKind::Boost: {
        BoostConfig config;
        config.estimators = static_cast<std::size_t>(spec.get("estimators", 25));
        config.learning_rate = spec.get("learning_rate", 0.1);
        config.max_depth = static_cast<std::size_t>(spec.get("max_depth", 1));
        return fit_boosted(train, config);
    }
    case ModelKind::SvrLinear: {
        SvrConfig config;
        config.epsilon = spec.get("epsilon", 0.6);
        return fit_svr_linear(train, config);
    }
    }
    throw Error(ErrorCode::InvalidConfig, "unhandled model kind");
}

std::vector<double> series_from_windows(const WindowedDataset& dataset) {
    if (dataset.size() == 0) throw Error(ErrorCode::EmptyTrainingSet, "empty dataset");
    std::vector<double> series = dataset.inputs.front();
    for (double target : dataset.targets) series.push_back(target);
    return series;
}

double evaluate_fitness(const ModelSpec& spec, const WindowedDataset& dataset,
                        std::size_t k) {
    const auto folds = forward_chain_folds(dataset.size(), k);
    const auto base_seed = static_cast<std::uint64_t>(spec.get("seed", 1));
    double total = 0.0;
    for (std::size_t f = 0; f < folds.size(); ++f) {
        const auto& fold = folds[f];
        ModelSpec fold_spec = spec;
        fold_spec.hyper["seed"] = static_cast<double>(
            base_seed ^ (0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(f) + 1)) >> 1);
        const WindowedDataset train = slice(dataset, fold.train_begin, fold.train_end);
        const WindowedDataset valid = slice(dataset, fold.valid_begin, fold.valid_end);
        try {
            const auto model = fit_model(fold_spec, train, valid);
            std::vector<double> predicted(valid.size());
            for (std::size_t i = 0; i < valid.size(); ++i)
                predicted[i] = predict_tail(*model, valid.inputs[i]);
            const double fold_rmse = rmse(valid.targets, predicted);
            if (!std::isfinite(fold_rmse)) return std::numeric_limits<double>::infinity();
            total += fold_rmse;
        } catch (const Error& error) {
            if (error.code() == ErrorCode::NonFiniteLoss)
                return std::numeric_limits<double>::infinity();
            throw;
        }
    }
    return total / static_cast<double>(folds.size());
}

std::vector<SearchDimension> default_search_space(ModelKind kind) {
    std::vector<SearchDimension> space{{"window_size", 1.0, 30.0, true}};
    switch (kind) {
    case ModelKind::Mlp:
    case ModelKind::Gru:
    case ModelKind::Lstm:
        space.push_back({"neurons", 1.0, 128.0, true});
        break;
    case ModelKind::Tree:
        space.push_back({"max_depth", 1.0, 16.0, true});
        space.push_back({"min_split", 2.0, 20.0, true});
        space.push_back({"min_leaf", 1.0, 10.0, true});
        break;
    case ModelKind::Forest:
        space.push_back({"estimators", 5.0, 100.0, true});
        space.push_back({"max_depth", 1.0, 16.0, true});
        break;
    case ModelKind::Boost:
        space.push_back({"estimators", 5.0, 100.0, true});
        space.push_back({"learning_rate", 0.01, 0.5, false});
        space.push_back({"max_depth", 1.0, 4.0, true});
        break;
    case ModelKind::SvrLinear:
        space.push_back({"epsilon", 0.0, 1.0, false});
        break;
    case ModelKind::Linear:
    case ModelKind::Ar:
    case ModelKind::Arima110:
        break;
    }
    return space;
}

} // namespace adriana
