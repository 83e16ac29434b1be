#pragma once

#include "adriana/ga.hpp"
#include "adriana/model.hpp"

namespace adriana {

/// Fits any model family from a spec. `valid` is consulted only by the
/// neural trainers (early stopping) and may be empty.
std::unique_ptr<Model> fit_model(const ModelSpec& spec, const WindowedDataset& train,
                                 const WindowedDataset& valid);

/// Recovers the contiguous series a windowed dataset was built from
/// (first window followed by every target).
std::vector<double> series_from_windows(const WindowedDataset& dataset);

/// Mean forward-chained cross-validation RMSE of the spec on the dataset.
/// The fold index is mixed into the model seed; a fold that diverges
/// scores +infinity.
double evaluate_fitness(const ModelSpec& spec, const WindowedDataset& dataset,
                        std::size_t k = 10);

/// The hyperparameter ranges the optimizer searches for each family.
/// Every space includes window_size; families without tunables beyond the
/// window get only that dimension.
std::vector<SearchDimension> default_search_space(ModelKind kind);

} // namespace adriana
