#include "tsbib/crossval.hpp"

#include <algorithm>
#include <numeric>

#include "tsbib/errors.hpp"
#include "tsbib/parallel.hpp"
#include "tsbib/random.hpp"

namespace tsbib {

namespace {

void check_folds(const CVConfig& cv, std::size_t rows) {
  if (cv.folds < 2) throw ConfigError("folds must be >= 2");
  if (static_cast<std::size_t>(cv.folds) > rows) {
    throw ConfigError("folds (" + std::to_string(cv.folds) + ") exceeds number of rows (" +
                      std::to_string(rows) + ")");
  }
}

template <typename T>
std::vector<T> gather(std::span<const T> items, std::span<const std::size_t> idx) {
  std::vector<T> out;
  out.reserve(idx.size());
  for (auto i : idx) out.push_back(items[i]);
  return out;
}

template <typename T>
std::vector<const T*> pointers(std::span<const T> items, std::span<const std::size_t> idx) {
  std::vector<const T*> out;
  out.reserve(idx.size());
  for (auto i : idx) out.push_back(&items[i]);
  return out;
}

// Runs one fold: trains on rows outside the fold and predicts the rows inside it.
template <typename TrainAndPredict>
CrossValidationResult run_folds(std::span<const Label> labels, const CVConfig& cv, int workers,
                                TrainAndPredict&& fold_fn) {
  check_folds(cv, labels.size());
  CrossValidationResult result;
  result.fold_of = assign_folds(labels, cv);
  result.predictions.resize(labels.size());
  result.fold_widths.resize(static_cast<std::size_t>(cv.folds));
  parallel_for(static_cast<std::size_t>(cv.folds), workers, [&](std::size_t fold) {
    std::vector<std::size_t> train_idx, test_idx;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      (result.fold_of[i] == static_cast<int>(fold) ? test_idx : train_idx).push_back(i);
    }
    result.fold_widths[fold] = fold_fn(train_idx, test_idx, result.predictions);
  });
  return result;
}

}  // namespace

std::size_t CrossValidationResult::correct(std::span<const Label> labels) const {
  std::size_t n = 0;
  for (std::size_t i = 0; i < labels.size() && i < predictions.size(); ++i) {
    n += predictions[i].label == labels[i] ? 1 : 0;
  }
  return n;
}

std::vector<int> assign_folds(std::span<const Label> labels, const CVConfig& cv) {
  check_folds(cv, labels.size());
  Rng rng(cv.seed);
  std::vector<int> fold(labels.size(), -1);
  std::vector<std::vector<std::size_t>> groups;
  if (cv.stratified) {
    groups.resize(2);
    // TRUE first, then FALSE.
    for (std::size_t i = 0; i < labels.size(); ++i) groups[labels[i] == Label::True ? 0 : 1].push_back(i);
  } else {
    groups.emplace_back(labels.size());
    std::iota(groups[0].begin(), groups[0].end(), std::size_t{0});
  }
  std::size_t counter = 0;
  for (auto& group : groups) {
    shuffle(std::span<std::size_t>(group), rng);
    for (auto i : group) fold[i] = static_cast<int>(counter++ % static_cast<std::size_t>(cv.folds));
  }
  return fold;
}

CrossValidationResult cross_validate(const FeatureMatrix& matrix, const CVConfig& cv, const TreeParams& params,
                                     int workers) {
  if (matrix.rows.size() != matrix.labels.size()) throw Error("cross_validate: rows and labels differ in length");
  params.validate();
  const std::span<const std::vector<double>> rows(matrix.rows);
  const std::span<const Label> labels(matrix.labels);
  return run_folds(labels, cv, workers,
                   [&](const std::vector<std::size_t>& train_idx, const std::vector<std::size_t>& test_idx,
                       std::vector<Prediction>& out) {
                     const auto train_rows = gather(rows, train_idx);
                     const auto train_labels = gather(labels, train_idx);
                     const auto tree = train(train_rows, train_labels, params);
                     for (auto i : test_idx) out[i] = tree.predict(rows[i]);
                     return matrix.width();
                   });
}

CrossValidationResult cross_validate(std::span<const EntityFeatures> entities, const SelectionSettings& selection,
                                     const CVConfig& cv, const TreeParams& params, int workers) {
  params.validate();
  std::vector<Label> labels;
  labels.reserve(entities.size());
  for (const auto& e : entities) labels.push_back(e.label);

  FeatureSpace global_space;
  if (selection.with_patterns && selection.scope == SelectionScope::Global) {
    global_space = select_features(entities, selection.top_k);
  }

  return run_folds(labels, cv, workers,
                   [&](const std::vector<std::size_t>& train_idx, const std::vector<std::size_t>& test_idx,
                       std::vector<Prediction>& out) {
                     const auto train_entities = pointers(entities, train_idx);
                     FeatureSpace space = global_space;
                     if (selection.with_patterns && selection.scope == SelectionScope::PerFold) {
                       space = select_features(train_entities, selection.top_k);
                     }
                     const auto train_matrix =
                         build_matrix(train_entities, space, selection.mode, selection.with_patterns);
                     const auto tree = train(train_matrix, params);
                     const auto test_entities = pointers(entities, test_idx);
                     const auto test_matrix =
                         build_matrix(test_entities, space, selection.mode, selection.with_patterns);
                     for (std::size_t k = 0; k < test_idx.size(); ++k) out[test_idx[k]] = tree.predict(test_matrix.rows[k]);
                     return train_matrix.width();
                   });
}

}  // namespace tsbib
