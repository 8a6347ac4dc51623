#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tsbib/select.hpp"
#include "tsbib/tree.hpp"

namespace tsbib {

struct CVConfig {
  int folds = 10;
  bool stratified = true;
  std::uint64_t seed = 0;
};

/// Fold index per row. Stratified assignment shuffles each class separately
/// and deals rows round-robin with a counter that carries across classes,
/// so per-fold class counts are within one of perfect and fold sizes differ
/// by at most one.
std::vector<int> assign_folds(std::span<const Label> labels, const CVConfig& cv);

enum class SelectionScope { PerFold, Global };

/// How pattern features are chosen for each training split.
struct SelectionSettings {
  int top_k = 10;
  FeatureMode mode = FeatureMode::Counts;
  bool with_patterns = true;
  SelectionScope scope = SelectionScope::PerFold;
};

struct CrossValidationResult {
  std::vector<int> fold_of;               // per row
  std::vector<Prediction> predictions;    // out-of-fold, per row
  std::vector<std::size_t> fold_widths;   // feature count used in each fold

  std::size_t correct(std::span<const Label> labels) const;
};

/// CV over a fixed matrix (no per-fold feature selection).
CrossValidationResult cross_validate(const FeatureMatrix& matrix, const CVConfig& cv, const TreeParams& params,
                                     int workers = 1);

/// CV over raw entity features. With SelectionScope::PerFold the pattern
/// scores and top-k selection are recomputed from the training split only.
CrossValidationResult cross_validate(std::span<const EntityFeatures> entities, const SelectionSettings& selection,
                                     const CVConfig& cv, const TreeParams& params, int workers = 1);

}  // namespace tsbib
