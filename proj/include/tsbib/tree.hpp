#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tsbib/ingest.hpp"
#include "tsbib/select.hpp"

namespace tsbib {

struct TreeParams {
  int min_leaf = 2;                   // minimum rows on each side of a split
  double pruning_confidence = 0.25;   // C4.5 CF; 1.0 effectively disables pruning
  int max_depth = 0;                  // 0 = unlimited
  bool prune = true;

  void validate() const;
};

/// Row counts per class, indexed by Label.
using ClassCounts = std::array<int, 2>;

/// Shannon entropy in bits. Throws if every count is zero.
double entropy(std::span<const double> class_counts);
double entropy(const ClassCounts& counts);

double information_gain(const ClassCounts& left, const ClassCounts& right);
double split_information(int left_rows, int right_rows);
/// Information gain over split information; 0 when split information is 0.
double gain_ratio(const ClassCounts& left, const ClassCounts& right);

struct SplitCandidate {
  int feature = -1;
  double threshold = 0.0;  // rows with value <= threshold go left
  ClassCounts left{};
  ClassCounts right{};
  double gain = 0.0;
  double gain_ratio = 0.0;
};

/// Best binary split of `subset` by gain ratio over midpoints between
/// consecutive distinct values. Candidates must leave at least min_leaf rows
/// per side and have positive information gain. Ties go to the lowest
/// feature index, then the lowest threshold.
std::optional<SplitCandidate> best_split(std::span<const std::vector<double>> rows, std::span<const Label> labels,
                                         std::span<const std::size_t> subset, const TreeParams& params);

/// C4.5's pessimistic estimate of extra errors at a leaf with `cases` rows
/// and `errors` misclassified rows (upper confidence bound minus errors).
double pessimistic_extra_errors(double cases, double errors, double confidence);

struct Prediction {
  Label label{};
  double confidence = 0.0;  // majority fraction at the leaf
};

class DecisionTree {
 public:
  struct Node {
    int feature = -1;  // -1 for leaves
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    ClassCounts distribution{};
    Label label{};

    bool is_leaf() const { return feature < 0; }
  };

  DecisionTree() = default;
  DecisionTree(std::vector<Node> nodes, std::size_t width) : nodes_(std::move(nodes)), width_(width) {}

  Prediction predict(std::span<const double> row) const;
  /// Index of the leaf a row reaches.
  std::size_t leaf_for(std::span<const double> row) const;

  const std::vector<Node>& nodes() const { return nodes_; }
  const Node& root() const { return nodes_.front(); }
  std::size_t width() const { return width_; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t leaf_count() const;
  std::size_t depth() const;

  nlohmann::ordered_json to_json(std::span<const std::string> feature_names) const;

 private:
  std::vector<Node> nodes_;  // root at index 0
  std::size_t width_ = 0;
};

/// Grows a tree without pruning.
DecisionTree grow_tree(std::span<const std::vector<double>> rows, std::span<const Label> labels,
                       const TreeParams& params);

/// Bottom-up subtree replacement using pessimistic error estimates.
DecisionTree prune_tree(const DecisionTree& tree, double confidence);

/// grow_tree followed by prune_tree when params.prune is set.
DecisionTree train(std::span<const std::vector<double>> rows, std::span<const Label> labels,
                   const TreeParams& params);
DecisionTree train(const FeatureMatrix& matrix, const TreeParams& params);

}  // namespace tsbib
