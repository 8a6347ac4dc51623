#include "tsbib/tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tsbib/errors.hpp"

namespace tsbib {

namespace {

constexpr double kMinGain = 1e-12;
constexpr double kRatioTolerance = 1e-12;

int total(const ClassCounts& c) { return c[0] + c[1]; }

Label majority(const ClassCounts& c, Label fallback) {
  if (c[1] > c[0]) return Label::True;
  if (c[0] > c[1]) return Label::False;
  return fallback;
}

int errors_at(const DecisionTree::Node& node) {
  return total(node.distribution) - node.distribution[static_cast<std::size_t>(node.label)];
}

class Grower {
 public:
  Grower(std::span<const std::vector<double>> rows, std::span<const Label> labels, const TreeParams& params)
      : rows_(rows), labels_(labels), params_(params) {}

  std::vector<DecisionTree::Node> run() {
    std::vector<std::size_t> all(rows_.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    grow(all, 0, Label::False);
    return std::move(nodes_);
  }

 private:
  int grow(const std::vector<std::size_t>& subset, int depth, Label fallback) {
    DecisionTree::Node node;
    for (auto i : subset) ++node.distribution[static_cast<std::size_t>(labels_[i])];
    node.label = majority(node.distribution, fallback);
    const int index = static_cast<int>(nodes_.size());
    nodes_.push_back(node);

    const bool pure = node.distribution[0] == 0 || node.distribution[1] == 0;
    const bool too_small = static_cast<int>(subset.size()) < 2 * params_.min_leaf;
    const bool too_deep = params_.max_depth > 0 && depth >= params_.max_depth;
    if (pure || too_small || too_deep) return index;

    const auto split = best_split(rows_, labels_, subset, params_);
    if (!split) return index;

    std::vector<std::size_t> left, right;
    for (auto i : subset) {
      (rows_[i][static_cast<std::size_t>(split->feature)] <= split->threshold ? left : right).push_back(i);
    }
    const int l = grow(left, depth + 1, node.label);
    const int r = grow(right, depth + 1, node.label);
    auto& stored = nodes_[static_cast<std::size_t>(index)];
    stored.feature = split->feature;
    stored.threshold = split->threshold;
    stored.left = l;
    stored.right = r;
    return index;
  }

  std::span<const std::vector<double>> rows_;
  std::span<const Label> labels_;
  const TreeParams& params_;
  std::vector<DecisionTree::Node> nodes_;
};

// Marks collapsible subtrees, then re-flattens the survivors.
class Pruner {
 public:
  Pruner(const std::vector<DecisionTree::Node>& nodes, double confidence) : in_(nodes), cf_(confidence) {}

  std::vector<DecisionTree::Node> run() {
    collapsed_.assign(in_.size(), false);
    estimate(0);
    emit(0);
    return std::move(out_);
  }

 private:
  // Returns the pessimistic error estimate of the (possibly pruned) subtree.
  double estimate(int index) {
    const auto& node = in_[static_cast<std::size_t>(index)];
    const double n = total(node.distribution);
    const double e = errors_at(node);
    const double as_leaf = e + pessimistic_extra_errors(n, e, cf_);
    if (node.is_leaf()) return as_leaf;
    const double as_subtree = estimate(node.left) + estimate(node.right);
    if (as_leaf <= as_subtree + 0.1) {
      collapsed_[static_cast<std::size_t>(index)] = true;
      return as_leaf;
    }
    return as_subtree;
  }

  int emit(int index) {
    auto node = in_[static_cast<std::size_t>(index)];
    const int out_index = static_cast<int>(out_.size());
    out_.push_back(node);
    if (node.is_leaf() || collapsed_[static_cast<std::size_t>(index)]) {
      auto& leaf = out_.back();
      leaf.feature = -1;
      leaf.threshold = 0.0;
      leaf.left = leaf.right = -1;
      return out_index;
    }
    const int l = emit(node.left);
    const int r = emit(node.right);
    out_[static_cast<std::size_t>(out_index)].left = l;
    out_[static_cast<std::size_t>(out_index)].right = r;
    return out_index;
  }

  const std::vector<DecisionTree::Node>& in_;
  double cf_;
  std::vector<bool> collapsed_;
  std::vector<DecisionTree::Node> out_;
};

nlohmann::ordered_json node_json(const std::vector<DecisionTree::Node>& nodes, int index,
                                 std::span<const std::string> names) {
  const auto& node = nodes[static_cast<std::size_t>(index)];
  nlohmann::ordered_json j;
  if (node.is_leaf()) {
    j["leaf"] = label_name(node.label);
    j["distribution"] = {{"TRUE", node.distribution[1]}, {"FALSE", node.distribution[0]}};
    return j;
  }
  const auto f = static_cast<std::size_t>(node.feature);
  j["feature"] = f < names.size() ? names[f] : "f" + std::to_string(f);
  j["threshold"] = node.threshold;
  j["left"] = node_json(nodes, node.left, names);
  j["right"] = node_json(nodes, node.right, names);
  return j;
}

}  // namespace

void TreeParams::validate() const {
  if (min_leaf < 1) throw ConfigError("min_leaf must be >= 1");
  if (!(pruning_confidence > 0.0 && pruning_confidence <= 1.0)) {
    throw ConfigError("pruning_confidence must be in (0, 1]");
  }
  if (max_depth < 0) throw ConfigError("max_depth must be >= 0 (0 = unlimited)");
}

double entropy(std::span<const double> class_counts) {
  double n = 0.0;
  for (double c : class_counts) {
    if (c < 0.0) throw Error("entropy: negative class count");
    n += c;
  }
  if (n <= 0.0) throw Error("entropy: all class counts are zero");
  double h = 0.0;
  for (double c : class_counts) {
    if (c > 0.0) {
      const double p = c / n;
      h -= p * std::log2(p);
    }
  }
  return h;
}

double entropy(const ClassCounts& counts) {
  const std::array<double, 2> c{static_cast<double>(counts[0]), static_cast<double>(counts[1])};
  return entropy(c);
}

double information_gain(const ClassCounts& left, const ClassCounts& right) {
  const ClassCounts parent{left[0] + right[0], left[1] + right[1]};
  const double n = total(parent);
  double children = 0.0;
  if (total(left) > 0) children += total(left) / n * entropy(left);
  if (total(right) > 0) children += total(right) / n * entropy(right);
  return entropy(parent) - children;
}

double split_information(int left_rows, int right_rows) {
  const std::array<double, 2> sizes{static_cast<double>(left_rows), static_cast<double>(right_rows)};
  return entropy(sizes);
}

double gain_ratio(const ClassCounts& left, const ClassCounts& right) {
  const double info = split_information(total(left), total(right));
  if (info <= 0.0) return 0.0;
  return information_gain(left, right) / info;
}

std::optional<SplitCandidate> best_split(std::span<const std::vector<double>> rows, std::span<const Label> labels,
                                         std::span<const std::size_t> subset, const TreeParams& params) {
  if (subset.empty()) return std::nullopt;
  const std::size_t width = rows[subset.front()].size();
  ClassCounts parent{};
  for (auto i : subset) ++parent[static_cast<std::size_t>(labels[i])];
  const int n = total(parent);

  // Admissible candidates in (feature, threshold) ascending order.
  std::vector<SplitCandidate> candidates;
  std::vector<std::pair<double, Label>> column(subset.size());
  for (std::size_t f = 0; f < width; ++f) {
    for (std::size_t k = 0; k < subset.size(); ++k) column[k] = {rows[subset[k]][f], labels[subset[k]]};
    std::sort(column.begin(), column.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    ClassCounts left{};
    for (std::size_t k = 0; k + 1 < column.size(); ++k) {
      ++left[static_cast<std::size_t>(column[k].second)];
      const double lo = column[k].first;
      const double hi = column[k + 1].first;
      if (!(lo < hi)) continue;
      const int left_n = static_cast<int>(k + 1);
      if (left_n < params.min_leaf || n - left_n < params.min_leaf) continue;
      const ClassCounts right{parent[0] - left[0], parent[1] - left[1]};
      const double gain = information_gain(left, right);
      if (gain <= kMinGain) continue;
      double threshold = lo + (hi - lo) / 2.0;
      if (!(threshold < hi)) threshold = lo;
      candidates.push_back(
          SplitCandidate{static_cast<int>(f), threshold, left, right, gain, gain / split_information(left_n, n - left_n)});
    }
  }
  if (candidates.empty()) return std::nullopt;

  const SplitCandidate* best = nullptr;
  for (const auto& c : candidates) {
    if (best && c.gain_ratio <= best->gain_ratio + kRatioTolerance) continue;
    best = &c;
  }
  return *best;
}

double pessimistic_extra_errors(double cases, double errors, double confidence) {
  // Normal deviates for a few confidence levels, interpolated linearly.
  static constexpr std::array<double, 9> kLevels = {0, 0.001, 0.005, 0.01, 0.05, 0.10, 0.20, 0.40, 1.00};
  static constexpr std::array<double, 9> kDeviates = {4.0, 3.09, 2.58, 2.33, 1.65, 1.28, 0.84, 0.25, 0.00};

  if (cases <= 0.0) return 0.0;
  std::size_t i = 0;
  while (confidence > kLevels[i]) ++i;
  double coeff = kDeviates[i];
  if (i > 0) {
    coeff = kDeviates[i - 1] +
            (kDeviates[i] - kDeviates[i - 1]) * (confidence - kLevels[i - 1]) / (kLevels[i] - kLevels[i - 1]);
  }
  coeff *= coeff;

  if (errors < 1e-6) return cases * (1.0 - std::exp(std::log(confidence) / cases));
  if (errors < 0.9999) {
    const double zero = cases * (1.0 - std::exp(std::log(confidence) / cases));
    return zero + errors * (pessimistic_extra_errors(cases, 1.0, confidence) - zero);
  }
  if (errors + 0.5 >= cases) return 0.67 * (cases - errors);
  const double pr = (errors + 0.5 + coeff / 2.0 +
                     std::sqrt(coeff * ((errors + 0.5) * (1.0 - (errors + 0.5) / cases) + coeff / 4.0))) /
                    (cases + coeff);
  return cases * pr - errors;
}

Prediction DecisionTree::predict(std::span<const double> row) const {
  const auto& leaf = nodes_[leaf_for(row)];
  const int n = total(leaf.distribution);
  const double conf = n == 0 ? 0.0 : static_cast<double>(leaf.distribution[static_cast<std::size_t>(leaf.label)]) / n;
  return Prediction{leaf.label, conf};
}

std::size_t DecisionTree::leaf_for(std::span<const double> row) const {
  if (nodes_.empty()) throw Error("predict: tree is empty");
  if (row.size() != width_) {
    throw Error("predict: row width " + std::to_string(row.size()) + " does not match tree width " +
                std::to_string(width_));
  }
  std::size_t i = 0;
  while (!nodes_[i].is_leaf()) {
    const auto& node = nodes_[i];
    i = static_cast<std::size_t>(row[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left
                                                                                                : node.right);
  }
  return i;
}

std::size_t DecisionTree::leaf_count() const {
  return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) { return n.is_leaf(); }));
}

std::size_t DecisionTree::depth() const {
  if (nodes_.empty()) return 0;
  std::vector<std::size_t> level(nodes_.size(), 0);
  std::size_t deepest = 0;
  // Children always follow their parent in the node vector.
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    deepest = std::max(deepest, level[i]);
    if (!nodes_[i].is_leaf()) {
      level[static_cast<std::size_t>(nodes_[i].left)] = level[i] + 1;
      level[static_cast<std::size_t>(nodes_[i].right)] = level[i] + 1;
    }
  }
  return deepest;
}

nlohmann::ordered_json DecisionTree::to_json(std::span<const std::string> feature_names) const {
  if (nodes_.empty()) return nullptr;
  return node_json(nodes_, 0, feature_names);
}

DecisionTree grow_tree(std::span<const std::vector<double>> rows, std::span<const Label> labels,
                       const TreeParams& params) {
  params.validate();
  if (rows.empty()) throw Error("train: empty matrix");
  if (rows.size() != labels.size()) throw Error("train: row count does not match label count");
  const std::size_t width = rows.front().size();
  for (const auto& r : rows) {
    if (r.size() != width) throw Error("train: ragged feature matrix");
  }
  return DecisionTree(Grower(rows, labels, params).run(), width);
}

DecisionTree prune_tree(const DecisionTree& tree, double confidence) {
  if (tree.nodes().empty()) return tree;
  return DecisionTree(Pruner(tree.nodes(), confidence).run(), tree.width());
}

DecisionTree train(std::span<const std::vector<double>> rows, std::span<const Label> labels,
                   const TreeParams& params) {
  auto tree = grow_tree(rows, labels, params);
  return params.prune ? prune_tree(tree, params.pruning_confidence) : tree;
}

DecisionTree train(const FeatureMatrix& matrix, const TreeParams& params) {
  return train(matrix.rows, matrix.labels, params);
}

}  // namespace tsbib
