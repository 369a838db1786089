#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "vru/feature_table.hpp"
#include "vru/rng.hpp"

namespace vru {

struct ForestConfig {
  std::size_t n_trees = 100;
  std::size_t n_features_per_split = 0;  // 0 -> floor(sqrt(width))
  std::size_t min_leaf = 1;
  std::uint64_t seed = 0;
  std::size_t threads = 0;  // 0 -> hardware concurrency; results do not depend on it
};

struct TreeNode {
  std::int32_t feature = -1;  // -1 marks a leaf
  double threshold = 0.0;     // rows with x[feature] <= threshold go left
  std::uint32_t left = 0;
  std::uint32_t right = 0;
  double impurity_decrease = 0.0;  // weighted Gini decrease, as a fraction of the bootstrap size
  std::vector<std::uint32_t> votes;  // leaves only: bootstrap class counts
  std::uint32_t majority = 0;        // leaves only

  bool is_leaf() const { return feature < 0; }
};

class DecisionTree {
 public:
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  const TreeNode& leaf_for(std::span<const double> row) const;
  std::size_t predict(std::span<const double> row) const { return leaf_for(row).majority; }
};

struct ForestModel {
  std::vector<DecisionTree> trees;
  std::size_t n_features_per_split = 0;
  std::uint64_t seed = 0;
  LabelScheme scheme;
  std::vector<std::string> feature_names;

  std::size_t width() const { return feature_names.size(); }
  std::size_t n_classes() const { return scheme.size(); }
};

/// Bootstrap multiplicities: n draws with replacement from n rows.
std::vector<std::uint32_t> bootstrap_counts(std::size_t n, Rng& rng);

/// Bagged CART trees grown to purity (or min_leaf) on Gini impurity.
/// The table's class_names must equal `scheme.classes`.
ForestModel train(const FeatureTable& table, const LabelScheme& scheme, const ForestConfig& config);

/// One vote per tree; ties go to the class listed first in the scheme.
std::size_t predict(const ForestModel& model, std::span<const double> row);
std::vector<std::size_t> predict_votes(const ForestModel& model, std::span<const double> row);

/// Mean (over trees) Gini decrease per feature.
std::vector<double> feature_importance(const ForestModel& model);
/// Mean (over trees) of the summed impurity decrease at every split.
double total_impurity_decrease(const ForestModel& model);

struct CvResult {
  double mean_accuracy = 0.0;
  std::vector<double> fold_accuracies;
  std::vector<std::vector<std::size_t>> confusion;  // [true][predicted], summed over folds
};

/// Stratified fold assignment: each class's rows are shuffled with `seed`
/// and dealt round-robin into folds.
std::vector<std::size_t> stratified_folds(std::span<const std::size_t> labels, std::size_t n_classes,
                                          std::size_t folds, std::uint64_t seed);

CvResult cross_validate(const FeatureTable& table, const LabelScheme& scheme, const ForestConfig& config,
                        std::size_t folds = 5);

/// Versioned text format; reloading predicts bit-identically.
void save_model(std::ostream& out, const ForestModel& model);
ForestModel load_model(std::istream& in);

}  // namespace vru
