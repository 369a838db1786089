#include "vru/forest.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <string>
#include <thread>

#include "vru/error.hpp"
#include "vru/textio.hpp"

namespace vru {

const TreeNode& DecisionTree::leaf_for(std::span<const double> row) const {
  const TreeNode* node = &nodes[0];
  while (!node->is_leaf()) {
    node = &nodes[row[static_cast<std::size_t>(node->feature)] <= node->threshold ? node->left : node->right];
  }
  return *node;
}

std::vector<std::uint32_t> bootstrap_counts(std::size_t n, Rng& rng) {
  std::vector<std::uint32_t> counts(n, 0);
  for (std::size_t i = 0; i < n; ++i) ++counts[rng.below(n)];
  return counts;
}

namespace {

struct Entry {
  double value;
  std::uint32_t cls;
  std::uint32_t weight;
};

struct Split {
  bool found = false;
  double score = 0.0;  // sum over children of sum_c count_c^2 / child_weight; larger is purer
  std::size_t feature = 0;
  double threshold = 0.0;
};

bool better(const Split& cand, const Split& best) {
  if (!best.found) return true;
  if (cand.score != best.score) return cand.score > best.score;
  if (cand.feature != best.feature) return cand.feature < best.feature;
  return cand.threshold < best.threshold;
}

double sum_squares(std::span<const std::uint64_t> counts) {
  std::uint64_t s = 0;
  for (auto c : counts) s += c * c;
  return static_cast<double>(s);
}

// weight * gini = weight - sum_c count_c^2 / weight
double weighted_gini(std::span<const std::uint64_t> counts) {
  const auto w = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
  if (w == 0) return 0.0;
  return static_cast<double>(w) - sum_squares(counts) / static_cast<double>(w);
}

class TreeBuilder {
 public:
  TreeBuilder(std::span<const double> columns, std::span<const std::size_t> labels, std::size_t n_classes,
              std::size_t mtry, std::size_t min_leaf)
      : columns_(columns), labels_(labels), n_rows_(labels.size()), n_classes_(n_classes),
        n_features_(columns.size() / labels.size()), mtry_(mtry), min_leaf_(min_leaf) {}

  DecisionTree build(Rng& rng) {
    const auto weights = bootstrap_counts(n_rows_, rng);
    weights_ = weights;
    rows_.clear();
    for (std::size_t r = 0; r < n_rows_; ++r) {
      if (weights[r] > 0) rows_.push_back(static_cast<std::uint32_t>(r));
    }
    features_.resize(n_features_);
    std::iota(features_.begin(), features_.end(), std::uint32_t{0});
    root_weight_ = static_cast<double>(n_rows_);

    DecisionTree tree;
    struct Pending {
      std::uint32_t node;
      std::size_t begin, end;
    };
    tree.nodes.emplace_back();
    std::vector<Pending> stack{{0, 0, rows_.size()}};
    while (!stack.empty()) {
      const auto [id, begin, end] = stack.back();
      stack.pop_back();

      std::vector<std::uint64_t> counts(n_classes_, 0);
      for (std::size_t i = begin; i < end; ++i) counts[labels_[rows_[i]]] += weights_[rows_[i]];
      const auto total = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
      const bool pure = std::count_if(counts.begin(), counts.end(), [](auto c) { return c > 0; }) <= 1;

      Split split;
      if (!pure && total >= 2 * min_leaf_) split = find_split(rng, begin, end);
      if (!split.found) {
        make_leaf(tree.nodes[id], counts);
        continue;
      }

      const auto mid = static_cast<std::size_t>(
          std::partition(rows_.begin() + static_cast<std::ptrdiff_t>(begin),
                         rows_.begin() + static_cast<std::ptrdiff_t>(end),
                         [&](std::uint32_t r) { return value(r, split.feature) <= split.threshold; }) -
          rows_.begin());

      std::vector<std::uint64_t> left(n_classes_, 0), right(n_classes_, 0);
      for (std::size_t i = begin; i < mid; ++i) left[labels_[rows_[i]]] += weights_[rows_[i]];
      for (std::size_t i = mid; i < end; ++i) right[labels_[rows_[i]]] += weights_[rows_[i]];

      const auto left_id = static_cast<std::uint32_t>(tree.nodes.size());
      tree.nodes.emplace_back();
      tree.nodes.emplace_back();
      auto& node = tree.nodes[id];
      node.feature = static_cast<std::int32_t>(split.feature);
      node.threshold = split.threshold;
      node.left = left_id;
      node.right = left_id + 1;
      node.impurity_decrease =
          (weighted_gini(counts) - weighted_gini(left) - weighted_gini(right)) / root_weight_;
      // right first so the left subtree is expanded first
      stack.push_back({left_id + 1, mid, end});
      stack.push_back({left_id, begin, mid});
    }
    return tree;
  }

 private:
  double value(std::uint32_t row, std::size_t feature) const {
    return columns_[feature * n_rows_ + row];
  }

  void make_leaf(TreeNode& node, std::span<const std::uint64_t> counts) const {
    node.feature = -1;
    node.votes.assign(counts.begin(), counts.end());
    node.majority = static_cast<std::uint32_t>(std::max_element(counts.begin(), counts.end()) - counts.begin());
  }

  Split find_split(Rng& rng, std::size_t begin, std::size_t end) {
    Split best;
    std::size_t evaluated = 0;
    // Partial Fisher-Yates: features are drawn without replacement until mtry
    // non-constant ones have been scored or all are exhausted.
    for (std::size_t drawn = 0; drawn < n_features_ && evaluated < mtry_; ++drawn) {
      const auto j = drawn + static_cast<std::size_t>(rng.below(n_features_ - drawn));
      std::swap(features_[drawn], features_[j]);
      const std::size_t f = features_[drawn];

      entries_.clear();
      for (std::size_t i = begin; i < end; ++i) {
        const auto r = rows_[i];
        entries_.push_back({value(r, f), static_cast<std::uint32_t>(labels_[r]), weights_[r]});
      }
      std::sort(entries_.begin(), entries_.end(),
                [](const Entry& a, const Entry& b) { return a.value < b.value; });
      if (entries_.front().value == entries_.back().value) continue;
      ++evaluated;
      scan(f, best);
    }
    return best;
  }

  // Sweeps thresholds between consecutive distinct values of one sorted feature.
  void scan(std::size_t feature, Split& best) {
    left_.assign(n_classes_, 0);
    right_.assign(n_classes_, 0);
    std::uint64_t w_left = 0, w_right = 0;
    for (const auto& e : entries_) {
      right_[e.cls] += e.weight;
      w_right += e.weight;
    }
    std::uint64_t sq_left = 0;
    std::uint64_t sq_right = 0;
    for (auto c : right_) sq_right += c * c;

    for (std::size_t i = 0; i + 1 < entries_.size(); ++i) {
      const auto& e = entries_[i];
      const std::uint64_t w = e.weight;
      sq_left += 2 * left_[e.cls] * w + w * w;
      sq_right -= 2 * right_[e.cls] * w - w * w;
      left_[e.cls] += w;
      right_[e.cls] -= w;
      w_left += w;
      w_right -= w;

      const double next = entries_[i + 1].value;
      if (e.value == next) continue;
      if (w_left < min_leaf_ || w_right < min_leaf_) continue;

      Split cand;
      cand.found = true;
      cand.feature = feature;
      cand.score = static_cast<double>(sq_left) / static_cast<double>(w_left) +
                   static_cast<double>(sq_right) / static_cast<double>(w_right);
      cand.threshold = e.value + (next - e.value) / 2.0;
      if (!(cand.threshold < next)) cand.threshold = e.value;
      if (better(cand, best)) best = cand;
    }
  }

  std::span<const double> columns_;
  std::span<const std::size_t> labels_;
  std::size_t n_rows_, n_classes_, n_features_, mtry_, min_leaf_;
  double root_weight_ = 1.0;

  std::vector<std::uint32_t> weights_;
  std::vector<std::uint32_t> rows_;
  std::vector<std::uint32_t> features_;
  std::vector<Entry> entries_;
  std::vector<std::uint64_t> left_, right_;
};

template <typename Fn>
void parallel_for(std::size_t n, std::size_t threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  }
}

}  // namespace

ForestModel train(const FeatureTable& table, const LabelScheme& scheme, const ForestConfig& config) {
  table.validate();
  if (table.class_names != scheme.classes) {
    throw Error(ErrorKind::invalid_label, "feature table classes do not match scheme " + scheme.name);
  }
  if (table.rows() < 2 || table.classes_present() < 2) {
    throw Error(ErrorKind::degenerate_labels, "training needs at least 2 rows and 2 classes");
  }
  if (table.width() == 0) throw Error(ErrorKind::invalid_input, "training table has no features");
  if (config.n_trees == 0) throw Error(ErrorKind::config, "forest needs at least one tree");
  if (config.min_leaf == 0) throw Error(ErrorKind::config, "min_leaf must be at least 1");

  const std::size_t n = table.rows();
  const std::size_t p = table.width();
  std::vector<double> columns(n * p);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < p; ++c) columns[c * n + r] = table.at(r, c);
  }

  ForestModel model;
  model.n_features_per_split = config.n_features_per_split != 0
                                   ? std::min(config.n_features_per_split, p)
                                   : std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(static_cast<double>(p))));
  model.seed = config.seed;
  model.scheme = scheme;
  model.feature_names = table.names;
  model.trees.resize(config.n_trees);

  parallel_for(config.n_trees, config.threads, [&](std::size_t t) {
    Rng rng(mix_seed(config.seed, t));
    TreeBuilder builder(columns, table.labels, scheme.size(), model.n_features_per_split, config.min_leaf);
    model.trees[t] = builder.build(rng);
  });
  return model;
}

std::vector<std::size_t> predict_votes(const ForestModel& model, std::span<const double> row) {
  if (row.size() != model.width()) {
    throw Error(ErrorKind::invalid_input, "row has " + std::to_string(row.size()) + " features, model expects " +
                                              std::to_string(model.width()));
  }
  std::vector<std::size_t> votes(model.n_classes(), 0);
  for (const auto& tree : model.trees) ++votes[tree.predict(row)];
  return votes;
}

std::size_t predict(const ForestModel& model, std::span<const double> row) {
  const auto votes = predict_votes(model, row);
  return static_cast<std::size_t>(std::max_element(votes.begin(), votes.end()) - votes.begin());
}

std::vector<double> feature_importance(const ForestModel& model) {
  std::vector<double> imp(model.width(), 0.0);
  for (const auto& tree : model.trees) {
    for (const auto& node : tree.nodes) {
      if (!node.is_leaf()) imp[static_cast<std::size_t>(node.feature)] += node.impurity_decrease;
    }
  }
  for (double& v : imp) v /= static_cast<double>(model.trees.size());
  return imp;
}

double total_impurity_decrease(const ForestModel& model) {
  double total = 0.0;
  for (const auto& tree : model.trees) {
    double t = 0.0;
    for (const auto& node : tree.nodes) t += node.impurity_decrease;
    total += t;
  }
  return total / static_cast<double>(model.trees.size());
}

std::vector<std::size_t> stratified_folds(std::span<const std::size_t> labels, std::size_t n_classes,
                                          std::size_t folds, std::uint64_t seed) {
  if (folds < 2) throw Error(ErrorKind::config, "cross-validation needs at least 2 folds");
  std::vector<std::vector<std::size_t>> by_class(n_classes);
  for (std::size_t r = 0; r < labels.size(); ++r) by_class.at(labels[r]).push_back(r);

  std::vector<std::size_t> fold_of(labels.size(), 0);
  Rng rng(mix_seed(seed, 0xf01d));
  std::size_t offset = 0;  // rotates the starting fold so fold sizes stay balanced
  for (std::size_t c = 0; c < n_classes; ++c) {
    auto& rows = by_class[c];
    if (rows.empty()) continue;
    if (rows.size() < folds) {
      throw Error(ErrorKind::stratification, "class " + std::to_string(c) + " has " + std::to_string(rows.size()) +
                                                 " rows, fewer than " + std::to_string(folds) + " folds");
    }
    rng.shuffle(rows.begin(), rows.end());
    for (std::size_t i = 0; i < rows.size(); ++i) fold_of[rows[i]] = (offset + i) % folds;
    offset = (offset + rows.size()) % folds;
  }
  return fold_of;
}

CvResult cross_validate(const FeatureTable& table, const LabelScheme& scheme, const ForestConfig& config,
                        std::size_t folds) {
  table.validate();
  if (table.classes_present() < 2) throw Error(ErrorKind::degenerate_labels, "cross-validation needs 2 classes");
  const auto fold_of = stratified_folds(table.labels, scheme.size(), folds, config.seed);

  CvResult result;
  result.confusion.assign(scheme.size(), std::vector<std::size_t>(scheme.size(), 0));
  for (std::size_t k = 0; k < folds; ++k) {
    FeatureTable train_set, test_set;
    train_set.names = test_set.names = table.names;
    train_set.class_names = test_set.class_names = table.class_names;
    for (std::size_t r = 0; r < table.rows(); ++r) {
      (fold_of[r] == k ? test_set : train_set).add_row(table.row(r), table.labels[r]);
    }
    ForestConfig fold_config = config;
    fold_config.seed = mix_seed(config.seed, 1000 + k);
    const auto model = train(train_set, scheme, fold_config);

    std::size_t correct = 0;
    for (std::size_t r = 0; r < test_set.rows(); ++r) {
      const auto pred = predict(model, test_set.row(r));
      correct += pred == test_set.labels[r];
      ++result.confusion[test_set.labels[r]][pred];
    }
    result.fold_accuracies.push_back(static_cast<double>(correct) / static_cast<double>(test_set.rows()));
  }
  result.mean_accuracy = std::accumulate(result.fold_accuracies.begin(), result.fold_accuracies.end(), 0.0) /
                         static_cast<double>(folds);
  return result;
}

// Format:
//   vru-forest 1
//   scheme <name>
//   features <n> <name…>
//   n_features_per_split <m>
//   seed <s>
//   trees <t>
//   tree <node count>
//   S <feature> <threshold> <left> <right> <impurity_decrease>   (split)
//   L <majority> <votes…>                                        (leaf)
void save_model(std::ostream& out, const ForestModel& model) {
  out << "vru-forest 1\n";
  out << "scheme " << model.scheme.name << '\n';
  out << "features " << model.width();
  for (const auto& n : model.feature_names) out << ' ' << n;
  out << '\n';
  out << "n_features_per_split " << model.n_features_per_split << '\n';
  out << "seed " << model.seed << '\n';
  out << "trees " << model.trees.size() << '\n';
  for (const auto& tree : model.trees) {
    out << "tree " << tree.nodes.size() << '\n';
    for (const auto& node : tree.nodes) {
      if (node.is_leaf()) {
        out << "L " << node.majority;
        for (auto v : node.votes) out << ' ' << v;
      } else {
        out << "S " << node.feature << ' ' << format_double(node.threshold) << ' ' << node.left << ' '
            << node.right << ' ' << format_double(node.impurity_decrease);
      }
      out << '\n';
    }
  }
}

namespace {

void expect_token(std::istream& in, const std::string& want) {
  std::string got;
  if (!(in >> got) || got != want) {
    throw Error(ErrorKind::parse, "model file: expected '" + want + "', got '" + got + "'");
  }
}

template <typename T>
T read_value(std::istream& in, const char* what) {
  T v{};
  if (!(in >> v)) throw Error(ErrorKind::parse, std::string("model file: bad ") + what);
  return v;
}

double read_double(std::istream& in) {
  std::string tok;
  if (!(in >> tok)) throw Error(ErrorKind::parse, "model file: missing number");
  return parse_double(tok);
}

}  // namespace

ForestModel load_model(std::istream& in) {
  expect_token(in, "vru-forest");
  if (const auto version = read_value<int>(in, "version"); version != 1) {
    throw Error(ErrorKind::parse, "unsupported model version " + std::to_string(version));
  }
  ForestModel m;
  expect_token(in, "scheme");
  m.scheme = LabelScheme::parse(read_value<std::string>(in, "scheme"));
  expect_token(in, "features");
  const auto width = read_value<std::size_t>(in, "feature count");
  for (std::size_t i = 0; i < width; ++i) m.feature_names.push_back(read_value<std::string>(in, "feature name"));
  expect_token(in, "n_features_per_split");
  m.n_features_per_split = read_value<std::size_t>(in, "n_features_per_split");
  expect_token(in, "seed");
  m.seed = read_value<std::uint64_t>(in, "seed");
  expect_token(in, "trees");
  m.trees.resize(read_value<std::size_t>(in, "tree count"));
  for (auto& tree : m.trees) {
    expect_token(in, "tree");
    tree.nodes.resize(read_value<std::size_t>(in, "node count"));
    for (auto& node : tree.nodes) {
      const auto kind = read_value<std::string>(in, "node kind");
      if (kind == "L") {
        node.majority = read_value<std::uint32_t>(in, "majority");
        node.votes.resize(m.scheme.size());
        for (auto& v : node.votes) v = read_value<std::uint32_t>(in, "vote count");
        if (node.majority >= m.scheme.size()) throw Error(ErrorKind::parse, "model file: leaf class out of range");
      } else if (kind == "S") {
        node.feature = read_value<std::int32_t>(in, "split feature");
        node.threshold = read_double(in);
        node.left = read_value<std::uint32_t>(in, "left child");
        node.right = read_value<std::uint32_t>(in, "right child");
        node.impurity_decrease = read_double(in);
        if (node.feature < 0 || static_cast<std::size_t>(node.feature) >= width ||
            node.left >= tree.nodes.size() || node.right >= tree.nodes.size()) {
          throw Error(ErrorKind::parse, "model file: split node out of range");
        }
      } else {
        throw Error(ErrorKind::parse, "model file: unknown node kind '" + kind + "'");
      }
    }
  }
  return m;
}

}  // namespace vru
