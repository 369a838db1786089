#include "vru/select.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <string>
#include <utility>

#include "entropy.hpp"
#include "vru/error.hpp"
#include "vru/textio.hpp"

namespace vru {

std::vector<std::size_t> discretize(std::span<const double> column, std::size_t bins) {
  if (bins < 2) throw Error(ErrorKind::invalid_input, "discretize needs at least 2 bins");
  const std::size_t n = column.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return column[a] < column[b]; });

  std::vector<std::size_t> out(n, 0);
  std::size_t group_start = 0;  // rank of the first member of the current tie group
  for (std::size_t pos = 0; pos < n; ++pos) {
    if (pos > 0 && column[order[pos]] != column[order[pos - 1]]) group_start = pos;
    out[order[pos]] = group_start * bins / n;
  }
  return out;
}

double mutual_information(std::span<const std::size_t> a, std::span<const std::size_t> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorKind::invalid_input, "mutual information of sequences with different lengths");
  }
  if (a.empty()) throw Error(ErrorKind::invalid_input, "mutual information of empty sequences");
  const std::size_t n = a.size();
  const std::size_t ka = *std::max_element(a.begin(), a.end()) + 1;
  const std::size_t kb = *std::max_element(b.begin(), b.end()) + 1;

  std::vector<std::size_t> ca(ka, 0), cb(kb, 0);
  for (std::size_t i = 0; i < n; ++i) {
    ++ca[a[i]];
    ++cb[b[i]];
  }
  std::vector<std::size_t> joint;
  if (ka * kb <= std::max<std::size_t>(4096, 4 * n)) {
    joint.assign(ka * kb, 0);
    for (std::size_t i = 0; i < n; ++i) ++joint[a[i] * kb + b[i]];
  } else {
    std::vector<std::pair<std::size_t, std::size_t>> pairs(n);
    for (std::size_t i = 0; i < n; ++i) pairs[i] = {a[i], b[i]};
    std::sort(pairs.begin(), pairs.end());
    for (std::size_t i = 0; i < n;) {
      std::size_t j = i;
      while (j < n && pairs[j] == pairs[i]) ++j;
      joint.push_back(j - i);
      i = j;
    }
  }
  const double mi = (detail::entropy_bits(std::move(ca), n) + detail::entropy_bits(std::move(cb), n)) -
                    detail::entropy_bits(std::move(joint), n);
  return std::max(mi, 0.0);
}

MrmrRanking mrmr_rank(const FeatureTable& table, std::size_t k, std::size_t bins) {
  const std::size_t p = table.width();
  if (k == 0 || k > p) {
    throw Error(ErrorKind::invalid_input, "mRMR k=" + std::to_string(k) + " must be in [1, " +
                                              std::to_string(p) + "]");
  }
  if (table.classes_present() < 2) {
    throw Error(ErrorKind::degenerate_labels, "mRMR needs at least two classes");
  }

  std::vector<std::vector<std::size_t>> columns(p);
  std::vector<double> relevance(p);
  for (std::size_t f = 0; f < p; ++f) {
    columns[f] = discretize(table.column(f), bins);
    relevance[f] = mutual_information(columns[f], table.labels);
  }

  MrmrRanking out;
  std::vector<bool> chosen(p, false);
  std::vector<double> redundancy(p, 0.0);  // running sum of I(f; s) over selected s
  for (std::size_t step = 0; step < k; ++step) {
    std::size_t best = p;
    double best_score = 0.0;
    for (std::size_t f = 0; f < p; ++f) {
      if (chosen[f]) continue;
      const double score =
          step == 0 ? relevance[f] : relevance[f] - redundancy[f] / static_cast<double>(step);
      if (best == p || score > best_score) {
        best = f;
        best_score = score;
      }
    }
    chosen[best] = true;
    out.ordered_indices.push_back(best);
    out.scores.push_back(best_score);
    if (step + 1 == k) break;
    for (std::size_t f = 0; f < p; ++f) {
      if (!chosen[f]) redundancy[f] += mutual_information(columns[f], columns[best]);
    }
  }
  return out;
}

void write_ranking(std::ostream& out, const MrmrRanking& ranking, std::span<const std::string> names) {
  out << "rank,feature_name,score\n";
  for (std::size_t i = 0; i < ranking.ordered_indices.size(); ++i) {
    out << i + 1 << ',' << names[ranking.ordered_indices[i]] << ',' << format_double(ranking.scores[i])
        << '\n';
  }
}

MrmrRanking read_ranking(std::istream& in, std::span<const std::string> names) {
  MrmrRanking r;
  std::string line;
  if (!std::getline(in, line) || line.rfind("rank,feature_name,score", 0) != 0) {
    throw Error(ErrorKind::parse, "ranking file must start with 'rank,feature_name,score'");
  }
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto f = split_csv(line);
    if (f.size() != 3) throw Error(ErrorKind::parse, "ranking row must have 3 fields: " + line);
    const auto it = std::find(names.begin(), names.end(), f[1]);
    if (it == names.end()) {
      throw Error(ErrorKind::invalid_input, "ranked feature '" + std::string(f[1]) + "' is not in the table");
    }
    r.ordered_indices.push_back(static_cast<std::size_t>(it - names.begin()));
    r.scores.push_back(parse_double(f[2]));
  }
  return r;
}

}  // namespace vru
