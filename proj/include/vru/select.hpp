#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "vru/feature_table.hpp"

namespace vru {

inline constexpr std::size_t kDefaultMrmrBins = 8;

/// Equal-frequency binning. A value's bucket is floor(r * bins / n), where r
/// is the number of values strictly smaller than it, so ties always share a
/// bucket and a constant column maps to bucket 0.
std::vector<std::size_t> discretize(std::span<const double> column, std::size_t bins = kDefaultMrmrBins);

/// Plug-in mutual information (bits) of two discrete sequences.
double mutual_information(std::span<const std::size_t> a, std::span<const std::size_t> b);

struct MrmrRanking {
  std::vector<std::size_t> ordered_indices;
  std::vector<double> scores;  // relevance for the first pick, relevance - mean redundancy after
};

/// Greedy mRMR with the difference criterion. Ties go to the lower feature index.
MrmrRanking mrmr_rank(const FeatureTable& table, std::size_t k, std::size_t bins = kDefaultMrmrBins);

/// `rank,feature_name,score` with a header row; rank is 1-based.
void write_ranking(std::ostream& out, const MrmrRanking& ranking, std::span<const std::string> names);
MrmrRanking read_ranking(std::istream& in, std::span<const std::string> names);

}  // namespace vru
