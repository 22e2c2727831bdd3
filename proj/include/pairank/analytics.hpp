#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "pairank/matrices.hpp"
#include "pairank/ratings.hpp"

namespace pairank {

struct RankedScore {
  std::string item;
  double score;
  std::size_t rank;  // 1 + number of items with a strictly greater score
};

// Sorted by descending score; equal scores share a rank and keep index order.
std::vector<RankedScore> rank(std::span<const std::string> items, std::span<const double> scores);
std::vector<RankedScore> rank(const RatingResult& result);

struct PairwiseMatrix {
  std::vector<std::string> order;  // descending score
  Matrix probabilities;            // (i, j): chance that order[i] beats order[j]
};

// p(i, j) = s_i / (s_i + s_j). Throws kNonPositiveScore if any score <= 0.
PairwiseMatrix pairwise_win_rates(std::span<const std::string> items,
                                  std::span<const double> scores);
PairwiseMatrix pairwise_win_rates(const RatingResult& result);

struct BootstrapInterval {
  std::string item;
  double lower;   // 2.5% quantile
  double rating;  // median
  double upper;   // 97.5% quantile

  friend bool operator==(const BootstrapInterval&, const BootstrapInterval&) = default;
};

struct BootstrapSummary {
  std::vector<BootstrapInterval> items;  // descending median
  std::size_t rounds = 0;

  friend bool operator==(const BootstrapSummary&, const BootstrapSummary&) = default;
};

// Linear interpolation between order statistics; `sorted` must be ascending.
double quantile(std::span<const double> sorted, double q);

// Round r resamples |records| records with replacement from an
// std::mt19937_64 seeded with r and refits with the shared index. Rounds are
// independent, so `threads` > 1 gives the same summary as sequential runs.
BootstrapSummary bootstrap_ci(std::span<const ComparisonRecord> records, Algorithm algorithm,
                              const Options& options, std::size_t rounds,
                              IndexPtr index = nullptr, std::size_t threads = 1);

// Draws `count` positions in [0, population) from `seed`.
std::vector<std::size_t> resample_positions(std::size_t population, std::size_t count,
                                            std::uint64_t seed);

}  // namespace pairank
