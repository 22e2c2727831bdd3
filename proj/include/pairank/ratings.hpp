#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pairank/core.hpp"
#include "pairank/matrices.hpp"

namespace pairank {

enum class Algorithm {
  kCounting,
  kAverageWinRate,
  kElo,
  kBradleyTerry,
  kNewman,
  kEigen,
  kPageRank,
};

// Kebab-case names as used on the command line and in the HTTP API.
std::string_view algorithm_name(Algorithm algorithm);
std::optional<Algorithm> parse_algorithm(std::string_view name);
std::span<const Algorithm> all_algorithms();
bool is_iterative(Algorithm algorithm);

struct EloParams {
  double initial = 1000.0;
  double k = 30.0;
  double scale = 400.0;
  double base = 10.0;

  // Throws kInvalidParameter unless k > 0, scale > 0, base > 1.
  void validate() const;
};

struct IterParams {
  double tolerance = 1e-6;  // max absolute score change per sweep
  std::size_t max_iterations = 100;
  double damping = 0.85;  // PageRank only

  void validate() const;
};

inline constexpr double kPageRankTolerance = 1e-9;
// Lower bound on Bradley-Terry / Newman strengths before normalization.
inline constexpr double kStrengthFloor = 1e-9;

inline IterParams pagerank_defaults() {
  IterParams params;
  params.tolerance = kPageRankTolerance;
  return params;
}

struct Options {
  EloParams elo;
  IterParams iter;
};

// Defaults for one algorithm (PageRank uses a tighter tolerance).
Options default_options(Algorithm algorithm);

// Scores by item id, plus solver metadata.
struct Fit {
  std::vector<double> scores;
  std::size_t iterations = 0;
  bool converged = true;
  std::optional<double> tie_strength;  // Newman's fitted nu
};

// Indexed core routines. Matrix arguments follow WinMatrices conventions.
Fit counting_fit(const WinMatrices& matrices);
Fit average_win_rate_fit(const WinMatrices& matrices);
Fit elo_fit(std::span<const IndexedRecord> records, std::size_t n, const EloParams& params);
Fit bradley_terry_fit(const WinMatrices& matrices, const IterParams& params);
Fit newman_fit(const WinMatrices& matrices, const IterParams& params);
Fit eigen_fit(const WinMatrices& matrices, const IterParams& params);
Fit pagerank_fit(const WinMatrices& matrices, const IterParams& params);

Fit fit(Algorithm algorithm, std::span<const IndexedRecord> records, std::size_t n,
        const Options& options);

// True when a finite Bradley-Terry maximum-likelihood estimate exists: inside
// every connected group of items, each item can reach every other one
// through a chain of wins (draws count both ways).
bool strengths_identifiable(const WinMatrices& matrices);

struct RatingResult {
  std::shared_ptr<const Index> index;
  std::vector<double> scores;  // by item id
  Algorithm algorithm = Algorithm::kCounting;
  std::size_t iterations = 0;
  bool converged = true;
  std::optional<double> tie_strength;

  std::size_t size() const noexcept { return scores.size(); }
  double score(std::string_view item) const { return scores.at(index->id(item)); }
};

using IndexPtr = std::shared_ptr<const Index>;

// Name-level API. When `index` is null one is built from the records; a
// supplied index may hold items that never appear in the records.
RatingResult counting(std::span<const ComparisonRecord> records, IndexPtr index = nullptr);
RatingResult average_win_rate(std::span<const ComparisonRecord> records,
                              IndexPtr index = nullptr);
RatingResult elo(std::span<const ComparisonRecord> records, IndexPtr index = nullptr,
                 const EloParams& params = {});
RatingResult bradley_terry(std::span<const ComparisonRecord> records, IndexPtr index = nullptr,
                           const IterParams& params = {});
RatingResult newman(std::span<const ComparisonRecord> records, IndexPtr index = nullptr,
                    const IterParams& params = {});
RatingResult eigen(std::span<const ComparisonRecord> records, IndexPtr index = nullptr,
                   const IterParams& params = {});
RatingResult pagerank(std::span<const ComparisonRecord> records, IndexPtr index = nullptr,
                      const IterParams& params = pagerank_defaults());

RatingResult rate(Algorithm algorithm, std::span<const ComparisonRecord> records,
                  const Options& options, IndexPtr index = nullptr);

struct ParameterInfo {
  std::string name;
  double default_value;
  std::string description;
};

struct AlgorithmInfo {
  Algorithm algorithm;
  std::string name;
  bool iterative;
  std::vector<ParameterInfo> parameters;
};

std::vector<AlgorithmInfo> list_algorithms();

}  // namespace pairank
