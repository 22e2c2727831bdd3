#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "pairank/ratings.hpp"

namespace pairank::bench {

// Stand-in for an arena dump: `items` players with log-normal strengths,
// uniformly random distinct pairs, Bradley-Terry outcomes and a fixed share
// of draws.
struct SyntheticConfig {
  std::size_t items = 100;
  std::size_t records = 100'000;
  double tie_rate = 0.05;
  double log_strength_sd = 0.5;
  std::uint64_t seed = 0;
};

std::vector<ComparisonRecord> synthetic_base(const SyntheticConfig& config);

// Exactly `size` records drawn uniformly with replacement from `base`.
std::vector<ComparisonRecord> synthesize(std::span<const ComparisonRecord> base, std::size_t size,
                                         std::uint64_t seed);

// 10, 100, ..., up to and including max_size.
std::vector<std::size_t> decade_sizes(std::size_t min_size, std::size_t max_size);

struct Interval {
  double low;
  double high;
};

// Percentile bootstrap interval of the mean.
Interval mean_confidence_interval(std::span<const double> samples, double level = 0.95,
                                  std::size_t resamples = 1000, std::uint64_t seed = 0);

struct TimingRow {
  Algorithm algorithm;
  std::size_t size;
  double mean_s;
  double ci_low_s;
  double ci_high_s;
  std::vector<double> samples_s;
};

struct BenchmarkConfig {
  std::vector<std::size_t> sizes;
  std::size_t repetitions = 10;
  // Fast calls are repeated within one sample until it lasts this long; the
  // sample is the mean time per call.
  double min_sample_s = 0.002;
  std::vector<Algorithm> algorithms;
  std::function<void(const TimingRow&)> on_row;  // progress callback, optional
};

struct BenchmarkReport {
  std::vector<TimingRow> rows;
  double baseline_s = 0.0;  // harness overhead, already subtracted from rows

  std::vector<const TimingRow*> rows_for(Algorithm algorithm) const;
};

// Sizes run in ascending order; repetition r at every size uses seed r.
BenchmarkReport run_benchmark(std::span<const ComparisonRecord> base,
                              const BenchmarkConfig& config);

// `algorithm,size,mean_s,ci_low_s,ci_high_s`
void write_benchmark_csv(std::ostream& out, const BenchmarkReport& report);

// Least-squares slope of log(time) against log(size).
double loglog_slope(std::span<const std::size_t> sizes, std::span<const double> times);

// Slope over the rows whose size lies in [min_size, max_size].
double scaling_slope(const BenchmarkReport& report, Algorithm algorithm, std::size_t min_size,
                     std::size_t max_size);

}  // namespace pairank::bench
