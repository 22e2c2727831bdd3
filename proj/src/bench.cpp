#include "pairank/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <random>
#include <string>

#include "pairank/analytics.hpp"
#include "pairank/csv.hpp"

namespace pairank::bench {

namespace {

using Clock = std::chrono::steady_clock;

constexpr std::size_t kMaxCallsPerSample = 10'000;

template <typename F>
double seconds(F&& body) {
  const auto start = Clock::now();
  body();
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::size_t bounded(std::mt19937_64& rng, std::size_t n) {
  return static_cast<std::size_t>((static_cast<unsigned __int128>(rng()) * n) >> 64);
}

}  // namespace

std::vector<ComparisonRecord> synthetic_base(const SyntheticConfig& config) {
  if (config.items < 2) throw Error(ErrorKind::kInvalidParameter, "need at least two items");
  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> log_strength(0.0, config.log_strength_sd);
  std::vector<std::string> names(config.items);
  std::vector<double> strength(config.items);
  for (std::size_t i = 0; i < config.items; ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "model-%03zu", i);
    names[i] = name;
    strength[i] = std::exp(log_strength(rng));
  }
  std::vector<ComparisonRecord> out;
  out.reserve(config.records);
  for (std::size_t r = 0; r < config.records; ++r) {
    const auto a = bounded(rng, config.items);
    auto b = bounded(rng, config.items - 1);
    if (b >= a) ++b;
    Winner winner = Winner::kDraw;
    if (uniform01(rng) >= config.tie_rate) {
      winner = uniform01(rng) < strength[a] / (strength[a] + strength[b]) ? Winner::kLeft
                                                                         : Winner::kRight;
    }
    out.push_back({names[a], names[b], winner, 1.0});
  }
  return out;
}

std::vector<ComparisonRecord> synthesize(std::span<const ComparisonRecord> base, std::size_t size,
                                         std::uint64_t seed) {
  if (base.empty()) throw Error(ErrorKind::kEmptyInput, "cannot resample an empty base dataset");
  if (size < 1) throw Error(ErrorKind::kInvalidParameter, "sample size must be at least 1");
  std::vector<ComparisonRecord> out;
  out.reserve(size);
  for (auto pos : resample_positions(base.size(), size, seed)) out.push_back(base[pos]);
  return out;
}

std::vector<std::size_t> decade_sizes(std::size_t min_size, std::size_t max_size) {
  std::vector<std::size_t> sizes;
  for (std::size_t s = 10; s <= max_size; s *= 10) {
    if (s >= min_size) sizes.push_back(s);
  }
  return sizes;
}

Interval mean_confidence_interval(std::span<const double> samples, double level,
                                  std::size_t resamples, std::uint64_t seed) {
  if (samples.empty()) throw Error(ErrorKind::kEmptyInput, "no samples");
  std::mt19937_64 rng(seed);
  std::vector<double> means(resamples);
  for (auto& mean : means) {
    double sum = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) sum += samples[bounded(rng, samples.size())];
    mean = sum / static_cast<double>(samples.size());
  }
  std::ranges::sort(means);
  const double tail = (1.0 - level) / 2.0;
  return {quantile(means, tail), quantile(means, 1.0 - tail)};
}

std::vector<const TimingRow*> BenchmarkReport::rows_for(Algorithm algorithm) const {
  std::vector<const TimingRow*> out;
  for (const auto& row : rows) {
    if (row.algorithm == algorithm) out.push_back(&row);
  }
  return out;
}

BenchmarkReport run_benchmark(std::span<const ComparisonRecord> base,
                              const BenchmarkConfig& config) {
  if (config.repetitions < 2) throw Error(ErrorKind::kInvalidParameter, "need at least two repetitions");
  if (!std::ranges::is_sorted(config.sizes)) {
    throw Error(ErrorKind::kInvalidParameter, "sizes must be ascending");
  }
  BenchmarkReport report;

  // Harness overhead: the same timed call shape around an empty body.
  {
    std::vector<double> empty(101);
    volatile std::size_t sink = 0;
    for (auto& t : empty) t = seconds([&] { sink = sink + 1; });
    std::ranges::sort(empty);
    report.baseline_s = empty[empty.size() / 2];
  }

  // samples[algorithm][size]
  std::vector<std::vector<std::vector<double>>> samples(
      config.algorithms.size(), std::vector<std::vector<double>>(config.sizes.size()));
  volatile double sink = 0.0;
  for (std::size_t s = 0; s < config.sizes.size(); ++s) {
    // One untimed call per algorithm so allocator and cache state settle; its
    // duration sets how many calls make up one sample.
    std::vector<std::size_t> calls(config.algorithms.size(), 1);
    {
      const auto warm = synthesize(base, config.sizes[s], config.repetitions);
      for (std::size_t a = 0; a < config.algorithms.size(); ++a) {
        const auto algorithm = config.algorithms[a];
        const double t = seconds([&] {
          const auto result = rate(algorithm, warm, default_options(algorithm));
          sink = sink + (result.scores.empty() ? 0.0 : result.scores.front());
        });
        if (t > 0.0 && t < config.min_sample_s) {
          calls[a] = std::min<std::size_t>(static_cast<std::size_t>(std::ceil(config.min_sample_s / t)),
                                           kMaxCallsPerSample);
        }
      }
    }
    for (std::size_t rep = 0; rep < config.repetitions; ++rep) {
      const auto records = synthesize(base, config.sizes[s], rep);
      for (std::size_t a = 0; a < config.algorithms.size(); ++a) {
        const auto algorithm = config.algorithms[a];
        const auto options = default_options(algorithm);
        const double t = seconds([&] {
          for (std::size_t c = 0; c < calls[a]; ++c) {
            const auto result = rate(algorithm, records, options);
            sink = sink + (result.scores.empty() ? 0.0 : result.scores.front());
          }
        });
        samples[a][s].push_back(std::max(t - report.baseline_s, 0.0) /
                                static_cast<double>(calls[a]));
      }
    }
    for (std::size_t a = 0; a < config.algorithms.size(); ++a) {
      auto& times = samples[a][s];
      const double mean = std::accumulate(times.begin(), times.end(), 0.0) /
                          static_cast<double>(times.size());
      const auto ci = mean_confidence_interval(times);
      report.rows.push_back(
          {config.algorithms[a], config.sizes[s], mean, ci.low, ci.high, std::move(times)});
      if (config.on_row) config.on_row(report.rows.back());
    }
  }
  // Group by algorithm, then size.
  std::ranges::stable_sort(report.rows, [&](const TimingRow& x, const TimingRow& y) {
    const auto pos = [&](Algorithm a) {
      return std::ranges::find(config.algorithms, a) - config.algorithms.begin();
    };
    return pos(x.algorithm) < pos(y.algorithm);
  });
  return report;
}

void write_benchmark_csv(std::ostream& out, const BenchmarkReport& report) {
  out << "algorithm,size,mean_s,ci_low_s,ci_high_s\n";
  for (const auto& row : report.rows) {
    out << algorithm_name(row.algorithm) << ',' << row.size << ',' << format_score(row.mean_s)
        << ',' << format_score(row.ci_low_s) << ',' << format_score(row.ci_high_s) << '\n';
  }
}

double loglog_slope(std::span<const std::size_t> sizes, std::span<const double> times) {
  if (sizes.size() != times.size() || sizes.size() < 2) {
    throw Error(ErrorKind::kInvalidParameter, "slope needs at least two (size, time) points");
  }
  const auto n = static_cast<double>(sizes.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    const double x = std::log(static_cast<double>(sizes[i]));
    const double y = std::log(std::max(times[i], 1e-12));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double scaling_slope(const BenchmarkReport& report, Algorithm algorithm, std::size_t min_size,
                     std::size_t max_size) {
  std::vector<std::size_t> sizes;
  std::vector<double> times;
  for (const auto* row : report.rows_for(algorithm)) {
    if (row->size < min_size || row->size > max_size) continue;
    sizes.push_back(row->size);
    times.push_back(row->mean_s);
  }
  return loglog_slope(sizes, times);
}

}  // namespace pairank::bench
