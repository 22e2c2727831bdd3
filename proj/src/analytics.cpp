#include "pairank/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <random>
#include <thread>

namespace pairank {

namespace {

std::vector<std::size_t> by_descending_score(std::span<const double> scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::ranges::stable_sort(order, [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  return order;
}

void check_same_length(std::span<const std::string> items, std::span<const double> scores) {
  if (items.size() != scores.size()) {
    throw Error(ErrorKind::kMismatchedLengths, "items and scores differ in length");
  }
}

}  // namespace

std::vector<RankedScore> rank(std::span<const std::string> items, std::span<const double> scores) {
  check_same_length(items, scores);
  std::vector<RankedScore> out;
  out.reserve(items.size());
  const auto order = by_descending_score(scores);
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    const auto id = order[pos];
    std::size_t rank = pos + 1;
    if (pos > 0 && scores[id] == out.back().score) rank = out.back().rank;
    out.push_back({items[id], scores[id], rank});
  }
  return out;
}

std::vector<RankedScore> rank(const RatingResult& result) {
  return rank(result.index->names(), result.scores);
}

PairwiseMatrix pairwise_win_rates(std::span<const std::string> items,
                                  std::span<const double> scores) {
  check_same_length(items, scores);
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!(scores[i] > 0.0)) {
      throw Error(ErrorKind::kNonPositiveScore,
                  "non-positive score for '" + items[i] + "'; win rates need scores > 0");
    }
  }
  const auto order = by_descending_score(scores);
  const auto n = order.size();
  PairwiseMatrix out{{}, Matrix(n)};
  out.order.reserve(n);
  for (auto id : order) out.order.push_back(items[id]);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      const double si = scores[order[a]];
      const double sj = scores[order[b]];
      out.probabilities(a, b) = a == b ? 0.5 : si / (si + sj);
    }
  }
  return out;
}

PairwiseMatrix pairwise_win_rates(const RatingResult& result) {
  return pairwise_win_rates(result.index->names(), result.scores);
}

double quantile(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw Error(ErrorKind::kEmptyInput, "quantile of an empty sample");
  const double h = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

std::vector<std::size_t> resample_positions(std::size_t population, std::size_t count,
                                            std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> out(count);
  for (auto& pos : out) {
    const auto wide = static_cast<unsigned __int128>(rng()) * population;
    pos = static_cast<std::size_t>(wide >> 64);
  }
  return out;
}

BootstrapSummary bootstrap_ci(std::span<const ComparisonRecord> records, Algorithm algorithm,
                              const Options& options, std::size_t rounds, IndexPtr index,
                              std::size_t threads) {
  if (rounds < 1) throw Error(ErrorKind::kInvalidParameter, "bootstrap needs at least one round");
  if (records.empty()) throw Error(ErrorKind::kEmptyInput, "bootstrap needs at least one record");

  std::vector<IndexedRecord> indexed;
  if (index) {
    indexed = index_records(records, *index);
  } else {
    index = std::make_shared<const Index>(Index::build(records, indexed));
  }
  const auto n = index->size();

  // samples[r] holds round r's scores; an empty vector marks a failed round.
  std::vector<std::vector<double>> samples(rounds);
  std::vector<std::exception_ptr> errors(rounds);
  auto run_round = [&](std::size_t r) {
    try {
      const auto positions = resample_positions(indexed.size(), indexed.size(), r);
      std::vector<IndexedRecord> sample;
      sample.reserve(positions.size());
      for (auto pos : positions) sample.push_back(indexed[pos]);
      samples[r] = fit(algorithm, sample, n, options).scores;
    } catch (...) {
      errors[r] = std::current_exception();
    }
  };

  threads = std::clamp<std::size_t>(threads, 1, rounds);
  if (threads == 1) {
    for (std::size_t r = 0; r < rounds; ++r) run_round(r);
  } else {
    std::vector<std::jthread> workers;
    for (std::size_t t = 0; t < threads; ++t) {
      workers.emplace_back([&, t] {
        for (std::size_t r = t; r < rounds; r += threads) run_round(r);
      });
    }
  }

  std::size_t succeeded = 0;
  for (std::size_t r = 0; r < rounds; ++r) succeeded += errors[r] ? 0 : 1;
  if (succeeded == 0) std::rethrow_exception(errors.front());

  BootstrapSummary summary;
  summary.rounds = succeeded;
  std::vector<double> column;
  column.reserve(succeeded);
  for (std::size_t item = 0; item < n; ++item) {
    column.clear();
    for (std::size_t r = 0; r < rounds; ++r) {
      if (!errors[r]) column.push_back(samples[r][item]);
    }
    std::ranges::sort(column);
    summary.items.push_back({index->name(static_cast<ItemId>(item)), quantile(column, 0.025),
                             quantile(column, 0.5), quantile(column, 0.975)});
  }
  std::ranges::stable_sort(summary.items, [](const auto& a, const auto& b) { return a.rating > b.rating; });
  return summary;
}

}  // namespace pairank
