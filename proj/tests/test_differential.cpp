#include <doctest.h>

#include <fstream>
#include <map>

#include "oracle/differential.hpp"
#include "oracle/naive.hpp"
#include "support.hpp"

using namespace pairank;
using namespace pairank::testing;

#ifndef PAIRANK_REPORT_DIR
#define PAIRANK_REPORT_DIR "."
#endif

TEST_CASE("optimized and naive implementations agree on 500 seeded instances") {
  const auto outcomes = differential::run_seeds(500);
  std::ofstream report(PAIRANK_REPORT_DIR "/differential.jsonl");
  differential::write_jsonl(report, outcomes);

  std::map<Algorithm, double> worst;
  for (const auto& o : outcomes) {
    worst[o.algorithm] = std::max(worst[o.algorithm], o.max_deviation);
    INFO("algorithm=", algorithm_name(o.algorithm), " seed=", o.seed, " items=", o.items,
         " records=", o.records, " deviation=", o.max_deviation, " ", o.note);
    CHECK(o.pass);
  }
  for (const auto& [algorithm, deviation] : worst) {
    MESSAGE(algorithm_name(algorithm), " worst deviation ", deviation);
  }
  CHECK(outcomes.size() == 500 * all_algorithms().size());
}

TEST_CASE("agreement with a supplied index") {
  for (std::uint64_t seed = 1000; seed < 1050; ++seed) {
    const auto records = random_records(seed, {.max_items = 8, .max_records = 100});
    const auto built = Index::build(records);
    std::vector<std::string> names(built.names().begin(), built.names().end());
    names.push_back("unseen-a");
    names.push_back("unseen-b");
    auto index = std::make_shared<const Index>(Index::from_names(names));
    for (auto algorithm : all_algorithms()) {
      const auto options = default_options(algorithm);
      const auto a = rate(algorithm, records, options, index);
      const auto b = naive::rate(algorithm, records, options, index);
      INFO("algorithm=", algorithm_name(algorithm), " seed=", seed);
      REQUIRE(a.scores.size() == b.scores.size());
      for (std::size_t i = 0; i < a.scores.size(); ++i) {
        CHECK(std::abs(a.scores[i] - b.scores[i]) <= differential::tolerance_for(algorithm));
      }
    }
  }
}

TEST_CASE("agreement under non-default parameters") {
  Options options;
  options.elo.k = 12;
  options.elo.initial = 1500;
  options.elo.scale = 200;
  options.elo.base = 2;
  options.iter.tolerance = 1e-10;
  options.iter.max_iterations = 400;
  options.iter.damping = 0.6;
  for (std::uint64_t seed = 2000; seed < 2030; ++seed) {
    const auto records = random_records(seed, {.max_items = 10, .max_records = 300});
    for (auto algorithm : all_algorithms()) {
      const auto a = rate(algorithm, records, options);
      const auto b = naive::rate(algorithm, records, options);
      INFO("algorithm=", algorithm_name(algorithm), " seed=", seed);
      for (std::size_t i = 0; i < a.scores.size(); ++i) {
        CHECK(std::abs(a.scores[i] - b.scores[i]) <= differential::tolerance_for(algorithm));
      }
    }
  }
}

TEST_CASE("corner-case battery") {
  for (const auto& c : differential::corner_battery()) {
    INFO(c.name, ": ", c.note);
    CHECK(c.pass);
  }
}
