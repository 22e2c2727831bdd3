#include "pairank/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <vector>

#include "pairank/analytics.hpp"
#include "pairank/bench.hpp"
#include "pairank/csv.hpp"
#include "pairank/ratings.hpp"
#include "pairank/service.hpp"

namespace pairank {

namespace {

std::string valid_algorithms() {
  std::string out;
  for (auto a : all_algorithms()) out += (out.empty() ? "" : ", ") + std::string(algorithm_name(a));
  return out;
}

struct RankFlags {
  std::string input;
  std::optional<double> k, initial, scale, base, tolerance, damping;
  std::optional<std::size_t> max_iterations;
  std::optional<std::size_t> bootstrap;
  std::size_t threads = 1;
  bool json = false;
};

struct BenchFlags {
  std::vector<std::size_t> sizes;
  std::size_t max_size = 1'000'000;
  std::size_t reps = 10;
  std::vector<std::string> algorithms;
  std::size_t items = 100;
  std::size_t base_records = 100'000;
  std::string out;
};

struct ServeFlags {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string web_root;
  std::size_t max_body_mb = 50;
  std::size_t max_records = 5'000'000;
  std::size_t threads = 1;
};

// Reads comparisons from `path`, or from `in` when the path is empty or "-".
// Returns nullopt after reporting an unreadable file.
std::optional<std::vector<ComparisonRecord>> read_input(const std::string& path, std::istream& in,
                                                        std::ostream& err) {
  if (path.empty() || path == "-") return parse_comparisons_csv(in);
  std::ifstream file(path, std::ios::binary);
  if (!file) {
    err << "error: cannot read input file '" << path << "'\n";
    return std::nullopt;
  }
  return parse_comparisons_csv(file);
}

int run_rank(Algorithm algorithm, const RankFlags& flags, std::istream& in, std::ostream& out,
             std::ostream& err) {
  auto options = default_options(algorithm);
  if (flags.k) options.elo.k = *flags.k;
  if (flags.initial) options.elo.initial = *flags.initial;
  if (flags.scale) options.elo.scale = *flags.scale;
  if (flags.base) options.elo.base = *flags.base;
  if (flags.tolerance) options.iter.tolerance = *flags.tolerance;
  if (flags.damping) options.iter.damping = *flags.damping;
  if (flags.max_iterations) options.iter.max_iterations = *flags.max_iterations;
  try {
    options.elo.validate();
    options.iter.validate();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsageError;
  }
  if (flags.bootstrap && *flags.bootstrap < 1) {
    err << "error: --bootstrap needs at least one round\n";
    return kExitUsageError;
  }

  const auto records = read_input(flags.input, in, err);
  if (!records) return kExitUsageError;
  const auto result = rate(algorithm, *records, options);
  std::optional<BootstrapSummary> summary;
  if (flags.bootstrap && !records->empty()) {
    summary = bootstrap_ci(*records, algorithm, options, *flags.bootstrap, result.index,
                           flags.threads);
  }
  if (flags.json) {
    out << rank_report(result, summary ? &*summary : nullptr).dump(2) << '\n';
  } else {
    const auto ranked = rank(result);
    const BootstrapSummary empty;
    write_scores_csv(out, ranked,
                     flags.bootstrap ? (summary ? &*summary : &empty) : nullptr);
  }
  if (!result.converged) {
    err << "warning: " << algorithm_name(algorithm) << " did not converge after "
        << result.iterations << " iterations\n";
  }
  return kExitOk;
}

int run_bench(const BenchFlags& flags, const std::string& input, std::istream& in,
              std::ostream& out, std::ostream& err) {
  bench::BenchmarkConfig config;
  config.repetitions = flags.reps;
  config.sizes = flags.sizes.empty() ? bench::decade_sizes(10, flags.max_size) : flags.sizes;
  if (flags.algorithms.empty()) {
    config.algorithms.assign(all_algorithms().begin(), all_algorithms().end());
  }
  for (const auto& name : flags.algorithms) {
    const auto algorithm = parse_algorithm(name);
    if (!algorithm) {
      err << "error: unknown algorithm '" << name << "'; valid: " << valid_algorithms() << '\n';
      return kExitUsageError;
    }
    config.algorithms.push_back(*algorithm);
  }
  if (config.repetitions < 2) {
    err << "error: --reps must be at least 2\n";
    return kExitUsageError;
  }
  std::ranges::sort(config.sizes);

  std::vector<ComparisonRecord> base;
  if (!input.empty()) {
    auto records = read_input(input, in, err);
    if (!records) return kExitUsageError;
    base = std::move(*records);
  } else {
    bench::SyntheticConfig synthetic;
    synthetic.items = flags.items;
    synthetic.records = flags.base_records;
    base = bench::synthetic_base(synthetic);
  }
  if (base.empty()) {
    err << "error: base dataset has no records\n";
    return kExitDataError;
  }

  config.on_row = [&err](const bench::TimingRow& row) {
    err << algorithm_name(row.algorithm) << " size=" << row.size << " mean=" << row.mean_s
        << "s\n";
  };
  const auto report = bench::run_benchmark(base, config);
  err << "baseline_s=" << format_score(report.baseline_s) << '\n';
  for (auto algorithm : config.algorithms) {
    const auto rows = report.rows_for(algorithm);
    if (rows.size() >= 2) {
      err << "slope " << algorithm_name(algorithm) << ' '
          << bench::scaling_slope(report, algorithm, 1000, flags.max_size) << '\n';
    }
  }
  if (flags.out.empty()) {
    bench::write_benchmark_csv(out, report);
  } else {
    std::ofstream file(flags.out);
    if (!file) {
      err << "error: cannot write '" << flags.out << "'\n";
      return kExitUsageError;
    }
    bench::write_benchmark_csv(file, report);
  }
  return kExitOk;
}

int run_serve(const ServeFlags& flags, std::ostream& err) {
  ServerConfig config;
  config.host = flags.host;
  config.port = flags.port;
  if (!flags.web_root.empty()) config.web_root = flags.web_root;
  config.limits.max_body_bytes = flags.max_body_mb * 1024 * 1024;
  config.limits.max_records = flags.max_records;
  config.limits.bootstrap_threads = flags.threads;
  Server server(config);
  err << "listening on http://" << flags.host << ':' << flags.port << '\n';
  if (!server.listen()) {
    err << "error: cannot listen on " << flags.host << ':' << flags.port << '\n';
    return kExitUsageError;
  }
  return kExitOk;
}

}  // namespace

int run_cli(std::span<const std::string> args, std::istream& in, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Rank items from pairwise comparisons", "pairank"};
  app.require_subcommand(1);

  RankFlags rank_flags;
  app.add_option("-i,--input", rank_flags.input, "comparison CSV (left,right,winner[,weight])");
  app.add_option("--k", rank_flags.k, "Elo step size");
  app.add_option("--initial", rank_flags.initial, "Elo initial rating");
  app.add_option("--scale", rank_flags.scale, "Elo logistic scale");
  app.add_option("--base", rank_flags.base, "Elo logistic base");
  app.add_option("--tolerance", rank_flags.tolerance, "convergence tolerance");
  app.add_option("--max-iterations", rank_flags.max_iterations, "iteration limit");
  app.add_option("--damping", rank_flags.damping, "PageRank damping factor");
  app.add_option("--bootstrap", rank_flags.bootstrap, "bootstrap rounds for lower/upper columns");
  app.add_option("--threads", rank_flags.threads, "threads for bootstrap rounds");
  app.add_flag("--json", rank_flags.json, "print JSON instead of CSV");

  std::vector<std::pair<Algorithm, CLI::App*>> algorithm_commands;
  for (auto algorithm : all_algorithms()) {
    auto* sub = app.add_subcommand(std::string(algorithm_name(algorithm)),
                                   "rank with " + std::string(algorithm_name(algorithm)));
    sub->fallthrough();
    algorithm_commands.emplace_back(algorithm, sub);
  }

  BenchFlags bench_flags;
  auto* bench_cmd = app.add_subcommand("bench", "time every algorithm over growing inputs");
  bench_cmd->fallthrough();
  bench_cmd->add_option("--sizes", bench_flags.sizes, "dataset sizes")->delimiter(',');
  bench_cmd->add_option("--max-size", bench_flags.max_size, "largest decade size (default 1e6)");
  bench_cmd->add_option("--reps", bench_flags.reps, "repetitions per size");
  bench_cmd->add_option("--algorithms", bench_flags.algorithms, "algorithms to time")
      ->delimiter(',');
  bench_cmd->add_option("--items", bench_flags.items, "items in the synthetic base dataset");
  bench_cmd->add_option("--base-records", bench_flags.base_records,
                        "records in the synthetic base dataset");
  bench_cmd->add_option("--out", bench_flags.out, "write the CSV here instead of stdout");

  ServeFlags serve_flags;
  auto* serve_cmd = app.add_subcommand("serve", "run the HTTP JSON API");
  serve_cmd->add_option("--host", serve_flags.host, "bind address");
  serve_cmd->add_option("--port", serve_flags.port, "port");
  serve_cmd->add_option("--web-root", serve_flags.web_root, "static web bundle served at /");
  serve_cmd->add_option("--max-body-mb", serve_flags.max_body_mb, "request size cap in MB");
  serve_cmd->add_option("--max-records", serve_flags.max_records, "records cap per request");
  serve_cmd->add_option("--threads", serve_flags.threads, "threads for bootstrap rounds");

  std::vector<const char*> argv{"pairank"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    if (app.get_subcommands().empty()) {
      const auto rest = app.remaining();
      if (!rest.empty() && !rest.front().starts_with("-")) {
        err << "error: unknown algorithm '" << rest.front() << "'; valid: " << valid_algorithms()
            << '\n';
        return kExitUsageError;
      }
      err << "error: " << e.what() << '\n';
      err << "expected an algorithm (" << valid_algorithms() << "), bench or serve\n";
      return kExitUsageError;
    }
    err << "error: " << e.what() << '\n';
    return kExitUsageError;
  }

  try {
    if (bench_cmd->parsed()) return run_bench(bench_flags, rank_flags.input, in, out, err);
    if (serve_cmd->parsed()) return run_serve(serve_flags, err);
    for (const auto& [algorithm, sub] : algorithm_commands) {
      if (sub->parsed()) return run_rank(algorithm, rank_flags, in, out, err);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.kind() == ErrorKind::kInvalidParameter ? kExitUsageError : kExitDataError;
  }
  return kExitUsageError;
}

}  // namespace pairank
