#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>

#include "pairank/analytics.hpp"
#include "pairank/csv.hpp"
#include "pairank/ratings.hpp"

namespace py = pybind11;
using namespace pairank;

namespace {

PyObject* error_type = nullptr;

std::vector<ComparisonRecord> records_from(const std::vector<std::string>& xs,
                                           const std::vector<std::string>& ys,
                                           const std::vector<Winner>& winners,
                                           const std::optional<std::vector<double>>& weights) {
  std::optional<std::span<const double>> w;
  if (weights) w = std::span<const double>(*weights);
  return validate_batch(xs, ys, winners, w);
}

IndexPtr index_from(const std::optional<std::vector<std::string>>& index) {
  if (!index) return nullptr;
  return std::make_shared<const Index>(Index::from_names(*index));
}

Options options_from(Algorithm algorithm, const py::kwargs& params) {
  auto options = default_options(algorithm);
  for (const auto& [key, value] : params) {
    const auto name = py::cast<std::string>(key);
    if (name == "initial") options.elo.initial = py::cast<double>(value);
    else if (name == "k") options.elo.k = py::cast<double>(value);
    else if (name == "scale") options.elo.scale = py::cast<double>(value);
    else if (name == "base") options.elo.base = py::cast<double>(value);
    else if (name == "tolerance") options.iter.tolerance = py::cast<double>(value);
    else if (name == "max_iterations") options.iter.max_iterations = py::cast<std::size_t>(value);
    else if (name == "damping") options.iter.damping = py::cast<double>(value);
    else throw py::type_error("unexpected parameter '" + name + "'");
  }
  return options;
}

Algorithm algorithm_from(const std::string& name) {
  if (auto algorithm = parse_algorithm(name)) return *algorithm;
  throw Error(ErrorKind::kInvalidParameter, "unknown algorithm '" + name + "'");
}

py::dict result_dict(const RatingResult& result) {
  py::dict scores;
  const auto names = result.index->names();
  for (std::size_t i = 0; i < names.size(); ++i) scores[py::str(names[i])] = result.scores[i];
  py::dict out;
  out["scores"] = scores;
  out["algorithm"] = std::string(algorithm_name(result.algorithm));
  out["iterations"] = result.iterations;
  out["converged"] = result.converged;
  out["tie_strength"] = result.tie_strength;
  return out;
}

void bind_algorithm(py::module_& m, const char* name, Algorithm algorithm) {
  m.def(
      name,
      [algorithm](const std::vector<std::string>& xs, const std::vector<std::string>& ys,
                  const std::vector<Winner>& winners,
                  const std::optional<std::vector<double>>& weights,
                  const std::optional<std::vector<std::string>>& index, const py::kwargs& params) {
        const auto records = records_from(xs, ys, winners, weights);
        const auto options = options_from(algorithm, params);
        RatingResult result;
        {
          py::gil_scoped_release release;
          result = rate(algorithm, records, options, index_from(index));
        }
        return result_dict(result);
      },
      py::arg("xs"), py::arg("ys"), py::arg("winners"), py::arg("weights") = py::none(),
      py::arg("index") = py::none());
}

}  // namespace

PYBIND11_MODULE(_pairank, m) {
  error_type = PyErr_NewException("pairank._pairank.PairankError", PyExc_ValueError, nullptr);
  m.add_object("PairankError", py::handle(error_type));
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object instance = py::reinterpret_borrow<py::object>(error_type)(e.what());
      instance.attr("kind") = std::string(error_kind_name(e.kind()));
      PyErr_SetObject(error_type, instance.ptr());
    }
  });

  py::enum_<Winner>(m, "Winner")
      .value("X", Winner::kLeft)
      .value("Y", Winner::kRight)
      .value("Draw", Winner::kDraw);

  bind_algorithm(m, "counting", Algorithm::kCounting);
  bind_algorithm(m, "average_win_rate", Algorithm::kAverageWinRate);
  bind_algorithm(m, "elo", Algorithm::kElo);
  bind_algorithm(m, "bradley_terry", Algorithm::kBradleyTerry);
  bind_algorithm(m, "newman", Algorithm::kNewman);
  bind_algorithm(m, "eigen", Algorithm::kEigen);
  bind_algorithm(m, "pagerank", Algorithm::kPageRank);

  m.def(
      "rank",
      [](const std::vector<std::string>& items, const std::vector<double>& scores) {
        if (items.size() != scores.size()) {
          throw Error(ErrorKind::kMismatchedLengths, "items and scores differ in length");
        }
        std::vector<std::tuple<std::string, double, std::size_t>> out;
        for (const auto& r : rank(items, scores)) out.emplace_back(r.item, r.score, r.rank);
        return out;
      },
      py::arg("items"), py::arg("scores"));

  m.def(
      "pairwise_win_rates",
      [](const std::vector<std::string>& items, const std::vector<double>& scores) {
        if (items.size() != scores.size()) {
          throw Error(ErrorKind::kMismatchedLengths, "items and scores differ in length");
        }
        const auto p = pairwise_win_rates(items, scores);
        std::vector<std::vector<double>> matrix(p.order.size());
        for (std::size_t i = 0; i < p.order.size(); ++i) {
          const auto row = p.probabilities.row(i);
          matrix[i].assign(row.begin(), row.end());
        }
        return std::make_pair(p.order, matrix);
      },
      py::arg("items"), py::arg("scores"));

  m.def(
      "bootstrap_ci",
      [](const std::vector<std::string>& xs, const std::vector<std::string>& ys,
         const std::vector<Winner>& winners, const std::string& algorithm, std::size_t rounds,
         const std::optional<std::vector<double>>& weights,
         const std::optional<std::vector<std::string>>& index, std::size_t threads,
         const py::kwargs& params) {
        const auto alg = algorithm_from(algorithm);
        const auto records = records_from(xs, ys, winners, weights);
        const auto options = options_from(alg, params);
        BootstrapSummary summary;
        {
          py::gil_scoped_release release;
          summary = bootstrap_ci(records, alg, options, rounds, index_from(index), threads);
        }
        std::vector<std::tuple<std::string, double, double, double>> out;
        for (const auto& ci : summary.items) out.emplace_back(ci.item, ci.lower, ci.rating, ci.upper);
        return out;
      },
      py::arg("xs"), py::arg("ys"), py::arg("winners"), py::arg("algorithm"),
      py::arg("rounds") = 1000, py::arg("weights") = py::none(), py::arg("index") = py::none(),
      py::arg("threads") = 1);

  m.def("list_algorithms", [] {
    py::list out;
    for (const auto& info : list_algorithms()) {
      py::dict params;
      for (const auto& p : info.parameters) params[py::str(p.name)] = p.default_value;
      py::dict entry;
      entry["name"] = info.name;
      entry["iterative"] = info.iterative;
      entry["parameters"] = params;
      out.append(entry);
    }
    return out;
  });

  m.def(
      "read_csv",
      [](const std::string& path) {
        std::ifstream in(path);
        if (!in) throw Error(ErrorKind::kEmptyInput, "cannot open '" + path + "'");
        const auto records = parse_comparisons_csv(in);
        std::vector<std::string> xs, ys;
        std::vector<Winner> winners;
        std::vector<double> weights;
        for (const auto& r : records) {
          xs.push_back(r.left);
          ys.push_back(r.right);
          winners.push_back(r.winner);
          weights.push_back(r.weight);
        }
        return py::make_tuple(xs, ys, winners, weights);
      },
      py::arg("path"));
}
