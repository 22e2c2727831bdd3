#include "pairank/service.hpp"

#include <httplib.h>

#include <cmath>
#include <unordered_map>

namespace pairank {

using nlohmann::json;

namespace {

struct FieldError {
  std::string field;
  std::string message;
};

json bad_request(const std::vector<FieldError>& errors) {
  json details = json::array();
  for (const auto& e : errors) details.push_back({{"field", e.field}, {"message", e.message}});
  return {{"error", "invalid request"}, {"details", details}};
}

json error_body(std::string_view code, std::string_view message) {
  return {{"error", code}, {"message", message}};
}

constexpr std::size_t kMaxReportedErrors = 50;

std::optional<double> number_field(const json& object, const char* key, const std::string& path,
                                   std::vector<FieldError>& errors) {
  auto it = object.find(key);
  if (it == object.end()) return std::nullopt;
  if (!it->is_number()) {
    errors.push_back({path + "." + key, "must be a number"});
    return std::nullopt;
  }
  return it->get<double>();
}

void parse_params(const json& params, Algorithm algorithm, Options& options,
                  std::vector<FieldError>& errors) {
  if (!params.is_object()) {
    errors.push_back({"params", "must be an object"});
    return;
  }
  static const std::unordered_map<std::string, bool> kKnown = {
      {"k", true},         {"initial", true},        {"scale", true},   {"base", true},
      {"tolerance", true}, {"max_iterations", true}, {"damping", true},
  };
  for (const auto& [key, value] : params.items()) {
    if (!kKnown.contains(key)) errors.push_back({"params." + key, "unknown parameter"});
  }
  if (auto v = number_field(params, "k", "params", errors)) options.elo.k = *v;
  if (auto v = number_field(params, "initial", "params", errors)) options.elo.initial = *v;
  if (auto v = number_field(params, "scale", "params", errors)) options.elo.scale = *v;
  if (auto v = number_field(params, "base", "params", errors)) options.elo.base = *v;
  if (auto v = number_field(params, "tolerance", "params", errors)) options.iter.tolerance = *v;
  if (auto v = number_field(params, "damping", "params", errors)) options.iter.damping = *v;
  if (auto it = params.find("max_iterations"); it != params.end()) {
    if (!it->is_number_unsigned() || it->get<std::size_t>() < 1) {
      errors.push_back({"params.max_iterations", "must be an integer >= 1"});
    } else {
      options.iter.max_iterations = it->get<std::size_t>();
    }
  }
  try {
    if (algorithm == Algorithm::kElo) {
      options.elo.validate();
    } else {
      options.iter.validate();
    }
  } catch (const Error& e) {
    errors.push_back({"params", e.what()});
  }
}

std::vector<ComparisonRecord> parse_records(const json& records, std::vector<FieldError>& errors) {
  std::vector<ComparisonRecord> out;
  if (!records.is_array()) {
    errors.push_back({"records", "must be an array"});
    return out;
  }
  out.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (errors.size() >= kMaxReportedErrors) break;
    const auto& row = records[i];
    const auto path = "records[" + std::to_string(i) + "]";
    if (!row.is_object()) {
      errors.push_back({path, "must be an object"});
      continue;
    }
    ComparisonRecord record;
    bool ok = true;
    for (const char* key : {"left", "right"}) {
      auto it = row.find(key);
      if (it == row.end() || !it->is_string()) {
        errors.push_back({path + "." + key, "required string"});
        ok = false;
      } else {
        (key[0] == 'l' ? record.left : record.right) = it->get<std::string>();
      }
    }
    if (auto it = row.find("winner"); it == row.end() || !it->is_string()) {
      errors.push_back({path + ".winner", "required string: left, right or tie"});
      ok = false;
    } else {
      try {
        record.winner = parse_winner(it->get<std::string>());
      } catch (const Error& e) {
        errors.push_back({path + ".winner", e.what()});
        ok = false;
      }
    }
    if (auto it = row.find("weight"); it != row.end()) {
      if (!it->is_number() || !std::isfinite(it->get<double>()) || it->get<double>() < 0.0) {
        errors.push_back({path + ".weight", "illegal weight (must be a finite number >= 0)"});
        ok = false;
      } else {
        record.weight = it->get<double>();
      }
    }
    if (ok) out.push_back(std::move(record));
  }
  return out;
}

}  // namespace

json rank_report(const RatingResult& result, const BootstrapSummary* intervals) {
  std::unordered_map<std::string, const BootstrapInterval*> by_item;
  if (intervals) {
    for (const auto& ci : intervals->items) by_item.emplace(ci.item, &ci);
  }
  json items = json::array();
  for (const auto& row : rank(result)) {
    json entry = {{"item", row.item}, {"score", row.score}, {"rank", row.rank}};
    if (auto it = by_item.find(row.item); it != by_item.end()) {
      entry["lower"] = it->second->lower;
      entry["upper"] = it->second->upper;
    }
    items.push_back(std::move(entry));
  }

  json report = {{"items", std::move(items)}};
  try {
    const auto pairwise = pairwise_win_rates(result);
    json matrix = json::array();
    for (std::size_t i = 0; i < pairwise.order.size(); ++i) {
      const auto row = pairwise.probabilities.row(i);
      matrix.push_back(json(std::vector<double>(row.begin(), row.end())));
    }
    report["pairwise"] = {{"order", pairwise.order}, {"matrix", std::move(matrix)}};
  } catch (const Error& e) {
    report["pairwise_unavailable"] = {{"reason", error_kind_name(e.kind())},
                                      {"message", e.what()}};
  }

  json meta = {{"algorithm", algorithm_name(result.algorithm)},
               {"iterations", result.iterations},
               {"converged", result.converged}};
  if (result.tie_strength) meta["nu"] = *result.tie_strength;
  if (intervals) meta["bootstrap_rounds"] = intervals->rounds;
  report["meta"] = std::move(meta);
  return report;
}

json algorithms_json() {
  json out = json::array();
  for (const auto& info : list_algorithms()) {
    json params = json::array();
    for (const auto& p : info.parameters) {
      json entry = {{"name", p.name}, {"description", p.description}};
      if (p.name == "max_iterations") {
        entry["type"] = "integer";
        entry["default"] = static_cast<std::size_t>(p.default_value);
      } else {
        entry["type"] = "number";
        entry["default"] = p.default_value;
      }
      params.push_back(std::move(entry));
    }
    out.push_back({{"name", info.name}, {"iterative", info.iterative}, {"parameters", params}});
  }
  return out;
}

HttpResult handle_algorithms() { return {200, {{"algorithms", algorithms_json()}}}; }

HttpResult handle_rank(std::string_view body, const ServiceLimits& limits) {
  if (body.size() > limits.max_body_bytes) {
    return {413, error_body("payload_too_large", "request body exceeds the size cap")};
  }
  json request;
  try {
    request = json::parse(body);
  } catch (const json::parse_error& e) {
    return {400, bad_request({{"", std::string("malformed JSON: ") + e.what()}})};
  }
  if (!request.is_object()) return {400, bad_request({{"", "body must be a JSON object"}})};

  std::vector<FieldError> errors;
  auto alg_it = request.find("algorithm");
  if (alg_it == request.end() || !alg_it->is_string()) {
    errors.push_back({"algorithm", "required string"});
  }
  auto rec_it = request.find("records");
  if (rec_it == request.end()) {
    errors.push_back({"records", "required array"});
  } else if (rec_it->is_array() && rec_it->size() > limits.max_records) {
    return {413, error_body("too_many_records", "records exceed the cap of " +
                                                    std::to_string(limits.max_records))};
  }
  if (!errors.empty()) return {400, bad_request(errors)};

  const auto name = alg_it->get<std::string>();
  const auto algorithm = parse_algorithm(name);
  if (!algorithm) {
    std::string valid;
    for (auto a : all_algorithms()) valid += (valid.empty() ? "" : ", ") + std::string(algorithm_name(a));
    return {422, error_body("unknown_algorithm",
                            "unknown algorithm '" + name + "'; valid: " + valid)};
  }

  auto options = default_options(*algorithm);
  if (auto it = request.find("params"); it != request.end() && !it->is_null()) {
    parse_params(*it, *algorithm, options, errors);
  }
  std::optional<std::size_t> rounds;
  if (auto it = request.find("bootstrap_rounds"); it != request.end() && !it->is_null()) {
    if (!it->is_number_unsigned() || it->get<std::size_t>() < 1 ||
        it->get<std::size_t>() > limits.max_bootstrap_rounds) {
      errors.push_back({"bootstrap_rounds", "must be an integer in [1, " +
                                                std::to_string(limits.max_bootstrap_rounds) + "]"});
    } else {
      rounds = it->get<std::size_t>();
    }
  }
  const auto records = parse_records(*rec_it, errors);
  if (!errors.empty()) return {400, bad_request(errors)};

  try {
    const auto result = rate(*algorithm, records, options);
    if (rounds && !records.empty()) {
      const auto summary = bootstrap_ci(records, *algorithm, options, *rounds, result.index,
                                        limits.bootstrap_threads);
      return {200, rank_report(result, &summary)};
    }
    return {200, rank_report(result)};
  } catch (const Error& e) {
    return {400, bad_request({{std::string(error_kind_name(e.kind())), e.what()}})};
  }
}

struct Server::Impl {
  ServerConfig config;
  httplib::Server http;
};

Server::Server(ServerConfig config) : impl_(std::make_unique<Impl>()) {
  impl_->config = std::move(config);
  auto& http = impl_->http;
  const auto limits = impl_->config.limits;
  http.set_payload_max_length(limits.max_body_bytes);

  auto send = [](httplib::Response& res, const HttpResult& result) {
    res.status = result.status;
    res.set_content(result.body.dump(), "application/json");
  };
  http.Get("/v1/algorithms", [send](const httplib::Request&, httplib::Response& res) {
    send(res, handle_algorithms());
  });
  http.Post("/v1/rank", [send, limits](const httplib::Request& req, httplib::Response& res) {
    send(res, handle_rank(req.body, limits));
  });
  if (impl_->config.web_root) http.set_mount_point("/", *impl_->config.web_root);
}

Server::~Server() { stop(); }

bool Server::listen() { return impl_->http.listen(impl_->config.host, impl_->config.port); }

int Server::bind_any_port() { return impl_->http.bind_to_any_port(impl_->config.host); }

bool Server::listen_after_bind() { return impl_->http.listen_after_bind(); }

void Server::wait_until_ready() const { impl_->http.wait_until_ready(); }

void Server::stop() {
  if (impl_ && impl_->http.is_running()) impl_->http.stop();
}

}  // namespace pairank
