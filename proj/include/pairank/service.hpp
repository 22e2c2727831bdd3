#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"

#include "pairank/analytics.hpp"
#include "pairank/ratings.hpp"

namespace pairank {

struct ServiceLimits {
  std::size_t max_body_bytes = 50u * 1024 * 1024;
  std::size_t max_records = 5'000'000;
  std::size_t max_bootstrap_rounds = 10'000;
  std::size_t bootstrap_threads = 1;
};

struct HttpResult {
  int status = 200;
  nlohmann::json body;
};

// {items:[{item,score,rank,lower?,upper?}], pairwise:{order,matrix}, meta:{...}}.
// When any score is <= 0 the pairwise block is replaced by
// pairwise_unavailable:{reason,message}.
nlohmann::json rank_report(const RatingResult& result, const BootstrapSummary* intervals = nullptr);

nlohmann::json algorithms_json();

// POST /v1/rank body handling, independent of the transport.
HttpResult handle_rank(std::string_view body, const ServiceLimits& limits = {});
HttpResult handle_algorithms();

struct ServerConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::optional<std::string> web_root;  // static bundle served at /
  ServiceLimits limits;
};

// HTTP front end. listen() blocks until stop() is called from another thread.
class Server {
 public:
  explicit Server(ServerConfig config);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  bool listen();
  // Binds an ephemeral port and returns it; call listen_after_bind() next.
  int bind_any_port();
  bool listen_after_bind();
  void wait_until_ready() const;
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace pairank
