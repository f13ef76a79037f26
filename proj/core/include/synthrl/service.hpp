#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "synthrl/model.hpp"

namespace synthrl::service {

inline constexpr std::size_t kDefaultBatchLimit = 4096;

struct Response {
  int status = 200;
  std::string body;  // JSON
};

struct ServiceConfig {
  std::size_t batch_limit = kDefaultBatchLimit;
};

// Reads SYNTHRL_BATCH_LIMIT when set.
ServiceConfig config_from_env(ServiceConfig base = {});

// Transport-independent reward and sampling service. /v1/score requests are
// stateless; /v1/sample advances a per-cursor position atomically.
class RewardService {
 public:
  explicit RewardService(ServiceConfig cfg = {});
  ~RewardService();

  RewardService(const RewardService&) = delete;
  RewardService& operator=(const RewardService&) = delete;

  // Loads a dataset under `name`. Sample ids must be unique across datasets.
  void add_dataset(std::string name, std::vector<Sample> samples);

  // Cursor over the epoch-seeded shuffle of dataset `dataset`.
  std::string create_cursor(const std::string& dataset, std::uint64_t epoch_seed,
                            std::optional<std::string> cursor_id = std::nullopt);

  Response score(std::string_view body) const;
  Response sample(std::string_view body);
  Response cursors(std::string_view body);
  Response health() const;

  const ServiceConfig& config() const { return cfg_; }

 private:
  struct Cursor;
  struct Dataset;

  ServiceConfig cfg_;
  mutable std::shared_mutex mu_;
  std::vector<std::unique_ptr<Dataset>> datasets_;
  std::unordered_map<std::string, std::pair<const Dataset*, std::size_t>> by_id_;
  std::unordered_map<std::string, std::unique_ptr<Cursor>> cursors_;
  std::size_t next_cursor_ = 0;
};

// HTTP binding of RewardService:
//   GET  /v1/health
//   POST /v1/score
//   POST /v1/sample
//   POST /v1/cursors
class HttpServer {
 public:
  explicit HttpServer(RewardService& service);
  ~HttpServer();

  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Binds; port 0 picks a free port. Returns the bound port or throws.
  int bind(const std::string& host, int port);
  // Blocks until stop().
  void listen();
  void stop();
  bool running() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// "host:port" from SYNTHRL_BIND, defaulting to 127.0.0.1:8080.
std::pair<std::string, int> bind_address_from_env(std::pair<std::string, int> fallback = {"127.0.0.1", 8080});

}  // namespace synthrl::service
