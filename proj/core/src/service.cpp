#include "synthrl/service.hpp"

#include <charconv>
#include <cstdlib>
#include <stdexcept>

#include "httplib.h"
#include "json.hpp"
#include "synthrl/errors.hpp"
#include "synthrl/rng.hpp"
#include "synthrl/scoring.hpp"
#include "synthrl/version.hpp"

namespace synthrl::service {
namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

Response error(int status, const std::string& message) {
  return {status, ojson{{"error", message}}.dump()};
}

std::optional<json> parse_body(std::string_view body) {
  auto j = json::parse(body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return std::nullopt;
  return j;
}

std::optional<std::uint64_t> parse_u64(std::string_view s) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace

struct RewardService::Dataset {
  std::string name;
  std::vector<Sample> samples;
};

struct RewardService::Cursor {
  std::string id;
  const Dataset* dataset = nullptr;
  std::vector<std::size_t> order;
  std::size_t position = 0;
  std::mutex mu;
  std::unordered_map<std::string, std::string> replays;  // replay token -> response body
};

ServiceConfig config_from_env(ServiceConfig base) {
  if (const char* v = std::getenv("SYNTHRL_BATCH_LIMIT"); v && *v) {
    const auto n = parse_u64(v);
    if (!n || *n == 0) throw ConfigError(std::string("SYNTHRL_BATCH_LIMIT must be a positive integer, got ") + v);
    base.batch_limit = static_cast<std::size_t>(*n);
  }
  return base;
}

RewardService::RewardService(ServiceConfig cfg) : cfg_(cfg) {
  if (cfg_.batch_limit == 0) throw ConfigError("batch_limit must be > 0");
}

RewardService::~RewardService() = default;

void RewardService::add_dataset(std::string name, std::vector<Sample> samples) {
  std::unique_lock lock(mu_);
  for (const auto& d : datasets_) {
    if (d->name == name) throw std::invalid_argument("dataset " + name + " already loaded");
  }
  for (const auto& s : samples) {
    if (by_id_.count(s.id)) throw std::invalid_argument("duplicate sample id " + s.id);
  }
  auto ds = std::make_unique<Dataset>(Dataset{std::move(name), std::move(samples)});
  for (std::size_t i = 0; i < ds->samples.size(); ++i) by_id_[ds->samples[i].id] = {ds.get(), i};
  datasets_.push_back(std::move(ds));
}

std::string RewardService::create_cursor(const std::string& dataset, std::uint64_t epoch_seed,
                                         std::optional<std::string> cursor_id) {
  std::unique_lock lock(mu_);
  const Dataset* ds = nullptr;
  for (const auto& d : datasets_) {
    if (d->name == dataset) ds = d.get();
  }
  if (!ds) throw std::out_of_range("unknown dataset " + dataset);
  std::string id = cursor_id.value_or("cursor-" + std::to_string(next_cursor_++));
  if (cursors_.count(id)) throw std::invalid_argument("cursor " + id + " already exists");
  auto c = std::make_unique<Cursor>();
  c->id = id;
  c->dataset = ds;
  c->order.resize(ds->samples.size());
  for (std::size_t i = 0; i < c->order.size(); ++i) c->order[i] = i;
  // Same draws as io::shuffle_and_cap(samples, none, epoch_seed).
  Rng rng(epoch_seed);
  rng.shuffle(c->order);
  cursors_.emplace(id, std::move(c));
  return id;
}

Response RewardService::score(std::string_view body) const {
  const auto req = parse_body(body);
  if (!req) return error(400, "body must be a JSON object");
  const auto kind_it = req->find("reward_kind");
  if (kind_it == req->end() || !kind_it->is_string()) return error(400, "reward_kind is required");
  const auto kind = scoring::parse_reward_kind(kind_it->get<std::string>());
  if (!kind) return error(400, "unknown reward_kind " + kind_it->get<std::string>());
  const auto items_it = req->find("items");
  if (items_it == req->end() || !items_it->is_array()) return error(400, "items must be an array");
  if (items_it->empty()) return error(400, "items must not be empty");
  if (items_it->size() > cfg_.batch_limit) {
    return error(413, "batch of " + std::to_string(items_it->size()) + " items exceeds the limit of " +
                          std::to_string(cfg_.batch_limit));
  }

  std::vector<scoring::ScoreRecord> records;
  records.reserve(items_it->size());
  std::vector<std::string> unknown;
  {
    std::shared_lock lock(mu_);
    for (const auto& item : *items_it) {
      if (!item.is_object()) return error(400, "every item must be an object");
      const auto id = item.find("sample_id");
      const auto gen = item.find("generation");
      if (id == item.end() || !id->is_string() || gen == item.end() || !gen->is_string()) {
        return error(400, "every item needs string sample_id and generation");
      }
      const std::string generation = gen->get<std::string>();
      if (auto gold = item.find("gold"); gold != item.end()) {
        Sample inline_sample;
        inline_sample.id = id->get<std::string>();
        if (gold->is_string()) {
          inline_sample.gold = AnswerSet{gold->get<std::string>()};
        } else if (gold->is_array() && std::all_of(gold->begin(), gold->end(), [](const json& g) { return g.is_string(); })) {
          inline_sample.gold = AnswerSet(gold->get<std::vector<std::string>>());
        } else {
          return error(400, "gold must be a string or a list of strings");
        }
        records.push_back(scoring::score(inline_sample, generation, *kind));
        continue;
      }
      const auto found = by_id_.find(id->get<std::string>());
      if (found == by_id_.end()) {
        unknown.push_back(id->get<std::string>());
        continue;
      }
      const auto& [ds, index] = found->second;
      records.push_back(scoring::score(ds->samples[index], generation, *kind));
    }
  }
  if (!unknown.empty()) {
    ojson e{{"error", "unknown sample_id"}, {"unknown", unknown}};
    return {404, e.dump()};
  }

  ojson out;
  ojson rewards = ojson::array();
  ojson recs = ojson::array();
  for (const auto& r : records) {
    rewards.push_back(r.reward);
    recs.push_back({{"sample_id", r.sample_id},
                    {"extracted", r.extracted ? ojson(*r.extracted) : ojson(nullptr)},
                    {"reward", r.reward},
                    {"difficulty", r.difficulty}});
  }
  const auto overall = scoring::stratify(records).overall;
  out["rewards"] = std::move(rewards);
  out["records"] = std::move(recs);
  out["aggregate"] = {{"mean", overall.mean}, {"standard_error", overall.standard_error}, {"n", overall.n}};
  return {200, out.dump()};
}

Response RewardService::sample(std::string_view body) {
  const auto req = parse_body(body);
  if (!req) return error(400, "body must be a JSON object");
  const auto id_it = req->find("cursor_id");
  const auto size_it = req->find("batch_size");
  if (id_it == req->end() || !id_it->is_string()) return error(400, "cursor_id is required");
  if (size_it == req->end() || !size_it->is_number_integer() || size_it->get<long long>() < 0) {
    return error(400, "batch_size must be a non-negative integer");
  }
  const auto batch = static_cast<std::size_t>(size_it->get<long long>());
  if (batch > cfg_.batch_limit) return error(413, "batch_size exceeds the limit of " + std::to_string(cfg_.batch_limit));
  std::optional<std::string> token;
  if (auto t = req->find("replay_token"); t != req->end() && !t->is_null()) {
    if (!t->is_string()) return error(400, "replay_token must be a string");
    token = t->get<std::string>();
  }

  Cursor* cursor = nullptr;
  {
    std::shared_lock lock(mu_);
    auto it = cursors_.find(id_it->get<std::string>());
    if (it == cursors_.end()) return error(404, "unknown cursor " + id_it->get<std::string>());
    cursor = it->second.get();
  }

  std::lock_guard lock(cursor->mu);
  if (token) {
    if (auto cached = cursor->replays.find(*token); cached != cursor->replays.end()) return {200, cached->second};
  }
  const auto& samples = cursor->dataset->samples;
  const std::size_t end = std::min(cursor->order.size(), cursor->position + batch);
  ojson items = ojson::array();
  for (std::size_t i = cursor->position; i < end; ++i) {
    const auto& s = samples[cursor->order[i]];
    items.push_back({{"sample_id", s.id}, {"prompt", s.prompt}});
  }
  cursor->position = end;
  ojson out;
  out["cursor_id"] = cursor->id;
  out["samples"] = std::move(items);
  out["position"] = cursor->position;
  out["exhausted"] = cursor->position >= cursor->order.size();
  std::string text = out.dump();
  if (token) cursor->replays.emplace(*token, text);
  return {200, std::move(text)};
}

Response RewardService::cursors(std::string_view body) {
  const auto req = parse_body(body);
  if (!req) return error(400, "body must be a JSON object");
  const auto ds = req->find("dataset");
  if (ds == req->end() || !ds->is_string()) return error(400, "dataset is required");
  std::uint64_t seed = 0;
  if (auto s = req->find("epoch_seed"); s != req->end()) {
    if (!s->is_number_unsigned() && !(s->is_number_integer() && s->get<long long>() >= 0)) {
      return error(400, "epoch_seed must be a non-negative integer");
    }
    seed = s->get<std::uint64_t>();
  }
  std::optional<std::string> wanted;
  if (auto c = req->find("cursor_id"); c != req->end() && !c->is_null()) {
    if (!c->is_string()) return error(400, "cursor_id must be a string");
    wanted = c->get<std::string>();
  }
  try {
    const auto id = create_cursor(ds->get<std::string>(), seed, wanted);
    std::size_t size = 0;
    {
      std::shared_lock lock(mu_);
      size = cursors_.at(id)->order.size();
    }
    return {200, ojson{{"cursor_id", id}, {"size", size}}.dump()};
  } catch (const std::out_of_range& e) {
    return error(404, e.what());
  } catch (const std::invalid_argument& e) {
    return error(409, e.what());
  }
}

Response RewardService::health() const {
  std::shared_lock lock(mu_);
  ojson list = ojson::array();
  for (const auto& d : datasets_) list.push_back({{"name", d->name}, {"size", d->samples.size()}});
  ojson out{{"status", "ok"}, {"datasets", std::move(list)}, {"version", kVersion}};
  return {200, out.dump()};
}

struct HttpServer::Impl {
  RewardService& service;
  httplib::Server server;

  explicit Impl(RewardService& s) : service(s) {
    auto send = [](httplib::Response& res, const Response& r) {
      res.status = r.status;
      res.set_content(r.body, "application/json");
    };
    server.Get("/v1/health", [this, send](const httplib::Request&, httplib::Response& res) { send(res, service.health()); });
    server.Post("/v1/score", [this, send](const httplib::Request& req, httplib::Response& res) {
      send(res, service.score(req.body));
    });
    server.Post("/v1/sample", [this, send](const httplib::Request& req, httplib::Response& res) {
      send(res, service.sample(req.body));
    });
    server.Post("/v1/cursors", [this, send](const httplib::Request& req, httplib::Response& res) {
      send(res, service.cursors(req.body));
    });
  }
};

HttpServer::HttpServer(RewardService& service) : impl_(std::make_unique<Impl>(service)) {}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = impl_->server.bind_to_any_port(host);
    if (bound < 0) throw std::runtime_error("cannot bind " + host);
    return bound;
  }
  if (!impl_->server.bind_to_port(host, port)) throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
  return port;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_->server.is_running()) impl_->server.stop();
}

bool HttpServer::running() const { return impl_->server.is_running(); }

std::pair<std::string, int> bind_address_from_env(std::pair<std::string, int> fallback) {
  const char* v = std::getenv("SYNTHRL_BIND");
  if (!v || !*v) return fallback;
  const std::string s(v);
  const auto colon = s.rfind(':');
  if (colon == std::string::npos || colon == 0) throw ConfigError("SYNTHRL_BIND must be host:port, got " + s);
  const auto port = parse_u64(std::string_view(s).substr(colon + 1));
  if (!port || *port > 65535) throw ConfigError("SYNTHRL_BIND has an invalid port: " + s);
  return {s.substr(0, colon), static_cast<int>(*port)};
}

}  // namespace synthrl::service
