#include <gtest/gtest.h>

#include <atomic>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "synthrl/dataset_io.hpp"
#include "synthrl/errors.hpp"
#include "synthrl/scoring.hpp"
#include "synthrl/service.hpp"
#include "synthrl/version.hpp"

using namespace synthrl;
using namespace synthrl::service;
using json = nlohmann::json;

namespace {

std::vector<Sample> numbers(int n, const std::string& prefix = "n") {
  std::vector<Sample> v;
  for (int i = 0; i < n; ++i) {
    Sample s;
    s.id = prefix + std::to_string(i);
    s.dataset = DatasetKind::gsm_inf;
    s.difficulty = 2 + i % 3;
    s.prompt = "prompt " + std::to_string(i);
    s.question_text = "q";
    s.gold = AnswerSet{std::to_string(i)};
    v.push_back(s);
  }
  return v;
}

json score_body(const std::vector<std::pair<std::string, std::string>>& items) {
  json j{{"reward_kind", "exact_match"}, {"items", json::array()}};
  for (const auto& [id, gen] : items) j["items"].push_back({{"sample_id", id}, {"generation", gen}});
  return j;
}

// Drains a cursor with a repeating batch pattern; returns the served ids.
std::vector<std::string> drain(RewardService& svc, const std::string& cursor, const std::vector<std::size_t>& pattern) {
  std::vector<std::string> ids;
  for (std::size_t k = 0;; ++k) {
    const auto r = svc.sample(json{{"cursor_id", cursor}, {"batch_size", pattern[k % pattern.size()]}}.dump());
    EXPECT_EQ(r.status, 200);
    const auto j = json::parse(r.body);
    for (const auto& s : j["samples"]) ids.push_back(s["sample_id"]);
    EXPECT_EQ(j["position"].get<std::size_t>(), ids.size());
    if (j["exhausted"].get<bool>()) break;
    if (k > 10000) break;
  }
  return ids;
}

class Http : public ::testing::Test {
 protected:
  void SetUp() override {
    svc.add_dataset("nums", numbers(100));
    server = std::make_unique<HttpServer>(svc);
    port = server->bind("127.0.0.1", 0);
    thread = std::thread([this] { server->listen(); });
    for (int i = 0; i < 200 && !server->running(); ++i) std::this_thread::sleep_for(std::chrono::milliseconds(5));
    client = std::make_unique<httplib::Client>("127.0.0.1", port);
  }
  void TearDown() override {
    server->stop();
    thread.join();
  }

  RewardService svc;
  std::unique_ptr<HttpServer> server;
  std::unique_ptr<httplib::Client> client;
  std::thread thread;
  int port = 0;
};

}  // namespace

TEST(Service, ScoreInProcess) {
  RewardService svc;
  svc.add_dataset("nums", numbers(10));
  const auto r = svc.score(score_body({{"n3", "<answer>3</answer>"}, {"n4", "<answer>5</answer>"}}).dump());
  ASSERT_EQ(r.status, 200);
  const auto j = json::parse(r.body);
  EXPECT_EQ(j["rewards"], json::parse("[1.0, 0.0]"));
  EXPECT_EQ(j["records"][0]["extracted"], "3");
  EXPECT_EQ(j["records"][1]["difficulty"], 3);
  EXPECT_DOUBLE_EQ(j["aggregate"]["mean"].get<double>(), 0.5);
  EXPECT_EQ(j["aggregate"]["n"], 2);
}

TEST(Service, InlineGold) {
  RewardService svc;
  json body{{"reward_kind", "set_f1"},
            {"items", {{{"sample_id", "free"}, {"generation", "<answer>x, y</answer>"}, {"gold", {"y", "z"}}}}}};
  const auto r = svc.score(body.dump());
  ASSERT_EQ(r.status, 200);
  EXPECT_DOUBLE_EQ(json::parse(r.body)["rewards"][0].get<double>(), 0.5);
}

TEST(Service, ErrorStatuses) {
  RewardService svc(ServiceConfig{8});
  svc.add_dataset("nums", numbers(10));
  EXPECT_EQ(svc.score("not json").status, 400);
  EXPECT_EQ(svc.score(R"({"reward_kind":"bogus","items":[{"sample_id":"n1","generation":"x"}]})").status, 400);
  EXPECT_EQ(svc.score(R"({"reward_kind":"exact_match","items":[]})").status, 400);
  EXPECT_EQ(svc.score(R"({"reward_kind":"exact_match","items":[{"sample_id":"n1"}]})").status, 400);
  const auto missing = svc.score(score_body({{"n1", "x"}, {"zzz", "x"}}).dump());
  EXPECT_EQ(missing.status, 404);
  EXPECT_EQ(json::parse(missing.body)["unknown"], json::parse(R"(["zzz"])"));

  std::vector<std::pair<std::string, std::string>> nine(9, {"n1", "x"});
  EXPECT_EQ(svc.score(score_body(nine).dump()).status, 413);
  std::vector<std::pair<std::string, std::string>> eight(8, {"n1", "x"});
  EXPECT_EQ(svc.score(score_body(eight).dump()).status, 200);

  svc.create_cursor("nums", 1, std::string("c"));
  EXPECT_EQ(svc.sample(R"({"cursor_id":"c","batch_size":9})").status, 413);
  EXPECT_EQ(svc.sample(R"({"cursor_id":"nope","batch_size":1})").status, 404);
  EXPECT_EQ(svc.sample(R"({"batch_size":1})").status, 400);
  EXPECT_EQ(svc.cursors(R"({"dataset":"nums","cursor_id":"c"})").status, 409);
  EXPECT_EQ(svc.cursors(R"({"dataset":"other"})").status, 404);
  EXPECT_EQ(svc.cursors(R"({"dataset":"nums","epoch_seed":-1})").status, 400);
}

TEST(Service, LargeBatchWithinDefaultLimit) {
  RewardService svc;
  svc.add_dataset("nums", numbers(1024));
  std::vector<std::pair<std::string, std::string>> items;
  for (int i = 0; i < 1024; ++i) items.push_back({"n" + std::to_string(i), "<answer>" + std::to_string(i) + "</answer>"});
  const auto r = svc.score(score_body(items).dump());
  ASSERT_EQ(r.status, 200);
  EXPECT_DOUBLE_EQ(json::parse(r.body)["aggregate"]["mean"].get<double>(), 1.0);
}

TEST(Service, ParityWithLibraryScoring) {
  RewardService svc;
  auto ds = numbers(50);
  svc.add_dataset("nums", ds);
  std::vector<std::pair<std::string, std::string>> items;
  std::vector<double> expected;
  for (int i = 0; i < 50; ++i) {
    const std::string gen = i % 3 ? "<answer>" + std::to_string(i) + "</answer>" : "<answer>" + std::to_string(i + 1) + "</answer>";
    items.push_back({ds[static_cast<std::size_t>(i)].id, gen});
    expected.push_back(scoring::score(ds[static_cast<std::size_t>(i)], gen, scoring::RewardKind::exact_match).reward);
  }
  const auto j = json::parse(svc.score(score_body(items).dump()).body);
  EXPECT_EQ(j["rewards"].get<std::vector<double>>(), expected);
}

TEST(Service, ReplayMatchesShuffleOrder) {
  const auto ds = numbers(37);
  std::vector<std::string> expected;
  for (const auto& s : io::shuffle_and_cap(ds, std::nullopt, 2024)) expected.push_back(s.id);
  for (const auto& pattern : std::vector<std::vector<std::size_t>>{{1}, {5}, {3, 8, 1, 13}}) {
    RewardService svc;
    svc.add_dataset("nums", ds);
    const auto c = svc.create_cursor("nums", 2024);
    EXPECT_EQ(drain(svc, c, pattern), expected);
  }
}

TEST(Service, ExhaustedAndReplayToken) {
  RewardService svc;
  svc.add_dataset("nums", numbers(5));
  svc.create_cursor("nums", 3, std::string("c"));
  const auto a = svc.sample(R"({"cursor_id":"c","batch_size":3,"replay_token":"t1"})");
  const auto again = svc.sample(R"({"cursor_id":"c","batch_size":3,"replay_token":"t1"})");
  EXPECT_EQ(a.body, again.body);
  EXPECT_FALSE(json::parse(a.body)["exhausted"].get<bool>());
  const auto b = json::parse(svc.sample(R"({"cursor_id":"c","batch_size":3})").body);
  EXPECT_EQ(b["samples"].size(), 2u);
  EXPECT_EQ(b["position"], 5);
  EXPECT_TRUE(b["exhausted"].get<bool>());
  const auto c = json::parse(svc.sample(R"({"cursor_id":"c","batch_size":3})").body);
  EXPECT_TRUE(c["samples"].empty());
  EXPECT_TRUE(c["exhausted"].get<bool>());
}

TEST(Service, HealthAndSetup) {
  RewardService svc;
  svc.add_dataset("a", numbers(3, "a"));
  svc.add_dataset("b", numbers(4, "b"));
  const auto j = json::parse(svc.health().body);
  EXPECT_EQ(j["status"], "ok");
  EXPECT_EQ(j["version"], kVersion);
  EXPECT_EQ(j["datasets"][1]["size"], 4);
  EXPECT_THROW(svc.add_dataset("a", {}), std::invalid_argument);
  EXPECT_THROW(svc.add_dataset("c", numbers(1, "a")), std::invalid_argument);
  EXPECT_THROW(RewardService(ServiceConfig{0}), ConfigError);
}

TEST(Service, EnvironmentConfig) {
  ::setenv("SYNTHRL_BATCH_LIMIT", "17", 1);
  EXPECT_EQ(config_from_env().batch_limit, 17u);
  ::setenv("SYNTHRL_BATCH_LIMIT", "zero", 1);
  EXPECT_THROW(config_from_env(), ConfigError);
  ::unsetenv("SYNTHRL_BATCH_LIMIT");
  EXPECT_EQ(config_from_env().batch_limit, kDefaultBatchLimit);
  ::setenv("SYNTHRL_BIND", "0.0.0.0:9001", 1);
  EXPECT_EQ(bind_address_from_env(), (std::pair<std::string, int>{"0.0.0.0", 9001}));
  ::setenv("SYNTHRL_BIND", "nope", 1);
  EXPECT_THROW(bind_address_from_env(), ConfigError);
  ::unsetenv("SYNTHRL_BIND");
  EXPECT_EQ(bind_address_from_env().second, 8080);
}

TEST(Service, ConcurrentScoring) {
  RewardService svc;
  svc.add_dataset("nums", numbers(64));
  std::atomic<int> bad{0};
  std::vector<std::thread> threads;
  for (int t = 0; t < 8; ++t) {
    threads.emplace_back([&, t] {
      for (int k = 0; k < 50; ++k) {
        const int i = (t * 50 + k) % 64;
        const auto r = svc.score(score_body({{"n" + std::to_string(i), "<answer>" + std::to_string(i) + "</answer>"}}).dump());
        if (r.status != 200 || json::parse(r.body)["rewards"][0].get<double>() != 1.0) ++bad;
      }
    });
  }
  for (auto& th : threads) th.join();
  EXPECT_EQ(bad.load(), 0);
}

TEST_F(Http, RoutesMatchInProcess) {
  auto h = client->Get("/v1/health");
  ASSERT_TRUE(h);
  EXPECT_EQ(h->status, 200);
  EXPECT_EQ(h->body, svc.health().body);

  const auto body = score_body({{"n1", "<answer>1</answer>"}, {"n2", "no"}}).dump();
  auto s = client->Post("/v1/score", body, "application/json");
  ASSERT_TRUE(s);
  EXPECT_EQ(s->status, 200);
  EXPECT_EQ(s->body, svc.score(body).body);

  auto bad = client->Post("/v1/score", "{", "application/json");
  ASSERT_TRUE(bad);
  EXPECT_EQ(bad->status, 400);
  auto missing = client->Post("/v1/score", score_body({{"x", "y"}}).dump(), "application/json");
  ASSERT_TRUE(missing);
  EXPECT_EQ(missing->status, 404);
}

TEST_F(Http, CursorsAndSampling) {
  auto c = client->Post("/v1/cursors", R"({"dataset":"nums","epoch_seed":7,"cursor_id":"http"})", "application/json");
  ASSERT_TRUE(c);
  ASSERT_EQ(c->status, 200);
  EXPECT_EQ(json::parse(c->body)["size"], 100);
  auto dup = client->Post("/v1/cursors", R"({"dataset":"nums","cursor_id":"http"})", "application/json");
  ASSERT_TRUE(dup);
  EXPECT_EQ(dup->status, 409);

  std::vector<std::string> ids;
  bool exhausted = false;
  while (!exhausted) {
    auto r = client->Post("/v1/sample", R"({"cursor_id":"http","batch_size":30})", "application/json");
    ASSERT_TRUE(r);
    ASSERT_EQ(r->status, 200);
    const auto j = json::parse(r->body);
    for (const auto& s : j["samples"]) ids.push_back(s["sample_id"]);
    exhausted = j["exhausted"];
  }
  std::vector<std::string> expected;
  for (const auto& s : io::shuffle_and_cap(numbers(100), std::nullopt, 7)) expected.push_back(s.id);
  EXPECT_EQ(ids, expected);
}
