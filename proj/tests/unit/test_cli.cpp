#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kCli = SYNTHRL_CLI;
const fs::path kScoring = fs::path(SYNTHRL_FIXTURES_DIR) / "scoring";

struct Tmp {
  fs::path dir;
  explicit Tmp(const std::string& name) : dir(fs::temp_directory_path() / ("synthrl_cli_" + name)) {
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Tmp() { fs::remove_all(dir); }
};

int run(const std::string& args, const fs::path& out = {}) {
  std::string cmd = "'" + kCli + "' " + args;
  cmd += out.empty() ? " >/dev/null 2>&1" : " >'" + out.string() + "' 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void expect_deterministic(const std::string& gen_args) {
  Tmp t("det");
  ASSERT_EQ(run("gen " + gen_args + " --seed 11 --out '" + (t.dir / "a").string() + "'"), 0) << gen_args;
  ASSERT_EQ(run("gen " + gen_args + " --seed 11 --out '" + (t.dir / "b").string() + "'"), 0) << gen_args;
  ASSERT_EQ(run("gen " + gen_args + " --seed 12 --out '" + (t.dir / "c").string() + "'"), 0) << gen_args;
  for (const char* f : {"train.jsonl", "test.jsonl", "manifest.json"}) {
    const auto a = slurp(t.dir / "a" / f);
    EXPECT_FALSE(a.empty()) << f;
    EXPECT_EQ(a, slurp(t.dir / "b" / f)) << gen_args << " " << f;
  }
  EXPECT_NE(slurp(t.dir / "a" / "train.jsonl"), slurp(t.dir / "c" / "train.jsonl"));
}

}  // namespace

TEST(Cli, VersionAndHelp) {
  Tmp t("version");
  EXPECT_EQ(run("--version", t.dir / "out"), 0);
  EXPECT_FALSE(slurp(t.dir / "out").empty());
  EXPECT_NE(run(""), 0);
}

TEST(Cli, GenDeterministicPhantom) {
  expect_deterministic("phantom --universes 3 --people 8 --questions 30 --test-universes 1 --train-cap 40");
}
TEST(Cli, GenDeterministicGsm) { expect_deterministic("gsm --min-ops 2 --max-ops 4 --per-difficulty 10 --train-size 20"); }
TEST(Cli, GenDeterministicFamily) { expect_deterministic("rg-family --train-size 30 --test-size 5"); }
TEST(Cli, GenDeterministicKnights) { expect_deterministic("rg-knights --train-size 30 --test-size 5"); }

TEST(Cli, InvalidConfigFails) {
  Tmp t("invalid");
  const auto out = (t.dir / "o").string();
  EXPECT_EQ(run("gen phantom --people 1 --out '" + out + "'"), 2);
  EXPECT_EQ(run("gen gsm --min-ops 5 --max-ops 2 --out '" + out + "'"), 2);
  EXPECT_EQ(run("gen rg-knights --min-people 1 --out '" + out + "'"), 2);
  EXPECT_EQ(run("gen rg-family --train-size 3"), 2);  // --out is required
}

TEST(Cli, ScoreFixture) {
  Tmp t("score");
  const auto out = t.dir / "run.json";
  ASSERT_EQ(run("score --dataset '" + (kScoring / "family_dataset.jsonl").string() + "' --generations '" +
                (kScoring / "family_generations.jsonl").string() + "' --reward exact_match --checkpoint-step 10 --out '" +
                out.string() + "'"),
            0);
  const auto j = nlohmann::json::parse(slurp(out));
  EXPECT_DOUBLE_EQ(j["report"]["overall"]["mean"].get<double>(), 0.5);
  EXPECT_EQ(j["records"].size(), 4u);
  EXPECT_EQ(j["checkpoint_step"], 10);
}

TEST(Cli, ScoreUnknownIds) {
  Tmp t("unknown");
  const auto log = t.dir / "log";
  const int rc = run("score --dataset '" + (kScoring / "family_dataset.jsonl").string() + "' --generations '" +
                         (kScoring / "unknown_generations.jsonl").string() + "' --reward exact_match",
                     log);
  EXPECT_NE(rc, 0);
  EXPECT_NE(slurp(log).find("fx-missing-1"), std::string::npos);
  EXPECT_NE(slurp(log).find("fx-missing-2"), std::string::npos);
}

TEST(Cli, ReportTable) {
  Tmp t("report");
  const auto ds = (kScoring / "family_dataset.jsonl").string();
  const auto gens = (kScoring / "family_generations.jsonl").string();
  for (int step : {200, 100}) {
    ASSERT_EQ(run("score --dataset '" + ds + "' --generations '" + gens + "' --reward exact_match --checkpoint-step " +
                  std::to_string(step) + " --out '" + (t.dir / ("s" + std::to_string(step) + ".json")).string() + "'"),
              0);
  }
  const auto table = t.dir / "table.tsv";
  ASSERT_EQ(run("report --runs '" + t.dir.string() + "'", table), 0);
  EXPECT_EQ(slurp(table),
            "step\tmean\tstandard_error\tn\n100\t0.500000\t0.288675\t4\n200\t0.500000\t0.288675\t4\n");
}
