#include "synthrl/pipeline.hpp"

#include <cstdio>
#include <fstream>
#include <unordered_map>

#include "json.hpp"
#include "parallel.hpp"
#include "synthrl/dataset_io.hpp"
#include "synthrl/errors.hpp"
#include "synthrl/rng.hpp"
#include "synthrl/version.hpp"

namespace synthrl::pipeline {
namespace {

using ojson = nlohmann::ordered_json;
using json = nlohmann::json;

constexpr std::uint64_t kTrainShuffleStream = 0x7a11;

ojson histogram_json(const std::vector<Sample>& samples) {
  ojson h = ojson::object();
  for (const auto& [d, n] : difficulty_histogram(samples)) h[std::to_string(d)] = n;
  return h;
}

std::string manifest(const std::string& generator, ojson config, std::uint64_t seed, const std::vector<Sample>& train,
                     const std::vector<Sample>& test, ojson extra = ojson::object()) {
  ojson m;
  m["generator"] = generator;
  m["version"] = kVersion;
  m["seed"] = seed;
  m["config"] = std::move(config);
  m["counts"] = {{"train", train.size()}, {"test", test.size()}};
  for (auto& [k, v] : extra.items()) m["counts"][k] = v;
  m["difficulty_histogram"] = {{"train", histogram_json(train)}, {"test", histogram_json(test)}};
  return m.dump(2);
}

ojson bucket_json(const scoring::Bucket& b) {
  return {{"mean", b.mean}, {"standard_error", b.standard_error}, {"n", b.n}};
}

scoring::Bucket bucket_from(const json& j) {
  return {j.at("mean").get<double>(), j.at("standard_error").get<double>(), j.at("n").get<std::size_t>()};
}

}  // namespace

GenResult generate_phantom(const PhantomRun& run) {
  const auto& cfg = run.config;
  cfg.validate();
  if (run.test_universes < 0 || run.test_universes >= cfg.n_universes) {
    throw ConfigError("test_universes must be in [0, n_universes)");
  }
  const auto n = static_cast<std::size_t>(cfg.n_universes);
  const std::size_t first_test = n - static_cast<std::size_t>(run.test_universes);
  std::vector<std::vector<Sample>> per_universe(n);
  detail::parallel_for(n, static_cast<unsigned>(run.workers), [&](std::size_t i) {
    const auto u = phantom::generate_universe(cfg, static_cast<int>(i));
    per_universe[i] = phantom::universe_samples(u, static_cast<int>(i), i < first_test ? Split::train : Split::test, cfg);
  });

  GenResult out;
  out.generator = "phantom";
  std::vector<Sample> pool;
  for (std::size_t i = 0; i < n; ++i) {
    auto& dest = i < first_test ? pool : out.test;
    dest.insert(dest.end(), std::make_move_iterator(per_universe[i].begin()), std::make_move_iterator(per_universe[i].end()));
  }
  const std::size_t pool_size = pool.size();
  out.train = io::shuffle_and_cap(std::move(pool), run.train_cap, derive_seed(cfg.seed, kTrainShuffleStream));

  ojson config = {{"universes", cfg.n_universes},
                  {"people", cfg.people_per_universe},
                  {"depth", cfg.cfg_recursion_depth},
                  {"max_difficulty", cfg.max_difficulty},
                  {"questions_per_universe", cfg.target_questions_per_universe},
                  {"allow_empty_answers", cfg.allow_empty_answers},
                  {"test_universes", run.test_universes}};
  config["train_cap"] = run.train_cap ? ojson(*run.train_cap) : ojson(nullptr);
  out.manifest_json = manifest(out.generator, std::move(config), cfg.seed, out.train, out.test, {{"train_pool", pool_size}});
  return out;
}

GenResult generate_gsm(const gsm::GsmDatasetConfig& cfg) {
  auto ds = gsm::build_gsm_dataset(cfg);
  GenResult out;
  out.generator = "gsm";
  out.train = std::move(ds.train);
  out.test = std::move(ds.test);
  ojson config = {{"min_ops", cfg.min_ops},
                  {"max_ops", cfg.max_ops},
                  {"per_difficulty", cfg.per_difficulty_target},
                  {"train_size", cfg.train_size},
                  {"value_bound", cfg.value_bound}};
  out.manifest_json = manifest(out.generator, std::move(config), cfg.seed, out.train, out.test);
  return out;
}

GenResult generate_family(const family::FamilyDatasetConfig& cfg) {
  auto ds = family::build_family_dataset(cfg);
  GenResult out;
  out.generator = "rg-family";
  out.train = std::move(ds.train);
  out.test = std::move(ds.test);
  ojson config = {{"train_size", cfg.train_size},
                  {"test_size", cfg.test_size},
                  {"min_size", cfg.min_size},
                  {"max_size", cfg.max_size}};
  out.manifest_json = manifest(out.generator, std::move(config), cfg.seed, out.train, out.test);
  return out;
}

GenResult generate_knights(const knights::KnightsDatasetConfig& cfg) {
  auto ds = knights::build_knights_dataset(cfg);
  GenResult out;
  out.generator = "rg-knights";
  out.train = std::move(ds.train);
  out.test = std::move(ds.test);
  ojson config = {{"train_size", cfg.train_size},
                  {"test_size", cfg.test_size},
                  {"min_people", cfg.min_people},
                  {"max_people", cfg.max_people}};
  out.manifest_json = manifest(out.generator, std::move(config), cfg.seed, out.train, out.test);
  return out;
}

void write_outputs(const GenResult& result, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  io::write_dataset(out_dir / "train.jsonl", result.train);
  io::write_dataset(out_dir / "test.jsonl", result.test);
  std::ofstream m(out_dir / "manifest.json", std::ios::binary);
  m << result.manifest_json << '\n';
  if (!m) throw std::runtime_error("cannot write " + (out_dir / "manifest.json").string());
}

std::map<int, std::size_t> difficulty_histogram(const std::vector<Sample>& samples) {
  std::map<int, std::size_t> h;
  for (const auto& s : samples) ++h[s.difficulty];
  return h;
}

std::vector<Generation> read_generations(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read " + path.string());
  std::vector<Generation> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = json::parse(line);
      Generation g;
      g.sample_id = j.at("sample_id").get<std::string>();
      g.generation = j.at("generation").get<std::string>();
      if (auto it = j.find("checkpoint_step"); it != j.end() && !it->is_null()) g.checkpoint_step = it->get<int>();
      out.push_back(std::move(g));
    } catch (const json::exception& e) {
      throw ParseError(path.string() + ":" + std::to_string(n) + ": " + e.what(), n);
    }
  }
  return out;
}

UnknownSampleIds::UnknownSampleIds(std::vector<std::string> ids)
    : std::runtime_error([&] {
        std::string msg = "unknown sample ids:";
        for (const auto& id : ids) msg += " " + id;
        return msg;
      }()),
      ids_(std::move(ids)) {}

ScoreRun score_generations(const std::vector<Sample>& dataset, const std::vector<Generation>& generations,
                           scoring::RewardKind kind, bool with_groundedness, std::optional<int> checkpoint_step) {
  std::unordered_map<std::string, const Sample*> by_id;
  for (const auto& s : dataset) by_id.emplace(s.id, &s);
  std::vector<const Sample*> matched(generations.size(), nullptr);
  std::vector<std::string> unknown;
  for (std::size_t i = 0; i < generations.size(); ++i) {
    auto it = by_id.find(generations[i].sample_id);
    if (it == by_id.end()) {
      unknown.push_back(generations[i].sample_id);
    } else {
      matched[i] = it->second;
    }
  }
  if (!unknown.empty()) throw UnknownSampleIds(std::move(unknown));

  ScoreRun run;
  run.kind = kind;
  run.checkpoint_step = checkpoint_step;
  run.records.resize(generations.size());
  detail::parallel_for(generations.size(), 0, [&](std::size_t i) {
    const auto step = checkpoint_step ? checkpoint_step : generations[i].checkpoint_step;
    run.records[i] = scoring::score(*matched[i], generations[i].generation, kind, step);
  });
  run.report = scoring::stratify(run.records);
  if (with_groundedness) {
    std::vector<std::vector<bool>> rows;
    for (std::size_t i = 0; i < generations.size(); ++i) {
      if (matched[i]->intermediate_golds) rows.push_back(scoring::groundedness(generations[i].generation, *matched[i]->intermediate_golds));
    }
    run.groundedness = scoring::groundedness_fractions(rows);
  }
  return run;
}

std::string score_run_json(const ScoreRun& run) {
  ojson j;
  j["reward_kind"] = std::string(scoring::to_string(run.kind));
  j["checkpoint_step"] = run.checkpoint_step ? ojson(*run.checkpoint_step) : ojson(nullptr);
  ojson records = ojson::array();
  for (const auto& r : run.records) {
    ojson rec;
    rec["sample_id"] = r.sample_id;
    rec["extracted"] = r.extracted ? ojson(*r.extracted) : ojson(nullptr);
    rec["reward"] = r.reward;
    rec["difficulty"] = r.difficulty;
    rec["checkpoint_step"] = r.checkpoint_step ? ojson(*r.checkpoint_step) : ojson(nullptr);
    rec["raw_generation"] = r.raw_generation;
    records.push_back(std::move(rec));
  }
  ojson buckets = ojson::array();
  for (const auto& [d, b] : run.report.buckets) {
    ojson entry = {{"difficulty", d}};
    entry.update(bucket_json(b));
    buckets.push_back(std::move(entry));
  }
  j["report"] = {{"overall", bucket_json(run.report.overall)}, {"buckets", std::move(buckets)}};
  if (run.groundedness) j["groundedness"] = *run.groundedness;
  j["records"] = std::move(records);
  return j.dump(2);
}

ScoreRun read_score_run(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read " + path.string());
  try {
    const auto j = json::parse(in);
    ScoreRun run;
    const auto kind = scoring::parse_reward_kind(j.at("reward_kind").get<std::string>());
    if (!kind) throw ParseError(path.string() + ": unknown reward_kind");
    run.kind = *kind;
    if (auto it = j.find("checkpoint_step"); it != j.end() && !it->is_null()) run.checkpoint_step = it->get<int>();
    for (const auto& r : j.at("records")) {
      scoring::ScoreRecord rec;
      rec.sample_id = r.at("sample_id").get<std::string>();
      if (!r.at("extracted").is_null()) rec.extracted = r["extracted"].get<std::string>();
      rec.reward = r.at("reward").get<double>();
      rec.reward_kind = run.kind;
      rec.difficulty = r.at("difficulty").get<int>();
      if (auto it = r.find("checkpoint_step"); it != r.end() && !it->is_null()) rec.checkpoint_step = it->get<int>();
      if (auto it = r.find("raw_generation"); it != r.end()) rec.raw_generation = it->get<std::string>();
      run.records.push_back(std::move(rec));
    }
    const auto& report = j.at("report");
    run.report.overall = bucket_from(report.at("overall"));
    for (const auto& b : report.at("buckets")) run.report.buckets[b.at("difficulty").get<int>()] = bucket_from(b);
    if (auto it = j.find("groundedness"); it != j.end()) run.groundedness = it->get<std::vector<double>>();
    return run;
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::vector<ScalingRow> scaling_table(const std::vector<ScoreRun>& runs) {
  std::map<int, std::vector<double>> by_step;
  for (const auto& run : runs) {
    for (const auto& r : run.records) {
      const auto step = r.checkpoint_step ? r.checkpoint_step : run.checkpoint_step;
      if (!step) throw std::invalid_argument("record " + r.sample_id + " has no checkpoint step");
      by_step[*step].push_back(r.reward);
    }
  }
  std::vector<ScalingRow> rows;
  for (const auto& [step, values] : by_step) rows.push_back({step, scoring::summarize(values)});
  return rows;
}

std::string format_scaling_table(const std::vector<ScalingRow>& rows) {
  std::string out = "step\tmean\tstandard_error\tn\n";
  char buf[128];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%d\t%.6f\t%.6f\t%zu\n", r.step, r.stats.mean, r.stats.standard_error, r.stats.n);
    out += buf;
  }
  return out;
}

}  // namespace synthrl::pipeline
