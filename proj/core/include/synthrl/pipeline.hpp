#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "synthrl/family.hpp"
#include "synthrl/gsm.hpp"
#include "synthrl/knights.hpp"
#include "synthrl/model.hpp"
#include "synthrl/phantom.hpp"
#include "synthrl/scoring.hpp"

// End-to-end dataset generation and scoring runs behind the CLI.
namespace synthrl::pipeline {

struct GenResult {
  std::string generator;  // "phantom", "gsm", "rg-family", "rg-knights"
  std::vector<Sample> train;
  std::vector<Sample> test;
  std::string manifest_json;  // config echo, counts, difficulty histogram
};

struct PhantomRun {
  phantom::PhantomConfig config;
  int test_universes = 3;
  std::optional<std::size_t> train_cap = 10000;
  int workers = 0;  // 0 = hardware concurrency
};

GenResult generate_phantom(const PhantomRun& run);
GenResult generate_gsm(const gsm::GsmDatasetConfig& cfg);
GenResult generate_family(const family::FamilyDatasetConfig& cfg);
GenResult generate_knights(const knights::KnightsDatasetConfig& cfg);

// Writes train.jsonl, test.jsonl and manifest.json under `out_dir`.
void write_outputs(const GenResult& result, const std::filesystem::path& out_dir);

std::map<int, std::size_t> difficulty_histogram(const std::vector<Sample>& samples);

struct Generation {
  std::string sample_id;
  std::string generation;
  std::optional<int> checkpoint_step;
};

// JSON lines: {"sample_id": ..., "generation": ..., "checkpoint_step"?: n}.
std::vector<Generation> read_generations(const std::filesystem::path& path);

class UnknownSampleIds : public std::runtime_error {
 public:
  explicit UnknownSampleIds(std::vector<std::string> ids);
  const std::vector<std::string>& ids() const { return ids_; }

 private:
  std::vector<std::string> ids_;
};

struct ScoreRun {
  scoring::RewardKind kind = scoring::RewardKind::exact_match;
  std::optional<int> checkpoint_step;
  std::vector<scoring::ScoreRecord> records;
  scoring::StratifiedReport report;
  std::optional<std::vector<double>> groundedness;  // per intermediate position
};

// Throws UnknownSampleIds listing every generation whose id is not in
// `dataset`. `checkpoint_step` overrides per-generation steps.
ScoreRun score_generations(const std::vector<Sample>& dataset, const std::vector<Generation>& generations,
                           scoring::RewardKind kind, bool with_groundedness,
                           std::optional<int> checkpoint_step = std::nullopt);

std::string score_run_json(const ScoreRun& run);
ScoreRun read_score_run(const std::filesystem::path& path);

struct ScalingRow {
  int step = 0;
  scoring::Bucket stats;
};

// Per-step overall statistics, steps ascending; files sharing a step are
// pooled. Records without a step are rejected with std::invalid_argument.
std::vector<ScalingRow> scaling_table(const std::vector<ScoreRun>& runs);
std::string format_scaling_table(const std::vector<ScalingRow>& rows);

}  // namespace synthrl::pipeline
