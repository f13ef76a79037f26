#include "synthrl/dataset_io.hpp"

#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "synthrl/errors.hpp"
#include "synthrl/prompts.hpp"
#include "synthrl/rng.hpp"

namespace synthrl::io {
namespace {

using ojson = nlohmann::ordered_json;
using json = nlohmann::json;

const json& require(const json& rec, const char* field, const std::string& record, std::size_t line) {
  const auto it = rec.find(field);
  if (it == rec.end() || it->is_null()) {
    throw ParseError("record " + record + " is missing field '" + field + "'", line, record);
  }
  return *it;
}

std::string require_string(const json& rec, const char* field, const std::string& record, std::size_t line) {
  const auto& v = require(rec, field, record, line);
  if (!v.is_string()) throw ParseError("record " + record + ": field '" + field + "' must be a string", line, record);
  return v.get<std::string>();
}

std::string article(const std::string& title, const std::string& text) { return "# " + title + "\n\n" + text; }

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

Sample ingest_record(const json& rec, BenchmarkFormat format, std::size_t index, std::size_t line) {
  std::string record = "#" + std::to_string(index);
  if (!rec.is_object()) throw ParseError("record " + record + " is not an object", line, record);
  for (const char* key : {"_id", "id"}) {
    if (auto it = rec.find(key); it != rec.end() && it->is_string()) {
      record = it->get<std::string>();
      break;
    }
  }
  Sample s;
  s.id = record;
  s.dataset = DatasetKind::external;
  s.split = Split::test;
  s.question_text = require_string(rec, "question", record, line);
  s.gold = AnswerSet{require_string(rec, "answer", record, line)};

  std::vector<std::string> articles;
  try {
    if (format == BenchmarkFormat::hotpot_like) {
      for (const auto& entry : require(rec, "context", record, line)) {
        std::vector<std::string> sentences;
        for (const auto& sent : entry.at(1)) sentences.push_back(trim(sent.get<std::string>()));
        articles.push_back(article(entry.at(0).get<std::string>(), join(sentences, " ")));
      }
      s.difficulty = 2;
    } else {
      for (const auto& p : require(rec, "paragraphs", record, line)) {
        articles.push_back(article(p.at("title").get<std::string>(), trim(p.at("paragraph_text").get<std::string>())));
      }
      std::vector<std::string> hops;
      for (const auto& q : require(rec, "question_decomposition", record, line)) hops.push_back(q.at("answer").get<std::string>());
      if (hops.empty()) throw ParseError("record " + record + " has an empty question_decomposition", line, record);
      s.difficulty = static_cast<int>(hops.size());
      s.intermediate_golds = std::move(hops);
    }
  } catch (const json::exception& e) {
    throw ParseError("record " + record + ": malformed evidence (" + e.what() + ")", line, record);
  }
  const auto& tmpl = prompts::builtin(prompts::TemplateKind::phantom);
  s.prompt = prompts::assemble_prompt(tmpl, s.question_text, join(articles, "\n\n"), tmpl.cot_examples);
  return s;
}

}  // namespace

std::string to_jsonl_line(const Sample& s) {
  ojson j;
  j["id"] = s.id;
  j["dataset"] = std::string(to_string(s.dataset));
  j["split"] = std::string(to_string(s.split));
  j["difficulty"] = s.difficulty;
  j["prompt"] = s.prompt;
  j["question_text"] = s.question_text;
  if (s.dataset == DatasetKind::phantom) {
    j["gold"] = s.gold.to_vector();
  } else {
    j["gold"] = s.gold.empty() ? std::string() : s.gold.single();
  }
  if (s.intermediate_golds) j["intermediate_golds"] = *s.intermediate_golds;
  if (s.universe_id) j["universe_id"] = *s.universe_id;
  j["seed_provenance"] = s.seed_provenance;
  return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::strict);
}

Sample from_jsonl_line(std::string_view line, std::size_t line_number) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), line_number);
  }
  if (!j.is_object()) throw ParseError("record is not an object", line_number);
  const std::string record = j.contains("id") && j["id"].is_string() ? j["id"].get<std::string>() : std::string();
  try {
    Sample s;
    s.id = j.at("id").get<std::string>();
    const auto dataset = parse_dataset_kind(j.at("dataset").get<std::string>());
    if (!dataset) throw ParseError("unknown dataset " + j["dataset"].dump(), line_number, record);
    s.dataset = *dataset;
    const auto split = parse_split(j.at("split").get<std::string>());
    if (!split) throw ParseError("unknown split " + j["split"].dump(), line_number, record);
    s.split = *split;
    s.difficulty = j.at("difficulty").get<int>();
    s.prompt = j.at("prompt").get<std::string>();
    s.question_text = j.at("question_text").get<std::string>();
    const auto& gold = j.at("gold");
    if (gold.is_array()) {
      s.gold = AnswerSet(gold.get<std::vector<std::string>>());
    } else {
      s.gold = AnswerSet{gold.get<std::string>()};
    }
    if (auto it = j.find("intermediate_golds"); it != j.end()) s.intermediate_golds = it->get<std::vector<std::string>>();
    if (auto it = j.find("universe_id"); it != j.end()) s.universe_id = it->get<std::string>();
    s.seed_provenance = j.at("seed_provenance").get<std::vector<std::uint64_t>>();
    check_sample(s);
    return s;
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad record: ") + e.what(), line_number, record);
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("bad record: ") + e.what(), line_number, record);
  }
}

void write_dataset(std::ostream& out, const std::vector<Sample>& samples) {
  for (const auto& s : samples) out << to_jsonl_line(s) << '\n';
}

void write_dataset(const std::filesystem::path& path, const std::vector<Sample>& samples) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_dataset(out, samples);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::vector<Sample> read_dataset(std::istream& in) {
  std::vector<Sample> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(from_jsonl_line(line, n));
  }
  return out;
}

std::vector<Sample> read_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read " + path.string());
  return read_dataset(in);
}

std::vector<Sample> shuffle_and_cap(std::vector<Sample> samples, std::optional<std::size_t> cap, std::uint64_t seed) {
  Rng rng(seed);
  rng.shuffle(samples);
  if (cap && *cap < samples.size()) samples.resize(*cap);
  return samples;
}

std::vector<Sample> subsample_eval(const std::vector<Sample>& samples, std::size_t n, std::uint64_t seed) {
  if (n > samples.size()) {
    throw SampleSizeError("requested " + std::to_string(n) + " samples from a pool of " + std::to_string(samples.size()));
  }
  return shuffle_and_cap(samples, n, seed);
}

std::optional<BenchmarkFormat> parse_benchmark_format(std::string_view s) {
  if (s == "hotpot_like") return BenchmarkFormat::hotpot_like;
  if (s == "musique_like") return BenchmarkFormat::musique_like;
  return std::nullopt;
}

std::vector<Sample> ingest_benchmark(std::istream& in, BenchmarkFormat format) {
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  std::vector<Sample> out;
  if (first == std::string::npos) return out;

  if (text[first] == '[') {
    json arr;
    try {
      arr = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ParseError(std::string("invalid JSON array: ") + e.what());
    }
    for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(ingest_record(arr[i], format, i, 0));
    return out;
  }
  std::istringstream lines(text);
  std::string line;
  std::size_t n = 0;
  std::size_t index = 0;
  while (std::getline(lines, line)) {
    ++n;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(std::string("invalid JSON: ") + e.what(), n, "#" + std::to_string(index));
    }
    out.push_back(ingest_record(rec, format, index++, n));
  }
  return out;
}

std::vector<Sample> ingest_benchmark(const std::filesystem::path& path, BenchmarkFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read " + path.string());
  return ingest_benchmark(in, format);
}

std::size_t whitespace_word_count(std::string_view text) {
  std::size_t n = 0;
  bool in_word = false;
  for (char c : text) {
    const bool space = std::isspace(static_cast<unsigned char>(c)) != 0;
    if (!space && !in_word) ++n;
    in_word = !space;
  }
  return n;
}

BudgetCheck length_budget_check(std::string_view prompt, std::size_t budget, const TokenCounter& counter) {
  if (budget == 0) throw std::invalid_argument("budget must be > 0");
  const std::size_t used = counter(prompt);
  if (used <= budget) return {true, 0};
  return {false, used - budget};
}

std::size_t default_budget(DatasetKind d, std::optional<BenchmarkFormat> external) {
  switch (d) {
    case DatasetKind::phantom: return 6000;
    case DatasetKind::gsm_inf:
    case DatasetKind::rg_family:
    case DatasetKind::rg_knights: return 2048;
    case DatasetKind::external: return external == BenchmarkFormat::musique_like ? 8000 : 6000;
  }
  return 6000;
}

}  // namespace synthrl::io
