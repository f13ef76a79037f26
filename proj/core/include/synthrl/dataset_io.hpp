#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "synthrl/model.hpp"

namespace synthrl::io {

// One JSON object per line, fixed field order:
// id, dataset, split, difficulty, prompt, question_text, gold,
// intermediate_golds?, universe_id?, seed_provenance.
// gold is a list for phantom samples and a string otherwise.
std::string to_jsonl_line(const Sample& s);
Sample from_jsonl_line(std::string_view line, std::size_t line_number = 0);

void write_dataset(std::ostream& out, const std::vector<Sample>& samples);
void write_dataset(const std::filesystem::path& path, const std::vector<Sample>& samples);

// Throws ParseError naming the line.
std::vector<Sample> read_dataset(std::istream& in);
std::vector<Sample> read_dataset(const std::filesystem::path& path);

// Seeded Fisher-Yates, truncated to `cap` when given.
std::vector<Sample> shuffle_and_cap(std::vector<Sample> samples, std::optional<std::size_t> cap,
                                    std::uint64_t seed);

// Seeded draw of `n` distinct samples. Throws SampleSizeError when n > size.
std::vector<Sample> subsample_eval(const std::vector<Sample>& samples, std::size_t n, std::uint64_t seed);

enum class BenchmarkFormat { hotpot_like, musique_like };

std::optional<BenchmarkFormat> parse_benchmark_format(std::string_view s);

// Reads a JSON array or JSON-lines file of community benchmark records.
// hotpot_like: {_id|id, question, answer, context: [[title, [sentences]]]},
// difficulty 2.
// musique_like: {id, question, answer, paragraphs: [{title, paragraph_text}],
// question_decomposition: [{answer}]}, difficulty = number of sub-questions.
// Throws ParseError naming the record.
std::vector<Sample> ingest_benchmark(const std::filesystem::path& path, BenchmarkFormat format);
std::vector<Sample> ingest_benchmark(std::istream& in, BenchmarkFormat format);

using TokenCounter = std::function<std::size_t(std::string_view)>;

std::size_t whitespace_word_count(std::string_view text);

struct BudgetCheck {
  bool fits = true;
  std::size_t overflow_by = 0;
};

BudgetCheck length_budget_check(std::string_view prompt, std::size_t budget,
                                const TokenCounter& counter = whitespace_word_count);

// Default prompt budgets: phantom 6000, gsm 2048, hotpot-like 6000,
// musique-like 8000.
std::size_t default_budget(DatasetKind d, std::optional<BenchmarkFormat> external = std::nullopt);

}  // namespace synthrl::io
