#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "synthrl/model.hpp"

namespace synthrl::scoring {

// Content of the last <answer>...</answer> pair, trimmed. nullopt when there
// is no pair or the last opening tag is never closed.
std::optional<std::string> extract_answer(std::string_view generation);

// Lowercase, punctuation to spaces, drop standalone a/an/the, collapse
// whitespace.
std::string normalize(std::string_view s);

// Trimmed, ASCII case-insensitive equality. No punctuation stripping, so
// dates like 0959-03-22 compare intact.
double exact_match(std::string_view pred, std::string_view gold);

// Splits on commas and normalizes each element; empty elements are dropped.
AnswerSet parse_answer_list(std::string_view extracted);

// Set F1 over normalized elements. Both empty -> 1, one empty -> 0.
double set_f1(const AnswerSet& pred, const AnswerSet& gold);

// Bag-of-tokens F1 over normalized whitespace tokens.
double token_f1(std::string_view pred, std::string_view gold);

double format_reward(std::string_view generation);

// Element k is true when the normalized k-th intermediate answer occurs in the
// normalized trace. Answers that normalize to nothing never match.
std::vector<bool> groundedness(std::string_view trace, const std::vector<std::string>& intermediate_golds);

enum class RewardKind { exact_match, set_f1, token_f1, format_only };

std::string_view to_string(RewardKind k);
std::optional<RewardKind> parse_reward_kind(std::string_view s);
RewardKind default_reward_kind(DatasetKind d);

struct ScoreRecord {
  std::string sample_id;
  std::string raw_generation;
  std::optional<std::string> extracted;
  double reward = 0.0;
  RewardKind reward_kind = RewardKind::exact_match;
  int difficulty = 1;
  std::optional<int> checkpoint_step;
};

// Reward of one generation against `gold`. For token_f1 with several gold
// values the best match counts; for exact_match any value may match.
double reward(RewardKind kind, std::string_view generation, const AnswerSet& gold);

ScoreRecord score(const Sample& sample, std::string_view generation, RewardKind kind,
                  std::optional<int> checkpoint_step = std::nullopt);

struct Bucket {
  double mean = 0.0;
  double standard_error = 0.0;  // sample stddev / sqrt(n); 0 when n < 2
  std::size_t n = 0;

  friend bool operator==(const Bucket&, const Bucket&) = default;
};

// n-weighted combination of two disjoint buckets.
Bucket merge(const Bucket& a, const Bucket& b);
Bucket summarize(const std::vector<double>& values);

struct StratifiedReport {
  std::map<int, Bucket> buckets;  // ascending difficulty
  Bucket overall;
};

StratifiedReport stratify(const std::vector<ScoreRecord>& records);
StratifiedReport merge(const StratifiedReport& a, const StratifiedReport& b);

// Fraction of traces containing the k-th intermediate answer, per position k.
// Rows shorter than k do not count toward position k.
std::vector<double> groundedness_fractions(const std::vector<std::vector<bool>>& rows);

}  // namespace synthrl::scoring
