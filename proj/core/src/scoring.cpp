#include "synthrl/scoring.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <sstream>

namespace synthrl::scoring {
namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (is_space(c)) {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::string lower_ascii(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

// Welford accumulator.
struct Moments {
  std::size_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    const double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }

  Bucket bucket() const {
    Bucket b;
    b.n = n;
    b.mean = mean;
    b.standard_error = n < 2 ? 0.0 : std::sqrt(m2 / static_cast<double>(n - 1)) / std::sqrt(static_cast<double>(n));
    return b;
  }
};

}  // namespace

std::optional<std::string> extract_answer(std::string_view generation) {
  constexpr std::string_view open = "<answer>";
  constexpr std::string_view close = "</answer>";
  const auto start = generation.rfind(open);
  if (start == std::string_view::npos) return std::nullopt;
  const auto body = start + open.size();
  const auto end = generation.find(close, body);
  if (end == std::string_view::npos) return std::nullopt;
  return trim(generation.substr(body, end - body));
}

std::string normalize(std::string_view s) {
  std::string cleaned;
  cleaned.reserve(s.size());
  for (char c : s) {
    const auto u = static_cast<unsigned char>(c);
    cleaned += std::ispunct(u) ? ' ' : static_cast<char>(std::tolower(u));
  }
  std::string out;
  for (const auto& tok : split_ws(cleaned)) {
    if (tok == "a" || tok == "an" || tok == "the") continue;
    if (!out.empty()) out += ' ';
    out += tok;
  }
  return out;
}

double exact_match(std::string_view pred, std::string_view gold) {
  return lower_ascii(trim(pred)) == lower_ascii(trim(gold)) ? 1.0 : 0.0;
}

AnswerSet parse_answer_list(std::string_view extracted) {
  AnswerSet out;
  std::size_t pos = 0;
  while (pos <= extracted.size()) {
    const auto comma = extracted.find(',', pos);
    const auto part = extracted.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    const auto norm = normalize(part);
    if (!norm.empty()) out.insert(norm);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

double set_f1(const AnswerSet& pred, const AnswerSet& gold) {
  if (pred.empty() && gold.empty()) return 1.0;
  if (pred.empty() || gold.empty()) return 0.0;
  std::size_t common = 0;
  for (const auto& p : pred.values()) common += gold.contains(p) ? 1 : 0;
  if (common == 0) return 0.0;
  const double precision = static_cast<double>(common) / static_cast<double>(pred.size());
  const double recall = static_cast<double>(common) / static_cast<double>(gold.size());
  return 2.0 * precision * recall / (precision + recall);
}

double token_f1(std::string_view pred, std::string_view gold) {
  const auto p = split_ws(normalize(pred));
  const auto g = split_ws(normalize(gold));
  if (p.empty() && g.empty()) return 1.0;
  if (p.empty() || g.empty()) return 0.0;
  std::map<std::string, int> counts;
  for (const auto& t : g) ++counts[t];
  std::size_t common = 0;
  for (const auto& t : p) {
    auto it = counts.find(t);
    if (it != counts.end() && it->second > 0) {
      --it->second;
      ++common;
    }
  }
  if (common == 0) return 0.0;
  const double precision = static_cast<double>(common) / static_cast<double>(p.size());
  const double recall = static_cast<double>(common) / static_cast<double>(g.size());
  return 2.0 * precision * recall / (precision + recall);
}

double format_reward(std::string_view generation) { return extract_answer(generation) ? 1.0 : 0.0; }

std::vector<bool> groundedness(std::string_view trace, const std::vector<std::string>& intermediate_golds) {
  const std::string haystack = normalize(trace);
  std::vector<bool> out;
  out.reserve(intermediate_golds.size());
  for (const auto& g : intermediate_golds) {
    const auto needle = normalize(g);
    out.push_back(!needle.empty() && haystack.find(needle) != std::string::npos);
  }
  return out;
}

std::string_view to_string(RewardKind k) {
  switch (k) {
    case RewardKind::exact_match: return "exact_match";
    case RewardKind::set_f1: return "set_f1";
    case RewardKind::token_f1: return "token_f1";
    case RewardKind::format_only: return "format_only";
  }
  return "?";
}

std::optional<RewardKind> parse_reward_kind(std::string_view s) {
  for (auto k : {RewardKind::exact_match, RewardKind::set_f1, RewardKind::token_f1, RewardKind::format_only}) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

RewardKind default_reward_kind(DatasetKind d) {
  switch (d) {
    case DatasetKind::phantom: return RewardKind::set_f1;
    case DatasetKind::external: return RewardKind::token_f1;
    default: return RewardKind::exact_match;
  }
}

double reward(RewardKind kind, std::string_view generation, const AnswerSet& gold) {
  if (kind == RewardKind::format_only) return format_reward(generation);
  const auto extracted = extract_answer(generation);
  if (!extracted) return 0.0;
  switch (kind) {
    case RewardKind::exact_match:
      for (const auto& g : gold.values()) {
        if (exact_match(*extracted, g) == 1.0) return 1.0;
      }
      return 0.0;
    case RewardKind::set_f1: {
      AnswerSet normalized_gold;
      for (const auto& g : gold.values()) {
        const auto n = normalize(g);
        if (!n.empty()) normalized_gold.insert(n);
      }
      return set_f1(parse_answer_list(*extracted), normalized_gold);
    }
    case RewardKind::token_f1: {
      if (gold.empty()) return token_f1(*extracted, "");
      double best = 0.0;
      for (const auto& g : gold.values()) best = std::max(best, token_f1(*extracted, g));
      return best;
    }
    case RewardKind::format_only: break;
  }
  return 0.0;
}

ScoreRecord score(const Sample& sample, std::string_view generation, RewardKind kind, std::optional<int> checkpoint_step) {
  ScoreRecord r;
  r.sample_id = sample.id;
  r.raw_generation = std::string(generation);
  r.extracted = extract_answer(generation);
  r.reward = reward(kind, generation, sample.gold);
  r.reward_kind = kind;
  r.difficulty = sample.difficulty;
  r.checkpoint_step = checkpoint_step;
  return r;
}

Bucket summarize(const std::vector<double>& values) {
  Moments m;
  for (double v : values) m.add(v);
  return m.bucket();
}

Bucket merge(const Bucket& a, const Bucket& b) {
  if (a.n == 0) return b;
  if (b.n == 0) return a;
  // Recover each side's sum of squared deviations from its standard error.
  auto m2_of = [](const Bucket& x) {
    const double n = static_cast<double>(x.n);
    return x.n < 2 ? 0.0 : x.standard_error * x.standard_error * n * (n - 1.0);
  };
  const double na = static_cast<double>(a.n);
  const double nb = static_cast<double>(b.n);
  const double n = na + nb;
  const double delta = b.mean - a.mean;
  const double m2 = m2_of(a) + m2_of(b) + delta * delta * na * nb / n;
  Bucket out;
  out.n = a.n + b.n;
  out.mean = a.mean + delta * nb / n;
  out.standard_error = out.n < 2 ? 0.0 : std::sqrt(m2 / (n - 1.0)) / std::sqrt(n);
  return out;
}

StratifiedReport stratify(const std::vector<ScoreRecord>& records) {
  std::map<int, Moments> by_difficulty;
  Moments all;
  for (const auto& r : records) {
    by_difficulty[r.difficulty].add(r.reward);
    all.add(r.reward);
  }
  StratifiedReport out;
  for (const auto& [d, m] : by_difficulty) out.buckets[d] = m.bucket();
  out.overall = all.bucket();
  return out;
}

StratifiedReport merge(const StratifiedReport& a, const StratifiedReport& b) {
  StratifiedReport out = a;
  for (const auto& [d, bucket] : b.buckets) {
    auto it = out.buckets.find(d);
    out.buckets[d] = it == out.buckets.end() ? bucket : merge(it->second, bucket);
  }
  out.overall = merge(a.overall, b.overall);
  return out;
}

std::vector<double> groundedness_fractions(const std::vector<std::vector<bool>>& rows) {
  std::size_t width = 0;
  for (const auto& r : rows) width = std::max(width, r.size());
  std::vector<double> out(width, 0.0);
  for (std::size_t k = 0; k < width; ++k) {
    std::size_t hits = 0;
    std::size_t total = 0;
    for (const auto& r : rows) {
      if (k >= r.size()) continue;
      ++total;
      hits += r[k] ? 1 : 0;
    }
    out[k] = total == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(total);
  }
  return out;
}

}  // namespace synthrl::scoring
