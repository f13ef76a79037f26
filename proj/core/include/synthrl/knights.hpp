#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "synthrl/model.hpp"

namespace synthrl::knights {

enum class KkTheme { knights_knaves, heroes_villains, angels_devils, saints_sinners, sages_fools, altruists_egoists };

struct ThemeWords {
  std::string_view truthful;         // "hero"
  std::string_view liar;             // "villain"
  std::string_view truthful_plural;  // "heroes"
  std::string_view liar_plural;      // "villains"
};

ThemeWords theme_words(KkTheme t);
std::string_view to_string(KkTheme t);
std::span<const KkTheme> all_themes();

// Statement formula. An atom claims `person` is a truth-teller (or a liar).
class Formula {
 public:
  enum class Kind { atom, and_, or_, implies, iff };

  static Formula atom(int person, bool truthful);
  static Formula binary(Kind kind, Formula lhs, Formula rhs);

  Kind kind() const { return kind_; }
  int person() const { return person_; }
  bool claims_truthful() const { return truthful_; }
  const Formula& lhs() const { return *children_.at(0); }
  const Formula& rhs() const { return *children_.at(1); }
  int depth() const;

  // assignment[i] is true when person i tells the truth.
  bool eval(const std::vector<bool>& assignment) const;

  Formula(const Formula& other);
  Formula& operator=(const Formula& other);
  Formula(Formula&&) noexcept = default;
  Formula& operator=(Formula&&) noexcept = default;

 private:
  Formula() = default;
  Kind kind_ = Kind::atom;
  int person_ = 0;
  bool truthful_ = true;
  std::vector<std::unique_ptr<Formula>> children_;
};

struct Statement {
  int speaker = 0;
  Formula formula;
};

struct KkInstance {
  int n_people = 0;
  KkTheme theme = KkTheme::knights_knaves;
  std::vector<std::string> names;
  std::vector<Statement> statements;  // one per person, in speaker order
  std::vector<bool> gold;
};

// Every assignment (bit i of the index is person i) consistent with all
// statements. Requires n_people <= 16.
std::vector<std::vector<bool>> solve_kk(int n_people, const std::vector<Statement>& statements);

// Rejection-samples statements until exactly one assignment survives.
// Throws GenerationExhausted or ConfigError.
KkInstance generate_kk_instance(int n_people, KkTheme theme, std::uint64_t seed);

struct RenderedKk {
  std::string question_text;
  std::string gold_text;
};

RenderedKk render_kk(const KkInstance& inst);

// "if Benjamin is a hero then Scarlett is a hero"
std::string statement_text(const Formula& f, const std::vector<std::string>& names, KkTheme theme);

// "Benjamin is a hero, and Scarlett is a villain."
std::string gold_text(const std::vector<std::string>& names, const std::vector<bool>& assignment, KkTheme theme);

// Parses a rendered puzzle back into names, theme and statements. Accepts
// every speech-verb variant the renderer emits. Throws ParseError.
struct ParsedPuzzle {
  KkTheme theme = KkTheme::knights_knaves;
  std::vector<std::string> names;
  std::vector<Statement> statements;
};
ParsedPuzzle parse_puzzle(std::string_view question_text);

struct KnightsDatasetConfig {
  int train_size = 10000;
  int test_size = 500;
  int min_people = 2;
  int max_people = 6;
  std::uint64_t seed = 0;

  void validate() const;
};

struct KnightsDataset {
  std::vector<Sample> train;
  std::vector<Sample> test;
};

// People counts cycle through [min_people, max_people] so configurations are
// balanced; difficulty is the number of people.
KnightsDataset build_knights_dataset(const KnightsDatasetConfig& cfg);

}  // namespace synthrl::knights
