#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "synthrl/model.hpp"

namespace synthrl::phantom {

struct PhantomConfig {
  int n_universes = 34;
  int people_per_universe = 25;
  int cfg_recursion_depth = 20;
  int max_difficulty = 9;
  int target_questions_per_universe = 330;
  double allow_empty_answers = 0.1;
  std::uint64_t seed = 0;

  // Throws ConfigError.
  void validate() const;
};

struct Article {
  std::string title;
  std::string body;

  std::string text() const;  // "# title\n\nbody"
};

struct GeneratedQuestion {
  QuestionAst ast;
  std::string text;
  AnswerSet answer;
  int difficulty = 1;
};

// Seed of universe `universe_index` under cfg.seed.
std::uint64_t universe_seed(const PhantomConfig& cfg, int universe_index);

Universe generate_universe(const PhantomConfig& cfg, int universe_index);

// One article per person, in person order.
std::vector<Article> render_articles(const Universe& u);

// All articles joined as the in-context evidence block.
std::string render_evidence(const Universe& u);

// Exact answer set of the query. Throws UnknownAnchor.
AnswerSet resolve(const QuestionAst& ast, const Universe& u);

std::vector<GeneratedQuestion> expand_questions(const Universe& u, const PhantomConfig& cfg);

struct SplitResult {
  std::vector<Sample> train;
  std::vector<Sample> test;
};

// Questions of the last `n_test_universes` universes form the test split.
// Prompts are assembled with the built-in phantom template.
SplitResult make_split(const std::vector<Universe>& universes, int n_test_universes,
                       const PhantomConfig& cfg);

// Samples for one universe (questions expanded, prompts assembled).
std::vector<Sample> universe_samples(const Universe& u, int universe_index, Split split,
                                     const PhantomConfig& cfg);

}  // namespace synthrl::phantom
