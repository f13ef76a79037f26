#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "synthrl/model.hpp"

namespace synthrl {

// One document hop in the fact graph. Sibling means sharing at least one
// parent, excluding self.
enum class Step { parent, child, sibling, spouse, friend_ };

struct AtomicHop {
  Step step = Step::friend_;
  std::optional<Gender> gender;  // filter applied to the hop target

  friend bool operator==(const AtomicHop&, const AtomicHop&) = default;
};

// Closed question vocabulary: atomic words followed by macro words.
std::span<const std::string_view> atomic_relation_words();
std::span<const std::string_view> macro_relation_words();
std::span<const std::string_view> all_relation_words();

bool is_relation_word(std::string_view word);
bool is_macro_word(std::string_view word);

// Atomic hops for `word`, applied in order from the inner person outward.
// aunt -> [parent, sibling(female)]. Throws std::invalid_argument for words
// outside the vocabulary.
std::vector<AtomicHop> expand_relation(std::string_view word);

// Plural form used in surface text and articles ("child" -> "children").
std::string plural_of(std::string_view word);

// Number of person documents consulted: one per atomic hop, one for an
// attribute-value anchor, none for the final attribute lookup.
int difficulty_of(const QuestionAst& ast);

// Throws std::invalid_argument when a hop word is outside the vocabulary or
// the anchor is malformed.
void check_ast(const QuestionAst& ast);

// "Who is the nephew of the friend of the person whose hobby is birdwatching?"
std::string question_text(const QuestionAst& ast);

}  // namespace synthrl
