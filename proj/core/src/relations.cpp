#include "synthrl/relations.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

namespace synthrl {
namespace {

struct WordDef {
  std::string_view word;
  std::string_view plural;
  std::array<AtomicHop, 3> hops;
  int n_hops;
};

constexpr auto F = Gender::female;
constexpr auto M = Gender::male;

constexpr AtomicHop h(Step s) { return AtomicHop{s, std::nullopt}; }
constexpr AtomicHop h(Step s, Gender g) { return AtomicHop{s, g}; }

const std::array<WordDef, 21> kWords = {{
    {"mother", "mothers", {h(Step::parent, F)}, 1},
    {"father", "fathers", {h(Step::parent, M)}, 1},
    {"parent", "parents", {h(Step::parent)}, 1},
    {"son", "sons", {h(Step::child, M)}, 1},
    {"daughter", "daughters", {h(Step::child, F)}, 1},
    {"child", "children", {h(Step::child)}, 1},
    {"brother", "brothers", {h(Step::sibling, M)}, 1},
    {"sister", "sisters", {h(Step::sibling, F)}, 1},
    {"husband", "husbands", {h(Step::spouse, M)}, 1},
    {"wife", "wives", {h(Step::spouse, F)}, 1},
    {"friend", "friends", {h(Step::friend_)}, 1},
    // Macros: fixed compositions, applied from the inner person outward.
    {"aunt", "aunts", {h(Step::parent), h(Step::sibling, F)}, 2},
    {"uncle", "uncles", {h(Step::parent), h(Step::sibling, M)}, 2},
    {"nephew", "nephews", {h(Step::sibling), h(Step::child, M)}, 2},
    {"niece", "nieces", {h(Step::sibling), h(Step::child, F)}, 2},
    {"grandfather", "grandfathers", {h(Step::parent), h(Step::parent, M)}, 2},
    {"grandmother", "grandmothers", {h(Step::parent), h(Step::parent, F)}, 2},
    {"great-granddaughter", "great-granddaughters", {h(Step::child), h(Step::child), h(Step::child, F)}, 3},
    {"great-grandson", "great-grandsons", {h(Step::child), h(Step::child), h(Step::child, M)}, 3},
    {"daughter-in-law", "daughters-in-law", {h(Step::child), h(Step::spouse, F)}, 2},
    {"son-in-law", "sons-in-law", {h(Step::child), h(Step::spouse, M)}, 2},
}};

constexpr std::size_t kAtomicCount = 11;

const std::array<std::string_view, 21> kAllWords = [] {
  std::array<std::string_view, 21> out{};
  for (std::size_t i = 0; i < kWords.size(); ++i) out[i] = kWords[i].word;
  return out;
}();

const WordDef* find_word(std::string_view word) {
  auto it = std::find_if(kWords.begin(), kWords.end(), [&](const WordDef& d) { return d.word == word; });
  return it == kWords.end() ? nullptr : &*it;
}

std::string anchor_phrase(const QuestionAst::Anchor& a) {
  if (a.name) return *a.name;
  return "the person whose " + std::string(to_string(a.attribute->first)) + " is " + a.attribute->second;
}

}  // namespace

std::span<const std::string_view> atomic_relation_words() {
  return std::span<const std::string_view>(kAllWords).first(kAtomicCount);
}

std::span<const std::string_view> macro_relation_words() {
  return std::span<const std::string_view>(kAllWords).subspan(kAtomicCount);
}

std::span<const std::string_view> all_relation_words() { return kAllWords; }

bool is_relation_word(std::string_view word) { return find_word(word) != nullptr; }

bool is_macro_word(std::string_view word) {
  const auto* d = find_word(word);
  return d != nullptr && d->n_hops > 1;
}

std::vector<AtomicHop> expand_relation(std::string_view word) {
  const auto* d = find_word(word);
  if (d == nullptr) throw std::invalid_argument("unknown relation word: " + std::string(word));
  return {d->hops.begin(), d->hops.begin() + d->n_hops};
}

std::string plural_of(std::string_view word) {
  const auto* d = find_word(word);
  if (d == nullptr) throw std::invalid_argument("unknown relation word: " + std::string(word));
  return std::string(d->plural);
}

void check_ast(const QuestionAst& ast) {
  if (ast.anchor.name.has_value() == ast.anchor.attribute.has_value()) {
    throw std::invalid_argument("question needs exactly one anchor");
  }
  for (const auto& w : ast.hops) {
    if (!is_relation_word(w)) throw std::invalid_argument("unknown relation word: " + w);
  }
  if (ast.hops.empty() && !ast.lookup) throw std::invalid_argument("question has neither hops nor lookup");
  if (ast.hops.empty() && ast.anchor.name) throw std::invalid_argument("attribute lookup on a named person needs no hop");
}

int difficulty_of(const QuestionAst& ast) {
  int d = ast.anchor.attribute ? 1 : 0;
  for (const auto& w : ast.hops) {
    const auto* def = find_word(w);
    if (def == nullptr) throw std::invalid_argument("unknown relation word: " + w);
    d += def->n_hops;
  }
  return d;
}

std::string question_text(const QuestionAst& ast) {
  std::string phrase = anchor_phrase(ast.anchor);
  for (const auto& w : ast.hops) phrase = "the " + w + " of " + phrase;
  if (ast.lookup) return "What is the " + std::string(to_string(*ast.lookup)) + " of " + phrase + "?";
  return "Who is " + phrase + "?";
}

}  // namespace synthrl
