#include "synthrl/model.hpp"

#include <stdexcept>

namespace synthrl {

std::string trim(std::string_view s) {
  const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; };
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return std::string(s.substr(b, e - b));
}

std::optional<PersonId> Universe::find_by_name(std::string_view full_name) const {
  for (const auto& p : persons) {
    if (p.full_name == full_name) return p.id;
  }
  return std::nullopt;
}

std::string_view to_string(Attribute a) {
  switch (a) {
    case Attribute::hobby: return "hobby";
    case Attribute::occupation: return "occupation";
    case Attribute::date_of_birth: return "date of birth";
  }
  return "?";
}

std::string_view to_string(Gender g) { return g == Gender::female ? "female" : "male"; }

std::string_view to_string(RelationKind k) {
  switch (k) {
    case RelationKind::parent_of: return "parent_of";
    case RelationKind::spouse_of: return "spouse_of";
    case RelationKind::friend_of: return "friend_of";
  }
  return "?";
}

const std::string& attribute_of(const Person& p, Attribute a) {
  switch (a) {
    case Attribute::hobby: return p.hobby;
    case Attribute::occupation: return p.occupation;
    case Attribute::date_of_birth: return p.date_of_birth;
  }
  throw std::invalid_argument("attribute_of: bad attribute");
}

QuestionAst QuestionAst::by_name(std::string name) {
  QuestionAst q;
  q.anchor.name = std::move(name);
  return q;
}

QuestionAst QuestionAst::by_attribute(Attribute attr, std::string value) {
  QuestionAst q;
  q.anchor.attribute = std::make_pair(attr, std::move(value));
  return q;
}

QuestionAst hop(std::string relation_word, QuestionAst inner) {
  if (inner.lookup) throw std::invalid_argument("hop: attribute lookup must stay at the root");
  inner.hops.push_back(std::move(relation_word));
  return inner;
}

QuestionAst attr_lookup(Attribute attr, QuestionAst inner) {
  if (inner.lookup) throw std::invalid_argument("attr_lookup: at most one lookup");
  inner.lookup = attr;
  return inner;
}

AnswerSet::AnswerSet(std::initializer_list<std::string> values) {
  for (const auto& v : values) insert(v);
}

AnswerSet::AnswerSet(const std::vector<std::string>& values) {
  for (const auto& v : values) insert(v);
}

void AnswerSet::insert(std::string_view value) { values_.insert(trim(value)); }

const std::string& AnswerSet::single() const {
  if (values_.size() != 1) throw std::logic_error("AnswerSet::single: expected exactly one value");
  return *values_.begin();
}

std::string_view to_string(DatasetKind k) {
  switch (k) {
    case DatasetKind::phantom: return "phantom";
    case DatasetKind::gsm_inf: return "gsm_inf";
    case DatasetKind::rg_family: return "rg_family";
    case DatasetKind::rg_knights: return "rg_knights";
    case DatasetKind::external: return "external";
  }
  return "?";
}

std::string_view to_string(Split s) { return s == Split::train ? "train" : "test"; }

std::optional<DatasetKind> parse_dataset_kind(std::string_view s) {
  for (auto k : {DatasetKind::phantom, DatasetKind::gsm_inf, DatasetKind::rg_family, DatasetKind::rg_knights,
                 DatasetKind::external}) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

std::optional<Split> parse_split(std::string_view s) {
  if (s == "train") return Split::train;
  if (s == "test") return Split::test;
  return std::nullopt;
}

void check_sample(const Sample& s) {
  if (s.difficulty < 1) throw std::invalid_argument("sample " + s.id + ": difficulty must be >= 1");
  if (s.gold.empty() && s.dataset != DatasetKind::phantom) {
    throw std::invalid_argument("sample " + s.id + ": empty gold is only allowed for phantom samples");
  }
}

}  // namespace synthrl
