#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace synthrl {

// Opaque person handle; indexes Universe::persons.
struct PersonId {
  std::uint32_t value = 0;
  friend auto operator<=>(const PersonId&, const PersonId&) = default;
};

enum class Gender { female, male };

struct Person {
  PersonId id;
  std::string full_name;
  Gender gender = Gender::female;
  std::string date_of_birth;  // ISO-8601, four-digit zero-padded year
  std::string hobby;
  std::string occupation;

  friend bool operator==(const Person&, const Person&) = default;
};

enum class RelationKind { parent_of, spouse_of, friend_of };

// `from` is the parent for parent_of. spouse_of and friend_of are stored in
// both directions.
struct RelationEdge {
  RelationKind kind = RelationKind::friend_of;
  PersonId from;
  PersonId to;

  friend bool operator==(const RelationEdge&, const RelationEdge&) = default;
};

struct Universe {
  std::string id;
  std::uint64_t seed = 0;
  std::vector<Person> persons;
  std::vector<RelationEdge> relations;

  const Person& person(PersonId id) const { return persons.at(id.value); }
  std::optional<PersonId> find_by_name(std::string_view full_name) const;

  friend bool operator==(const Universe&, const Universe&) = default;
};

enum class Attribute { hobby, occupation, date_of_birth };

std::string_view to_string(Attribute a);
std::string_view to_string(Gender g);
std::string_view to_string(RelationKind k);
const std::string& attribute_of(const Person& p, Attribute a);

// Multi-hop query, stored as a chain: anchor, then relation words applied from
// the anchor outward, then an optional attribute lookup at the root. The chain
// shape makes "one anchor at the leaf, lookup only at the root" structural.
struct QuestionAst {
  struct Anchor {
    std::optional<std::string> name;
    std::optional<std::pair<Attribute, std::string>> attribute;
    friend bool operator==(const Anchor&, const Anchor&) = default;
  };

  Anchor anchor;
  std::vector<std::string> hops;  // innermost first
  std::optional<Attribute> lookup;

  static QuestionAst by_name(std::string name);
  static QuestionAst by_attribute(Attribute attr, std::string value);

  friend bool operator==(const QuestionAst&, const QuestionAst&) = default;
};

// Builders mirroring the recursive grammar: hop("friend", by_name("A")).
QuestionAst hop(std::string relation_word, QuestionAst inner);
QuestionAst attr_lookup(Attribute attr, QuestionAst inner);

// Canonical answer set: values trimmed, duplicates removed, order-free.
class AnswerSet {
 public:
  AnswerSet() = default;
  AnswerSet(std::initializer_list<std::string> values);
  explicit AnswerSet(const std::vector<std::string>& values);

  void insert(std::string_view value);
  const std::set<std::string>& values() const { return values_; }
  bool empty() const { return values_.empty(); }
  std::size_t size() const { return values_.size(); }
  bool contains(std::string_view v) const { return values_.count(std::string(v)) > 0; }

  // Single-answer datasets store exactly one value.
  const std::string& single() const;
  std::vector<std::string> to_vector() const { return {values_.begin(), values_.end()}; }

  friend bool operator==(const AnswerSet&, const AnswerSet&) = default;

 private:
  std::set<std::string> values_;
};

enum class DatasetKind { phantom, gsm_inf, rg_family, rg_knights, external };
enum class Split { train, test };

std::string_view to_string(DatasetKind k);
std::string_view to_string(Split s);
std::optional<DatasetKind> parse_dataset_kind(std::string_view s);
std::optional<Split> parse_split(std::string_view s);

struct Sample {
  std::string id;
  DatasetKind dataset = DatasetKind::phantom;
  Split split = Split::train;
  int difficulty = 1;
  std::string prompt;
  std::string question_text;
  AnswerSet gold;
  std::optional<std::vector<std::string>> intermediate_golds;
  std::optional<std::string> universe_id;
  std::vector<std::uint64_t> seed_provenance;

  friend bool operator==(const Sample&, const Sample&) = default;
};

// Throws std::invalid_argument when gold/difficulty invariants fail.
void check_sample(const Sample& s);

std::string trim(std::string_view s);

}  // namespace synthrl
