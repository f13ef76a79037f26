#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "synthrl/model.hpp"

namespace synthrl::family {

struct Member {
  int id = 0;
  std::string name;
  Gender gender = Gender::female;
};

// Couples are listed in narrative order; children are keyed by couple index.
struct FamilyTree {
  std::vector<Member> persons;
  std::vector<std::pair<int, int>> couples;
  std::map<int, std::vector<int>> children;

  std::optional<int> find(std::string_view name) const;
  const Member& member(int id) const { return persons.at(static_cast<std::size_t>(id)); }

  // Throws std::invalid_argument on a broken invariant.
  void validate() const;
};

std::span<const std::string_view> relation_vocabulary();

// Relation word of `a` with respect to `b` ("Emily" is the "mother" of "Daniel"),
// or nullopt when no supported relation (or more than one) holds.
std::optional<std::string> infer_relation(const FamilyTree& t, int a, int b);

// Random tree with exactly `size` members (size >= 2).
FamilyTree generate_tree(int size, std::uint64_t seed);

// "X is married to Y. They have children called A, B and C. ..."
std::string render_narrative(const FamilyTree& t);

struct RelationQuery {
  int a = 0;
  int b = 0;
  std::string question_text;  // narrative + newline + question sentence
  std::string gold;
};

// Picks a pair with a unique supported relation. Throws NoQueryablePair.
RelationQuery pose_relation_query(const FamilyTree& t, std::uint64_t seed);

struct FamilyDatasetConfig {
  int train_size = 10000;
  int test_size = 500;
  int min_size = 3;
  int max_size = 20;
  std::uint64_t seed = 0;

  void validate() const;
};

struct FamilyDataset {
  std::vector<Sample> train;
  std::vector<Sample> test;
};

// Difficulty of each sample is the tree size.
FamilyDataset build_family_dataset(const FamilyDatasetConfig& cfg);

// Parses the narrative and question of a rendered puzzle back into a tree
// and the queried pair. Genders come from the name vocabulary, falling back to
// the opposite of a known spouse. Throws ParseError.
struct ParsedQuery {
  FamilyTree tree;
  int a = 0;
  int b = 0;
};
ParsedQuery parse_query(std::string_view question_text);

}  // namespace synthrl::family
