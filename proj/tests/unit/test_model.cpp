#include <gtest/gtest.h>

#include <map>
#include <set>

#include "oracles.hpp"
#include "synthrl/model.hpp"
#include "synthrl/relations.hpp"
#include "synthrl/rng.hpp"
#include "synthrl/validation.hpp"

using namespace synthrl;

TEST(Rng, SameSeedSameStream) {
  Rng a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next();
    EXPECT_EQ(x, b.next());
    differs |= x != c.next();
  }
  EXPECT_TRUE(differs);
}

TEST(Rng, UniformIntStaysInRange) {
  Rng r(7);
  std::map<std::int64_t, int> seen;
  for (int i = 0; i < 5000; ++i) {
    const auto v = r.uniform_int(-3, 3);
    ASSERT_GE(v, -3);
    ASSERT_LE(v, 3);
    ++seen[v];
  }
  EXPECT_EQ(seen.size(), 7u);
  for (const auto& [v, n] : seen) EXPECT_GT(n, 500) << v;
}

TEST(Rng, ShuffleIsPermutation) {
  Rng r(1);
  std::vector<int> v(50);
  for (int i = 0; i < 50; ++i) v[i] = i;
  auto w = v;
  r.shuffle(w);
  EXPECT_NE(v, w);
  std::sort(w.begin(), w.end());
  EXPECT_EQ(v, w);
}

TEST(Rng, DerivedSeedsDiffer) {
  std::set<std::uint64_t> s;
  for (std::uint64_t i = 0; i < 1000; ++i) s.insert(derive_seed(5, i));
  EXPECT_EQ(s.size(), 1000u);
  EXPECT_NE(derive_seed(1, 2), derive_seed(2, 1));
}

TEST(Rng, WeightedRespectsZeroWeights) {
  Rng r(3);
  const std::vector<double> w = {0.0, 1.0, 0.0, 3.0};
  std::map<std::size_t, int> seen;
  for (int i = 0; i < 4000; ++i) ++seen[r.weighted(w)];
  EXPECT_EQ(seen.count(0), 0u);
  EXPECT_EQ(seen.count(2), 0u);
  EXPECT_NEAR(seen[3] / 4000.0, 0.75, 0.03);
}

TEST(AnswerSet, TrimsAndDeduplicates) {
  AnswerSet a{" Vicki Hackworth", "Barabara Beltran", "Vicki Hackworth "};
  EXPECT_EQ(a.size(), 2u);
  EXPECT_TRUE(a.contains("Vicki Hackworth"));
  EXPECT_EQ(a, (AnswerSet{"Barabara Beltran", "Vicki Hackworth"}));
}

TEST(AnswerSet, SingleRequiresOneValue) {
  EXPECT_EQ(AnswerSet{"8"}.single(), "8");
  EXPECT_THROW((void)AnswerSet{}.single(), std::logic_error);
}

TEST(Sample, EmptyGoldOnlyForPhantom) {
  Sample s;
  s.id = "x";
  s.dataset = DatasetKind::phantom;
  EXPECT_NO_THROW(check_sample(s));
  s.dataset = DatasetKind::gsm_inf;
  EXPECT_THROW(check_sample(s), std::invalid_argument);
  s.gold = AnswerSet{"3"};
  s.difficulty = 0;
  EXPECT_THROW(check_sample(s), std::invalid_argument);
}

TEST(Enums, RoundTrip) {
  for (auto k : {DatasetKind::phantom, DatasetKind::gsm_inf, DatasetKind::rg_family, DatasetKind::rg_knights,
                 DatasetKind::external}) {
    EXPECT_EQ(parse_dataset_kind(to_string(k)), k);
  }
  EXPECT_EQ(parse_split("test"), Split::test);
  EXPECT_FALSE(parse_dataset_kind("nope"));
}

TEST(Difficulty, Examples) {
  EXPECT_EQ(difficulty_of(hop("friend", QuestionAst::by_name("A"))), 1);
  EXPECT_EQ(difficulty_of(attr_lookup(Attribute::occupation, hop("husband", QuestionAst::by_attribute(Attribute::hobby, "finance")))), 2);
  EXPECT_EQ(difficulty_of(hop("nephew", hop("friend", QuestionAst::by_attribute(Attribute::hobby, "birdwatching")))), 4);
}

TEST(Difficulty, MatchesAtomicExpansionForEveryWord) {
  for (auto w : all_relation_words()) {
    const auto ast = hop(std::string(w), QuestionAst::by_name("A"));
    EXPECT_EQ(difficulty_of(ast), static_cast<int>(expand_relation(w).size())) << w;
    EXPECT_EQ(difficulty_of(ast), oracle::relation_word_cost().at(std::string(w))) << w;
  }
  EXPECT_EQ(all_relation_words().size(), oracle::relation_word_cost().size());
}

TEST(Relations, MacroExpansion) {
  const auto aunt = expand_relation("aunt");
  ASSERT_EQ(aunt.size(), 2u);
  EXPECT_EQ(aunt[0].step, Step::parent);
  EXPECT_EQ(aunt[1].step, Step::sibling);
  EXPECT_EQ(aunt[1].gender, Gender::female);
  EXPECT_TRUE(is_macro_word("nephew"));
  EXPECT_FALSE(is_macro_word("friend"));
  EXPECT_THROW(expand_relation("cousin"), std::invalid_argument);
  EXPECT_EQ(plural_of("child"), "children");
  EXPECT_EQ(plural_of("wife"), "wives");
}

TEST(Relations, QuestionText) {
  EXPECT_EQ(question_text(hop("sister", QuestionAst::by_name("Aida Wang"))), "Who is the sister of Aida Wang?");
  EXPECT_EQ(question_text(hop("nephew", hop("friend", QuestionAst::by_attribute(Attribute::hobby, "birdwatching")))),
            "Who is the nephew of the friend of the person whose hobby is birdwatching?");
  EXPECT_EQ(question_text(attr_lookup(Attribute::date_of_birth, hop("husband", QuestionAst::by_name("X Y")))),
            "What is the date of birth of the husband of X Y?");
}

TEST(Relations, CheckAst) {
  EXPECT_NO_THROW(check_ast(hop("friend", QuestionAst::by_name("A"))));
  EXPECT_THROW(check_ast(hop("cousin", QuestionAst::by_name("A"))), std::invalid_argument);
  QuestionAst both = QuestionAst::by_name("A");
  both.anchor.attribute = std::make_pair(Attribute::hobby, std::string("x"));
  both.hops.push_back("friend");
  EXPECT_THROW(check_ast(both), std::invalid_argument);
}

namespace {

Universe three_person_family() {
  Universe u;
  u.id = "t";
  auto add = [&](std::string name, Gender g) {
    Person p;
    p.id = PersonId{static_cast<std::uint32_t>(u.persons.size())};
    p.full_name = std::move(name);
    p.gender = g;
    p.date_of_birth = "0959-03-22";
    p.hobby = "birdwatching";
    p.occupation = "baker";
    u.persons.push_back(p);
  };
  add("Ann Lee", Gender::female);
  add("Bob Lee", Gender::male);
  add("Cat Lee", Gender::female);
  u.persons[1].hobby = "dominoes";
  u.persons[2].hobby = "chess";
  u.persons[1].occupation = "architect";
  u.persons[2].occupation = "pilot";
  u.relations = {{RelationKind::spouse_of, {0}, {1}}, {RelationKind::spouse_of, {1}, {0}},
                 {RelationKind::parent_of, {0}, {2}}, {RelationKind::parent_of, {1}, {2}}};
  return u;
}

bool has(const std::vector<Violation>& v, ViolationKind k) {
  return std::any_of(v.begin(), v.end(), [&](const Violation& x) { return x.kind == k; });
}

}  // namespace

TEST(Validation, WellFormedFamily) { EXPECT_TRUE(validate_universe(three_person_family()).empty()); }

TEST(Validation, TwoCycle) {
  auto u = three_person_family();
  u.relations.push_back({RelationKind::parent_of, {2}, {0}});
  EXPECT_TRUE(has(validate_universe(u), ViolationKind::parent_cycle));
}

TEST(Validation, AsymmetricSpouse) {
  auto u = three_person_family();
  u.relations.pop_back();
  u.relations.pop_back();
  u.relations.erase(u.relations.begin() + 1);
  EXPECT_TRUE(has(validate_universe(u), ViolationKind::asymmetric_relation));
}

TEST(Validation, DuplicateNameAndBadDate) {
  auto u = three_person_family();
  u.persons[2].full_name = "Ann Lee";
  u.persons[1].date_of_birth = "959-3-22";
  const auto v = validate_universe(u);
  EXPECT_TRUE(has(v, ViolationKind::duplicate_name));
  EXPECT_TRUE(has(v, ViolationKind::bad_date));
}
