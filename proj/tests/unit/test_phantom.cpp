#include <gtest/gtest.h>

#include <map>
#include <set>

#include "oracles.hpp"
#include "synthrl/errors.hpp"
#include "synthrl/phantom.hpp"
#include "synthrl/relations.hpp"
#include "synthrl/validation.hpp"

using namespace synthrl;
using phantom::PhantomConfig;

namespace {

PhantomConfig small_cfg(int people, std::uint64_t seed) {
  PhantomConfig c;
  c.n_universes = 1;
  c.people_per_universe = people;
  c.seed = seed;
  return c;
}

std::set<std::string> as_set(const AnswerSet& a) { return a.values(); }

// Hand-built universe:
//   Ann + Bob -> Cat (f), Dan (m), Eve (f); Fay is a friend of Ann and Cat.
Universe six_people() {
  Universe u;
  u.id = "hand";
  const char* names[] = {"Ann Ash", "Bob Ash", "Cat Ash", "Dan Ash", "Eve Ash", "Fay Fox"};
  const Gender g[] = {Gender::female, Gender::male, Gender::female, Gender::male, Gender::female, Gender::female};
  const char* hobbies[] = {"chess", "fishing", "birdwatching", "sailing", "origami", "pottery"};
  for (std::uint32_t i = 0; i < 6; ++i) {
    Person p;
    p.id = PersonId{i};
    p.full_name = names[i];
    p.gender = g[i];
    p.date_of_birth = "0900-01-0" + std::to_string(i + 1);
    p.hobby = hobbies[i];
    p.occupation = "baker";
    u.persons.push_back(p);
  }
  auto both = [&](RelationKind k, std::uint32_t a, std::uint32_t b) {
    u.relations.push_back({k, {a}, {b}});
    u.relations.push_back({k, {b}, {a}});
  };
  both(RelationKind::spouse_of, 0, 1);
  for (std::uint32_t c : {2u, 3u, 4u}) {
    u.relations.push_back({RelationKind::parent_of, {0}, {c}});
    u.relations.push_back({RelationKind::parent_of, {1}, {c}});
  }
  both(RelationKind::friend_of, 5, 0);
  both(RelationKind::friend_of, 5, 2);
  return u;
}

}  // namespace

TEST(PhantomUniverse, DefaultSizeAndValid) {
  PhantomConfig c;
  c.seed = 11;
  const auto u = phantom::generate_universe(c, 0);
  EXPECT_EQ(u.persons.size(), 25u);
  EXPECT_TRUE(validate_universe(u).empty());
}

TEST(PhantomUniverse, Deterministic) {
  PhantomConfig c;
  c.seed = 5;
  EXPECT_EQ(phantom::generate_universe(c, 3), phantom::generate_universe(c, 3));
  EXPECT_NE(phantom::generate_universe(c, 3), phantom::generate_universe(c, 4));
}

TEST(PhantomUniverse, MinimalWorld) {
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto u = phantom::generate_universe(small_cfg(2, s), 0);
    ASSERT_EQ(u.persons.size(), 2u);
    EXPECT_TRUE(validate_universe(u).empty());
    // one pair of people: a marriage and/or a friendship, each stored both ways
    EXPECT_LE(u.relations.size(), 4u);


    for (const auto& r : u.relations) EXPECT_NE(r.kind, RelationKind::parent_of);
  }
}

TEST(PhantomUniverse, RejectsTooFewPeople) {
  EXPECT_THROW(phantom::generate_universe(small_cfg(1, 0), 0), ConfigError);
  PhantomConfig c;
  c.cfg_recursion_depth = 0;
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(PhantomUniverse, ValidOverManySeeds) {
  for (std::uint64_t s = 0; s < 1000; ++s) {
    const int people = 2 + static_cast<int>(s % 29);
    const auto u = phantom::generate_universe(small_cfg(people, s), static_cast<int>(s % 7));
    ASSERT_EQ(u.persons.size(), static_cast<std::size_t>(people));
    const auto v = validate_universe(u);
    ASSERT_TRUE(v.empty()) << "seed " << s << ": " << v.front().detail;
  }
}

TEST(PhantomArticles, OnePerPersonAndSymmetricSpouses) {
  PhantomConfig c;
  c.seed = 2;
  const auto u = phantom::generate_universe(c, 1);
  const auto arts = phantom::render_articles(u);
  ASSERT_EQ(arts.size(), u.persons.size());
  for (std::size_t i = 0; i < arts.size(); ++i) EXPECT_EQ(arts[i].title, u.persons[i].full_name);
  for (const auto& r : u.relations) {
    if (r.kind != RelationKind::spouse_of) continue;
    const auto& a = u.person(r.from);
    const auto& b = u.person(r.to);
    const std::string word = b.gender == Gender::female ? "wife" : "husband";
    EXPECT_NE(arts[r.from.value].body.find("The " + word + " of " + a.full_name + " is " + b.full_name + "."),
              std::string::npos);
  }
}

TEST(PhantomArticles, NoFriendsNoFriendSentence) {
  auto u = six_people();
  const auto arts = phantom::render_articles(u);
  EXPECT_EQ(arts[3].body.find("friend"), std::string::npos);
  EXPECT_NE(arts[5].body.find("The friends of Fay Fox are Ann Ash, Cat Ash."), std::string::npos);
  EXPECT_NE(arts[0].body.find("The daughters of Ann Ash are Cat Ash, Eve Ash."), std::string::npos);
  EXPECT_NE(arts[0].body.find("The son of Ann Ash is Dan Ash."), std::string::npos);
  EXPECT_NE(arts[0].body.find("The hobby of Ann Ash is chess."), std::string::npos);
  EXPECT_EQ(arts[0].text().rfind("# Ann Ash\n\n", 0), 0u);
}

TEST(PhantomResolve, HandBuiltExamples) {
  const auto u = six_people();
  // Dan has no friends.
  EXPECT_TRUE(phantom::resolve(hop("friend", QuestionAst::by_name("Dan Ash")), u).empty());
  // Two sisters.
  EXPECT_EQ(as_set(phantom::resolve(hop("sister", QuestionAst::by_name("Dan Ash")), u)),
            (std::set<std::string>{"Cat Ash", "Eve Ash"}));
  // The mother of the friend of Fay.
  const auto q = hop("mother", hop("friend", QuestionAst::by_name("Fay Fox")));
  EXPECT_EQ(as_set(phantom::resolve(q, u)), oracle::brute_resolve(q, u));
  EXPECT_EQ(as_set(phantom::resolve(q, u)), (std::set<std::string>{"Ann Ash"}));
  // Attribute anchor and lookup.
  const auto q2 = attr_lookup(Attribute::hobby, hop("brother", QuestionAst::by_attribute(Attribute::hobby, "birdwatching")));
  EXPECT_EQ(as_set(phantom::resolve(q2, u)), (std::set<std::string>{"sailing"}));
}

TEST(PhantomResolve, UnknownAnchorThrows) {
  EXPECT_THROW(phantom::resolve(hop("friend", QuestionAst::by_name("Nobody")), six_people()), UnknownAnchor);
}

// Every chain of relation words with total cost <= 3 from every anchor, plus
// attribute lookups, on a handful of small universes.
TEST(PhantomResolve, ExhaustiveAgreementWithBruteForce) {
  std::vector<std::string> words;
  for (const auto& [w, cost] : oracle::relation_word_cost()) words.push_back(w);
  std::size_t checked = 0;
  for (std::uint64_t s = 0; s < 6; ++s) {
    const auto u = phantom::generate_universe(small_cfg(8 + static_cast<int>(s % 3), 100 + s), 0);
    std::vector<QuestionAst> anchors;
    for (const auto& p : u.persons) {
      anchors.push_back(QuestionAst::by_name(p.full_name));
      anchors.push_back(QuestionAst::by_attribute(Attribute::hobby, p.hobby));
    }
    std::vector<std::vector<std::string>> chains = {{}};
    for (std::size_t i = 0; i < chains.size(); ++i) {
      int cost = 0;
      for (const auto& w : chains[i]) cost += oracle::relation_word_cost().at(w);
      for (const auto& w : words) {
        if (cost + oracle::relation_word_cost().at(w) > 3) continue;
        auto next = chains[i];
        next.push_back(w);
        chains.push_back(next);
      }
    }
    for (const auto& a : anchors) {
      for (const auto& chain : chains) {
        if (chain.empty()) continue;
        QuestionAst q = a;
        q.hops = chain;
        ASSERT_EQ(as_set(phantom::resolve(q, u)), oracle::brute_resolve(q, u)) << question_text(q);
        q.lookup = Attribute::date_of_birth;
        ASSERT_EQ(as_set(phantom::resolve(q, u)), oracle::brute_resolve(q, u)) << question_text(q);
        checked += 2;
      }
    }
  }
  EXPECT_GT(checked, 10000u);
}

TEST(PhantomQuestions, GoldsMatchOraclesAndBounds) {
  PhantomConfig c;
  c.seed = 9;
  const auto u = phantom::generate_universe(c, 0);
  const auto qs = phantom::expand_questions(u, c);
  std::set<std::string> texts;
  std::size_t empty = 0;
  for (const auto& q : qs) {
    ASSERT_EQ(q.text, question_text(q.ast));
    ASSERT_TRUE(texts.insert(q.text).second) << "duplicate " << q.text;
    ASSERT_EQ(q.difficulty, difficulty_of(q.ast));
    ASSERT_GE(q.difficulty, 1);
    ASSERT_LE(q.difficulty, c.max_difficulty);
    ASSERT_LE(static_cast<int>(q.ast.hops.size()), c.cfg_recursion_depth);
    ASSERT_EQ(q.answer, phantom::resolve(q.ast, u));
    ASSERT_EQ(as_set(q.answer), oracle::brute_resolve(q.ast, u)) << q.text;
    EXPECT_TRUE(q.text.rfind("Who is the ", 0) == 0 || q.text.rfind("What is the ", 0) == 0);
    EXPECT_EQ(q.text.find("How many"), std::string::npos);
    empty += q.answer.empty();
  }
  EXPECT_NEAR(static_cast<double>(qs.size()), 330.0, 33.0);
  EXPECT_LE(empty, static_cast<std::size_t>(0.1 * c.target_questions_per_universe));
}

TEST(PhantomQuestions, DepthOneMeansOneRelationWord) {
  PhantomConfig c;
  c.seed = 4;
  c.cfg_recursion_depth = 1;
  const auto u = phantom::generate_universe(c, 0);
  const auto qs = phantom::expand_questions(u, c);
  ASSERT_FALSE(qs.empty());
  for (const auto& q : qs) EXPECT_LE(q.ast.hops.size(), 1u) << q.text;
}

// Each atomic step's supporting fact sits in the article of the person the
// step starts from; the anchor's attribute and the looked-up value are stated
// in the relevant articles.
TEST(PhantomQuestions, Answerability) {
  PhantomConfig c;
  c.seed = 21;
  const auto u = phantom::generate_universe(c, 2);
  const auto arts = phantom::render_articles(u);
  auto article_of = [&](const std::string& name) -> const std::string& {
    return arts.at(u.find_by_name(name)->value).body;
  };
  for (const auto& q : phantom::expand_questions(u, c)) {
    std::set<std::string> current;
    if (q.ast.anchor.name) {
      current.insert(*q.ast.anchor.name);
    } else {
      const auto& [attr, value] = *q.ast.anchor.attribute;
      for (const auto& p : u.persons) {
        if (attribute_of(p, attr) != value) continue;
        current.insert(p.full_name);
        EXPECT_NE(article_of(p.full_name).find(value), std::string::npos);
      }
    }
    for (const auto& word : q.ast.hops) {
      for (const auto& step : expand_relation(word)) {
        std::set<std::string> next;
        for (const auto& from : current) {
          const auto src = *u.find_by_name(from);
          for (const auto& p : u.persons) {
            if (step.gender && p.gender != *step.gender) continue;
            bool linked = false;
            for (const auto& r : u.relations) {
              const bool fwd = r.from == src && r.to == p.id;
              const bool back = r.from == p.id && r.to == src;
              switch (step.step) {
                case Step::parent: linked |= r.kind == RelationKind::parent_of && back; break;
                case Step::child: linked |= r.kind == RelationKind::parent_of && fwd; break;
                case Step::spouse: linked |= r.kind == RelationKind::spouse_of && fwd; break;
                case Step::friend_: linked |= r.kind == RelationKind::friend_of && fwd; break;
                case Step::sibling: break;
              }
            }
            if (step.step == Step::sibling && p.id != src) {
              for (const auto& r1 : u.relations) {
                if (r1.kind != RelationKind::parent_of || r1.to != src) continue;
                for (const auto& r2 : u.relations) {
                  linked |= r2.kind == RelationKind::parent_of && r2.from == r1.from && r2.to == p.id;
                }
              }
            }
            if (!linked) continue;
            next.insert(p.full_name);
            EXPECT_NE(article_of(from).find(p.full_name), std::string::npos) << q.text;
          }
        }
        current = std::move(next);
      }
    }
    if (q.ast.lookup) {
      for (const auto& name : current) {
        const auto& p = u.person(*u.find_by_name(name));
        EXPECT_NE(article_of(name).find(attribute_of(p, *q.ast.lookup)), std::string::npos);
      }
    }
  }
}

TEST(PhantomSplit, ByUniverse) {
  PhantomConfig c;
  c.seed = 3;
  c.n_universes = 2;
  c.people_per_universe = 12;
  c.target_questions_per_universe = 60;
  std::vector<Universe> us = {phantom::generate_universe(c, 0), phantom::generate_universe(c, 1)};
  const auto split = phantom::make_split(us, 1, c);
  std::set<std::string> train_u, test_u;
  for (const auto& s : split.train) {
    train_u.insert(*s.universe_id);
    EXPECT_EQ(s.split, Split::train);
  }
  for (const auto& s : split.test) {
    test_u.insert(*s.universe_id);
    EXPECT_EQ(s.split, Split::test);
  }
  EXPECT_EQ(train_u, (std::set<std::string>{us[0].id}));
  EXPECT_EQ(test_u, (std::set<std::string>{us[1].id}));
  ASSERT_FALSE(split.test.empty());
  const auto& s = split.test.front();
  EXPECT_EQ(s.prompt.rfind("You are given the following evidence:", 0), 0u);
  EXPECT_NE(s.prompt.find("(BEGIN EVIDENCE)"), std::string::npos);
  EXPECT_NE(s.prompt.find(phantom::render_evidence(us[1])), std::string::npos);
  EXPECT_NE(s.prompt.find(s.question_text), std::string::npos);
}
