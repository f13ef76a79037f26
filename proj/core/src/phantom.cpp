#include "synthrl/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <stdexcept>
#include <unordered_set>

#include "synthrl/errors.hpp"
#include "synthrl/prompts.hpp"
#include "synthrl/relations.hpp"
#include "synthrl/rng.hpp"
#include "synthrl/vocabulary.hpp"

namespace synthrl::phantom {
namespace {

// Seed stream tags.
constexpr std::uint64_t kQuestionStream = 0x51;

constexpr int kMaxChildrenPerCouple = 3;
constexpr double kMarriageRate = 0.6;
constexpr double kExpectedFriendDegree = 4.0;

// Grammar weights: probability of recursing into another relation hop after
// k hops is kRecurseBase * kRecurseDecay^k.
constexpr double kWhatQueryRate = 0.35;
constexpr double kAttributeAnchorRate = 0.35;
constexpr double kRecurseBase = 0.78;
constexpr double kRecurseDecay = 0.94;
constexpr int kAttemptsPerQuestion = 400;

std::string format_date(int year, int month, int day) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year, month, day);
  return buf;
}

class UniverseBuilder {
 public:
  UniverseBuilder(const PhantomConfig& cfg, int index) : rng_(universe_seed(cfg, index)), budget_(cfg.people_per_universe) {
    u_.seed = universe_seed(cfg, index);
    char buf[32];
    std::snprintf(buf, sizeof buf, "u%03d", index);
    u_.id = buf;
    surnames_.assign(vocab::surnames().begin(), vocab::surnames().end());
    rng_.shuffle(surnames_);
  }

  Universe build() {
    while (budget_ > 0) build_family();
    assign_attributes();
    add_friendships();
    return std::move(u_);
  }

 private:
  struct Couple {
    PersonId a;
    PersonId b;
    int birth_year;
  };

  void build_family() {
    const std::string surname = next_surname();
    const int founders_year = static_cast<int>(rng_.uniform_int(900, 960));
    if (budget_ == 1) {
      add_person(rng_.bernoulli(0.5) ? Gender::female : Gender::male, surname, founders_year);
      return;
    }
    const PersonId husband = add_person(Gender::male, surname, founders_year);
    const PersonId wife = add_person(Gender::female, surname, founders_year + static_cast<int>(rng_.uniform_int(-4, 4)));
    marry(husband, wife);

    std::vector<Couple> generation{{husband, wife, founders_year}};
    // Founders plus at most two descendant generations.
    for (int depth = 0; depth < 2 && budget_ > 0; ++depth) {
      std::vector<Couple> next;
      for (const auto& couple : generation) {
        const int n_children = static_cast<int>(rng_.uniform_int(0, kMaxChildrenPerCouple));
        for (int c = 0; c < n_children && budget_ > 0; ++c) {
          const Gender g = rng_.bernoulli(0.5) ? Gender::female : Gender::male;
          const int year = couple.birth_year + static_cast<int>(rng_.uniform_int(20, 35));
          const PersonId child = add_person(g, surname, year);
          u_.relations.push_back({RelationKind::parent_of, couple.a, child});
          u_.relations.push_back({RelationKind::parent_of, couple.b, child});
          if (depth == 0 && budget_ > 0 && rng_.bernoulli(kMarriageRate)) {
            const Gender other = g == Gender::female ? Gender::male : Gender::female;
            const PersonId spouse = add_person(other, surname, year + static_cast<int>(rng_.uniform_int(-5, 5)));
            marry(child, spouse);
            next.push_back({child, spouse, year});
          }
        }
      }
      generation = std::move(next);
    }
  }

  std::string next_surname() {
    const std::string s(surnames_[next_surname_ % surnames_.size()]);
    ++next_surname_;
    return s;
  }

  PersonId add_person(Gender g, const std::string& surname, int year) {
    const auto pool = vocab::given_names(g);
    std::string full;
    for (int attempt = 0;; ++attempt) {
      if (attempt > 10000) throw ConfigError("cannot draw a unique name; universe too large for the name pools");
      full = std::string(rng_.pick(pool)) + " " + surname;
      if (used_names_.insert(full).second) break;
    }
    Person p;
    p.id = PersonId{static_cast<std::uint32_t>(u_.persons.size())};
    p.full_name = std::move(full);
    p.gender = g;
    p.date_of_birth = format_date(year, static_cast<int>(rng_.uniform_int(1, 12)), static_cast<int>(rng_.uniform_int(1, 28)));
    u_.persons.push_back(std::move(p));
    --budget_;
    return u_.persons.back().id;
  }

  void marry(PersonId a, PersonId b) {
    u_.relations.push_back({RelationKind::spouse_of, a, b});
    u_.relations.push_back({RelationKind::spouse_of, b, a});
  }

  // Values are unique per universe while the vocabulary lasts.
  void assign_attributes() {
    std::vector<std::string_view> hobbies(vocab::hobbies().begin(), vocab::hobbies().end());
    std::vector<std::string_view> jobs(vocab::occupations().begin(), vocab::occupations().end());
    rng_.shuffle(hobbies);
    rng_.shuffle(jobs);
    for (std::size_t i = 0; i < u_.persons.size(); ++i) {
      u_.persons[i].hobby = std::string(hobbies[i % hobbies.size()]);
      u_.persons[i].occupation = std::string(jobs[i % jobs.size()]);
    }
  }

  // Erdos-Renyi graph with the configured expected degree.
  void add_friendships() {
    const std::size_t n = u_.persons.size();
    if (n < 2) return;
    const double p = std::min(1.0, kExpectedFriendDegree / static_cast<double>(n - 1));
    for (std::uint32_t i = 0; i < n; ++i) {
      for (std::uint32_t j = i + 1; j < n; ++j) {
        if (rng_.bernoulli(p)) {
          u_.relations.push_back({RelationKind::friend_of, PersonId{i}, PersonId{j}});
          u_.relations.push_back({RelationKind::friend_of, PersonId{j}, PersonId{i}});
        }
      }
    }
  }

  Rng rng_;
  int budget_;
  Universe u_;
  std::vector<std::string_view> surnames_;
  std::size_t next_surname_ = 0;
  std::unordered_set<std::string> used_names_;
};

// Adjacency view of a universe, by atomic step.
class FactIndex {
 public:
  explicit FactIndex(const Universe& u) : u_(u), n_(u.persons.size()) {
    parents_.resize(n_);
    children_.resize(n_);
    spouses_.resize(n_);
    friends_.resize(n_);
    siblings_.resize(n_);
    for (const auto& e : u.relations) {
      switch (e.kind) {
        case RelationKind::parent_of:
          children_[e.from.value].push_back(e.to.value);
          parents_[e.to.value].push_back(e.from.value);
          break;
        case RelationKind::spouse_of: spouses_[e.from.value].push_back(e.to.value); break;
        case RelationKind::friend_of: friends_[e.from.value].push_back(e.to.value); break;
      }
    }
    for (std::size_t p = 0; p < n_; ++p) {
      std::set<std::uint32_t> sib;
      for (auto parent : parents_[p]) {
        for (auto c : children_[parent]) {
          if (c != p) sib.insert(c);
        }
      }
      siblings_[p].assign(sib.begin(), sib.end());
    }
    for (auto* lists : {&parents_, &children_, &spouses_, &friends_}) {
      for (auto& l : *lists) {
        std::sort(l.begin(), l.end());
        l.erase(std::unique(l.begin(), l.end()), l.end());
      }
    }
  }

  const std::vector<std::uint32_t>& neighbours(std::uint32_t p, Step s) const {
    switch (s) {
      case Step::parent: return parents_[p];
      case Step::child: return children_[p];
      case Step::sibling: return siblings_[p];
      case Step::spouse: return spouses_[p];
      case Step::friend_: return friends_[p];
    }
    throw std::logic_error("bad step");
  }

  std::vector<bool> apply(const std::vector<bool>& from, const AtomicHop& hop) const {
    std::vector<bool> out(n_, false);
    for (std::uint32_t p = 0; p < n_; ++p) {
      if (!from[p]) continue;
      for (auto q : neighbours(p, hop.step)) {
        if (!hop.gender || u_.persons[q].gender == *hop.gender) out[q] = true;
      }
    }
    return out;
  }

  std::vector<bool> anchor(const QuestionAst::Anchor& a) const {
    std::vector<bool> out(n_, false);
    if (a.name) {
      const auto id = u_.find_by_name(*a.name);
      if (!id) throw UnknownAnchor("no person named " + *a.name);
      out[id->value] = true;
    } else {
      for (std::uint32_t p = 0; p < n_; ++p) {
        out[p] = attribute_of(u_.persons[p], a.attribute->first) == a.attribute->second;
      }
    }
    return out;
  }

  AnswerSet resolve(const QuestionAst& ast) const {
    std::vector<bool> current = anchor(ast.anchor);
    for (const auto& word : ast.hops) {
      for (const auto& h : expand_relation(word)) current = apply(current, h);
    }
    AnswerSet out;
    for (std::uint32_t p = 0; p < n_; ++p) {
      if (!current[p]) continue;
      out.insert(ast.lookup ? attribute_of(u_.persons[p], *ast.lookup) : u_.persons[p].full_name);
    }
    return out;
  }

  std::size_t size() const { return n_; }

 private:
  const Universe& u_;
  std::size_t n_;
  std::vector<std::vector<std::uint32_t>> parents_, children_, spouses_, friends_, siblings_;
};

std::string join_names(const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out += ", ";
    out += names[i];
  }
  return out;
}

// "The sisters of X are A, B." / "The wife of X is W."
std::string relation_sentence(std::string_view word, const std::string& subject, std::vector<std::string> names) {
  std::sort(names.begin(), names.end());
  if (names.size() == 1) return "The " + std::string(word) + " of " + subject + " is " + names[0] + ".";
  return "The " + plural_of(word) + " of " + subject + " are " + join_names(names) + ".";
}

std::string_view gendered_word(Step s, Gender g) {
  const bool f = g == Gender::female;
  switch (s) {
    case Step::parent: return f ? "mother" : "father";
    case Step::child: return f ? "daughter" : "son";
    case Step::sibling: return f ? "sister" : "brother";
    case Step::spouse: return f ? "wife" : "husband";
    case Step::friend_: return "friend";
  }
  return "";
}

QuestionAst sample_ast(Rng& rng, const Universe& u, const PhantomConfig& cfg) {
  const auto& person = u.persons[rng.index(u.persons.size())];
  QuestionAst ast;
  const bool what = rng.bernoulli(kWhatQueryRate);
  if (rng.bernoulli(kAttributeAnchorRate)) {
    const Attribute a = rng.bernoulli(0.5) ? Attribute::hobby : Attribute::occupation;
    ast = QuestionAst::by_attribute(a, attribute_of(person, a));
  } else {
    ast = QuestionAst::by_name(person.full_name);
  }
  // Who-questions and lookups on a named person need at least one hop.
  const bool needs_hop = !what || ast.anchor.name.has_value();
  const auto words = all_relation_words();
  for (int k = 0; k < cfg.cfg_recursion_depth; ++k) {
    const bool recurse = (k == 0 && needs_hop) || rng.bernoulli(kRecurseBase * std::pow(kRecurseDecay, k));
    if (!recurse) break;
    ast.hops.emplace_back(words[rng.index(words.size())]);
  }
  if (what) {
    std::vector<Attribute> choices{Attribute::hobby, Attribute::occupation, Attribute::date_of_birth};
    if (ast.hops.empty()) {
      // "the hobby of the person whose hobby is X" is not a question.
      std::erase(choices, ast.anchor.attribute->first);
    }
    ast.lookup = choices[rng.index(choices.size())];
  }
  return ast;
}

}  // namespace

void PhantomConfig::validate() const {
  if (n_universes < 1) throw ConfigError("n_universes must be >= 1");
  if (people_per_universe < 2) throw ConfigError("people_per_universe must be >= 2");
  if (cfg_recursion_depth < 1) throw ConfigError("cfg_recursion_depth must be >= 1");
  if (max_difficulty < 1) throw ConfigError("max_difficulty must be >= 1");
  if (target_questions_per_universe < 0) throw ConfigError("target_questions_per_universe must be >= 0");
  if (!(allow_empty_answers >= 0.0 && allow_empty_answers <= 1.0)) {
    throw ConfigError("allow_empty_answers must lie in [0, 1]");
  }
}

std::string Article::text() const { return "# " + title + "\n\n" + body; }

std::uint64_t universe_seed(const PhantomConfig& cfg, int universe_index) {
  return derive_seed(cfg.seed, static_cast<std::uint64_t>(universe_index));
}

Universe generate_universe(const PhantomConfig& cfg, int universe_index) {
  cfg.validate();
  if (universe_index < 0) throw ConfigError("universe_index must be >= 0");
  return UniverseBuilder(cfg, universe_index).build();
}

std::vector<Article> render_articles(const Universe& u) {
  const FactIndex index(u);
  std::vector<Article> out;
  out.reserve(u.persons.size());
  for (const auto& p : u.persons) {
    const std::string& name = p.full_name;
    std::vector<std::string> family;
    for (Step s : {Step::parent, Step::sibling, Step::spouse, Step::child}) {
      for (Gender g : {Gender::female, Gender::male}) {
        std::vector<std::string> names;
        for (auto q : index.neighbours(p.id.value, s)) {
          if (u.persons[q].gender == g) names.push_back(u.persons[q].full_name);
        }
        if (!names.empty()) family.push_back(relation_sentence(gendered_word(s, g), name, std::move(names)));
      }
    }
    std::vector<std::string> friends;
    for (auto q : index.neighbours(p.id.value, Step::friend_)) friends.push_back(u.persons[q].full_name);

    std::string body;
    if (!family.empty()) {
      body += "## Family\n";
      for (std::size_t i = 0; i < family.size(); ++i) body += (i ? " " : "") + family[i];
      body += "\n\n";
    }
    if (!friends.empty()) body += "## Friends\n" + relation_sentence("friend", name, std::move(friends)) + "\n\n";
    body += "## Attributes\n";
    body += "The date of birth of " + name + " is " + p.date_of_birth + ". ";
    body += "The occupation of " + name + " is " + p.occupation + ". ";
    body += "The hobby of " + name + " is " + p.hobby + ". ";
    body += "The gender of " + name + " is " + std::string(to_string(p.gender)) + ".";
    out.push_back({name, std::move(body)});
  }
  return out;
}

std::string render_evidence(const Universe& u) {
  std::string out;
  for (const auto& a : render_articles(u)) {
    if (!out.empty()) out += "\n\n";
    out += a.text();
  }
  return out;
}

AnswerSet resolve(const QuestionAst& ast, const Universe& u) {
  check_ast(ast);
  return FactIndex(u).resolve(ast);
}

std::vector<GeneratedQuestion> expand_questions(const Universe& u, const PhantomConfig& cfg) {
  cfg.validate();
  const FactIndex index(u);
  Rng rng(derive_seed(u.seed, kQuestionStream));
  const auto target = static_cast<std::size_t>(cfg.target_questions_per_universe);
  const auto max_empty = static_cast<std::size_t>(std::floor(cfg.allow_empty_answers * static_cast<double>(target)));

  std::vector<GeneratedQuestion> out;
  std::unordered_set<std::string> seen;
  std::size_t empties = 0;
  const std::size_t attempts = target * kAttemptsPerQuestion;
  for (std::size_t attempt = 0; attempt < attempts && out.size() < target; ++attempt) {
    QuestionAst ast = sample_ast(rng, u, cfg);
    const int d = difficulty_of(ast);
    if (d < 1 || d > cfg.max_difficulty) continue;
    std::string text = question_text(ast);
    if (seen.count(text)) continue;
    AnswerSet answer = index.resolve(ast);
    if (answer.empty()) {
      if (empties >= max_empty) continue;
      ++empties;
    }
    seen.insert(text);
    out.push_back({std::move(ast), std::move(text), std::move(answer), d});
  }
  return out;
}

std::vector<Sample> universe_samples(const Universe& u, int universe_index, Split split, const PhantomConfig& cfg) {
  const auto questions = expand_questions(u, cfg);
  const std::string evidence = render_evidence(u);
  const auto& tmpl = prompts::builtin(prompts::TemplateKind::phantom);
  std::vector<Sample> out;
  out.reserve(questions.size());
  for (std::size_t j = 0; j < questions.size(); ++j) {
    const auto& q = questions[j];
    Sample s;
    char buf[64];
    std::snprintf(buf, sizeof buf, "phantom-%s-q%03zu", u.id.c_str(), j);
    s.id = buf;
    s.dataset = DatasetKind::phantom;
    s.split = split;
    s.difficulty = q.difficulty;
    s.question_text = q.text;
    s.gold = q.answer;
    s.universe_id = u.id;
    s.seed_provenance = {cfg.seed, static_cast<std::uint64_t>(universe_index), u.seed};
    s.prompt = prompts::assemble_prompt(tmpl, s.question_text, evidence, tmpl.cot_examples);
    out.push_back(std::move(s));
  }
  return out;
}

SplitResult make_split(const std::vector<Universe>& universes, int n_test_universes, const PhantomConfig& cfg) {
  if (n_test_universes < 0 || static_cast<std::size_t>(n_test_universes) >= universes.size()) {
    throw ConfigError("n_test_universes must be in [0, number of universes)");
  }
  SplitResult out;
  const std::size_t first_test = universes.size() - static_cast<std::size_t>(n_test_universes);
  for (std::size_t i = 0; i < universes.size(); ++i) {
    const Split split = i < first_test ? Split::train : Split::test;
    auto samples = universe_samples(universes[i], static_cast<int>(i), split, cfg);
    auto& dest = split == Split::train ? out.train : out.test;
    dest.insert(dest.end(), std::make_move_iterator(samples.begin()), std::make_move_iterator(samples.end()));
  }
  return out;
}

}  // namespace synthrl::phantom
