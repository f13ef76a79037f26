#include "synthrl/family.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <regex>
#include <set>
#include <stdexcept>

#include "synthrl/errors.hpp"
#include "synthrl/prompts.hpp"
#include "synthrl/rng.hpp"
#include "synthrl/vocabulary.hpp"

namespace synthrl::family {
namespace {

constexpr int kMaxChildren = 4;
constexpr double kOutsiderParentsRate = 0.5;

constexpr std::array<std::string_view, 16> kVocabulary = {
    "mother", "father", "son",   "daughter", "brother", "sister", "husband", "wife",
    "grandfather", "grandmother", "grandson", "granddaughter", "aunt", "uncle", "niece", "nephew",
};

constexpr std::array<std::string_view, 3> kQuestionTemplates = {
    "What is {a} to {b}? Respond only with the word that describes their relationship.",
    "What relation is {a} to {b}? Answer with a single word.",
    "How is {a} related to {b}? Provide the relationship in one word.",
};

// Relation lookups over a FamilyTree.
class Kinship {
 public:
  explicit Kinship(const FamilyTree& t) : parents_(t.persons.size()), spouse_(t.persons.size(), -1) {
    for (std::size_t c = 0; c < t.couples.size(); ++c) {
      const auto [x, y] = t.couples[c];
      spouse_[static_cast<std::size_t>(x)] = y;
      spouse_[static_cast<std::size_t>(y)] = x;
      if (auto it = t.children.find(static_cast<int>(c)); it != t.children.end()) {
        for (int child : it->second) parents_[static_cast<std::size_t>(child)] = {x, y};
      }
    }
  }

  const std::vector<int>& parents(int p) const { return parents_[static_cast<std::size_t>(p)]; }
  int spouse(int p) const { return spouse_[static_cast<std::size_t>(p)]; }

  bool is_parent(int a, int b) const { return contains(parents(b), a); }
  bool is_sibling(int a, int b) const {
    if (a == b || parents(a).empty()) return false;
    for (int p : parents(a)) {
      if (contains(parents(b), p)) return true;
    }
    return false;
  }
  bool is_grandparent(int a, int b) const {
    for (int p : parents(b)) {
      if (is_parent(a, p)) return true;
    }
    return false;
  }
  bool is_aunt_or_uncle(int a, int b) const {
    for (int p : parents(b)) {
      if (is_sibling(a, p)) return true;
    }
    return false;
  }

 private:
  static bool contains(const std::vector<int>& v, int x) { return std::find(v.begin(), v.end(), x) != v.end(); }

  std::vector<std::vector<int>> parents_;
  std::vector<int> spouse_;
};

class TreeBuilder {
 public:
  TreeBuilder(int size, std::uint64_t seed) : size_(size), rng_(seed) {}

  FamilyTree build() {
    const int h = add(Gender::male);
    const int w = add(Gender::female);
    marry(h, w);
    while (static_cast<int>(t_.persons.size()) < size_) step();
    return std::move(t_);
  }

 private:
  int add(Gender g) {
    const auto pool = vocab::puzzle_names(g);
    std::string name;
    do {
      name = std::string(rng_.pick(pool));
    } while (used_.count(name));
    used_.insert(name);
    const int id = static_cast<int>(t_.persons.size());
    t_.persons.push_back({id, name, g});
    return id;
  }

  int marry(int a, int b) {
    t_.couples.emplace_back(a, b);
    married_.insert(a);
    married_.insert(b);
    return static_cast<int>(t_.couples.size()) - 1;
  }

  void step() {
    const int room = size_ - static_cast<int>(t_.persons.size());
    std::vector<int> fertile;
    for (std::size_t c = 0; c < t_.couples.size(); ++c) {
      const auto it = t_.children.find(static_cast<int>(c));
      if (it == t_.children.end() || static_cast<int>(it->second.size()) < kMaxChildren) fertile.push_back(static_cast<int>(c));
    }
    std::vector<int> single;
    for (int id : bloodline_) {
      if (!married_.count(id)) single.push_back(id);
    }
    const bool can_marry = !single.empty();
    if (!fertile.empty() && (!can_marry || rng_.bernoulli(0.55))) {
      const int c = rng_.pick(fertile);
      const int child = add(rng_.bernoulli(0.5) ? Gender::female : Gender::male);
      t_.children[c].push_back(child);
      bloodline_.push_back(child);
      return;
    }
    const int person = rng_.pick(single);
    const Gender other = t_.persons[static_cast<std::size_t>(person)].gender == Gender::female ? Gender::male : Gender::female;
    const int outsider = add(other);
    marry(person, outsider);
    if (room >= 3 && rng_.bernoulli(kOutsiderParentsRate)) {
      const int f = add(Gender::male);
      const int m = add(Gender::female);
      const int c = marry(f, m);
      t_.children[c].push_back(outsider);
    }
  }

  int size_;
  Rng rng_;
  FamilyTree t_;
  std::set<std::string> used_;
  std::set<int> married_;
  std::vector<int> bloodline_;
};

std::string fill(std::string_view tmpl, const std::string& a, const std::string& b) {
  std::string out(tmpl);
  out.replace(out.find("{a}"), 3, a);
  out.replace(out.find("{b}"), 3, b);
  return out;
}

std::string join_and(const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out += i + 1 == names.size() ? " and " : ", ";
    out += names[i];
  }
  return out;
}

}  // namespace

std::optional<int> FamilyTree::find(std::string_view name) const {
  for (const auto& m : persons) {
    if (m.name == name) return m.id;
  }
  return std::nullopt;
}

void FamilyTree::validate() const {
  const auto n = static_cast<int>(persons.size());
  std::set<std::string> names;
  for (int i = 0; i < n; ++i) {
    if (persons[static_cast<std::size_t>(i)].id != i) throw std::invalid_argument("person ids must equal their index");
    if (!names.insert(persons[static_cast<std::size_t>(i)].name).second) {
      throw std::invalid_argument("duplicate name " + persons[static_cast<std::size_t>(i)].name);
    }
  }
  std::vector<int> couple_count(persons.size(), 0);
  for (const auto& [a, b] : couples) {
    if (a < 0 || b < 0 || a >= n || b >= n || a == b) throw std::invalid_argument("malformed couple");
    if (++couple_count[static_cast<std::size_t>(a)] > 1 || ++couple_count[static_cast<std::size_t>(b)] > 1) {
      throw std::invalid_argument("person married twice");
    }
  }
  std::vector<int> parent_couple(persons.size(), -1);
  for (const auto& [c, kids] : children) {
    if (c < 0 || c >= static_cast<int>(couples.size())) throw std::invalid_argument("children of unknown couple");
    for (int k : kids) {
      if (k < 0 || k >= n) throw std::invalid_argument("unknown child id");
      if (parent_couple[static_cast<std::size_t>(k)] >= 0) throw std::invalid_argument("child with two parent couples");
      parent_couple[static_cast<std::size_t>(k)] = c;
    }
  }
  // Nobody may be their own ancestor.
  for (int start = 0; start < n; ++start) {
    std::vector<int> frontier{start};
    std::set<int> seen;
    while (!frontier.empty()) {
      const int p = frontier.back();
      frontier.pop_back();
      const int c = parent_couple[static_cast<std::size_t>(p)];
      if (c < 0) continue;
      for (int parent : {couples[static_cast<std::size_t>(c)].first, couples[static_cast<std::size_t>(c)].second}) {
        if (parent == start) throw std::invalid_argument("ancestry cycle");
        if (seen.insert(parent).second) frontier.push_back(parent);
      }
    }
  }
}

std::span<const std::string_view> relation_vocabulary() { return kVocabulary; }

std::optional<std::string> infer_relation(const FamilyTree& t, int a, int b) {
  const auto n = static_cast<int>(t.persons.size());
  if (a < 0 || b < 0 || a >= n || b >= n || a == b) return std::nullopt;
  const Kinship k(t);
  const bool female = t.member(a).gender == Gender::female;
  std::set<std::string> words;
  if (k.spouse(a) == b) words.insert(female ? "wife" : "husband");
  if (k.is_parent(a, b)) words.insert(female ? "mother" : "father");
  if (k.is_parent(b, a)) words.insert(female ? "daughter" : "son");
  if (k.is_sibling(a, b)) words.insert(female ? "sister" : "brother");
  if (k.is_grandparent(a, b)) words.insert(female ? "grandmother" : "grandfather");
  if (k.is_grandparent(b, a)) words.insert(female ? "granddaughter" : "grandson");
  if (k.is_aunt_or_uncle(a, b)) words.insert(female ? "aunt" : "uncle");
  if (k.is_aunt_or_uncle(b, a)) words.insert(female ? "niece" : "nephew");
  if (words.size() != 1) return std::nullopt;
  return *words.begin();
}

FamilyTree generate_tree(int size, std::uint64_t seed) {
  if (size < 2) throw ConfigError("family tree size must be >= 2");
  if (size > 2 * static_cast<int>(vocab::puzzle_names(Gender::male).size())) throw ConfigError("family tree too large for the name pool");
  return TreeBuilder(size, seed).build();
}

std::string render_narrative(const FamilyTree& t) {
  std::string out;
  auto sentence = [&](const std::string& s) {
    if (!out.empty()) out += " ";
    out += s;
  };
  for (std::size_t c = 0; c < t.couples.size(); ++c) {
    const auto [x, y] = t.couples[c];
    sentence(t.member(x).name + " is married to " + t.member(y).name + ".");
    const auto it = t.children.find(static_cast<int>(c));
    if (it == t.children.end() || it->second.empty()) continue;
    std::vector<std::string> names;
    for (int k : it->second) names.push_back(t.member(k).name);
    if (names.size() == 1) {
      sentence("They have a child called " + names[0] + ".");
    } else {
      sentence("They have children called " + join_and(names) + ".");
    }
  }
  return out;
}

RelationQuery pose_relation_query(const FamilyTree& t, std::uint64_t seed) {
  std::vector<std::pair<int, int>> pairs;
  std::vector<std::string> golds;
  const auto n = static_cast<int>(t.persons.size());
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (auto r = infer_relation(t, a, b)) {
        pairs.emplace_back(a, b);
        golds.push_back(*r);
      }
    }
  }
  if (pairs.empty()) throw NoQueryablePair("no pair with a unique supported relation");
  Rng rng(seed);
  const std::size_t i = rng.index(pairs.size());
  const auto tmpl = kQuestionTemplates[rng.index(kQuestionTemplates.size())];
  RelationQuery q;
  q.a = pairs[i].first;
  q.b = pairs[i].second;
  q.gold = golds[i];
  q.question_text = render_narrative(t) + "\n" + fill(tmpl, t.member(q.a).name, t.member(q.b).name);
  return q;
}

void FamilyDatasetConfig::validate() const {
  if (train_size < 0 || test_size < 0) throw ConfigError("split sizes must be >= 0");
  if (min_size < 2 || max_size < min_size) throw ConfigError("need 2 <= min_size <= max_size");
  if (max_size > 2 * static_cast<int>(vocab::puzzle_names(Gender::male).size())) throw ConfigError("max_size too large");
}

FamilyDataset build_family_dataset(const FamilyDatasetConfig& cfg) {
  cfg.validate();
  FamilyDataset out;
  const auto& tmpl = prompts::builtin_rg_family();
  const int total = cfg.train_size + cfg.test_size;
  for (int i = 0; i < total; ++i) {
    const std::uint64_t seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(i));
    Rng rng(seed);
    const int size = static_cast<int>(rng.uniform_int(cfg.min_size, cfg.max_size));
    const auto tree = generate_tree(size, derive_seed(seed, 1));
    const auto q = pose_relation_query(tree, derive_seed(seed, 2));
    Sample s;
    char buf[40];
    std::snprintf(buf, sizeof buf, "rg-family-%05d", i);
    s.id = buf;
    s.dataset = DatasetKind::rg_family;
    s.split = i < cfg.train_size ? Split::train : Split::test;
    s.difficulty = size;
    s.question_text = q.question_text;
    s.gold = AnswerSet{q.gold};
    s.seed_provenance = {cfg.seed, static_cast<std::uint64_t>(i)};
    s.prompt = prompts::assemble_prompt(tmpl, s.question_text, std::nullopt, tmpl.cot_examples);
    (s.split == Split::train ? out.train : out.test).push_back(std::move(s));
  }
  return out;
}

ParsedQuery parse_query(std::string_view question_text) {
  const auto nl = question_text.find('\n');
  if (nl == std::string_view::npos) throw ParseError("family puzzle needs a narrative line and a question line");
  const std::string narrative(question_text.substr(0, nl));
  std::string question(question_text.substr(nl + 1));
  if (auto end = question.find('\n'); end != std::string::npos) question.resize(end);

  ParsedQuery out;
  auto& t = out.tree;
  auto id_of = [&](const std::string& name) {
    if (auto id = t.find(name)) return *id;
    const int id = static_cast<int>(t.persons.size());
    t.persons.push_back({id, name, Gender::female});
    return id;
  };

  static const std::regex sentence_re(R"(([^.]+)\.\s*)");
  static const std::regex married_re(R"(^(\S+) is married to (\S+)$)");
  static const std::regex child_re(R"(^They have a child called (\S+)$)");
  static const std::regex children_re(R"(^They have children called (.+)$)");
  for (auto it = std::sregex_iterator(narrative.begin(), narrative.end(), sentence_re); it != std::sregex_iterator(); ++it) {
    const std::string s = (*it)[1].str();
    std::smatch m;
    if (std::regex_match(s, m, married_re)) {
      t.couples.emplace_back(id_of(m[1].str()), id_of(m[2].str()));
    } else if (std::regex_match(s, m, child_re) || std::regex_match(s, m, children_re)) {
      if (t.couples.empty()) throw ParseError("children listed before any couple: " + s);
      std::string list = m[1].str();
      std::vector<int>& kids = t.children[static_cast<int>(t.couples.size()) - 1];
      static const std::regex sep_re(R"(,\s*|\s+and\s+)");
      for (auto p = std::sregex_token_iterator(list.begin(), list.end(), sep_re, -1); p != std::sregex_token_iterator(); ++p) {
        if (p->length() > 0) kids.push_back(id_of(p->str()));
      }
    } else {
      throw ParseError("unrecognised narrative sentence: " + s);
    }
  }

  // Genders: name vocabulary first, then opposite of a known spouse.
  std::vector<int> known(t.persons.size(), 0);
  for (auto& p : t.persons) {
    if (auto g = vocab::puzzle_name_gender(p.name)) {
      p.gender = *g;
      known[static_cast<std::size_t>(p.id)] = 1;
    }
  }
  for (const auto& [x, y] : t.couples) {
    auto& px = t.persons[static_cast<std::size_t>(x)];
    auto& py = t.persons[static_cast<std::size_t>(y)];
    if (known[static_cast<std::size_t>(x)] && !known[static_cast<std::size_t>(y)]) {
      py.gender = px.gender == Gender::female ? Gender::male : Gender::female;
      known[static_cast<std::size_t>(y)] = 1;
    } else if (known[static_cast<std::size_t>(y)] && !known[static_cast<std::size_t>(x)]) {
      px.gender = py.gender == Gender::female ? Gender::male : Gender::female;
      known[static_cast<std::size_t>(x)] = 1;
    }
  }
  for (const auto& p : t.persons) {
    if (!known[static_cast<std::size_t>(p.id)]) throw ParseError("cannot tell the gender of " + p.name);
  }
  try {
    t.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("inconsistent family narrative: ") + e.what());
  }

  static const std::array<std::regex, 3> question_res = {
      std::regex(R"(^What is (\S+) to (\S+)\?)"),
      std::regex(R"(^What relation is (\S+) to (\S+)\?)"),
      std::regex(R"(^How is (\S+) related to (\S+)\?)"),
  };
  for (const auto& re : question_res) {
    std::smatch m;
    if (std::regex_search(question, m, re)) {
      const auto a = t.find(m[1].str());
      const auto b = t.find(m[2].str());
      if (!a || !b) throw ParseError("question names someone outside the narrative");
      out.a = *a;
      out.b = *b;
      return out;
    }
  }
  throw ParseError("unrecognised question: " + question);
}

}  // namespace synthrl::family
