#include "synthrl/knights.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <regex>
#include <stdexcept>

#include "synthrl/errors.hpp"
#include "synthrl/prompts.hpp"
#include "synthrl/rng.hpp"
#include "synthrl/vocabulary.hpp"

namespace synthrl::knights {
namespace {

constexpr int kMaxPeople = 16;
constexpr int kInstanceAttempts = 20000;

constexpr std::array<KkTheme, 6> kThemes = {
    KkTheme::knights_knaves, KkTheme::heroes_villains, KkTheme::angels_devils,
    KkTheme::saints_sinners, KkTheme::sages_fools,     KkTheme::altruists_egoists,
};

std::string_view article(std::string_view word) {
  return std::string_view("aeiou").find(word.front()) != std::string_view::npos ? "an" : "a";
}

std::string capitalize(std::string_view s) {
  std::string out(s);
  if (!out.empty() && out[0] >= 'a' && out[0] <= 'z') out[0] = static_cast<char>(out[0] - 'a' + 'A');
  return out;
}

// "A, and B" / "A, B, and C"
std::string join_list(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += i + 1 == items.size() ? ", and " : ", ";
    out += items[i];
  }
  return out;
}

constexpr int kSpeechVariants = 15;

std::string speech(int variant, const std::string& who, const std::string& said) {
  switch (variant) {
    case 0: return who + " was heard saying, \"" + said + "\".";
    case 1: return who + " stated, \"" + said + "\".";
    case 2: return "In a statement by " + who + ": \"" + said + "\".";
    case 3: return who + " remarked, \"" + said + "\".";
    case 4: return who + " asserted: \"" + said + "\".";
    case 5: return "As " + who + " put it, \"" + said + "\".";
    case 6: return "\"" + said + ",\" " + who + " claimed.";
    case 7: return "\"" + said + ",\" " + who + " mentioned.";
    case 8: return "\"" + said + ",\" " + who + " declared.";
    case 9: return who + " said that " + said + ".";
    case 10: return "\"" + said + "\" - " + who + ".";
    case 11: return "In " + who + "'s words: \"" + said + "\".";
    case 12: return who + " noted, \"" + said + "\".";
    case 13: return who + " commented, \"" + said + "\".";
    default: return who + " expressed that " + said + ".";
  }
}

// FNV-1a, so the speech variant depends only on the puzzle content.
std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

Formula random_atom(Rng& rng, int n) {
  return Formula::atom(static_cast<int>(rng.index(static_cast<std::size_t>(n))), rng.bernoulli(0.5));
}

Formula random_formula(Rng& rng, int n) {
  const auto kind = static_cast<Formula::Kind>(rng.uniform_int(0, 4));
  if (kind == Formula::Kind::atom) return random_atom(rng, n);
  Formula lhs = random_atom(rng, n);
  Formula rhs = random_atom(rng, n);
  return Formula::binary(kind, std::move(lhs), std::move(rhs));
}

Formula parse_formula(const std::string& text, const std::vector<std::string>& names, const ThemeWords& w) {
  static const std::regex implies_re(R"(^if (.+) then (.+)$)");
  static const std::regex atom_re(R"(^(\S+) is an? (\S+)$)");
  std::smatch m;
  if (std::regex_match(text, m, implies_re)) {
    return Formula::binary(Formula::Kind::implies, parse_formula(m[1].str(), names, w), parse_formula(m[2].str(), names, w));
  }
  for (const auto& [sep, kind] : {std::pair{std::string(" if and only if "), Formula::Kind::iff},
                                  std::pair{std::string(" and "), Formula::Kind::and_},
                                  std::pair{std::string(" or "), Formula::Kind::or_}}) {
    if (auto at = text.find(sep); at != std::string::npos) {
      return Formula::binary(kind, parse_formula(text.substr(0, at), names, w),
                             parse_formula(text.substr(at + sep.size()), names, w));
    }
  }
  if (std::regex_match(text, m, atom_re)) {
    const auto it = std::find(names.begin(), names.end(), m[1].str());
    if (it == names.end()) throw ParseError("statement names an unknown inhabitant: " + m[1].str());
    const std::string role = m[2].str();
    if (role != w.truthful && role != w.liar) throw ParseError("unknown role: " + role);
    return Formula::atom(static_cast<int>(it - names.begin()), role == w.truthful);
  }
  throw ParseError("unrecognised statement: " + text);
}

}  // namespace

ThemeWords theme_words(KkTheme t) {
  switch (t) {
    case KkTheme::knights_knaves: return {"knight", "knave", "knights", "knaves"};
    case KkTheme::heroes_villains: return {"hero", "villain", "heroes", "villains"};
    case KkTheme::angels_devils: return {"angel", "devil", "angels", "devils"};
    case KkTheme::saints_sinners: return {"saint", "sinner", "saints", "sinners"};
    case KkTheme::sages_fools: return {"sage", "fool", "sages", "fools"};
    case KkTheme::altruists_egoists: return {"altruist", "egoist", "altruists", "egoists"};
  }
  return {"knight", "knave", "knights", "knaves"};
}

std::string_view to_string(KkTheme t) {
  switch (t) {
    case KkTheme::knights_knaves: return "knights_knaves";
    case KkTheme::heroes_villains: return "heroes_villains";
    case KkTheme::angels_devils: return "angels_devils";
    case KkTheme::saints_sinners: return "saints_sinners";
    case KkTheme::sages_fools: return "sages_fools";
    case KkTheme::altruists_egoists: return "altruists_egoists";
  }
  return "?";
}

std::span<const KkTheme> all_themes() { return kThemes; }

Formula Formula::atom(int person, bool truthful) {
  Formula f;
  f.kind_ = Kind::atom;
  f.person_ = person;
  f.truthful_ = truthful;
  return f;
}

Formula Formula::binary(Kind kind, Formula lhs, Formula rhs) {
  if (kind == Kind::atom) throw std::invalid_argument("binary formula needs a connective");
  Formula f;
  f.kind_ = kind;
  f.children_.push_back(std::make_unique<Formula>(std::move(lhs)));
  f.children_.push_back(std::make_unique<Formula>(std::move(rhs)));
  return f;
}

Formula::Formula(const Formula& other) : kind_(other.kind_), person_(other.person_), truthful_(other.truthful_) {
  for (const auto& c : other.children_) children_.push_back(std::make_unique<Formula>(*c));
}

Formula& Formula::operator=(const Formula& other) {
  if (this != &other) {
    Formula copy(other);
    *this = std::move(copy);
  }
  return *this;
}

int Formula::depth() const {
  if (kind_ == Kind::atom) return 0;
  return 1 + std::max(lhs().depth(), rhs().depth());
}

bool Formula::eval(const std::vector<bool>& assignment) const {
  switch (kind_) {
    case Kind::atom: return assignment.at(static_cast<std::size_t>(person_)) == truthful_;
    case Kind::and_: return lhs().eval(assignment) && rhs().eval(assignment);
    case Kind::or_: return lhs().eval(assignment) || rhs().eval(assignment);
    case Kind::implies: return !lhs().eval(assignment) || rhs().eval(assignment);
    case Kind::iff: return lhs().eval(assignment) == rhs().eval(assignment);
  }
  return false;
}

std::vector<std::vector<bool>> solve_kk(int n_people, const std::vector<Statement>& statements) {
  if (n_people < 1 || n_people > kMaxPeople) throw ConfigError("solve_kk supports 1 to 16 people");
  std::vector<std::vector<bool>> out;
  std::vector<bool> assignment(static_cast<std::size_t>(n_people));
  for (std::uint32_t mask = 0; mask < (1u << n_people); ++mask) {
    for (int i = 0; i < n_people; ++i) assignment[static_cast<std::size_t>(i)] = (mask >> i) & 1u;
    // A truth-teller's statement is true; a liar's is false.
    const bool consistent = std::all_of(statements.begin(), statements.end(), [&](const Statement& s) {
      return s.formula.eval(assignment) == assignment.at(static_cast<std::size_t>(s.speaker));
    });
    if (consistent) out.push_back(assignment);
  }
  return out;
}

KkInstance generate_kk_instance(int n_people, KkTheme theme, std::uint64_t seed) {
  if (n_people < 1 || n_people > kMaxPeople) throw ConfigError("n_people must be in [1, 16]");
  Rng rng(seed);
  std::vector<std::string_view> pool;
  for (Gender g : {Gender::female, Gender::male}) {
    const auto names = vocab::puzzle_names(g);
    pool.insert(pool.end(), names.begin(), names.end());
  }
  rng.shuffle(pool);
  KkInstance inst;
  inst.n_people = n_people;
  inst.theme = theme;
  for (int i = 0; i < n_people; ++i) inst.names.emplace_back(pool[static_cast<std::size_t>(i)]);

  for (int attempt = 0; attempt < kInstanceAttempts; ++attempt) {
    inst.statements.clear();
    for (int s = 0; s < n_people; ++s) inst.statements.push_back({s, random_formula(rng, n_people)});
    auto solutions = solve_kk(n_people, inst.statements);
    if (solutions.size() == 1) {
      inst.gold = std::move(solutions.front());
      return inst;
    }
  }
  throw GenerationExhausted("no uniquely solvable puzzle with " + std::to_string(n_people) + " people");
}

std::string statement_text(const Formula& f, const std::vector<std::string>& names, KkTheme theme) {
  const auto w = theme_words(theme);
  switch (f.kind()) {
    case Formula::Kind::atom: {
      const auto role = f.claims_truthful() ? w.truthful : w.liar;
      return names.at(static_cast<std::size_t>(f.person())) + " is " + std::string(article(role)) + " " + std::string(role);
    }
    case Formula::Kind::and_: return statement_text(f.lhs(), names, theme) + " and " + statement_text(f.rhs(), names, theme);
    case Formula::Kind::or_: return statement_text(f.lhs(), names, theme) + " or " + statement_text(f.rhs(), names, theme);
    case Formula::Kind::implies:
      return "if " + statement_text(f.lhs(), names, theme) + " then " + statement_text(f.rhs(), names, theme);
    case Formula::Kind::iff:
      return statement_text(f.lhs(), names, theme) + " if and only if " + statement_text(f.rhs(), names, theme);
  }
  return "";
}

std::string gold_text(const std::vector<std::string>& names, const std::vector<bool>& assignment, KkTheme theme) {
  if (names.size() != assignment.size()) throw LengthMismatch("names and assignment differ in length");
  const auto w = theme_words(theme);
  std::vector<std::string> parts;
  for (std::size_t i = 0; i < names.size(); ++i) {
    const auto role = assignment[i] ? w.truthful : w.liar;
    parts.push_back(names[i] + " is " + std::string(article(role)) + " " + std::string(role));
  }
  return join_list(parts) + ".";
}

RenderedKk render_kk(const KkInstance& inst) {
  const auto w = theme_words(inst.theme);
  std::string text = "A very special island is inhabited only by " + std::string(w.truthful_plural) + " and " +
                     std::string(w.liar_plural) + ". " + capitalize(w.truthful_plural) + " always tell the truth, and " +
                     std::string(w.liar_plural) + " always lie. You meet " + std::to_string(inst.n_people) +
                     " inhabitants: " + join_list(inst.names) + ".";
  std::string key;
  for (const auto& n : inst.names) key += n + "|";
  for (const auto& s : inst.statements) {
    const auto variant = static_cast<int>(mix64(fnv1a(key) + static_cast<std::uint64_t>(s.speaker)) % kSpeechVariants);
    text += " " + speech(variant, inst.names.at(static_cast<std::size_t>(s.speaker)), statement_text(s.formula, inst.names, inst.theme));
  }
  std::vector<std::string> format;
  for (const auto& n : inst.names) format.push_back(n + " is a " + std::string(w.truthful) + "/" + std::string(w.liar));
  text += " So who is " + std::string(article(w.truthful)) + " " + std::string(w.truthful) + " and who is " +
          std::string(article(w.liar)) + " " + std::string(w.liar) + "? (Format your answer like: \"" +
          join_list(format) + "\")";
  return {std::move(text), gold_text(inst.names, inst.gold, inst.theme)};
}

ParsedPuzzle parse_puzzle(std::string_view question_text) {
  const std::string text(question_text);
  static const std::regex intro_re(
      R"(inhabited only by (\w+) and (\w+)\. \w+ always tell the truth, and \w+ always lie\. You meet (\d+) inhabitants: (.+?)\. )");
  std::smatch m;
  if (!std::regex_search(text, m, intro_re)) throw ParseError("puzzle introduction not found");

  ParsedPuzzle out;
  bool found = false;
  for (KkTheme t : kThemes) {
    const auto w = theme_words(t);
    if (m[1].str() == w.truthful_plural && m[2].str() == w.liar_plural) {
      out.theme = t;
      found = true;
    }
  }
  if (!found) throw ParseError("unknown inhabitants: " + m[1].str() + " and " + m[2].str());

  static const std::regex name_sep_re(R"(,\s*(?:and\s+)?|\s+and\s+)");
  const std::string list = m[4].str();
  for (auto p = std::sregex_token_iterator(list.begin(), list.end(), name_sep_re, -1); p != std::sregex_token_iterator(); ++p) {
    if (p->length() > 0) out.names.push_back(p->str());
  }
  if (static_cast<int>(out.names.size()) != std::stoi(m[3].str())) throw ParseError("inhabitant count does not match the names");

  const auto body_start = static_cast<std::size_t>(m.position(0) + m.length(0));
  const auto body_end = text.find(" So who is ", body_start);
  if (body_end == std::string::npos) throw ParseError("puzzle question not found");
  std::string body = text.substr(body_start, body_end - body_start);

  // Each pattern captures (speaker, statement) or (statement, speaker).
  struct Pattern {
    std::regex re;
    bool speaker_first;
  };
  static const std::vector<Pattern> patterns = {
      {std::regex(R"re(^(\w+) (?:was heard saying|stated|remarked|noted|commented), "([^"]*)"\.\s*)re"), true},
      {std::regex(R"re(^In a statement by (\w+): "([^"]*)"\.\s*)re"), true},
      {std::regex(R"re(^(\w+) asserted: "([^"]*)"\.\s*)re"), true},
      {std::regex(R"re(^As (\w+) put it, "([^"]*)"\.\s*)re"), true},
      {std::regex(R"re(^In (\w+)'s words: "([^"]*)"\.\s*)re"), true},
      {std::regex(R"re(^(\w+) (?:said|expressed) that ([^."]*)\.\s*)re"), true},
      {std::regex(R"re(^"([^"]*)," (\w+) (?:claimed|mentioned|declared)\.\s*)re"), false},
      {std::regex(R"re(^"([^"]*)" - (\w+)\.\s*)re"), false},
  };
  const auto w = theme_words(out.theme);
  while (!body.empty()) {
    bool matched = false;
    for (const auto& p : patterns) {
      std::smatch sm;
      if (!std::regex_search(body, sm, p.re)) continue;
      const std::string speaker = sm[p.speaker_first ? 1 : 2].str();
      const std::string said = sm[p.speaker_first ? 2 : 1].str();
      const auto it = std::find(out.names.begin(), out.names.end(), speaker);
      if (it == out.names.end()) throw ParseError("unknown speaker: " + speaker);
      out.statements.push_back({static_cast<int>(it - out.names.begin()), parse_formula(said, out.names, w)});
      body = sm.suffix().str();
      matched = true;
      break;
    }
    if (!matched) throw ParseError("unrecognised statement: " + body.substr(0, 80));
  }
  return out;
}

void KnightsDatasetConfig::validate() const {
  if (train_size < 0 || test_size < 0) throw ConfigError("split sizes must be >= 0");
  if (min_people < 2 || max_people < min_people || max_people > kMaxPeople) {
    throw ConfigError("need 2 <= min_people <= max_people <= 16");
  }
}

KnightsDataset build_knights_dataset(const KnightsDatasetConfig& cfg) {
  cfg.validate();
  KnightsDataset out;
  const auto& tmpl = prompts::builtin_rg_knights();
  const int span = cfg.max_people - cfg.min_people + 1;
  const int total = cfg.train_size + cfg.test_size;
  for (int i = 0; i < total; ++i) {
    const std::uint64_t seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(i));
    Rng rng(seed);
    const int n = cfg.min_people + i % span;
    const KkTheme theme = kThemes[rng.index(kThemes.size())];
    const auto inst = generate_kk_instance(n, theme, derive_seed(seed, 1));
    const auto rendered = render_kk(inst);
    Sample s;
    char buf[40];
    std::snprintf(buf, sizeof buf, "rg-knights-%05d", i);
    s.id = buf;
    s.dataset = DatasetKind::rg_knights;
    s.split = i < cfg.train_size ? Split::train : Split::test;
    s.difficulty = n;
    s.question_text = rendered.question_text;
    s.gold = AnswerSet{rendered.gold_text};
    s.seed_provenance = {cfg.seed, static_cast<std::uint64_t>(i)};
    s.prompt = prompts::assemble_prompt(tmpl, s.question_text, std::nullopt, tmpl.cot_examples);
    (s.split == Split::train ? out.train : out.test).push_back(std::move(s));
  }
  return out;
}

}  // namespace synthrl::knights
