#include "synthrl/gsm.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <stdexcept>
#include <string_view>
#include <unordered_set>

#include "synthrl/errors.hpp"
#include "synthrl/prompts.hpp"
#include "synthrl/rng.hpp"

namespace synthrl::gsm {
namespace {

constexpr long kMaxSourceValue = 10;
// Literals start at 1: a literal 0 factor would zero out everything upstream.
constexpr long kMaxLiteral = 10;
constexpr int kGraphAttempts = 2000;
constexpr int kOperandAttempts = 64;

constexpr std::string_view kVariableNames = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ";

struct ThemeData {
  std::array<std::string_view, 8> nouns;
  std::array<std::string_view, 8> places;
};

constexpr ThemeData kAnimals{
    {"adult wolf", "adult fox", "adult bear", "adult deer", "adult owl", "adult lynx", "adult beaver", "adult otter"},
    {"Maple Creek", "Pine Ridge", "Cedar Valley", "Oakwood Forest", "Beech Hollow", "Willow Marsh", "Aspen Meadow",
     "Birch Lake"},
};

constexpr ThemeData kSchools{
    {"elementary school", "private middle school", "public highschool", "culinary school", "art school",
     "regional medical school", "boarding school", "language school"},
    {"Riverton City", "Clearwater Bay", "Brightwood", "Evergreen Heights", "Shoreline City", "Hillcrest", "Westhaven",
     "Glenwood"},
};

constexpr ThemeData kMovies{
    {"upbeat metropolis comedy", "intense detective thriller", "solemn period drama", "futuristic sci-fi movie",
     "calm road movie", "gritty crime drama", "whimsical animated film", "haunting horror film"},
    {"Festival de Saint-Rivage", "Festival Lumière de Valmont", "Rêves de Belleville", "Festival de Clairmont",
     "Cinéma du Lac", "Nuits de Montclair", "Festival des Étoiles", "Regard sur Argentan"},
};

const ThemeData& theme_data(Theme t) {
  switch (t) {
    case Theme::animals: return kAnimals;
    case Theme::schools: return kSchools;
    case Theme::movies: return kMovies;
  }
  return kAnimals;
}

long apply(Op op, long l, long r) {
  switch (op) {
    case Op::add: return l + r;
    case Op::sub: return l - r;
    case Op::mul: return l * r;
  }
  return 0;
}

std::string_view op_phrase(Op op) {
  switch (op) {
    case Op::add: return "sum";
    case Op::sub: return "difference";
    case Op::mul: return "product";
  }
  return "";
}

class GraphBuilder {
 public:
  GraphBuilder(int n_ops, long bound, Rng& rng) : n_ops_(n_ops), rng_(rng) { g_.value_bound = bound; }

  // False when an operand draw ran dry; the caller restarts from scratch.
  bool build() {
    for (int k = 0; k < n_ops_; ++k) {
      if (!add_op(n_ops_ - k - 1)) return false;
    }
    g_.sink = g_.edges.back().out;
    return dangling_.size() == 1 && dangling_.front() == g_.sink;
  }

  CompGraph take() { return std::move(g_); }

 private:
  int new_source() {
    const int id = static_cast<int>(g_.nodes.size());
    const long v = rng_.uniform_int(0, kMaxSourceValue);
    g_.nodes.push_back({id, {}, v});
    values_.push_back(v);
    ++sources_;
    return id;
  }

  bool can_add_source() const { return sources_ < static_cast<int>(g_.edges.size()) + 2; }

  int take_dangling() {
    const std::size_t i = rng_.index(dangling_.size());
    const int id = dangling_[i];
    dangling_.erase(dangling_.begin() + static_cast<std::ptrdiff_t>(i));
    return id;
  }

  int reuse_node(int exclude) {
    std::vector<int> pool;
    for (const auto& n : g_.nodes) {
      if (n.id != exclude && std::find(dangling_.begin(), dangling_.end(), n.id) == dangling_.end()) pool.push_back(n.id);
    }
    if (pool.empty()) return -1;
    return rng_.pick(pool);
  }

  std::vector<Op> allowed_ops(long l, long r) const {
    std::vector<Op> ops;
    if (l + r <= g_.value_bound) ops.push_back(Op::add);
    if (l >= r) ops.push_back(Op::sub);
    if (l * r <= g_.value_bound) ops.push_back(Op::mul);
    return ops;
  }

  bool add_op(int remaining_after) {
    const int d = static_cast<int>(dangling_.size());
    // Each later op can merge at most one dangling node into another, so
    // consume enough now to end with the sink alone.
    const int min_consume = remaining_after == 0 ? d : std::max(0, d - remaining_after);
    const int max_consume = remaining_after == 0 ? d : std::min(2, d);
    if (min_consume > 2) return false;

    for (int attempt = 0; attempt < kOperandAttempts; ++attempt) {
      const auto saved_dangling = dangling_;
      const auto saved_nodes = g_.nodes.size();
      const int saved_sources = sources_;
      const int consume = static_cast<int>(rng_.uniform_int(min_consume, max_consume));

      int left = -1;
      std::variant<int, Literal> right = Literal{0};
      if (consume >= 1) {
        left = take_dangling();
      } else if (can_add_source() && (g_.edges.empty() || rng_.bernoulli(0.5))) {
        left = new_source();
      } else {
        left = reuse_node(-1);
      }
      if (consume == 2) {
        right = take_dangling();
      } else {
        const double u = rng_.uniform01();
        if (u < 0.4 && can_add_source()) {
          right = new_source();
        } else if (u < 0.7 || g_.nodes.size() < 2) {
          right = Literal{rng_.uniform_int(1, kMaxLiteral)};
        } else {
          const int reused = reuse_node(left);
          if (reused >= 0) {
            right = reused;
          } else {
            right = Literal{rng_.uniform_int(1, kMaxLiteral)};
          }
        }
      }
      if (left >= 0) {
        const long lv = values_[static_cast<std::size_t>(left)];
        const long rv = std::holds_alternative<int>(right) ? values_[static_cast<std::size_t>(std::get<int>(right))]
                                                           : std::get<Literal>(right).value;
        const auto ops = allowed_ops(lv, rv);
        if (!ops.empty()) {
          const Op op = rng_.pick(ops);
          const int out = static_cast<int>(g_.nodes.size());
          g_.nodes.push_back({out, {}, std::nullopt});
          values_.push_back(apply(op, lv, rv));
          g_.edges.push_back({op, left, right, out});
          dangling_.push_back(out);
          return true;
        }
      }
      dangling_ = saved_dangling;
      g_.nodes.resize(saved_nodes);
      values_.resize(saved_nodes);
      sources_ = saved_sources;
    }
    return false;
  }

  int n_ops_;
  Rng& rng_;
  CompGraph g_;
  std::vector<long> values_;
  std::vector<int> dangling_;
  int sources_ = 0;
};

// True when every node reaches the sink.
bool all_feed_sink(const CompGraph& g) {
  std::vector<bool> useful(g.nodes.size(), false);
  useful[static_cast<std::size_t>(g.sink)] = true;
  for (auto it = g.edges.rbegin(); it != g.edges.rend(); ++it) {
    if (!useful[static_cast<std::size_t>(it->out)]) continue;
    useful[static_cast<std::size_t>(it->left)] = true;
    if (std::holds_alternative<int>(it->right)) useful[static_cast<std::size_t>(std::get<int>(it->right))] = true;
  }
  return std::all_of(useful.begin(), useful.end(), [](bool b) { return b; });
}

// True when no edge cancels out algebraically, e.g. (u + v) - u. Each edge
// output in turn becomes a free variable and the graph is evaluated modulo a
// large prime at random points; a sink that never moves means the edge's
// polynomial contribution is identically zero.
__extension__ typedef unsigned __int128 u128;

bool every_edge_matters(const CompGraph& g, std::uint64_t seed) {
  constexpr std::uint64_t kPrime = (std::uint64_t{1} << 61) - 1;
  auto mulmod = [](std::uint64_t a, std::uint64_t b) {
    return static_cast<std::uint64_t>((static_cast<u128>(a) * b) % kPrime);
  };
  Rng rng(seed);
  std::vector<std::uint64_t> v(g.nodes.size());
  auto sink_with = [&](std::size_t cut, std::uint64_t x) {
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
      const auto& e = g.edges[i];
      std::uint64_t out = x;
      if (i != cut) {
        const std::uint64_t l = v[static_cast<std::size_t>(e.left)];
        const std::uint64_t r = std::holds_alternative<int>(e.right)
                                    ? v[static_cast<std::size_t>(std::get<int>(e.right))]
                                    : static_cast<std::uint64_t>(std::get<Literal>(e.right).value);
        switch (e.op) {
          case Op::add: out = (l + r) % kPrime; break;
          case Op::sub: out = (l + kPrime - r) % kPrime; break;
          case Op::mul: out = mulmod(l, r); break;
        }
      }
      v[static_cast<std::size_t>(e.out)] = out;
    }
    return v[static_cast<std::size_t>(g.sink)];
  };
  for (std::size_t k = 0; k < g.edges.size(); ++k) {
    bool moved = false;
    for (int trial = 0; trial < 2 && !moved; ++trial) {
      for (const auto& n : g.nodes) {
        if (n.value) v[static_cast<std::size_t>(n.id)] = rng.uniform_int(1, 1'000'000'000);
      }
      const auto a = static_cast<std::uint64_t>(rng.uniform_int(1, 1'000'000'000));
      const auto b = static_cast<std::uint64_t>(rng.uniform_int(1, 1'000'000'000));
      moved = sink_with(k, a) != sink_with(k, b);
    }
    if (!moved) return false;
  }
  return true;
}

std::string number_of(const CompGraph& g, int id) { return "the number of " + g.nodes[static_cast<std::size_t>(id)].label.text(); }

std::string right_text(const CompGraph& g, const OpEdge& e) {
  if (std::holds_alternative<int>(e.right)) return number_of(g, std::get<int>(e.right));
  return std::to_string(std::get<Literal>(e.right).value);
}

}  // namespace

char symbol(Op op) {
  switch (op) {
    case Op::add: return '+';
    case Op::sub: return '-';
    case Op::mul: return '*';
  }
  return '?';
}

CompGraph generate_graph(int n_ops, long value_bound, std::uint64_t seed) {
  if (n_ops < 1) throw ConfigError("n_ops must be >= 1");
  if (2 * n_ops + 1 > static_cast<int>(kVariableNames.size())) throw ConfigError("n_ops too large to name every node");
  if (value_bound < kMaxSourceValue) throw ConfigError("value_bound must be >= 10");
  Rng rng(seed);
  for (int attempt = 0; attempt < kGraphAttempts; ++attempt) {
    GraphBuilder b(n_ops, value_bound, rng);
    if (!b.build()) continue;
    CompGraph g = b.take();
    if (all_feed_sink(g) && every_edge_matters(g, derive_seed(seed, static_cast<std::uint64_t>(attempt)))) return g;
  }
  throw GenerationExhausted("no valid graph with " + std::to_string(n_ops) + " ops");
}

std::vector<long> eval_all(const CompGraph& g) {
  const std::size_t n = g.nodes.size();
  std::vector<int> producer(n, -1);
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    const auto out = static_cast<std::size_t>(g.edges[i].out);
    if (out >= n) throw std::invalid_argument("edge output out of range");
    if (producer[out] >= 0) throw std::invalid_argument("node " + std::to_string(out) + " has two producers");
    producer[out] = static_cast<int>(i);
  }
  std::vector<long> value(n, 0);
  std::vector<int> state(n, 0);  // 0 new, 1 on stack, 2 done
  // Iterative post-order so long chains do not overflow the call stack.
  for (std::size_t root = 0; root < n; ++root) {
    if (state[root] == 2) continue;
    std::vector<std::size_t> stack{root};
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      if (state[v] == 2) {
        stack.pop_back();
        continue;
      }
      if (producer[v] < 0) {
        if (!g.nodes[v].value) throw std::invalid_argument("node " + std::to_string(v) + " has no value and no producer");
        value[v] = *g.nodes[v].value;
        state[v] = 2;
        stack.pop_back();
        continue;
      }
      const auto& e = g.edges[static_cast<std::size_t>(producer[v])];
      std::vector<std::size_t> deps{static_cast<std::size_t>(e.left)};
      if (std::holds_alternative<int>(e.right)) deps.push_back(static_cast<std::size_t>(std::get<int>(e.right)));
      if (state[v] == 0) {
        state[v] = 1;
        for (auto dep : deps) {
          if (dep >= n) throw std::invalid_argument("edge operand out of range");
          if (state[dep] == 1) throw CycleDetected("cycle through node " + std::to_string(dep));
          if (state[dep] == 0) stack.push_back(dep);
        }
        continue;
      }
      const long l = value[deps[0]];
      const long r = deps.size() > 1 ? value[deps[1]] : std::get<Literal>(e.right).value;
      value[v] = apply(e.op, l, r);
      state[v] = 2;
      stack.pop_back();
    }
  }
  return value;
}

long eval_graph(const CompGraph& g) { return eval_all(g).at(static_cast<std::size_t>(g.sink)); }

CompGraph label_graph(const CompGraph& g, std::uint64_t theme_seed) {
  Rng rng(theme_seed);
  const Theme theme = static_cast<Theme>(rng.uniform_int(0, 2));
  const auto& data = theme_data(theme);
  std::vector<EntityLabel> labels;
  for (auto place : data.places) {
    for (auto noun : data.nouns) labels.push_back({std::string(noun), std::string(place)});
  }
  if (labels.size() < g.nodes.size()) throw ConfigError("graph has more nodes than theme labels");
  rng.shuffle(labels);
  CompGraph out = g;
  for (std::size_t i = 0; i < out.nodes.size(); ++i) out.nodes[i].label = labels[i];
  return out;
}

GsmProblem render_problem(const CompGraph& graph, std::uint64_t theme_seed) {
  const CompGraph g = label_graph(graph, theme_seed);
  const auto values = eval_all(g);
  Rng rng(derive_seed(theme_seed, 1));
  std::string names(kVariableNames);
  std::vector<char> letters(names.begin(), names.end());
  rng.shuffle(letters);
  auto var = [&](int id) { return std::string(1, letters[static_cast<std::size_t>(id)]); };
  auto val = [&](int id) { return std::to_string(values[static_cast<std::size_t>(id)]); };

  std::vector<const OpEdge*> producer(g.nodes.size(), nullptr);
  for (const auto& e : g.edges) producer[static_cast<std::size_t>(e.out)] = &e;

  std::vector<std::string> sentences;
  for (const auto& n : g.nodes) {
    const auto* e = producer[static_cast<std::size_t>(n.id)];
    std::string s = "The number of " + n.label.text() + " equals ";
    if (!e) {
      s += std::to_string(*n.value) + ".";
    } else {
      s += "the " + std::string(op_phrase(e->op)) + " of " + number_of(g, e->left) + " and " + right_text(g, *e) + ".";
    }
    sentences.push_back(std::move(s));
  }
  rng.shuffle(sentences);

  GsmProblem p;
  for (std::size_t i = 0; i < sentences.size(); ++i) p.text += (i ? " " : "") + sentences[i];
  p.question = "What is the number of " + g.nodes[static_cast<std::size_t>(g.sink)].label.text() + "?";

  // Creation order is topological: sources come right before their consumer.
  std::string trace;
  for (const auto& n : g.nodes) {
    const auto* e = producer[static_cast<std::size_t>(n.id)];
    if (!trace.empty()) trace += " ";
    trace += "Define " + n.label.text() + " as " + var(n.id) + "; so " + var(n.id) + " = ";
    if (!e) {
      trace += val(n.id) + ".";
      continue;
    }
    const std::string op = std::string(" ") + symbol(e->op) + " ";
    const bool node_right = std::holds_alternative<int>(e->right);
    const std::string r_name = node_right ? var(std::get<int>(e->right)) : std::to_string(std::get<Literal>(e->right).value);
    const std::string r_val = node_right ? val(std::get<int>(e->right)) : r_name;
    trace += var(e->left) + op + r_name + " = " + val(e->left) + op + r_val + " = " + val(n.id) + ".";
  }
  p.solution_trace = std::move(trace);
  p.gold = values[static_cast<std::size_t>(g.sink)];
  p.n_ops = static_cast<int>(g.edges.size());
  return p;
}

void GsmDatasetConfig::validate() const {
  if (per_difficulty_target < 0) throw ConfigError("per_difficulty_target must be >= 0");
  if (min_ops < 1 || max_ops < min_ops) throw ConfigError("need 1 <= min_ops <= max_ops");
  if (2 * max_ops + 1 > static_cast<int>(kVariableNames.size())) throw ConfigError("max_ops must be <= 25");
  if (train_size < 0) throw ConfigError("train_size must be >= 0");
  if (value_bound < kMaxSourceValue) throw ConfigError("value_bound must be >= 10");
}

std::string cot_example(const GsmProblem& p, int number) {
  return "Example " + std::to_string(number) + ":\nQuestion: " + p.question + "\nAnswer: " + p.solution_trace +
         " <answer>" + std::to_string(p.gold) + "</answer>.";
}

GsmDataset build_gsm_dataset(const GsmDatasetConfig& cfg) {
  cfg.validate();
  struct Item {
    GsmProblem problem;
    int ops;
    int index;
  };
  std::vector<Item> pool;
  std::unordered_set<std::string> seen;
  for (int ops = cfg.min_ops; ops <= cfg.max_ops; ++ops) {
    const std::uint64_t level_seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(ops));
    int made = 0;
    for (int i = 0; made < cfg.per_difficulty_target; ++i) {
      if (i > cfg.per_difficulty_target * 20 + 100) throw GenerationExhausted("too many duplicate GSM problems");
      const std::uint64_t seed = derive_seed(level_seed, static_cast<std::uint64_t>(i));
      auto problem = render_problem(generate_graph(ops, cfg.value_bound, seed), derive_seed(seed, 0x7e));
      if (!seen.insert(problem.text + "\n" + problem.question).second) continue;
      pool.push_back({std::move(problem), ops, i});
      ++made;
    }
  }
  Rng rng(derive_seed(cfg.seed, 0x5b11));
  rng.shuffle(pool);

  GsmDataset out;
  const std::size_t n_train = std::min(pool.size(), static_cast<std::size_t>(cfg.train_size));
  // Worked examples: the first three training problems in generation order.
  std::vector<std::size_t> train_order(n_train);
  for (std::size_t i = 0; i < n_train; ++i) train_order[i] = i;
  std::sort(train_order.begin(), train_order.end(), [&](std::size_t a, std::size_t b) {
    return std::pair(pool[a].ops, pool[a].index) < std::pair(pool[b].ops, pool[b].index);
  });
  for (std::size_t i = 0; i < std::min<std::size_t>(3, n_train); ++i) out.cot_examples.push_back(pool[train_order[i]].problem);
  std::vector<std::string> examples;
  for (std::size_t i = 0; i < out.cot_examples.size(); ++i) {
    examples.push_back(cot_example(out.cot_examples[i], static_cast<int>(i + 1)));
  }

  const auto& tmpl = prompts::builtin(prompts::TemplateKind::gsm);
  for (std::size_t i = 0; i < pool.size(); ++i) {
    const auto& item = pool[i];
    Sample s;
    char buf[48];
    std::snprintf(buf, sizeof buf, "gsm-d%02d-%04d", item.ops, item.index);
    s.id = buf;
    s.dataset = DatasetKind::gsm_inf;
    s.split = i < n_train ? Split::train : Split::test;
    s.difficulty = item.ops;
    s.question_text = item.problem.question;
    s.gold = AnswerSet{std::to_string(item.problem.gold)};
    s.seed_provenance = {cfg.seed, static_cast<std::uint64_t>(item.ops), static_cast<std::uint64_t>(item.index)};
    s.prompt = prompts::assemble_prompt(tmpl, s.question_text, item.problem.text, examples);
    (s.split == Split::train ? out.train : out.test).push_back(std::move(s));
  }
  return out;
}

}  // namespace synthrl::gsm
