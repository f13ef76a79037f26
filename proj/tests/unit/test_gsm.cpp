#include <gtest/gtest.h>

#include <fstream>
#include <map>
#include <regex>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "synthrl/errors.hpp"
#include "synthrl/gsm.hpp"
#include "synthrl/prompts.hpp"
#include "synthrl/rng.hpp"

using namespace synthrl;
using namespace synthrl::gsm;

namespace {

CompGraph sources(std::initializer_list<long> values) {
  CompGraph g;
  for (long v : values) g.nodes.push_back({static_cast<int>(g.nodes.size()), {}, v});
  return g;
}

int add_node(CompGraph& g) {
  g.nodes.push_back({static_cast<int>(g.nodes.size()), {}, std::nullopt});
  return g.nodes.back().id;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool feeds_sink(const CompGraph& g, int node) {
  std::set<int> reach{g.sink};
  bool grew = true;
  while (grew) {
    grew = false;
    for (const auto& e : g.edges) {
      if (!reach.count(e.out)) continue;
      grew |= reach.insert(e.left).second;
      if (auto r = std::get_if<int>(&e.right)) grew |= reach.insert(*r).second;
    }
  }
  return reach.count(node) > 0;
}

}  // namespace

TEST(GsmEval, TwoAdditions) {
  auto g = sources({2, 3, 3});
  const int v = add_node(g);
  const int w = add_node(g);
  g.edges = {{Op::add, 0, 1, v}, {Op::add, v, 2, w}};
  g.sink = w;
  EXPECT_EQ(eval_graph(g), 8);
}

TEST(GsmEval, SingleSource) {
  auto g = sources({2});
  g.sink = 0;
  EXPECT_EQ(eval_graph(g), 2);
}

TEST(GsmEval, ChainWithLiterals) {
  auto g = sources({3});
  const int a = add_node(g);
  const int b = add_node(g);
  g.edges = {{Op::add, 0, Literal{2}, a}, {Op::mul, a, Literal{4}, b}};
  g.sink = b;
  EXPECT_EQ(eval_graph(g), 20);
}

TEST(GsmEval, CycleDetected) {
  auto g = sources({1});
  const int a = add_node(g);
  const int b = add_node(g);
  g.edges = {{Op::add, b, 0, a}, {Op::add, a, 0, b}};
  g.sink = b;
  EXPECT_THROW(eval_graph(g), CycleDetected);
}

TEST(GsmGraph, StructuralInvariants) {
  for (int ops = 1; ops <= 20; ++ops) {
    for (std::uint64_t s = 0; s < 20; ++s) {
      const auto g = generate_graph(ops, 10000, derive_seed(ops, s));
      ASSERT_EQ(static_cast<int>(g.edges.size()), ops);
      std::set<int> outs;
      for (const auto& e : g.edges) {
        ASSERT_TRUE(outs.insert(e.out).second);
        ASSERT_FALSE(g.nodes[static_cast<std::size_t>(e.out)].value.has_value());
        if (auto r = std::get_if<int>(&e.right)) { ASSERT_NE(*r, e.left); }
      }
      for (const auto& n : g.nodes) {
        ASSERT_TRUE(feeds_sink(g, n.id)) << "ops " << ops << " seed " << s;
        if (!outs.count(n.id)) { ASSERT_TRUE(n.value.has_value()); }
      }
      for (long v : eval_all(g)) {
        ASSERT_GE(v, 0);
        ASSERT_LE(v, 10000);
      }
    }
  }
}

TEST(GsmGraph, Deterministic) {
  const auto a = render_problem(generate_graph(7, 10000, 99), 5);
  const auto b = render_problem(generate_graph(7, 10000, 99), 5);
  EXPECT_EQ(a.text, b.text);
  EXPECT_EQ(a.solution_trace, b.solution_trace);
}

TEST(GsmGraph, TightBoundStillValid) {
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto g = generate_graph(5, 10, s);
    for (long v : eval_all(g)) {
      ASSERT_GE(v, 0);
      ASSERT_LE(v, 10);
    }
  }
}

TEST(GsmGraph, RejectsBadArguments) {
  EXPECT_THROW(generate_graph(0, 100, 1), std::exception);
  GsmDatasetConfig c;
  c.min_ops = 5;
  c.max_ops = 4;
  EXPECT_THROW(c.validate(), ConfigError);
}

// Cutting any edge (its output becomes a free input) changes the sink for
// some assignment of the inputs.
TEST(GsmGraph, NoDistractors) {
  for (int ops = 1; ops <= 6; ++ops) {
    for (std::uint64_t s = 0; s < 30; ++s) {
      const auto g = generate_graph(ops, 10000, derive_seed(1000 + ops, s));
      for (std::size_t k = 0; k < g.edges.size(); ++k) {
        const int cut = g.edges[k].out;
        bool influences = false;
        Rng rng(derive_seed(s, k));
        for (int trial = 0; trial < 40 && !influences; ++trial) {
          CompGraph h = g;
          for (auto& m : h.nodes) {
            if (m.value) m.value = rng.uniform_int(1, 10);
          }
          const long before = eval_graph(h);
          h.nodes[static_cast<std::size_t>(cut)].value = eval_all(h)[static_cast<std::size_t>(cut)] + 1;
          h.edges.erase(h.edges.begin() + static_cast<long>(k));
          influences = eval_graph(h) != before;
        }
        EXPECT_TRUE(influences) << "ops " << ops << " seed " << s << " edge " << k;
      }
    }
  }
}

TEST(GsmRender, TraceAndTextOraclesAgree) {
  for (int ops = 1; ops <= 20; ++ops) {
    for (std::uint64_t s = 0; s < 10; ++s) {
      const auto g = generate_graph(ops, 10000, derive_seed(ops, 7 + s));
      const auto p = render_problem(g, derive_seed(s, 3));
      ASSERT_EQ(p.gold, eval_graph(g));
      ASSERT_EQ(p.n_ops, ops);
      const auto run = oracle::run_trace(p.solution_trace);
      std::string label = oracle::question_label(p.question).substr(std::string("number of ").size());
      ASSERT_EQ(run.by_label.at(label), p.gold) << p.solution_trace;
      ASSERT_EQ(oracle::solve_problem_text(p.text, p.question), p.gold) << p.text;
      ASSERT_EQ(run.by_var.size(), g.nodes.size());
    }
  }
}

TEST(GsmRender, ThemeIndependence) {
  const auto g = generate_graph(6, 10000, 4242);
  const auto a = render_problem(g, 1);
  const auto b = render_problem(g, 2);
  EXPECT_EQ(a.gold, b.gold);
  EXPECT_NE(a.text, b.text);
}

TEST(GsmRender, ZeroOpWolf) {
  auto g = sources({2});
  g.sink = 0;
  bool saw_wolf = false;
  for (std::uint64_t t = 0; t < 200 && !saw_wolf; ++t) {
    const auto p = render_problem(g, t);
    EXPECT_EQ(p.gold, 2);
    saw_wolf = p.question.find("adult wolf in Maple Creek") != std::string::npos;
  }
  EXPECT_TRUE(saw_wolf);
}

TEST(GsmRender, VariablesAreDistinctSingleLetters) {
  const auto g = generate_graph(20, 10000, 8);
  const auto p = render_problem(g, 8);
  std::regex def(R"(Define .+? as ([A-Za-z]+);)");
  std::set<std::string> vars;
  for (auto it = std::sregex_iterator(p.solution_trace.begin(), p.solution_trace.end(), def); it != std::sregex_iterator(); ++it) {
    const std::string v = (*it)[1];
    EXPECT_EQ(v.size(), 1u);
    EXPECT_TRUE(vars.insert(v).second) << v;
  }
  EXPECT_EQ(vars.size(), g.nodes.size());
}

TEST(GsmWorkedExamples, WorkedTracesReproduce) {
  const auto text = read_file(std::string(SYNTHRL_PROMPTS_DIR) + "/gsm_examples.txt");
  const auto examples = prompts::split_examples(text);
  ASSERT_EQ(examples.size(), 3u);
  const long expected[] = {2, 8, 93};
  std::regex qa(R"(Question: (.*)\nAnswer: (.*) <answer>(\d+)</answer>\.)");
  for (std::size_t i = 0; i < examples.size(); ++i) {
    std::smatch m;
    ASSERT_TRUE(std::regex_search(examples[i], m, qa)) << examples[i];
    const auto run = oracle::run_trace(m[2].str());
    EXPECT_EQ(run.by_label.at(oracle::question_label(m[1].str())), expected[i]);
    EXPECT_EQ(std::stol(m[3]), expected[i]);
  }
}

TEST(GsmDataset, SmallConfigCountsAndPartition) {
  GsmDatasetConfig c;
  c.per_difficulty_target = 40;
  c.min_ops = 2;
  c.max_ops = 6;
  c.train_size = 150;
  c.seed = 3;
  const auto d = build_gsm_dataset(c);
  EXPECT_EQ(d.train.size(), 150u);
  EXPECT_EQ(d.train.size() + d.test.size(), 200u);
  std::set<std::string> ids;
  std::map<int, int> hist;
  for (const auto* part : {&d.train, &d.test}) {
    for (const auto& s : *part) {
      EXPECT_TRUE(ids.insert(s.id).second);
      ++hist[s.difficulty];
      EXPECT_EQ(s.dataset, DatasetKind::gsm_inf);
      EXPECT_NE(s.prompt.find("(BEGIN PROBLEM)"), std::string::npos);
      EXPECT_NE(s.prompt.find(s.question_text), std::string::npos);
    }
  }
  for (int ops = 2; ops <= 6; ++ops) EXPECT_EQ(hist[ops], 40);
  ASSERT_EQ(d.cot_examples.size(), 3u);
  const auto ex = cot_example(d.cot_examples[0], 1);
  EXPECT_EQ(ex.rfind("Example 1:\nQuestion: What is the number of ", 0), 0u);
  EXPECT_NE(ex.find("<answer>" + std::to_string(d.cot_examples[0].gold) + "</answer>."), std::string::npos);
  EXPECT_NE(d.train.front().prompt.find(ex), std::string::npos);
}
