#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "synthrl/model.hpp"

namespace synthrl::gsm {

enum class Op { add, sub, mul };

char symbol(Op op);

struct EntityLabel {
  std::string noun;   // "adult wolf"
  std::string place;  // "Maple Creek"

  std::string text() const { return noun + " in " + place; }
  friend bool operator==(const EntityLabel&, const EntityLabel&) = default;
};

struct QNode {
  int id = 0;
  EntityLabel label;         // empty until the graph is themed
  std::optional<long> value;  // set on source nodes
};

struct Literal {
  long value = 0;
};

struct OpEdge {
  Op op = Op::add;
  int left = 0;
  std::variant<int, Literal> right;  // node id or literal
  int out = 0;
};

// Computation DAG. Node ids index `nodes`; op edges are stored in creation
// order, which is a topological order for generated graphs.
struct CompGraph {
  std::vector<QNode> nodes;
  std::vector<OpEdge> edges;
  int sink = 0;
  long value_bound = 10000;
};

struct GsmProblem {
  std::string text;
  std::string question;
  std::string solution_trace;
  long gold = 0;
  int n_ops = 0;
};

// Exactly `n_ops` binary edges, every node feeding the sink, values within
// [0, value_bound]. Throws GenerationExhausted.
CompGraph generate_graph(int n_ops, long value_bound, std::uint64_t seed);

// Value of every node in topological order. Throws CycleDetected, or
// std::invalid_argument when a node has no producer and no value.
std::vector<long> eval_all(const CompGraph& g);
long eval_graph(const CompGraph& g);

enum class Theme { animals, schools, movies };

// Copy of `g` with themed entity labels chosen by `theme_seed`.
CompGraph label_graph(const CompGraph& g, std::uint64_t theme_seed);

GsmProblem render_problem(const CompGraph& g, std::uint64_t theme_seed);

struct GsmDatasetConfig {
  int per_difficulty_target = 630;
  int min_ops = 2;
  int max_ops = 20;
  int train_size = 10000;
  long value_bound = 10000;
  std::uint64_t seed = 0;

  void validate() const;
};

struct GsmDataset {
  std::vector<Sample> train;
  std::vector<Sample> test;
  std::vector<GsmProblem> cot_examples;  // first three training problems by generation order
};

GsmDataset build_gsm_dataset(const GsmDatasetConfig& cfg);

// "Question: ...\nAnswer: <trace> <answer>N</answer>."
std::string cot_example(const GsmProblem& p, int number);

}  // namespace synthrl::gsm
