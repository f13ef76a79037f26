#include <benchmark/benchmark.h>

#include "synthrl/family.hpp"
#include "synthrl/grpo.hpp"
#include "synthrl/gsm.hpp"
#include "synthrl/knights.hpp"
#include "synthrl/phantom.hpp"
#include "synthrl/rng.hpp"
#include "synthrl/scoring.hpp"

using namespace synthrl;

namespace {

phantom::PhantomConfig default_cfg() {
  phantom::PhantomConfig c;
  c.seed = 1;
  return c;
}

void BM_GenerateUniverse(benchmark::State& state) {
  const auto cfg = default_cfg();
  int i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(phantom::generate_universe(cfg, i++ % cfg.n_universes));
}
BENCHMARK(BM_GenerateUniverse);

void BM_ExpandQuestions(benchmark::State& state) {
  const auto cfg = default_cfg();
  const auto u = phantom::generate_universe(cfg, 0);
  for (auto _ : state) benchmark::DoNotOptimize(phantom::expand_questions(u, cfg));
}
BENCHMARK(BM_ExpandQuestions)->Unit(benchmark::kMillisecond);

void BM_Resolve(benchmark::State& state) {
  const auto cfg = default_cfg();
  const auto u = phantom::generate_universe(cfg, 0);
  const auto qs = phantom::expand_questions(u, cfg);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(phantom::resolve(qs[i++ % qs.size()].ast, u));
}
BENCHMARK(BM_Resolve);

void BM_GsmGraphAndRender(benchmark::State& state) {
  const int ops = static_cast<int>(state.range(0));
  std::uint64_t s = 0;
  for (auto _ : state) {
    const auto g = gsm::generate_graph(ops, 10000, s);
    benchmark::DoNotOptimize(gsm::render_problem(g, s++));
  }
}
BENCHMARK(BM_GsmGraphAndRender)->Arg(2)->Arg(10)->Arg(20);

void BM_KnightsGenerate(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::uint64_t s = 0;
  for (auto _ : state) benchmark::DoNotOptimize(knights::generate_kk_instance(n, knights::KkTheme::knights_knaves, s++));
}
BENCHMARK(BM_KnightsGenerate)->DenseRange(2, 6);

void BM_SolveKk(benchmark::State& state) {
  const auto inst = knights::generate_kk_instance(static_cast<int>(state.range(0)), knights::KkTheme::knights_knaves, 7);
  for (auto _ : state) benchmark::DoNotOptimize(knights::solve_kk(inst.n_people, inst.statements));
}
BENCHMARK(BM_SolveKk)->DenseRange(2, 6);

void BM_FamilyQuery(benchmark::State& state) {
  std::uint64_t s = 0;
  for (auto _ : state) {
    const auto t = family::generate_tree(20, s);
    benchmark::DoNotOptimize(family::pose_relation_query(t, s++));
  }
}
BENCHMARK(BM_FamilyQuery);

void BM_TokenF1(benchmark::State& state) {
  const std::string a = "the quick brown fox jumps over the lazy dog near New York City Hall";
  const std::string b = "a quick brown dog jumps over the lazy fox in New York City";
  for (auto _ : state) benchmark::DoNotOptimize(scoring::token_f1(a, b));
}
BENCHMARK(BM_TokenF1);

void BM_RewardSetF1(benchmark::State& state) {
  const AnswerSet gold{"Vicki Hackworth", "Barabara Beltran", "Aida Wang"};
  const std::string gen = "Reasoning ... <answer>Aida Wang, Vicki Hackworth, Someone Else</answer>";
  for (auto _ : state) benchmark::DoNotOptimize(scoring::reward(scoring::RewardKind::set_f1, gen, gold));
}
BENCHMARK(BM_RewardSetF1);

void BM_GroupAdvantages(benchmark::State& state) {
  Rng rng(1);
  std::vector<double> r(static_cast<std::size_t>(state.range(0)));
  for (auto& x : r) x = rng.uniform01();
  for (auto _ : state) benchmark::DoNotOptimize(grpo::group_advantages(r));
}
BENCHMARK(BM_GroupAdvantages)->Arg(8)->Arg(64);

}  // namespace

BENCHMARK_MAIN();
