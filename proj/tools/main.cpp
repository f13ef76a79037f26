#include <algorithm>
#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fnmatch.h>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "synthrl/dataset_io.hpp"
#include "synthrl/errors.hpp"
#include "synthrl/pipeline.hpp"
#include "synthrl/service.hpp"
#include "synthrl/version.hpp"

namespace fs = std::filesystem;
using namespace synthrl;

namespace {

std::atomic<bool> g_stop{false};

void on_signal(int) { g_stop.store(true); }

struct PhantomOpts {
  pipeline::PhantomRun run;
  std::size_t train_cap = 10000;
};

struct ScoreOpts {
  std::string generations;
  std::string dataset;
  std::string reward;
  std::string out;
  bool groundedness = false;
  std::optional<int> step;
};

struct ServeOpts {
  std::vector<std::string> datasets;
  std::string bind;
  std::size_t batch_limit = 0;
  std::uint64_t epoch_seed = 0;
};

void emit(const pipeline::GenResult& r, const std::string& out) {
  pipeline::write_outputs(r, out);
  std::cerr << r.generator << ": " << r.train.size() << " train, " << r.test.size() << " test -> " << out << "\n";
}

int run_score(const ScoreOpts& o) {
  const auto dataset = io::read_dataset(fs::path(o.dataset));
  if (dataset.empty()) {
    std::cerr << "error: dataset " << o.dataset << " is empty\n";
    return 2;
  }
  scoring::RewardKind kind = scoring::default_reward_kind(dataset.front().dataset);
  if (!o.reward.empty()) {
    auto k = scoring::parse_reward_kind(o.reward);
    if (!k) {
      std::cerr << "error: unknown reward kind '" << o.reward << "'\n";
      return 2;
    }
    kind = *k;
  }
  const auto gens = pipeline::read_generations(fs::path(o.generations));
  pipeline::ScoreRun run;
  try {
    run = pipeline::score_generations(dataset, gens, kind, o.groundedness, o.step);
  } catch (const pipeline::UnknownSampleIds& e) {
    std::cerr << "error: " << e.ids().size() << " unknown sample id(s):\n";
    for (const auto& id : e.ids()) std::cerr << "  " << id << "\n";
    return 3;
  }
  const std::string body = pipeline::score_run_json(run);
  if (o.out.empty() || o.out == "-") {
    std::cout << body << "\n";
  } else {
    std::ofstream f(o.out, std::ios::binary);
    f << body << "\n";
    if (!f) throw std::runtime_error("cannot write " + o.out);
  }
  const auto& ov = run.report.overall;
  std::fprintf(stderr, "overall mean %.4f stderr %.4f n %zu\n", ov.mean, ov.standard_error, ov.n);
  return 0;
}

std::vector<fs::path> expand_runs(const std::string& spec) {
  std::vector<fs::path> out;
  const fs::path p(spec);
  if (fs::is_directory(p)) {
    for (const auto& e : fs::directory_iterator(p)) {
      if (e.is_regular_file() && e.path().extension() == ".json") out.push_back(e.path());
    }
  } else if (spec.find_first_of("*?[") != std::string::npos) {
    const fs::path dir = p.has_parent_path() ? p.parent_path() : fs::path(".");
    const std::string pattern = p.filename().string();
    if (fs::is_directory(dir)) {
      for (const auto& e : fs::directory_iterator(dir)) {
        if (e.is_regular_file() && fnmatch(pattern.c_str(), e.path().filename().c_str(), 0) == 0) {
          out.push_back(e.path());
        }
      }
    }
  } else {
    out.push_back(p);
  }
  std::sort(out.begin(), out.end());
  return out;
}

int run_report(const std::vector<std::string>& specs) {
  std::vector<pipeline::ScoreRun> runs;
  for (const auto& s : specs) {
    for (const auto& p : expand_runs(s)) runs.push_back(pipeline::read_score_run(p));
  }
  if (runs.empty()) {
    std::cerr << "error: no score files matched\n";
    return 2;
  }
  std::cout << pipeline::format_scaling_table(pipeline::scaling_table(runs));
  return 0;
}

int run_serve(const ServeOpts& o) {
  service::ServiceConfig cfg = service::config_from_env();
  if (o.batch_limit) cfg.batch_limit = o.batch_limit;
  service::RewardService svc(cfg);
  for (const auto& d : o.datasets) {
    const auto eq = d.find('=');
    if (eq == std::string::npos || eq == 0) {
      std::cerr << "error: --dataset expects name=path, got '" << d << "'\n";
      return 2;
    }
    const std::string name = d.substr(0, eq);
    auto samples = io::read_dataset(fs::path(d.substr(eq + 1)));
    const auto n = samples.size();
    svc.add_dataset(name, std::move(samples));
    svc.create_cursor(name, o.epoch_seed, name);
    std::cerr << "loaded " << name << " (" << n << " samples)\n";
  }

  auto addr = service::bind_address_from_env();
  if (!o.bind.empty()) {
    const auto colon = o.bind.rfind(':');
    if (colon == std::string::npos) {
      std::cerr << "error: --bind expects host:port\n";
      return 2;
    }
    addr = {o.bind.substr(0, colon), std::stoi(o.bind.substr(colon + 1))};
  }

  service::HttpServer server(svc);
  const int port = server.bind(addr.first, addr.second);
  std::cerr << "listening on " << addr.first << ":" << port << "\n";

  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  std::thread watcher([&] {
    while (!g_stop.load()) std::this_thread::sleep_for(std::chrono::milliseconds(100));
    server.stop();
  });
  server.listen();
  g_stop.store(true);
  watcher.join();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"synthetic reasoning datasets and verifiable rewards"};
  app.set_config("--config", "", "read options from a TOML/INI file");
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  std::string out;
  int workers = 0;

  auto* gen = app.add_subcommand("gen", "generate a dataset");
  gen->require_subcommand(1);

  PhantomOpts ph;
  auto* gph = gen->add_subcommand("phantom", "multi-hop QA over fictional universes");
  gph->add_option("--universes", ph.run.config.n_universes)->capture_default_str();
  gph->add_option("--people", ph.run.config.people_per_universe)->capture_default_str();
  gph->add_option("--depth", ph.run.config.cfg_recursion_depth)->capture_default_str();
  gph->add_option("--max-difficulty", ph.run.config.max_difficulty)->capture_default_str();
  gph->add_option("--questions", ph.run.config.target_questions_per_universe)->capture_default_str();
  gph->add_option("--empty-fraction", ph.run.config.allow_empty_answers)->capture_default_str();
  gph->add_option("--test-universes", ph.run.test_universes)->capture_default_str();
  gph->add_option("--train-cap", ph.train_cap, "0 keeps the whole pool")->capture_default_str();
  gph->add_option("--workers", workers, "0 uses every core")->capture_default_str();

  gsm::GsmDatasetConfig gc;
  auto* ggsm = gen->add_subcommand("gsm", "math word problems over computation graphs");
  ggsm->add_option("--min-ops", gc.min_ops)->capture_default_str();
  ggsm->add_option("--max-ops", gc.max_ops)->capture_default_str();
  ggsm->add_option("--per-difficulty", gc.per_difficulty_target)->capture_default_str();
  ggsm->add_option("--train-size", gc.train_size)->capture_default_str();
  ggsm->add_option("--value-bound", gc.value_bound)->capture_default_str();

  family::FamilyDatasetConfig fc;
  auto* gfam = gen->add_subcommand("rg-family", "family relationship puzzles");
  gfam->add_option("--train-size", fc.train_size)->capture_default_str();
  gfam->add_option("--test-size", fc.test_size)->capture_default_str();
  gfam->add_option("--min-size", fc.min_size)->capture_default_str();
  gfam->add_option("--max-size", fc.max_size)->capture_default_str();

  knights::KnightsDatasetConfig kc;
  auto* gkk = gen->add_subcommand("rg-knights", "knights and knaves puzzles");
  gkk->add_option("--train-size", kc.train_size)->capture_default_str();
  gkk->add_option("--test-size", kc.test_size)->capture_default_str();
  gkk->add_option("--min-people", kc.min_people)->capture_default_str();
  gkk->add_option("--max-people", kc.max_people)->capture_default_str();

  for (auto* sub : {gph, ggsm, gfam, gkk}) {
    sub->add_option("--seed", seed)->capture_default_str();
    sub->add_option("--out", out, "output directory")->required();
  }

  ScoreOpts so;
  auto* sc = app.add_subcommand("score", "score generations against a dataset");
  sc->add_option("--generations", so.generations, "JSONL of {sample_id, generation}")->required()->check(CLI::ExistingFile);
  sc->add_option("--dataset", so.dataset)->required()->check(CLI::ExistingFile);
  sc->add_option("--reward", so.reward, "exact_match | set_f1 | token_f1 | format_only");
  sc->add_option("--out", so.out, "report path, '-' for stdout");
  sc->add_flag("--groundedness", so.groundedness);
  sc->add_option("--checkpoint-step", so.step);

  std::vector<std::string> runs;
  auto* rp = app.add_subcommand("report", "per-step scaling table from score files");
  rp->add_option("--runs", runs, "directory, glob or file")->required();

  ServeOpts sv;
  auto* srv = app.add_subcommand("serve", "HTTP reward and sampling service");
  srv->add_option("--dataset", sv.datasets, "name=path, repeatable");
  srv->add_option("--bind", sv.bind, "host:port (default from SYNTHRL_BIND)");
  srv->add_option("--batch-limit", sv.batch_limit);
  srv->add_option("--epoch-seed", sv.epoch_seed)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help and --version exit 0; every usage error exits 2.
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (gph->parsed()) {
      ph.run.config.seed = seed;
      ph.run.workers = workers;
      ph.run.train_cap = ph.train_cap ? std::optional<std::size_t>(ph.train_cap) : std::nullopt;
      emit(pipeline::generate_phantom(ph.run), out);
    } else if (ggsm->parsed()) {
      gc.seed = seed;
      emit(pipeline::generate_gsm(gc), out);
    } else if (gfam->parsed()) {
      fc.seed = seed;
      emit(pipeline::generate_family(fc), out);
    } else if (gkk->parsed()) {
      kc.seed = seed;
      emit(pipeline::generate_knights(kc), out);
    } else if (sc->parsed()) {
      return run_score(so);
    } else if (rp->parsed()) {
      return run_report(runs);
    } else if (srv->parsed()) {
      return run_serve(sv);
    }
  } catch (const ConfigError& e) {
    std::cerr << "invalid config: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "parse error";
    if (e.line()) std::cerr << " at line " << e.line();
    std::cerr << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
