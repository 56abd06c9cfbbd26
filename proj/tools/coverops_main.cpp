#include <cstdlib>
#include <filesystem>
#include <future>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "coverops/checks.hpp"
#include "coverops/config.hpp"
#include "coverops/sim.hpp"

namespace fs = std::filesystem;
using namespace coverops;

namespace {

int worker_count() {
  if (const char* env = std::getenv("COVEROPS_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 4;
}

struct RunSummary {
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  double max_uncovered = 0.0;
  std::size_t collisions = 0;
  std::optional<double> convergence_time;
  std::vector<std::pair<double, double>> tv;  // (time, distance)
};

RunSummary execute_run(SimConfig config, std::uint64_t seed,
                       const fs::path& out_dir) {
  RunSummary summary;
  summary.seed = seed;
  config.seed = seed;
  try {
    SimTrace trace = run(config);
    Metrics metrics = compute_metrics(trace, config.phi);
    fs::create_directories(out_dir);
    io::write_file((out_dir / "cost.csv").string(), io::cost_csv(trace));
    io::write_file((out_dir / "uncovered.csv").string(),
                   io::uncovered_csv(trace));
    io::write_file((out_dir / "occupancy.csv").string(),
                   io::occupancy_csv(trace, config.duration,
                                     config.params.agent_count()));
    io::write_file((out_dir / "events.csv").string(), io::events_csv(trace));
    for (const auto& [t, snap] : trace.snapshots) {
      io::write_file(
          (out_dir / ("snapshot_" + io::format_double(t) + ".json")).string(),
          snap.dump(2) + "\n");
    }
    nlohmann::json js;
    js["seed"] = seed;
    js["generators"] = trace.generators_used;
    js["max_uncovered"] = metrics.max_uncovered;
    js["collisions"] = metrics.collision_count;
    js["cost_non_increasing"] = metrics.cost_non_increasing;
    if (metrics.convergence_time) {
      js["convergence_time"] = *metrics.convergence_time;
    }
    auto tvj = nlohmann::json::array();
    for (const auto& cp : metrics.checkpoints) {
      tvj.push_back({{"time", cp.time}, {"tv_distance", cp.tv_distance}});
      summary.tv.push_back({cp.time, cp.tv_distance});
    }
    js["checkpoints"] = tvj;
    io::write_file((out_dir / "summary.json").string(), js.dump(2) + "\n");
    summary.ok = true;
    summary.max_uncovered = metrics.max_uncovered;
    summary.collisions = metrics.collision_count;
    summary.convergence_time = metrics.convergence_time;
  } catch (const std::exception& e) {
    summary.error = e.what();
  }
  return summary;
}

int cmd_validate(const std::string& config_path) {
  try {
    SimConfig config = load_config(config_path);
    auto diags = config.validate();
    if (!config.generators.empty()) {
      try {
        init_state(config.graph, config.params, config.generators);
      } catch (const std::exception& e) {
        diags.emplace_back(e.what());
      }
    }
    if (diags.empty()) {
      std::cout << "ok\n";
      return 0;
    }
    for (const auto& d : diags) std::cout << "error: " << d << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cout << "error: " << e.what() << "\n";
    return 1;
  }
}

int cmd_run(const std::string& config_path, const std::string& out,
            int batch, std::int64_t seed_flag,
            const std::vector<double>& checkpoints) {
  SimConfig config = load_config(config_path);
  if (!checkpoints.empty()) config.checkpoints = checkpoints;
  std::uint64_t seed_base =
      seed_flag >= 0 ? static_cast<std::uint64_t>(seed_flag) : config.seed;

  std::vector<RunSummary> summaries(batch);
  int workers = std::min(worker_count(), batch);
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (true) {
        int r = next.fetch_add(1);
        if (r >= batch) return;
        std::uint64_t seed = seed_base + static_cast<std::uint64_t>(r);
        fs::path dir = batch == 1
                           ? fs::path(out)
                           : fs::path(out) / ("seed_" + std::to_string(seed));
        summaries[r] = execute_run(config, seed, dir);
      }
    });
  }
  for (auto& th : pool) th.join();

  int failures = 0;
  double worst_uncovered = 0.0;
  std::size_t collisions = 0;
  int converged = 0;
  for (const auto& s : summaries) {
    if (!s.ok) {
      ++failures;
      std::cerr << "seed " << s.seed << " failed: " << s.error << "\n";
      continue;
    }
    worst_uncovered = std::max(worst_uncovered, s.max_uncovered);
    collisions += s.collisions;
    if (s.convergence_time) ++converged;
  }
  std::cout << "runs: " << batch << "  failed: " << failures
            << "  converged: " << converged
            << "  collisions: " << collisions
            << "  worst max-uncovered: " << worst_uncovered << "\n";
  if (batch > 1) {
    nlohmann::json agg;
    agg["runs"] = batch;
    agg["failed"] = failures;
    agg["converged"] = converged;
    agg["collisions"] = collisions;
    agg["worst_max_uncovered"] = worst_uncovered;
    auto per_run = nlohmann::json::array();
    for (const auto& s : summaries) {
      nlohmann::json e;
      e["seed"] = s.seed;
      e["ok"] = s.ok;
      if (s.ok) {
        e["max_uncovered"] = s.max_uncovered;
        if (s.convergence_time) e["convergence_time"] = *s.convergence_time;
      } else {
        e["error"] = s.error;
      }
      per_run.push_back(e);
    }
    agg["per_run"] = per_run;
    fs::create_directories(out);
    io::write_file((fs::path(out) / "aggregate.json").string(),
                   agg.dump(2) + "\n");
  }
  return failures == 0 ? 0 : 1;
}

int cmd_check(const std::string& suite, int runs, std::uint64_t seed) {
  SuiteReport report;
  if (suite == "invariants") {
    report = run_invariant_suite(runs > 0 ? runs : 100, seed);
  } else if (suite == "oracle") {
    report = run_oracle_suite(runs > 0 ? runs : 500, seed);
  } else if (suite == "pareto") {
    report = run_pareto_suite(runs > 0 ? runs : 15, seed);
  } else {
    std::cerr << "unknown suite: " << suite << "\n";
    return 2;
  }
  std::cout << (report.passed() ? "PASS" : "FAIL") << " " << report.name
            << ": " << (report.total - report.failures) << "/" << report.total
            << " cases\n";
  for (const auto& msg : report.messages) {
    std::cout << "  " << msg << "\n";
  }
  return report.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coverage-control mission simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out = "out";
  int batch = 1;
  std::int64_t seed_flag = -1;
  std::vector<double> checkpoints;
  std::string suite;
  int runs = 0;
  std::uint64_t check_seed = 1;

  auto* validate = app.add_subcommand("validate", "validate a config file");
  validate->add_option("--config", config_path, "config JSON")->required();

  auto* run_cmd = app.add_subcommand("run", "execute one run or a batch");
  run_cmd->add_option("--config", config_path, "config JSON")->required();
  run_cmd->add_option("--out", out, "output directory");
  run_cmd->add_option("--batch", batch, "number of seeds")
      ->check(CLI::PositiveNumber);
  run_cmd->add_option("--seed", seed_flag, "base seed (overrides config)");
  run_cmd->add_option("--checkpoints", checkpoints,
                      "occupancy checkpoint times")
      ->delimiter(',');

  auto* check = app.add_subcommand("check", "run a verification suite");
  check->add_option("suite", suite, "invariants | oracle | pareto")
      ->required();
  check->add_option("--runs", runs, "case count override");
  check->add_option("--seed", check_seed, "suite seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) return cmd_validate(config_path);
    if (run_cmd->parsed()) {
      return cmd_run(config_path, out, batch, seed_flag, checkpoints);
    }
    if (check->parsed()) return cmd_check(suite, runs, check_seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
