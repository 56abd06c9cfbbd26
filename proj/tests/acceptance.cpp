// End-to-end acceptance suite: one pass/fail line per criterion.
#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <iostream>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "coverops/checks.hpp"
#include "coverops/config.hpp"
#include "coverops/sim.hpp"

using namespace coverops;
using Clock = std::chrono::steady_clock;

namespace {

int worker_count() {
  if (const char* env = std::getenv("COVEROPS_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 4;
}

template <typename Fn>
void parallel_for(int count, Fn fn) {
  std::atomic<int> next{0};
  int workers = std::min(worker_count(), count);
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (true) {
        int r = next.fetch_add(1);
        if (r >= count) return;
        fn(r);
      }
    });
  }
  for (auto& th : pool) th.join();
}

struct RunOutcome {
  bool ok = false;
  std::string error;
  std::size_t collisions = 0;
  bool converged = false;
  bool cost_non_increasing = false;
  double max_uncovered = 0.0;
  double tv_early = -1.0;
  double tv_late = -1.0;
};

RunOutcome execute(const SimConfig& config) {
  RunOutcome out;
  try {
    SimTrace trace = run(config);
    Metrics metrics = compute_metrics(trace, config.phi);
    out.ok = true;
    out.collisions = metrics.collision_count;
    out.converged = metrics.convergence_time.has_value();
    out.cost_non_increasing = metrics.cost_non_increasing;
    out.max_uncovered = metrics.max_uncovered;
    if (metrics.checkpoints.size() >= 2) {
      out.tv_early = metrics.checkpoints.front().tv_distance;
      out.tv_late = metrics.checkpoints.back().tv_distance;
    }
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  return out;
}

SimConfig mission_scale_config(std::uint64_t seed) {
  EnvironmentGraph g = build_grid(20, 20, 1.0, WeightMode::unit);
  MissionParams params{{1.0, 1.0, 1.0, 1.0}, 10.0, 1.0, 2.0};
  SimConfig config{std::move(g), params};
  config.phi = LikelihoodSchedule::single(
      gaussian_masses(config.graph, 5.0, 5.0, 4.0));
  config.duration = 10000.0;
  config.seed = seed;
  config.checkpoints = {1000.0, 10000.0};
  return config;
}

SimConfig quasi_static_config(std::uint64_t seed) {
  EnvironmentGraph g = build_grid(10, 10, 1.0, WeightMode::unit);
  MissionParams params{{1.0, 1.0, 1.0, 1.0}, 10.0, 1.0, 2.0};
  SimConfig config{std::move(g), params};
  std::mt19937_64 rng(seed * 613 + 7);
  std::vector<double> switch_times;
  for (int s = 0; s < 12; ++s) {
    switch_times.push_back(detail::uniform_real(rng, 50.0, 950.0));
  }
  std::sort(switch_times.begin(), switch_times.end());
  LikelihoodSchedule phi;
  auto random_masses = [&] {
    double cx = detail::uniform_real(rng, 0.0, 10.0);
    double cy = detail::uniform_real(rng, 0.0, 10.0);
    return gaussian_masses(config.graph, cx, cy, 3.0);
  };
  phi.segments.push_back({0.0, random_masses()});
  for (double t : switch_times) {
    phi.segments.push_back({t, random_masses()});
  }
  config.phi = std::move(phi);
  config.duration = 1000.0;
  config.seed = seed;
  return config;
}

int failures = 0;

void report(int criterion, bool pass, const std::string& description,
            const std::string& detail) {
  if (!pass) ++failures;
  std::cout << "criterion " << criterion << (pass ? " PASS " : " FAIL ")
            << description;
  if (!detail.empty()) std::cout << " [" << detail << "]";
  std::cout << "\n" << std::flush;
}

std::string seconds_since(Clock::time_point start) {
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                Clock::now() - start)
                .count();
  return std::to_string(ms / 1000.0).substr(0, 5) + "s";
}

}  // namespace

int main() {
  // --- Shared run batches -------------------------------------------------
  auto t0 = Clock::now();
  std::vector<RunOutcome> invariant_runs(100);
  parallel_for(100, [&](int r) {
    invariant_runs[r] = execute(invariant_suite_config(1 + r));
  });
  std::string invariant_time = seconds_since(t0);

  auto t6 = Clock::now();
  std::vector<RunOutcome> mission_runs(50);
  parallel_for(50, [&](int r) {
    mission_runs[r] = execute(mission_scale_config(1 + r));
  });
  std::string mission_time = seconds_since(t6);

  // --- Criterion 1: invariant suite --------------------------------------
  {
    int bad = 0;
    std::string first;
    for (const auto& r : invariant_runs) {
      if (!r.ok) {
        ++bad;
        if (first.empty()) first = r.error;
      }
    }
    report(1, bad == 0,
           "invariant suite: 100 seeded runs with per-event state checks",
           bad == 0 ? "100/100 clean, " + invariant_time
                    : std::to_string(bad) + " violations; first: " + first);
  }

  // --- Criterion 2: additive-subset oracle --------------------------------
  {
    auto t = Clock::now();
    SuiteReport r = run_oracle_suite(500, 12345);
    report(2, r.passed(),
           "additive-subset construction equals brute-force enumeration "
           "on 500 random instances",
           r.passed() ? "500/500 exact, " + seconds_since(t)
                      : r.messages.empty() ? "failures" : r.messages.front());
  }

  // --- Criterion 3: cost behavior -----------------------------------------
  {
    int bad = 0;
    for (const auto& r : invariant_runs) {
      if (!r.ok || !r.cost_non_increasing) ++bad;
    }
    for (const auto& r : mission_runs) {
      if (!r.ok || !r.cost_non_increasing) ++bad;
    }
    report(3, bad == 0,
           "identifier-partition cost identity (1e-9) and non-increasing "
           "cost hold in every static run",
           bad == 0 ? "150/150 runs" : std::to_string(bad) + " runs violate");
  }

  // --- Criterion 4: convergence + optimality certificates ------------------
  {
    auto t = Clock::now();
    int unconverged = 0;
    for (const auto& r : invariant_runs) {
      if (!r.ok || !r.converged) ++unconverged;
    }
    for (const auto& r : mission_runs) {
      if (!r.ok || !r.converged) ++unconverged;
    }
    SuiteReport pareto = run_pareto_suite(12, 7);
    bool pass = unconverged == 0 && pareto.passed();
    std::string detail;
    if (unconverged) {
      detail = std::to_string(unconverged) + " static runs did not converge";
    } else if (!pareto.passed()) {
      detail = pareto.messages.empty() ? "exhaustive check failed"
                                       : pareto.messages.front();
    } else {
      detail = "150/150 converged; 12/12 exhaustively optimal, " +
               seconds_since(t);
    }
    report(4, pass,
           "every static run converges, passes the local certificate, and "
           "small instances pass the exhaustive optimality check",
           detail);
  }

  // --- Criterion 5: collision avoidance ------------------------------------
  {
    std::size_t collisions = 0;
    for (const auto& r : invariant_runs) collisions += r.collisions;
    for (const auto& r : mission_runs) collisions += r.collisions;
    report(5, collisions == 0,
           "zero collision events across all runs of criteria 1 and 6",
           std::to_string(collisions) + " collisions");
  }

  // --- Criterion 6: mission-scale uncovered-time bound ---------------------
  {
    int bad = 0;
    std::string first;
    std::vector<double> worst;
    for (const auto& r : mission_runs) {
      if (!r.ok) {
        ++bad;
        if (first.empty()) first = r.error;
        continue;
      }
      worst.push_back(r.max_uncovered);
      if (!(r.max_uncovered <= 770.0)) ++bad;
    }
    std::sort(worst.begin(), worst.end());
    std::string detail;
    if (bad == 0 && !worst.empty()) {
      detail = "uncovered-gap distribution over 50 seeds: min " +
               io::format_double(worst.front()) + ", median " +
               io::format_double(worst[worst.size() / 2]) + ", max " +
               io::format_double(worst.back()) + " (bound 770), " +
               mission_time;
    } else {
      detail = std::to_string(bad) + " runs out of bound";
      if (!first.empty()) detail += "; first error: " + first;
    }
    report(6, bad == 0,
           "50 mission-scale seeds keep every uncovered interval within "
           "the 770 time-unit bound",
           detail);
  }

  // --- Criterion 7: occupancy bias -----------------------------------------
  {
    int improved = 0;
    int valid = 0;
    for (const auto& r : mission_runs) {
      if (!r.ok || r.tv_early < 0.0) continue;
      ++valid;
      if (r.tv_late < r.tv_early) ++improved;
    }
    bool pass = valid == 50 && improved >= 45;
    report(7, pass,
           "occupancy matches the likelihood better at t=10000 than at "
           "t=1000 for at least 45 of 50 seeds",
           std::to_string(improved) + "/" + std::to_string(valid) +
               " improved");
  }

  // --- Criterion 8: quasi-static segments ----------------------------------
  {
    auto t = Clock::now();
    int bad = 0;
    std::string first;
    std::vector<RunOutcome> runs(8);
    parallel_for(8, [&](int r) {
      runs[r] = execute(quasi_static_config(100 + r));
    });
    for (const auto& r : runs) {
      if (!r.ok) {
        ++bad;
        if (first.empty()) first = r.error;
      } else if (!r.cost_non_increasing) {
        ++bad;
        if (first.empty()) first = "cost increased within a segment";
      }
    }
    report(8, bad == 0,
           "with 12 likelihood switches per 1000-unit run the cost is "
           "non-increasing within every segment",
           bad == 0 ? "8/8 seeds, " + seconds_since(t) : first);
  }

  // --- Criterion 9: determinism --------------------------------------------
  {
    SimConfig config = mission_scale_config(3);
    config.duration = 1500.0;
    config.checkpoints = {500.0, 1500.0};
    SimTrace a = run(config);
    SimTrace b = run(config);
    bool same = io::cost_csv(a) == io::cost_csv(b) &&
                io::uncovered_csv(a) == io::uncovered_csv(b) &&
                io::occupancy_csv(a, config.duration, 4) ==
                    io::occupancy_csv(b, config.duration, 4) &&
                io::events_csv(a) == io::events_csv(b);
    report(9, same,
           "identical config and seed reproduce byte-identical CSV outputs",
           same ? "4/4 files identical" : "outputs differ");
  }

  return failures == 0 ? 0 : 1;
}
