#include <random>

#include <catch_amalgamated.hpp>

#include "coverops/checks.hpp"
#include "coverops/config.hpp"
#include "coverops/sim.hpp"

using namespace coverops;

TEST_CASE("communication scheduler honors both gap bounds") {
  SECTION("single agent: every gap lands in [delta_lower, delta_bar]") {
    std::mt19937_64 rng(3);
    std::vector<double> last_contact{0.0};
    double last_global = 0.0;
    for (int k = 0; k < 1000; ++k) {
      auto [agent, t] = schedule_next_comm(rng, last_global, last_contact,
                                           1.0, 10.0);
      CHECK(agent == 0);
      CHECK(t >= last_global + 1.0 - 1e-12);
      CHECK(t <= last_contact[0] + 10.0 + 1e-12);
      last_contact[0] = t;
      last_global = t;
    }
  }
  SECTION("two agents: per-agent deadlines are never missed") {
    std::mt19937_64 rng(17);
    std::vector<double> last_contact{0.0, 0.0};
    double last_global = 0.0;
    std::vector<int> served(2, 0);
    for (int k = 0; k < 1000; ++k) {
      auto [agent, t] = schedule_next_comm(rng, last_global, last_contact,
                                           1.0, 10.0);
      CHECK(t >= last_global + 1.0 - 1e-12);
      for (int i = 0; i < 2; ++i) {
        CHECK(t <= last_contact[i] + 10.0 + 1e-12);
      }
      ++served[agent];
      last_contact[agent] = t;
      last_global = t;
    }
    CHECK(served[0] > 100);  // both agents actually get scheduled
    CHECK(served[1] > 100);
  }
  SECTION("identical seeds give identical schedules") {
    std::mt19937_64 a(5), b(5);
    std::vector<double> ca{0.0, 0.0, 0.0}, cb{0.0, 0.0, 0.0};
    double ga = 0.0, gb = 0.0;
    for (int k = 0; k < 200; ++k) {
      auto ra = schedule_next_comm(a, ga, ca, 0.5, 6.0);
      auto rb = schedule_next_comm(b, gb, cb, 0.5, 6.0);
      REQUIRE(ra == rb);
      ca[ra.first] = ra.second;
      ga = ra.second;
      cb[rb.first] = rb.second;
      gb = rb.second;
    }
  }
}

TEST_CASE("collision detector") {
  SECTION("overlap between different agents is flagged") {
    std::vector<OccupancyRecord> records{{0, 5, 0.0, 2.0}, {1, 5, 1.5, 3.0}};
    auto collisions = detect_collision(records);
    REQUIRE(collisions.size() == 1);
    CHECK(collisions[0].agent_a == 0);
    CHECK(collisions[0].agent_b == 1);
    CHECK(collisions[0].vertex == 5);
    CHECK(collisions[0].time == 1.5);
  }
  SECTION("touching intervals do not collide") {
    std::vector<OccupancyRecord> records{{0, 5, 0.0, 2.0}, {1, 5, 2.0, 3.0}};
    CHECK(detect_collision(records).empty());
  }
  SECTION("same agent and different vertices are ignored") {
    std::vector<OccupancyRecord> records{
        {0, 5, 0.0, 2.0}, {0, 5, 1.0, 3.0}, {1, 6, 0.0, 9.0}};
    CHECK(detect_collision(records).empty());
  }
}

TEST_CASE("config validation surfaces every problem") {
  SimConfig config{build_grid(3, 3, 1.0), MissionParams{{1.0, 1.0}, 10.0, 1.0, 2.0}};
  config.phi = LikelihoodSchedule::uniform(9);
  config.duration = 10.0;
  CHECK(config.validate().empty());

  SECTION("bad duration") {
    config.duration = 0.0;
    CHECK_FALSE(config.validate().empty());
  }
  SECTION("generator count mismatch") {
    config.generators = {0};
    CHECK_FALSE(config.validate().empty());
  }
  SECTION("coinciding generators") {
    config.generators = {4, 4};
    CHECK_FALSE(config.validate().empty());
  }
  SECTION("unknown planner") {
    config.planner = "teleport";
    CHECK_FALSE(config.validate().empty());
  }
  SECTION("mass vector mismatch") {
    config.phi = LikelihoodSchedule::uniform(4);
    CHECK_FALSE(config.validate().empty());
  }
  SECTION("infeasible timing bounds") {
    config.params.delta_bar = 1.5;
    CHECK_FALSE(config.validate().empty());
  }
}

TEST_CASE("config JSON parsing") {
  nlohmann::json j = {
      {"graph", {{"grid", {{"rows", 3}, {"cols", 3}}}}},
      {"mission",
       {{"speeds", {1.0, 2.0}},
        {"delta_bar", 10.0},
        {"delta_lower", 1.0},
        {"delta_h", 2.0}}},
      {"likelihood", {{"type", "uniform"}}},
      {"duration", 100.0},
      {"seed", 9},
      {"planner", "random-admissible"},
      {"checkpoints", {10.0, 50.0}},
  };
  SimConfig config = parse_config(j);
  CHECK(config.graph.vertex_count() == 9);
  CHECK(config.params.speeds == std::vector<double>{1.0, 2.0});
  CHECK(config.planner == "random-admissible");
  CHECK(config.seed == 9);
  CHECK(config.checkpoints == std::vector<double>{10.0, 50.0});
  CHECK(config.mode == LikelihoodMode::instantaneous);
  CHECK(config.validate().empty());

  SECTION("gaussian and scheduled likelihoods") {
    j["likelihood"] = {{"type", "gaussian"}, {"center", {0.5, 0.5}},
                       {"sigma", 1.0}};
    SimConfig c2 = parse_config(j);
    CHECK(c2.validate().empty());
    CHECK(global_mass(c2.phi, 0, 0.0) > global_mass(c2.phi, 8, 0.0));

    j["likelihood"] = {
        {"type", "schedule"},
        {"segments",
         {{{"t", 0.0},
           {"gaussian", {{"center", {0.5, 0.5}}, {"sigma", 1.0}}}},
          {{"t", 50.0},
           {"gaussian", {{"center", {2.5, 2.5}}, {"sigma", 1.0}}}}}}};
    SimConfig c3 = parse_config(j);
    CHECK(c3.validate().empty());
    CHECK(next_switch_after(c3.phi, 0.0) == 50.0);
  }
  SECTION("explicit edge lists and frozen mode") {
    j["graph"] = {{"vertex_count", 2}, {"edges", {{0, 1, 2.5}}}};
    j["likelihood"] = {{"type", "uniform"}};
    j["mission"]["speeds"] = {1.0};
    j["likelihood_mode"] = "frozen";
    SimConfig c4 = parse_config(j);
    CHECK(c4.graph.vertex_count() == 2);
    CHECK(c4.mode == LikelihoodMode::frozen);
  }
  SECTION("unknown likelihood type") {
    j["likelihood"] = {{"type", "bimodal"}};
    CHECK_THROWS_AS(parse_config(j), std::invalid_argument);
  }
}

TEST_CASE("single-agent run converges to the weighted median") {
  SimConfig config{EnvironmentGraph(5, {{0, 1, 1.0},
                                        {1, 2, 1.0},
                                        {2, 3, 1.0},
                                        {3, 4, 1.0}}),
                   MissionParams{{1.0}, 10.0, 1.0, 2.0}};
  config.phi = LikelihoodSchedule::uniform(5);
  config.generators = {0};
  config.duration = 60.0;
  config.seed = 11;
  SimTrace trace = run(config);
  REQUIRE(trace.convergence_time);
  CHECK(trace.final_state.generators[0] == 2);
  CHECK(trace.collisions.empty());
  Metrics metrics = compute_metrics(trace, config.phi);
  CHECK(metrics.cost_non_increasing);
  CHECK(metrics.collision_count == 0);
}

TEST_CASE("runs are reproducible byte for byte") {
  SimConfig config = invariant_suite_config(77);
  config.duration = 300.0;
  config.checkpoints = {100.0, 250.0};
  SimTrace a = run(config);
  SimTrace b = run(config);
  CHECK(io::cost_csv(a) == io::cost_csv(b));
  CHECK(io::uncovered_csv(a) == io::uncovered_csv(b));
  CHECK(io::occupancy_csv(a, config.duration, 4) ==
        io::occupancy_csv(b, config.duration, 4));
  CHECK(io::events_csv(a) == io::events_csv(b));
  CHECK(a.generators_used == b.generators_used);

  SimConfig other = invariant_suite_config(78);
  other.duration = 300.0;
  SimTrace c = run(other);
  CHECK(io::events_csv(a) != io::events_csv(c));
}

TEST_CASE("snapshots and checkpoints are emitted at their times") {
  SimConfig config = invariant_suite_config(5);
  config.duration = 200.0;
  config.checkpoints = {50.0, 150.0};
  config.snapshot_times = {100.0};
  SimTrace trace = run(config);
  REQUIRE(trace.checkpoints.size() == 2);
  CHECK(trace.checkpoints[0].time == 50.0);
  CHECK(trace.checkpoints[1].time == 150.0);
  CHECK(trace.checkpoints[0].tv_distance >= 0.0);
  CHECK(trace.checkpoints[0].tv_distance <= 1.0);
  REQUIRE(trace.snapshots.count(100.0) == 1);
  const auto& snap = trace.snapshots.at(100.0);
  CHECK(snap.at("schema_version") == 1);
  CHECK(snap.at("covering").size() == 4);
  CHECK(snap.at("generators").size() == 4);
}

TEST_CASE("number formatting round-trips and stays short") {
  CHECK(io::format_double(0.0) == "0");
  CHECK(io::format_double(2.5) == "2.5");
  CHECK(io::format_double(1.0 / 3.0) == "0.3333333333333333");
  std::mt19937_64 rng(1);
  for (int i = 0; i < 200; ++i) {
    double v = detail::uniform_real(rng, -1e6, 1e6);
    CHECK(std::stod(io::format_double(v)) == v);
  }
}
