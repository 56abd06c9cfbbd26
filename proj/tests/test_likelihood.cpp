#include <catch_amalgamated.hpp>

#include "coverops/likelihood.hpp"

using namespace coverops;

namespace {

VertexSet make_set(int n, std::initializer_list<Vertex> members) {
  VertexSet s(n);
  for (Vertex v : members) s.insert(v);
  return s;
}

}  // namespace

TEST_CASE("schedule validation") {
  LikelihoodSchedule s = LikelihoodSchedule::uniform(4);
  CHECK_NOTHROW(s.validate(4));
  CHECK_THROWS_AS(s.validate(5), std::invalid_argument);
  CHECK_THROWS_AS(LikelihoodSchedule{}.validate(4), std::invalid_argument);

  LikelihoodSchedule late{{{1.0, {0.5, 0.5}}}};
  CHECK_THROWS_AS(late.validate(2), std::invalid_argument);

  LikelihoodSchedule bad_sum{{{0.0, {0.5, 0.4}}}};
  CHECK_THROWS_AS(bad_sum.validate(2), std::invalid_argument);

  LikelihoodSchedule negative{{{0.0, {1.5, -0.5}}}};
  CHECK_THROWS_AS(negative.validate(2), std::invalid_argument);

  LikelihoodSchedule unordered{{{0.0, {1.0, 0.0}}, {0.0, {0.0, 1.0}}}};
  CHECK_THROWS_AS(unordered.validate(2), std::invalid_argument);
}

TEST_CASE("mass lookup is right-continuous at switches") {
  LikelihoodSchedule s{{{0.0, {1.0, 0.0}}, {2000.0, {0.0, 1.0}}}};
  s.validate(2);
  CHECK(global_mass(s, 0, 0.0) == 1.0);
  CHECK(global_mass(s, 0, 1999.999) == 1.0);
  CHECK(global_mass(s, 0, 2000.0) == 0.0);  // new segment at the boundary
  CHECK(global_mass(s, 1, 2000.0) == 1.0);
  CHECK(global_mass(s, 1, 5000.0) == 1.0);
  CHECK_THROWS_AS(masses_at(s, -1.0), std::domain_error);

  CHECK(next_switch_after(s, 0.0) == 2000.0);
  CHECK(next_switch_after(s, 1999.0) == 2000.0);
  CHECK(std::isinf(next_switch_after(s, 2000.0)));
}

TEST_CASE("uniform masses") {
  LikelihoodSchedule s = LikelihoodSchedule::uniform(4);
  for (Vertex v = 0; v < 4; ++v) {
    CHECK(global_mass(s, v, 10.0) == 0.25);
  }
}

TEST_CASE("prohibited region follows the gate") {
  AgentTimingView view;
  view.region = make_set(6, {0, 1, 2, 3});
  view.recently_added = make_set(6, {3});
  view.tau = 7.0;
  view.omega = 4.0;
  // Gate closes until omega + tau = 11.
  CHECK(prohibited_region(view, 10.0) == make_set(6, {3}));
  CHECK(active_region(view, 10.0) == make_set(6, {0, 1, 2}));
  CHECK(prohibited_region(view, 11.0).empty());  // t - omega == tau opens it
  CHECK(prohibited_region(view, 11.5).empty());
  CHECK(active_region(view, 11.5) == view.region);

  // Negative tau (initial payloads) never prohibits anything.
  view.tau = -2.0;
  view.omega = 0.0;
  CHECK(prohibited_region(view, 0.0).empty());
}

TEST_CASE("local mass gating") {
  LikelihoodSchedule s{{{0.0, {0.1, 0.2, 0.3, 0.4}}, {100.0, {0.4, 0.3, 0.2, 0.1}}}};
  s.validate(4);
  AgentTimingView view;
  view.region = make_set(4, {0, 1, 3});
  view.recently_added = make_set(4, {3});
  view.tau = 5.0;
  view.omega = 2.0;

  SECTION("outside the region: zero") {
    CHECK(local_mass(view, s, 2, 3.0) == 0.0);
  }
  SECTION("recently added while the gate is closed: zero") {
    CHECK(local_mass(view, s, 3, 6.9) == 0.0);
    CHECK(local_mass(view, s, 3, 7.0) == 0.4);  // gate opens at omega + tau
  }
  SECTION("plain member: the global mass") {
    CHECK(local_mass(view, s, 1, 3.0) == 0.2);
  }
  SECTION("frozen mode reads the field at the last contact time") {
    view.omega = 50.0;
    view.tau = 200.0;
    // At t = 150 the instantaneous field has switched; the frozen view
    // still prices vertex 1 with the first segment.
    CHECK(local_mass(view, s, 1, 150.0, LikelihoodMode::frozen) == 0.2);
    CHECK(local_mass(view, s, 1, 150.0, LikelihoodMode::instantaneous) == 0.3);
  }
}

TEST_CASE("gaussian masses normalize over the grid") {
  auto g = build_grid(4, 4, 1.0);
  auto masses = gaussian_masses(g, 0.5, 0.5, 1.0);
  double sum = 0.0;
  for (double m : masses) sum += m;
  CHECK_THAT(sum, Catch::Matchers::WithinAbs(1.0, 1e-12));
  // Vertex 0 sits on the center; mass decays with distance.
  CHECK(masses[0] > masses[3]);
  CHECK(masses[0] > masses[15]);
  CHECK(masses[3] > masses[15]);
  CHECK_THROWS_AS(gaussian_masses(g, 0.0, 0.0, 0.0), std::invalid_argument);
}
