#include <random>

#include "doctest.h"
#include "test_util.hpp"

using namespace ehrkit;
using testutil::brute_count;
using testutil::brute_ppyr_count;
using testutil::iv;
using testutil::thrown_code;
using testutil::unit_square_example;

namespace {

// Closed form for the running square example on (0, 7/2].
Rat square_closed_form(const Rat& s) {
  Rat a{(s.floor() - (Rat(2) * s / Rat(3)).ceil() + 1)};
  Rat b{((s / Rat(3)).floor() + 1)};
  return a * b;
}

Rat random_param(std::mt19937_64& rng, long num_max, long den_max) {
  std::uniform_int_distribution<long> num(1, num_max);
  std::uniform_int_distribution<long> den(1, den_max);
  return Rat(num(rng), den(rng));
}

bool origin_inside(const HPolytope& p) {
  for (const auto& iq : p.ineqs)
    if (iq.b.sign() < 0) return false;
  return true;
}

bool nondecreasing(const QStepFunction& f) {
  Rat prev = f.base_value;
  for (const auto& b : f.breaks) {
    if (b.value_at < prev) return false;
    if (b.value_after < b.value_at) return false;
    prev = b.value_after;
  }
  return true;
}

}  // namespace

TEST_SUITE("ehrhart") {

TEST_CASE("lifespan intervals of single lattice points") {
  HPolytope p = unit_square_example();
  struct Row {
    long x, y;
    Rat alpha, beta;
  };
  std::vector<Row> table = {{1, 0, Rat(1), Rat(3, 2)},
                            {2, 0, Rat(2), Rat(3)},
                            {3, 0, Rat(3), Rat(9, 2)},
                            {2, 1, Rat(3), Rat(3)},
                            {3, 1, Rat(3), Rat(9, 2)}};
  for (const auto& row : table) {
    Lifespan ls = lifespan(p, iv({row.x, row.y}));
    REQUIRE(ls.kind == Lifespan::Kind::Closed);
    CHECK(ls.alpha == row.alpha);
    CHECK(ls.beta == row.beta);
  }
  CHECK(lifespan(p, iv({-1, 0})).kind == Lifespan::Kind::Empty);

  HPolytope box = validate(2, {{iv({1, 0}), Rat(1)},
                               {iv({0, 1}), Rat(1)},
                               {iv({-1, 0}), Rat(0)},
                               {iv({0, -1}), Rat(0)}});
  Lifespan unb = lifespan(box, iv({1, 1}));
  REQUIRE(unb.kind == Lifespan::Kind::RightUnbounded);
  CHECK(unb.alpha == Rat(1));
  CHECK(lifespan(box, iv({-1, 0})).kind == Lifespan::Kind::Empty);
}

TEST_CASE("square example: exact breakpoint table") {
  HPolytope p = unit_square_example();
  QStepFunction f = step_function(p, Rat(7, 2));
  CHECK(f.lo == Rat(0));
  CHECK(f.hi == Rat(7, 2));
  CHECK(f.base_value == Rat(0));
  REQUIRE(f.breaks.size() == 4);
  CHECK(f.has_event_counts);

  struct Expected {
    Rat s, at, after;
    long long enter, leave;
  };
  std::vector<Expected> expect = {{Rat(1), Rat(1), Rat(1), 1, 0},
                                  {Rat(3, 2), Rat(1), Rat(0), 0, 1},
                                  {Rat(2), Rat(1), Rat(1), 1, 0},
                                  {Rat(3), Rat(4), Rat(2), 3, 2}};
  for (size_t i = 0; i < 4; ++i) {
    CHECK(f.breaks[i].s == expect[i].s);
    CHECK(f.breaks[i].value_at == expect[i].at);
    CHECK(f.breaks[i].value_after == expect[i].after);
    CHECK(f.breaks[i].entering == expect[i].enter);
    CHECK(f.breaks[i].leaving == expect[i].leave);
  }

  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    Rat s = random_param(rng, 42, 12);
    if (s > Rat(7, 2)) s = Rat(7, 2);
    CHECK(f.eval(s) == square_closed_form(s));
    CHECK(Rat(count_points(p, s)) == square_closed_form(s));
  }
}

TEST_CASE("counting agrees with the brute-force box scan") {
  InstanceSpec spec;
  spec.count = 8;
  std::mt19937_64 rng(8);
  for (int d : {2, 3}) {
    spec.dim = d;
    spec.seed = 500 + d;
    for (const auto& p : generate_instances(spec)) {
      for (int trial = 0; trial < 5; ++trial) {
        Rat s = random_param(rng, 12, 4);
        CHECK(count_points(p, s) == brute_count(p, s));
      }
    }
  }
  CHECK(count_points(unit_square_example(), Rat(0)) == 1);
}

TEST_CASE("step function matches pointwise counting across its window") {
  InstanceSpec spec;
  spec.dim = 2;
  spec.count = 6;
  spec.seed = 501;
  std::mt19937_64 rng(9);
  for (const auto& p : generate_instances(spec)) {
    QStepFunction f = step_function(p, Rat(5));
    for (const auto& b : f.breaks) CHECK(f.eval(b.s) == b.value_at);
    for (int trial = 0; trial < 8; ++trial) {
      Rat s = random_param(rng, 20, 7);
      CHECK(f.eval(s) == Rat(count_points(p, s)));
    }
  }
}

TEST_CASE("every jump equals a facet lattice count") {
  InstanceSpec spec;
  spec.count = 6;
  for (int d : {2, 3}) {
    spec.dim = d;
    spec.seed = 502 + d;
    for (const auto& p : generate_instances(spec)) {
      QStepFunction f = step_function(p, Rat(4));
      for (const auto& jr : jumps(f)) {
        CHECK(jr.left_jump == Rat(facet_point_count(p, jr.s0, FacetKind::Front)));
        CHECK(jr.right_jump == Rat(facet_point_count(p, jr.s0, FacetKind::Back)));
        CHECK(jr.left_jump == Rat(Int(static_cast<long>(jr.entering))));
        CHECK(jr.right_jump == Rat(Int(static_cast<long>(jr.leaving))));
      }
    }
  }
}

TEST_CASE("facet point counts on the square by hand") {
  HPolytope p = unit_square_example();
  CHECK(facet_point_count(p, Rat(1), FacetKind::Front) == 1);
  CHECK(facet_point_count(p, Rat(1), FacetKind::Back) == 0);
  CHECK(facet_point_count(p, Rat(3, 2), FacetKind::Front) == 0);
  CHECK(facet_point_count(p, Rat(3, 2), FacetKind::Back) == 1);
  CHECK(facet_point_count(p, Rat(3), FacetKind::Front) == 3);
  CHECK(facet_point_count(p, Rat(3), FacetKind::Back) == 2);
}

TEST_CASE("window restriction agrees with the full sweep") {
  HPolytope p = unit_square_example();
  QStepFunction full = step_function(p, Rat(4));
  QStepFunction win = step_function_window(p, Rat(3, 2), Rat(4));
  CHECK(win.lo == Rat(3, 2));
  CHECK(win.hi == Rat(4));
  std::vector<Rat> expected_breaks;
  for (const auto& b : full.breaks)
    if (b.s > Rat(3, 2)) expected_breaks.push_back(b.s);
  REQUIRE(win.breaks.size() == expected_breaks.size());
  for (size_t i = 0; i < win.breaks.size(); ++i)
    CHECK(win.breaks[i].s == expected_breaks[i]);
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 30; ++trial) {
    Rat s = Rat(3, 2) + random_param(rng, 30, 13);
    if (s > Rat(4)) s = Rat(4);
    CHECK(win.eval(s) == full.eval(s));
  }
  CHECK(thrown_code([&] {
          step_function_window(p, Rat(2), Rat(2));
        }) == "BadInput");
}

TEST_CASE("lifting removes drops and matches pseudopyramid counts") {
  InstanceSpec spec;
  spec.dim = 2;
  spec.count = 8;
  spec.seed = 503;
  std::mt19937_64 rng(11);
  for (const auto& p : generate_instances(spec)) {
    QStepFunction raw = step_function(p, Rat(3));
    QStepFunction lifted = lifting(raw);
    CHECK(nondecreasing(lifted));
    if (origin_inside(p)) CHECK(nondecreasing(raw));
    // The origin's lifespan is the single parameter 0, so windows on (0, S]
    // miss it exactly when the origin is not already in P.
    Rat correction = origin_inside(p) ? Rat(0) : Rat(1);
    for (int trial = 0; trial < 4; ++trial) {
      Rat s = random_param(rng, 9, 3);
      CHECK(lifted.eval(s) + correction == Rat(brute_ppyr_count(p, s)));
    }
    for (const auto& b : lifted.breaks)
      CHECK(b.value_at == b.value_after);
  }
}

TEST_CASE("lift at a single breakpoint") {
  HPolytope p = unit_square_example();
  QStepFunction f = step_function(p, Rat(2));
  QStepFunction g = lift_at(f, Rat(3, 2));
  REQUIRE(g.breaks.size() >= 2);
  for (const auto& b : g.breaks)
    if (b.s == Rat(3, 2)) CHECK(b.value_after == b.value_at);
  // Everything right of the lifted drop moves up by the jump size 1.
  CHECK(g.eval(Rat(7, 4)) == f.eval(Rat(7, 4)) + Rat(1));
  CHECK(g.eval(Rat(2)) == f.eval(Rat(2)) + Rat(1));
  CHECK(g.eval(Rat(5, 4)) == f.eval(Rat(5, 4)));
  CHECK(thrown_code([&] { lift_at(f, Rat(17, 16)); }) == "NotABreakpoint");
}

TEST_CASE("same_function compares normalized step functions") {
  HPolytope p = unit_square_example();
  QStepFunction f = step_function(p, Rat(3));
  QStepFunction g = f;
  g.breaks.push_back({Rat(11, 4), g.eval(Rat(11, 4)), g.eval(Rat(11, 4)), -1, -1});
  std::sort(g.breaks.begin(), g.breaks.end(),
            [](const Breakpoint& a, const Breakpoint& b) { return a.s < b.s; });
  CHECK(same_function(f, g));
  QStepFunction h = step_function(translate(p, {Rat(1, 5), Rat(0)}), Rat(3));
  CHECK(!same_function(f, h));
}

TEST_CASE("oversized windows are refused up front") {
  SweepLimits tiny;
  tiny.max_box_points = 4;
  CHECK(thrown_code([&] {
          step_function(unit_square_example(), Rat(40), tiny);
        }) == "WindowTooLarge");
  CHECK(thrown_code([&] {
          count_points(unit_square_example(), Rat(1000), tiny);
        }) == "WindowTooLarge");
}

}  // TEST_SUITE
