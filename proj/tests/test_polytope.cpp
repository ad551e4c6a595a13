#include <random>

#include "doctest.h"
#include "test_util.hpp"

using namespace ehrkit;
using testutil::iv;
using testutil::thrown_code;
using testutil::unit_square_example;

namespace {

int orient(const QVec& a, const QVec& b, const QVec& c) {
  Rat v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
  return v.sign();
}

bool on_segment(const QVec& a, const QVec& b, const QVec& x) {
  if (orient(a, b, x) != 0) return false;
  for (int c = 0; c < 2; ++c)
    if (x[c] < rat_min(a[c], b[c]) || x[c] > rat_max(a[c], b[c])) return false;
  return true;
}

// Membership in a planar convex hull by Caratheodory: some triangle (or
// degenerate pair/point) of generators contains x. Exact and independent of
// the lifespan route the library takes.
bool in_hull2(const std::vector<QVec>& gen, const QVec& x) {
  size_t n = gen.size();
  for (size_t i = 0; i < n; ++i)
    if (gen[i] == x) return true;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      if (on_segment(gen[i], gen[j], x)) return true;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      for (size_t k = j + 1; k < n; ++k) {
        int o = orient(gen[i], gen[j], gen[k]);
        if (o == 0) continue;
        int s1 = orient(gen[i], gen[j], x);
        int s2 = orient(gen[j], gen[k], x);
        int s3 = orient(gen[k], gen[i], x);
        bool pos = s1 >= 0 && s2 >= 0 && s3 >= 0;
        bool neg = s1 <= 0 && s2 <= 0 && s3 <= 0;
        if (o > 0 ? pos : neg) return true;
      }
  return false;
}

}  // namespace

TEST_SUITE("polytope") {

TEST_CASE("validation rejects broken systems") {
  CHECK(thrown_code([] {
          validate(2, {{iv({0, 0}), Rat(1)}});
        }) == "ZeroNormal");
  CHECK(thrown_code([] {
          validate(2, {{iv({1, 0}), Rat(1)}});
        }) == "UnboundedPolytope");
  CHECK(thrown_code([] {
          validate(1, {{iv({1}), Rat(-1)}, {iv({-1}), Rat(-1)}});
        }) == "EmptyPolytope");
  CHECK(thrown_code([] {
          validate(2, {{iv({1}), Rat(1)}});
        }) == "DimensionMismatch");
  CHECK(thrown_code([] { validate(0, {}); }) == "DimensionMismatch");
}

TEST_CASE("validation normalizes and deduplicates directions") {
  HPolytope p = validate(1, {{iv({2}), Rat(3)},
                             {iv({1}), Rat(1)},
                             {iv({-1}), Rat(0)}});
  REQUIRE(p.ineqs.size() == 2);
  // (2) <= 3 primitivizes to (1) <= 3/2; the duplicate keeps the tighter 1.
  for (const auto& iq : p.ineqs) {
    if (iq.a == iv({1})) CHECK(iq.b == Rat(1));
    if (iq.a == iv({-1})) CHECK(iq.b == Rat(0));
  }

  HPolytope q = validate(1, {{iv({3}), Rat(2)}, {iv({-2}), Rat(1)}});
  for (const auto& iq : q.ineqs) {
    if (iq.a == iv({1})) CHECK(iq.b == Rat(2, 3));
    if (iq.a == iv({-1})) CHECK(iq.b == Rat(1, 2));
  }
}

TEST_CASE("square example: vertices, volume, facet kinds") {
  HPolytope p = unit_square_example();
  auto verts = vertices(p);
  std::vector<QVec> expect = {{Rat(2, 3), Rat(0)},
                              {Rat(2, 3), Rat(1, 3)},
                              {Rat(1), Rat(0)},
                              {Rat(1), Rat(1, 3)}};
  CHECK(verts == expect);
  CHECK(volume(p) == Rat(1, 9));
  CHECK(rvol(p) == Rat(1, 9));

  auto faces = faces_report(p);
  REQUIRE(faces.size() == 4);
  for (const auto& f : faces) {
    CHECK(f.face_dim == 1);
    const Ineq& iq = p.ineqs[f.index];
    if (iq.b.sign() > 0) CHECK(f.kind == FacetKind::Front);
    if (iq.b.sign() < 0) CHECK(f.kind == FacetKind::Back);
    if (iq.b.is_zero()) CHECK(f.kind == FacetKind::Neutral);
  }
}

TEST_CASE("hull volume: triangle, degenerate set") {
  std::vector<QVec> tri = {{Rat(0), Rat(0)}, {Rat(1), Rat(0)}, {Rat(0), Rat(1)}};
  CHECK(hull_volume(tri, 2) == Rat(1, 2));
  std::vector<QVec> line = {{Rat(0), Rat(0)}, {Rat(1), Rat(1)}, {Rat(2), Rat(2)}};
  CHECK(hull_volume(line, 2) == Rat(0));
}

TEST_CASE("translation shifts right-hand sides by the inner product") {
  HPolytope p = unit_square_example();
  QVec v = {Rat(5, 7), Rat(-2)};
  HPolytope q = translate(p, v);
  for (size_t i = 0; i < p.ineqs.size(); ++i) {
    CHECK(q.ineqs[i].a == p.ineqs[i].a);
    CHECK(q.ineqs[i].b == p.ineqs[i].b + dot(p.ineqs[i].a, v));
  }
  QVec back = {-v[0], -v[1]};
  HPolytope r = translate(q, back);
  for (size_t i = 0; i < p.ineqs.size(); ++i) CHECK(r.ineqs[i].b == p.ineqs[i].b);
  CHECK(volume(q) == volume(p));
}

TEST_CASE("pseudopyramid volumes: worked values and both routes agree") {
  HPolytope sq = unit_square_example();
  PpyrVolumes pv = ppyr_volume(sq);
  CHECK(pv.via_decomposition == Rat(2, 9));
  CHECK(pv.via_hull == Rat(2, 9));

  HPolytope wide = validate(2, {{iv({1, 0}), Rat(2)},
                                {iv({-1, 0}), Rat(-1)},
                                {iv({0, 1}), Rat(1)},
                                {iv({0, -1}), Rat(0)}});
  PpyrVolumes pw = ppyr_volume(wide);
  CHECK(pw.via_decomposition == Rat(3, 2));
  CHECK(pw.via_hull == Rat(3, 2));

  // A polytope containing the origin is its own pseudopyramid.
  HPolytope box = validate(2, {{iv({1, 0}), Rat(1)},
                               {iv({-1, 0}), Rat(1)},
                               {iv({0, 1}), Rat(2)},
                               {iv({0, -1}), Rat(1)}});
  PpyrVolumes pb = ppyr_volume(box);
  CHECK(pb.via_hull == volume(box));
  CHECK(pb.via_decomposition == pb.via_hull);

  HPolytope seg = validate(2, {{iv({1, 0}), Rat(1)},
                               {iv({-1, 0}), Rat(-1)},
                               {iv({0, 1}), Rat(1)},
                               {iv({0, -1}), Rat(0)}});
  CHECK(thrown_code([&] { ppyr_volume(seg); }) == "NotFullDimensional");
}

TEST_CASE("decomposition and hull volumes agree on random instances") {
  InstanceSpec spec;
  spec.count = 20;
  for (int d : {2, 3}) {
    spec.dim = d;
    spec.seed = 900 + d;
    for (const auto& p : generate_instances(spec)) {
      PpyrVolumes pv = ppyr_volume(p);
      CHECK(pv.via_decomposition == pv.via_hull);
      CHECK(pv.via_hull >= volume(p));
    }
  }
}

TEST_CASE("pseudopyramid membership matches a hull test") {
  std::mt19937_64 rng(42);
  InstanceSpec spec;
  spec.dim = 2;
  spec.count = 6;
  spec.seed = 77;
  std::uniform_int_distribution<long> coord(-4, 6);
  std::uniform_int_distribution<long> sden(1, 4);
  std::uniform_int_distribution<long> snum(1, 12);
  for (const auto& p : generate_instances(spec)) {
    auto verts = vertices(p);
    for (int trial = 0; trial < 25; ++trial) {
      Rat s(snum(rng), sden(rng));
      QVec x = {Rat(coord(rng)), Rat(coord(rng))};
      std::vector<QVec> gen = {{Rat(0), Rat(0)}};
      for (const auto& v : verts) gen.push_back({s * v[0], s * v[1]});
      CHECK(ppyr_membership(p, x, s) == in_hull2(gen, x));
    }
  }
}

TEST_CASE("relative volume: points, segments, full bodies") {
  HPolytope pt = validate(2, {{iv({1, 0}), Rat(1)},
                              {iv({-1, 0}), Rat(-1)},
                              {iv({0, 1}), Rat(1)},
                              {iv({0, -1}), Rat(-1)}});
  CHECK(rvol(pt) == Rat(1));
  CHECK(affine_hull(pt).hull_dim == 0);

  HPolytope seg = validate(2, {{iv({1, 0}), Rat(1)},
                               {iv({-1, 0}), Rat(-1)},
                               {iv({0, 1}), Rat(1)},
                               {iv({0, -1}), Rat(0)}});
  CHECK(rvol(seg) == Rat(1));
  CHECK(affine_hull(seg).hull_dim == 1);

  // Diagonal segment from (0,0) to (1,1): Euclidean length sqrt(2), but one
  // step of the induced lattice, so relative volume 1.
  HPolytope diag = validate(2, {{iv({1, -1}), Rat(0)},
                                {iv({-1, 1}), Rat(0)},
                                {iv({1, 0}), Rat(1)},
                                {iv({-1, 0}), Rat(0)}});
  CHECK(rvol(diag) == Rat(1));
  auto hull = affine_hull(diag);
  CHECK(hull.hull_dim == 1);
  REQUIRE(hull.lattice_dirs.size() == 1);
  CHECK(gcd_vec(hull.lattice_dirs[0]) == 1);

  // A segment of two lattice steps.
  HPolytope diag2 = validate(2, {{iv({1, -1}), Rat(0)},
                                 {iv({-1, 1}), Rat(0)},
                                 {iv({1, 0}), Rat(2)},
                                 {iv({-1, 0}), Rat(0)}});
  CHECK(rvol(diag2) == Rat(2));
}

TEST_CASE("relative volume is invariant under integer translation") {
  std::vector<HPolytope> bodies;
  bodies.push_back(unit_square_example());
  bodies.push_back(validate(2, {{iv({1, -1}), Rat(0)},
                                {iv({-1, 1}), Rat(0)},
                                {iv({1, 0}), Rat(1)},
                                {iv({-1, 0}), Rat(0)}}));
  for (const auto& p : bodies) {
    Rat base = rvol(p);
    CHECK(rvol(translate(p, {Rat(3), Rat(-2)})) == base);
    CHECK(rvol(translate(p, {Rat(-1), Rat(7)})) == base);
  }
  // Full-dimensional bodies keep their Euclidean volume under any shift.
  HPolytope sq = unit_square_example();
  CHECK(rvol(translate(sq, {Rat(1, 3), Rat(5, 2)})) == rvol(sq));
}

TEST_CASE("facet polytopes have one dimension less") {
  HPolytope p = unit_square_example();
  for (size_t i = 0; i < p.ineqs.size(); ++i) {
    HPolytope f = facet_polytope(p, static_cast<int>(i));
    CHECK(affine_hull(f).hull_dim == 1);
    CHECK(rvol(f) == Rat(1, 3));
  }
  CHECK(thrown_code([&] { facet_polytope(p, 9); }) == "BadInput");
}

TEST_CASE("flattening a hyperplane polytope and pulling it back") {
  HPolytope seg = validate(2, {{iv({1, 0}), Rat(1)},
                               {iv({-1, 0}), Rat(-1)},
                               {iv({0, 1}), Rat(1)},
                               {iv({0, -1}), Rat(0)}});
  FlattenResult f = flatten_codim1(seg);
  CHECK(f.normal == iv({1, 0}));
  CHECK(f.offset == Rat(1));
  CHECK(f.flat.dim == 1);
  CHECK(is_unimodular(f.transform));
  CHECK(f.transform.back() == f.normal);
  CHECK(matmul(f.transform, f.inverse) == identity_mat(2));
  CHECK(rvol(f.flat) == rvol(seg));

  HPolytope back = pullback_codim1(f.flat, f.transform, f.offset);
  CHECK(vertices(back) == vertices(seg));

  GridMap gm = flatten_translate(f, iv({0, 0}));
  CHECK(gm.denom == Rat(1));
  auto s1 = flatten_param(f, iv({0, 0}), Int(3));
  REQUIRE(s1.has_value());
  CHECK(*s1 == Rat(3));
  GridMap shifted = flatten_translate(f, iv({2, 5}));
  CHECK(shifted.denom == Rat(3));

  CHECK(thrown_code([] { flatten_codim1(unit_square_example()); }) ==
        "NotCodimensionOne");
}

}  // TEST_SUITE
