#pragma once

// Shared helpers for the unit and acceptance tests: short vector builders,
// an error-code extractor, and brute-force lattice counters that scan the
// integer bounding box directly so they share no code with the sweep.

#include <algorithm>
#include <utility>
#include <vector>

#include "ehrkit/harness.hpp"
#include "ehrkit/json_io.hpp"

namespace ehrkit::testutil {

inline IVec iv(std::initializer_list<long> xs) {
  IVec v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

inline QVec qv(std::initializer_list<Rat> xs) { return QVec(xs); }

template <class F>
std::string thrown_code(F&& f) {
  try {
    std::forward<F>(f)();
  } catch (const Error& e) {
    return e.code();
  } catch (...) {
    return "<unexpected>";
  }
  return "<none>";
}

// P = [2/3, 1] x [0, 1/3], the running example used across the library docs.
inline HPolytope unit_square_example() {
  return validate(2, {{iv({1, 0}), Rat(1)},
                      {iv({-1, 0}), Rat(-2, 3)},
                      {iv({0, 1}), Rat(1, 3)},
                      {iv({0, -1}), Rat(0)}});
}

// Integer bounding box of s*P from the vertex set, then a direct inequality
// test per point. Returns all lattice points of s*P.
inline std::vector<IVec> brute_points(const HPolytope& p, const Rat& s) {
  auto verts = vertices(p);
  int d = p.dim;
  std::vector<Int> lo(d), hi(d);
  for (int c = 0; c < d; ++c) {
    Rat mn = s * verts.front()[c], mx = mn;
    for (const auto& v : verts) {
      Rat sc = s * v[c];
      mn = rat_min(mn, sc);
      mx = rat_max(mx, sc);
    }
    lo[c] = mn.ceil();
    hi[c] = mx.floor();
  }
  for (int c = 0; c < d; ++c)
    if (lo[c] > hi[c]) return {};
  std::vector<IVec> out;
  IVec x(lo);
  while (true) {
    bool inside = true;
    for (const auto& iq : p.ineqs) {
      Rat v(0);
      for (int c = 0; c < d; ++c) v += Rat(iq.a[c]) * Rat(x[c]);
      if (v > s * iq.b) {
        inside = false;
        break;
      }
    }
    if (inside) out.push_back(x);
    int c = 0;
    while (c < d && x[c] == hi[c]) {
      x[c] = lo[c];
      ++c;
    }
    if (c == d) break;
    x[c] += 1;
  }
  return out;
}

inline Int brute_count(const HPolytope& p, const Rat& s) {
  return Int(static_cast<long>(brute_points(p, s).size()));
}

// Lattice points of s*ppyr(P) = s*conv(P united 0), scanned over the box of
// the dilate joined with the origin.
inline Int brute_ppyr_count(const HPolytope& p, const Rat& s) {
  auto verts = vertices(p);
  int d = p.dim;
  std::vector<Int> lo(d), hi(d);
  for (int c = 0; c < d; ++c) {
    Rat mn(0), mx(0);
    for (const auto& v : verts) {
      Rat sc = s * v[c];
      mn = rat_min(mn, sc);
      mx = rat_max(mx, sc);
    }
    lo[c] = mn.ceil();
    hi[c] = mx.floor();
  }
  long n = 0;
  QVec x(d);
  IVec xi(lo);
  while (true) {
    for (int c = 0; c < d; ++c) x[c] = Rat(xi[c]);
    if (ppyr_membership(p, x, s)) ++n;
    int c = 0;
    while (c < d && xi[c] == hi[c]) {
      xi[c] = lo[c];
      ++c;
    }
    if (c == d) break;
    xi[c] += 1;
  }
  return Int(n);
}

}  // namespace ehrkit::testutil
