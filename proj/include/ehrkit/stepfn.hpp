#pragma once

#include <vector>

#include "ehrkit/polytope.hpp"

namespace ehrkit {

/**
 * The set of dilation parameters s >= 0 whose dilate s*P contains a given
 * lattice point is a closed interval (possibly empty, possibly unbounded on
 * the right when every right-hand side is nonnegative). Front rows impose
 * the lower end, back rows the upper end.
 */
struct Lifespan {
  enum class Kind { Empty, Closed, RightUnbounded } kind = Kind::Empty;
  Rat alpha;   // first parameter alive; meaningful unless Empty
  Rat beta;    // last parameter alive; meaningful only for Closed
};
Lifespan lifespan(const HPolytope& p, const IVec& x);

/**
 * Piecewise-constant function on a half-open window (lo, hi], represented by
 * its breakpoints. Between breakpoints the function is constant; at a
 * breakpoint s it takes value_at, immediately after it takes value_after.
 * Counting functions of dilates are integer-valued; cleaned functions
 * produced during reconstruction are rational-valued, so values are Rat.
 *
 * Raw sweeps additionally record how many lattice points enter and leave at
 * each breakpoint; derived functions (lifted, cleaned) drop these counts.
 */
struct Breakpoint {
  Rat s;
  Rat value_at;
  Rat value_after;
  long long entering = -1;
  long long leaving = -1;
};

struct QStepFunction {
  Rat lo;
  Rat hi;
  Rat base_value;
  std::vector<Breakpoint> breaks;
  bool has_event_counts = false;

  Rat value_before(size_t i) const;
  Rat eval(const Rat& s) const;   // s must lie in (lo, hi]
  void normalize();               // drop breakpoints that change nothing
};

bool same_function(QStepFunction f, QStepFunction g);

// Enumeration ceiling: queries whose integer bounding box holds more points
// than this raise Error("WindowTooLarge").
struct SweepLimits {
  long long max_box_points = 10'000'000;
};

// Counting function of s |-> #(sP intersect Z^d) on (0, S].
QStepFunction step_function(const HPolytope& p, const Rat& s_max,
                            const SweepLimits& lim = {});

// Same, restricted to the window (lo, hi] with 0 <= lo < hi.
QStepFunction step_function_window(const HPolytope& p, const Rat& lo, const Rat& hi,
                                   const SweepLimits& lim = {});

// #(sP intersect Z^d) for a single parameter; s = 0 yields 1.
Int count_points(const HPolytope& p, const Rat& s, const SweepLimits& lim = {});

struct JumpReport {
  Rat s0;
  Rat left_jump;
  Rat right_jump;
  long long entering = -1;
  long long leaving = -1;
};
std::vector<JumpReport> jumps(const QStepFunction& f);

// Lattice points of s0*P lying on at least one facet of the given kind of
// s0*P. A point on several such facets is counted once.
Int facet_point_count(const HPolytope& p, const Rat& s0, FacetKind side,
                      const SweepLimits& lim = {});

// Removes the right-discontinuity at breakpoint s0 by shifting everything to
// the right of s0 up by the jump. Raises NotABreakpoint when s0 is not one.
QStepFunction lift_at(const QStepFunction& f, const Rat& s0);

// Applies lift_at at every breakpoint, left to right. For counting functions
// on (0, S] this yields the window restriction of the counting function of
// conv(P united 0), short by one when the origin is outside P: the origin's
// one-point lifespan {0} drops at s = 0, which no window can see.
QStepFunction lifting(const QStepFunction& f);

}  // namespace ehrkit
