#include "ehrkit/stepfn.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace ehrkit {

namespace {

// ---------------------------------------------------------------------------
// Exact region setup. Window queries work with the integer points whose
// lifespan meets [lo, hi]; these are exactly the solutions of
//   <a_i, x> <= hi * b_i   (b_i >= 0)
//   <a_i, x> <= lo * b_i   (b_i < 0)
// clipped to the integer bounding box of conv(lo*P union hi*P), which alive
// points can never leave. Systems are eliminated variable by variable
// (Fourier-Motzkin), so enumeration walks prefixes whose extensions stay
// inside the region over the reals.
//
// Enumerating that full region is wasteful: its bulk is points alive through
// the whole window, which only contribute a single number (the value at the
// window start). That count is obtained by interval summation without
// visiting points, and the enter/leave events are collected from thin slabs
// around the individual facets.
// ---------------------------------------------------------------------------

struct XRow {
  IVec g;
  Rat r;
};

void push_row(std::map<IVec, Rat>& acc, IVec g, Rat r) {
  auto [prim, scale] = primitivize(g);
  r /= Rat(scale);
  auto it = acc.find(prim);
  if (it == acc.end())
    acc.emplace(std::move(prim), std::move(r));
  else
    it->second = rat_min(it->second, r);
}

struct RegionSetup {
  int d = 0;
  bool infeasible = false;
  std::vector<std::vector<XRow>> bound;   // bound[j]: support in 0..j, g[j] != 0
  IVec box_lo, box_hi;
};

RegionSetup build_region(int d, const std::vector<XRow>& raw,
                         const std::vector<QVec>& box_pts) {
  RegionSetup setup;
  setup.d = d;
  setup.box_lo.assign(d, 0);
  setup.box_hi.assign(d, 0);
  for (int j = 0; j < d; ++j) {
    Rat mn = box_pts[0][j], mx = box_pts[0][j];
    for (const auto& p : box_pts) {
      mn = rat_min(mn, p[j]);
      mx = rat_max(mx, p[j]);
    }
    setup.box_lo[j] = mn.floor();
    setup.box_hi[j] = mx.ceil();
  }

  std::map<IVec, Rat> acc;
  for (const auto& row : raw) push_row(acc, row.g, row.r);
  for (int j = 0; j < d; ++j) {
    IVec e(d, 0);
    e[j] = 1;
    push_row(acc, e, Rat(setup.box_hi[j]));
    e[j] = -1;
    push_row(acc, e, -Rat(setup.box_lo[j]));
  }

  setup.bound.assign(d, {});
  std::vector<XRow> sys;
  for (auto& [g, r] : acc) sys.push_back({g, r});

  for (int j = d - 1; j >= 0; --j) {
    std::vector<XRow> pos, neg, pass;
    for (auto& row : sys) {
      int sg = sgn(row.g[j]);
      if (sg > 0)
        pos.push_back(row);
      else if (sg < 0)
        neg.push_back(row);
      else
        pass.push_back(row);
    }
    setup.bound[j] = pos;
    setup.bound[j].insert(setup.bound[j].end(), neg.begin(), neg.end());

    std::map<IVec, Rat> next;
    for (auto& row : pass) push_row(next, row.g, row.r);
    for (const auto& u : pos) {
      for (const auto& v : neg) {
        IVec g(d, 0);
        Int mu = -v.g[j], mv = u.g[j];
        bool zero = true;
        for (int k = 0; k < j; ++k) {
          g[k] = mu * u.g[k] + mv * v.g[k];
          if (g[k] != 0) zero = false;
        }
        Rat r = Rat(mu) * u.r + Rat(mv) * v.r;
        if (zero) {
          if (r.sign() < 0) setup.infeasible = true;
          continue;
        }
        push_row(next, std::move(g), std::move(r));
      }
    }
    sys.clear();
    for (auto& [g, r] : next) sys.push_back({g, r});
  }
  return setup;
}

// ---------------------------------------------------------------------------
// Enumeration core, templated over the integer type. The word-sized
// instantiation runs only when precomputed magnitude guards prove that every
// intermediate fits; otherwise the same code runs on GMP integers.
// ---------------------------------------------------------------------------

template <typename T>
T floor_div(const T& a, const T& b);   // b > 0
template <typename T>
T ceil_div(const T& a, const T& b);    // b > 0

template <>
long long floor_div<long long>(const long long& a, const long long& b) {
  long long q = a / b, r = a % b;
  return (r != 0 && (r < 0)) ? q - 1 : q;
}
template <>
long long ceil_div<long long>(const long long& a, const long long& b) {
  long long q = a / b, r = a % b;
  return (r != 0 && (r > 0)) ? q + 1 : q;
}
template <>
Int floor_div<Int>(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}
template <>
Int ceil_div<Int>(const Int& a, const Int& b) {
  Int q;
  mpz_cdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

// compare n1/d1 with n2/d2, denominators positive
inline int frac_cmp(long long n1, long long d1, long long n2, long long d2) {
  __int128 l = static_cast<__int128>(n1) * d2;
  __int128 r = static_cast<__int128>(n2) * d1;
  return l < r ? -1 : l > r ? 1 : 0;
}
inline int frac_cmp(const Int& n1, const Int& d1, const Int& n2, const Int& d2) {
  return cmp(n1 * d2, n2 * d1);
}

inline void frac_reduce(long long& n, long long& d) {
  long long g = std::gcd(n < 0 ? -n : n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
}
inline void frac_reduce(Int& n, Int& d) {
  Int g;
  mpz_gcd(g.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
  if (g > 1) {
    n /= g;
    d /= g;
  }
}

inline Rat frac_to_rat(long long n, long long d) {
  return Rat(Int(static_cast<long>(n)), Int(static_cast<long>(d)));
}
inline Rat frac_to_rat(const Int& n, const Int& d) { return Rat(n, d); }

inline Int widen(long long v) { return Int(static_cast<long>(v)); }
inline const Int& widen(const Int& v) { return v; }

[[noreturn]] void budget_exceeded(long long budget) {
  raise("WindowTooLarge", "enumeration exceeded the lattice budget of " +
                              std::to_string(budget) + " nodes");
}

template <typename T>
struct BoundRow {
  std::vector<T> g;
  T rn, rd;   // rhs rn/rd with rd > 0
};

template <typename T>
struct PolyRow {
  T bp, bq;    // b = bp/bq, bq > 0, bp != 0
  bool front;  // bp > 0
};

template <typename T>
struct Enumerator {
  int d = 0;
  int m = 0;   // tracked polytope rows
  std::vector<std::vector<BoundRow<T>>> bound;
  std::vector<std::vector<T>> acol;   // acol[j][i]: coefficient of x_j in row i
  std::vector<PolyRow<T>> rows;

  template <typename Leaf>
  void run(Leaf&& leaf, long long budget) const {
    std::vector<std::vector<T>> pd(d + 1, std::vector<T>(m, T(0)));
    std::vector<T> x(d, T(0));
    long long nodes = 0;
    descend(0, x, pd, leaf, nodes, budget);
  }

  // Counts the region's lattice points by summing last-level intervals, so
  // the cost depends on the number of (d-1)-prefixes, not on the count.
  Int run_count(long long budget) const {
    std::vector<T> x(d, T(0));
    long long nodes = 0;
    Int total = 0;
    descend_count(0, x, total, nodes, budget);
    return total;
  }

 private:
  bool level_range(int j, const std::vector<T>& x, T& lo, T& hi) const {
    bool has_lo = false, has_hi = false;
    for (const auto& row : bound[j]) {
      T partial = T(0);
      for (int k = 0; k < j; ++k)
        if (row.g[k] != 0) partial += row.g[k] * x[k];
      T t = row.rn - partial * row.rd;
      T den = row.g[j] * row.rd;
      if (den > 0) {
        T ub = floor_div<T>(t, den);
        if (!has_hi || ub < hi) { hi = ub; has_hi = true; }
      } else {
        T nden = -den;
        T lb = ceil_div<T>(-t, nden);
        if (!has_lo || lb > lo) { lo = lb; has_lo = true; }
      }
    }
    return has_lo && has_hi && !(lo > hi);   // box rows normally supply both
  }

  template <typename Leaf>
  void descend(int j, std::vector<T>& x, std::vector<std::vector<T>>& pd,
               Leaf&& leaf, long long& nodes, long long budget) const {
    T lo{}, hi{};
    if (!level_range(j, x, lo, hi)) return;

    if (j == d - 1) {
      std::vector<T>& dots = pd[d];
      dots = pd[j];
      for (int i = 0; i < m; ++i)
        if (acol[j][i] != 0) dots[i] += acol[j][i] * lo;
      for (T v = lo;; ++v) {
        if (++nodes > budget) budget_exceeded(budget);
        x[j] = v;
        leaf(dots, x);
        if (v == hi) break;
        for (int i = 0; i < m; ++i) dots[i] += acol[j][i];
      }
      return;
    }
    std::vector<T>& nxt = pd[j + 1];
    nxt = pd[j];
    for (int i = 0; i < m; ++i)
      if (acol[j][i] != 0) nxt[i] += acol[j][i] * lo;
    for (T v = lo;; ++v) {
      if (++nodes > budget) budget_exceeded(budget);
      x[j] = v;
      descend(j + 1, x, pd, leaf, nodes, budget);
      if (v == hi) break;
      nxt = pd[j];
      T step = v + 1;
      for (int i = 0; i < m; ++i)
        if (acol[j][i] != 0) nxt[i] += acol[j][i] * step;
    }
  }

  void descend_count(int j, std::vector<T>& x, Int& total, long long& nodes,
                     long long budget) const {
    T lo{}, hi{};
    if (!level_range(j, x, lo, hi)) return;
    if (j == d - 1) {
      if (++nodes > budget) budget_exceeded(budget);
      total += widen(hi) - widen(lo) + 1;
      return;
    }
    for (T v = lo;; ++v) {
      if (++nodes > budget) budget_exceeded(budget);
      x[j] = v;
      descend_count(j + 1, x, total, nodes, budget);
      if (v == hi) break;
    }
  }
};

// Magnitude guards for the word-sized path. All quantities are bounded via
// the integer box; products stay below 2^62 so that cross-multiplied
// comparisons fit in 128 bits.
constexpr long kGuard = 1L << 61;

bool fits(const Int& v) { return cmp(abs(v), kGuard) < 0; }

bool region_fits_i64(const RegionSetup& region) {
  int d = region.d;
  std::vector<Int> X(d);
  for (int j = 0; j < d; ++j)
    X[j] = std::max(abs(region.box_lo[j]), abs(region.box_hi[j]));
  for (const auto& level : region.bound) {
    for (const auto& row : level) {
      Int mr = 0;
      for (int j = 0; j < d; ++j) mr += abs(row.g[j]) * X[j];
      Int rn = row.r.num(), rd = row.r.den();
      if (!fits(rn) || !fits(rd)) return false;
      if (!fits(abs(rn) + mr * rd)) return false;
      for (int j = 0; j < d; ++j)
        if (!fits(row.g[j] * rd)) return false;
    }
  }
  return true;
}

bool rows_fit_i64(const RegionSetup& region, const std::vector<IVec>& poly_a,
                  const std::vector<Rat>& poly_b) {
  int d = region.d;
  std::vector<Int> X(d);
  for (int j = 0; j < d; ++j)
    X[j] = std::max(abs(region.box_lo[j]), abs(region.box_hi[j]));
  for (size_t i = 0; i < poly_a.size(); ++i) {
    Int mi = 0;
    for (int j = 0; j < d; ++j) mi += abs(poly_a[i][j]) * X[j];
    if (!fits(mi * poly_b[i].den())) return false;
    if (!fits(poly_b[i].num())) return false;
  }
  return true;
}

bool fracs_fit_i64(const std::vector<Rat>& fracs) {
  for (const auto& f : fracs)
    if (!fits(f.num()) || !fits(f.den())) return false;
  return true;
}

template <typename T>
T scalar_from(const Int& v);
template <>
long long scalar_from<long long>(const Int& v) { return v.get_si(); }
template <>
Int scalar_from<Int>(const Int& v) { return v; }

template <typename T>
Enumerator<T> make_enumerator(const RegionSetup& region,
                              const std::vector<IVec>& poly_a,
                              const std::vector<Rat>& poly_b,
                              const std::vector<bool>& poly_front) {
  Enumerator<T> e;
  e.d = region.d;
  e.m = static_cast<int>(poly_a.size());
  e.bound.resize(e.d);
  for (int j = 0; j < e.d; ++j) {
    for (const auto& row : region.bound[j]) {
      BoundRow<T> br;
      br.g.resize(e.d);
      for (int k = 0; k < e.d; ++k) br.g[k] = scalar_from<T>(row.g[k]);
      br.rn = scalar_from<T>(row.r.num());
      br.rd = scalar_from<T>(row.r.den());
      e.bound[j].push_back(std::move(br));
    }
  }
  e.acol.assign(e.d, std::vector<T>(e.m, T(0)));
  for (int i = 0; i < e.m; ++i)
    for (int j = 0; j < e.d; ++j) e.acol[j][i] = scalar_from<T>(poly_a[i][j]);
  for (int i = 0; i < e.m; ++i) {
    PolyRow<T> pr;
    pr.bp = scalar_from<T>(poly_b[i].num());
    pr.bq = scalar_from<T>(poly_b[i].den());
    pr.front = poly_front[i];
    e.rows.push_back(std::move(pr));
  }
  return e;
}

// Sweep events as exact fractions.
template <typename T>
struct Event {
  T n, d;
  bool enter;
};

// Leaf handler for an entry slab: the point's first lifespan-start maximizer
// must be the slab's own facet, so points shared between slabs are taken
// exactly once.
template <typename T>
void enter_leaf(const Enumerator<T>& e, const std::vector<T>& dots, int owner,
                const T& lon, const T& lod, std::vector<Event<T>>& events) {
  T an = T(0), ad = T(1);
  T bn{}, bd{};
  int arg = -1;
  bool has_b = false;
  for (int i = 0; i < e.m; ++i) {
    const auto& row = e.rows[i];
    if (row.front) {
      if (dots[i] > 0) {
        T cn = dots[i] * row.bq;
        if (frac_cmp(cn, row.bp, an, ad) > 0) { an = cn; ad = row.bp; arg = i; }
      }
    } else {
      T cn = -(dots[i] * row.bq);
      T cd = -row.bp;
      if (!has_b || frac_cmp(cn, cd, bn, bd) < 0) { bn = cn; bd = cd; has_b = true; }
    }
  }
  if (arg != owner) return;
  if (has_b && frac_cmp(bn, bd, an, ad) < 0) return;   // never alive
  if (frac_cmp(an, ad, lon, lod) <= 0) return;         // alive at the window start
  frac_reduce(an, ad);
  events.push_back({an, ad, true});
}

template <typename T>
void leave_leaf(const Enumerator<T>& e, const std::vector<T>& dots, int owner,
                const T& lon, const T& lod, const T& hin, const T& hid,
                std::vector<Event<T>>& events) {
  T an = T(0), ad = T(1);
  T bn{}, bd{};
  int arg = -1;
  bool has_b = false;
  for (int i = 0; i < e.m; ++i) {
    const auto& row = e.rows[i];
    if (row.front) {
      if (dots[i] > 0) {
        T cn = dots[i] * row.bq;
        if (frac_cmp(cn, row.bp, an, ad) > 0) { an = cn; ad = row.bp; }
      }
    } else {
      T cn = -(dots[i] * row.bq);
      T cd = -row.bp;
      if (!has_b || frac_cmp(cn, cd, bn, bd) < 0) {
        bn = cn;
        bd = cd;
        arg = i;
        has_b = true;
      }
    }
  }
  if (!has_b || arg != owner) return;
  if (frac_cmp(bn, bd, an, ad) < 0) return;        // never alive
  if (frac_cmp(bn, bd, lon, lod) <= 0) return;     // gone before the window opens
  if (frac_cmp(bn, bd, hin, hid) > 0) return;      // survives past the window
  frac_reduce(bn, bd);
  events.push_back({bn, bd, false});
}

template <typename T>
QStepFunction assemble(std::vector<Event<T>> events, const Rat& base,
                       const Rat& lo, const Rat& hi) {
  std::sort(events.begin(), events.end(), [](const Event<T>& a, const Event<T>& b) {
    return frac_cmp(a.n, a.d, b.n, b.d) < 0;
  });
  QStepFunction f;
  f.lo = lo;
  f.hi = hi;
  f.base_value = base;
  f.has_event_counts = true;
  Rat running = base;
  size_t i = 0;
  while (i < events.size()) {
    size_t j = i;
    long enter = 0, leave = 0;
    while (j < events.size() &&
           frac_cmp(events[j].n, events[j].d, events[i].n, events[i].d) == 0) {
      if (events[j].enter) ++enter; else ++leave;
      ++j;
    }
    Breakpoint bp;
    bp.s = frac_to_rat(events[i].n, events[i].d);
    bp.value_at = running + Rat(enter);
    bp.value_after = running + Rat(enter) - Rat(leave);
    bp.entering = enter;
    bp.leaving = leave;
    running = bp.value_after;
    f.breaks.push_back(std::move(bp));
    i = j;
  }
  return f;
}

std::vector<QVec> scaled_vertices(const std::vector<QVec>& verts, const Rat& s) {
  std::vector<QVec> out;
  out.reserve(verts.size());
  for (const auto& v : verts) {
    QVec b(v.size());
    for (size_t j = 0; j < v.size(); ++j) b[j] = s * v[j];
    out.push_back(std::move(b));
  }
  return out;
}

// Rows of the set of points alive somewhere in [lo, hi].
std::vector<XRow> window_membership_rows(const HPolytope& p, const Rat& lo,
                                         const Rat& hi) {
  std::vector<XRow> raw;
  for (const auto& row : p.ineqs)
    raw.push_back({row.a, (row.b.sign() >= 0 ? hi : lo) * row.b});
  return raw;
}

// Rows of the set alive just after lo: front facets bind closed at lo, back
// facets strictly (rounded, since the forms take integer values).
std::vector<XRow> alive_after_rows(const HPolytope& p, const Rat& lo) {
  std::vector<XRow> raw;
  for (const auto& row : p.ineqs) {
    if (row.b.sign() >= 0) {
      raw.push_back({row.a, lo * row.b});
    } else {
      Rat r = lo * row.b;
      Int cap = r.is_integer() ? r.num() - 1 : r.floor();
      raw.push_back({row.a, Rat(cap)});
    }
  }
  return raw;
}

Int count_region(const RegionSetup& region, long long budget) {
  if (region.infeasible) return 0;
  if (region_fits_i64(region)) {
    auto e = make_enumerator<long long>(region, {}, {}, {});
    return e.run_count(budget);
  }
  auto e = make_enumerator<Int>(region, {}, {}, {});
  return e.run_count(budget);
}

}  // namespace

Lifespan lifespan(const HPolytope& p, const IVec& x) {
  if (static_cast<int>(x.size()) != p.dim)
    raise("DimensionMismatch", "point length does not match dimension");
  Rat alpha(0);
  Rat beta;
  bool has_beta = false;
  for (const auto& row : p.ineqs) {
    Int v = dot(row.a, x);
    int sb = row.b.sign();
    if (sb == 0) {
      if (v > 0) return {Lifespan::Kind::Empty, Rat(0), Rat(0)};
    } else if (sb > 0) {
      if (v > 0) alpha = rat_max(alpha, Rat(v) / row.b);
    } else {
      Rat r = Rat(v) / row.b;
      if (!has_beta || r < beta) { beta = r; has_beta = true; }
    }
  }
  if (!has_beta) return {Lifespan::Kind::RightUnbounded, alpha, Rat(0)};
  if (beta < alpha) return {Lifespan::Kind::Empty, Rat(0), Rat(0)};
  return {Lifespan::Kind::Closed, alpha, beta};
}

Rat QStepFunction::value_before(size_t i) const {
  return i == 0 ? base_value : breaks[i - 1].value_after;
}

Rat QStepFunction::eval(const Rat& s) const {
  if (!(lo < s) || !(s <= hi)) raise("BadInput", "evaluation outside the domain");
  size_t n = breaks.size();
  size_t lo_i = 0, hi_i = n;
  while (lo_i < hi_i) {   // first break with break.s >= s
    size_t mid = (lo_i + hi_i) / 2;
    if (breaks[mid].s < s) lo_i = mid + 1; else hi_i = mid;
  }
  if (lo_i < n && breaks[lo_i].s == s) return breaks[lo_i].value_at;
  return lo_i == 0 ? base_value : breaks[lo_i - 1].value_after;
}

void QStepFunction::normalize() {
  std::vector<Breakpoint> keep;
  Rat running = base_value;
  for (auto& bp : breaks) {
    if (bp.value_at == running && bp.value_after == running) continue;
    running = bp.value_after;
    keep.push_back(std::move(bp));
  }
  breaks = std::move(keep);
}

bool same_function(QStepFunction f, QStepFunction g) {
  f.normalize();
  g.normalize();
  if (f.lo != g.lo || f.hi != g.hi || f.base_value != g.base_value) return false;
  if (f.breaks.size() != g.breaks.size()) return false;
  for (size_t i = 0; i < f.breaks.size(); ++i) {
    if (f.breaks[i].s != g.breaks[i].s) return false;
    if (f.breaks[i].value_at != g.breaks[i].value_at) return false;
    if (f.breaks[i].value_after != g.breaks[i].value_after) return false;
  }
  return true;
}

QStepFunction step_function_window(const HPolytope& p, const Rat& lo, const Rat& hi,
                                   const SweepLimits& lim) {
  if (lo.sign() < 0 || !(lo < hi))
    raise("BadInput", "window must satisfy 0 <= lo < hi");

  std::vector<QVec> verts = vertices(p);
  std::vector<QVec> box_lo_pts = scaled_vertices(verts, lo);
  std::vector<QVec> window_box = box_lo_pts;
  {
    auto top = scaled_vertices(verts, hi);
    window_box.insert(window_box.end(), top.begin(), top.end());
  }

  Rat base(count_region(build_region(p.dim, alive_after_rows(p, lo), box_lo_pts),
                        lim.max_box_points));

  // tracked rows: every facet with nonzero offset can start or end lifespans
  std::vector<IVec> poly_a;
  std::vector<Rat> poly_b;
  std::vector<bool> poly_front;
  for (const auto& row : p.ineqs) {
    if (row.b.sign() == 0) continue;
    poly_a.push_back(row.a);
    poly_b.push_back(row.b);
    poly_front.push_back(row.b.sign() > 0);
  }

  std::vector<XRow> membership = window_membership_rows(p, lo, hi);

  struct Slab {
    RegionSetup region;
    int owner;
    bool enter;
  };
  std::vector<Slab> slabs;
  for (size_t i = 0; i < poly_a.size(); ++i) {
    std::vector<XRow> rows = membership;
    IVec neg = poly_a[i];
    for (auto& c : neg) c = -c;
    if (poly_front[i]) {
      // entry slab: <a_i, x> > lo * b_i, rounded to the next integer level
      Rat r = lo * poly_b[i];
      Int level = r.floor() + 1;
      rows.push_back({neg, -Rat(level)});
    } else {
      // exit slab: lifespan end at most hi means <a_i, x> >= hi * b_i
      rows.push_back({neg, -(hi * poly_b[i])});
    }
    Slab s;
    s.region = build_region(p.dim, rows, window_box);
    s.owner = static_cast<int>(i);
    s.enter = poly_front[i];
    if (!s.region.infeasible) slabs.push_back(std::move(s));
  }

  bool word_ok = fracs_fit_i64({lo, hi});
  for (const auto& s : slabs)
    word_ok = word_ok && region_fits_i64(s.region) &&
              rows_fit_i64(s.region, poly_a, poly_b);

  if (word_ok) {
    std::vector<Event<long long>> events;
    long long lon = lo.num().get_si(), lod = lo.den().get_si();
    long long hin = hi.num().get_si(), hid = hi.den().get_si();
    for (const auto& s : slabs) {
      auto e = make_enumerator<long long>(s.region, poly_a, poly_b, poly_front);
      if (s.enter)
        e.run([&](const std::vector<long long>& dots, const std::vector<long long>&) {
          enter_leaf(e, dots, s.owner, lon, lod, events);
        }, lim.max_box_points);
      else
        e.run([&](const std::vector<long long>& dots, const std::vector<long long>&) {
          leave_leaf(e, dots, s.owner, lon, lod, hin, hid, events);
        }, lim.max_box_points);
    }
    return assemble(std::move(events), base, lo, hi);
  }

  std::vector<Event<Int>> events;
  Int lon = lo.num(), lod = lo.den(), hin = hi.num(), hid = hi.den();
  for (const auto& s : slabs) {
    auto e = make_enumerator<Int>(s.region, poly_a, poly_b, poly_front);
    if (s.enter)
      e.run([&](const std::vector<Int>& dots, const std::vector<Int>&) {
        enter_leaf(e, dots, s.owner, lon, lod, events);
      }, lim.max_box_points);
    else
      e.run([&](const std::vector<Int>& dots, const std::vector<Int>&) {
        leave_leaf(e, dots, s.owner, lon, lod, hin, hid, events);
      }, lim.max_box_points);
  }
  return assemble(std::move(events), base, lo, hi);
}

QStepFunction step_function(const HPolytope& p, const Rat& s_max, const SweepLimits& lim) {
  return step_function_window(p, Rat(0), s_max, lim);
}

Int count_points(const HPolytope& p, const Rat& s, const SweepLimits& lim) {
  if (s.sign() < 0) raise("BadInput", "dilation parameter must be nonnegative");
  std::vector<QVec> box_pts = scaled_vertices(vertices(p), s);
  std::vector<XRow> raw;
  for (const auto& row : p.ineqs) raw.push_back({row.a, s * row.b});
  return count_region(build_region(p.dim, raw, box_pts), lim.max_box_points);
}

std::vector<JumpReport> jumps(const QStepFunction& f) {
  std::vector<JumpReport> out;
  out.reserve(f.breaks.size());
  for (size_t i = 0; i < f.breaks.size(); ++i) {
    const auto& bp = f.breaks[i];
    JumpReport r;
    r.s0 = bp.s;
    r.left_jump = bp.value_at - f.value_before(i);
    r.right_jump = bp.value_at - bp.value_after;
    r.entering = f.has_event_counts ? bp.entering : -1;
    r.leaving = f.has_event_counts ? bp.leaving : -1;
    out.push_back(std::move(r));
  }
  return out;
}

Int facet_point_count(const HPolytope& p, const Rat& s0, FacetKind side,
                      const SweepLimits& lim) {
  if (s0.sign() < 0) raise("BadInput", "dilation parameter must be nonnegative");
  auto faces = faces_report(p);
  // A lattice point can only land on a dilated facet whose dilated offset is
  // an integer, since <a_i, x> always is.
  std::vector<size_t> active;
  std::vector<Rat> target;
  for (const auto& fi : faces) {
    if (fi.kind != side || fi.face_dim != p.dim - 1) continue;
    Rat rhs = s0 * p.ineqs[fi.index].b;
    if (!rhs.is_integer()) continue;
    active.push_back(fi.index);
    target.push_back(rhs);
  }
  if (active.empty()) return 0;

  std::vector<QVec> box_pts = scaled_vertices(vertices(p), s0);
  std::vector<XRow> membership;
  for (const auto& row : p.ineqs) membership.push_back({row.a, s0 * row.b});

  std::vector<IVec> poly_a;
  std::vector<Rat> poly_b;
  std::vector<bool> poly_front;
  for (size_t t = 0; t < active.size(); ++t) {
    poly_a.push_back(p.ineqs[active[t]].a);
    poly_b.push_back(Rat(1));   // offsets unused; the leaf compares raw forms
    poly_front.push_back(true);
  }

  long n = 0;
  for (size_t t = 0; t < active.size(); ++t) {
    std::vector<XRow> rows = membership;
    IVec neg = poly_a[t];
    for (auto& c : neg) c = -c;
    rows.push_back({neg, -target[t]});    // pins <a_t, x> = s0 * b_t
    RegionSetup region = build_region(p.dim, rows, box_pts);
    if (region.infeasible) continue;

    if (region_fits_i64(region) && rows_fit_i64(region, poly_a, poly_b) &&
        fracs_fit_i64(target)) {
      auto e = make_enumerator<long long>(region, poly_a, poly_b, poly_front);
      std::vector<long long> tgt;
      for (const auto& v : target) tgt.push_back(v.num().get_si());
      e.run([&](const std::vector<long long>& dots, const std::vector<long long>&) {
        for (size_t i = 0; i < t; ++i)
          if (dots[i] == tgt[i]) return;   // already counted from an earlier facet
        if (dots[t] == tgt[t]) ++n;
      }, lim.max_box_points);
    } else {
      auto e = make_enumerator<Int>(region, poly_a, poly_b, poly_front);
      e.run([&](const std::vector<Int>& dots, const std::vector<Int>&) {
        for (size_t i = 0; i < t; ++i)
          if (dots[i] == target[i].num()) return;
        if (dots[t] == target[t].num()) ++n;
      }, lim.max_box_points);
    }
  }
  return Int(n);
}

QStepFunction lift_at(const QStepFunction& f, const Rat& s0) {
  size_t idx = f.breaks.size();
  for (size_t i = 0; i < f.breaks.size(); ++i)
    if (f.breaks[i].s == s0) { idx = i; break; }
  if (idx == f.breaks.size())
    raise("NotABreakpoint", "no breakpoint at s = " + s0.str());
  QStepFunction g = f;
  g.has_event_counts = false;
  Rat shift = g.breaks[idx].value_at - g.breaks[idx].value_after;
  g.breaks[idx].value_after = g.breaks[idx].value_at;
  for (size_t i = idx + 1; i < g.breaks.size(); ++i) {
    g.breaks[i].value_at += shift;
    g.breaks[i].value_after += shift;
  }
  for (auto& bp : g.breaks) { bp.entering = -1; bp.leaving = -1; }
  g.normalize();
  return g;
}

QStepFunction lifting(const QStepFunction& f) {
  QStepFunction g = f;
  g.has_event_counts = false;
  Rat shift(0);
  for (auto& bp : g.breaks) {
    bp.value_at += shift;
    shift += bp.value_at - (bp.value_after + shift);
    bp.value_after = bp.value_at;
    bp.entering = -1;
    bp.leaving = -1;
  }
  g.normalize();
  return g;
}

}  // namespace ehrkit
