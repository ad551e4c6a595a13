#include "ehrkit/polytope.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace ehrkit {

namespace {

template <typename F>
void for_each_subset(int n, int k, F&& f) {
  if (k > n || k <= 0) return;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    f(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

int rank_q(QMat m) {
  int rows = static_cast<int>(m.size());
  int cols = rows ? static_cast<int>(m[0].size()) : 0;
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int piv = -1;
    for (int i = r; i < rows; ++i)
      if (!m[i][c].is_zero()) { piv = i; break; }
    if (piv < 0) continue;
    std::swap(m[piv], m[r]);
    for (int i = r + 1; i < rows; ++i) {
      if (m[i][c].is_zero()) continue;
      Rat f = m[i][c] / m[r][c];
      for (int j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    ++r;
  }
  return r;
}

int affine_rank(const std::vector<QVec>& pts) {
  if (pts.empty()) return -1;
  QMat diffs;
  for (size_t i = 1; i < pts.size(); ++i) {
    QVec d(pts[i].size());
    for (size_t j = 0; j < d.size(); ++j) d[j] = pts[i][j] - pts[0][j];
    diffs.push_back(std::move(d));
  }
  if (diffs.empty()) return 0;
  return rank_q(std::move(diffs));
}

bool lex_less(const QVec& a, const QVec& b) {
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return false;
}

// Basic solutions of d chosen rows treated as equalities, kept when they
// satisfy the whole system.
std::vector<QVec> basic_feasible_points(int dim, const std::vector<Ineq>& rows) {
  std::vector<QVec> found;
  int n = static_cast<int>(rows.size());
  for_each_subset(n, dim, [&](const std::vector<int>& idx) {
    QMat a(dim, QVec(dim));
    QVec b(dim);
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < dim; ++j) a[i][j] = Rat(rows[idx[i]].a[j]);
      b[i] = rows[idx[i]].b;
    }
    SolveResult s = solve_exact(a, b);
    if (s.kind != SolveResult::Kind::Unique) return;
    for (const auto& row : rows) {
      if (dot(row.a, s.x) > row.b) return;
    }
    found.push_back(std::move(s.x));
  });
  std::sort(found.begin(), found.end(), lex_less);
  found.erase(std::unique(found.begin(), found.end()), found.end());
  return found;
}

bool is_zero_point(const QVec& x) {
  for (const auto& c : x)
    if (!c.is_zero()) return false;
  return true;
}

// The recession cone {x : <a_i, x> <= 0} is trivial exactly when its section
// with the unit box has no nonzero vertex.
bool recession_cone_trivial(int dim, const std::vector<Ineq>& rows) {
  std::vector<Ineq> cone;
  cone.reserve(rows.size() + 2 * dim);
  for (const auto& r : rows) cone.push_back({r.a, Rat(0)});
  for (int i = 0; i < dim; ++i) {
    IVec e(dim, 0);
    e[i] = 1;
    cone.push_back({e, Rat(1)});
    e[i] = -1;
    cone.push_back({e, Rat(1)});
  }
  for (const auto& v : basic_feasible_points(dim, cone)) {
    if (!is_zero_point(v)) return false;
  }
  return true;
}

std::vector<QVec> project_drop(const std::vector<QVec>& pts, int coord) {
  std::vector<QVec> out;
  out.reserve(pts.size());
  for (const auto& p : pts) {
    QVec q;
    q.reserve(p.size() - 1);
    for (size_t j = 0; j < p.size(); ++j)
      if (static_cast<int>(j) != coord) q.push_back(p[j]);
    out.push_back(std::move(q));
  }
  return out;
}

IVec clear_denominators(const QVec& v) {
  Int l = 1;
  for (const auto& c : v) {
    Int t;
    mpz_lcm(t.get_mpz_t(), l.get_mpz_t(), c.den().get_mpz_t());
    l = t;
  }
  IVec out;
  out.reserve(v.size());
  for (const auto& c : v) out.push_back(c.num() * (l / c.den()));
  return out;
}

}  // namespace

HPolytope validate(int dim, std::vector<Ineq> raw) {
  if (dim < 1) raise("DimensionMismatch", "dimension must be positive");
  std::vector<Ineq> rows;
  std::map<IVec, size_t> seen;
  for (auto& r : raw) {
    if (static_cast<int>(r.a.size()) != dim)
      raise("DimensionMismatch", "normal length does not match dimension");
    if (gcd_vec(r.a) == 0) raise("ZeroNormal", "zero normal vector");
    auto [prim, g] = primitivize(r.a);
    Rat b = r.b / Rat(g);
    auto it = seen.find(prim);
    if (it != seen.end()) {
      rows[it->second].b = rat_min(rows[it->second].b, b);
    } else {
      seen.emplace(prim, rows.size());
      rows.push_back({std::move(prim), std::move(b)});
    }
  }
  if (!recession_cone_trivial(dim, rows))
    raise("UnboundedPolytope", "facet normals do not positively span the space");
  if (basic_feasible_points(dim, rows).empty())
    raise("EmptyPolytope", "inequality system has no solution");
  return HPolytope{dim, std::move(rows)};
}

HPolytope translate(const HPolytope& p, const QVec& v) {
  if (static_cast<int>(v.size()) != p.dim)
    raise("DimensionMismatch", "translation vector length does not match");
  HPolytope out = p;
  for (auto& r : out.ineqs) r.b += dot(r.a, v);
  return out;
}

std::vector<QVec> vertices(const HPolytope& p) {
  return basic_feasible_points(p.dim, p.ineqs);
}

std::vector<FaceInfo> faces_report(const HPolytope& p) {
  std::vector<QVec> verts = vertices(p);
  std::vector<FaceInfo> out;
  out.reserve(p.ineqs.size());
  for (size_t i = 0; i < p.ineqs.size(); ++i) {
    const auto& row = p.ineqs[i];
    FaceInfo info;
    info.index = static_cast<int>(i);
    int sg = row.b.sign();
    info.kind = sg > 0 ? FacetKind::Front : sg < 0 ? FacetKind::Back : FacetKind::Neutral;
    std::vector<QVec> on;
    for (const auto& v : verts)
      if (dot(row.a, v) == row.b) on.push_back(v);
    info.face_dim = affine_rank(on);
    out.push_back(std::move(info));
  }
  return out;
}

Rat hull_volume(std::vector<QVec> pts, int dim) {
  std::sort(pts.begin(), pts.end(), lex_less);
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (dim == 0) return Rat(1);
  if (affine_rank(pts) < dim) return Rat(0);
  if (dim == 1) {
    Rat mn = pts.front()[0], mx = pts.front()[0];
    for (const auto& p : pts) {
      mn = rat_min(mn, p[0]);
      mx = rat_max(mx, p[0]);
    }
    return mx - mn;
  }

  const QVec& o = pts.front();   // lex-minimal apex of the vertex fan
  int n = static_cast<int>(pts.size());

  struct FacetData {
    std::vector<QVec> on;
  };
  std::map<std::pair<IVec, Rat>, FacetData> facets;

  for_each_subset(n, dim, [&](const std::vector<int>& idx) {
    QMat diffs;
    for (int i = 1; i < dim; ++i) {
      QVec d(dim);
      for (int j = 0; j < dim; ++j) d[j] = pts[idx[i]][j] - pts[idx[0]][j];
      diffs.push_back(std::move(d));
    }
    // normal = integer kernel direction of the difference matrix
    QMat a = diffs;
    QVec zero(diffs.size(), Rat(0));
    // Solve for the hyperplane through the subset: need rank dim-1.
    if (rank_q(diffs) != dim - 1) return;
    // Find a rational kernel vector by Gaussian elimination on a copy.
    QMat m = a;
    int rows = static_cast<int>(m.size());
    std::vector<int> pivot_of_col(dim, -1);
    int r = 0;
    for (int c = 0; c < dim && r < rows; ++c) {
      int piv = -1;
      for (int i = r; i < rows; ++i)
        if (!m[i][c].is_zero()) { piv = i; break; }
      if (piv < 0) continue;
      std::swap(m[piv], m[r]);
      Rat inv = Rat(1) / m[r][c];
      for (int j = 0; j < dim; ++j) m[r][j] *= inv;
      for (int i = 0; i < rows; ++i) {
        if (i == r || m[i][c].is_zero()) continue;
        Rat f = m[i][c];
        for (int j = 0; j < dim; ++j) m[i][j] -= f * m[r][j];
      }
      pivot_of_col[c] = r;
      ++r;
    }
    int free_col = -1;
    for (int c = 0; c < dim; ++c)
      if (pivot_of_col[c] < 0) { free_col = c; break; }
    if (free_col < 0) return;
    QVec nq(dim, Rat(0));
    nq[free_col] = Rat(1);
    for (int c = 0; c < dim; ++c) {
      int pr = pivot_of_col[c];
      if (pr >= 0) nq[c] = -m[pr][free_col];
    }
    IVec nz = clear_denominators(nq);
    auto [nrm, g] = primitivize(nz);
    Rat c0 = dot(nrm, pts[idx[0]]);
    // orient toward the <= side
    bool any_above = false, any_below = false;
    for (const auto& p : pts) {
      Rat v = dot(nrm, p);
      if (v > c0) any_above = true;
      if (v < c0) any_below = true;
    }
    if (any_above && any_below) return;
    if (any_above) {
      for (auto& e : nrm) e = -e;
      c0 = -c0;
    }
    auto key = std::make_pair(nrm, c0);
    auto& data = facets[key];
    if (data.on.empty()) {
      for (const auto& p : pts)
        if (dot(nrm, p) == c0) data.on.push_back(p);
    }
  });

  Rat total(0);
  for (const auto& [key, data] : facets) {
    const IVec& nrm = key.first;
    const Rat& c0 = key.second;
    Rat h = c0 - dot(nrm, o);
    if (h.is_zero()) continue;   // apex lies on this facet
    int r = 0;
    while (nrm[r] == 0) ++r;
    Rat shadow = hull_volume(project_drop(data.on, r), dim - 1);
    total += h.abs() * shadow / (Rat(dim) * Rat(nrm[r]).abs());
  }
  return total;
}

Rat volume(const HPolytope& p) {
  std::vector<QVec> verts = vertices(p);
  if (affine_rank(verts) < p.dim) return Rat(0);
  const QVec& o = verts.front();
  Rat total(0);
  for (const auto& row : p.ineqs) {
    Rat ho = row.b - dot(row.a, o);
    if (ho.is_zero()) continue;
    std::vector<QVec> on;
    for (const auto& v : verts)
      if (dot(row.a, v) == row.b) on.push_back(v);
    if (static_cast<int>(on.size()) < p.dim) continue;
    int r = 0;
    while (row.a[r] == 0) ++r;
    Rat shadow = hull_volume(project_drop(on, r), p.dim - 1);
    total += ho.abs() * shadow / (Rat(p.dim) * Rat(row.a[r]).abs());
  }
  return total;
}

bool ppyr_membership(const HPolytope& p, const QVec& x, const Rat& s) {
  if (s.sign() < 0) raise("BadInput", "dilation parameter must be nonnegative");
  if (static_cast<int>(x.size()) != p.dim)
    raise("DimensionMismatch", "point length does not match dimension");
  // lifespan interval of x intersected with [0, s]
  Rat lo(0);
  bool has_hi = false;
  Rat hi;
  for (const auto& row : p.ineqs) {
    Rat v = dot(row.a, x);
    int sb = row.b.sign();
    if (sb == 0) {
      if (v.sign() > 0) return false;
    } else if (sb > 0) {
      if (v.sign() > 0) lo = rat_max(lo, v / row.b);
    } else {
      Rat r = v / row.b;
      if (!has_hi || r < hi) {
        hi = r;
        has_hi = true;
      }
    }
  }
  if (has_hi && hi < lo) return false;
  return lo <= (has_hi ? rat_min(hi, s) : s);
}

PpyrVolumes ppyr_volume(const HPolytope& p) {
  std::vector<QVec> verts = vertices(p);
  if (affine_rank(verts) < p.dim)
    raise("NotFullDimensional", "pseudopyramid volume needs a full-dimensional base");

  Rat via_dec = volume(p);
  auto faces = faces_report(p);
  for (const auto& f : faces) {
    if (f.kind != FacetKind::Back || f.face_dim != p.dim - 1) continue;
    HPolytope facet = facet_polytope(p, f.index);
    via_dec += p.ineqs[f.index].b.abs() * rvol(facet) / Rat(p.dim);
  }

  std::vector<QVec> with_origin = verts;
  with_origin.push_back(QVec(p.dim, Rat(0)));
  Rat via_hull = hull_volume(std::move(with_origin), p.dim);
  return {via_dec, via_hull};
}

AffineHull affine_hull(const HPolytope& p) {
  std::vector<QVec> verts = vertices(p);
  IMat tight;
  for (const auto& row : p.ineqs) {
    bool all_eq = true;
    for (const auto& v : verts)
      if (dot(row.a, v) != row.b) { all_eq = false; break; }
    if (all_eq) tight.push_back(row.a);
  }
  AffineHull hull;
  hull.point = verts.front();
  if (tight.empty()) {
    for (int i = 0; i < p.dim; ++i) {
      IVec e(p.dim, 0);
      e[i] = 1;
      hull.lattice_dirs.push_back(std::move(e));
    }
    hull.hull_dim = p.dim;
    return hull;
  }
  hull.lattice_dirs = kernel_basis_int(tight);
  hull.hull_dim = static_cast<int>(hull.lattice_dirs.size());
  return hull;
}

Rat rvol(const HPolytope& p) {
  AffineHull hull = affine_hull(p);
  int l = hull.hull_dim;
  if (l == 0) return Rat(1);
  if (l == p.dim) return volume(p);

  // Columns of D span the direction lattice; saturation makes its HNF image
  // exactly Z^l x {0}, so U carries the hull onto coordinate position.
  IMat d_cols(p.dim, IVec(l, 0));
  for (int j = 0; j < l; ++j)
    for (int i = 0; i < p.dim; ++i) d_cols[i][j] = hull.lattice_dirs[j][i];
  HnfResult res = hnf(d_cols);
  for (int i = 0; i < l; ++i)
    for (int j = 0; j < l; ++j)
      if (res.h[i][j] != (i == j ? 1 : 0))
        raise("Internal", "direction lattice basis is not saturated");
  IMat uinv = inverse_unimodular(res.u);

  std::vector<Ineq> rows;
  for (const auto& row : p.ineqs) {
    IVec g(l, 0);
    bool nonzero = false;
    for (int j = 0; j < l; ++j) {
      Int s = 0;
      for (int k = 0; k < p.dim; ++k) s += row.a[k] * uinv[k][j];
      if (s != 0) nonzero = true;
      g[j] = s;
    }
    Rat rhs = row.b - dot(row.a, hull.point);
    if (!nonzero) {
      if (rhs.sign() < 0) raise("Internal", "inconsistent constant row in hull chart");
      continue;
    }
    rows.push_back({std::move(g), std::move(rhs)});
  }
  return volume(validate(l, std::move(rows)));
}

HPolytope facet_polytope(const HPolytope& p, int facet_index) {
  if (facet_index < 0 || facet_index >= static_cast<int>(p.ineqs.size()))
    raise("BadInput", "facet index out of range");
  std::vector<Ineq> rows = p.ineqs;
  IVec neg = p.ineqs[facet_index].a;
  for (auto& e : neg) e = -e;
  rows.push_back({std::move(neg), -p.ineqs[facet_index].b});
  return validate(p.dim, std::move(rows));
}

FlattenResult flatten_codim1(const HPolytope& p) {
  if (p.dim < 2)
    raise("NotCodimensionOne", "flattening needs ambient dimension at least 2");
  AffineHull hull = affine_hull(p);
  if (hull.hull_dim != p.dim - 1)
    raise("NotCodimensionOne", "polytope hull is not a hyperplane");

  IMat dirs = hull.lattice_dirs;
  std::vector<IVec> ortho = kernel_basis_int(dirs);
  if (ortho.size() != 1) raise("Internal", "hyperplane normal not unique");
  IVec a = ortho[0];
  for (const auto& e : a) {
    if (e == 0) continue;
    if (e < 0)
      for (auto& x : a) x = -x;
    break;
  }
  Rat b = dot(a, hull.point);

  FlattenResult out;
  out.normal = a;
  out.offset = b;
  out.transform = complete_primitive_to_basis(a);
  out.inverse = inverse_unimodular(out.transform);

  std::vector<Ineq> rows;
  for (const auto& row : p.ineqs) {
    IVec g(p.dim, 0);
    for (int j = 0; j < p.dim; ++j) {
      Int s = 0;
      for (int k = 0; k < p.dim; ++k) s += row.a[k] * out.inverse[k][j];
      g[j] = s;
    }
    Rat rhs = row.b - Rat(g[p.dim - 1]) * b;
    IVec gflat(g.begin(), g.end() - 1);
    if (gcd_vec(gflat) == 0) {
      if (rhs.sign() < 0) raise("Internal", "inconsistent constant row in flattening");
      continue;
    }
    rows.push_back({std::move(gflat), std::move(rhs)});
  }
  out.flat = validate(p.dim - 1, std::move(rows));
  return out;
}

GridMap flatten_translate(const FlattenResult& f, const IVec& w) {
  int d = static_cast<int>(f.transform.size());
  if (static_cast<int>(w.size()) != d)
    raise("DimensionMismatch", "translate length does not match dimension");
  IVec img = matvec(f.transform, w);
  GridMap out;
  out.w_flat = IVec(img.begin(), img.end() - 1);
  out.denom = f.offset + Rat(img[d - 1]);
  return out;
}

std::optional<Rat> flatten_param(const FlattenResult& f, const IVec& w, const Int& m) {
  GridMap g = flatten_translate(f, w);
  if (g.denom.is_zero()) return std::nullopt;
  return Rat(m) / g.denom;
}

}  // namespace ehrkit
