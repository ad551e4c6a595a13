#pragma once

#include <optional>
#include <vector>

#include "ehrkit/linalg.hpp"

namespace ehrkit {

/**
 * Rational polytope in facet description: the set of x with <a_i, x> <= b_i
 * for every row. Normals are primitive integer vectors, right-hand sides are
 * rationals. Instances come out of validate(), which guarantees the set is
 * nonempty and bounded and that no direction appears twice.
 */
struct Ineq {
  IVec a;
  Rat b;
};

struct HPolytope {
  int dim = 0;
  std::vector<Ineq> ineqs;
};

// Normalizes, deduplicates (keeping the smaller right-hand side per
// direction), and checks the system. Throws Error with code ZeroNormal,
// UnboundedPolytope, or EmptyPolytope.
HPolytope validate(int dim, std::vector<Ineq> raw);

// P + v. Right-hand sides shift by <a_i, v>; normals are unchanged.
HPolytope translate(const HPolytope& p, const QVec& v);

// All vertices, deduplicated, sorted lexicographically.
std::vector<QVec> vertices(const HPolytope& p);

// Sign of the right-hand side decides on which side of the origin the
// bounding hyperplane sits: Front rows (b > 0) move away from the origin as
// the polytope is dilated, Back rows (b < 0) move toward it.
enum class FacetKind { Front, Back, Neutral };

struct FaceInfo {
  int index = 0;
  FacetKind kind = FacetKind::Neutral;
  int face_dim = -1;   // dimension of the face the row supports, -1 if empty
};
std::vector<FaceInfo> faces_report(const HPolytope& p);

// Euclidean volume of the convex hull of a point set in R^dim; 0 when the
// points do not span. Exact.
Rat hull_volume(std::vector<QVec> pts, int dim);

// Euclidean volume of P; 0 when P is not full-dimensional.
Rat volume(const HPolytope& p);

// Membership x in s * ppyr(P), where ppyr(P) = conv(P united with 0),
// decided through the lifespan interval of x rather than a hull computation.
bool ppyr_membership(const HPolytope& p, const QVec& x, const Rat& s);

// Volume of ppyr(P) computed two independent ways: summing pyramid slabs
// over back facets, and as a hull volume over vertices(P) plus the origin.
// Their equality is a theorem, and the acceptance harness checks it.
struct PpyrVolumes {
  Rat via_decomposition;
  Rat via_hull;
};
PpyrVolumes ppyr_volume(const HPolytope& p);

struct AffineHull {
  QVec point;                     // a point of P on the hull
  std::vector<IVec> lattice_dirs; // saturated basis of the direction lattice
  int hull_dim = 0;
};
AffineHull affine_hull(const HPolytope& p);

// Volume of P measured inside its own affine hull, normalized so that a
// fundamental cell of the induced lattice has measure one. Points give 1;
// full-dimensional polytopes give their Euclidean volume.
Rat rvol(const HPolytope& p);

// The facet supported by row facet_index, as a polytope in the same space.
HPolytope facet_polytope(const HPolytope& p, int facet_index);

/**
 * A polytope whose affine hull is a hyperplane {<a, x> = b} can be mapped by
 * a unimodular transform onto the slab {x_d = b} and then read off as a
 * (d-1)-dimensional polytope. Lattice point counts of dilates transfer
 * exactly along this map, but only on the parameter grid s = m / (b + <a,w>)
 * once the polytope is translated by w; off the grid the dilate misses the
 * integer lattice entirely.
 */
struct FlattenResult {
  HPolytope flat;   // the (d-1)-dimensional image
  IVec normal;      // primitive a, first nonzero entry positive
  Rat offset;       // b
  IMat transform;   // unimodular A with last row a
  IMat inverse;     // A^{-1}
};
FlattenResult flatten_codim1(const HPolytope& p);

// Translate correspondence: P + w flattens to flat + w_flat, with parameter
// grid denominator b + <a, w>. A zero denominator means the grid is frozen:
// either every positive s works (m = 0) or none does.
struct GridMap {
  IVec w_flat;
  Rat denom;
};
GridMap flatten_translate(const FlattenResult& f, const IVec& w);

// Grid parameter s = m / denom for the translate w; nullopt when denom = 0.
std::optional<Rat> flatten_param(const FlattenResult& f, const IVec& w, const Int& m);

}  // namespace ehrkit
