#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ehrkit/reconstruct.hpp"

namespace ehrkit {

// Random bounded full-dimensional instances for the property suite.
struct InstanceSpec {
  int dim = 2;
  long normal_bound = 4;   // facet normal entries drawn from [-bound, bound]
  long den_bound = 6;      // right-hand side denominators up to this
  int count = 20;
  std::uint64_t seed = 1;
};

// Rejection sampling over random inequality systems; alternate instances
// draw every offset positive, which places the origin in the interior.
std::vector<HPolytope> generate_instances(const InstanceSpec& spec);

// An integer direction w such that the origin lies outside P + k*w for every
// k >= 1. Full-dimensional polytopes get a scaled barycenter direction;
// codimension-1 polytopes can use their own plane normal. Raises
// BadCodimension for anything flatter.
IVec find_translation_witness(const HPolytope& p);

/**
 * Checks that the counting functions of P + k*w for k = 0..k_max are
 * pairwise distinct. Full-dimensional translates are separated by the volume
 * of conv(P + k*w united with 0), codimension-1 translates by their plane
 * offset magnitude; ties fall back to locating an explicit parameter where
 * the two functions differ, doubling the search window while they agree.
 * An integer witness parameter is reported as a failure in itself, since
 * integer dilates of integer translates must agree.
 */
struct TranslateCheck {
  struct PairWitness {
    long i = 0;
    long j = 0;
    std::string how;                // "quantity" or "function"
    std::optional<Rat> witness_s;   // parameter separating the pair
    bool distinct = false;
  };
  IVec w;
  long k_max = 0;
  bool all_distinct = false;
  std::vector<Rat> quantities;      // per translate: the separating quantity
  std::vector<PairWitness> pairs;
};

TranslateCheck check_translates_distinct(const HPolytope& p, const IVec& w,
                                         long k_max, const Rat& s_window,
                                         const SweepLimits& lim = {});

/**
 * Observed convergence of count / s^hull_dim toward the relative volume
 * along admissible parameters, those whose dilated affine hull meets the
 * lattice at all. Raises EmptyGrid when no listed parameter is admissible.
 */
struct RvolLimitReport {
  Rat rvol_value;
  int hull_dim = 0;
  struct Sample {
    Rat s;
    Int count;
    Rat ratio;       // count / s^hull_dim
    Rat deviation;   // |ratio - rvol_value|
  };
  std::vector<Sample> samples;
};

RvolLimitReport rvol_limit_check(const HPolytope& p, const QVec& v,
                                 const std::vector<Rat>& s_list,
                                 const SweepLimits& lim = {});

// Embeds a (d-1)-dimensional polytope into d-space as a codimension-1
// polytope lying on {<a, x> = offset}, where a is the last row of the
// unimodular transform.
HPolytope pullback_codim1(const HPolytope& flat, const IMat& transform,
                          const Rat& offset);

/**
 * Oracle for the flattened image of a codimension-1 polytope. A query for a
 * flat translate w' is answered by lifting it to the full space with a large
 * last coordinate t, chosen so the admissible parameter grid of spacing
 * 1 / (offset + t) puts at least `oversample` samples into the window;
 * grid_spacing advertises that grid. Queries are charged to both this
 * oracle's budget and the wrapped one's.
 */
class GridRestrictedOracle : public EhrhartOracle {
 public:
  // the default oversample resolves the 1/16-cycle separation that the
  // phase-shifted window plan guarantees between opposite facet grids
  GridRestrictedOracle(EhrhartOracle& base, IMat transform, IMat inverse,
                       Rat offset, long oversample = 64);

  int dim() const override { return base_.dim() - 1; }
  std::optional<Rat> grid_spacing(const IVec& w, const Rat& lo,
                                  const Rat& hi) const override;

 protected:
  QStepFunction do_query(const IVec& w, const Rat& lo, const Rat& hi) override;

 private:
  Int t_last(const Rat& lo, const Rat& hi) const;

  EhrhartOracle& base_;
  IMat transform_;
  IMat inverse_;
  Rat offset_;
  long oversample_;
};

/**
 * End-to-end recovery of a codimension-1 polytope from counting queries
 * alone: probe translates to identify the carrying hyperplane, flatten along
 * it, reconstruct the flat polytope's right-hand sides on the restricted
 * parameter grid, and lift the result back. Facet directions of the flat
 * polytope are supplied from the hidden description, mirroring the
 * full-dimensional task where candidate directions are given; everything
 * else is measured through the oracle. Raises NotCodimensionOne when probes
 * show full-dimensional behaviour and ProbeFailed when they are unusable.
 */
struct Codim1Demo {
  IVec plane_normal;
  Rat plane_offset;
  std::vector<IVec> flat_candidates;
  ReconstructionReport flat_report;
  std::optional<HPolytope> recovered;   // reassembled in the original space
  bool verified = false;                // fresh full-space windows agree
  long long oracle_calls = 0;
  Rat oracle_length = Rat(0);
};

Codim1Demo codim1_reconstruction_demo(const HPolytope& hidden,
                                      const ReconstructConfig& config = {},
                                      const SweepLimits& lim = {});

// One named property check on one instance.
struct SuiteCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SuiteInstanceResult {
  HPolytope polytope;
  std::vector<SuiteCheck> checks;
  bool passed = false;
};

struct SuiteResult {
  std::vector<SuiteInstanceResult> instances;
  int passed_count = 0;
  bool all_passed = false;
};

/**
 * Property suite over a batch of instances: jump sizes against independent
 * facet point counts, removing drops against brute-force counts over
 * conv(P united 0), the two pseudopyramid volume computations against each
 * other, monotonicity, translate variance, and invariance of integer dilate
 * counts under integer translates.
 */
SuiteResult run_suite(const std::vector<HPolytope>& instances, const Rat& s_max,
                      const SweepLimits& lim = {});

}  // namespace ehrkit
