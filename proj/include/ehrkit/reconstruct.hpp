#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ehrkit/stepfn.hpp"

namespace ehrkit {

/**
 * Metered access to the counting functions of integer translates of a
 * polytope that the caller cannot otherwise see. Every query is charged its
 * window length; exceeding the length budget raises Error("OracleBudget").
 *
 * A restricted oracle may expose only a sampling grid of parameters (see
 * grid_spacing); exact oracles return genuine restrictions of the counting
 * function.
 */
class EhrhartOracle {
 public:
  virtual ~EhrhartOracle() = default;

  QStepFunction query(const IVec& w, const Rat& lo, const Rat& hi);

  long long query_count() const { return calls_; }
  const Rat& length_used() const { return length_; }
  void set_length_budget(const Rat& cap) { budget_ = cap; }
  const Rat& length_budget() const { return budget_; }

  virtual int dim() const = 0;

  // Spacing of the parameter grid on which query results are faithful, for
  // the given translate and window; nullopt means the oracle is exact.
  virtual std::optional<Rat> grid_spacing(const IVec& w, const Rat& lo,
                                          const Rat& hi) const {
    (void)w; (void)lo; (void)hi;
    return std::nullopt;
  }

 protected:
  virtual QStepFunction do_query(const IVec& w, const Rat& lo, const Rat& hi) = 0;

 private:
  long long calls_ = 0;
  Rat length_ = Rat(0);
  Rat budget_ = Rat(500);
};

class HiddenPolytopeOracle : public EhrhartOracle {
 public:
  explicit HiddenPolytopeOracle(HPolytope p, SweepLimits lim = {})
      : p_(std::move(p)), lim_(lim) {}
  int dim() const override { return p_.dim; }
  const HPolytope& hidden() const { return p_; }

 protected:
  QStepFunction do_query(const IVec& w, const Rat& lo, const Rat& hi) override;

 private:
  HPolytope p_;
  SweepLimits lim_;
};

struct ReconstructConfig {
  std::vector<int> schedule = {8, 12, 16, 24, 32, 48, 64};
  std::vector<int> extensions = {96, 120, 128, 192, 240};
  int max_rounds = 4;             // pass 0 uses the base schedule only
  Rat theta = Rat(1, 100);        // facet test threshold on V_k / k^(d-1)
  Rat ratio_band = Rat(2);        // two-jump windows must stay within this ratio
  Int max_den = 64;               // denominator cap for right-hand sides
  Rat b_box = Rat(16);            // initial half-width of the rhs search box
  Rat probe_s = Rat(12);          // initial probe window (0, probe_s]
  Rat resid_abs = Rat(2);         // cleaning residual tolerance, constant part
  Rat resid_rel = Rat(4);         // cleaning residual tolerance, growth part
  int verify_windows = 8;
  std::uint64_t seed = 1729;
  long w_search_radius = 6;       // max-norm bound for the separating vector
  SweepLimits sweep;              // enumeration budget for local counting
};

/**
 * Window geometry for one stage. With a_1 the stage normal and w0 the chosen
 * separating translate, the windows (alpha(k), alpha(k) + eps_k) isolate the
 * grid of the stage facet: inside them the only left-discontinuities of the
 * translate's counting function come from facets already known (cleanable)
 * or from the stage direction itself, for all but finitely many k.
 */
struct WindowPlan {
  IVec w0;
  Int tau;
  Int t_scale;        // T = <a_1, w0> = tau * |a_1|^2
  Rat eps;
  Rat eps_prime;
  Rat eps0;
  Rat phase;          // fractional shift of every window, set for grid oracles
  Rat alpha(long k) const;        // k + phase + eps / (eps_prime * k)
  Rat window_len(long k) const;   // eps0 / k
};

// `variant` draws a different separating vector and stretch, so retries see
// grids that cannot all stay aligned with one impostor offset. Directions in
// `avoid_normals` (facets already recovered) must not share their pairing
// with the stage scale T, or their predicted jumps would sit on top of every
// jump of the target.
WindowPlan choose_w0(const std::vector<IVec>& suffix_normals,
                     const ReconstructConfig& config, int variant = 0,
                     const std::vector<IVec>& avoid_normals = {});

// A left-discontinuity seen in a window. Exact oracles pin its position
// (s_lo == s_hi); grid-restricted oracles only bracket it between
// consecutive grid points (s_lo < position <= s_hi).
struct Discontinuity {
  Rat s_lo;
  Rat s_hi;
  Int jump;
};

struct WindowObservation {
  long k = 0;
  enum class Cls { Good, NotSoGood, Bad } cls = Cls::Bad;
  // Why a window was discarded. Empty windows still count as evidence (the
  // direction produced no jumps there); the other kinds mean the window was
  // corrupted and carries no usable signal.
  enum class BadWhy { None, Empty, NoGrid, Overlap, Drop, Uneven, Crowded } why =
      BadWhy::None;
  std::vector<Discontinuity> discs;
  Int v_total = 0;                // summed jumps of the surviving discontinuities
  std::string note;
};

// A facet already recovered, used to predict and remove its staircase
// contribution from later windows.
struct KnownFacet {
  IVec a;
  Rat b;
  Rat gamma;   // relative-volume estimate driving the predicted jump sizes
};

// Subtracts the predicted staircase of the known facets from a raw window
// function of the translate w. Predicted left-jumps sit on each front grid
// s * (b_i + <a_i, w>) in Z with positive denominator and have size
// s^(d-1) * gamma_i; back grids carry the mirrored right-jumps.
QStepFunction clean(const QStepFunction& f, const std::vector<KnownFacet>& known,
                    const IVec& w, int d);

WindowObservation window_scan(EhrhartOracle& oracle, const WindowPlan& plan, long k,
                              const std::vector<KnownFacet>& known,
                              const ReconstructConfig& config);

// Solves for b in the system s_l * (b + K_l * c) in Z, over rationals with
// bounded denominator in [b_lo, b_hi]. Raises IntegerSample when a sample
// parameter is an integer, EmptyCandidates when nothing survives.
std::vector<Rat> pseudo_diophantine_solve(const std::vector<std::pair<Rat, Int>>& eqs,
                                          const Rat& c, const Rat& b_lo,
                                          const Rat& b_hi, const Int& max_den);

struct FacetVerdict {
  enum class Kind { Facet, NonFacet, Unresolved } kind = Kind::Unresolved;
  Rat b;              // right-hand side (facets) or support value (non-facets)
  Rat rvol_exact;     // relative volume of the reconstructed facet
  Rat rvol_estimate;  // window-derived estimate
  std::string detail;
};

struct StageDiagnostics {
  IVec normal;
  WindowPlan plan;
  std::vector<WindowObservation> observations;
};

struct VerificationCounterexample {
  IVec w;
  Rat lo, hi;
};

struct ReconstructionReport {
  enum class Verification { Passed, Failed, NotRun };

  std::vector<FacetVerdict> verdicts;   // aligned with the input normal list
  Verification verification = Verification::NotRun;
  std::optional<VerificationCounterexample> counterexample;
  std::optional<HPolytope> polytope;
  std::vector<StageDiagnostics> stages;
  long long oracle_calls = 0;
  Rat oracle_length = Rat(0);
  int rounds_used = 0;

  bool fully_resolved() const;
};

// Recovers the right-hand sides of the hidden polytope for the given
// candidate directions, working only through the oracle. Directions that do
// not support facets are reported with their support values instead.
ReconstructionReport recover(EhrhartOracle& oracle, const std::vector<IVec>& normals,
                             const ReconstructConfig& config = {});

// Minimal period and one period of the profile of k |-> gcd(zeta*k + gamma,
// xi*k + eta). Raises LinearlyDependent when the two linear forms are
// proportional.
struct GcdPeriod {
  Int period;
  std::vector<Int> profile;
};
GcdPeriod gcd_sequence_period(const Int& zeta, const Int& gamma, const Int& xi,
                              const Int& eta);

// Smallest k in [1, N^n] bringing every k*b_i within 1/N of an integer.
Int dirichlet_simultaneous(const std::vector<Rat>& b, const Int& n_quality);

}  // namespace ehrkit
