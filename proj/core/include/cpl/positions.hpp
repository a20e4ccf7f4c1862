#pragma once

#include "cpl/body.hpp"
#include "cpl/estimators.hpp"

namespace cpl {

struct PositionResult {
  AffinePosition position;
  double objective = 0.0;   // fresh-seed re-evaluation of the achieved value
  int iterations = 0;
  bool converged = false;
  double objective_insample = 0.0;  // common-random-number value of the search
  Estimate objective_estimate;      // fresh-seed estimate with stderr
  uint64_t seed = 0;
};

// Upper bound on the Banach-Mazur distance from K to the Euclidean ball:
// map the John ellipsoid to the unit ball, center at the John center, and
// return the circumradius of the result. John's theorem keeps this <= dim.
double dk_estimate(const ConvexBody& K);

// The translate z minimizing vol((K - z)^polar), found by damped Newton on
// the log-volume with central finite differences. Polytopes, dim <= 8.
Vec santalo_point(const ConvexBody& K);

struct MmStarOptions {
  int starts = 3;               // identity, John map, Loewner map
  int nm_iters = 260;
  int64_t search_samples = 16384;
  double init_step = 0.25;
};

// Searches det-normalized symmetric positive-definite maps T = exp(S),
// S traceless symmetric, minimizing the Monte Carlo product M(TB) M*(TB)
// with common random numbers across iterates. Requires B origin-symmetric.
PositionResult mmstar_position(const ConvexBody& B, const SamplerConfig& cfg,
                               const MmStarOptions& opt = {});

struct MEllipsoidResult {
  ConvexBody ellipsoid;     // candidate E, vol(E) = vol(K cap -K)
  double ratio_sum = 0.0;   // (vol(K+E)/vol(K cap E))^(1/n), outer/inner bracket
  double ratio_polar = 0.0; // same for the polars
  double ratio_symmetrization = 0.0;  // (vol conv(K,-K)/vol(K cap -K))^(1/n)
  double ratio_covering = 0.0;        // (2^n vol(K-K)/vol(K cap -K))^(1/n)
  double bracket_gap = 0.0; // (vol E_outer / vol E_inner)^(1/n) of the net
  Vec santalo_shift;
};

// Santalo-centers K, takes D = K cap (-K), and returns the ellipsoid given
// by the inverse MM*-position map of D scaled to vol(D), with the four
// normalized volume ratios. Sum/intersection volumes with the ellipsoid are
// bracketed conservatively by support-net outer and inscribed inner
// polytopes (the recorded bracket gap bounds the approximation).
MEllipsoidResult m_ellipsoid_candidate(const ConvexBody& K,
                                       const SamplerConfig& cfg);

// helpers shared by the construction pipelines
Mat spd_sqrt_inverse(const Mat& A);   // A^{-1/2} for SPD A
Mat traceless_symmetric_from(const Vec& params, int dim);
Vec params_from_traceless(const Mat& S);
Mat spd_exp(const Mat& S);

}  // namespace cpl
