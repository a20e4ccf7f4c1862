#pragma once

// Numerical tolerances and frozen regression bounds.
//
// The tolerances are the contract of the whole library: geometric predicates
// are resolved in floating point at TAU_GEOM relative to the circumradius of
// the body in question, never with exact arithmetic.
//
// The regression bounds at the bottom were calibrated once with the seeded
// sweep in tests/ and then frozen. Verification suites report the measured
// value next to the bound so drift is visible before it becomes a failure.

namespace cpl {

// Geometric tolerance, relative to circumradius.
inline constexpr double TAU_GEOM = 1e-9;

// Ellipsoid shape matrices must have eigenvalues >= EPS_PD * lambda_max.
inline constexpr double EPS_PD = 1e-12;

// Pivot / feasibility tolerance of the dense simplex LP solver.
inline constexpr double LP_TOL = 1e-10;

// Visibility threshold of the incremental hull, relative to point scale.
inline constexpr double HULL_EPS = 1e-10;

// Default Monte Carlo sample count (stderr ~ 0.2% on unit-scale quantities).
inline constexpr int DEFAULT_SAMPLES = 200000;

// Upper dimension limits.
inline constexpr int MAX_DIM = 12;          // hull / body operations
inline constexpr int MAX_EXACT_VOLUME_DIM = 10;
inline constexpr int MAX_SANTALO_DIM = 8;   // exact polar volumes

// ---- frozen regression bounds (calibrated by sweep, then frozen) ----

// Symmetrization ratio (vol conv(K,-K) / vol K cap -K)^(1/n) at the Santalo
// point stays below this across all test families, n <= 8.
inline constexpr double SYMMETRIZATION_RATIO_BOUND = 4.0;

// Gluskin hulls of m = 4n Gaussian points contain (GLUSKIN_INRADIUS_C/sqrt(n)) B2.
inline constexpr double GLUSKIN_INRADIUS_C = 0.2;
inline constexpr double GLUSKIN_INRADIUS_RATE = 0.95;

// Product M(TB) M*(TB) at the searched position for the cube, n <= 8.
inline constexpr double MMSTAR_CUBE_BOUND = 2.5;

// Difference-body section ratio scans (ratio^(1/m) vs min(n/m, sqrt(m))).
inline constexpr double DIFF_SECTION_RATIO_C = 2.5;

// m-ellipsoid candidate ratio bounds, n <= 6.
inline constexpr double MELL_RATIO_CUBE_BOUND = 3.0;
inline constexpr double MELL_RATIO_SIMPLEX_BOUND = 4.0;

// ell((SK)polar) <= C7 * n sqrt(log n) when the John ellipsoid of SK is B2.
inline constexpr double LSK_POLAR_C7 = 2.0;

// Quotient-of-section probe on the cube, n = 8: best d_D <= sqrt(n) + tol.
inline constexpr double QS_CUBE_TOL = 0.05;

// Inverse Santalo: (vol K vol K_polar / vol B^2)^(1/n) >= this on the battery.
inline constexpr double INVERSE_SANTALO_LOWER = 0.5;

}  // namespace cpl
