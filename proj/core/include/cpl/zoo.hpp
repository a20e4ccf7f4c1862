#pragma once

#include <cstdint>

#include "cpl/body.hpp"

namespace cpl {

ConvexBody make_cube(int n, double r = 1.0);         // [-r, r]^n, H-rep
ConvexBody make_cross_polytope(int n, double r = 1.0);
ConvexBody make_standard_simplex(int n);             // conv{0, e_1..e_n}
ConvexBody make_regular_simplex(int n);              // centroid 0, circumradius 1

// hull of m iid standard Gaussian points (centered at nothing)
ConvexBody make_gaussian_polytope(int n, int m, uint64_t seed);

// Gluskin-style random body: conv of m Gaussians, optionally with their
// negatives (absolute hull); resamples on degeneracy, at most 100 attempts
ConvexBody gluskin_sample(int n, int m, bool symmetric, uint64_t seed);

// slab-cylinder pair: B = B_2^n x [-1,1], D = B_2^n x [-2^-n, 2^-n]
ConvexBody counterexample_wide(int n);
ConvexBody counterexample_thin(int n);

ConvexBody make_random_ellipsoid(int n, uint64_t seed);  // centered SPD shape

}  // namespace cpl
