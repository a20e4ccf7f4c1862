#pragma once

#include "cpl/body.hpp"

namespace cpl {

// Minimal-volume centered ellipsoid { x : x^T A^{-1} x <= 1 } containing the
// given points and their negatives. Returns the shape matrix A. Dual-weight
// coordinate ascent with away steps (linear local convergence), relative
// duality gap `tol`.
Mat mvee_centered(const Mat& points, double tol = 1e-9, int max_iter = 500000);

// Minimal-volume enclosing ellipsoid with free center (lifted to the
// centered problem one dimension up).
EllipsoidRep mvee(const Mat& points, double tol = 1e-9, int max_iter = 500000);

// Maximal-volume inscribed ellipsoid. Symmetric bodies solve one centered
// dual MVEE of the polar; general bodies search the center with Nelder-Mead
// on the log-volume, which is smooth and concave in the center.
ConvexBody john_ellipsoid(const ConvexBody& K);

// Minimal-volume enclosing ellipsoid of a body.
ConvexBody loewner_ellipsoid(const ConvexBody& K);

}  // namespace cpl
