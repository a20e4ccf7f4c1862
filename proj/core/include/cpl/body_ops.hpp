#pragma once

#include "cpl/body.hpp"

namespace cpl {

// Minkowski functional inf{ t > 0 : x in tK }. Requires 0 interior.
// Exact max-ratio formula for H-polytopes, scaling LP for V-polytopes,
// closed form for ellipsoids and cylinders.
double gauge(const ConvexBody& K, const Vec& x);

// sup_{y in K} <u, y>
double support(const ConvexBody& K, const Vec& u);

// K_polar = { x : <x,y> <= 1 for all y in K }. Requires 0 interior.
ConvexBody polar(const ConvexBody& K);

// V <-> H conversion (the other representation, irredundant)
ConvexBody hull_convert(const ConvexBody& K);

// conversion helpers; use the cached dual when available, pass through when
// the body is already in the requested representation
ConvexBody to_vrep(const ConvexBody& K);
ConvexBody to_hrep(const ConvexBody& K);

// K - K = { x - y : x, y in K }
ConvexBody difference_body(const ConvexBody& K);

// K cap (-K); requires 0 interior
ConvexBody central_intersection(const ConvexBody& K);

// conv(K, -K)
ConvexBody conv_union_reflection(const ConvexBody& K);

// K cap E in the coordinate frame of E
ConvexBody section(const ConvexBody& K, const Subspace& E);

// P_E K in the coordinate frame of E
ConvexBody project(const ConvexBody& K, const Subspace& E);

// longest chord of K parallel to `direction` (unit vector); endpoints p, q
// with q - p = length * direction. Among maximizing chords the midpoint of
// minimal l1 norm is taken, so symmetric bodies give centered chords.
struct Chord {
  Vec p, q;
  double length = 0.0;
};
Chord max_chord(const ConvexBody& K, const Vec& direction);

// ---- smaller helpers used throughout ----

ConvexBody translate(const ConvexBody& K, const Vec& t);
ConvexBody scale_body(const ConvexBody& K, double t);
ConvexBody linear_image(const ConvexBody& K, const Mat& T);  // T K
ConvexBody minkowski_sum(const ConvexBody& A, const ConvexBody& B);
ConvexBody intersect_bodies(const ConvexBody& A, const ConvexBody& B);

// distance from 0 to the nearest facet plane (negative if 0 outside)
double interior_radius_at_origin(const ConvexBody& K);
bool contains_origin_interior(const ConvexBody& K, double margin_rel);
void require_origin_interior(const ConvexBody& K, const char* who);

bool member(const ConvexBody& K, const Vec& x, double tol_rel = 1e-9);
bool is_origin_symmetric(const ConvexBody& K, double tol_rel = 1e-7);

// Chebyshev center of a polytope (H-representation LP)
Vec chebyshev_center(const ConvexBody& K);

double circumradius(const ConvexBody& K);  // exact for V/ellipsoid/cylinder

}  // namespace cpl
