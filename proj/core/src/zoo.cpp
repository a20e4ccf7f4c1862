#include "cpl/zoo.hpp"

#include <cmath>

#include "cpl/errors.hpp"
#include "cpl/rng.hpp"

namespace cpl {

ConvexBody make_cube(int n, double r) {
  Mat A(2 * n, n);
  A.setZero();
  Vec b = Vec::Constant(2 * n, r);
  for (int j = 0; j < n; ++j) {
    A(2 * j, j) = 1.0;
    A(2 * j + 1, j) = -1.0;
  }
  return ConvexBody::hpolytope(A, b);
}

ConvexBody make_cross_polytope(int n, double r) {
  Mat V(2 * n, n);
  V.setZero();
  for (int j = 0; j < n; ++j) {
    V(2 * j, j) = r;
    V(2 * j + 1, j) = -r;
  }
  return ConvexBody::vpolytope(V);
}

ConvexBody make_standard_simplex(int n) {
  Mat V = Mat::Zero(n + 1, n);
  V.bottomRows(n) = Mat::Identity(n, n);
  return ConvexBody::vpolytope(V);
}

ConvexBody make_regular_simplex(int n) {
  // vertices e_i - centroid in the sum-zero hyperplane of R^{n+1},
  // expressed in the Helmert orthonormal basis, scaled to circumradius 1
  Mat H(n, n + 1);
  H.setZero();
  for (int k = 1; k <= n; ++k) {
    const double s = 1.0 / std::sqrt(static_cast<double>(k) * (k + 1));
    for (int j = 0; j < k; ++j) H(k - 1, j) = s;
    H(k - 1, k) = -k * s;
  }
  Mat V(n + 1, n);
  const double cr = std::sqrt(static_cast<double>(n) / (n + 1));
  for (int i = 0; i <= n; ++i) {
    Vec e = Vec::Zero(n + 1);
    e[i] = 1.0;
    e.array() -= 1.0 / (n + 1);
    V.row(i) = (H * e).transpose() / cr;
  }
  return ConvexBody::vpolytope(V);
}

ConvexBody make_gaussian_polytope(int n, int m, uint64_t seed) {
  CounterRng rng(seed, 3);
  Mat P(m, n);
  for (int i = 0; i < m; ++i)
    P.row(i) = rng.gaussian_vector(n, static_cast<uint64_t>(i) * n).transpose();
  return ConvexBody::vpolytope(P);
}

ConvexBody gluskin_sample(int n, int m, bool symmetric, uint64_t seed) {
  if (m < (symmetric ? n : n + 1))
    fail(ErrorCode::Unsupported, "too few points for a Gluskin body");
  for (int attempt = 0; attempt < 100; ++attempt) {
    CounterRng rng(seed, 11 + static_cast<uint64_t>(attempt));
    Mat P(symmetric ? 2 * m : m, n);
    for (int i = 0; i < m; ++i) {
      P.row(i) = rng.gaussian_vector(n, static_cast<uint64_t>(i) * n).transpose();
      if (symmetric) P.row(m + i) = -P.row(i);
    }
    try {
      return ConvexBody::vpolytope(P);
    } catch (const Error&) {
      continue;  // degenerate sample, redraw
    }
  }
  fail(ErrorCode::DegenerateBody, "Gluskin sampling failed 100 times");
}

ConvexBody counterexample_wide(int n) { return ConvexBody::ball_cylinder(n, 1.0); }

ConvexBody counterexample_thin(int n) {
  return ConvexBody::ball_cylinder(n, std::pow(2.0, -n));
}

ConvexBody make_random_ellipsoid(int n, uint64_t seed) {
  CounterRng rng(seed, 7);
  Mat G(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      G(i, j) = rng.gaussian(static_cast<uint64_t>(i) * n + j);
  Mat A = G * G.transpose() + 0.05 * Mat::Identity(n, n);
  return ConvexBody::ellipsoid(Vec::Zero(n), A);
}

}  // namespace cpl
