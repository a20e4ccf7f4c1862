#include "cpl/body_ops.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

#include "cpl/constants.hpp"
#include "cpl/errors.hpp"
#include "cpl/hull.hpp"
#include "cpl/lp.hpp"
#include "cpl/rng.hpp"

namespace cpl {
namespace {

Mat sorted_rows(Mat M, Vec* companion = nullptr) {
  std::vector<int> idx(M.rows());
  for (size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
  auto lex_less = [&](int a, int b) {
    for (int j = 0; j < M.cols(); ++j) {
      if (M(a, j) < M(b, j)) return true;
      if (M(a, j) > M(b, j)) return false;
    }
    return companion ? (*companion)[a] < (*companion)[b] : false;
  };
  std::sort(idx.begin(), idx.end(), lex_less);
  Mat out(M.rows(), M.cols());
  Vec comp;
  if (companion) comp.resize(M.rows());
  for (size_t i = 0; i < idx.size(); ++i) {
    out.row(static_cast<int>(i)) = M.row(idx[i]);
    if (companion) comp[static_cast<int>(i)] = (*companion)[idx[i]];
  }
  if (companion) *companion = comp;
  return out;
}

// gauge of a general ellipsoid: positive root of the boundary quadratic
double ellipsoid_gauge(const EllipsoidRep& e, const Vec& x) {
  Eigen::LDLT<Mat> ldlt(e.shape);
  const Vec Bx = ldlt.solve(x);
  const Vec Bc = ldlt.solve(e.center);
  const double alpha = x.dot(Bx);
  const double beta = x.dot(Bc);
  const double gamma = e.center.dot(Bc);
  if (gamma >= 1.0) fail(ErrorCode::NotInterior, "ellipsoid does not contain 0");
  if (alpha <= 0) return 0.0;
  return (std::sqrt(beta * beta + (1.0 - gamma) * alpha) - beta) / (1.0 - gamma);
}

ConvexBody convert_v_to_h(const ConvexBody& K) {
  const Mat& V = K.vrep().vertices;
  HullResult hull = convex_hull(V);
  Vec offs = hull.facet_offsets;
  Mat norms = sorted_rows(hull.facet_normals, &offs);
  return ConvexBody::hpolytope_trusted(std::move(norms), std::move(offs));
}

ConvexBody convert_h_to_v(const ConvexBody& K) {
  const auto& h = K.hrep();
  const int n = K.dim();
  const Vec z = chebyshev_center(K);
  Mat P(h.normals.rows(), n);
  for (int i = 0; i < h.normals.rows(); ++i) {
    const double denom = h.offsets[i] - h.normals.row(i).dot(z);
    if (denom <= 0) fail(ErrorCode::DegenerateBody, "interior point not strict");
    P.row(i) = h.normals.row(i) / denom;
  }
  HullResult ph = convex_hull(P);
  Mat V(ph.facet_normals.rows(), n);
  for (int f = 0; f < ph.facet_normals.rows(); ++f) {
    if (ph.facet_offsets[f] <= 1e-12)
      fail(ErrorCode::Unbounded, "halfspace body unbounded");
    V.row(f) = z.transpose() + ph.facet_normals.row(f) / ph.facet_offsets[f];
  }
  return ConvexBody::vpolytope_trusted(sorted_rows(V));
}

}  // namespace

Vec chebyshev_center(const ConvexBody& K) {
  const ConvexBody H = to_hrep(K);
  const auto& h = H.hrep();
  const int n = K.dim();
  Mat A(h.normals.rows(), n + 1);
  A.leftCols(n) = h.normals;
  A.col(n).setOnes();
  Vec c = Vec::Zero(n + 1);
  c[n] = 1.0;
  LpResult r = lp_maximize(A, h.offsets, c);
  if (!r.ok()) fail(ErrorCode::DegenerateBody, "Chebyshev LP failed");
  return r.x.head(n);
}

double interior_radius_at_origin(const ConvexBody& K) {
  switch (K.kind()) {
    case RepKind::HPolytope:
      return K.hrep().offsets.minCoeff();
    case RepKind::VPolytope:
      return to_hrep(K).hrep().offsets.minCoeff();
    case RepKind::Ellipsoid: {
      const auto& e = K.erep();
      Eigen::SelfAdjointEigenSolver<Mat> eig(e.shape);
      const double lmin = std::sqrt(eig.eigenvalues().minCoeff());
      if (e.center.norm() < 1e-12 * lmin) return lmin;
      // sampled directional boundary distances (adequate for margin checks)
      const int n = K.dim();
      CounterRng rng(0xC0FFEE, 5);
      double best = std::numeric_limits<double>::infinity();
      for (int s = 0; s < 64 * n; ++s) {
        const Vec u = rng.sphere_vector(n, static_cast<uint64_t>(s) * n * 2);
        const double g = ellipsoid_gauge(e, u);
        if (g > 0) best = std::min(best, 1.0 / g);
      }
      return best;
    }
    case RepKind::BallCylinder:
      return std::min(1.0, K.crep().half_length);
  }
  return 0;
}

bool contains_origin_interior(const ConvexBody& K, double margin_rel) {
  if (K.is_cylinder()) return true;
  if (K.is_ellipsoid()) {
    const auto& e = K.erep();
    Eigen::LDLT<Mat> ldlt(e.shape);
    const double gamma = e.center.dot(ldlt.solve(e.center));
    return gamma < 1.0 - margin_rel;
  }
  return interior_radius_at_origin(K) > margin_rel * K.circumradius_upper();
}

void require_origin_interior(const ConvexBody& K, const char* who) {
  if (!contains_origin_interior(K, TAU_GEOM))
    fail(ErrorCode::NotInterior, std::string(who) + " requires 0 in the interior");
}

double gauge(const ConvexBody& K, const Vec& x) {
  require_origin_interior(K, "gauge");
  switch (K.kind()) {
    case RepKind::HPolytope: {
      const auto& h = K.hrep();
      double t = 0.0;
      for (int i = 0; i < h.normals.rows(); ++i)
        t = std::max(t, h.normals.row(i).dot(x) / h.offsets[i]);
      return t;
    }
    case RepKind::VPolytope: {
      // scaling LP: min sum(mu), V^T mu = x, mu >= 0
      const Mat& V = K.vrep().vertices;
      const int m = static_cast<int>(V.rows());
      LpResult r = lp_standard_min(V.transpose(), x, Vec::Ones(m));
      if (!r.ok()) return std::numeric_limits<double>::infinity();
      return std::max(0.0, r.objective);
    }
    case RepKind::Ellipsoid:
      return ellipsoid_gauge(K.erep(), x);
    case RepKind::BallCylinder: {
      const auto& c = K.crep();
      const double head = x.head(c.ball_dim).norm();
      return std::max(head, std::abs(x[c.ball_dim]) / c.half_length);
    }
  }
  return 0;
}

double support(const ConvexBody& K, const Vec& u) {
  switch (K.kind()) {
    case RepKind::VPolytope:
      return (K.vrep().vertices * u).maxCoeff();
    case RepKind::HPolytope: {
      const auto& h = K.hrep();
      LpResult r = lp_maximize(h.normals, h.offsets, u);
      if (!r.ok()) fail(ErrorCode::DegenerateBody, "support LP failed");
      return r.objective;
    }
    case RepKind::Ellipsoid: {
      const auto& e = K.erep();
      return e.center.dot(u) + std::sqrt(std::max(0.0, u.dot(e.shape * u)));
    }
    case RepKind::BallCylinder: {
      const auto& c = K.crep();
      return u.head(c.ball_dim).norm() + c.half_length * std::abs(u[c.ball_dim]);
    }
  }
  return 0;
}

ConvexBody polar(const ConvexBody& K) {
  require_origin_interior(K, "polar");
  switch (K.kind()) {
    case RepKind::VPolytope: {
      const Mat& V = K.vrep().vertices;
      const int m = static_cast<int>(V.rows());
      Mat A(m, K.dim());
      Vec b(m);
      for (int i = 0; i < m; ++i) {
        const double nn = V.row(i).norm();
        A.row(i) = V.row(i) / nn;
        b[i] = 1.0 / nn;
      }
      Mat As = sorted_rows(A, &b);
      return ConvexBody::hpolytope_trusted(std::move(As), std::move(b));
    }
    case RepKind::HPolytope: {
      const auto& h = K.hrep();
      Mat V(h.normals.rows(), K.dim());
      for (int i = 0; i < h.normals.rows(); ++i)
        V.row(i) = h.normals.row(i) / h.offsets[i];
      return ConvexBody::vpolytope_trusted(sorted_rows(V));
    }
    case RepKind::Ellipsoid: {
      const auto& e = K.erep();
      const int n = K.dim();
      if (e.center.norm() < 1e-14) {
        Eigen::LDLT<Mat> ldlt(e.shape);
        return ConvexBody::ellipsoid(Vec::Zero(n),
                                     ldlt.solve(Mat::Identity(n, n)));
      }
      const Mat Q = e.shape - e.center * e.center.transpose();
      Eigen::LDLT<Mat> ldlt(Q);
      const Vec m = -ldlt.solve(e.center);
      const double rho = 1.0 + e.center.dot(-m);
      const Mat Qinv = ldlt.solve(Mat::Identity(n, n));
      return ConvexBody::ellipsoid(m, rho * 0.5 * (Qinv + Qinv.transpose()));
    }
    case RepKind::BallCylinder:
      fail(ErrorCode::Unsupported, "polar of a cylinder body");
  }
  fail(ErrorCode::Unsupported, "polar");
}

ConvexBody hull_convert(const ConvexBody& K) {
  if (K.dim() > MAX_DIM) fail(ErrorCode::Unsupported, "dimension out of range");
  if (auto d = K.cached_dual()) return *d;
  switch (K.kind()) {
    case RepKind::VPolytope: return convert_v_to_h(K);
    case RepKind::HPolytope: return convert_h_to_v(K);
    default:
      fail(ErrorCode::Unsupported, "hull_convert applies to polytopes");
  }
}

ConvexBody to_vrep(const ConvexBody& K) {
  if (K.is_vpolytope()) return K;
  if (K.is_hpolytope()) return hull_convert(K);
  fail(ErrorCode::Unsupported, "body has no vertex representation");
}

ConvexBody to_hrep(const ConvexBody& K) {
  if (K.is_hpolytope()) return K;
  if (K.is_vpolytope()) return hull_convert(K);
  fail(ErrorCode::Unsupported, "body has no halfspace representation");
}

ConvexBody difference_body(const ConvexBody& K) {
  const ConvexBody V = to_vrep(K);
  if (is_origin_symmetric(V)) return scale_body(V, 2.0);
  const Mat& P = V.vrep().vertices;
  const int m = static_cast<int>(P.rows());
  Mat D(m * (m - 1), K.dim());
  int r = 0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (i != j) D.row(r++) = P.row(i) - P.row(j);
  return ConvexBody::vpolytope(D);
}

ConvexBody central_intersection(const ConvexBody& K) {
  require_origin_interior(K, "central_intersection");
  const ConvexBody H = to_hrep(K);
  const auto& h = H.hrep();
  const int m = static_cast<int>(h.normals.rows());
  Mat A(2 * m, K.dim());
  Vec b(2 * m);
  A.topRows(m) = h.normals;
  A.bottomRows(m) = -h.normals;
  b.head(m) = h.offsets;
  b.tail(m) = h.offsets;
  return ConvexBody::hpolytope(A, b);
}

ConvexBody conv_union_reflection(const ConvexBody& K) {
  const ConvexBody V = to_vrep(K);
  const Mat& P = V.vrep().vertices;
  Mat U(2 * P.rows(), K.dim());
  U.topRows(P.rows()) = P;
  U.bottomRows(P.rows()) = -P;
  return ConvexBody::vpolytope(U);
}

ConvexBody section(const ConvexBody& K, const Subspace& E) {
  if (E.ambient_dim() != K.dim())
    fail(ErrorCode::Unsupported, "section: ambient dimension mismatch");
  const int k = E.dim();
  if (k == 0) fail(ErrorCode::Unsupported, "section by the zero subspace");
  const Mat& U = E.basis();
  if (K.is_ellipsoid()) {
    const auto& e = K.erep();
    Eigen::LDLT<Mat> ldlt(e.shape);
    const Mat BU = ldlt.solve(U);
    const Mat W = U.transpose() * BU;
    const Vec w = BU.transpose() * e.center;
    Eigen::LDLT<Mat> wldlt(W);
    const Vec m = wldlt.solve(w);
    const double rho = 1.0 - e.center.dot(ldlt.solve(e.center)) + m.dot(W * m);
    if (rho <= 1e-14)
      fail(ErrorCode::NotInterior, "section misses the ellipsoid interior");
    const Mat Winv = wldlt.solve(Mat::Identity(k, k));
    return ConvexBody::ellipsoid(m, rho * 0.5 * (Winv + Winv.transpose()));
  }
  if (K.dim() > 1 && k < K.dim())
    require_origin_interior(K, "section");
  const ConvexBody H = to_hrep(K);
  const auto& h = H.hrep();
  Mat A = h.normals * U;
  std::vector<int> keep;
  for (int i = 0; i < A.rows(); ++i)
    if (A.row(i).norm() > 1e-12) keep.push_back(i);
  Mat A2(static_cast<int>(keep.size()), k);
  Vec b2(static_cast<int>(keep.size()));
  for (size_t i = 0; i < keep.size(); ++i) {
    A2.row(static_cast<int>(i)) = A.row(keep[i]);
    b2[static_cast<int>(i)] = h.offsets[keep[i]];
  }
  return ConvexBody::hpolytope(A2, b2);
}

ConvexBody project(const ConvexBody& K, const Subspace& E) {
  if (E.ambient_dim() != K.dim())
    fail(ErrorCode::Unsupported, "project: ambient dimension mismatch");
  const int k = E.dim();
  if (k == 0) fail(ErrorCode::Unsupported, "projection to the zero subspace");
  const Mat& U = E.basis();
  if (K.is_ellipsoid()) {
    const auto& e = K.erep();
    return ConvexBody::ellipsoid(U.transpose() * e.center,
                                 U.transpose() * e.shape * U);
  }
  const ConvexBody V = to_vrep(K);
  return ConvexBody::vpolytope(V.vrep().vertices * U);
}

Chord max_chord(const ConvexBody& K, const Vec& direction) {
  const int n = K.dim();
  Vec d = direction / direction.norm();
  const ConvexBody H = to_hrep(K);
  const auto& h = H.hrep();
  const int m = static_cast<int>(h.normals.rows());

  // stage 1: maximize t over { (z, t) : z in K, z + t d in K, t >= 0 }
  Mat A1(2 * m + 1, n + 1);
  Vec b1(2 * m + 1);
  A1.setZero();
  A1.block(0, 0, m, n) = h.normals;
  b1.head(m) = h.offsets;
  A1.block(m, 0, m, n) = h.normals;
  A1.block(m, n, m, 1) = h.normals * d;
  b1.segment(m, m) = h.offsets;
  A1(2 * m, n) = -1.0;
  b1[2 * m] = 0.0;
  Vec c1 = Vec::Zero(n + 1);
  c1[n] = 1.0;
  LpResult s1 = lp_maximize(A1, b1, c1);
  if (!s1.ok()) fail(ErrorCode::DegenerateBody, "chord LP failed");
  const double t = std::max(0.0, s1.objective);

  // stage 2: among maximizing chords pick the midpoint of least l1 norm,
  // so that symmetric bodies give the chord through the center
  const double slack = 1e-9 * (1.0 + t);
  const double half = 0.5 * (t - slack);
  Mat A2(2 * m + 2 * n, 2 * n);
  Vec b2(2 * m + 2 * n);
  A2.setZero();
  A2.block(0, 0, m, n) = h.normals;
  b2.head(m) = h.offsets - half * (h.normals * d);
  A2.block(m, 0, m, n) = h.normals;
  b2.segment(m, m) = h.offsets + half * (h.normals * d);
  for (int j = 0; j < n; ++j) {
    A2(2 * m + 2 * j, j) = 1.0;
    A2(2 * m + 2 * j, n + j) = -1.0;
    b2[2 * m + 2 * j] = 0.0;
    A2(2 * m + 2 * j + 1, j) = -1.0;
    A2(2 * m + 2 * j + 1, n + j) = -1.0;
    b2[2 * m + 2 * j + 1] = 0.0;
  }
  Vec c2 = Vec::Zero(2 * n);
  c2.tail(n).setConstant(-1.0);
  LpResult s2 = lp_maximize(A2, b2, c2);
  Vec mid;
  if (s2.ok()) {
    mid = s2.x.head(n);
  } else {
    mid = s1.x.head(n) + 0.5 * t * d;  // fall back to the stage-1 base point
  }
  Chord chord;
  chord.length = t;
  chord.p = mid - 0.5 * t * d;
  chord.q = mid + 0.5 * t * d;
  return chord;
}

ConvexBody translate(const ConvexBody& K, const Vec& t) {
  switch (K.kind()) {
    case RepKind::VPolytope: {
      Mat V = K.vrep().vertices;
      V.rowwise() += t.transpose();
      return ConvexBody::vpolytope_trusted(std::move(V));
    }
    case RepKind::HPolytope: {
      const auto& h = K.hrep();
      return ConvexBody::hpolytope_trusted(h.normals, h.offsets + h.normals * t);
    }
    case RepKind::Ellipsoid:
      return ConvexBody::ellipsoid(K.erep().center + t, K.erep().shape);
    case RepKind::BallCylinder:
      fail(ErrorCode::Unsupported, "translate cylinder");
  }
  fail(ErrorCode::Unsupported, "translate");
}

ConvexBody scale_body(const ConvexBody& K, double t) {
  if (t <= 0) fail(ErrorCode::NonPositive, "scale factor");
  switch (K.kind()) {
    case RepKind::VPolytope:
      return ConvexBody::vpolytope_trusted(t * K.vrep().vertices);
    case RepKind::HPolytope:
      return ConvexBody::hpolytope_trusted(K.hrep().normals, t * K.hrep().offsets);
    case RepKind::Ellipsoid:
      return ConvexBody::ellipsoid(t * K.erep().center, t * t * K.erep().shape);
    case RepKind::BallCylinder:
      fail(ErrorCode::Unsupported, "scale cylinder");
  }
  fail(ErrorCode::Unsupported, "scale");
}

ConvexBody linear_image(const ConvexBody& K, const Mat& T) {
  const int n = K.dim();
  Eigen::PartialPivLU<Mat> lu(T);
  const double dt = std::abs(lu.determinant());
  const double tn = std::max(1e-300, std::pow(T.norm(), n));
  if (!(dt > 1e-14 * tn))
    fail(ErrorCode::Singular, "linear image by a singular map");
  switch (K.kind()) {
    case RepKind::VPolytope:
      return ConvexBody::vpolytope_trusted(
          sorted_rows(K.vrep().vertices * T.transpose()));
    case RepKind::HPolytope: {
      const auto& h = K.hrep();
      Mat A = lu.solve(h.normals.transpose()).transpose();  // rows a_i^T T^{-1}
      Vec b = h.offsets;
      for (int i = 0; i < A.rows(); ++i) {
        const double nn = A.row(i).norm();
        A.row(i) /= nn;
        b[i] /= nn;
      }
      Mat As = sorted_rows(A, &b);
      return ConvexBody::hpolytope_trusted(std::move(As), std::move(b));
    }
    case RepKind::Ellipsoid: {
      const auto& e = K.erep();
      return ConvexBody::ellipsoid(T * e.center, T * e.shape * T.transpose());
    }
    case RepKind::BallCylinder:
      fail(ErrorCode::Unsupported, "linear image of a cylinder");
  }
  fail(ErrorCode::Unsupported, "linear_image");
}

ConvexBody minkowski_sum(const ConvexBody& A, const ConvexBody& B) {
  const Mat& VA = to_vrep(A).vrep().vertices;
  const Mat& VB = to_vrep(B).vrep().vertices;
  Mat S(VA.rows() * VB.rows(), A.dim());
  int r = 0;
  for (int i = 0; i < VA.rows(); ++i)
    for (int j = 0; j < VB.rows(); ++j) S.row(r++) = VA.row(i) + VB.row(j);
  return ConvexBody::vpolytope(S);
}

ConvexBody intersect_bodies(const ConvexBody& A, const ConvexBody& B) {
  const auto& ha = to_hrep(A).hrep();
  const auto& hb = to_hrep(B).hrep();
  Mat N(ha.normals.rows() + hb.normals.rows(), A.dim());
  Vec o(N.rows());
  N.topRows(ha.normals.rows()) = ha.normals;
  N.bottomRows(hb.normals.rows()) = hb.normals;
  o.head(ha.normals.rows()) = ha.offsets;
  o.tail(hb.normals.rows()) = hb.offsets;
  return ConvexBody::hpolytope(N, o);
}

bool member(const ConvexBody& K, const Vec& x, double tol_rel) {
  const double tol = tol_rel * std::max(1.0, K.circumradius_upper());
  switch (K.kind()) {
    case RepKind::HPolytope: {
      const auto& h = K.hrep();
      return ((h.normals * x - h.offsets).array() <= tol).all();
    }
    case RepKind::VPolytope: {
      const Mat& V = K.vrep().vertices;
      const int n = K.dim();
      const int m = static_cast<int>(V.rows());
      Mat A(n + 1, m);
      A.topRows(n) = V.transpose();
      A.bottomRows(1).setOnes();
      Vec b(n + 1);
      b.head(n) = x;
      b[n] = 1.0;
      return lp_standard_min(A, b, Vec::Zero(m)).ok();
    }
    case RepKind::Ellipsoid: {
      const auto& e = K.erep();
      Eigen::LDLT<Mat> ldlt(e.shape);
      const Vec d = x - e.center;
      return d.dot(ldlt.solve(d)) <= 1.0 + tol;
    }
    case RepKind::BallCylinder: {
      const auto& c = K.crep();
      return x.head(c.ball_dim).norm() <= 1.0 + tol &&
             std::abs(x[c.ball_dim]) <= c.half_length * (1.0 + tol);
    }
  }
  return false;
}

bool is_origin_symmetric(const ConvexBody& K, double tol_rel) {
  switch (K.kind()) {
    case RepKind::VPolytope: {
      const Mat& V = K.vrep().vertices;
      const double tol = tol_rel * std::max(1.0, K.circumradius_upper());
      const Mat W = sorted_rows(-V);
      return (sorted_rows(V) - W).lpNorm<Eigen::Infinity>() < tol;
    }
    case RepKind::HPolytope: {
      const auto& h = K.hrep();
      Vec o1 = h.offsets, o2 = h.offsets;
      const Mat N1 = sorted_rows(h.normals, &o1);
      Mat negN = -h.normals;
      const Mat N2 = sorted_rows(negN, &o2);
      const double tol = tol_rel * std::max(1.0, h.offsets.lpNorm<Eigen::Infinity>());
      return (N1 - N2).lpNorm<Eigen::Infinity>() < 1e-9 &&
             (o1 - o2).lpNorm<Eigen::Infinity>() < tol;
    }
    case RepKind::Ellipsoid: {
      Eigen::SelfAdjointEigenSolver<Mat> eig(K.erep().shape);
      return K.erep().center.norm() <
             tol_rel * std::sqrt(eig.eigenvalues().maxCoeff());
    }
    case RepKind::BallCylinder:
      return true;
  }
  return false;
}

double circumradius(const ConvexBody& K) {
  switch (K.kind()) {
    case RepKind::VPolytope:
      return K.vrep().vertices.rowwise().norm().maxCoeff();
    case RepKind::HPolytope:
      return to_vrep(K).vrep().vertices.rowwise().norm().maxCoeff();
    case RepKind::Ellipsoid:
    case RepKind::BallCylinder:
      return K.circumradius_upper();
  }
  return 0;
}

}  // namespace cpl
