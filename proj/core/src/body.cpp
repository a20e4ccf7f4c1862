#include "cpl/body.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

#include "cpl/body_ops.hpp"
#include "cpl/constants.hpp"
#include "cpl/errors.hpp"
#include "cpl/hull.hpp"
#include "cpl/lp.hpp"

namespace cpl {
namespace {

bool lex_less(const Eigen::RowVectorXd& a, const Eigen::RowVectorXd& b) {
  for (int j = 0; j < a.size(); ++j) {
    if (a[j] < b[j]) return true;
    if (a[j] > b[j]) return false;
  }
  return false;
}

Mat sort_rows_lex(const Mat& M, Vec* companion = nullptr) {
  std::vector<int> idx(M.rows());
  for (size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    if (companion) {
      // tie-break on the companion value for identical rows
      if (!lex_less(M.row(a), M.row(b)) && !lex_less(M.row(b), M.row(a)))
        return (*companion)[a] < (*companion)[b];
    }
    return lex_less(M.row(a), M.row(b));
  });
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

Mat dedupe_rows(const Mat& M, double tol) {
  std::vector<int> keep;
  for (int i = 0; i < M.rows(); ++i) {
    bool dup = false;
    for (int j : keep) {
      if ((M.row(i) - M.row(j)).lpNorm<Eigen::Infinity>() < tol) {
        dup = true;
        break;
      }
    }
    if (!dup) keep.push_back(i);
  }
  Mat out(static_cast<int>(keep.size()), M.cols());
  for (size_t k = 0; k < keep.size(); ++k)
    out.row(static_cast<int>(k)) = M.row(keep[k]);
  return out;
}

}  // namespace

RepKind ConvexBody::kind() const {
  switch (rep_.index()) {
    case 0: return RepKind::VPolytope;
    case 1: return RepKind::HPolytope;
    case 2: return RepKind::Ellipsoid;
    default: return RepKind::BallCylinder;
  }
}

const VPolytopeRep& ConvexBody::vrep() const {
  if (!is_vpolytope()) fail(ErrorCode::Unsupported, "body is not a V-polytope");
  return std::get<VPolytopeRep>(rep_);
}
const HPolytopeRep& ConvexBody::hrep() const {
  if (!is_hpolytope()) fail(ErrorCode::Unsupported, "body is not an H-polytope");
  return std::get<HPolytopeRep>(rep_);
}
const EllipsoidRep& ConvexBody::erep() const {
  if (!is_ellipsoid()) fail(ErrorCode::Unsupported, "body is not an ellipsoid");
  return std::get<EllipsoidRep>(rep_);
}
const BallCylinderRep& ConvexBody::crep() const {
  if (!is_cylinder()) fail(ErrorCode::Unsupported, "body is not a cylinder");
  return std::get<BallCylinderRep>(rep_);
}

ConvexBody ConvexBody::vpolytope_trusted(Mat vertices) {
  const int n = static_cast<int>(vertices.cols());
  return ConvexBody(n, VPolytopeRep{std::move(vertices)});
}

ConvexBody ConvexBody::hpolytope_trusted(Mat normals, Vec offsets) {
  const int n = static_cast<int>(normals.cols());
  return ConvexBody(n, HPolytopeRep{std::move(normals), std::move(offsets)});
}

ConvexBody ConvexBody::vpolytope(const Mat& vertices) {
  const int n = static_cast<int>(vertices.cols());
  if (n < 1 || n > MAX_DIM) fail(ErrorCode::Unsupported, "dimension out of range");
  const double scale = std::max(1e-12, vertices.array().abs().maxCoeff());
  Mat pts = dedupe_rows(vertices, 1e-12 * scale);
  if (pts.rows() < n + 1)
    fail(ErrorCode::DegenerateBody, "fewer than dim+1 distinct vertices");
  HullResult hull = convex_hull(pts);
  Mat verts(static_cast<int>(hull.vertices.size()), n);
  for (size_t k = 0; k < hull.vertices.size(); ++k)
    verts.row(static_cast<int>(k)) = pts.row(hull.vertices[k]);
  ConvexBody body(n, VPolytopeRep{sort_rows_lex(verts)});
  // the hull already yields the dual form; attach it
  Vec offs = hull.facet_offsets;
  Mat norms = sort_rows_lex(hull.facet_normals, &offs);
  body.dual_ = std::make_shared<const ConvexBody>(
      hpolytope_trusted(std::move(norms), std::move(offs)));
  return body;
}

ConvexBody ConvexBody::hpolytope(const Mat& normals, const Vec& offsets) {
  const int n = static_cast<int>(normals.cols());
  const int m = static_cast<int>(normals.rows());
  if (n < 1 || n > MAX_DIM) fail(ErrorCode::Unsupported, "dimension out of range");
  if (m < n + 1) fail(ErrorCode::Unbounded, "too few halfspaces to bound a body");

  // normalize to unit normals
  Mat A(m, n);
  Vec b(m);
  for (int i = 0; i < m; ++i) {
    const double nn = normals.row(i).norm();
    if (nn < 1e-14) {
      if (offsets[i] < 0)
        fail(ErrorCode::DegenerateBody, "infeasible zero-normal halfspace");
      continue;  // vacuous row handled below via mask
    }
    A.row(i) = normals.row(i) / nn;
    b[i] = offsets[i] / nn;
  }

  // drop duplicates, keeping the tighter offset
  std::vector<int> keep;
  for (int i = 0; i < m; ++i) {
    if (normals.row(i).norm() < 1e-14) continue;
    bool dup = false;
    for (int& j : keep) {
      if ((A.row(i) - A.row(j)).lpNorm<Eigen::Infinity>() < 1e-12) {
        dup = true;
        if (b[i] < b[j]) j = i;
        break;
      }
    }
    if (!dup) keep.push_back(i);
  }
  Mat A2(static_cast<int>(keep.size()), n);
  Vec b2(static_cast<int>(keep.size()));
  for (size_t k = 0; k < keep.size(); ++k) {
    A2.row(static_cast<int>(k)) = A.row(keep[k]);
    b2[static_cast<int>(k)] = b[keep[k]];
  }

  // Chebyshev center: full-dimensionality and an interior point
  Mat Ach(A2.rows(), n + 1);
  Ach.leftCols(n) = A2;
  Ach.col(n).setOnes();
  Vec c = Vec::Zero(n + 1);
  c[n] = 1.0;
  LpResult cheb = lp_maximize(Ach, b2, c);
  if (cheb.status == LpResult::Status::Unbounded)
    fail(ErrorCode::Unbounded, "halfspace intersection is unbounded");
  if (!cheb.ok()) fail(ErrorCode::DegenerateBody, "empty halfspace intersection");
  const double scale = std::max(1.0, b2.lpNorm<Eigen::Infinity>());
  if (cheb.objective < 1e-9 * scale)
    fail(ErrorCode::DegenerateBody, "halfspace intersection is not full-dimensional");
  const Vec z = cheb.x.head(n);

  // Polar hull around z: vertices of the polar are the irredundant facets,
  // facets of the polar are the vertices of the body, and 0 interior to the
  // polar hull certifies boundedness.
  Mat P(A2.rows(), n);
  for (int i = 0; i < A2.rows(); ++i) {
    const double denom = b2[i] - A2.row(i).dot(z);
    P.row(i) = A2.row(i) / denom;
  }
  HullResult ph;
  try {
    ph = convex_hull(P);
  } catch (const Error&) {
    fail(ErrorCode::Unbounded, "halfspace intersection is unbounded");
  }
  for (int f = 0; f < ph.facet_normals.rows(); ++f) {
    if (ph.facet_offsets[f] <= 1e-12)
      fail(ErrorCode::Unbounded, "halfspace intersection is unbounded");
  }

  Mat A3(static_cast<int>(ph.vertices.size()), n);
  Vec b3(static_cast<int>(ph.vertices.size()));
  for (size_t k = 0; k < ph.vertices.size(); ++k) {
    A3.row(static_cast<int>(k)) = A2.row(ph.vertices[k]);
    b3[static_cast<int>(k)] = b2[ph.vertices[k]];
  }
  A3 = sort_rows_lex(A3, &b3);
  ConvexBody body(n, HPolytopeRep{A3, b3});

  // vertices of the body from the polar facets
  Mat V(ph.facet_normals.rows(), n);
  for (int f = 0; f < ph.facet_normals.rows(); ++f)
    V.row(f) = z.transpose() + ph.facet_normals.row(f) / ph.facet_offsets[f];
  body.dual_ =
      std::make_shared<const ConvexBody>(vpolytope_trusted(sort_rows_lex(V)));
  return body;
}

ConvexBody ConvexBody::ellipsoid(const Vec& center, const Mat& shape) {
  const int n = static_cast<int>(center.size());
  if (n < 1 || n > MAX_DIM) fail(ErrorCode::Unsupported, "dimension out of range");
  Mat A = 0.5 * (shape + shape.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> eig(A);
  const double lmax = eig.eigenvalues().maxCoeff();
  if (lmax <= 0 || eig.eigenvalues().minCoeff() < EPS_PD * lmax)
    fail(ErrorCode::DegenerateBody, "ellipsoid shape matrix is not positive definite");
  return ConvexBody(n, EllipsoidRep{center, std::move(A)});
}

ConvexBody ConvexBody::ball_cylinder(int ball_dim, double half_length) {
  if (ball_dim < 1 || ball_dim + 1 > MAX_DIM)
    fail(ErrorCode::Unsupported, "dimension out of range");
  if (half_length <= 0) fail(ErrorCode::NonPositive, "cylinder half-length");
  return ConvexBody(ball_dim + 1, BallCylinderRep{ball_dim, half_length});
}

ConvexBody ConvexBody::ball(int dim, double radius) {
  if (radius <= 0) fail(ErrorCode::NonPositive, "ball radius");
  return ellipsoid(Vec::Zero(dim), radius * radius * Mat::Identity(dim, dim));
}

ConvexBody ConvexBody::with_cached_dual() const {
  if (dual_) return *this;
  ConvexBody out = *this;
  out.dual_ = std::make_shared<const ConvexBody>(hull_convert(*this));
  return out;
}

double ConvexBody::circumradius_upper() const {
  switch (kind()) {
    case RepKind::VPolytope:
      return vrep().vertices.rowwise().norm().maxCoeff();
    case RepKind::HPolytope: {
      if (dual_) return dual_->circumradius_upper();
      // loose but sound: sqrt(n) * max over axis directions of the support
      double m = 0;
      for (int j = 0; j < dim_; ++j) {
        Vec u = Vec::Zero(dim_);
        u[j] = 1.0;
        m = std::max({m, std::abs(support(*this, u)), std::abs(support(*this, -u))});
      }
      return m * std::sqrt(static_cast<double>(dim_));
    }
    case RepKind::Ellipsoid: {
      Eigen::SelfAdjointEigenSolver<Mat> eig(erep().shape);
      return erep().center.norm() + std::sqrt(eig.eigenvalues().maxCoeff());
    }
    case RepKind::BallCylinder: {
      const auto& c = crep();
      return std::sqrt(1.0 + c.half_length * c.half_length);
    }
  }
  return 0;
}

// ---- Subspace ----

Subspace Subspace::span(const Mat& columns) {
  const int n = static_cast<int>(columns.rows());
  const int k = static_cast<int>(columns.cols());
  if (k == 0) return Subspace(Mat(n, 0));
  Eigen::ColPivHouseholderQR<Mat> qr(columns);
  qr.setThreshold(1e-10);
  const int r = static_cast<int>(qr.rank());
  if (r < k) fail(ErrorCode::DegenerateBody, "subspace columns are rank-deficient");
  Mat Q = qr.householderQ();
  return Subspace(Q.leftCols(k));
}

Subspace Subspace::from_orthonormal(Mat basis) {
  const Mat gram = basis.transpose() * basis;
  const int k = static_cast<int>(basis.cols());
  if ((gram - Mat::Identity(k, k)).lpNorm<Eigen::Infinity>() > 1e-12)
    fail(ErrorCode::DegenerateBody, "basis is not orthonormal");
  return Subspace(std::move(basis));
}

Subspace Subspace::full(int ambient) {
  return Subspace(Mat::Identity(ambient, ambient));
}

Subspace Subspace::zero(int ambient) { return Subspace(Mat(ambient, 0)); }

Subspace Subspace::complement() const {
  const int n = ambient_dim();
  const int k = dim();
  if (k == 0) return full(n);
  Eigen::HouseholderQR<Mat> qr(basis_);
  Mat Q = qr.householderQ();
  return Subspace(Q.rightCols(n - k));
}

Subspace Subspace::direct_sum(const Subspace& other) const {
  if (ambient_dim() != other.ambient_dim())
    fail(ErrorCode::Unsupported, "direct sum of mismatched ambient dimensions");
  if (dim() == 0) return other;
  if (other.dim() == 0) return *this;
  if ((basis_.transpose() * other.basis()).lpNorm<Eigen::Infinity>() > 1e-9)
    fail(ErrorCode::DegenerateBody, "direct sum of non-orthogonal subspaces");
  Mat joined(ambient_dim(), dim() + other.dim());
  joined.leftCols(dim()) = basis_;
  joined.rightCols(other.dim()) = other.basis();
  return span(joined);
}

// ---- AffinePosition ----

AffinePosition AffinePosition::identity(int dim) {
  return {Mat::Identity(dim, dim), Vec::Zero(dim)};
}
AffinePosition AffinePosition::translation(const Vec& t) {
  return {Mat::Identity(static_cast<int>(t.size()), static_cast<int>(t.size())), t};
}
AffinePosition AffinePosition::linear_map(const Mat& T) {
  return {T, Vec::Zero(T.rows())};
}

ConvexBody AffinePosition::apply(const ConvexBody& K) const {
  return translate(linear_image(K, linear), shift);
}

AffinePosition AffinePosition::compose(const AffinePosition& inner) const {
  return {linear * inner.linear, linear * inner.shift + shift};
}

AffinePosition AffinePosition::inverse() const {
  Mat inv = linear.partialPivLu().inverse();
  return {inv, -inv * shift};
}

double AffinePosition::det() const { return linear.partialPivLu().determinant(); }

double AffinePosition::condition_number() const {
  Eigen::JacobiSVD<Mat> svd(linear);
  const double smin = svd.singularValues().minCoeff();
  if (smin <= 0) return std::numeric_limits<double>::infinity();
  return svd.singularValues().maxCoeff() / smin;
}

}  // namespace cpl
