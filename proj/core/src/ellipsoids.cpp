#include "cpl/ellipsoids.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "cpl/body_ops.hpp"
#include "cpl/constants.hpp"
#include "cpl/errors.hpp"
#include "cpl/nelder_mead.hpp"

namespace cpl {

Mat mvee_centered(const Mat& points, double tol, int max_iter) {
  const int m = static_cast<int>(points.rows());
  const int n = static_cast<int>(points.cols());
  if (m < n) fail(ErrorCode::DegenerateBody, "too few points for a centered MVEE");
  const double dn = static_cast<double>(n);

  Vec u = Vec::Constant(m, 1.0 / m);
  Mat M = Mat::Zero(n, n);
  for (int i = 0; i < m; ++i)
    M += u[i] * points.row(i).transpose() * points.row(i);
  Mat Minv = M.ldlt().solve(Mat::Identity(n, n));
  Vec kappa(m);
  for (int i = 0; i < m; ++i)
    kappa[i] = points.row(i) * (Minv * points.row(i).transpose());

  for (int iter = 0; iter < max_iter; ++iter) {
    int iplus = 0, iminus = -1;
    double kmax = -1.0, kmin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i) {
      if (kappa[i] > kmax) { kmax = kappa[i]; iplus = i; }
      if (u[i] > 1e-15 && kappa[i] < kmin) { kmin = kappa[i]; iminus = i; }
    }
    const double up_gap = kmax / dn - 1.0;
    const double down_gap = iminus >= 0 ? 1.0 - kmin / dn : 0.0;
    if (up_gap < tol && down_gap < tol) break;

    int j;
    double lambda;
    if (up_gap >= down_gap) {
      j = iplus;
      lambda = (kmax - dn) / (dn * (kmax - 1.0));
    } else {
      // away step; the interior optimum formula only applies for kappa > 1,
      // a point with kappa <= 1 is simply dropped
      j = iminus;
      lambda = kmin > 1.0 + 1e-12
                   ? (kmin - dn) / (dn * (kmin - 1.0))
                   : -std::numeric_limits<double>::infinity();
      lambda = std::max(lambda, -u[j] / (1.0 - u[j]));  // keep u[j] >= 0
    }
    const Vec q = points.row(j).transpose();
    const Vec w = Minv * q;
    const double kq = kappa[j];
    // M_new = (1-lambda) M + lambda q q^T; Sherman-Morrison on the inverse
    const double bfac = lambda / (1.0 - lambda);
    const double denom = 1.0 + bfac * kq;
    Minv = (Minv - (bfac / denom) * (w * w.transpose())) / (1.0 - lambda);
    u *= (1.0 - lambda);
    u[j] += lambda;
    if (u[j] < 0) u[j] = 0;
    if ((iter & 1023) == 1023) {
      // periodic refactorization against rank-one update drift
      Mat Mfresh = Mat::Zero(n, n);
      for (int i = 0; i < m; ++i)
        Mfresh += u[i] * points.row(i).transpose() * points.row(i);
      Minv = Mfresh.ldlt().solve(Mat::Identity(n, n));
    }
    // refresh kappa
    for (int i = 0; i < m; ++i)
      kappa[i] = points.row(i) * (Minv * points.row(i).transpose());
  }
  // containing ellipsoid { x : x^T (n M)^{-1} x <= 1 }, shape = n M
  Mat Mfinal = Mat::Zero(n, n);
  for (int i = 0; i < m; ++i)
    Mfinal += u[i] * points.row(i).transpose() * points.row(i);
  return dn * 0.5 * (Mfinal + Mfinal.transpose());
}

EllipsoidRep mvee(const Mat& points, double tol, int max_iter) {
  const int m = static_cast<int>(points.rows());
  const int n = static_cast<int>(points.cols());
  Mat lifted(m, n + 1);
  lifted.leftCols(n) = points;
  lifted.col(n).setOnes();
  const Mat A = mvee_centered(lifted, tol, max_iter);
  const Mat B = A.ldlt().solve(Mat::Identity(n + 1, n + 1));
  // slice the lifted ellipsoid by z = 1
  const Mat B11 = B.topLeftCorner(n, n);
  const Vec b = B.topRightCorner(n, 1);
  const double beta = B(n, n);
  Eigen::LDLT<Mat> ldlt(B11);
  const Vec c = -ldlt.solve(b);
  const double rho = 1.0 - beta + c.dot(B11 * c);
  Mat shape = rho * ldlt.solve(Mat::Identity(n, n));
  return EllipsoidRep{c, 0.5 * (shape + shape.transpose())};
}

namespace {

// shape of the largest ellipsoid centered at z inscribed in the H-polytope
Mat inscribed_shape_at(const Mat& A, const Vec& b, const Vec& z) {
  Mat P(A.rows(), A.cols());
  for (int i = 0; i < A.rows(); ++i) {
    const double denom = b[i] - A.row(i).dot(z);
    if (denom <= 0) fail(ErrorCode::NotInterior, "center left the body");
    P.row(i) = A.row(i) / denom;
  }
  const Mat S = mvee_centered(P);
  return S.ldlt().solve(Mat::Identity(A.cols(), A.cols()));
}

double neg_log_det(const Mat& A) {
  Eigen::LDLT<Mat> ldlt(A);
  double ld = 0.0;
  for (int i = 0; i < A.cols(); ++i) ld += std::log(ldlt.vectorD()[i]);
  return -ld;
}

}  // namespace

ConvexBody john_ellipsoid(const ConvexBody& K) {
  const int n = K.dim();
  switch (K.kind()) {
    case RepKind::Ellipsoid:
      return K;
    case RepKind::BallCylinder: {
      const auto& c = K.crep();
      Vec diag = Vec::Ones(n);
      diag[n - 1] = c.half_length * c.half_length;
      return ConvexBody::ellipsoid(Vec::Zero(n), diag.asDiagonal());
    }
    default:
      break;
  }
  const ConvexBody H = to_hrep(K);
  const auto& h = H.hrep();
  if (is_origin_symmetric(H)) {
    return ConvexBody::ellipsoid(Vec::Zero(n),
                                 inscribed_shape_at(h.normals, h.offsets,
                                                    Vec::Zero(n)));
  }
  const Vec z0 = chebyshev_center(H);
  const double r0 = (h.offsets - h.normals * z0).minCoeff();
  auto objective = [&](const Vec& z) {
    if ((h.offsets - h.normals * z).minCoeff() <= 1e-3 * r0)
      return 1e100;  // keep iterates well inside
    return neg_log_det(inscribed_shape_at(h.normals, h.offsets, z));
  };
  NelderMeadOptions opt;
  opt.max_iter = 4000;
  opt.xtol = 1e-11 * std::max(1.0, z0.norm() + r0);
  opt.init_step = 0.25 * r0;
  const NelderMeadResult res = nelder_mead(objective, z0, opt);
  return ConvexBody::ellipsoid(res.x,
                               inscribed_shape_at(h.normals, h.offsets, res.x));
}

ConvexBody loewner_ellipsoid(const ConvexBody& K) {
  const int n = K.dim();
  switch (K.kind()) {
    case RepKind::Ellipsoid:
      return K;
    case RepKind::BallCylinder: {
      // closed form for the product body: semiaxes a^2 = (k+1)/k on the ball
      // block (k = ball_dim), b^2 = (k+1) h^2 on the segment axis
      const auto& c = K.crep();
      const double k = static_cast<double>(c.ball_dim);
      Vec diag = Vec::Constant(n, (k + 1.0) / k);
      diag[n - 1] = (k + 1.0) * c.half_length * c.half_length;
      return ConvexBody::ellipsoid(Vec::Zero(n), diag.asDiagonal());
    }
    default:
      break;
  }
  const ConvexBody V = to_vrep(K);
  const Mat& pts = V.vrep().vertices;
  if (is_origin_symmetric(V))
    return ConvexBody::ellipsoid(Vec::Zero(n), mvee_centered(pts));
  EllipsoidRep e = mvee(pts);
  return ConvexBody::ellipsoid(e.center, e.shape);
}

}  // namespace cpl
