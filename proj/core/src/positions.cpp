#include "cpl/positions.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "cpl/body_ops.hpp"
#include "cpl/constants.hpp"
#include "cpl/ellipsoids.hpp"
#include "cpl/errors.hpp"
#include "cpl/hull.hpp"
#include "cpl/nelder_mead.hpp"
#include "cpl/rng.hpp"

namespace cpl {

Mat spd_sqrt_inverse(const Mat& A) {
  Eigen::SelfAdjointEigenSolver<Mat> eig(A);
  return eig.eigenvectors() *
         eig.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
         eig.eigenvectors().transpose();
}

Mat spd_exp(const Mat& S) {
  Eigen::SelfAdjointEigenSolver<Mat> eig(S);
  return eig.eigenvectors() * eig.eigenvalues().array().exp().matrix().asDiagonal() *
         eig.eigenvectors().transpose();
}

Mat spd_log(const Mat& A) {
  Eigen::SelfAdjointEigenSolver<Mat> eig(A);
  return eig.eigenvectors() * eig.eigenvalues().array().log().matrix().asDiagonal() *
         eig.eigenvectors().transpose();
}

// parameters: dim-1 diagonal deviations (last diagonal = -sum), then the
// strict upper triangle
Mat traceless_symmetric_from(const Vec& params, int dim) {
  Mat S = Mat::Zero(dim, dim);
  double tr = 0.0;
  for (int i = 0; i < dim - 1; ++i) {
    S(i, i) = params[i];
    tr += params[i];
  }
  S(dim - 1, dim - 1) = -tr;
  int k = dim - 1;
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j) {
      S(i, j) = S(j, i) = params[k++];
    }
  return S;
}

Vec params_from_traceless(const Mat& S) {
  const int dim = static_cast<int>(S.rows());
  Vec p(dim - 1 + dim * (dim - 1) / 2);
  for (int i = 0; i < dim - 1; ++i) p[i] = S(i, i);
  int k = dim - 1;
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j) p[k++] = S(i, j);
  return p;
}

double dk_estimate(const ConvexBody& K) {
  const ConvexBody E = john_ellipsoid(K);
  const Mat Si = spd_sqrt_inverse(E.erep().shape);  // maps the ellipsoid to B2
  switch (K.kind()) {
    case RepKind::Ellipsoid:
      return 1.0;
    case RepKind::BallCylinder: {
      // normalized body is B_2^k x [-1, 1]
      return std::sqrt(2.0);
    }
    default: {
      const ConvexBody V = to_vrep(K);
      Mat W = V.vrep().vertices;
      W.rowwise() -= E.erep().center.transpose();
      return (W * Si).rowwise().norm().maxCoeff();
    }
  }
}

// ---- Santalo point ----

namespace {

// cached radial triangulation of (K - z)^polar; exact while the polar hull
// combinatorics stay put, rebuilt when a determinant changes sign
class PolarVolume {
 public:
  PolarVolume(const Mat& A, const Vec& b) : A_(A), b_(b), n_(static_cast<int>(A.cols())) {
    fact_ = 1.0;
    for (int i = 2; i <= n_; ++i) fact_ *= i;
  }

  double log_volume(const Vec& z) {
    Mat W(A_.rows(), n_);
    for (int i = 0; i < A_.rows(); ++i) {
      const double denom = b_[i] - A_.row(i).dot(z);
      if (denom <= 0) return std::numeric_limits<double>::infinity();
      W.row(i) = A_.row(i) / denom;
    }
    if (simplices_.empty() && !rebuild(W)) return std::numeric_limits<double>::infinity();
    double vol = twice_checked_volume(W);
    if (vol < 0) {  // stale combinatorics
      if (!rebuild(W)) return std::numeric_limits<double>::infinity();
      vol = twice_checked_volume(W);
      if (vol < 0) return std::numeric_limits<double>::infinity();
    }
    return std::log(vol / fact_);
  }

 private:
  bool rebuild(const Mat& W) {
    try {
      HullResult h = convex_hull(W);
      simplices_ = std::move(h.simplices);
      signs_.assign(simplices_.size(), 0.0);
      Mat M(n_, n_);
      for (size_t s = 0; s < simplices_.size(); ++s) {
        for (int i = 0; i < n_; ++i) M.col(i) = W.row(simplices_[s][i]).transpose();
        signs_[s] = M.determinant() >= 0 ? 1.0 : -1.0;
      }
      return true;
    } catch (const Error&) {
      return false;
    }
  }

  // returns -1 when a simplex determinant flips sign (combinatorics stale)
  double twice_checked_volume(const Mat& W) const {
    double vol = 0.0;
    Mat M(n_, n_);
    for (size_t s = 0; s < simplices_.size(); ++s) {
      for (int i = 0; i < n_; ++i) M.col(i) = W.row(simplices_[s][i]).transpose();
      const double d = signs_[s] * M.determinant();
      if (d < 0) return -1.0;
      vol += d;
    }
    return vol;
  }

  Mat A_;
  Vec b_;
  int n_;
  double fact_ = 1.0;
  std::vector<std::vector<int>> simplices_;
  std::vector<double> signs_;
};

}  // namespace

Vec santalo_point(const ConvexBody& K) {
  const int n = K.dim();
  if (!K.is_polytope())
    fail(ErrorCode::Unsupported, "santalo_point expects a polytope");
  if (n > MAX_SANTALO_DIM)
    fail(ErrorCode::Unsupported, "santalo_point limited to dim <= 8");
  if (is_origin_symmetric(K)) return Vec::Zero(n);

  const ConvexBody H = to_hrep(K);
  const auto& h = H.hrep();
  PolarVolume f(h.normals, h.offsets);

  // start at the Chebyshev center; fd step 1e-5 of the inradius
  Vec z = chebyshev_center(H);
  const double rin = (h.offsets - h.normals * z).minCoeff();
  const double fd = 1e-5 * rin;
  const double step_tol = 1e-8 * rin;

  double fz = f.log_volume(z);
  for (int iter = 0; iter < 120; ++iter) {
    Vec grad(n);
    Mat hess(n, n);
    for (int i = 0; i < n; ++i) {
      Vec zp = z, zm = z;
      zp[i] += fd;
      zm[i] -= fd;
      const double fp = f.log_volume(zp), fm = f.log_volume(zm);
      grad[i] = (fp - fm) / (2 * fd);
      hess(i, i) = (fp - 2 * fz + fm) / (fd * fd);
      for (int j = i + 1; j < n; ++j) {
        Vec zpp = z, zpm = z, zmp = z, zmm = z;
        zpp[i] += fd; zpp[j] += fd;
        zpm[i] += fd; zpm[j] -= fd;
        zmp[i] -= fd; zmp[j] += fd;
        zmm[i] -= fd; zmm[j] -= fd;
        hess(i, j) = hess(j, i) =
            (f.log_volume(zpp) - f.log_volume(zpm) - f.log_volume(zmp) +
             f.log_volume(zmm)) / (4 * fd * fd);
      }
    }
    // damped Newton step; gradient fallback if the Hessian is not useful
    Vec step;
    Eigen::LDLT<Mat> ldlt(hess);
    if (ldlt.info() == Eigen::Success && ldlt.vectorD().minCoeff() > 0)
      step = -ldlt.solve(grad);
    else
      step = -rin * grad / std::max(1e-12, grad.norm());
    double scale = 1.0;
    bool moved = false;
    for (int halve = 0; halve < 40; ++halve) {
      const Vec zn = z + scale * step;
      if ((h.offsets - h.normals * zn).minCoeff() > 1e-6 * rin) {
        const double fn = f.log_volume(zn);
        if (fn < fz) {
          z = zn;
          fz = fn;
          moved = true;
          break;
        }
      }
      scale *= 0.5;
    }
    if (!moved || scale * step.norm() < step_tol) break;
  }

  // coordinate probes certify a local minimum
  const double probe = 1e-4 * rin;
  for (int i = 0; i < n; ++i) {
    for (double sgn : {1.0, -1.0}) {
      Vec zp = z;
      zp[i] += sgn * probe;
      if (f.log_volume(zp) < fz - 1e-7)
        fail(ErrorCode::CertificateFailed, "santalo probe found a lower value");
    }
  }
  return z;
}

// ---- MM* position ----

PositionResult mmstar_position(const ConvexBody& B, const SamplerConfig& cfg,
                               const MmStarOptions& opt) {
  const int n = B.dim();
  if (!is_origin_symmetric(B))
    fail(ErrorCode::NotSymmetric, "mmstar_position requires a symmetric body");
  const BodyEval eval(B);
  const SamplerConfig search_cfg = cfg.with_samples(
      std::min<int64_t>(cfg.n_samples, opt.search_samples));

  const int p = n - 1 + n * (n - 1) / 2;
  auto objective = [&](const Vec& params) {
    const Mat T = spd_exp(traceless_symmetric_from(params, n));
    return estimate_mm_product(eval, T, search_cfg).mean;
  };

  std::vector<Vec> starts;
  starts.push_back(Vec::Zero(p));
  if (opt.starts >= 2) {
    try {
      const Mat SJ = spd_log(spd_sqrt_inverse(john_ellipsoid(B).erep().shape));
      Mat S0 = SJ - (SJ.trace() / n) * Mat::Identity(n, n);
      starts.push_back(params_from_traceless(S0));
    } catch (const Error&) {}
  }
  if (opt.starts >= 3) {
    try {
      const Mat SL = spd_log(spd_sqrt_inverse(loewner_ellipsoid(B).erep().shape));
      Mat S0 = SL - (SL.trace() / n) * Mat::Identity(n, n);
      starts.push_back(params_from_traceless(S0));
    } catch (const Error&) {}
  }

  Vec best_x = Vec::Zero(p);
  double best_f = objective(best_x);  // identity is always a candidate
  int iters = 0;
  bool converged = false;
  NelderMeadOptions nm;
  nm.max_iter = opt.nm_iters;
  nm.init_step = opt.init_step;
  nm.xtol = 1e-7;
  for (const Vec& s : starts) {
    const NelderMeadResult r = nelder_mead(objective, s, nm);
    iters += r.iterations;
    converged = converged || r.converged;
    if (r.f < best_f) {
      best_f = r.f;
      best_x = r.x;
    }
  }

  const Mat T = spd_exp(traceless_symmetric_from(best_x, n));
  PositionResult res;
  res.position = AffinePosition::linear_map(T);
  res.objective_insample = best_f;
  // fresh seed for the reported objective, avoiding optimization bias
  const SamplerConfig fresh = cfg.with_seed(mix64(cfg.seed ^ 0x5eedf00dULL));
  res.objective_estimate = estimate_mm_product(eval, T, fresh);
  res.objective = res.objective_estimate.mean;
  res.iterations = iters;
  res.converged = converged;
  res.seed = cfg.seed;
  return res;
}

// ---- M-ellipsoid candidate ----

namespace {

// deterministic direction net: seeded sphere points plus facet normals and
// coordinate axes
Mat direction_net(int n, int count, const Mat* extra) {
  CounterRng rng(0xD15C0, 29);
  const int base = count;
  const int extra_rows = extra ? static_cast<int>(extra->rows()) : 0;
  Mat U(base + extra_rows + 2 * n, n);
  for (int i = 0; i < base; ++i)
    U.row(i) = rng.sphere_vector(n, static_cast<uint64_t>(i) * 2 * n).transpose();
  if (extra) U.middleRows(base, extra_rows) = *extra;
  for (int j = 0; j < n; ++j) {
    U.row(base + extra_rows + 2 * j).setZero();
    U(base + extra_rows + 2 * j, j) = 1.0;
    U.row(base + extra_rows + 2 * j + 1).setZero();
    U(base + extra_rows + 2 * j + 1, j) = -1.0;
  }
  for (int i = 0; i < U.rows(); ++i) U.row(i).normalize();
  return U;
}

double volume_of_support_net(const Mat& dirs, const Vec& values) {
  return exact_volume(ConvexBody::hpolytope(dirs, values));
}

}  // namespace

MEllipsoidResult m_ellipsoid_candidate(const ConvexBody& K,
                                       const SamplerConfig& cfg) {
  const int n = K.dim();
  if (n > MAX_SANTALO_DIM)
    fail(ErrorCode::Unsupported, "m_ellipsoid_candidate limited to dim <= 8");
  const Vec z = santalo_point(K);
  const ConvexBody K0 = translate(K, -z);
  const ConvexBody D = central_intersection(K0);
  const double volD = exact_volume(D);

  const PositionResult pos = mmstar_position(D, cfg);
  const Mat& T = pos.position.linear;
  const double rho = std::pow(volD / unit_ball_volume(n), 1.0 / n);
  const Mat Tinv = T.partialPivLu().inverse();
  Mat shape = rho * rho * (Tinv * Tinv.transpose());
  const ConvexBody E = ConvexBody::ellipsoid(Vec::Zero(n), 0.5 * (shape + shape.transpose()));

  const int net_points = std::min(120 * n, 720);
  const ConvexBody K0h = to_hrep(K0);
  const Mat net = direction_net(n, net_points, &K0h.hrep().normals);

  auto bracket_ratio = [&](const ConvexBody& body, const ConvexBody& ell) {
    // outer polytope of body + ell via summed support values
    Vec hsum(net.rows());
    const BodyEval be(body), ee(ell);
    std::vector<double> hb(net.rows()), he(net.rows());
    be.support_batch(net.transpose(), hb.data());
    ee.support_batch(net.transpose(), he.data());
    for (int i = 0; i < net.rows(); ++i) hsum[i] = hb[i] + he[i];
    const double vol_sum_outer = volume_of_support_net(net, hsum);
    // inner polytope of ell: boundary points where the support is attained
    const Mat& A = ell.erep().shape;
    Mat pts(net.rows(), n);
    for (int i = 0; i < net.rows(); ++i) {
      const Vec u = net.row(i).transpose();
      pts.row(i) = (A * u / std::sqrt(u.dot(A * u))).transpose();
    }
    const ConvexBody Ein = ConvexBody::vpolytope(pts);
    const double vol_cap_inner = exact_volume(intersect_bodies(body, Ein));
    return std::pow(vol_sum_outer / vol_cap_inner, 1.0 / n);
  };

  MEllipsoidResult out{E, 0, 0, 0, 0, 0, Vec()};
  out.santalo_shift = z;
  out.ratio_sum = bracket_ratio(K0, E);
  out.ratio_polar = bracket_ratio(polar(K0h), polar(E));
  out.ratio_symmetrization = std::pow(
      exact_volume(conv_union_reflection(K0)) / volD, 1.0 / n);
  out.ratio_covering =
      2.0 * std::pow(exact_volume(difference_body(K0)) / volD, 1.0 / n);
  {
    // bracket quality of the net on E itself
    const BodyEval ee(E);
    Vec he(net.rows());
    std::vector<double> tmp(net.rows());
    ee.support_batch(net.transpose(), tmp.data());
    for (int i = 0; i < net.rows(); ++i) he[i] = tmp[i];
    const double vout = volume_of_support_net(net, he);
    const Mat& A = E.erep().shape;
    Mat pts(net.rows(), n);
    for (int i = 0; i < net.rows(); ++i) {
      const Vec u = net.row(i).transpose();
      pts.row(i) = (A * u / std::sqrt(u.dot(A * u))).transpose();
    }
    const double vin = exact_volume(ConvexBody::vpolytope(pts));
    out.bracket_gap = std::pow(vout / vin, 1.0 / n);
  }
  return out;
}

}  // namespace cpl
