#include "cpl/estimators.hpp"

#include <Eigen/Dense>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <thread>
#include <vector>

#include "cpl/body_ops.hpp"
#include "cpl/errors.hpp"
#include "cpl/hull.hpp"
#include "cpl/rng.hpp"

namespace cpl {
namespace {

constexpr int kChunk = 4096;

struct Partial {
  double sum = 0.0, sumsq = 0.0;
};

}  // namespace

int thread_count() {
  static const int cached = [] {
    if (const char* env = std::getenv("CPL_THREADS")) {
      const int v = std::atoi(env);
      if (v >= 1) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
  }();
  return cached;
}

void parallel_for_indexed(int64_t n, const std::function<void(int64_t)>& f) {
  const int workers = static_cast<int>(std::min<int64_t>(thread_count(), n));
  if (workers <= 1) {
    for (int64_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<int64_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::exception_ptr first_error;
  std::mutex err_mutex;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (true) {
        const int64_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          f(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

Estimate run_mc(const SamplerConfig& cfg,
                const std::function<void(int64_t, int, double*)>& chunk_eval) {
  const int64_t n = cfg.n_samples;
  if (n <= 0) fail(ErrorCode::NonPositive, "n_samples");
  const int64_t n_chunks = (n + kChunk - 1) / kChunk;
  std::vector<Partial> parts(n_chunks);
  parallel_for_indexed(n_chunks, [&](int64_t c) {
    const int64_t start = c * kChunk;
    const int count = static_cast<int>(std::min<int64_t>(kChunk, n - start));
    double buf[kChunk];
    chunk_eval(start, count, buf);
    Partial p;
    for (int i = 0; i < count; ++i) {
      p.sum += buf[i];
      p.sumsq += buf[i] * buf[i];
    }
    parts[c] = p;
  });
  double sum = 0.0, sumsq = 0.0;
  for (const Partial& p : parts) {
    sum += p.sum;
    sumsq += p.sumsq;
  }
  Estimate e;
  e.n_samples = n;
  e.seed = cfg.seed;
  e.mean = sum / static_cast<double>(n);
  const double var =
      n > 1 ? std::max(0.0, (sumsq - n * e.mean * e.mean) / (n - 1)) : 0.0;
  e.stderr_ = std::sqrt(var / static_cast<double>(n));
  return e;
}

// ---- BodyEval ----

BodyEval::BodyEval(const ConvexBody& K) : dim_(K.dim()) {
  body_ = std::make_shared<const ConvexBody>(K);
  switch (K.kind()) {
    case RepKind::VPolytope:
    case RepKind::HPolytope: {
      const ConvexBody H = to_hrep(K);
      const ConvexBody V = to_vrep(K);
      gkind_ = GKind::HRep;
      gA_ = H.hrep().normals;
      gInvB_ = H.hrep().offsets.cwiseInverse();
      interior_radius_ = H.hrep().offsets.minCoeff();
      skind_ = SKind::VRep;
      sV_ = V.vrep().vertices;
      break;
    }
    case RepKind::Ellipsoid: {
      const auto& e = K.erep();
      gkind_ = GKind::Ellipsoid;
      skind_ = SKind::Ellipsoid;
      Eigen::LDLT<Mat> ldlt(e.shape);
      eBinv_ = ldlt.solve(Mat::Identity(dim_, dim_));
      eBinv_ = 0.5 * (eBinv_ + eBinv_.transpose()).eval();
      eCenter_ = e.center;
      eShape_ = e.shape;
      eCentered_ = e.center.norm() < 1e-14;
      interior_radius_ = interior_radius_at_origin(K);
      break;
    }
    case RepKind::BallCylinder: {
      gkind_ = GKind::Cylinder;
      skind_ = SKind::Cylinder;
      cylBall_ = K.crep().ball_dim;
      cylHalf_ = K.crep().half_length;
      interior_radius_ = std::min(1.0, cylHalf_);
      break;
    }
  }
}

double BodyEval::gauge_at(const Vec& x) const {
  double out;
  gauge_batch(x, &out);
  return out;
}

double BodyEval::support_at(const Vec& u) const {
  double out;
  support_batch(u, &out);
  return out;
}

void BodyEval::gauge_batch(const Mat& X, double* out) const {
  const int B = static_cast<int>(X.cols());
  switch (gkind_) {
    case GKind::HRep: {
      const Mat R = gA_ * X;  // F x B
      for (int j = 0; j < B; ++j)
        out[j] = std::max(0.0, (R.col(j).array() * gInvB_.array()).maxCoeff());
      return;
    }
    case GKind::Ellipsoid: {
      if (eCentered_) {
        for (int j = 0; j < B; ++j) {
          const double q = X.col(j).dot(eBinv_ * X.col(j));
          out[j] = std::sqrt(std::max(0.0, q));
        }
        return;
      }
      const Vec Bc = eBinv_ * eCenter_;
      const double gamma = eCenter_.dot(Bc);
      for (int j = 0; j < B; ++j) {
        const double alpha = X.col(j).dot(eBinv_ * X.col(j));
        const double beta = X.col(j).dot(Bc);
        out[j] = alpha <= 0 ? 0.0
                            : (std::sqrt(beta * beta + (1.0 - gamma) * alpha) -
                               beta) / (1.0 - gamma);
      }
      return;
    }
    case GKind::Cylinder: {
      for (int j = 0; j < B; ++j) {
        const double head = X.col(j).head(cylBall_).norm();
        out[j] = std::max(head, std::abs(X(cylBall_, j)) / cylHalf_);
      }
      return;
    }
  }
}

void BodyEval::support_batch(const Mat& U, double* out) const {
  const int B = static_cast<int>(U.cols());
  switch (skind_) {
    case SKind::VRep: {
      const Mat R = sV_ * U;  // V x B
      for (int j = 0; j < B; ++j) out[j] = R.col(j).maxCoeff();
      return;
    }
    case SKind::Ellipsoid: {
      for (int j = 0; j < B; ++j) {
        const double q = U.col(j).dot(eShape_ * U.col(j));
        out[j] = eCenter_.dot(U.col(j)) + std::sqrt(std::max(0.0, q));
      }
      return;
    }
    case SKind::Cylinder: {
      for (int j = 0; j < B; ++j) {
        out[j] = U.col(j).head(cylBall_).norm() +
                 cylHalf_ * std::abs(U(cylBall_, j));
      }
      return;
    }
  }
}

// ---- estimators ----

namespace {

enum class PointLaw { Sphere, Gaussian };
enum class Functional { Gauge, Support };

// draw the chunk of sample points into columns of X
void draw_points(const CounterRng& rng, PointLaw law, int dim, int64_t start,
                 int count, Mat& X) {
  X.resize(dim, count);
  for (int j = 0; j < count; ++j) {
    const uint64_t base = static_cast<uint64_t>(start + j) * dim;
    for (int i = 0; i < dim; ++i) X(i, j) = rng.gaussian(base + i);
    if (law == PointLaw::Sphere) {
      const double r = X.col(j).norm();
      if (r > 0) X.col(j) /= r;
    }
  }
}

Estimate estimate_functional(const BodyEval& K, const Mat* T, PointLaw law,
                             Functional fn, const SamplerConfig& cfg) {
  const int dim = K.dim();
  // gauge of T K at x is gauge of K at T^{-1} x; support of T K at u is
  // support of K at T^T u
  Mat pre;
  bool use_pre = false;
  if (T != nullptr) {
    use_pre = true;
    if (fn == Functional::Gauge)
      pre = T->partialPivLu().inverse();
    else
      pre = T->transpose();
  }
  const CounterRng rng(cfg.seed, cfg.stream_id);
  return run_mc(cfg, [&, use_pre](int64_t start, int count, double* out) {
    Mat X;
    draw_points(rng, law, dim, start, count, X);
    if (use_pre) X = pre * X;
    if (fn == Functional::Gauge)
      K.gauge_batch(X, out);
    else
      K.support_batch(X, out);
  });
}

void require_interior_for_gauge(const BodyEval& K) {
  if (K.interior_radius() <= TAU_GEOM * K.body().circumradius_upper())
    fail(ErrorCode::NotInterior, "estimator requires 0 in the interior");
}

}  // namespace

Estimate estimate_M(const BodyEval& K, const Mat* T, const SamplerConfig& cfg) {
  require_interior_for_gauge(K);
  return estimate_functional(K, T, PointLaw::Sphere, Functional::Gauge, cfg);
}
Estimate estimate_Mstar(const BodyEval& K, const Mat* T, const SamplerConfig& cfg) {
  return estimate_functional(K, T, PointLaw::Sphere, Functional::Support, cfg);
}
Estimate estimate_ell(const BodyEval& K, const Mat* T, const SamplerConfig& cfg) {
  require_interior_for_gauge(K);
  return estimate_functional(K, T, PointLaw::Gaussian, Functional::Gauge, cfg);
}
Estimate estimate_ell_polar(const BodyEval& K, const Mat* T, const SamplerConfig& cfg) {
  return estimate_functional(K, T, PointLaw::Gaussian, Functional::Support, cfg);
}

Estimate estimate_M(const ConvexBody& K, const SamplerConfig& cfg) {
  return estimate_M(BodyEval(K), nullptr, cfg);
}
Estimate estimate_Mstar(const ConvexBody& K, const SamplerConfig& cfg) {
  return estimate_Mstar(BodyEval(K), nullptr, cfg);
}
Estimate estimate_ell(const ConvexBody& K, const SamplerConfig& cfg) {
  return estimate_ell(BodyEval(K), nullptr, cfg);
}
Estimate estimate_ell_polar(const ConvexBody& K, const SamplerConfig& cfg) {
  return estimate_ell_polar(BodyEval(K), nullptr, cfg);
}

Estimate estimate_ell_section(const BodyEval& K, const Subspace& E,
                              const SamplerConfig& cfg) {
  require_interior_for_gauge(K);
  const int k = E.dim();
  if (k == 0) fail(ErrorCode::Unsupported, "ell of a zero-dimensional section");
  const Mat U = E.basis();
  const CounterRng rng(cfg.seed, cfg.stream_id);
  return run_mc(cfg, [&](int64_t start, int count, double* out) {
    Mat G;
    draw_points(rng, PointLaw::Gaussian, k, start, count, G);
    const Mat X = U * G;
    K.gauge_batch(X, out);
  });
}

Estimate estimate_ell_section(const ConvexBody& K, const Subspace& E,
                              const SamplerConfig& cfg) {
  return estimate_ell_section(BodyEval(K), E, cfg);
}

Estimate estimate_mm_product(const BodyEval& K, const Mat& T,
                             const SamplerConfig& cfg) {
  require_interior_for_gauge(K);
  const int dim = K.dim();
  const Mat Tinv = T.partialPivLu().inverse();
  const Mat Tt = T.transpose();
  const CounterRng rng(cfg.seed, cfg.stream_id);
  const int64_t n = cfg.n_samples;
  const int64_t n_chunks = (n + kChunk - 1) / kChunk;
  struct P2 { double s1 = 0, s2 = 0, s11 = 0, s22 = 0, s12 = 0; };
  std::vector<P2> parts(n_chunks);
  parallel_for_indexed(n_chunks, [&](int64_t c) {
    const int64_t start = c * kChunk;
    const int count = static_cast<int>(std::min<int64_t>(kChunk, n - start));
    Mat X;
    draw_points(rng, PointLaw::Sphere, dim, start, count, X);
    double g[kChunk], h[kChunk];
    const Mat Xg = Tinv * X;
    K.gauge_batch(Xg, g);
    const Mat Xs = Tt * X;
    K.support_batch(Xs, h);
    P2 p;
    for (int i = 0; i < count; ++i) {
      p.s1 += g[i];
      p.s2 += h[i];
      p.s11 += g[i] * g[i];
      p.s22 += h[i] * h[i];
      p.s12 += g[i] * h[i];
    }
    parts[c] = p;
  });
  P2 tot;
  for (const P2& p : parts) {
    tot.s1 += p.s1; tot.s2 += p.s2;
    tot.s11 += p.s11; tot.s22 += p.s22; tot.s12 += p.s12;
  }
  const double nn = static_cast<double>(n);
  const double m1 = tot.s1 / nn, m2 = tot.s2 / nn;
  const double v1 = std::max(0.0, (tot.s11 - nn * m1 * m1) / (nn - 1));
  const double v2 = std::max(0.0, (tot.s22 - nn * m2 * m2) / (nn - 1));
  const double cv = (tot.s12 - nn * m1 * m2) / (nn - 1);
  Estimate e;
  e.n_samples = n;
  e.seed = cfg.seed;
  e.mean = m1 * m2;
  // delta method for the product of two correlated means
  const double var =
      (m2 * m2 * v1 + m1 * m1 * v2 + 2.0 * m1 * m2 * cv) / nn;
  e.stderr_ = std::sqrt(std::max(0.0, var));
  return e;
}

// ---- volumes ----

double unit_ball_volume(int n) {
  return std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

double exact_volume(const ConvexBody& K) {
  switch (K.kind()) {
    case RepKind::Ellipsoid: {
      Eigen::LLT<Mat> llt(K.erep().shape);
      double det = 1.0;
      for (int i = 0; i < K.dim(); ++i) det *= llt.matrixL()(i, i);
      return unit_ball_volume(K.dim()) * det;
    }
    case RepKind::BallCylinder:
      return unit_ball_volume(K.crep().ball_dim) * 2.0 * K.crep().half_length;
    case RepKind::VPolytope:
    case RepKind::HPolytope: {
      if (K.dim() > MAX_EXACT_VOLUME_DIM)
        fail(ErrorCode::Unsupported, "exact volume limited to dim <= 10");
      const ConvexBody V = to_vrep(K);
      return convex_hull(V.vrep().vertices).volume;
    }
  }
  fail(ErrorCode::Unsupported, "exact_volume");
}

Estimate mc_volume(const ConvexBody& K, const ConvexBody& reference,
                   const SamplerConfig& cfg) {
  const int n = K.dim();
  // verify containment on the vertices (or a dense boundary net)
  if (K.is_polytope()) {
    const Mat& V = to_vrep(K).vrep().vertices;
    for (int i = 0; i < V.rows(); ++i)
      if (!member(reference, V.row(i).transpose(), 1e-9))
        fail(ErrorCode::ContainmentViolated, "K escapes the reference body");
  }
  double ref_vol = 0.0;
  enum class Ref { Ellipsoid, Box } ref_kind;
  Vec box_lo, box_hi;
  Mat ell_L;
  Vec ell_c;
  if (reference.is_ellipsoid()) {
    ref_kind = Ref::Ellipsoid;
    ref_vol = exact_volume(reference);
    Eigen::LLT<Mat> llt(reference.erep().shape);
    ell_L = llt.matrixL();
    ell_c = reference.erep().center;
  } else if (reference.is_hpolytope()) {
    // must be an axis-aligned box
    const auto& h = reference.hrep();
    box_lo = Vec::Constant(n, std::numeric_limits<double>::quiet_NaN());
    box_hi = box_lo;
    for (int i = 0; i < h.normals.rows(); ++i) {
      int axis = -1;
      for (int j = 0; j < n; ++j) {
        if (std::abs(std::abs(h.normals(i, j)) - 1.0) < 1e-12) {
          if (axis >= 0) { axis = -2; break; }
          axis = j;
        } else if (std::abs(h.normals(i, j)) > 1e-12) {
          axis = -2;
          break;
        }
      }
      if (axis < 0) fail(ErrorCode::Unsupported, "reference must be a box or ellipsoid");
      if (h.normals(i, axis) > 0) box_hi[axis] = h.offsets[i];
      else box_lo[axis] = -h.offsets[i];
    }
    ref_kind = Ref::Box;
    ref_vol = 1.0;
    for (int j = 0; j < n; ++j) {
      if (!std::isfinite(box_lo[j]) || !std::isfinite(box_hi[j]))
        fail(ErrorCode::Unsupported, "reference box is incomplete");
      ref_vol *= box_hi[j] - box_lo[j];
    }
  } else {
    fail(ErrorCode::Unsupported, "reference must be a box or ellipsoid");
  }

  const CounterRng rng(cfg.seed, cfg.stream_id);
  const ConvexBody KH = K.is_vpolytope() ? to_hrep(K) : K;
  Estimate hits = run_mc(cfg, [&](int64_t start, int count, double* out) {
    for (int j = 0; j < count; ++j) {
      const uint64_t base = static_cast<uint64_t>(start + j) * (n + 1);
      Vec x(n);
      if (ref_kind == Ref::Box) {
        for (int i = 0; i < n; ++i)
          x[i] = rng.uniform(base * 2 + 2 * i, box_lo[i], box_hi[i]);
      } else {
        Vec g(n);
        for (int i = 0; i < n; ++i) g[i] = rng.gaussian(base + i);
        const double r =
            std::pow(rng.uniform(2 * (base + n) + 1), 1.0 / n) / g.norm();
        x = ell_c + ell_L * (r * g);
      }
      out[j] = member(KH, x, 0.0) ? 1.0 : 0.0;
    }
  });
  Estimate e;
  e.n_samples = hits.n_samples;
  e.seed = cfg.seed;
  e.mean = hits.mean * ref_vol;
  const double p = hits.mean;
  e.stderr_ = ref_vol * std::sqrt(std::max(0.0, p * (1.0 - p)) /
                                  static_cast<double>(hits.n_samples));
  return e;
}

double operator_norm_to_body(const ConvexBody& K) {
  require_origin_interior(K, "operator_norm_to_body");
  switch (K.kind()) {
    case RepKind::HPolytope:
      return 1.0 / K.hrep().offsets.minCoeff();
    case RepKind::VPolytope:
      return 1.0 / to_hrep(K).hrep().offsets.minCoeff();
    case RepKind::Ellipsoid: {
      const auto& e = K.erep();
      if (e.center.norm() < 1e-14) {
        Eigen::SelfAdjointEigenSolver<Mat> eig(e.shape);
        return 1.0 / std::sqrt(eig.eigenvalues().minCoeff());
      }
      return 1.0 / interior_radius_at_origin(K);
    }
    case RepKind::BallCylinder:
      return std::max(1.0, 1.0 / K.crep().half_length);
  }
  fail(ErrorCode::Unsupported, "operator_norm_to_body");
}

}  // namespace cpl
