#pragma once

#include <cstdint>
#include <functional>
#include <memory>

#include "cpl/body.hpp"
#include "cpl/constants.hpp"

namespace cpl {

// Monte Carlo value with its standard error. Reproducible: the same seed and
// body give a bit-identical mean regardless of thread count.
struct Estimate {
  double mean = 0.0;
  double stderr_ = 0.0;
  int64_t n_samples = 0;
  uint64_t seed = 0;

  double upper(double k = 3.0) const { return mean + k * stderr_; }
  double lower(double k = 3.0) const { return mean - k * stderr_; }
};

struct SamplerConfig {
  uint64_t seed = 1;
  int64_t n_samples = DEFAULT_SAMPLES;
  uint64_t stream_id = 0;

  SamplerConfig with_seed(uint64_t s) const { auto c = *this; c.seed = s; return c; }
  SamplerConfig with_stream(uint64_t s) const { auto c = *this; c.stream_id = s; return c; }
  SamplerConfig with_samples(int64_t n) const { auto c = *this; c.n_samples = n; return c; }
};

// worker threads (env CPL_THREADS caps; >= 1)
int thread_count();

// Deterministic map-reduce over fixed 4096-sample chunks: `chunk_eval` fills
// values for samples [start, start+count); partial sums are combined in chunk
// order, so the result never depends on the thread count.
Estimate run_mc(const SamplerConfig& cfg,
                const std::function<void(int64_t, int, double*)>& chunk_eval);

// run f(i) for i in [0, n) on the worker pool (results must be index-stored)
void parallel_for_indexed(int64_t n, const std::function<void(int64_t)>& f);

// Immutable evaluation handle for one body: representation conversions done
// once, then gauge / support evaluate in vectorized batches. Columns of the
// batch matrices are points.
class BodyEval {
 public:
  explicit BodyEval(const ConvexBody& K);

  int dim() const { return dim_; }
  const ConvexBody& body() const { return *body_; }

  double gauge_at(const Vec& x) const;
  double support_at(const Vec& u) const;
  void gauge_batch(const Mat& X, double* out) const;
  void support_batch(const Mat& U, double* out) const;

  // distance from 0 to the nearest facet plane (gauge requires it positive)
  double interior_radius() const { return interior_radius_; }

 private:
  int dim_;
  std::shared_ptr<const ConvexBody> body_;
  // gauge engine
  enum class GKind { HRep, Ellipsoid, Cylinder } gkind_;
  Mat gA_;        // facet normals (rows)
  Vec gInvB_;     // reciprocal offsets
  Mat eBinv_;     // ellipsoid shape inverse
  Vec eCenter_;
  bool eCentered_ = false;
  // support engine
  enum class SKind { VRep, Ellipsoid, Cylinder } skind_;
  Mat sV_;        // vertices (rows)
  Mat eShape_;
  double cylHalf_ = 0.0;
  int cylBall_ = 0;
  double interior_radius_ = 0.0;
};

// sphere / Gaussian mean estimators (uniform sphere points via normalized
// Gaussians; Gaussian coordinates from the counter cascade)
Estimate estimate_M(const ConvexBody& K, const SamplerConfig& cfg);
Estimate estimate_Mstar(const ConvexBody& K, const SamplerConfig& cfg);
Estimate estimate_ell(const ConvexBody& K, const SamplerConfig& cfg);
Estimate estimate_ell_polar(const ConvexBody& K, const SamplerConfig& cfg);

// ell(K cap E): Gaussian drawn inside the subspace E, lifted, gauged
Estimate estimate_ell_section(const ConvexBody& K, const Subspace& E,
                              const SamplerConfig& cfg);

// engine-level variants evaluating the body T K without transforming it
Estimate estimate_M(const BodyEval& K, const Mat* T, const SamplerConfig& cfg);
Estimate estimate_Mstar(const BodyEval& K, const Mat* T, const SamplerConfig& cfg);
Estimate estimate_ell(const BodyEval& K, const Mat* T, const SamplerConfig& cfg);
Estimate estimate_ell_polar(const BodyEval& K, const Mat* T, const SamplerConfig& cfg);
Estimate estimate_ell_section(const BodyEval& K, const Subspace& E,
                              const SamplerConfig& cfg);

// M(TK) * M*(TK) in one pass, stderr by the delta method
Estimate estimate_mm_product(const BodyEval& K, const Mat& T,
                             const SamplerConfig& cfg);

// exact volume: polytopes by hull triangulation (dim <= 10), closed forms
// for ellipsoids and cylinders
double exact_volume(const ConvexBody& K);
double unit_ball_volume(int n);

// rejection-sampling volume against a reference with a direct sampler
// (ellipsoid, or axis-aligned cube H-polytope); K must be inside reference
Estimate mc_volume(const ConvexBody& K, const ConvexBody& reference,
                   const SamplerConfig& cfg);

// || id : B_2^n -> K || = sup of the gauge over the unit sphere
double operator_norm_to_body(const ConvexBody& K);

}  // namespace cpl
