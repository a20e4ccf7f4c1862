#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <functional>
#include <vector>

namespace cpl {

struct NelderMeadOptions {
  int max_iter = 2000;
  double xtol = 1e-9;    // simplex diameter
  double ftol = 1e-13;   // function spread
  double init_step = 0.1;
};

struct NelderMeadResult {
  Eigen::VectorXd x;
  double f = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Downhill simplex with the dimension-adaptive coefficients of Gao-Han,
// which behave much better than the classic ones in 20+ dimensions.
// Deterministic for a fixed starting point.
inline NelderMeadResult nelder_mead(
    const std::function<double(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& x0, const NelderMeadOptions& opt = {}) {
  using Vec = Eigen::VectorXd;
  const int n = static_cast<int>(x0.size());
  const double dn = static_cast<double>(std::max(n, 2));
  const double alpha = 1.0;
  const double beta = 1.0 + 2.0 / dn;    // expansion
  const double gamma = 0.75 - 0.5 / dn;  // contraction
  const double delta = 1.0 - 1.0 / dn;   // shrink

  std::vector<Vec> xs(n + 1, x0);
  std::vector<double> fs(n + 1);
  for (int i = 1; i <= n; ++i) xs[i][i - 1] += opt.init_step;
  for (int i = 0; i <= n; ++i) fs[i] = f(xs[i]);

  std::vector<int> ord(n + 1);
  NelderMeadResult res;
  int iter = 0;
  for (; iter < opt.max_iter; ++iter) {
    for (int i = 0; i <= n; ++i) ord[i] = i;
    std::stable_sort(ord.begin(), ord.end(),
                     [&](int a, int b) { return fs[a] < fs[b]; });
    const int best = ord[0], worst = ord[n], second = ord[n - 1];

    double diam = 0.0;
    for (int i = 1; i <= n; ++i)
      diam = std::max(diam, (xs[ord[i]] - xs[best]).lpNorm<Eigen::Infinity>());
    if (diam < opt.xtol && fs[worst] - fs[best] < opt.ftol) {
      res.converged = true;
      break;
    }

    Vec centroid = Vec::Zero(n);
    for (int i = 0; i <= n; ++i)
      if (i != worst) centroid += xs[i];
    centroid /= n;

    const Vec xr = centroid + alpha * (centroid - xs[worst]);
    const double fr = f(xr);
    if (fr < fs[best]) {
      const Vec xe = centroid + beta * (xr - centroid);
      const double fe = f(xe);
      if (fe < fr) { xs[worst] = xe; fs[worst] = fe; }
      else { xs[worst] = xr; fs[worst] = fr; }
    } else if (fr < fs[second]) {
      xs[worst] = xr;
      fs[worst] = fr;
    } else {
      const bool outside = fr < fs[worst];
      const Vec xc = outside ? Vec(centroid + gamma * (xr - centroid))
                             : Vec(centroid - gamma * (xr - centroid));
      const double fc = f(xc);
      if (fc < (outside ? fr : fs[worst])) {
        xs[worst] = xc;
        fs[worst] = fc;
      } else {
        for (int i = 0; i <= n; ++i) {
          if (i == best) continue;
          xs[i] = xs[best] + delta * (xs[i] - xs[best]);
          fs[i] = f(xs[i]);
        }
      }
    }
  }
  int best = 0;
  for (int i = 1; i <= n; ++i)
    if (fs[i] < fs[best]) best = i;
  res.x = xs[best];
  res.f = fs[best];
  res.iterations = iter;
  return res;
}

}  // namespace cpl
