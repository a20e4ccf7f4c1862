#include "cpl/lp.hpp"

#include <limits>
#include <vector>

#include "cpl/constants.hpp"

namespace cpl {
namespace {

// Dense tableau simplex on  min c.x, A x = b, x >= 0, b >= 0.
// Dantzig pricing at first, permanent switch to Bland's rule once the
// iteration count suggests stalling, which rules out cycling.
class Tableau {
 public:
  Tableau(const Eigen::MatrixXd& A, const Eigen::VectorXd& b)
      : m_(static_cast<int>(A.rows())), n_(static_cast<int>(A.cols())) {
    T_.resize(m_ + 1, n_ + m_ + 1);
    T_.setZero();
    T_.block(0, 0, m_, n_) = A;
    for (int i = 0; i < m_; ++i) T_(i, n_ + i) = 1.0;  // artificials
    T_.block(0, n_ + m_, m_, 1) = b;
    basis_.resize(m_);
    for (int i = 0; i < m_; ++i) basis_[i] = n_ + i;
  }

  // Phase 1: min sum of artificials. Returns false if infeasible.
  bool phase1() {
    Eigen::VectorXd obj = Eigen::VectorXd::Zero(n_ + m_);
    obj.segment(n_, m_).setOnes();
    set_objective(obj);
    run(n_ + m_);
    if (T_(m_, cols() - 1) < -1e2 * LP_TOL) return false;
    // pivot artificials out of the basis where possible
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n_) continue;
      int enter = -1;
      for (int j = 0; j < n_; ++j) {
        if (std::abs(T_(i, j)) > 1e3 * LP_TOL) { enter = j; break; }
      }
      if (enter >= 0) pivot(i, enter);
      // else: redundant row, harmless to keep (artificial stays at 0)
    }
    return true;
  }

  void phase2(const Eigen::VectorXd& c) {
    Eigen::VectorXd obj = Eigen::VectorXd::Zero(n_ + m_);
    obj.segment(0, n_) = c;
    set_objective(obj);
    unbounded_ = false;
    run(n_);  // artificials are not allowed to re-enter
  }

  bool unbounded() const { return unbounded_; }

  Eigen::VectorXd solution() const {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n_);
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n_) x[basis_[i]] = T_(i, cols() - 1);
    }
    return x;
  }

 private:
  int cols() const { return n_ + m_ + 1; }

  void set_objective(const Eigen::VectorXd& obj) {
    T_.row(m_).setZero();
    T_.row(m_).segment(0, n_ + m_) = obj.transpose();
    for (int i = 0; i < m_; ++i) {
      const double ci = obj[basis_[i]];
      if (ci != 0.0) T_.row(m_) -= ci * T_.row(i);
    }
  }

  void pivot(int row, int col) {
    T_.row(row) /= T_(row, col);
    for (int i = 0; i <= m_; ++i) {
      if (i == row) continue;
      const double f = T_(i, col);
      if (f != 0.0) T_.row(i) -= f * T_.row(row);
    }
    basis_[row] = col;
  }

  void run(int allowed_cols) {
    const long bland_after = 50 + 10L * (m_ + n_);
    long iter = 0;
    while (true) {
      ++iter;
      const bool bland = iter > bland_after;
      int enter = -1;
      double best = -LP_TOL;
      for (int j = 0; j < allowed_cols; ++j) {
        const double rc = T_(m_, j);
        if (rc < -LP_TOL) {
          if (bland) { enter = j; break; }
          if (rc < best) { best = rc; enter = j; }
        }
      }
      if (enter < 0) return;  // optimal
      int leave = -1;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m_; ++i) {
        const double a = T_(i, enter);
        if (a > LP_TOL) {
          const double ratio = T_(i, cols() - 1) / a;
          if (ratio < best_ratio - LP_TOL ||
              (ratio < best_ratio + LP_TOL && leave >= 0 &&
               basis_[i] < basis_[leave])) {
            best_ratio = ratio;
            leave = i;
          }
        }
      }
      if (leave < 0) { unbounded_ = true; return; }
      pivot(leave, enter);
      if (iter > 4 * bland_after + 100000) { unbounded_ = true; return; }
    }
  }

  int m_, n_;
  Eigen::MatrixXd T_;
  std::vector<int> basis_;
  bool unbounded_ = false;
};

}  // namespace

LpResult lp_standard_min(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                         const Eigen::VectorXd& c) {
  Eigen::MatrixXd A2 = A;
  Eigen::VectorXd b2 = b;
  for (int i = 0; i < b2.size(); ++i) {
    if (b2[i] < 0) { A2.row(i) = -A2.row(i); b2[i] = -b2[i]; }
  }
  Tableau t(A2, b2);
  LpResult res;
  if (!t.phase1()) { res.status = LpResult::Status::Infeasible; return res; }
  t.phase2(c);
  if (t.unbounded()) { res.status = LpResult::Status::Unbounded; return res; }
  res.status = LpResult::Status::Optimal;
  res.x = t.solution();
  res.objective = c.dot(res.x);
  return res;
}

LpResult lp_maximize(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                     const Eigen::VectorXd& c) {
  // free x: substitute x = u - v with u, v >= 0; slack per row
  const int m = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  Eigen::MatrixXd As(m, 2 * n + m);
  As.setZero();
  As.block(0, 0, m, n) = A;
  As.block(0, n, m, n) = -A;
  for (int i = 0; i < m; ++i) As(i, 2 * n + i) = 1.0;
  Eigen::VectorXd cs = Eigen::VectorXd::Zero(2 * n + m);
  cs.segment(0, n) = -c;
  cs.segment(n, n) = c;
  LpResult inner = lp_standard_min(As, b, cs);
  LpResult res;
  res.status = inner.status;
  if (!inner.ok()) return res;
  res.x = inner.x.segment(0, n) - inner.x.segment(n, n);
  res.objective = c.dot(res.x);
  return res;
}

}  // namespace cpl
