#pragma once

#include <Eigen/Core>

namespace cpl {

struct LpResult {
  enum class Status { Optimal, Infeasible, Unbounded };
  Status status = Status::Infeasible;
  double objective = 0.0;
  Eigen::VectorXd x;
  bool ok() const { return status == Status::Optimal; }
};

// minimize c.x  subject to  A x = b, x >= 0   (two-phase dense simplex)
LpResult lp_standard_min(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                         const Eigen::VectorXd& c);

// maximize c.x  subject to  A x <= b          (x free)
LpResult lp_maximize(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                     const Eigen::VectorXd& c);

}  // namespace cpl
