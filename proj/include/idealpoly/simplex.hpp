#pragma once

#include <Eigen/Dense>

namespace idealpoly::lp {

// minimize c.x  subject to  A x = b,  x >= 0.
struct StandardFormLp {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  Eigen::VectorXd c;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  Eigen::VectorXd x;
  double objective = 0.0;
  double phaseOneObjective = 0.0;  // sum of artificials at the end of phase 1
  long pivots = 0;
};

struct SimplexOptions {
  double pivotTolerance = 1e-11;
  double feasibilityTolerance = 1e-9;
  long iterationCap = 1'000'000;
};

// Dense two-phase tableau simplex with Bland's rule. Deterministic.
// Throws NumericalFailure when the pivot count exceeds the cap.
LpSolution solveStandardForm(const StandardFormLp& problem, const SimplexOptions& options = {});

}  // namespace idealpoly::lp
