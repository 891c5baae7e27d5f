#include "idealpoly/simplex.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "idealpoly/error.hpp"

namespace idealpoly::lp {

namespace {

using Tableau = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

class Simplex {
 public:
  Simplex(const StandardFormLp& p, const SimplexOptions& options)
      : m_(static_cast<int>(p.A.rows())),
        n_(static_cast<int>(p.A.cols())),
        options_(options),
        table_(Tableau::Zero(m_ + 1, n_ + m_ + 1)),
        basis_(m_) {
    rhs_ = n_ + m_;
    for (int i = 0; i < m_; ++i) {
      const double sign = p.b(i) < 0.0 ? -1.0 : 1.0;
      table_.row(i).head(n_) = sign * p.A.row(i);
      table_(i, n_ + i) = 1.0;
      table_(i, rhs_) = sign * p.b(i);
      basis_[i] = n_ + i;
    }
  }

  LpSolution solve(const Eigen::VectorXd& cost) {
    LpSolution out;

    // Phase 1: minimize the sum of artificials.
    table_.row(m_).setZero();
    for (int i = 0; i < m_; ++i) {
      table_.row(m_).head(n_) -= table_.row(i).head(n_);
      table_(m_, rhs_) -= table_(i, rhs_);
    }
    run(n_ + m_);
    out.phaseOneObjective = std::max(0.0, -table_(m_, rhs_));
    if (out.phaseOneObjective > options_.feasibilityTolerance) {
      out.status = LpStatus::Infeasible;
      out.pivots = pivots_;
      return out;
    }
    driveOutArtificials();

    // Phase 2 on the original columns only.
    table_.row(m_).setZero();
    table_.row(m_).head(n_) = cost.transpose();
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n_) {
        const double cb = cost(basis_[i]);
        if (cb != 0.0) table_.row(m_) -= cb * table_.row(i);
      }
    }
    if (!run(n_)) {
      out.status = LpStatus::Unbounded;
      out.pivots = pivots_;
      return out;
    }
    out.status = LpStatus::Optimal;
    out.x = Eigen::VectorXd::Zero(n_);
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n_) out.x(basis_[i]) = std::max(0.0, table_(i, rhs_));
    }
    out.objective = cost.dot(out.x);
    out.pivots = pivots_;
    return out;
  }

 private:
  // Bland pivoting over columns [0, columnLimit). False when unbounded.
  bool run(int columnLimit) {
    const double tol = options_.pivotTolerance;
    for (;;) {
      int entering = -1;
      for (int j = 0; j < columnLimit; ++j) {
        if (table_(m_, j) < -tol) {
          entering = j;
          break;
        }
      }
      if (entering < 0) return true;

      int leaving = -1;
      double bestRatio = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m_; ++i) {
        const double a = table_(i, entering);
        if (a <= tol) continue;
        const double ratio = table_(i, rhs_) / a;
        const double tie = 1e-12 * (1.0 + std::abs(ratio));
        if (leaving < 0 || ratio < bestRatio - tie ||
            (ratio <= bestRatio + tie && basis_[i] < basis_[leaving])) {
          bestRatio = ratio;
          leaving = i;
        }
      }
      if (leaving < 0) return false;
      pivot(leaving, entering);
    }
  }

  void pivot(int row, int col) {
    if (++pivots_ > options_.iterationCap) {
      throw Error(ErrorCode::NumericalFailure, "simplex exceeded its pivot cap");
    }
    table_.row(row) /= table_(row, col);
    for (int i = 0; i <= m_; ++i) {
      if (i == row) continue;
      const double f = table_(i, col);
      if (f != 0.0) {
        table_.row(i) -= f * table_.row(row);
        table_(i, col) = 0.0;
      }
    }
    basis_[row] = col;
  }

  // Artificials still basic at level zero are pivoted onto any original
  // column; rows with no such column are redundant and stay inert.
  void driveOutArtificials() {
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n_) continue;
      for (int j = 0; j < n_; ++j) {
        if (std::abs(table_(i, j)) > 1e-9) {
          pivot(i, j);
          break;
        }
      }
    }
  }

  int m_;
  int n_;
  int rhs_ = 0;
  SimplexOptions options_;
  Tableau table_;
  std::vector<int> basis_;
  long pivots_ = 0;
};

}  // namespace

LpSolution solveStandardForm(const StandardFormLp& problem, const SimplexOptions& options) {
  Simplex simplex(problem, options);
  return simplex.solve(problem.c);
}

}  // namespace idealpoly::lp
