#include "idealpoly/optvol.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include <Eigen/Dense>

#include "idealpoly/error.hpp"
#include "idealpoly/specfun.hpp"

namespace idealpoly {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kActiveSlack = 1e-6;
constexpr double kBoundaryFlag = 1e-7;

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Orthonormal basis of {x : A x = 0}.
MatrixXd nullSpace(const MatrixXd& a, int cols) {
  if (a.rows() == 0) return MatrixXd::Identity(cols, cols);
  Eigen::FullPivLU<MatrixXd> lu(a);
  lu.setThreshold(1e-10);
  if (lu.rank() >= cols) return MatrixXd::Zero(cols, 0);
  const MatrixXd kernel = lu.kernel();
  Eigen::HouseholderQR<MatrixXd> qr(kernel);
  return qr.householderQ() * MatrixXd::Identity(cols, kernel.cols());
}

// Closest point of {x : A x = b} to x.
VectorXd projectAffine(const MatrixXd& a, const VectorXd& b, const VectorXd& x) {
  if (a.rows() == 0) return x;
  Eigen::CompleteOrthogonalDecomposition<MatrixXd> cod(a);
  return x - cod.solve(a * x - b);
}

// Affine data of the problem: A theta = b, slack = h - G theta > 0.
struct Problem {
  int n = 0;
  MatrixXd eqA;
  VectorXd eqB;
  MatrixXd ineqG;
  VectorXd ineqH;
  std::vector<std::pair<std::string, int>> labels;  // per inequality row
};

Problem buildProblem(const ConstraintSystem& system) {
  Problem p;
  p.n = system.numVars;
  const int me = static_cast<int>(system.equalities.size());
  const int mi = system.inequalityCount();
  p.eqA = MatrixXd::Zero(me, p.n);
  p.eqB = VectorXd::Zero(me);
  for (int i = 0; i < me; ++i) {
    for (int c : system.equalities[i].corners) p.eqA(i, c) += 1.0;
    p.eqB(i) = system.equalities[i].rhs;
  }
  p.ineqG = MatrixXd::Zero(mi, p.n);
  p.ineqH = VectorXd::Zero(mi);
  for (int c = 0; c < p.n; ++c) {
    p.ineqG(c, c) = -1.0;
    p.ineqH(c) = -system.epsilon;
    p.labels.emplace_back("lower_bound", c);
  }
  for (std::size_t i = 0; i < system.inequalities.size(); ++i) {
    const auto& row = system.inequalities[i];
    const int r = p.n + static_cast<int>(i);
    for (int c : row.corners) p.ineqG(r, c) += 1.0;
    p.ineqH(r) = row.rhs;
    if (row.kind == RowKind::InteriorEdge) {
      p.labels.emplace_back("interior_edge", row.tag);
    } else {
      p.labels.emplace_back("hull_vertex", row.tag);
    }
  }
  return p;
}

bool anglesInRange(const VectorXd& theta) {
  for (int c = 0; c < theta.size(); ++c) {
    if (!(theta(c) > 0.0 && theta(c) < kPi)) return false;
  }
  return true;
}

double volumeOf(const VectorXd& theta) {
  double v = 0.0;
  for (int c = 0; c < theta.size(); ++c) v += lobachevsky(theta(c));
  return v;
}

VectorXd gradientOf(const VectorXd& theta) {
  VectorXd g(theta.size());
  for (int c = 0; c < theta.size(); ++c) g(c) = -std::log(2.0 * std::sin(theta(c)));
  return g;
}

VectorXd curvatureOf(const VectorXd& theta) {
  VectorXd h(theta.size());
  for (int c = 0; c < theta.size(); ++c) h(c) = -std::cos(theta(c)) / std::sin(theta(c));
  return h;
}

// Solves (-H) p = g for negative definite H.
VectorXd ascentDirection(const MatrixXd& h, const VectorXd& g) {
  const MatrixXd negH = -h;
  Eigen::LLT<MatrixXd> llt(negH);
  if (llt.info() == Eigen::Success) return llt.solve(g);
  Eigen::LDLT<MatrixXd> ldlt(negH);
  return ldlt.solve(g);
}

class BarrierSolver {
 public:
  BarrierSolver(const Problem& problem, const MatrixXd& z) : p_(problem), z_(z) {}

  double value(const VectorXd& theta, double mu) const {
    if (!anglesInRange(theta)) return -std::numeric_limits<double>::infinity();
    const VectorXd s = p_.ineqH - p_.ineqG * theta;
    double barrier = 0.0;
    for (int i = 0; i < s.size(); ++i) {
      if (!(s(i) > 0.0)) return -std::numeric_limits<double>::infinity();
      barrier += std::log(s(i));
    }
    return volumeOf(theta) + mu * barrier;
  }

  // Maximizes the barrier objective at fixed mu; returns Newton iterations.
  int solveStage(VectorXd& theta, double mu) const {
    int iterations = 0;
    for (; iterations < 200; ++iterations) {
      const VectorXd s = p_.ineqH - p_.ineqG * theta;
      const VectorXd inv = s.cwiseInverse();
      const VectorXd grad = gradientOf(theta) - mu * p_.ineqG.transpose() * inv;
      const VectorXd g = z_.transpose() * grad;
      const double vol = volumeOf(theta);
      if (g.norm() < 1e-10 * (1.0 + std::abs(vol))) break;

      MatrixXd hess = -mu * p_.ineqG.transpose() * inv.cwiseAbs2().asDiagonal() * p_.ineqG;
      hess.diagonal() += curvatureOf(theta);
      const MatrixXd h = z_.transpose() * hess * z_;
      const VectorXd dir = ascentDirection(h, g);
      const double decrement = g.dot(dir);
      const double f0 = value(theta, mu);
      if (!(decrement > 1e-24 * (1.0 + std::abs(f0)))) break;

      const VectorXd step = z_ * dir;
      double t = 1.0;
      bool accepted = false;
      for (int k = 0; k < 60; ++k, t *= 0.5) {
        const VectorXd trial = theta + t * step;
        if (value(trial, mu) >= f0 + 1e-4 * t * decrement) {
          theta = trial;
          accepted = true;
          break;
        }
      }
      if (!accepted) {
        // Armijo can no longer resolve progress in double precision.
        if (decrement < 1e-12 * (1.0 + std::abs(f0))) break;
        throw Error(ErrorCode::LineSearchStall,
                    "barrier Newton line search stalled at mu=" + std::to_string(mu));
      }
    }
    return iterations;
  }

 private:
  const Problem& p_;
  const MatrixXd& z_;
};

struct KktReport {
  double residual = 0.0;
  int mostNegative = -1;  // position in `active` of the most negative multiplier below -1e-10
};

KktReport kktReport(const Problem& p, const VectorXd& theta, const std::vector<int>& active) {
  const VectorXd grad = gradientOf(theta);
  const int me = static_cast<int>(p.eqA.rows());
  const int ma = static_cast<int>(active.size());
  MatrixXd basis(p.n, me + ma);
  basis.leftCols(me) = p.eqA.transpose();
  for (int k = 0; k < ma; ++k) basis.col(me + k) = p.ineqG.row(active[k]).transpose();
  const MatrixXd z = nullSpace(p.eqA, p.n);
  KktReport report;
  VectorXd lambda = VectorXd::Zero(ma);
  if (ma > 0) {
    const VectorXd mult = basis.completeOrthogonalDecomposition().solve(grad);
    lambda = mult.tail(ma);
    double worst = -1e-10;
    for (int k = 0; k < ma; ++k) {
      if (lambda(k) < worst) {
        worst = lambda(k);
        report.mostNegative = k;
      }
      lambda(k) = std::max(0.0, lambda(k));
    }
  }
  VectorXd r = grad;
  for (int k = 0; k < ma; ++k) r -= lambda(k) * p.ineqG.row(active[k]).transpose();
  report.residual = (z.transpose() * r).norm();
  return report;
}

struct PolishResult {
  bool accepted = false;
  std::vector<int> active;
};

// Primal active-set Newton on the volume, started from the barrier point
// with the nearly active inequalities held as equalities. A constraint that
// blocks a step joins the active set; one whose multiplier turns negative at
// a stationary point leaves it. theta is only replaced when the final point
// is a KKT point at least as good as the start.
PolishResult polish(const Problem& p, VectorXd& theta, std::vector<int> active) {
  const int me = static_cast<int>(p.eqA.rows());
  const int mi = static_cast<int>(p.ineqH.size());
  std::vector<char> isActive(mi, 0);
  for (int i : active) isActive[i] = 1;

  auto constraintsOf = [&](MatrixXd& a, VectorXd& b) {
    const int ma = static_cast<int>(active.size());
    a.resize(me + ma, p.n);
    b.resize(me + ma);
    a.topRows(me) = p.eqA;
    b.head(me) = p.eqB;
    for (int k = 0; k < ma; ++k) {
      a.row(me + k) = p.ineqG.row(active[k]);
      b(me + k) = p.ineqH(active[k]);
    }
  };
  auto addActive = [&](int i) {
    if (!isActive[i]) {
      isActive[i] = 1;
      active.push_back(i);
    }
  };

  PolishResult out;
  const double startVolume = volumeOf(theta);
  MatrixXd a;
  VectorXd b;
  VectorXd x = theta;
  // Projecting onto the active face can push nearly active rows across;
  // those join the face too.
  for (int attempt = 0;; ++attempt) {
    constraintsOf(a, b);
    x = projectAffine(a, b, theta);
    const VectorXd s = p.ineqH - p.ineqG * x;
    bool added = false;
    for (int i = 0; i < mi; ++i) {
      if (!isActive[i] && !(s(i) > 0.0)) {
        addActive(i);
        added = true;
      }
    }
    if (!added) break;
    if (attempt == 10) return out;
  }
  if (!anglesInRange(x)) return out;

  for (int round = 0; round < 4 * mi + 16; ++round) {
    constraintsOf(a, b);
    const MatrixXd z = nullSpace(a, p.n);
    bool blocked = false;
    for (int it = 0; it < 100 && z.cols() > 0; ++it) {
      const VectorXd g = z.transpose() * gradientOf(x);
      const double f0 = volumeOf(x);
      if (g.norm() < 1e-14 * (1.0 + std::abs(f0))) break;
      const MatrixXd h = z.transpose() * curvatureOf(x).asDiagonal() * z;
      const VectorXd dir = ascentDirection(h, g);
      const double decrement = g.dot(dir);
      if (!(decrement > 1e-30)) break;
      const VectorXd step = z * dir;

      // Ratio test against the inactive rows.
      const VectorXd s = p.ineqH - p.ineqG * x;
      const VectorXd rate = p.ineqG * step;
      double tMax = std::numeric_limits<double>::infinity();
      int blocking = -1;
      for (int i = 0; i < mi; ++i) {
        if (isActive[i] || !(rate(i) > 0.0)) continue;
        const double r = std::max(0.0, s(i)) / rate(i);
        if (r < tMax) {
          tMax = r;
          blocking = i;
        }
      }
      if (blocking >= 0 && tMax < 1.0) {
        const VectorXd trial = x + tMax * step;
        if (anglesInRange(trial) && volumeOf(trial) >= f0) {
          x = trial;
          addActive(blocking);
          blocked = true;
          break;
        }
      }
      double t = std::min(1.0, tMax);
      bool accepted = false;
      for (int k = 0; k < 60; ++k, t *= 0.5) {
        const VectorXd trial = x + t * step;
        if (anglesInRange(trial) && volumeOf(trial) >= f0 + 1e-4 * t * decrement - 1e-15) {
          x = trial;
          accepted = true;
          break;
        }
      }
      if (!accepted) break;
    }
    if (blocked) continue;

    // Stationary on the current face: release the most negative multiplier.
    const KktReport report = kktReport(p, x, active);
    if (report.mostNegative >= 0) {
      isActive[active[report.mostNegative]] = 0;
      active.erase(active.begin() + report.mostNegative);
      continue;
    }
    if (volumeOf(x) < startVolume - 1e-12) return out;
    const VectorXd s = p.ineqH - p.ineqG * x;
    for (int i = 0; i < mi; ++i) {
      if (!isActive[i] && !(s(i) > 0.0)) return out;
    }
    theta = x;
    out.accepted = true;
    std::sort(active.begin(), active.end());
    out.active = std::move(active);
    return out;
  }
  return out;
}

std::vector<int> activeSet(const Problem& p, const VectorXd& theta, double threshold) {
  const VectorXd s = p.ineqH - p.ineqG * theta;
  std::vector<int> active;
  for (int i = 0; i < s.size(); ++i) {
    if (s(i) <= threshold) active.push_back(i);
  }
  return active;
}

long gcdLong(long a, long b) { return std::gcd(a, b); }

}  // namespace

double volume(std::span<const double> theta) {
  double v = 0.0;
  for (double t : theta) {
    if (!(t > 0.0 && t < kPi)) {
      throw Error(ErrorCode::DomainError, "volume: every angle must lie in (0, pi)");
    }
    v += lobachevsky(t);
  }
  return v;
}

double volume(const AngleAssignment& angles) { return volume(angles.values); }

std::vector<double> volumeGradient(std::span<const double> theta) {
  std::vector<double> g(theta.size());
  for (std::size_t c = 0; c < theta.size(); ++c) g[c] = lobachevskyDeriv(theta[c]);
  return g;
}

OptResult maximizeVolume(std::shared_ptr<const ApexLink> link, double epsilon,
                         std::span<const double> start, const OptimizerOptions& options) {
  const ConstraintSystem system = assembleConstraints(*link, epsilon);
  if (static_cast<int>(start.size()) != system.numVars) {
    throw Error(ErrorCode::InfeasibleStart, "start has the wrong number of corners");
  }
  if (system.equalityResidual(start) > 1e-8 || !(system.minSlack(start) > 0.0)) {
    throw Error(ErrorCode::InfeasibleStart, "start point is not strictly interior");
  }
  const Problem problem = buildProblem(system);
  VectorXd theta = Eigen::Map<const VectorXd>(start.data(), static_cast<Eigen::Index>(start.size()));
  theta = projectAffine(problem.eqA, problem.eqB, theta);
  {
    const VectorXd s = problem.ineqH - problem.ineqG * theta;
    if (!(s.minCoeff() > 0.0)) {
      throw Error(ErrorCode::InfeasibleStart, "start point leaves the polytope after projection");
    }
  }

  const MatrixXd z = nullSpace(problem.eqA, problem.n);
  OptResult result;
  std::vector<int> active;
  if (z.cols() > 0) {
    BarrierSolver solver(problem, z);
    for (double mu = 1e-1;; mu *= 0.2) {
      mu = std::max(mu, 1e-9);
      result.newtonIterations += solver.solveStage(theta, mu);
      result.stageVolumes.push_back(volumeOf(theta));
      if (mu <= 1e-9) break;
    }
    auto polished = polish(problem, theta, activeSet(problem, theta, kActiveSlack));
    result.polished = polished.accepted;
    if (polished.accepted) active = std::move(polished.active);
  }

  if (!result.polished) active = activeSet(problem, theta, kActiveSlack);
  result.kktResidual = kktReport(problem, theta, active).residual;
  result.kktCertified = result.kktResidual <= options.kktTolerance;
  const VectorXd finalSlack = problem.ineqH - problem.ineqG * theta;
  for (int i = 0; i < finalSlack.size(); ++i) {
    if (finalSlack(i) < kBoundaryFlag) {
      result.boundaryActive.push_back({problem.labels[i].first, problem.labels[i].second, finalSlack(i)});
    }
  }

  result.angles.link = link;
  result.angles.values.assign(theta.data(), theta.data() + theta.size());
  result.volume = volume(result.angles.values);
  result.dihedrals = dihedralAngles(result.angles);
  for (double v : result.angles.values) {
    result.cornerRationals.push_back(
        detectRational(v, options.maxDenominator, options.rationalTolerance));
  }
  for (const auto& d : result.dihedrals.perEdge) {
    result.dihedralRationals.push_back(
        detectRational(d.radians, options.maxDenominator, options.rationalTolerance));
  }
  return result;
}

std::optional<OptResult> optimizeTriangulation(const SphereTriangulation& t,
                                               std::optional<int> apex, double epsilon,
                                               const OptimizerOptions& options) {
  auto link = std::make_shared<const ApexLink>(buildLink(t, apex.value_or(chooseApex(t))));
  const auto feasibility = checkFeasible(assembleConstraints(*link, epsilon));
  if (!feasibility.feasible) return std::nullopt;
  if (!(feasibility.interiorMargin > 0.0)) {
    throw Error(ErrorCode::InfeasibleStart,
                "constraint polytope has no interior point at epsilon=" + std::to_string(epsilon));
  }
  return maximizeVolume(std::move(link), epsilon, feasibility.witness, options);
}

DihedralAngles dihedralAngles(const AngleAssignment& angles) {
  const ApexLink& link = *angles.link;
  const auto& v = angles.values;
  DihedralAngles out;
  for (const auto& e : link.interiorEdges) {
    out.perEdge.push_back({e.edge, EdgeKind::Interior, v[e.cornerA] + v[e.cornerB]});
  }
  for (const auto& e : link.hullEdges) {
    out.perEdge.push_back({e.edge, EdgeKind::Hull, v[e.corner]});
  }
  for (const auto& hull : link.hullVertexCorners) {
    double sum = 0.0;
    for (int c : hull.corners) sum += v[c];
    out.perEdge.push_back({EdgeKey::of(link.apex, hull.vertex), EdgeKind::Vertical, sum});
  }
  std::sort(out.perEdge.begin(), out.perEdge.end(),
            [](const EdgeDihedral& a, const EdgeDihedral& b) { return a.edge < b.edge; });
  return out;
}

std::optional<RationalAngle> detectRational(double theta, int maxDenominator, double tol) {
  if (!std::isfinite(theta) || !(theta > 0.0) || maxDenominator < 1) return std::nullopt;
  const long double x = static_cast<long double>(theta) / std::numbers::pi_v<long double>;
  // Convergents h_k / k_k of the continued fraction of x.
  long double rest = x;
  long hPrev = 0, h = 1;
  long kPrev = 1, k = 0;
  for (int depth = 0; depth < 64; ++depth) {
    const long double a = std::floor(rest);
    if (a > 1e15L) break;
    const long ai = static_cast<long>(a);
    const long hNext = ai * h + hPrev;
    const long kNext = ai * k + kPrev;
    hPrev = h;
    h = hNext;
    kPrev = k;
    k = kNext;
    if (k > maxDenominator) break;
    const long double err = std::fabs(x - static_cast<long double>(h) / static_cast<long double>(k));
    if (err < tol) {
      if (h <= 0) return std::nullopt;
      const long g = gcdLong(h, k);
      return RationalAngle{h / g, k / g, static_cast<double>(err)};
    }
    const long double frac = rest - a;
    if (frac <= 0.0L) break;
    rest = 1.0L / frac;
  }
  return std::nullopt;
}

std::optional<long> commonDenominator(std::span<const std::optional<RationalAngle>> angles) {
  long lcm = 1;
  for (const auto& a : angles) {
    if (!a) return std::nullopt;
    lcm = std::lcm(lcm, a->q);
  }
  return lcm;
}

std::vector<ShapeParameter> shapeParameters(const AngleAssignment& angles) {
  std::vector<ShapeParameter> out;
  for (const auto& e : angles.link->interiorEdges) {
    out.push_back({e.edge, std::polar(1.0, angles.values[e.cornerA] + angles.values[e.cornerB])});
  }
  return out;
}

}  // namespace idealpoly
