#include "idealpoly/rivin.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "idealpoly/error.hpp"
#include "idealpoly/simplex.hpp"

namespace idealpoly {

namespace {

constexpr double kPi = std::numbers::pi;

double rowSum(const ConstraintRow& row, std::span<const double> theta) {
  double s = 0.0;
  for (int c : row.corners) s += theta[c];
  return s;
}

// Shifted form y = theta - eps >= 0 with one slack per inequality row:
//   equality rows:    sum y       = rhs - k eps
//   inequality rows:  sum y + s   = rhs - k eps
lp::StandardFormLp shiftedLp(const ConstraintSystem& system) {
  const int n = system.numVars;
  const int me = static_cast<int>(system.equalities.size());
  const int mi = static_cast<int>(system.inequalities.size());
  lp::StandardFormLp p;
  p.A = Eigen::MatrixXd::Zero(me + mi, n + mi);
  p.b = Eigen::VectorXd::Zero(me + mi);
  p.c = Eigen::VectorXd::Zero(n + mi);
  for (int i = 0; i < me; ++i) {
    const auto& row = system.equalities[i];
    for (int c : row.corners) p.A(i, c) += 1.0;
    p.b(i) = row.rhs - static_cast<double>(row.corners.size()) * system.epsilon;
  }
  for (int i = 0; i < mi; ++i) {
    const auto& row = system.inequalities[i];
    for (int c : row.corners) p.A(me + i, c) += 1.0;
    p.A(me + i, n + i) = 1.0;
    p.b(me + i) = row.rhs - static_cast<double>(row.corners.size()) * system.epsilon;
  }
  return p;
}

// Maximize t with every slack (lower bounds included) at least t. The cap
// t <= pi never binds (a triangle row already forces t <= pi/3).
// Variables: u (n), v (mi), t, w; theta = eps + u + t.
lp::StandardFormLp centeringLp(const ConstraintSystem& system) {
  const int n = system.numVars;
  const int me = static_cast<int>(system.equalities.size());
  const int mi = static_cast<int>(system.inequalities.size());
  const int tCol = n + mi;
  const int wCol = tCol + 1;
  lp::StandardFormLp p;
  p.A = Eigen::MatrixXd::Zero(me + mi + 1, n + mi + 2);
  p.b = Eigen::VectorXd::Zero(me + mi + 1);
  p.c = Eigen::VectorXd::Zero(n + mi + 2);
  for (int i = 0; i < me; ++i) {
    const auto& row = system.equalities[i];
    const double k = static_cast<double>(row.corners.size());
    for (int c : row.corners) p.A(i, c) += 1.0;
    p.A(i, tCol) = k;
    p.b(i) = row.rhs - k * system.epsilon;
  }
  for (int i = 0; i < mi; ++i) {
    const auto& row = system.inequalities[i];
    const double k = static_cast<double>(row.corners.size());
    for (int c : row.corners) p.A(me + i, c) += 1.0;
    p.A(me + i, n + i) = 1.0;
    p.A(me + i, tCol) = k + 1.0;
    p.b(me + i) = row.rhs - k * system.epsilon;
  }
  p.A(me + mi, tCol) = 1.0;
  p.A(me + mi, wCol) = 1.0;
  p.b(me + mi) = std::numbers::pi;
  p.c(tCol) = -1.0;
  return p;
}

}  // namespace

double ConstraintSystem::equalityResidual(std::span<const double> theta) const {
  double worst = 0.0;
  for (const auto& row : equalities) worst = std::max(worst, std::abs(rowSum(row, theta) - row.rhs));
  return worst;
}

std::vector<double> ConstraintSystem::slacks(std::span<const double> theta) const {
  std::vector<double> out;
  out.reserve(inequalityCount());
  for (int c = 0; c < numVars; ++c) out.push_back(theta[c] - epsilon);
  for (const auto& row : inequalities) out.push_back(row.rhs - rowSum(row, theta));
  return out;
}

double ConstraintSystem::minSlack(std::span<const double> theta) const {
  const auto s = slacks(theta);
  return s.empty() ? 0.0 : *std::min_element(s.begin(), s.end());
}

ConstraintSystem assembleConstraints(const ApexLink& link, double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw Error(ErrorCode::DomainError, "epsilon must be positive and finite");
  }
  ConstraintSystem system;
  system.numVars = link.cornerCount();
  system.epsilon = epsilon;
  for (int f = 0; f < static_cast<int>(link.boundedFaces.size()); ++f) {
    system.equalities.push_back({RowKind::Triangle, f, {3 * f, 3 * f + 1, 3 * f + 2}, kPi});
  }
  for (const auto& vc : link.interiorVertexCorners) {
    system.equalities.push_back({RowKind::InteriorVertex, vc.vertex, vc.corners, 2.0 * kPi});
  }
  for (int e = 0; e < static_cast<int>(link.interiorEdges.size()); ++e) {
    const auto& edge = link.interiorEdges[e];
    system.inequalities.push_back(
        {RowKind::InteriorEdge, e, {edge.cornerA, edge.cornerB}, kPi - epsilon});
  }
  for (const auto& vc : link.hullVertexCorners) {
    system.inequalities.push_back({RowKind::HullVertex, vc.vertex, vc.corners, kPi - epsilon});
  }
  return system;
}

FeasibilityResult checkFeasible(const ConstraintSystem& system) {
  FeasibilityResult result;
  const auto phaseOne = lp::solveStandardForm(shiftedLp(system));
  if (phaseOne.status == lp::LpStatus::Infeasible) {
    result.certificate = phaseOne.phaseOneObjective;
    return result;
  }

  const auto centered = lp::solveStandardForm(centeringLp(system));
  if (centered.status != lp::LpStatus::Optimal) {
    throw Error(ErrorCode::NumericalFailure,
                "centering LP failed although the system passed phase 1");
  }
  const int n = system.numVars;
  const int mi = static_cast<int>(system.inequalities.size());
  const double t = centered.x(n + mi);
  result.feasible = true;
  result.interiorMargin = t;
  result.witness.resize(n);
  for (int c = 0; c < n; ++c) result.witness[c] = system.epsilon + centered.x(c) + t;
  return result;
}

RealizabilityResult isRealizableAt(const SphereTriangulation& t, int apex, double epsilon) {
  RealizabilityResult out;
  out.apex = apex;
  out.feasibility = checkFeasible(assembleConstraints(buildLink(t, apex), epsilon));
  out.realizable = out.feasibility.feasible;
  return out;
}

RealizabilityResult isRealizable(const SphereTriangulation& t, double epsilon) {
  return isRealizableAt(t, chooseApex(t), epsilon);
}

std::vector<std::vector<double>> polytopeVertices(const ConstraintSystem& system, int count,
                                                  Rng& rng) {
  std::vector<std::vector<double>> vertices;
  auto p = shiftedLp(system);
  for (int k = 0; k < count; ++k) {
    for (int c = 0; c < system.numVars; ++c) p.c(c) = rng.uniform(-1.0, 1.0);
    const auto sol = lp::solveStandardForm(p);
    if (sol.status == lp::LpStatus::Infeasible) return {};
    if (sol.status != lp::LpStatus::Optimal) continue;
    std::vector<double> theta(system.numVars);
    for (int c = 0; c < system.numVars; ++c) theta[c] = system.epsilon + sol.x(c);
    vertices.push_back(std::move(theta));
  }
  return vertices;
}

std::vector<std::vector<double>> randomInteriorPoints(const ConstraintSystem& system,
                                                      std::span<const double> center, int count,
                                                      Rng& rng) {
  const int vertexCount = std::clamp(system.numVars / 2 + 2, 4, 16);
  const auto vertices = polytopeVertices(system, vertexCount, rng);
  constexpr double kCenterWeight = 0.25;
  std::vector<std::vector<double>> points;
  for (int k = 0; k < count; ++k) {
    std::vector<double> weights(vertices.size());
    double total = 0.0;
    for (auto& w : weights) {
      w = -std::log(1.0 - rng.uniform());
      total += w;
    }
    std::vector<double> theta(center.begin(), center.end());
    for (int c = 0; c < system.numVars; ++c) {
      double mix = 0.0;
      for (std::size_t i = 0; i < vertices.size(); ++i) mix += weights[i] / total * vertices[i][c];
      theta[c] = vertices.empty() ? center[c] : kCenterWeight * center[c] + (1.0 - kCenterWeight) * mix;
    }
    points.push_back(std::move(theta));
  }
  return points;
}

}  // namespace idealpoly
