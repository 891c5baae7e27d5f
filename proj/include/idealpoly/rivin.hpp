#pragma once

#include <span>
#include <vector>

#include "idealpoly/rng.hpp"
#include "idealpoly/triang.hpp"

namespace idealpoly {

inline constexpr double kDefaultEpsilon = 1e-6;

enum class RowKind {
  Triangle,        // corners of one bounded face sum to pi
  InteriorVertex,  // corners at an interior vertex sum to 2 pi
  InteriorEdge,    // the two corners opposite an interior edge: sum <= pi - eps
  HullVertex,      // corners at a hull vertex: sum <= pi - eps
};

struct ConstraintRow {
  RowKind kind = RowKind::Triangle;
  int tag = 0;  // bounded face index, vertex id, or interior edge index
  std::vector<int> corners;
  double rhs = 0.0;
};

// Linear system on the corner angles of an ApexLink. Every variable also
// carries the lower bound theta_c >= epsilon.
struct ConstraintSystem {
  int numVars = 0;
  double epsilon = kDefaultEpsilon;
  std::vector<ConstraintRow> equalities;    // sum == rhs
  std::vector<ConstraintRow> inequalities;  // sum <= rhs

  // Largest |row sum - rhs| over the equalities.
  double equalityResidual(std::span<const double> theta) const;
  // Slacks of all inequalities: first the numVars lower bounds
  // (theta_c - eps), then the rows of `inequalities` in order.
  std::vector<double> slacks(std::span<const double> theta) const;
  double minSlack(std::span<const double> theta) const;
  int inequalityCount() const { return numVars + static_cast<int>(inequalities.size()); }
};

ConstraintSystem assembleConstraints(const ApexLink& link, double epsilon);

struct FeasibilityResult {
  bool feasible = false;
  std::vector<double> witness;  // centred point, when feasible
  double certificate = 0.0;     // phase-1 optimum, when infeasible
  double interiorMargin = 0.0;  // extra slack of the witness beyond epsilon
};

// Phase-1 simplex decides feasibility; a second LP maximizing the minimum
// slack centres the witness.
FeasibilityResult checkFeasible(const ConstraintSystem& system);

struct RealizabilityResult {
  bool realizable = false;
  int apex = 0;
  FeasibilityResult feasibility;
};

// Builds the link at chooseApex(t) (or at `apex` when given) and decides
// feasibility of the assembled system.
RealizabilityResult isRealizable(const SphereTriangulation& t, double epsilon = kDefaultEpsilon);
RealizabilityResult isRealizableAt(const SphereTriangulation& t, int apex,
                                   double epsilon = kDefaultEpsilon);

// Vertices of the constraint polytope found by minimizing random linear
// objectives. Empty when the system is infeasible.
std::vector<std::vector<double>> polytopeVertices(const ConstraintSystem& system, int count,
                                                  Rng& rng);

// Strictly interior points: random convex combinations of polytope vertices,
// pulled towards `center` (which must be strictly interior).
std::vector<std::vector<double>> randomInteriorPoints(const ConstraintSystem& system,
                                                      std::span<const double> center, int count,
                                                      Rng& rng);

}  // namespace idealpoly
