#pragma once

#include <complex>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "idealpoly/rivin.hpp"
#include "idealpoly/triang.hpp"

namespace idealpoly {

// Radians per corner of the link's bounded faces (corner = 3 * face + slot).
struct AngleAssignment {
  std::shared_ptr<const ApexLink> link;
  std::vector<double> values;
};

enum class EdgeKind { Interior, Hull, Vertical };

struct EdgeDihedral {
  EdgeKey edge;
  EdgeKind kind = EdgeKind::Interior;
  double radians = 0.0;
};

// One entry per edge of the parent triangulation, sorted by edge.
struct DihedralAngles {
  std::vector<EdgeDihedral> perEdge;
};

struct RationalAngle {
  long p = 0;
  long q = 1;
  double error = 0.0;  // |theta/pi - p/q|
};

struct ShapeParameter {
  EdgeKey edge;
  std::complex<double> z;
};

struct ActiveConstraint {
  std::string kind;  // "lower_bound", "interior_edge" or "hull_vertex"
  int tag = 0;       // corner index, interior edge index or hull vertex id
  double slack = 0.0;
};

struct OptimizerOptions {
  double kktTolerance = 1e-10;
  int maxDenominator = 100;
  double rationalTolerance = 1e-10;
};

struct OptResult {
  AngleAssignment angles;
  double volume = 0.0;
  double kktResidual = 0.0;
  bool kktCertified = false;  // kktResidual <= options.kktTolerance
  DihedralAngles dihedrals;
  std::vector<std::optional<RationalAngle>> cornerRationals;    // parallel to angles.values
  std::vector<std::optional<RationalAngle>> dihedralRationals;  // parallel to dihedrals.perEdge
  std::vector<ActiveConstraint> boundaryActive;
  std::vector<double> stageVolumes;  // volume at the end of each barrier stage
  int newtonIterations = 0;
  bool polished = false;  // final active-set Newton step accepted
};

// Sum of L(theta_c) over all corners. Throws DomainError outside (0, pi).
double volume(std::span<const double> theta);
double volume(const AngleAssignment& angles);
std::vector<double> volumeGradient(std::span<const double> theta);

// Unique maximizer of the volume over the constraint polytope of `link`,
// starting from a strictly interior point. Log-barrier continuation with
// damped Newton steps in the null space of the equalities, followed by an
// active-set Newton polish.
OptResult maximizeVolume(std::shared_ptr<const ApexLink> link, double epsilon,
                         std::span<const double> start, const OptimizerOptions& options = {});

// Feasibility check plus maximization at `apex` (chooseApex when absent).
// Returns nullopt when the triangulation is not realizable.
std::optional<OptResult> optimizeTriangulation(const SphereTriangulation& t,
                                               std::optional<int> apex = std::nullopt,
                                               double epsilon = kDefaultEpsilon,
                                               const OptimizerOptions& options = {});

// Interior edge -> alpha + beta, hull edge -> opposite corner,
// apex edge (apex, w) -> sum of the corners at w.
DihedralAngles dihedralAngles(const AngleAssignment& angles);

// First continued-fraction convergent p/q of theta/pi with q <= maxDenominator
// and |theta/pi - p/q| < tol.
std::optional<RationalAngle> detectRational(double theta, int maxDenominator = 100,
                                            double tol = 1e-10);

// Least common multiple of the denominators, or nullopt if any angle is not
// rational.
std::optional<long> commonDenominator(std::span<const std::optional<RationalAngle>> angles);

// z_e = exp(i (alpha_e + beta_e)) for every interior edge of the link.
std::vector<ShapeParameter> shapeParameters(const AngleAssignment& angles);

}  // namespace idealpoly
