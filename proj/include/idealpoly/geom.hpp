#pragma once

#include <array>
#include <complex>
#include <memory>
#include <span>
#include <vector>

#include "idealpoly/optvol.hpp"
#include "idealpoly/rng.hpp"
#include "idealpoly/triang.hpp"

namespace idealpoly {

using Vec3 = std::array<double, 3>;

// Point of the extended complex plane C u {inf}.
struct ExtendedComplex {
  std::complex<double> value;
  bool infinite = false;

  static ExtendedComplex infinity() { return {{0.0, 0.0}, true}; }
  static ExtendedComplex at(std::complex<double> z) { return {z, false}; }
};

// Ideal vertex positions; exactly one of them is infinity.
struct PointConfiguration {
  std::vector<ExtendedComplex> points;

  int size() const { return static_cast<int>(points.size()); }
  int infinityIndex() const;
};

// Checks: exactly one infinite point, finite points pairwise separated by
// more than 1e-9 (relative to the distance of the first two finite points).
// Throws DegenerateSample / InvalidInput.
PointConfiguration makeConfiguration(std::vector<ExtendedComplex> points);

// Triangulation of the finite points of a configuration. Vertex ids are
// configuration indices; triangles are counterclockwise in the plane.
struct PlanarTriangulation {
  std::vector<std::complex<double>> positions;  // per configuration index
  int infinityIndex = -1;
  std::vector<Face> triangles;
  std::vector<int> hull;  // convex hull, counterclockwise

  int vertexCount() const { return static_cast<int>(positions.size()); }
};

// Independent uniform points on S^2: z uniform on [-1, 1], azimuth uniform.
std::vector<Vec3> sampleSphere(int count, Rng& rng);

// (x + iy) / (1 - z); the north pole maps to infinity.
ExtendedComplex stereographic(const Vec3& p);
Vec3 inverseStereographic(const ExtendedComplex& z);

// Points 0 and 1 (south pole and (1,0,0)), n - 3 uniform sphere points, and
// infinity (north pole) as the last index.
PointConfiguration randomConfiguration(int n, Rng& rng);

// Incircle predicate used by the flip algorithm: positive when d lies strictly
// inside the circle through the counterclockwise triangle (a, b, c), measured
// relative to the magnitude of the determinant's terms.
double inCircle(std::complex<double> a, std::complex<double> b, std::complex<double> c,
                std::complex<double> d);

// Delaunay triangulation of the finite points: lexicographic sweep followed
// by Lawson edge flips. Cocircular ties keep the sweep diagonal.
PlanarTriangulation delaunay(const PointConfiguration& config);

struct ClosedTriangulation {
  SphereTriangulation sphere;
  std::shared_ptr<const ApexLink> link;  // apex = the infinity vertex
};

// Cones the hull to the infinity vertex.
ClosedTriangulation closeWithInfinity(const PlanarTriangulation& pt);

// Euclidean corner angles of the bounded triangles, indexed like the link of
// closeWithInfinity(pt). Throws DegenerateTriangle.
AngleAssignment euclideanAngles(const PlanarTriangulation& pt);

// Volume of the ideal polyhedron with these vertices.
double configVolume(const PointConfiguration& config);

struct LayoutResult {
  PointConfiguration config;  // indexed by parent vertex id, apex at infinity
  double closureResidual = 0.0;
};

// Rebuilds vertex positions (up to similarity) from corner angles; the first
// two vertices of the smallest bounded face land on 0 and 1. Throws
// LayoutInconsistent when positions reached along different paths disagree
// by more than 1e-6.
LayoutResult layout(const ApexLink& link, std::span<const double> angles);

// The link's bounded faces placed at the configuration's positions.
PlanarTriangulation planarFromLink(const ApexLink& link, const PointConfiguration& config);

struct BallModels {
  std::vector<Vec3> klein;
  std::vector<Vec3> poincare;
};

// Ideal vertices on the boundary sphere; both models share those coordinates.
BallModels toBallModels(const PointConfiguration& config);

}  // namespace idealpoly
