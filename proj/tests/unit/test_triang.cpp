#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "idealpoly/error.hpp"
#include "idealpoly/rng.hpp"
#include "idealpoly/testing/corpus.hpp"
#include "idealpoly/triang.hpp"

using namespace idealpoly;
namespace corpus = idealpoly::testing;

namespace {

ErrorCode codeOf(int n, std::vector<Face> faces) {
  try {
    validate(n, std::move(faces));
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("validate accepted bad input");
  return ErrorCode::InvalidInput;
}

SphereTriangulation relabel(const SphereTriangulation& t, const std::vector<int>& perm) {
  std::vector<Face> faces;
  for (const Face& f : t.faces()) faces.push_back({perm[f[0]], perm[f[1]], perm[f[2]]});
  std::reverse(faces.begin(), faces.end());
  return validate(t.vertexCount(), std::move(faces));
}

}  // namespace

TEST_CASE("validate accepts the tetrahedron") {
  const auto t = validate(4, {{0, 1, 2}, {0, 2, 3}, {0, 3, 1}, {1, 3, 2}});
  CHECK(t.faceCount() == 4);
  CHECK(t.edgeCount() == 6);
  CHECK(t.edges().size() == 6);
  for (int v = 0; v < 4; ++v) CHECK(t.degree(v) == 3);
}

TEST_CASE("validate accepts the octahedron") {
  const auto t = corpus::octahedron();
  CHECK(t.faceCount() == 8);
  for (int v = 0; v < 6; ++v) CHECK(t.degree(v) == 4);
}

TEST_CASE("validate error paths") {
  CHECK(codeOf(4, {{0, 1, 2}, {0, 2, 3}, {0, 3, 1}}) == ErrorCode::EulerViolation);
  CHECK(codeOf(4, {{0, 1, 2}, {0, 2, 3}, {0, 3, 1}, {1, 3, 7}}) == ErrorCode::InvalidVertex);
  CHECK(codeOf(4, {{0, 1, 1}, {0, 2, 3}, {0, 3, 1}, {1, 3, 2}}) == ErrorCode::DegenerateFace);
  // Same orientation twice on a directed edge.
  CHECK(codeOf(4, {{0, 1, 2}, {0, 1, 3}, {0, 3, 2}, {1, 2, 3}}) == ErrorCode::NonManifoldEdge);
}

TEST_CASE("darts and twins are consistent") {
  for (const auto& e : corpus::corpus()) {
    const auto& t = e.triangulation;
    for (int d = 0; d < t.dartCount(); ++d) {
      const int tw = t.dartTwin(d);
      CHECK(t.dartTail(tw) == t.dartHead(d));
      CHECK(t.dartHead(tw) == t.dartTail(d));
      CHECK(t.dartTwin(tw) == d);
      CHECK(t.findDart(t.dartTail(d), t.dartHead(d)) == d);
    }
  }
}

TEST_CASE("buildLink on the tetrahedron") {
  const auto link = buildLink(corpus::tetrahedron(), 3);
  CHECK(link.boundedFaces.size() == 1);
  CHECK(link.hullCycle.size() == 3);
  CHECK(link.interiorVertices.empty());
  CHECK(link.interiorEdges.empty());
  CHECK(link.hullEdges.size() == 3);
  std::vector<int> verts(link.boundedFace(0).begin(), link.boundedFace(0).end());
  std::sort(verts.begin(), verts.end());
  CHECK(verts == std::vector<int>{0, 1, 2});
}

TEST_CASE("buildLink on the octahedron from every apex") {
  const auto t = corpus::octahedron();
  for (int apex = 0; apex < 6; ++apex) {
    const auto link = buildLink(t, apex);
    CHECK(link.boundedFaces.size() == 4);
    CHECK(link.interiorVertices.size() == 1);
    CHECK(link.interiorEdges.size() == 4);
    CHECK(link.hullEdges.size() == 4);
    const int antipode = apex == 0 ? 5 : apex == 5 ? 0 : (apex - 1 + 2) % 4 + 1;
    CHECK(link.interiorVertices[0] == antipode);
  }
}

TEST_CASE("buildLink on the triangular bipyramid from a degree-3 vertex") {
  const auto t = corpus::triangularBipyramid();
  const auto link = buildLink(t, 0);
  CHECK(link.boundedFaces.size() == 3);
  CHECK(link.interiorVertices == std::vector<int>{4});
  CHECK(link.interiorEdges.size() == 3);
  CHECK_THROWS_AS(buildLink(t, 5), Error);
}

TEST_CASE("chooseApex picks the smallest vertex of maximum degree") {
  CHECK(chooseApex(corpus::tetrahedron()) == 0);
  CHECK(chooseApex(corpus::octahedron()) == 0);
  // Equator {0, 1, 2}, poles 3 and 4.
  const auto bp = validate(5, {{3, 0, 1}, {3, 1, 2}, {3, 2, 0}, {4, 1, 0}, {4, 2, 1}, {4, 0, 2}});
  CHECK(chooseApex(bp) == 0);
  CHECK(chooseApex(corpus::triangularBipyramid()) == 1);
}

TEST_CASE("automorphism counts") {
  auto tet = automorphismCount(corpus::tetrahedron());
  CHECK(tet.orientationPreserving == 12);
  CHECK(tet.total == 24);
  auto oct = automorphismCount(corpus::octahedron());
  CHECK(oct.orientationPreserving == 24);
  CHECK(oct.total == 48);
  auto bp = automorphismCount(corpus::triangularBipyramid());
  CHECK(bp.orientationPreserving == 6);
  CHECK(bp.total == 12);
}

TEST_CASE("some n = 8 type has a trivial symmetry group") {
  bool found = false;
  for (const auto& t : corpus::allTypes(8)) {
    const auto a = automorphismCount(t);
    CHECK(a.total % a.orientationPreserving == 0);
    if (a.orientationPreserving == 1) found = true;
  }
  CHECK(found);
}

TEST_CASE("canonical code and automorphisms are relabel invariant") {
  Rng rng(7);
  for (const auto& e : corpus::corpus()) {
    const auto& t = e.triangulation;
    std::vector<int> perm(t.vertexCount());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    const auto r = relabel(t, perm);
    CHECK(canonicalCode(r) == canonicalCode(t));
    CHECK(typeHash(r) == typeHash(t));
    CHECK(canonicalCode(t.mirrored()) == canonicalCode(t));
    const auto a = automorphismCount(t);
    const auto b = automorphismCount(r);
    CHECK(a.orientationPreserving == b.orientationPreserving);
    CHECK(a.total == b.total);
    CHECK(countMapIsomorphisms(t, r) == a.orientationPreserving);
  }
}

TEST_CASE("number of combinatorial types for small n") {
  CHECK(corpus::allTypes(4).size() == 1);
  CHECK(corpus::allTypes(5).size() == 1);
  CHECK(corpus::allTypes(6).size() == 2);
  CHECK(corpus::allTypes(7).size() == 5);
  CHECK(corpus::allTypes(8).size() == 14);
}
