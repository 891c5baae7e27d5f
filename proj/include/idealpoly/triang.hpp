#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace idealpoly {

using Face = std::array<int, 3>;

// Undirected edge with u < v.
struct EdgeKey {
  int u = 0;
  int v = 0;

  static EdgeKey of(int a, int b) { return a < b ? EdgeKey{a, b} : EdgeKey{b, a}; }
  auto operator<=>(const EdgeKey&) const = default;
};

// Oriented combinatorial triangulation of the 2-sphere. Faces are stored
// counterclockwise as seen from outside. Instances only come out of
// validate(), so every invariant below holds for any live object:
//   * 2n - 4 faces, 3n - 6 edges
//   * every directed edge occurs exactly once, its reverse exactly once
//   * the face adjacency graph is connected and every vertex link is a
//     single cycle
class SphereTriangulation {
 public:
  int vertexCount() const { return n_; }
  int faceCount() const { return static_cast<int>(faces_.size()); }
  int edgeCount() const { return 3 * n_ - 6; }
  const std::vector<Face>& faces() const { return faces_; }
  const Face& face(int f) const { return faces_[f]; }

  int degree(int v) const { return degrees_[v]; }

  // Sorted list of all undirected edges.
  std::vector<EdgeKey> edges() const;

  // Darts are directed edges, indexed 3 * face + slot: the dart
  // face[slot] -> face[slot + 1].
  int dartCount() const { return 3 * faceCount(); }
  int dartTail(int d) const { return faces_[d / 3][d % 3]; }
  int dartHead(int d) const { return faces_[d / 3][(d % 3 + 1) % 3]; }
  static int dartNext(int d) { return 3 * (d / 3) + (d % 3 + 1) % 3; }
  int dartTwin(int d) const { return twin_[d]; }
  // Dart u -> v, or -1 if u and v are not adjacent.
  int findDart(int u, int v) const;

  // Same triangulation with every face reversed.
  SphereTriangulation mirrored() const;

  friend SphereTriangulation validate(int n, std::vector<Face> faces);

 private:
  SphereTriangulation() = default;

  int n_ = 0;
  std::vector<Face> faces_;
  std::vector<int> degrees_;
  std::vector<int> twin_;
  std::unordered_map<std::int64_t, int> dartIndex_;
};

// Checks every invariant of SphereTriangulation; throws Error with
// EulerViolation, NonManifoldEdge, NonManifoldVertex, Disconnected,
// DegenerateFace or InvalidVertex.
SphereTriangulation validate(int n, std::vector<Face> faces);

// Corner slot of a bounded face; corner index = 3 * boundedIndex + slot.
struct CornerRef {
  int boundedFace = 0;  // index into ApexLink::boundedFaces
  int slot = 0;
};

struct InteriorEdge {
  EdgeKey edge;
  int cornerA = 0;  // opposite corner in the first bounded face
  int cornerB = 0;  // opposite corner in the second bounded face
};

struct HullEdge {
  EdgeKey edge;
  int corner = 0;  // unique opposite corner
};

struct VertexCorners {
  int vertex = 0;
  std::vector<int> corners;
};

// Planar triangulation left after sending `apex` to infinity and deleting
// its open star. All angle variables live on its corners.
struct ApexLink {
  SphereTriangulation parent;
  int apex = 0;
  std::vector<int> boundedFaces;  // parent face indices, input order
  std::vector<int> hullCycle;     // neighbours of apex, counterclockwise
  std::vector<int> interiorVertices;
  std::vector<InteriorEdge> interiorEdges;
  std::vector<HullEdge> hullEdges;
  std::vector<VertexCorners> interiorVertexCorners;  // parallel to interiorVertices
  std::vector<VertexCorners> hullVertexCorners;      // parallel to hullCycle

  int cornerCount() const { return 3 * static_cast<int>(boundedFaces.size()); }
  int cornerVertex(int corner) const {
    return parent.face(boundedFaces[corner / 3])[corner % 3];
  }
  const Face& boundedFace(int i) const { return parent.face(boundedFaces[i]); }
};

ApexLink buildLink(const SphereTriangulation& t, int apex);

// Vertex of maximum degree, smallest id on ties.
int chooseApex(const SphereTriangulation& t);

struct AutomorphismCount {
  long orientationPreserving = 0;
  long total = 0;  // including orientation-reversing maps
};

AutomorphismCount automorphismCount(const SphereTriangulation& t);

// Number of orientation-preserving map isomorphisms from a onto b.
long countMapIsomorphisms(const SphereTriangulation& a, const SphereTriangulation& b);

// Exact canonical form of the combinatorial type up to relabelling and
// reflection. Equal codes <=> isomorphic or mirror-isomorphic maps.
std::vector<int> canonicalCode(const SphereTriangulation& t);

// Cheap invariant (sorted degree sequence + sorted face degree triples),
// hashed to 16 hex digits. Distinct types may collide.
std::string typeHash(const SphereTriangulation& t);

}  // namespace idealpoly
