#include "idealpoly/triang.hpp"

#include <algorithm>
#include <cstdio>
#include <deque>
#include <numeric>

#include "idealpoly/error.hpp"

namespace idealpoly {

namespace {

std::int64_t dartKey(int u, int v, int n) {
  return static_cast<std::int64_t>(u) * n + v;
}

std::string faceText(const Face& f) {
  return "[" + std::to_string(f[0]) + "," + std::to_string(f[1]) + "," +
         std::to_string(f[2]) + "]";
}

}  // namespace

std::vector<EdgeKey> SphereTriangulation::edges() const {
  std::vector<EdgeKey> out;
  out.reserve(edgeCount());
  for (int d = 0; d < dartCount(); ++d) {
    if (dartTail(d) < dartHead(d)) out.push_back({dartTail(d), dartHead(d)});
  }
  std::sort(out.begin(), out.end());
  return out;
}

int SphereTriangulation::findDart(int u, int v) const {
  auto it = dartIndex_.find(dartKey(u, v, n_));
  return it == dartIndex_.end() ? -1 : it->second;
}

SphereTriangulation SphereTriangulation::mirrored() const {
  std::vector<Face> reversed;
  reversed.reserve(faces_.size());
  for (const Face& f : faces_) reversed.push_back({f[0], f[2], f[1]});
  return validate(n_, std::move(reversed));
}

SphereTriangulation validate(int n, std::vector<Face> faces) {
  if (n < 4) {
    throw Error(ErrorCode::EulerViolation,
                "a sphere triangulation needs at least 4 vertices, got " + std::to_string(n));
  }
  for (const Face& f : faces) {
    for (int v : f) {
      if (v < 0 || v >= n) {
        throw Error(ErrorCode::InvalidVertex,
                    "face " + faceText(f) + " references vertex outside 0.." + std::to_string(n - 1));
      }
    }
    if (f[0] == f[1] || f[1] == f[2] || f[0] == f[2]) {
      throw Error(ErrorCode::DegenerateFace, "face " + faceText(f) + " repeats a vertex");
    }
  }
  const auto expectedFaces = static_cast<std::size_t>(2 * n - 4);
  if (faces.size() != expectedFaces) {
    throw Error(ErrorCode::EulerViolation,
                "expected " + std::to_string(expectedFaces) + " faces for n=" + std::to_string(n) +
                    ", got " + std::to_string(faces.size()));
  }

  SphereTriangulation t;
  t.n_ = n;
  t.faces_ = std::move(faces);
  const int darts = t.dartCount();
  t.dartIndex_.reserve(static_cast<std::size_t>(darts) * 2);
  t.degrees_.assign(n, 0);
  for (int d = 0; d < darts; ++d) {
    const int u = t.dartTail(d);
    const int v = t.dartHead(d);
    if (!t.dartIndex_.emplace(dartKey(u, v, n), d).second) {
      throw Error(ErrorCode::NonManifoldEdge,
                  "directed edge " + std::to_string(u) + "->" + std::to_string(v) +
                      " occurs twice (inconsistent orientation or edge in more than two faces)");
    }
    ++t.degrees_[u];
  }
  t.twin_.assign(darts, -1);
  for (int d = 0; d < darts; ++d) {
    const int twin = t.findDart(t.dartHead(d), t.dartTail(d));
    if (twin < 0) {
      throw Error(ErrorCode::NonManifoldEdge,
                  "edge {" + std::to_string(t.dartTail(d)) + "," + std::to_string(t.dartHead(d)) +
                      "} lies in only one face");
    }
    t.twin_[d] = twin;
  }
  for (int v = 0; v < n; ++v) {
    if (t.degrees_[v] == 0) {
      throw Error(ErrorCode::Disconnected, "vertex " + std::to_string(v) + " is in no face");
    }
  }

  // Face adjacency connectivity.
  std::vector<char> seen(t.faces_.size(), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const int f = stack.back();
    stack.pop_back();
    for (int s = 0; s < 3; ++s) {
      const int g = t.twin_[3 * f + s] / 3;
      if (!seen[g]) {
        seen[g] = 1;
        ++reached;
        stack.push_back(g);
      }
    }
  }
  if (reached != t.faces_.size()) {
    throw Error(ErrorCode::Disconnected, "face adjacency graph is disconnected");
  }

  // Each vertex link must be one cycle. Rotating around the tail of dart d:
  // the previous dart of its face points back into the tail; its twin leaves
  // the tail again.
  std::vector<char> visited(darts, 0);
  for (int d = 0; d < darts; ++d) {
    if (visited[d]) continue;
    const int v = t.dartTail(d);
    int length = 0;
    int cur = d;
    do {
      visited[cur] = 1;
      ++length;
      cur = t.twin_[SphereTriangulation::dartNext(SphereTriangulation::dartNext(cur))];
    } while (cur != d);
    if (length != t.degrees_[v]) {
      throw Error(ErrorCode::NonManifoldVertex,
                  "link of vertex " + std::to_string(v) + " is not a single cycle");
    }
  }
  return t;
}

ApexLink buildLink(const SphereTriangulation& t, int apex) {
  if (apex < 0 || apex >= t.vertexCount()) {
    throw Error(ErrorCode::InvalidVertex, "apex " + std::to_string(apex) + " out of range");
  }
  ApexLink link{t, apex, {}, {}, {}, {}, {}, {}, {}};
  std::vector<int> boundedIndex(t.faceCount(), -1);
  std::vector<int> succ(t.vertexCount(), -1);
  for (int f = 0; f < t.faceCount(); ++f) {
    const Face& face = t.face(f);
    const auto it = std::find(face.begin(), face.end(), apex);
    if (it == face.end()) {
      boundedIndex[f] = static_cast<int>(link.boundedFaces.size());
      link.boundedFaces.push_back(f);
    } else {
      // Apex face (apex, x, y) borders the hull edge y -> x.
      const int s = static_cast<int>(it - face.begin());
      succ[face[(s + 2) % 3]] = face[(s + 1) % 3];
    }
  }

  std::vector<char> onHull(t.vertexCount(), 0);
  int start = -1;
  for (int v = 0; v < t.vertexCount(); ++v) {
    if (succ[v] >= 0) {
      start = v;
      break;
    }
  }
  for (int v = start;;) {
    link.hullCycle.push_back(v);
    onHull[v] = 1;
    v = succ[v];
    if (v == start) break;
  }

  for (int i = 0; i < static_cast<int>(link.boundedFaces.size()); ++i) {
    const int f = link.boundedFaces[i];
    for (int s = 0; s < 3; ++s) {
      const int d = 3 * f + s;
      const int twin = t.dartTwin(d);
      const int opposite = 3 * i + (s + 2) % 3;
      const EdgeKey key = EdgeKey::of(t.dartTail(d), t.dartHead(d));
      const int other = boundedIndex[twin / 3];
      if (other < 0) {
        link.hullEdges.push_back({key, opposite});
      } else if (d < twin) {
        link.interiorEdges.push_back({key, opposite, 3 * other + (twin % 3 + 2) % 3});
      }
    }
  }
  std::sort(link.interiorEdges.begin(), link.interiorEdges.end(),
            [](const InteriorEdge& a, const InteriorEdge& b) { return a.edge < b.edge; });
  std::sort(link.hullEdges.begin(), link.hullEdges.end(),
            [](const HullEdge& a, const HullEdge& b) { return a.edge < b.edge; });

  std::vector<std::vector<int>> cornersAt(t.vertexCount());
  for (int c = 0; c < link.cornerCount(); ++c) cornersAt[link.cornerVertex(c)].push_back(c);
  for (int v = 0; v < t.vertexCount(); ++v) {
    if (v == apex || onHull[v]) continue;
    link.interiorVertices.push_back(v);
    link.interiorVertexCorners.push_back({v, cornersAt[v]});
  }
  for (int w : link.hullCycle) link.hullVertexCorners.push_back({w, cornersAt[w]});
  return link;
}

int chooseApex(const SphereTriangulation& t) {
  int best = 0;
  for (int v = 1; v < t.vertexCount(); ++v) {
    if (t.degree(v) > t.degree(best)) best = v;
  }
  return best;
}

namespace {

// Tries to extend dart a0 -> b0 to an orientation-preserving map isomorphism.
bool extendsToIsomorphism(const SphereTriangulation& a, const SphereTriangulation& b, int a0,
                          int b0) {
  std::vector<int> dartMap(a.dartCount(), -1);
  std::vector<char> dartUsed(b.dartCount(), 0);
  std::vector<int> vertexMap(a.vertexCount(), -1);
  std::vector<int> vertexInverse(b.vertexCount(), -1);
  std::deque<std::pair<int, int>> queue{{a0, b0}};
  while (!queue.empty()) {
    const auto [x, y] = queue.front();
    queue.pop_front();
    if (dartMap[x] >= 0) {
      if (dartMap[x] != y) return false;
      continue;
    }
    if (dartUsed[y]) return false;
    const int tx = a.dartTail(x);
    const int ty = b.dartTail(y);
    if (vertexMap[tx] < 0 && vertexInverse[ty] < 0) {
      vertexMap[tx] = ty;
      vertexInverse[ty] = tx;
    } else if (vertexMap[tx] != ty || vertexInverse[ty] != tx) {
      return false;
    }
    dartMap[x] = y;
    dartUsed[y] = 1;
    queue.emplace_back(SphereTriangulation::dartNext(x), SphereTriangulation::dartNext(y));
    queue.emplace_back(a.dartTwin(x), b.dartTwin(y));
  }
  return true;
}

}  // namespace

long countMapIsomorphisms(const SphereTriangulation& a, const SphereTriangulation& b) {
  if (a.vertexCount() != b.vertexCount()) return 0;
  long count = 0;
  for (int d = 0; d < b.dartCount(); ++d) {
    if (a.degree(a.dartTail(0)) != b.degree(b.dartTail(d))) continue;
    if (extendsToIsomorphism(a, b, 0, d)) ++count;
  }
  return count;
}

AutomorphismCount automorphismCount(const SphereTriangulation& t) {
  AutomorphismCount out;
  out.orientationPreserving = countMapIsomorphisms(t, t);
  out.total = out.orientationPreserving + countMapIsomorphisms(t, t.mirrored());
  return out;
}

std::vector<int> canonicalCode(const SphereTriangulation& t) {
  std::vector<int> best;
  const SphereTriangulation mirror = t.mirrored();
  for (const SphereTriangulation* map : {&t, &mirror}) {
    const int darts = map->dartCount();
    for (int start = 0; start < darts; ++start) {
      std::vector<int> label(map->vertexCount(), -1);
      std::vector<char> seen(darts, 0);
      std::deque<int> queue{start};
      seen[start] = 1;
      int next = 0;
      while (!queue.empty()) {
        const int d = queue.front();
        queue.pop_front();
        if (label[map->dartTail(d)] < 0) label[map->dartTail(d)] = next++;
        for (int e : {SphereTriangulation::dartNext(d), map->dartTwin(d)}) {
          if (!seen[e]) {
            seen[e] = 1;
            queue.push_back(e);
          }
        }
      }
      std::vector<Face> relabeled;
      relabeled.reserve(map->faceCount());
      for (const Face& f : map->faces()) {
        Face g{label[f[0]], label[f[1]], label[f[2]]};
        std::rotate(g.begin(), std::min_element(g.begin(), g.end()), g.end());
        relabeled.push_back(g);
      }
      std::sort(relabeled.begin(), relabeled.end());
      std::vector<int> code{map->vertexCount()};
      for (const Face& f : relabeled) code.insert(code.end(), f.begin(), f.end());
      if (best.empty() || code < best) best = std::move(code);
    }
  }
  return best;
}

std::string typeHash(const SphereTriangulation& t) {
  std::vector<int> degrees(t.vertexCount());
  for (int v = 0; v < t.vertexCount(); ++v) degrees[v] = t.degree(v);
  std::vector<Face> triples;
  for (const Face& f : t.faces()) {
    Face g{t.degree(f[0]), t.degree(f[1]), t.degree(f[2])};
    std::sort(g.begin(), g.end());
    triples.push_back(g);
  }
  std::sort(degrees.begin(), degrees.end());
  std::sort(triples.begin(), triples.end());

  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](int value) {
    for (int byte = 0; byte < 4; ++byte) {
      h ^= static_cast<std::uint64_t>((value >> (8 * byte)) & 0xff);
      h *= 1099511628211ULL;
    }
  };
  for (int d : degrees) mix(d);
  mix(-1);
  for (const Face& f : triples) {
    for (int d : f) mix(d);
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace idealpoly
