#include "idealpoly/geom.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <numeric>
#include <string>

#include "idealpoly/error.hpp"
#include "idealpoly/specfun.hpp"

namespace idealpoly {

namespace {

using Complex = std::complex<double>;
constexpr double kPi = std::numbers::pi;

double orient(Complex a, Complex b, Complex c) {
  return (b.real() - a.real()) * (c.imag() - a.imag()) -
         (b.imag() - a.imag()) * (c.real() - a.real());
}

// Corner angles of every bounded triangle, 3 per triangle in stored order.
std::vector<double> triangleAngles(const PlanarTriangulation& pt) {
  std::vector<double> angles;
  angles.reserve(3 * pt.triangles.size());
  for (const Face& f : pt.triangles) {
    const Complex p[3] = {pt.positions[f[0]], pt.positions[f[1]], pt.positions[f[2]]};
    double longest = 0.0;
    for (int s = 0; s < 3; ++s) longest = std::max(longest, std::norm(p[(s + 1) % 3] - p[s]));
    const double twiceArea = orient(p[0], p[1], p[2]);
    if (!(twiceArea > 2e-14 * longest)) {
      throw Error(ErrorCode::DegenerateTriangle,
                  "triangle [" + std::to_string(f[0]) + "," + std::to_string(f[1]) + "," +
                      std::to_string(f[2]) + "] has (near) zero area");
    }
    for (int s = 0; s < 3; ++s) {
      const Complex u = p[(s + 1) % 3] - p[s];
      const Complex v = p[(s + 2) % 3] - p[s];
      const double cross = u.real() * v.imag() - u.imag() * v.real();
      const double dot = u.real() * v.real() + u.imag() * v.imag();
      angles.push_back(std::atan2(cross, dot));
    }
  }
  return angles;
}

std::vector<int> hullFromTriangles(const std::vector<Face>& triangles, int vertexCount) {
  // Boundary darts are those whose reverse is absent.
  std::vector<int> dart(static_cast<std::size_t>(vertexCount) * vertexCount, 0);
  auto at = [&](int a, int b) -> int& { return dart[static_cast<std::size_t>(a) * vertexCount + b]; };
  for (const Face& f : triangles) {
    for (int s = 0; s < 3; ++s) at(f[s], f[(s + 1) % 3]) = 1;
  }
  std::vector<int> succ(vertexCount, -1);
  for (const Face& f : triangles) {
    for (int s = 0; s < 3; ++s) {
      const int a = f[s];
      const int b = f[(s + 1) % 3];
      if (!at(b, a)) succ[a] = b;
    }
  }
  int start = -1;
  for (int v = 0; v < vertexCount; ++v) {
    if (succ[v] >= 0) {
      start = v;
      break;
    }
  }
  std::vector<int> hull;
  for (int v = start; v >= 0;) {
    hull.push_back(v);
    v = succ[v];
    if (v == start || static_cast<int>(hull.size()) > vertexCount) break;
  }
  return hull;
}

}  // namespace

int PointConfiguration::infinityIndex() const {
  for (int i = 0; i < size(); ++i) {
    if (points[i].infinite) return i;
  }
  return -1;
}

PointConfiguration makeConfiguration(std::vector<ExtendedComplex> points) {
  int infinities = 0;
  std::vector<Complex> finite;
  for (const auto& p : points) {
    if (p.infinite) {
      ++infinities;
    } else {
      if (!std::isfinite(p.value.real()) || !std::isfinite(p.value.imag())) {
        throw Error(ErrorCode::InvalidInput, "configuration point is not finite");
      }
      finite.push_back(p.value);
    }
  }
  if (infinities != 1) {
    throw Error(ErrorCode::InvalidInput, "configuration needs exactly one point at infinity");
  }
  if (finite.size() < 3) {
    throw Error(ErrorCode::InvalidInput, "configuration needs at least 3 finite points");
  }
  const double scale = std::abs(finite[1] - finite[0]);
  for (std::size_t i = 0; i < finite.size(); ++i) {
    for (std::size_t j = i + 1; j < finite.size(); ++j) {
      if (!(std::abs(finite[i] - finite[j]) > 1e-9 * scale)) {
        throw Error(ErrorCode::DegenerateSample,
                    "finite points " + std::to_string(i) + " and " + std::to_string(j) +
                        " (nearly) coincide");
      }
    }
  }
  return PointConfiguration{std::move(points)};
}

std::vector<Vec3> sampleSphere(int count, Rng& rng) {
  std::vector<Vec3> out;
  out.reserve(std::max(count, 0));
  for (int i = 0; i < count; ++i) {
    const double z = rng.uniform(-1.0, 1.0);
    const double phi = rng.uniform(0.0, 2.0 * kPi);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    out.push_back({r * std::cos(phi), r * std::sin(phi), z});
  }
  return out;
}

ExtendedComplex stereographic(const Vec3& p) {
  const double norm = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
  if (std::abs(norm - 1.0) > 1e-12) {
    throw Error(ErrorCode::DomainError, "stereographic projection needs a unit vector");
  }
  const double denom = 1.0 - p[2];
  if (denom <= 0.0) return ExtendedComplex::infinity();
  return ExtendedComplex::at({p[0] / denom, p[1] / denom});
}

Vec3 inverseStereographic(const ExtendedComplex& z) {
  if (z.infinite) return {0.0, 0.0, 1.0};
  const double r2 = std::norm(z.value);
  const double d = r2 + 1.0;
  return {2.0 * z.value.real() / d, 2.0 * z.value.imag() / d, (r2 - 1.0) / d};
}

PointConfiguration randomConfiguration(int n, Rng& rng) {
  if (n < 4) throw Error(ErrorCode::DomainError, "random configuration needs n >= 4");
  std::vector<ExtendedComplex> points;
  points.reserve(n);
  points.push_back(stereographic({0.0, 0.0, -1.0}));
  points.push_back(stereographic({1.0, 0.0, 0.0}));
  for (int k = 0; k < n - 3; ++k) {
    bool placed = false;
    for (int attempt = 0; attempt < 100 && !placed; ++attempt) {
      const Vec3 p = sampleSphere(1, rng).front();
      if (1.0 - p[2] < 1e-12) continue;
      const ExtendedComplex z = stereographic(p);
      const bool clash = std::any_of(points.begin(), points.end(), [&](const ExtendedComplex& q) {
        return std::abs(q.value - z.value) < 1e-6;
      });
      if (!clash) {
        points.push_back(z);
        placed = true;
      }
    }
    if (!placed) {
      throw Error(ErrorCode::DegenerateSample, "resampling exhausted while placing a random point");
    }
  }
  points.push_back(ExtendedComplex::infinity());
  return PointConfiguration{std::move(points)};
}

double inCircle(Complex a, Complex b, Complex c, Complex d) {
  const double adx = a.real() - d.real(), ady = a.imag() - d.imag();
  const double bdx = b.real() - d.real(), bdy = b.imag() - d.imag();
  const double cdx = c.real() - d.real(), cdy = c.imag() - d.imag();
  const double alift = adx * adx + ady * ady;
  const double blift = bdx * bdx + bdy * bdy;
  const double clift = cdx * cdx + cdy * cdy;
  const double t1 = adx * (bdy * clift - blift * cdy);
  const double t2 = ady * (bdx * clift - blift * cdx);
  const double t3 = alift * (bdx * cdy - bdy * cdx);
  const double det = t1 - t2 + t3;
  const double permanent =
      std::abs(adx) * (std::abs(bdy * clift) + std::abs(blift * cdy)) +
      std::abs(ady) * (std::abs(bdx * clift) + std::abs(blift * cdx)) +
      alift * (std::abs(bdx * cdy) + std::abs(bdy * cdx));
  return permanent > 0.0 ? det / permanent : 0.0;
}

PlanarTriangulation delaunay(const PointConfiguration& config) {
  PlanarTriangulation pt;
  pt.infinityIndex = config.infinityIndex();
  const int n = config.size();
  pt.positions.assign(n, Complex(std::nan(""), std::nan("")));
  std::vector<int> order;
  for (int i = 0; i < n; ++i) {
    if (i == pt.infinityIndex) continue;
    pt.positions[i] = config.points[i].value;
    order.push_back(i);
  }
  const auto& pos = pt.positions;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (pos[a].real() != pos[b].real()) return pos[a].real() < pos[b].real();
    if (pos[a].imag() != pos[b].imag()) return pos[a].imag() < pos[b].imag();
    return a < b;
  });
  if (order.size() < 3) throw Error(ErrorCode::DegenerateSample, "fewer than 3 finite points");

  // Seed: the collinear prefix fanned to the first off-line point.
  std::size_t k = 2;
  while (k < order.size() && orient(pos[order[0]], pos[order[1]], pos[order[k]]) == 0.0) ++k;
  if (k == order.size()) throw Error(ErrorCode::DegenerateSample, "all finite points are collinear");
  const int apex = order[k];
  const bool left = orient(pos[order[0]], pos[order[1]], pos[apex]) > 0.0;
  std::vector<Face>& tris = pt.triangles;
  for (std::size_t j = 0; j + 1 < k; ++j) {
    if (left) {
      tris.push_back({order[j], order[j + 1], apex});
    } else {
      tris.push_back({order[j + 1], order[j], apex});
    }
  }
  std::vector<int> hull(order.begin(), order.begin() + static_cast<long>(k));
  hull.push_back(apex);
  if (!left) std::reverse(hull.begin(), hull.end());

  // Sweep: each new point is lexicographically largest, hence outside the hull.
  for (std::size_t idx = k + 1; idx < order.size(); ++idx) {
    const int r = order[idx];
    const int h = static_cast<int>(hull.size());
    std::vector<char> visible(h);
    for (int i = 0; i < h; ++i) visible[i] = orient(pos[hull[i]], pos[hull[(i + 1) % h]], pos[r]) < 0.0;
    int first = -1;
    for (int i = 0; i < h; ++i) {
      if (visible[i] && !visible[(i + h - 1) % h]) {
        first = i;
        break;
      }
    }
    if (first < 0) throw Error(ErrorCode::NumericalFailure, "sweep found no visible hull edge");
    std::rotate(hull.begin(), hull.begin() + first, hull.end());
    std::rotate(visible.begin(), visible.begin() + first, visible.end());
    int chain = 0;
    while (chain < h && visible[chain]) ++chain;
    for (int i = 0; i < chain; ++i) tris.push_back({hull[(i + 1) % h], hull[i], r});
    std::vector<int> next{hull[0], r};
    for (int i = chain; i < h; ++i) next.push_back(hull[i]);
    hull = std::move(next);
  }

  // Lawson flips until every interior edge is locally Delaunay.
  std::vector<int> dart(static_cast<std::size_t>(n) * n, -1);
  auto at = [&](int a, int b) -> int& { return dart[static_cast<std::size_t>(a) * n + b]; };
  auto registerTriangle = [&](int t) {
    for (int s = 0; s < 3; ++s) at(tris[t][s], tris[t][(s + 1) % 3]) = 3 * t + s;
  };
  for (int t = 0; t < static_cast<int>(tris.size()); ++t) registerTriangle(t);
  std::vector<std::pair<int, int>> stack;
  for (const Face& f : tris) {
    for (int s = 0; s < 3; ++s) stack.emplace_back(f[s], f[(s + 1) % 3]);
  }
  long flips = 0;
  const long flipCap = 100L * n * n + 1000;
  while (!stack.empty()) {
    const auto [a, b] = stack.back();
    stack.pop_back();
    const int d1 = at(a, b);
    const int d2 = at(b, a);
    if (d1 < 0 || d2 < 0) continue;
    const int t = d1 / 3;
    const int u = d2 / 3;
    if (tris[t][d1 % 3] != a || tris[u][d2 % 3] != b) continue;
    const int c = tris[t][(d1 % 3 + 2) % 3];
    const int d = tris[u][(d2 % 3 + 2) % 3];
    if (!(inCircle(pos[a], pos[b], pos[c], pos[d]) > 1e-12)) continue;
    if (++flips > flipCap) throw Error(ErrorCode::NumericalFailure, "Delaunay flipping did not terminate");
    at(a, b) = -1;
    at(b, a) = -1;
    tris[t] = {a, d, c};
    tris[u] = {d, b, c};
    registerTriangle(t);
    registerTriangle(u);
    stack.emplace_back(a, d);
    stack.emplace_back(d, b);
    stack.emplace_back(b, c);
    stack.emplace_back(c, a);
  }
  pt.hull = hullFromTriangles(tris, n);
  return pt;
}

ClosedTriangulation closeWithInfinity(const PlanarTriangulation& pt) {
  std::vector<Face> faces = pt.triangles;
  const int h = static_cast<int>(pt.hull.size());
  for (int i = 0; i < h; ++i) {
    faces.push_back({pt.hull[(i + 1) % h], pt.hull[i], pt.infinityIndex});
  }
  ClosedTriangulation out{validate(pt.vertexCount(), std::move(faces)), nullptr};
  out.link = std::make_shared<const ApexLink>(buildLink(out.sphere, pt.infinityIndex));
  return out;
}

AngleAssignment euclideanAngles(const PlanarTriangulation& pt) {
  AngleAssignment out;
  out.values = triangleAngles(pt);
  out.link = closeWithInfinity(pt).link;
  return out;
}

double configVolume(const PointConfiguration& config) {
  const auto checked = makeConfiguration(config.points);
  const auto angles = triangleAngles(delaunay(checked));
  double v = 0.0;
  for (double a : angles) v += lobachevsky(a);
  return v;
}

LayoutResult layout(const ApexLink& link, std::span<const double> angles) {
  const int faces = static_cast<int>(link.boundedFaces.size());
  if (static_cast<int>(angles.size()) != link.cornerCount()) {
    throw Error(ErrorCode::DomainError, "layout: angle count does not match the link");
  }
  for (int f = 0; f < faces; ++f) {
    const double sum = angles[3 * f] + angles[3 * f + 1] + angles[3 * f + 2];
    if (std::abs(sum - kPi) > 1e-8) {
      throw Error(ErrorCode::DomainError, "layout: triangle angles do not sum to pi");
    }
  }
  for (const auto& vc : link.interiorVertexCorners) {
    double sum = 0.0;
    for (int c : vc.corners) sum += angles[c];
    if (std::abs(sum - 2.0 * kPi) > 1e-8) {
      throw Error(ErrorCode::DomainError, "layout: interior vertex angles do not sum to 2 pi");
    }
  }

  const SphereTriangulation& t = link.parent;
  std::vector<int> boundedIndex(t.faceCount(), -1);
  for (int f = 0; f < faces; ++f) boundedIndex[link.boundedFaces[f]] = f;
  int root = 0;
  auto sortedFace = [&](int f) {
    Face g = link.boundedFace(f);
    std::sort(g.begin(), g.end());
    return g;
  };
  for (int f = 1; f < faces; ++f) {
    if (sortedFace(f) < sortedFace(root)) root = f;
  }

  std::vector<Complex> position(t.vertexCount());
  std::vector<char> placed(t.vertexCount(), 0);
  double residual = 0.0;
  // Third vertex of bounded face f given the vertices in slots s and s+1.
  auto place = [&](int f, int s) {
    const Face& face = link.boundedFace(f);
    const int p = face[s], q = face[(s + 1) % 3], r = face[(s + 2) % 3];
    const double ap = angles[3 * f + s];
    const double aq = angles[3 * f + (s + 1) % 3];
    const double ar = angles[3 * f + (s + 2) % 3];
    const Complex z = position[p] + (position[q] - position[p]) * (std::sin(aq) / std::sin(ar)) *
                                        std::polar(1.0, ap);
    if (placed[r]) {
      residual = std::max(residual, std::abs(z - position[r]) / std::max(1.0, std::abs(position[r])));
    } else {
      position[r] = z;
      placed[r] = 1;
    }
  };

  const Face& rootFace = link.boundedFace(root);
  position[rootFace[0]] = {0.0, 0.0};
  position[rootFace[1]] = {1.0, 0.0};
  placed[rootFace[0]] = placed[rootFace[1]] = 1;
  place(root, 0);
  std::vector<char> visited(faces, 0);
  visited[root] = 1;
  std::deque<int> queue{root};
  while (!queue.empty()) {
    const int f = queue.front();
    queue.pop_front();
    const int parentFace = link.boundedFaces[f];
    for (int s = 0; s < 3; ++s) {
      const int twin = t.dartTwin(3 * parentFace + s);
      const int g = boundedIndex[twin / 3];
      if (g < 0 || visited[g]) continue;
      visited[g] = 1;
      place(g, twin % 3);
      queue.push_back(g);
    }
  }
  // Faces already placed may still close up inconsistently across edges
  // that the BFS tree did not use.
  for (int f = 0; f < faces; ++f) {
    for (int s = 0; s < 3; ++s) place(f, s);
  }

  if (residual > 1e-6) {
    throw Error(ErrorCode::LayoutInconsistent,
                "layout closure residual " + std::to_string(residual) + " exceeds 1e-6");
  }
  std::vector<ExtendedComplex> points(t.vertexCount());
  for (int v = 0; v < t.vertexCount(); ++v) {
    points[v] = v == link.apex ? ExtendedComplex::infinity() : ExtendedComplex::at(position[v]);
  }
  return {makeConfiguration(std::move(points)), residual};
}

PlanarTriangulation planarFromLink(const ApexLink& link, const PointConfiguration& config) {
  PlanarTriangulation pt;
  pt.infinityIndex = link.apex;
  pt.positions.resize(config.size());
  for (int i = 0; i < config.size(); ++i) pt.positions[i] = config.points[i].value;
  for (int f : link.boundedFaces) pt.triangles.push_back(link.parent.face(f));
  pt.hull = link.hullCycle;
  return pt;
}

BallModels toBallModels(const PointConfiguration& config) {
  BallModels out;
  for (const auto& p : config.points) {
    const Vec3 v = inverseStereographic(p);
    out.klein.push_back(v);
    out.poincare.push_back(v);
  }
  return out;
}

}  // namespace idealpoly
