#include <doctest.h>

#include <cmath>
#include <numbers>

#include "idealpoly/error.hpp"
#include "idealpoly/geom.hpp"
#include "idealpoly/testing/corpus.hpp"
#include "idealpoly/testing/oracles.hpp"

using namespace idealpoly;
using std::numbers::pi;
namespace corpus = idealpoly::testing;
using C = std::complex<double>;

namespace {

PointConfiguration config(std::vector<C> finite) {
  std::vector<ExtendedComplex> pts;
  for (C z : finite) pts.push_back(ExtendedComplex::at(z));
  pts.push_back(ExtendedComplex::infinity());
  return makeConfiguration(std::move(pts));
}

const C kApexEquilateral{0.5, std::sqrt(3.0) / 2};

}  // namespace

TEST_CASE("sampleSphere statistics") {
  Rng rng(11);
  CHECK(sampleSphere(0, rng).empty());
  const auto pts = sampleSphere(100000, rng);
  double meanZ = 0.0;
  int cap = 0;
  for (const auto& p : pts) {
    CHECK(std::abs(p[0] * p[0] + p[1] * p[1] + p[2] * p[2] - 1.0) < 1e-12);
    meanZ += p[2];
    cap += p[2] > 0.5;
  }
  meanZ /= pts.size();
  CHECK(std::abs(meanZ) < 0.0055);
  const double frac = static_cast<double>(cap) / pts.size();
  CHECK(std::abs(frac - 0.25) < 3 * std::sqrt(0.25 * 0.75 / pts.size()));
}

TEST_CASE("stereographic projection") {
  CHECK(stereographic({0, 0, 1}).infinite);
  const auto south = stereographic({0, 0, -1});
  CHECK_FALSE(south.infinite);
  CHECK(std::abs(south.value) < 1e-15);
  CHECK(std::abs(stereographic({1, 0, 0}).value - C(1, 0)) < 1e-15);
  const auto a = inverseStereographic(ExtendedComplex::at(0));
  CHECK(a[2] == doctest::Approx(-1.0));
  const auto b = inverseStereographic(ExtendedComplex::infinity());
  CHECK(b[2] == doctest::Approx(1.0));
  Rng rng(3);
  for (const auto& p : sampleSphere(50, rng)) {
    const auto q = inverseStereographic(stereographic(p));
    for (int i = 0; i < 3; ++i) CHECK(q[i] == doctest::Approx(p[i]).epsilon(1e-10));
  }
  CHECK_THROWS_AS(stereographic({2, 0, 0}), Error);
}

TEST_CASE("randomConfiguration") {
  Rng rng(5);
  const auto c4 = randomConfiguration(4, rng);
  CHECK(c4.size() == 4);
  CHECK(c4.points[c4.infinityIndex()].infinite);
  Rng rng12(12);
  const auto c12 = randomConfiguration(12, rng12);
  std::vector<C> finite;
  for (const auto& p : c12.points) if (!p.infinite) finite.push_back(p.value);
  REQUIRE(finite.size() == 11);
  for (std::size_t i = 0; i < finite.size(); ++i)
    for (std::size_t j = i + 1; j < finite.size(); ++j) CHECK(std::abs(finite[i] - finite[j]) > 1e-6);
  CHECK_THROWS_AS(randomConfiguration(3, rng), Error);
}

TEST_CASE("n = 4 random volumes never exceed the regular tetrahedron") {
  Rng rng(99);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) worst = std::max(worst, configVolume(randomConfiguration(4, rng)));
  CHECK(worst <= 1.014942 + 1e-6);
}

TEST_CASE("makeConfiguration error paths") {
  CHECK_THROWS_AS(makeConfiguration({ExtendedComplex::at(0), ExtendedComplex::at(1), ExtendedComplex::at(C(0, 1))}),
                  Error);
  try {
    config({0, 1, C(1, 1e-13)});
    FAIL("collision accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateSample);
  }
}

TEST_CASE("delaunay of small point sets") {
  const auto tri = delaunay(config({0, 1, C(0, 1)}));
  CHECK(tri.triangles.size() == 1);
  CHECK(tri.hull.size() == 3);

  const auto sq1 = delaunay(config({0, 1, C(1, 1), C(0, 1)}));
  const auto sq2 = delaunay(config({0, 1, C(1, 1), C(0, 1)}));
  CHECK(sq1.triangles.size() == 2);
  CHECK(sq1.hull.size() == 4);
  CHECK(sq1.triangles == sq2.triangles);
}

TEST_CASE("delaunay has empty circumcircles on random inputs") {
  for (int i = 0; i < 100; ++i) {
    Rng rng = Rng::forStream(17, i);
    const auto pt = delaunay(randomConfiguration(10, rng));
    CHECK(testing::emptyCircumcircles(pt));
    CHECK(pt.triangles.size() == 2 * 9 - 2 - pt.hull.size());
  }
}

TEST_CASE("inCircle sign") {
  CHECK(inCircle(0, 1, C(0, 1), C(0.5, 0.5)) > 0);
  CHECK(inCircle(0, 1, C(0, 1), C(3, 3)) < 0);
  CHECK(std::abs(inCircle(0, 1, C(0, 1), C(1, 1))) < 1e-12);
}

TEST_CASE("closeWithInfinity") {
  const auto tet = closeWithInfinity(delaunay(config({0, 1, kApexEquilateral})));
  CHECK(canonicalCode(tet.sphere) == canonicalCode(corpus::tetrahedron()));
  CHECK(tet.link->apex == 3);
  const auto bp = closeWithInfinity(delaunay(config({0, 1, C(1, 1), C(0, 1)})));
  CHECK(canonicalCode(bp.sphere) == canonicalCode(corpus::triangularBipyramid()));
  const auto oct = closeWithInfinity(delaunay(config({0, 1, C(1, 1), C(0, 1), C(0.5, 0.5)})));
  CHECK(canonicalCode(oct.sphere) == canonicalCode(corpus::octahedron()));
}

TEST_CASE("euclidean angles") {
  const auto eq = euclideanAngles(delaunay(config({0, 1, kApexEquilateral})));
  for (double a : eq.values) CHECK(a == doctest::Approx(pi / 3).epsilon(1e-12));
  auto right = euclideanAngles(delaunay(config({0, 1, C(0, 1)})));
  std::sort(right.values.begin(), right.values.end());
  CHECK(right.values[0] == doctest::Approx(pi / 4));
  CHECK(right.values[1] == doctest::Approx(pi / 4));
  CHECK(right.values[2] == doctest::Approx(pi / 2));
  Rng rng(8);
  for (int i = 0; i < 20; ++i) {
    const auto a = euclideanAngles(delaunay(randomConfiguration(9, rng)));
    for (std::size_t f = 0; f < a.values.size(); f += 3) {
      CHECK(std::abs(a.values[f] + a.values[f + 1] + a.values[f + 2] - pi) < 1e-10);
    }
  }
}

TEST_CASE("configuration volumes") {
  CHECK(configVolume(config({0, 1, kApexEquilateral})) == doctest::Approx(1.014942).epsilon(1e-6));
  CHECK(configVolume(config({0, 1, C(1, 1), C(0, 1), C(0.5, 0.5)})) == doctest::Approx(3.663862).epsilon(1e-6));
}

TEST_CASE("volume is invariant under similarities") {
  Rng rng(21);
  for (int i = 0; i < 20; ++i) {
    const auto c = randomConfiguration(8, rng);
    std::vector<ExtendedComplex> moved = c.points;
    const C scale = std::polar(2.7, 1.1);
    for (auto& p : moved) if (!p.infinite) p.value = scale * p.value + C(-3.0, 0.4);
    CHECK(configVolume(makeConfiguration(moved)) == doctest::Approx(configVolume(c)).epsilon(1e-10));
  }
}

TEST_CASE("layout of optimal angles") {
  const auto tet = optimizeTriangulation(corpus::tetrahedron(), 3);
  const auto laid = layout(*tet->angles.link, tet->angles.values);
  std::vector<C> pts;
  for (const auto& p : laid.config.points) if (!p.infinite) pts.push_back(p.value);
  REQUIRE(pts.size() == 3);
  CHECK(std::abs(pts[0] - pts[1]) == doctest::Approx(std::abs(pts[1] - pts[2])));
  CHECK(std::abs(pts[0] - pts[2]) == doctest::Approx(std::abs(pts[1] - pts[2])));

  const auto oct = optimizeTriangulation(corpus::octahedron(), 0);
  const auto octLaid = layout(*oct->angles.link, oct->angles.values);
  CHECK(configVolume(octLaid.config) == doctest::Approx(oct->volume).epsilon(1e-9));
  CHECK(octLaid.closureResidual < 1e-9);
}

TEST_CASE("layout round trip on random configurations") {
  for (int i = 0; i < 30; ++i) {
    Rng rng = Rng::forStream(5, i);
    const auto pt = delaunay(randomConfiguration(9, rng));
    const auto closed = closeWithInfinity(pt);
    const auto angles = euclideanAngles(pt);
    const auto laid = layout(*closed.link, angles.values);
    const auto again = euclideanAngles(planarFromLink(*closed.link, laid.config));
    for (std::size_t c = 0; c < angles.values.size(); ++c) {
      CHECK(again.values[c] == doctest::Approx(angles.values[c]).epsilon(1e-8));
    }
  }
}

TEST_CASE("layout rejects angles that break the equalities") {
  const auto link = buildLink(corpus::tetrahedron(), 3);
  CHECK_THROWS_AS(layout(link, std::vector<double>{1.0, 1.0, 1.0}), Error);
  CHECK_THROWS_AS(layout(link, std::vector<double>{1.0, 1.0}), Error);
}

TEST_CASE("ball model coordinates lie on the unit sphere") {
  const auto models = toBallModels(config({0, 1, C(1, 1), C(0, 1), C(0.5, 0.5)}));
  REQUIRE(models.klein.size() == 6);
  for (const auto& v : models.klein) CHECK(v[0] * v[0] + v[1] * v[1] + v[2] * v[2] == doctest::Approx(1.0));
  CHECK(models.klein[5][2] == doctest::Approx(1.0));
}
