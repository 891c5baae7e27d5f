#include <doctest.h>

#include <filesystem>

#include "idealpoly/error.hpp"
#include "idealpoly/io.hpp"
#include "idealpoly/testing/corpus.hpp"

using namespace idealpoly;
namespace corpus = idealpoly::testing;

TEST_CASE("triangulation JSON round trip") {
  for (const auto& e : corpus::corpus()) {
    const auto j = io::triangulationToJson(e.triangulation);
    const auto back = io::triangulationFromJson(io::parseJson(j.dump(), "test"));
    CHECK(back.faces() == e.triangulation.faces());
  }
}

TEST_CASE("triangulation JSON errors") {
  CHECK_THROWS_AS(io::parseJson("{not json", "x"), Error);
  CHECK_THROWS_AS(io::triangulationFromJson(io::Json{{"faces", io::Json::array()}}), Error);
  CHECK_THROWS_AS(io::triangulationFromJson(io::parseJson(R"({"n": 4, "faces": [[0,1]]})", "x")), Error);
  CHECK_THROWS_AS(io::triangulationFromJson(io::parseJson(R"({"n": "four", "faces": []})", "x")), Error);
}

TEST_CASE("configuration JSON round trip") {
  const auto j = io::parseJson(R"({"points": [[0, 0], [1, 0], [0.5, 0.8], null]})", "c");
  const auto c = io::configurationFromJson(j);
  CHECK(c.infinityIndex() == 3);
  const auto again = io::configurationFromJson(io::configurationToJson(c));
  for (int i = 0; i < c.size(); ++i) {
    CHECK(again.points[i].infinite == c.points[i].infinite);
    CHECK(again.points[i].value == c.points[i].value);
  }
  const auto s = io::configurationFromJson(io::parseJson(R"({"points": ["inf", [0, 0], [1, 0], [0, 1]]})", "c"));
  CHECK(s.infinityIndex() == 0);
  CHECK_THROWS_AS(io::configurationFromJson(io::parseJson(R"({"points": [[0], [1, 0]]})", "c")), Error);
}

TEST_CASE("sample CSV round trip is exact") {
  const auto s = sampleVolumes(6, 50, 3, 3.663862, 1);
  const auto back = io::sampleFromCsv(io::sampleToCsv(s));
  CHECK(back.n == 6);
  CHECK(back.seed == 3);
  CHECK(back.vmax == s.vmax);
  CHECK(back.volumes == s.volumes);
}

TEST_CASE("sample CSV errors") {
  CHECK_THROWS_AS(io::sampleFromCsv("volume\n1.0\n"), Error);
  CHECK_THROWS_AS(io::sampleFromCsv("# n=6,vmax=3.6\nvolume\nabc\n"), Error);
  CHECK_THROWS_AS(io::sampleFromCsv("# n=x,vmax=3.6\nvolume\n1\n"), Error);
  const auto ok = io::sampleFromCsv("# n=6,vmax=2\r\nvolume\r\n1.5\r\n2.5\r\n");
  CHECK(ok.volumes.size() == 2);
  CHECK(ok.aboveVmax == 1);
}

TEST_CASE("Beta fit JSON round trip") {
  BetaFit f;
  f.alpha = 12.5;
  f.beta = 6.25;
  f.mean = 0.66;
  const auto [n, back] = io::betaFitFromJson(io::betaFitToJson(f, 8, 6.5));
  CHECK(n == 8);
  CHECK(back.alpha == f.alpha);
  CHECK(back.beta == f.beta);
  CHECK(back.mean == f.mean);
  CHECK_THROWS_AS(io::betaFitFromJson(io::Json{{"n", 8}, {"alpha", -1.0}, {"beta", 1.0}}), Error);
}

TEST_CASE("optimizer output JSON") {
  const auto r = optimizeTriangulation(corpus::octahedron());
  REQUIRE(r.has_value());
  const auto j = io::optResultToJson(*r);
  CHECK(j["volume"].get<double>() == doctest::Approx(3.663862).epsilon(1e-6));
  CHECK(j["corners"].size() == 12);
  CHECK(j["dihedrals"].size() == 12);
  CHECK(j["dihedral_lcd"] == 2);
  CHECK(j["dihedrals"][0]["rational"]["pi_fraction"] == "1/2 π");
}

TEST_CASE("readFile reports missing files") {
  try {
    io::readFile("/nonexistent/idealpoly.json");
    FAIL("missing file read");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InputNotFound);
  }
}
