#include <doctest.h>

#include <cmath>

#include "idealpoly/error.hpp"
#include "idealpoly/stats.hpp"
#include "idealpoly/testing/oracles.hpp"

using namespace idealpoly;

TEST_CASE("reference volumes") {
  CHECK(publishedVmax(4) == doctest::Approx(1.014942));
  CHECK(publishedVmax(12) == doctest::Approx(13.529628));
  CHECK_FALSE(publishedVmax(3).has_value());
  CHECK_FALSE(publishedVmax(13).has_value());
}

TEST_CASE("pairwise summation") {
  std::vector<double> xs(1000, 0.1);
  CHECK(pairwiseSum(xs) == doctest::Approx(100.0).epsilon(1e-14));
  CHECK(pairwiseSum(std::vector<double>{}) == 0.0);
}

TEST_CASE("sampleVolumes basic contract") {
  const auto s4 = sampleVolumes(4, 5000, 1, *publishedVmax(4), 1);
  CHECK(s4.volumes.size() == 5000);
  CHECK(*std::max_element(s4.volumes.begin(), s4.volumes.end()) <= 1.014942 + 1e-6);
  CHECK(s4.aboveVmax == 0);
  const auto s5 = sampleVolumes(5, 1, 0, *publishedVmax(5), 1);
  REQUIRE(s5.volumes.size() == 1);
  CHECK(s5.volumes[0] > 0.0);
  CHECK_THROWS_AS(sampleVolumes(3, 10, 0, 1.0), Error);
  CHECK_THROWS_AS(sampleVolumes(5, 0, 0, 1.0), Error);
  CHECK_THROWS_AS(sampleVolumes(5, 10, 0, -1.0), Error);
}

TEST_CASE("sampling is deterministic across thread counts") {
  const auto a = sampleVolumes(7, 200, 42, 5.0, 1);
  const auto b = sampleVolumes(7, 200, 42, 5.0, 3);
  CHECK(a.volumes == b.volumes);
  const auto c = sampleVolumes(7, 200, 43, 5.0, 1);
  CHECK(a.volumes != c.volumes);
}

TEST_CASE("Beta fit of a synthetic Beta(2, 3) sample") {
  Rng rng(2024);
  const auto xs = testing::sampleBeta(2.0, 3.0, 100000, rng);
  const auto fit = fitBeta(xs);
  CHECK(std::abs(fit.alpha - 2.0) < 0.05);
  CHECK(std::abs(fit.beta - 3.0) < 0.08);
  CHECK_FALSE(fit.usedMomentFallback);
  CHECK(fit.pValue > 0.001);
}

TEST_CASE("Beta fit of a uniform sample") {
  Rng rng(77);
  std::vector<double> xs(10000);
  for (double& x : xs) x = 1.0 - rng.uniform();
  const auto fit = fitBeta(xs);
  CHECK(std::abs(fit.alpha - 1.0) < 0.05);
  CHECK(std::abs(fit.beta - 1.0) < 0.05);
}

TEST_CASE("Beta fit clamps values at one and rejects bad input") {
  Rng rng(5);
  auto xs = testing::sampleBeta(5.0, 2.0, 1000, rng);
  xs[0] = 1.0;
  const auto fit = fitBeta(xs);
  CHECK(fit.clampedCount == 1);
  CHECK_THROWS_AS(fitBeta(std::vector<double>(5, 0.5)), Error);
  CHECK_THROWS_AS(fitBeta(std::vector<double>(20, 0.5)), Error);
  xs[1] = 0.0;
  CHECK_THROWS_AS(fitBeta(xs), Error);
}

TEST_CASE("n = 8 volume sample fits a Beta distribution") {
  const auto sample = sampleVolumes(8, 5000, 8, *publishedVmax(8), 0);
  const auto fit = fitBeta(sample);
  CHECK(std::abs(fit.mean - 0.685) < 0.015);
  CHECK(std::abs(fit.alpha - 13.26) < 2.0);
  CHECK(std::abs(fit.beta - 6.12) < 1.0);
  CHECK(fit.pValue > 0.01);
}

TEST_CASE("line fits") {
  const std::vector<double> xs{3, 7}, ys{6, 14};
  const auto line = fitLine(xs, ys);
  CHECK(line.slope == doctest::Approx(2.0));
  CHECK(std::abs(line.intercept) < 1e-12);
  CHECK_THROWS_AS(fitLine(std::vector<double>{1, 1}, std::vector<double>{1, 2}), Error);
  CHECK_THROWS_AS(fitLine(std::vector<double>{1, 2}, std::vector<double>{1}), Error);
}

TEST_CASE("scaling fit needs three distinct n") {
  BetaFit f;
  f.alpha = 2;
  f.beta = 1;
  std::vector<std::pair<int, BetaFit>> two{{5, f}, {6, f}, {6, f}};
  CHECK_THROWS_AS(scalingFit(two), Error);
  std::vector<std::pair<int, BetaFit>> fits;
  for (int n : {5, 6, 7, 8}) {
    BetaFit g;
    g.alpha = 4.0 * n - 3;
    g.beta = 1.5 * n + 1;
    fits.emplace_back(n, g);
  }
  const auto s = scalingFit(fits);
  CHECK(s.alpha.slope == doctest::Approx(4.0));
  CHECK(s.beta.slope == doctest::Approx(1.5));
  CHECK(s.rows.size() == 4);
  CHECK(s.rows[0].meanLimit == doctest::Approx(17.0 / 25.5));
}

TEST_CASE("search finds the maximal small polyhedra") {
  CHECK(searchMaxVolume(4, 1, 0).bestVolume == doctest::Approx(1.014942).epsilon(1e-6));
  CHECK(searchMaxVolume(5, 5, 0).bestVolume == doctest::Approx(2.029883).epsilon(1e-6));
  const auto six = searchMaxVolume(6, 30, 1);
  CHECK(std::abs(six.bestVolume - 3.663862) < 1e-4);
  REQUIRE(six.bestTriangulation.has_value());
  CHECK(six.perTrial.size() == 30);
}

TEST_CASE("search is deterministic across thread counts") {
  const auto a = searchMaxVolume(8, 20, 9, 1);
  const auto b = searchMaxVolume(8, 20, 9, 4);
  CHECK(a.bestVolume == b.bestVolume);
  CHECK(a.bestTrial == b.bestTrial);
  for (std::size_t i = 0; i < a.perTrial.size(); ++i) {
    CHECK(a.perTrial[i].volume == b.perTrial[i].volume);
    CHECK(a.perTrial[i].typeHash == b.perTrial[i].typeHash);
  }
}
