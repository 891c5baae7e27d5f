#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "idealpoly/optvol.hpp"
#include "idealpoly/triang.hpp"

namespace idealpoly {

// Reference maximal volumes for n = 4..12, used as the default
// normalization. n = 4..7 have closed forms (regular tetrahedron 3L(pi/3),
// triangular bipyramid 6L(pi/3), octahedron 8L(pi/4), pentagonal bipyramid);
// n >= 8 are best values from randomized search.
inline constexpr double kPublishedVmax[] = {
    1.014942,   // n = 4
    2.029883,   // n = 5
    3.663862,   // n = 6
    4.986773,   // n = 7
    6.488469,   // n = 8
    8.162538,   // n = 9
    9.839315,   // n = 10
    11.449290,  // n = 11
    13.529628,  // n = 12
};

// Table value for n in [4, 12], nullopt otherwise.
std::optional<double> publishedVmax(int n);

struct VolumeSample {
  int n = 0;
  std::uint64_t seed = 0;
  double vmax = 0.0;
  std::vector<double> volumes;
  int aboveVmax = 0;  // volumes exceeding vmax * (1 + 1e-9)
};

// `count` random configurations with per-trial streams (seed, index).
// threads <= 0 uses the hardware concurrency.
VolumeSample sampleVolumes(int n, int count, std::uint64_t seed, double vmax, int threads = 0);

// Pairwise summation; the result does not depend on thread scheduling.
double pairwiseSum(std::span<const double> xs);

struct BetaFit {
  double alpha = 0.0;
  double beta = 0.0;
  double mean = 0.0;  // of the normalized sample
  double std = 0.0;   // sample standard deviation (N - 1)
  double ksStat = 0.0;
  double pValue = 0.0;
  int count = 0;
  int clampedCount = 0;  // normalized values >= 1 moved to 1 - 1e-12
  int iterations = 0;
  bool usedMomentFallback = false;  // Newton did not converge
  std::string caveat;
};

// Maximum likelihood Beta fit of already normalized values in (0, 1].
BetaFit fitBeta(std::span<const double> normalized);
// Normalizes by sample.vmax first.
BetaFit fitBeta(const VolumeSample& sample);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

// Least squares y = slope * x + intercept; needs two distinct x values.
LineFit fitLine(std::span<const double> xs, std::span<const double> ys);

struct ScalingRow {
  int n = 0;
  double ratio = 0.0;      // alpha / beta
  double meanLimit = 0.0;  // alpha / (alpha + beta)
};

struct ScalingFit {
  LineFit alpha;
  LineFit beta;
  std::vector<ScalingRow> rows;
};

// Needs at least three distinct n.
ScalingFit scalingFit(std::span<const std::pair<int, BetaFit>> fits);

struct TrialSummary {
  int index = 0;
  double volume = 0.0;  // 0 when the sampled type was not realizable
  std::string typeHash;
};

struct SearchResult {
  int n = 0;
  std::uint64_t seed = 0;
  int trials = 0;
  int bestTrial = -1;
  double bestVolume = 0.0;
  std::optional<SphereTriangulation> bestTriangulation;
  std::optional<OptResult> bestAngles;
  std::vector<TrialSummary> perTrial;
  int distinctTypes = 0;
};

// Random Delaunay types, each optimized once (memoized on the exact
// canonical code); best volume, ties broken by the lowest trial index.
SearchResult searchMaxVolume(int n, int trials, std::uint64_t seed, int threads = 0);

}  // namespace idealpoly
