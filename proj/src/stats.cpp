#include "idealpoly/stats.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include "idealpoly/error.hpp"
#include "idealpoly/geom.hpp"
#include "idealpoly/specfun.hpp"

namespace idealpoly {

namespace {

int resolveThreads(int threads, int jobs) {
  int t = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  return std::clamp(t, 1, std::max(1, jobs));
}

// Runs body(i) for i in [0, jobs) on a pool; the first exception is rethrown.
template <typename Body>
void parallelFor(int jobs, int threads, Body&& body) {
  const int workers = resolveThreads(threads, jobs);
  if (workers == 1) {
    for (int i = 0; i < jobs; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failureMutex;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < jobs; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failureMutex);
          if (!failure) failure = std::current_exception();
          next = jobs;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

struct Moments {
  double mean = 0.0;
  double variance = 0.0;  // N - 1
};

Moments moments(std::span<const double> xs) {
  const double n = static_cast<double>(xs.size());
  Moments m;
  m.mean = pairwiseSum(xs) / n;
  std::vector<double> sq(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) sq[i] = (xs[i] - m.mean) * (xs[i] - m.mean);
  m.variance = xs.size() > 1 ? pairwiseSum(sq) / (n - 1.0) : 0.0;
  return m;
}

}  // namespace

std::optional<double> publishedVmax(int n) {
  if (n < 4 || n > 12) return std::nullopt;
  return kPublishedVmax[n - 4];
}

double pairwiseSum(std::span<const double> xs) {
  if (xs.size() <= 8) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t half = xs.size() / 2;
  return pairwiseSum(xs.first(half)) + pairwiseSum(xs.subspan(half));
}

VolumeSample sampleVolumes(int n, int count, std::uint64_t seed, double vmax, int threads) {
  if (n < 4) throw Error(ErrorCode::DomainError, "sampleVolumes needs n >= 4");
  if (count < 1) throw Error(ErrorCode::DomainError, "sampleVolumes needs count >= 1");
  if (!(vmax > 0.0)) throw Error(ErrorCode::DomainError, "vmax must be positive");
  VolumeSample out;
  out.n = n;
  out.seed = seed;
  out.vmax = vmax;
  out.volumes.assign(count, 0.0);
  parallelFor(count, threads, [&](int i) {
    Rng rng = Rng::forStream(seed, static_cast<std::uint64_t>(i));
    out.volumes[i] = configVolume(randomConfiguration(n, rng));
  });
  for (double v : out.volumes) {
    if (v > vmax * (1.0 + 1e-9)) ++out.aboveVmax;
  }
  return out;
}

BetaFit fitBeta(std::span<const double> normalized) {
  if (normalized.size() < 10) throw Error(ErrorCode::DomainError, "fitBeta needs at least 10 samples");
  BetaFit fit;
  fit.count = static_cast<int>(normalized.size());
  std::vector<double> x(normalized.begin(), normalized.end());
  for (double& v : x) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw Error(ErrorCode::DomainError, "fitBeta needs values in (0, 1]");
    }
    if (v >= 1.0) {
      v = 1.0 - 1e-12;
      ++fit.clampedCount;
    }
  }
  const Moments m = moments(x);
  fit.mean = m.mean;
  fit.std = std::sqrt(m.variance);
  if (!(m.variance > 0.0)) throw Error(ErrorCode::DomainError, "fitBeta needs a non-constant sample");

  // Method of moments start.
  const double common = m.mean * (1.0 - m.mean) / m.variance - 1.0;
  double a = common > 0.0 ? m.mean * common : 1.0;
  double b = common > 0.0 ? (1.0 - m.mean) * common : 1.0;
  const double momentA = a;
  const double momentB = b;

  std::vector<double> logs(x.size()), logs1(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    logs[i] = std::log(x[i]);
    logs1[i] = std::log1p(-x[i]);
  }
  const double n = static_cast<double>(x.size());
  const double s1 = pairwiseSum(logs) / n;
  const double s2 = pairwiseSum(logs1) / n;

  // Score equations: psi(a) - psi(a+b) = s1, psi(b) - psi(a+b) = s2.
  bool converged = false;
  for (int it = 1; it <= 200; ++it) {
    fit.iterations = it;
    const double dab = digamma(a + b);
    const double g1 = digamma(a) - dab - s1;
    const double g2 = digamma(b) - dab - s2;
    const double tab = trigamma(a + b);
    const double h11 = trigamma(a) - tab;
    const double h22 = trigamma(b) - tab;
    const double h12 = -tab;
    const double det = h11 * h22 - h12 * h12;
    if (!(det > 0.0) || !std::isfinite(det)) break;
    double da = (h22 * g1 - h12 * g2) / det;
    double db = (h11 * g2 - h12 * g1) / det;
    // Keep both parameters positive.
    double step = 1.0;
    while (a - step * da <= 0.0 || b - step * db <= 0.0) step *= 0.5;
    a -= step * da;
    b -= step * db;
    if (!std::isfinite(a) || !std::isfinite(b)) break;
    if (std::abs(step * da) < 1e-10 && std::abs(step * db) < 1e-10) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    a = momentA;
    b = momentB;
    fit.usedMomentFallback = true;
  }
  fit.alpha = a;
  fit.beta = b;

  std::sort(x.begin(), x.end());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double cdf = regularizedIncompleteBeta(a, b, x[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - cdf, cdf - static_cast<double>(i) / n});
  }
  fit.ksStat = std::clamp(d, 0.0, 1.0);
  fit.pValue = kolmogorovTail(std::sqrt(n) * fit.ksStat);
  fit.caveat =
      "asymptotic Kolmogorov p-value; parameters were estimated from the same sample, so it is "
      "biased upward";
  return fit;
}

BetaFit fitBeta(const VolumeSample& sample) {
  std::vector<double> normalized(sample.volumes.size());
  for (std::size_t i = 0; i < normalized.size(); ++i) normalized[i] = sample.volumes[i] / sample.vmax;
  return fitBeta(normalized);
}

LineFit fitLine(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw Error(ErrorCode::InvalidInput, "fitLine: size mismatch");
  const std::set<double> distinct(xs.begin(), xs.end());
  if (distinct.size() < 2) throw Error(ErrorCode::DomainError, "fitLine needs two distinct x values");
  const double n = static_cast<double>(xs.size());
  const double mx = pairwiseSum(xs) / n;
  const double my = pairwiseSum(ys) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  return fit;
}

ScalingFit scalingFit(std::span<const std::pair<int, BetaFit>> fits) {
  std::set<int> distinct;
  for (const auto& [n, f] : fits) distinct.insert(n);
  if (distinct.size() < 3) throw Error(ErrorCode::DomainError, "scalingFit needs three distinct n");
  std::vector<double> ns, as, bs;
  ScalingFit out;
  for (const auto& [n, f] : fits) {
    ns.push_back(n);
    as.push_back(f.alpha);
    bs.push_back(f.beta);
    out.rows.push_back({n, f.alpha / f.beta, f.alpha / (f.alpha + f.beta)});
  }
  out.alpha = fitLine(ns, as);
  out.beta = fitLine(ns, bs);
  return out;
}

SearchResult searchMaxVolume(int n, int trials, std::uint64_t seed, int threads) {
  if (n < 4) throw Error(ErrorCode::DomainError, "searchMaxVolume needs n >= 4");
  if (trials < 1) throw Error(ErrorCode::DomainError, "searchMaxVolume needs trials >= 1");

  // Sampling and triangulating is cheap; do it serially, then optimize each
  // distinct type once.
  struct Trial {
    ClosedTriangulation closed;
    std::vector<int> code;
  };
  std::vector<Trial> sampled;
  sampled.reserve(trials);
  std::map<std::vector<int>, int> firstOfType;
  std::vector<int> representatives;
  for (int i = 0; i < trials; ++i) {
    Rng rng = Rng::forStream(seed, static_cast<std::uint64_t>(i));
    auto closed = closeWithInfinity(delaunay(randomConfiguration(n, rng)));
    auto code = canonicalCode(closed.sphere);
    if (firstOfType.emplace(code, i).second) representatives.push_back(i);
    sampled.push_back({std::move(closed), std::move(code)});
  }

  std::vector<std::optional<OptResult>> optimized(representatives.size());
  parallelFor(static_cast<int>(representatives.size()), threads, [&](int k) {
    const auto& closed = sampled[representatives[k]].closed;
    optimized[k] = optimizeTriangulation(closed.sphere, closed.link->apex);
  });
  std::map<int, int> slotOfTrial;
  for (int k = 0; k < static_cast<int>(representatives.size()); ++k) slotOfTrial[representatives[k]] = k;

  SearchResult out;
  out.n = n;
  out.seed = seed;
  out.trials = trials;
  out.distinctTypes = static_cast<int>(representatives.size());
  for (int i = 0; i < trials; ++i) {
    const int slot = slotOfTrial.at(firstOfType.at(sampled[i].code));
    const auto& opt = optimized[slot];
    const double v = opt ? opt->volume : 0.0;
    out.perTrial.push_back({i, v, typeHash(sampled[i].closed.sphere)});
    if (opt && (out.bestTrial < 0 || v > out.bestVolume)) {
      out.bestTrial = i;
      out.bestVolume = v;
      out.bestTriangulation = sampled[i].closed.sphere;
      out.bestAngles = opt;
    }
  }
  return out;
}

}  // namespace idealpoly
