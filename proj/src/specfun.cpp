#include "idealpoly/specfun.hpp"

#include <algorithm>
#include <array>
#include <cfloat>
#include <cmath>
#include <numbers>

#include <boost/math/special_functions/bernoulli.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/factorials.hpp>
#include <boost/math/special_functions/trigamma.hpp>

#include "idealpoly/error.hpp"

namespace idealpoly {

namespace {

constexpr double kPi = std::numbers::pi;
// pi = kPiHi + kPiLo to about 32 digits.
constexpr double kPiHi = 3.141592653589793116;
constexpr double kPiLo = 1.2246467991473532e-16;

// Cl2(x) = x - x log|x| + sum_k |B_2k| x^(2k+1) / (2k (2k+1)!),  |x| < 2 pi.
// On |x| <= pi the k-th term is below 4^-k / k^2, so 26 terms reach 1e-17.
constexpr int kClausenTerms = 26;

const std::array<double, kClausenTerms>& clausenCoefficients() {
  static const std::array<double, kClausenTerms> coeffs = [] {
    std::array<double, kClausenTerms> c{};
    for (int k = 1; k <= kClausenTerms; ++k) {
      const double b2k = std::abs(boost::math::bernoulli_b2n<double>(k));
      c[k - 1] = b2k / (2.0 * k * boost::math::factorial<double>(2 * k + 1));
    }
    return c;
  }();
  return coeffs;
}

// Clausen function on [-pi, pi].
double clausen2Reduced(double x) {
  if (x == 0.0) return 0.0;
  const auto& c = clausenCoefficients();
  const double x2 = x * x;
  double series = 0.0;
  for (int k = kClausenTerms - 1; k >= 0; --k) series = series * x2 + c[k];
  return x - x * std::log(std::abs(x)) + x * x2 * series;
}

// theta - k pi with k = round(theta / pi); returns false when theta is the
// floating-point image of a multiple of pi.
bool reduceModPi(double theta, double& remainder) {
  const double k = std::nearbyint(theta / kPi);
  remainder = (theta - k * kPiHi) - k * kPiLo;
  if (k != 0.0 && std::abs(remainder) <= 4.0 * DBL_EPSILON * std::abs(theta)) {
    remainder = 0.0;
  }
  return remainder != 0.0;
}

}  // namespace

double lobachevsky(double theta) {
  if (!std::isfinite(theta)) {
    throw Error(ErrorCode::DomainError, "lobachevsky: argument must be finite");
  }
  double r = 0.0;
  if (!reduceModPi(theta, r)) return 0.0;
  return 0.5 * clausen2Reduced(2.0 * r);
}

double lobachevskyDeriv(double theta) {
  double r = 0.0;
  if (!std::isfinite(theta) || !reduceModPi(theta, r)) {
    throw Error(ErrorCode::PoleAtMultipleOfPi,
                "lobachevsky derivative diverges at integer multiples of pi");
  }
  return -std::log(std::abs(2.0 * std::sin(theta)));
}

double lobachevskySecondDeriv(double theta) {
  if (!(theta > 0.0 && theta < kPi)) {
    throw Error(ErrorCode::DomainError, "lobachevsky second derivative needs 0 < theta < pi");
  }
  return -std::cos(theta) / std::sin(theta);
}

double regularizedIncompleteBeta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0) || !(x >= 0.0 && x <= 1.0)) {
    throw Error(ErrorCode::DomainError, "incomplete beta needs a, b > 0 and x in [0, 1]");
  }
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  return boost::math::ibeta(a, b, x);
}

double digamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw Error(ErrorCode::DomainError, "digamma needs x > 0");
  }
  return boost::math::digamma(x);
}

double trigamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw Error(ErrorCode::DomainError, "trigamma needs x > 0");
  }
  return boost::math::trigamma(x);
}

double kolmogorovTail(double lambda) {
  if (!(lambda >= 0.0)) {
    throw Error(ErrorCode::DomainError, "kolmogorov tail needs lambda >= 0");
  }
  if (lambda == 0.0) return 1.0;
  if (lambda < 1.18) {
    // The alternating series stalls for small lambda; use the equivalent
    // theta-function form  1 - sqrt(2 pi)/lambda sum exp(-(2k-1)^2 pi^2 / (8 lambda^2)).
    const double scale = -kPi * kPi / (8.0 * lambda * lambda);
    double sum = 0.0;
    for (int k = 1; k < 1000; ++k) {
      const double odd = 2.0 * k - 1.0;
      const double term = std::exp(scale * odd * odd);
      sum += term;
      if (term < 1e-17 * sum) break;
    }
    const double q = 1.0 - std::sqrt(2.0 * kPi) / lambda * sum;
    return std::clamp(q, 0.0, 1.0);
  }
  double sum = 0.0;
  for (int k = 1; k < 1000; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-12) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

}  // namespace idealpoly
