#include "idealpoly/testing/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "idealpoly/error.hpp"
#include "idealpoly/specfun.hpp"

namespace idealpoly::testing {

namespace {

constexpr double kPi = std::numbers::pi;

// Affine function g0 + sum gk x_k of the free coordinates.
struct Affine {
  double constant = 0.0;
  std::vector<double> coeffs;
};

struct Reduction {
  std::vector<int> freeVars;
  std::vector<Affine> theta;  // every variable in terms of the free ones
};

// Row reduction of the equalities; pivot columns become dependent.
Reduction reduce(const ConstraintSystem& system) {
  const int n = system.numVars;
  const int m = static_cast<int>(system.equalities.size());
  std::vector<std::vector<double>> a(m, std::vector<double>(n + 1, 0.0));
  for (int i = 0; i < m; ++i) {
    for (int c : system.equalities[i].corners) a[i][c] += 1.0;
    a[i][n] = system.equalities[i].rhs;
  }
  std::vector<int> pivotCol;
  int row = 0;
  for (int col = 0; col < n && row < m; ++col) {
    int best = row;
    for (int i = row + 1; i < m; ++i) {
      if (std::abs(a[i][col]) > std::abs(a[best][col])) best = i;
    }
    if (std::abs(a[best][col]) < 1e-9) continue;
    std::swap(a[row], a[best]);
    const double p = a[row][col];
    for (double& x : a[row]) x /= p;
    for (int i = 0; i < m; ++i) {
      if (i == row || a[i][col] == 0.0) continue;
      const double factor = a[i][col];
      for (int j = 0; j <= n; ++j) a[i][j] -= factor * a[row][j];
    }
    pivotCol.push_back(col);
    ++row;
  }
  Reduction r;
  std::vector<int> freeIndex(n, -1);
  for (int col = 0; col < n; ++col) {
    if (std::find(pivotCol.begin(), pivotCol.end(), col) == pivotCol.end()) {
      freeIndex[col] = static_cast<int>(r.freeVars.size());
      r.freeVars.push_back(col);
    }
  }
  const int d = static_cast<int>(r.freeVars.size());
  r.theta.assign(n, Affine{0.0, std::vector<double>(d, 0.0)});
  for (int col = 0; col < n; ++col) {
    if (freeIndex[col] >= 0) r.theta[col].coeffs[freeIndex[col]] = 1.0;
  }
  for (std::size_t i = 0; i < pivotCol.size(); ++i) {
    Affine& t = r.theta[pivotCol[i]];
    t.constant = a[i][n];
    for (int k = 0; k < d; ++k) t.coeffs[k] = -a[i][r.freeVars[k]];
  }
  return r;
}

class GridSearch {
 public:
  GridSearch(const ConstraintSystem& system, double step) : step_(step) {
    reduction_ = reduce(system);
    dim_ = static_cast<int>(reduction_.freeVars.size());
    // Constraints as g(x) <= 0.
    for (int c = 0; c < system.numVars; ++c) {
      Affine g = reduction_.theta[c];
      g.constant = system.epsilon - g.constant;
      for (double& x : g.coeffs) x = -x;
      constraints_.push_back(std::move(g));
    }
    for (const auto& row : system.inequalities) {
      Affine g{-row.rhs, std::vector<double>(dim_, 0.0)};
      for (int c : row.corners) {
        g.constant += reduction_.theta[c].constant;
        for (int k = 0; k < dim_; ++k) g.coeffs[k] += reduction_.theta[c].coeffs[k];
      }
      constraints_.push_back(std::move(g));
    }
  }

  GridSearchResult run() {
    GridSearchResult out;
    const long top = static_cast<long>(std::ceil(kPi / step_)) - 1;
    std::vector<long> lo(dim_, 1), hi(dim_, top);
    std::vector<long> hit;
    if (dim_ == 0) {
      out.found = boxState(lo, hi) != State::Empty;
    } else {
      out.found = search(lo, hi, hit);
    }
    out.boxesVisited = visited_;
    if (out.found) {
      std::vector<double> x(dim_);
      for (int k = 0; k < dim_; ++k) x[k] = step_ * static_cast<double>(hit[k]);
      for (const Affine& t : reduction_.theta) out.point.push_back(evaluate(t, x));
    }
    return out;
  }

 private:
  enum class State { Empty, Full, Mixed };

  static double evaluate(const Affine& g, std::span<const double> x) {
    double v = g.constant;
    for (std::size_t k = 0; k < x.size(); ++k) v += g.coeffs[k] * x[k];
    return v;
  }

  State boxState(const std::vector<long>& lo, const std::vector<long>& hi) const {
    bool full = true;
    for (const Affine& g : constraints_) {
      double mn = g.constant, mx = g.constant;
      for (int k = 0; k < dim_; ++k) {
        const double a = g.coeffs[k] * step_ * static_cast<double>(lo[k]);
        const double b = g.coeffs[k] * step_ * static_cast<double>(hi[k]);
        mn += std::min(a, b);
        mx += std::max(a, b);
      }
      if (mn > kTol) return State::Empty;
      if (mx > kTol) full = false;
    }
    return full ? State::Full : State::Mixed;
  }

  bool search(std::vector<long>& lo, std::vector<long>& hi, std::vector<long>& hit) {
    if (++visited_ > kBoxCap) {
      throw Error(ErrorCode::NumericalFailure, "grid search exceeded its box budget");
    }
    const State s = boxState(lo, hi);
    if (s == State::Empty) return false;
    int widest = 0;
    for (int k = 1; k < dim_; ++k) {
      if (hi[k] - lo[k] > hi[widest] - lo[widest]) widest = k;
    }
    if (s == State::Full || hi[widest] == lo[widest]) {
      // A single grid point is decided exactly by boxState.
      if (s == State::Mixed) return false;
      hit = lo;
      return true;
    }
    const long mid = lo[widest] + (hi[widest] - lo[widest]) / 2;
    const long savedLo = lo[widest];
    const long savedHi = hi[widest];
    hi[widest] = mid;
    bool found = search(lo, hi, hit);
    hi[widest] = savedHi;
    if (!found) {
      lo[widest] = mid + 1;
      found = search(lo, hi, hit);
      lo[widest] = savedLo;
    }
    return found;
  }

  static constexpr double kTol = 1e-12;
  static constexpr long kBoxCap = 200'000'000;

  double step_;
  Reduction reduction_;
  int dim_ = 0;
  std::vector<Affine> constraints_;
  long visited_ = 0;
};

}  // namespace

double lobachevskyQuadrature(double theta) {
  if (theta < 0.0 || theta > kPi) throw Error(ErrorCode::DomainError, "quadrature oracle needs [0, pi]");
  if (theta == 0.0) return 0.0;
  boost::math::quadrature::tanh_sinh<double> integrator;
  const bool toPi = theta == kPi;
  auto f = [&](double t, double tc) {
    // Near the upper limit pi, tc = pi - t is exact and sin(t) is not.
    const double s = (toPi && tc > 0.0) ? std::sin(tc) : std::sin(t);
    return -std::log(2.0 * std::abs(s));
  };
  return integrator.integrate(f, 0.0, theta, 1e-14);
}

std::vector<double> centralDifferenceGradient(const std::function<double(std::span<const double>)>& f,
                                              std::span<const double> x, double h) {
  std::vector<double> p(x.begin(), x.end());
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    p[i] = x[i] + h;
    const double up = f(p);
    p[i] = x[i] - h;
    const double down = f(p);
    p[i] = x[i];
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

bool emptyCircumcircles(const PlanarTriangulation& pt, double tol) {
  for (const Face& f : pt.triangles) {
    const auto a = pt.positions[f[0]];
    const auto b = pt.positions[f[1]];
    const auto c = pt.positions[f[2]];
    const double d = 2.0 * (a.real() * (b.imag() - c.imag()) + b.real() * (c.imag() - a.imag()) +
                            c.real() * (a.imag() - b.imag()));
    const double a2 = std::norm(a), b2 = std::norm(b), c2 = std::norm(c);
    const std::complex<double> center(
        (a2 * (b.imag() - c.imag()) + b2 * (c.imag() - a.imag()) + c2 * (a.imag() - b.imag())) / d,
        (a2 * (c.real() - b.real()) + b2 * (a.real() - c.real()) + c2 * (b.real() - a.real())) / d);
    const double radius = std::abs(a - center);
    for (int v = 0; v < pt.vertexCount(); ++v) {
      if (v == pt.infinityIndex || v == f[0] || v == f[1] || v == f[2]) continue;
      if (std::abs(pt.positions[v] - center) < radius * (1.0 - tol)) return false;
    }
  }
  return true;
}

int reducedDimension(const ConstraintSystem& system) {
  return static_cast<int>(reduce(system).freeVars.size());
}

GridSearchResult gridFeasible(const ConstraintSystem& system, double step) {
  return GridSearch(system, step).run();
}

BetaStandardErrors betaStandardErrors(double alpha, double beta, int n) {
  const double tab = trigamma(alpha + beta);
  const double i11 = trigamma(alpha) - tab;
  const double i22 = trigamma(beta) - tab;
  const double i12 = -tab;
  const double det = i11 * i22 - i12 * i12;
  return {std::sqrt(i22 / det / n), std::sqrt(i11 / det / n)};
}

std::vector<double> sampleBeta(double alpha, double beta, int n, Rng& rng) {
  std::gamma_distribution<double> ga(alpha, 1.0);
  std::gamma_distribution<double> gb(beta, 1.0);
  std::vector<double> out(n);
  for (double& v : out) {
    const double x = ga(rng);
    const double y = gb(rng);
    v = x / (x + y);
  }
  return out;
}

}  // namespace idealpoly::testing
