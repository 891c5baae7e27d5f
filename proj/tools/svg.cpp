#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/distributions/beta.hpp>
#include <fmt/format.h>

namespace idealpoly::svg {

namespace {

struct Box {
  double x, y, w, h;  // pixel frame of the plot area
};

// Maps data ranges into a Box; y grows upward in data space.
struct Axes {
  Box box;
  double x0, x1, y0, y1;

  double px(double x) const { return box.x + (x - x0) / (x1 - x0) * box.w; }
  double py(double y) const { return box.y + box.h - (y - y0) / (y1 - y0) * box.h; }
};

std::string header(int width, int height) {
  return fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\" "
      "font-family=\"sans-serif\" font-size=\"12\">\n"
      "<rect x=\"0\" y=\"0\" width=\"{0}\" height=\"{1}\" fill=\"white\"/>\n",
      width, height);
}

std::string text(double x, double y, const std::string& s, const char* anchor = "middle") {
  return fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"{}\">{}</text>\n", x, y, anchor, s);
}

std::string frame(const Axes& a, int xTicks, int yTicks, const std::string& xLabel, const std::string& yLabel,
                  const std::string& title) {
  std::string out = fmt::format(
      "<rect x=\"{:.1f}\" y=\"{:.1f}\" width=\"{:.1f}\" height=\"{:.1f}\" fill=\"none\" stroke=\"black\"/>\n",
      a.box.x, a.box.y, a.box.w, a.box.h);
  for (int i = 0; i <= xTicks; ++i) {
    const double v = a.x0 + (a.x1 - a.x0) * i / xTicks;
    const double x = a.px(v);
    out += fmt::format("<line x1=\"{0:.1f}\" y1=\"{1:.1f}\" x2=\"{0:.1f}\" y2=\"{2:.1f}\" stroke=\"black\"/>\n", x,
                       a.box.y + a.box.h, a.box.y + a.box.h + 4);
    out += text(x, a.box.y + a.box.h + 16, fmt::format("{:g}", std::round(v * 100) / 100));
  }
  for (int i = 0; i <= yTicks; ++i) {
    const double v = a.y0 + (a.y1 - a.y0) * i / yTicks;
    const double y = a.py(v);
    out += fmt::format("<line x1=\"{0:.1f}\" y1=\"{1:.1f}\" x2=\"{2:.1f}\" y2=\"{1:.1f}\" stroke=\"black\"/>\n",
                       a.box.x - 4, y, a.box.x);
    out += text(a.box.x - 6, y + 4, fmt::format("{:g}", std::round(v * 100) / 100), "end");
  }
  out += text(a.box.x + a.box.w / 2, a.box.y + a.box.h + 34, xLabel);
  out += fmt::format("<text x=\"{0:.1f}\" y=\"{1:.1f}\" text-anchor=\"middle\" transform=\"rotate(-90 {0:.1f} {1:.1f})\">{2}</text>\n",
                     a.box.x - 42, a.box.y + a.box.h / 2, yLabel);
  out += text(a.box.x + a.box.w / 2, a.box.y - 10, title);
  return out;
}

std::string polyline(const Axes& a, std::span<const std::pair<double, double>> pts, const char* colour,
                     const char* dash = nullptr) {
  std::string points;
  for (const auto& [x, y] : pts) points += fmt::format("{:.2f},{:.2f} ", a.px(x), a.py(y));
  return fmt::format("<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"2\"{}/>\n", points, colour,
                     dash ? fmt::format(" stroke-dasharray=\"{}\"", dash) : "");
}

std::string marker(const Axes& a, double x, double y) {
  return fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"4\" fill=\"steelblue\"/>\n", a.px(x), a.py(y));
}

}  // namespace

std::string histogram(std::span<const double> normalized, const BetaFit& fit, int n, int bins) {
  bins = std::max(bins, 1);
  std::vector<int> counts(bins, 0);
  for (double v : normalized) {
    const int b = std::clamp(static_cast<int>(v * bins), 0, bins - 1);
    ++counts[b];
  }
  const double width = 1.0 / bins;
  const double total = std::max<double>(1.0, static_cast<double>(normalized.size()));
  boost::math::beta_distribution<double> dist(fit.alpha, fit.beta);
  std::vector<std::pair<double, double>> curve;
  double peak = 0.0;
  for (int i = 1; i < 400; ++i) {
    const double x = i / 400.0;
    const double y = boost::math::pdf(dist, x);
    curve.emplace_back(x, y);
    peak = std::max(peak, y);
  }
  for (int c : counts) peak = std::max(peak, c / total / width);

  const Axes a{{70, 40, 560, 320}, 0.0, 1.0, 0.0, peak * 1.1};
  std::string out = header(660, 420);
  for (int b = 0; b < bins; ++b) {
    const double density = counts[b] / total / width;
    const double x = a.px(b * width);
    const double y = a.py(density);
    out += fmt::format(
        "<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"lightsteelblue\" stroke=\"white\"/>\n",
        x, y, a.px((b + 1) * width) - x, a.py(0.0) - y);
  }
  out += polyline(a, curve, "firebrick");
  out += frame(a, 10, 5, "V / Vmax", "density",
               fmt::format("n = {}: Beta({:.2f}, {:.2f}), KS p = {:.3f}", n, fit.alpha, fit.beta, fit.pValue));
  out += "</svg>\n";
  return out;
}

std::string scalingPanels(std::span<const std::pair<int, BetaFit>> fits, const ScalingFit& scaling) {
  double nMin = 1e9, nMax = -1e9, aMax = 0.0, bMax = 0.0;
  for (const auto& [n, f] : fits) {
    nMin = std::min<double>(nMin, n);
    nMax = std::max<double>(nMax, n);
    aMax = std::max(aMax, f.alpha);
    bMax = std::max(bMax, f.beta);
  }
  const double x0 = nMin - 1.0, x1 = nMax + 1.0;
  std::string out = header(1080, 380);

  auto panel = [&](double left, double yMax, const LineFit* line, auto value, const std::string& label) {
    const Axes a{{left, 40, 270, 280}, x0, x1, 0.0, yMax};
    std::string s;
    if (line) {
      const std::pair<double, double> ends[] = {{x0, line->slope * x0 + line->intercept},
                                                {x1, line->slope * x1 + line->intercept}};
      s += polyline(a, ends, "firebrick");
    }
    for (const auto& [n, f] : fits) s += marker(a, n, value(f));
    const std::string title =
        line ? fmt::format("{} = {:.2f} n {:+.2f}", label, line->slope, line->intercept) : label;
    s += frame(a, static_cast<int>(x1 - x0), 4, "n", label, title);
    return s;
  };
  out += panel(70, aMax * 1.15, &scaling.alpha, [](const BetaFit& f) { return f.alpha; }, "alpha");
  out += panel(430, bMax * 1.15, &scaling.beta, [](const BetaFit& f) { return f.beta; }, "beta");
  {
    const Axes a{{790, 40, 270, 280}, x0, x1, 0.5, 0.8};
    const std::pair<double, double> ln2[] = {{x0, std::numbers::ln2}, {x1, std::numbers::ln2}};
    out += polyline(a, ln2, "gray", "6 4");
    for (const auto& [n, f] : fits) out += marker(a, n, f.alpha / (f.alpha + f.beta));
    out += frame(a, static_cast<int>(x1 - x0), 3, "n", "alpha / (alpha + beta)", "mean vs ln 2 (dashed)");
  }
  out += "</svg>\n";
  return out;
}

}  // namespace idealpoly::svg
