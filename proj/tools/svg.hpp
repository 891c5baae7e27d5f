#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "idealpoly/stats.hpp"

namespace idealpoly::svg {

// Histogram of normalized volumes (density scale) with the fitted Beta
// density drawn on top.
std::string histogram(std::span<const double> normalized, const BetaFit& fit, int n, int bins);

// Three panels: alpha_n and beta_n against n with their fitted lines, and
// alpha / (alpha + beta) against n with a reference line at ln 2.
std::string scalingPanels(std::span<const std::pair<int, BetaFit>> fits, const ScalingFit& scaling);

}  // namespace idealpoly::svg
