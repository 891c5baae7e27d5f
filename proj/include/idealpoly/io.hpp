#pragma once

#include <filesystem>
#include <string>
#include <utility>

#include <json.hpp>

#include "idealpoly/geom.hpp"
#include "idealpoly/optvol.hpp"
#include "idealpoly/stats.hpp"
#include "idealpoly/triang.hpp"

namespace idealpoly::io {

using Json = nlohmann::ordered_json;

// Whole file as bytes. Throws InputNotFound.
std::string readFile(const std::filesystem::path& path);
void writeFile(const std::filesystem::path& path, const std::string& bytes);

// Parses JSON text; malformed input becomes InvalidInput.
Json parseJson(const std::string& text, const std::string& what);

// {"n": 6, "faces": [[0,1,2], ...]}
SphereTriangulation triangulationFromJson(const Json& j);
Json triangulationToJson(const SphereTriangulation& t);

// {"points": [[x, y], ..., null]}; null (or "inf") marks the point at infinity.
PointConfiguration configurationFromJson(const Json& j);
Json configurationToJson(const PointConfiguration& c);

// "p/q π"
std::string piFraction(const RationalAngle& r);
Json rationalToJson(const std::optional<RationalAngle>& r);

// Volume, corners, dihedrals, shape parameters and the optimizer diagnostics.
Json optResultToJson(const OptResult& r);

// Header line "# n=8,seed=0,vmax=6.488469,count=5000", then "volume" and
// one value per line.
std::string sampleToCsv(const VolumeSample& s);
VolumeSample sampleFromCsv(const std::string& text);

Json betaFitToJson(const BetaFit& f, int n, double vmax);
// Returns (n, fit).
std::pair<int, BetaFit> betaFitFromJson(const Json& j);

Json scalingFitToJson(const ScalingFit& s);
Json searchResultToJson(const SearchResult& r);

}  // namespace idealpoly::io
