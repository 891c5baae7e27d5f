#include "idealpoly/io.hpp"

#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "idealpoly/error.hpp"
#include "idealpoly/specfun.hpp"

namespace idealpoly::io {

namespace {

std::string formatDouble(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Json edgeJson(const EdgeKey& e) { return Json::array({e.u, e.v}); }

const char* edgeKindName(EdgeKind k) {
  switch (k) {
    case EdgeKind::Interior: return "interior";
    case EdgeKind::Hull: return "hull";
    case EdgeKind::Vertical: return "vertical";
  }
  return "interior";
}

Json lcdJson(std::span<const std::optional<RationalAngle>> rs) {
  const auto q = commonDenominator(rs);
  return q ? Json(*q) : Json(nullptr);
}

template <typename T>
T field(const Json& j, const char* key, const char* what) {
  if (!j.is_object() || !j.contains(key)) {
    throw Error(ErrorCode::InvalidInput, std::string(what) + ": missing field \"" + key + "\"");
  }
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorCode::InvalidInput, std::string(what) + ": bad field \"" + key + "\"");
  }
}

}  // namespace

std::string readFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InputNotFound, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void writeFile(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidInput, "cannot write " + path.string());
  out << bytes;
}

Json parseJson(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::InvalidInput, what + ": " + e.what());
  }
}

SphereTriangulation triangulationFromJson(const Json& j) {
  const int n = field<int>(j, "n", "triangulation");
  const auto faces = field<std::vector<std::vector<int>>>(j, "faces", "triangulation");
  std::vector<Face> out;
  out.reserve(faces.size());
  for (const auto& f : faces) {
    if (f.size() != 3) throw Error(ErrorCode::InvalidInput, "triangulation: faces must have 3 vertices");
    out.push_back({f[0], f[1], f[2]});
  }
  return validate(n, std::move(out));
}

Json triangulationToJson(const SphereTriangulation& t) {
  Json faces = Json::array();
  for (const Face& f : t.faces()) faces.push_back({f[0], f[1], f[2]});
  return Json{{"n", t.vertexCount()}, {"faces", std::move(faces)}};
}

PointConfiguration configurationFromJson(const Json& j) {
  if (!j.is_object() || !j.contains("points") || !j["points"].is_array()) {
    throw Error(ErrorCode::InvalidInput, "configuration: missing \"points\" array");
  }
  std::vector<ExtendedComplex> points;
  for (const auto& p : j["points"]) {
    if (p.is_null() || (p.is_string() && p.get<std::string>() == "inf")) {
      points.push_back(ExtendedComplex::infinity());
    } else if (p.is_array() && p.size() == 2 && p[0].is_number() && p[1].is_number()) {
      points.push_back(ExtendedComplex::at({p[0].get<double>(), p[1].get<double>()}));
    } else {
      throw Error(ErrorCode::InvalidInput, "configuration: points are [x, y] pairs or null");
    }
  }
  return makeConfiguration(std::move(points));
}

Json configurationToJson(const PointConfiguration& c) {
  Json points = Json::array();
  for (const auto& p : c.points) {
    if (p.infinite) {
      points.push_back(nullptr);
    } else {
      points.push_back({p.value.real(), p.value.imag()});
    }
  }
  return Json{{"points", std::move(points)}};
}

std::string piFraction(const RationalAngle& r) {
  return std::to_string(r.p) + "/" + std::to_string(r.q) + " π";
}

Json rationalToJson(const std::optional<RationalAngle>& r) {
  if (!r) return nullptr;
  return Json{{"p", r->p}, {"q", r->q}, {"pi_fraction", piFraction(*r)}, {"error", r->error}};
}

Json optResultToJson(const OptResult& r) {
  const ApexLink& link = *r.angles.link;
  const double v4 = 3.0 * lobachevsky(std::numbers::pi / 3.0);
  Json corners = Json::array();
  for (int c = 0; c < link.cornerCount(); ++c) {
    corners.push_back({{"face", link.boundedFaces[c / 3]},
                       {"slot", c % 3},
                       {"vertex", link.cornerVertex(c)},
                       {"radians", r.angles.values[c]},
                       {"rational", rationalToJson(r.cornerRationals[c])}});
  }
  Json dihedrals = Json::array();
  for (std::size_t e = 0; e < r.dihedrals.perEdge.size(); ++e) {
    const auto& d = r.dihedrals.perEdge[e];
    dihedrals.push_back({{"edge", edgeJson(d.edge)},
                         {"kind", edgeKindName(d.kind)},
                         {"radians", d.radians},
                         {"rational", rationalToJson(r.dihedralRationals[e])}});
  }
  Json shapes = Json::array();
  for (const auto& s : shapeParameters(r.angles)) {
    shapes.push_back({{"edge", edgeJson(s.edge)}, {"re", s.z.real()}, {"im", s.z.imag()}});
  }
  Json active = Json::array();
  for (const auto& a : r.boundaryActive) {
    active.push_back({{"kind", a.kind}, {"tag", a.tag}, {"slack", a.slack}});
  }
  return Json{{"apex", link.apex},
              {"volume", r.volume},
              {"v_over_v4", r.volume / v4},
              {"corners", std::move(corners)},
              {"dihedrals", std::move(dihedrals)},
              {"corner_lcd", lcdJson(r.cornerRationals)},
              {"dihedral_lcd", lcdJson(r.dihedralRationals)},
              {"kkt_residual", r.kktResidual},
              {"kkt_certified", r.kktCertified},
              {"shape_parameters", std::move(shapes)},
              {"boundary_active", std::move(active)},
              {"stage_volumes", r.stageVolumes},
              {"newton_iterations", r.newtonIterations},
              {"polished", r.polished}};
}

std::string sampleToCsv(const VolumeSample& s) {
  std::string out = "# n=" + std::to_string(s.n) + ",seed=" + std::to_string(s.seed) +
                    ",vmax=" + formatDouble(s.vmax) + ",count=" + std::to_string(s.volumes.size()) +
                    "\nvolume\n";
  for (double v : s.volumes) out += formatDouble(v) + "\n";
  return out;
}

VolumeSample sampleFromCsv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  VolumeSample s;
  bool haveN = false, haveVmax = false;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream header(line.substr(1));
      std::string item;
      while (std::getline(header, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) continue;
        std::string key = item.substr(0, eq);
        key.erase(0, key.find_first_not_of(' '));
        const std::string value = item.substr(eq + 1);
        try {
          if (key == "n") {
            s.n = std::stoi(value);
            haveN = true;
          } else if (key == "seed") {
            s.seed = std::stoull(value);
          } else if (key == "vmax") {
            s.vmax = std::stod(value);
            haveVmax = true;
          }
        } catch (const std::exception&) {
          throw Error(ErrorCode::InvalidInput, "sample CSV: bad header value for " + key);
        }
      }
      continue;
    }
    if (line == "volume") continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(line, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || line.find_first_not_of(" \t", used) != std::string::npos) {
      throw Error(ErrorCode::InvalidInput, "sample CSV: bad value on line " + std::to_string(lineNo));
    }
    s.volumes.push_back(v);
  }
  if (!haveN || !haveVmax) throw Error(ErrorCode::InvalidInput, "sample CSV: header needs n and vmax");
  for (double v : s.volumes) {
    if (v > s.vmax * (1.0 + 1e-9)) ++s.aboveVmax;
  }
  return s;
}

Json betaFitToJson(const BetaFit& f, int n, double vmax) {
  return Json{{"n", n},
              {"vmax", vmax},
              {"alpha", f.alpha},
              {"beta", f.beta},
              {"mean", f.mean},
              {"std", f.std},
              {"ks_stat", f.ksStat},
              {"p_value", f.pValue},
              {"count", f.count},
              {"clamped_count", f.clampedCount},
              {"iterations", f.iterations},
              {"moment_fallback", f.usedMomentFallback},
              {"caveat", f.caveat}};
}

std::pair<int, BetaFit> betaFitFromJson(const Json& j) {
  BetaFit f;
  const int n = field<int>(j, "n", "fit");
  f.alpha = field<double>(j, "alpha", "fit");
  f.beta = field<double>(j, "beta", "fit");
  if (!(f.alpha > 0.0) || !(f.beta > 0.0)) {
    throw Error(ErrorCode::InvalidInput, "fit: alpha and beta must be positive");
  }
  if (j.contains("mean")) f.mean = field<double>(j, "mean", "fit");
  if (j.contains("std")) f.std = field<double>(j, "std", "fit");
  return {n, f};
}

Json scalingFitToJson(const ScalingFit& s) {
  Json rows = Json::array();
  for (const auto& r : s.rows) {
    rows.push_back({{"n", r.n}, {"alpha_over_beta", r.ratio}, {"mean_limit", r.meanLimit}});
  }
  return Json{{"alpha", {{"slope", s.alpha.slope}, {"intercept", s.alpha.intercept}}},
              {"beta", {{"slope", s.beta.slope}, {"intercept", s.beta.intercept}}},
              {"rows", std::move(rows)}};
}

Json searchResultToJson(const SearchResult& r) {
  Json trials = Json::array();
  for (const auto& t : r.perTrial) {
    trials.push_back({{"index", t.index}, {"volume", t.volume}, {"type_hash", t.typeHash}});
  }
  Json out{{"n", r.n},
           {"seed", r.seed},
           {"trials", r.trials},
           {"distinct_types", r.distinctTypes},
           {"best_trial", r.bestTrial},
           {"best_volume", r.bestVolume}};
  out["best_triangulation"] = r.bestTriangulation ? triangulationToJson(*r.bestTriangulation) : Json(nullptr);
  out["best_angles"] = r.bestAngles ? optResultToJson(*r.bestAngles) : Json(nullptr);
  out["per_trial"] = std::move(trials);
  return out;
}

}  // namespace idealpoly::io
