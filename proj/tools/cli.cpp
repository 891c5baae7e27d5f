#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <optional>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <openssl/evp.h>

#include "idealpoly/error.hpp"
#include "idealpoly/geom.hpp"
#include "idealpoly/io.hpp"
#include "idealpoly/optvol.hpp"
#include "idealpoly/rivin.hpp"
#include "idealpoly/specfun.hpp"
#include "idealpoly/stats.hpp"
#include "idealpoly/testing/acceptance.hpp"
#include "svg.hpp"

namespace idealpoly::cli {

namespace {

using io::Json;

std::string sha256Hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::NumericalFailure, "SHA-256 computation failed");
  }
  std::string hex;
  for (unsigned int i = 0; i < length; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

int exitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::NumericalFailure:
    case ErrorCode::LineSearchStall:
    case ErrorCode::LayoutInconsistent:
    case ErrorCode::FitDiverged:
    case ErrorCode::InfeasibleStart:
    case ErrorCode::PoleAtMultipleOfPi:
    case ErrorCode::DegenerateSample:
    case ErrorCode::DegenerateTriangle:
      return kExitNumeric;
    default:
      return kExitInput;
  }
}

void reportError(std::ostream& err, std::string_view code, const std::string& message) {
  err << Json{{"code", code}, {"message", message}}.dump() << "\n";
}

// Per-invocation state: inputs read (for the manifest) and output routing.
class Session {
 public:
  Session(std::vector<std::string> args, std::ostream& out)
      : args_(std::move(args)), out_(out), start_(std::chrono::steady_clock::now()) {}

  std::string command;
  std::optional<std::uint64_t> seed;
  std::string outputPath;

  std::string readInput(const std::string& path) {
    std::string bytes = io::readFile(path);
    inputs_.push_back({{"path", path}, {"sha256", sha256Hex(bytes)}});
    return bytes;
  }

  Json manifest() const {
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    return Json{{"command", command},
                {"argv", args_},
                {"seed", seed ? Json(*seed) : Json(nullptr)},
                {"version", kVersion},
                {"duration_seconds", seconds},
                {"inputs", inputs_}};
  }

  void emit(const std::string& text) {
    if (outputPath.empty()) {
      out_ << text;
    } else {
      io::writeFile(outputPath, text);
    }
  }

  void emitJson(Json j) {
    j["manifest"] = manifest();
    emit(j.dump(2) + "\n");
  }

  std::ostream& console() { return out_; }

 private:
  std::vector<std::string> args_;
  std::ostream& out_;
  std::chrono::steady_clock::time_point start_;
  Json inputs_ = Json::array();
};

struct CommonOptions {
  double eps = kDefaultEpsilon;
  std::optional<int> apex;
  double tol = 1e-10;
  int maxDenominator = 100;
  double rationalTol = 1e-10;
  int threads = 0;
  std::uint64_t seed = 0;
};

OptimizerOptions optimizerOptions(const CommonOptions& o) {
  OptimizerOptions opt;
  opt.kktTolerance = o.tol;
  opt.maxDenominator = o.maxDenominator;
  opt.rationalTolerance = o.rationalTol;
  return opt;
}

SphereTriangulation readTriangulation(Session& s, const std::string& path) {
  return io::triangulationFromJson(io::parseJson(s.readInput(path), path));
}

int cmdCheck(Session& s, const std::string& path, const CommonOptions& o) {
  const auto t = readTriangulation(s, path);
  const int apex = o.apex.value_or(chooseApex(t));
  const auto r = isRealizableAt(t, apex, o.eps);
  Json j{{"realizable", r.realizable}, {"apex", r.apex}, {"epsilon", o.eps}};
  if (r.realizable) {
    j["witness"] = r.feasibility.witness;
    j["interior_margin"] = r.feasibility.interiorMargin;
  } else {
    j["certificate"] = r.feasibility.certificate;
  }
  s.emitJson(std::move(j));
  return r.realizable ? kExitOk : kExitNegative;
}

int cmdOptimize(Session& s, const std::string& path, const CommonOptions& o) {
  const auto t = readTriangulation(s, path);
  const auto r = optimizeTriangulation(t, o.apex, o.eps, optimizerOptions(o));
  if (!r) {
    s.emitJson(Json{{"realizable", false}, {"apex", o.apex.value_or(chooseApex(t))}, {"epsilon", o.eps}});
    return kExitNegative;
  }
  Json j{{"realizable", true}, {"epsilon", o.eps}};
  j.update(io::optResultToJson(*r));
  s.emitJson(std::move(j));
  return kExitOk;
}

int cmdSearch(Session& s, int n, int trials, const CommonOptions& o) {
  s.seed = o.seed;
  const auto r = searchMaxVolume(n, trials, o.seed, o.threads);
  Json j = io::searchResultToJson(r);
  const auto ref = publishedVmax(n);
  j["reference_volume"] = ref ? Json(*ref) : Json(nullptr);
  s.emitJson(std::move(j));
  return kExitOk;
}

double resolveVmax(const std::string& choice, int n, int searchTrials, const CommonOptions& o) {
  if (choice == "table") {
    const auto v = publishedVmax(n);
    if (!v) throw Error(ErrorCode::DomainError, fmt::format("no tabulated Vmax for n={}; use --vmax search", n));
    return *v;
  }
  if (choice == "search") return searchMaxVolume(n, searchTrials, o.seed, o.threads).bestVolume;
  try {
    std::size_t used = 0;
    const double v = std::stod(choice, &used);
    if (used == choice.size() && v > 0.0) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::InvalidInput, "--vmax must be table, search or a positive number");
}

int cmdSample(Session& s, int n, int count, const std::string& vmaxChoice, int searchTrials, const CommonOptions& o) {
  s.seed = o.seed;
  const double vmax = resolveVmax(vmaxChoice, n, searchTrials, o);
  s.emit(io::sampleToCsv(sampleVolumes(n, count, o.seed, vmax, o.threads)));
  return kExitOk;
}

int cmdFit(Session& s, const std::string& path) {
  const auto sample = io::sampleFromCsv(s.readInput(path));
  const auto fit = fitBeta(sample);
  Json j = io::betaFitToJson(fit, sample.n, sample.vmax);
  j["seed"] = sample.seed;
  j["above_vmax"] = sample.aboveVmax;
  s.emitJson(std::move(j));
  return kExitOk;
}

std::vector<std::pair<int, BetaFit>> readFits(Session& s, const std::vector<std::string>& paths) {
  std::vector<std::pair<int, BetaFit>> fits;
  for (const auto& p : paths) fits.push_back(io::betaFitFromJson(io::parseJson(s.readInput(p), p)));
  std::sort(fits.begin(), fits.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return fits;
}

int cmdScaling(Session& s, const std::vector<std::string>& paths, const std::string& svgPath) {
  const auto fits = readFits(s, paths);
  const auto scaling = scalingFit(fits);
  if (!svgPath.empty()) io::writeFile(svgPath, svg::scalingPanels(fits, scaling));
  Json j = io::scalingFitToJson(scaling);
  Json inputs = Json::array();
  for (const auto& [n, f] : fits) inputs.push_back({{"n", n}, {"alpha", f.alpha}, {"beta", f.beta}, {"mean", f.mean}});
  j["fits"] = std::move(inputs);
  j["svg"] = svgPath.empty() ? Json(nullptr) : Json(svgPath);
  s.emitJson(std::move(j));
  return kExitOk;
}

// Several panels side by side, two per row.
std::string stackPanels(const std::vector<std::string>& panels, int width, int height) {
  const int cols = panels.size() > 1 ? 2 : 1;
  const int rows = static_cast<int>((panels.size() + cols - 1) / cols);
  std::string out = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n",
      width * cols, height * rows);
  for (std::size_t i = 0; i < panels.size(); ++i) {
    const int x = static_cast<int>(i % cols) * width;
    const int y = static_cast<int>(i / cols) * height;
    out += fmt::format("<g transform=\"translate({},{})\">\n{}</g>\n", x, y, panels[i]);
  }
  out += "</svg>\n";
  return out;
}

int cmdReport(Session& s, const std::vector<std::string>& paths, int bins) {
  std::vector<std::string> panels;
  for (const auto& p : paths) {
    const auto sample = io::sampleFromCsv(s.readInput(p));
    const auto fit = fitBeta(sample);
    std::vector<double> normalized;
    for (double v : sample.volumes) normalized.push_back(std::min(v / sample.vmax, 1.0));
    panels.push_back(svg::histogram(normalized, fit, sample.n, bins));
  }
  s.emit(panels.size() == 1 ? panels.front() : stackPanels(panels, 660, 420));
  return kExitOk;
}

struct Mesh {
  PointConfiguration config;
  std::vector<Face> faces;
  double volume = 0.0;
  std::optional<double> closureResidual;
};

Mesh meshFromInput(const Json& j, const CommonOptions& o) {
  Mesh m;
  if (j.is_object() && j.contains("points")) {
    m.config = io::configurationFromJson(j);
    const auto closed = closeWithInfinity(delaunay(m.config));
    m.faces = closed.sphere.faces();
    m.volume = configVolume(m.config);
    return m;
  }
  const auto t = io::triangulationFromJson(j);
  const auto r = optimizeTriangulation(t, o.apex, o.eps);
  if (!r) throw Error(ErrorCode::DomainError, "triangulation is not realizable; nothing to export");
  const auto laid = layout(*r->angles.link, r->angles.values);
  m.config = laid.config;
  m.closureResidual = laid.closureResidual;
  m.faces = t.faces();
  m.volume = r->volume;
  return m;
}

// Faces reordered so their normals point away from the origin in the Klein model.
std::vector<Face> outwardFaces(const std::vector<Face>& faces, const std::vector<Vec3>& p) {
  std::vector<Face> out = faces;
  for (Face& f : out) {
    const Vec3& a = p[f[0]];
    const Vec3& b = p[f[1]];
    const Vec3& c = p[f[2]];
    const Vec3 u{b[0] - a[0], b[1] - a[1], b[2] - a[2]};
    const Vec3 v{c[0] - a[0], c[1] - a[1], c[2] - a[2]};
    const Vec3 nrm{u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
    const double dot = nrm[0] * (a[0] + b[0] + c[0]) + nrm[1] * (a[1] + b[1] + c[1]) + nrm[2] * (a[2] + b[2] + c[2]);
    if (dot < 0.0) std::swap(f[1], f[2]);
  }
  return out;
}

int cmdExport(Session& s, const std::string& path, const std::string& format, const CommonOptions& o) {
  const Mesh m = meshFromInput(io::parseJson(s.readInput(path), path), o);
  const auto models = toBallModels(m.config);
  const auto faces = outwardFaces(m.faces, models.klein);
  if (format == "obj") {
    std::string out = fmt::format("# ideal polyhedron, Klein model, volume {:.12f}\n", m.volume);
    for (const auto& v : models.klein) out += fmt::format("v {:.17g} {:.17g} {:.17g}\n", v[0], v[1], v[2]);
    for (const Face& f : faces) out += fmt::format("f {} {} {}\n", f[0] + 1, f[1] + 1, f[2] + 1);
    s.emit(out);
    return kExitOk;
  }
  Json vertices = Json::array();
  for (int i = 0; i < m.config.size(); ++i) {
    const auto& p = m.config.points[i];
    vertices.push_back({{"id", i},
                        {"extended", p.infinite ? Json(nullptr) : Json::array({p.value.real(), p.value.imag()})},
                        {"klein", models.klein[i]},
                        {"poincare", models.poincare[i]}});
  }
  Json fj = Json::array();
  for (const Face& f : faces) fj.push_back({f[0], f[1], f[2]});
  Json j{{"volume", m.volume},
         {"closure_residual", m.closureResidual ? Json(*m.closureResidual) : Json(nullptr)},
         {"vertices", std::move(vertices)},
         {"faces", std::move(fj)}};
  s.emitJson(std::move(j));
  return kExitOk;
}

int cmdAutomorphisms(Session& s, const std::string& path) {
  const auto t = readTriangulation(s, path);
  const auto a = automorphismCount(t);
  s.emitJson(Json{{"orientation_preserving", a.orientationPreserving},
                  {"total", a.total},
                  {"type_hash", typeHash(t)}});
  return kExitOk;
}

int cmdSelftest(Session& s, const std::vector<int>& only, const CommonOptions& o) {
  testing::AcceptanceOptions options;
  options.threads = o.threads;
  options.only = only;
  int failed = 0;
  std::string text;
  testing::runAcceptance(options, [&](const testing::CriterionResult& r) {
    const std::string line = testing::formatResult(r) + "\n";
    failed += !r.passed;
    if (s.outputPath.empty()) {
      s.console() << line << std::flush;
    } else {
      text += line;
    }
  });
  const std::string summary = fmt::format("{} criteria failed\n", failed);
  if (s.outputPath.empty()) {
    s.console() << summary;
  } else {
    s.emit(text + summary);
  }
  return failed == 0 ? kExitOk : kExitNumeric;
}

// Tables of maximal volumes and Beta fits, with every intermediate file.
int cmdPipeline(Session& s, const std::string& dir, int trials, int count, int maxN, const CommonOptions& o) {
  s.seed = o.seed;
  std::filesystem::create_directories(dir);
  const auto file = [&](const std::string& name) { return (std::filesystem::path(dir) / name).string(); };
  const double v4 = 3.0 * lobachevsky(std::numbers::pi / 3.0);

  Json volumes = Json::array();
  for (int n = 4; n <= maxN; ++n) {
    const auto r = searchMaxVolume(n, trials, o.seed, o.threads);
    io::writeFile(file(fmt::format("search_n{}.json", n)), io::searchResultToJson(r).dump(2) + "\n");
    Json row{{"n", n}, {"volume", r.bestVolume}, {"faces", 2 * n - 4}, {"v_over_v4", r.bestVolume / v4}};
    const auto ref = publishedVmax(n);
    row["reference_volume"] = ref ? Json(*ref) : Json(nullptr);
    row["corner_lcd"] = nullptr;
    row["dihedral_lcd"] = nullptr;
    if (r.bestAngles) {
      const auto cq = commonDenominator(r.bestAngles->cornerRationals);
      const auto dq = commonDenominator(r.bestAngles->dihedralRationals);
      if (cq) row["corner_lcd"] = *cq;
      if (dq) row["dihedral_lcd"] = *dq;
    }
    row["distinct_types"] = r.distinctTypes;
    volumes.push_back(std::move(row));
  }

  Json fits = Json::array();
  std::vector<std::pair<int, BetaFit>> fitList;
  std::vector<std::string> panels;
  for (int n : {5, 6, 7, 8, 10, 12}) {
    if (n > maxN) continue;
    const auto vmax = publishedVmax(n);
    const auto sample = sampleVolumes(n, count, o.seed, *vmax, o.threads);
    io::writeFile(file(fmt::format("sample_n{}.csv", n)), io::sampleToCsv(sample));
    const auto fit = fitBeta(sample);
    const Json fj = io::betaFitToJson(fit, n, *vmax);
    io::writeFile(file(fmt::format("fit_n{}.json", n)), fj.dump(2) + "\n");
    std::vector<double> normalized;
    for (double v : sample.volumes) normalized.push_back(std::min(v / *vmax, 1.0));
    panels.push_back(svg::histogram(normalized, fit, n, 40));
    fitList.emplace_back(n, fit);
    fits.push_back(fj);
  }
  Json out{{"volumes", std::move(volumes)}, {"beta_fits", std::move(fits)}};
  if (!panels.empty()) io::writeFile(file("report.svg"), stackPanels(panels, 660, 420));
  if (fitList.size() >= 3) {
    const auto scaling = scalingFit(fitList);
    io::writeFile(file("scaling.svg"), svg::scalingPanels(fitList, scaling));
    out["scaling"] = io::scalingFitToJson(scaling);
  }
  out["directory"] = dir;
  s.emitJson(std::move(out));
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Maximal volume ideal polyhedra: realizability, optimization and volume statistics", "idealpoly"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  Session session(args, out);
  CommonOptions o;
  std::string input;
  std::vector<std::string> inputs;
  int n = 0, trials = 100, count = 5000, searchTrials = 100, bins = 40, maxN = 12;
  std::string vmaxChoice = "table", format = "json", svgPath = "scaling.svg", dir = "pipeline_out";
  std::vector<int> only;

  auto addOutput = [&](CLI::App* c) { c->add_option("-o,--output", session.outputPath, "Write to this file instead of stdout"); };
  auto addThreads = [&](CLI::App* c) {
    c->add_option("--threads", o.threads, "Worker threads (0: hardware concurrency)")->check(CLI::NonNegativeNumber);
  };
  auto addSeed = [&](CLI::App* c) { c->add_option("--seed", o.seed, "RNG seed")->capture_default_str(); };
  auto addEps = [&](CLI::App* c) {
    c->add_option("--eps", o.eps, "Strictness margin of the inequalities")->capture_default_str();
    c->add_option("--apex", o.apex, "Vertex sent to infinity (default: maximum degree)");
  };

  auto* check = app.add_subcommand("check", "Decide realizability of a triangulation");
  check->add_option("file", input, "Triangulation JSON")->required();
  addEps(check);
  addOutput(check);

  auto* optimize = app.add_subcommand("optimize", "Maximize volume over a combinatorial type");
  optimize->add_option("file", input, "Triangulation JSON")->required();
  addEps(optimize);
  optimize->add_option("--tol", o.tol, "KKT residual tolerance")->capture_default_str();
  optimize->add_option("--max-denominator", o.maxDenominator, "Largest q for rational detection")->capture_default_str();
  optimize->add_option("--rational-tol", o.rationalTol, "Tolerance of rational detection")->capture_default_str();
  addOutput(optimize);

  auto* search = app.add_subcommand("search", "Best volume over random Delaunay types");
  search->add_option("--n", n, "Vertex count")->required()->check(CLI::Range(4, 64));
  search->add_option("--trials", trials, "Number of trials")->capture_default_str()->check(CLI::PositiveNumber);
  addSeed(search);
  addThreads(search);
  addOutput(search);

  auto* sample = app.add_subcommand("sample", "Volumes of random configurations (CSV)");
  sample->add_option("--n", n, "Vertex count")->required()->check(CLI::Range(4, 64));
  sample->add_option("--count", count, "Sample size")->capture_default_str()->check(CLI::PositiveNumber);
  sample->add_option("--vmax", vmaxChoice, "table, search or a number")->capture_default_str();
  sample->add_option("--search-trials", searchTrials, "Trials for --vmax search")->capture_default_str();
  addSeed(sample);
  addThreads(sample);
  addOutput(sample);

  auto* fit = app.add_subcommand("fit", "Beta fit of a volume sample");
  fit->add_option("file", input, "Sample CSV")->required();
  addOutput(fit);

  auto* scaling = app.add_subcommand("scaling", "Linear scaling of Beta parameters with n");
  scaling->add_option("files", inputs, "Fit JSON files")->required();
  scaling->add_option("--svg", svgPath, "SVG output path (empty: none)")->capture_default_str();
  addOutput(scaling);

  auto* report = app.add_subcommand("report", "Histogram with fitted Beta density (SVG)");
  report->add_option("files", inputs, "Sample CSV files")->required();
  report->add_option("--bins", bins, "Histogram bins")->capture_default_str()->check(CLI::PositiveNumber);
  addOutput(report);

  auto* exportCmd = app.add_subcommand("export", "Vertex coordinates and faces (JSON or OBJ)");
  exportCmd->add_option("file", input, "Triangulation or configuration JSON")->required();
  exportCmd->add_option("--format", format, "json or obj")->capture_default_str()->check(CLI::IsMember({"json", "obj"}));
  addEps(exportCmd);
  addOutput(exportCmd);

  auto* automorphisms = app.add_subcommand("automorphisms", "Map automorphism counts");
  automorphisms->add_option("file", input, "Triangulation JSON")->required();
  addOutput(automorphisms);

  auto* selftest = app.add_subcommand("selftest", "Run the acceptance suite");
  selftest->add_option("--only", only, "Criterion ids to run");
  addThreads(selftest);
  addOutput(selftest);

  auto* pipeline = app.add_subcommand("pipeline", "Volume table, Beta fits and figures end to end");
  pipeline->add_option("--out", dir, "Output directory")->capture_default_str();
  pipeline->add_option("--trials", trials, "Search trials per n")->capture_default_str();
  pipeline->add_option("--count", count, "Sample size per n")->capture_default_str();
  pipeline->add_option("--max-n", maxN, "Largest n searched")->capture_default_str()->check(CLI::Range(4, 64));
  addSeed(pipeline);
  addThreads(pipeline);
  addOutput(pipeline);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    reportError(err, "USAGE", e.what());
    return kExitInput;
  }

  try {
    if (*check) return session.command = "check", cmdCheck(session, input, o);
    if (*optimize) return session.command = "optimize", cmdOptimize(session, input, o);
    if (*search) return session.command = "search", cmdSearch(session, n, trials, o);
    if (*sample) return session.command = "sample", cmdSample(session, n, count, vmaxChoice, searchTrials, o);
    if (*fit) return session.command = "fit", cmdFit(session, input);
    if (*scaling) return session.command = "scaling", cmdScaling(session, inputs, svgPath);
    if (*report) return session.command = "report", cmdReport(session, inputs, bins);
    if (*exportCmd) return session.command = "export", cmdExport(session, input, format, o);
    if (*automorphisms) return session.command = "automorphisms", cmdAutomorphisms(session, input);
    if (*selftest) return session.command = "selftest", cmdSelftest(session, only, o);
    if (*pipeline) return session.command = "pipeline", cmdPipeline(session, dir, trials, count, maxN, o);
  } catch (const Error& e) {
    reportError(err, errorCodeName(e.code()), e.what());
    return exitCodeFor(e.code());
  } catch (const std::filesystem::filesystem_error& e) {
    reportError(err, "INVALID_INPUT", e.what());
    return kExitInput;
  } catch (const std::exception& e) {
    reportError(err, "INTERNAL", e.what());
    return kExitNumeric;
  }
  return kExitInput;
}

}  // namespace idealpoly::cli
