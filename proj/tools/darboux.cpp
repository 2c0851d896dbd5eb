#include <cstdint>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "darboux/report.hpp"

using namespace darboux;

namespace {

struct Flags {
  std::string model = "free";
  std::vector<std::string> params;
  std::uint64_t seed = 42;
  std::optional<std::size_t> samples;
  std::string out;
  std::string format = "json";
  double h = 1e-3;
  double T = 10.0;
  std::vector<double> start;
  int levels = 5;
  std::string surface;
  std::string mesh;
  int nu = 50;
  int nv = 50;
};

void addModelFlags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--model", f.model, "free, p1, p2 or p3")->check(CLI::IsMember({"free", "p1", "p2", "p3"}));
  cmd->add_option("--param", f.params, "model parameter name=value, repeated")->take_all();
}

void addOutputFlags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--out", f.out, "report path (stdout when absent)");
  cmd->add_option("--format", f.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path + " for writing");
  os << text;
  if (!os.flush()) throw IoError("write to " + path + " failed");
}

void requireJson(const Flags& f, const std::string& command) {
  if (f.format != "json") throw UsageError("--format csv is not available for " + command);
}

int finish(const Json& report, const Flags& f) {
  emit(dumpJson(report), f.out);
  const bool passed = report.at("passed").get<bool>();
  logMessage(LogLevel::Info, report.at("command").get<std::string>() + (passed ? " passed" : " failed"));
  return passed ? 0 : 1;
}

int runAlgebra(const Flags& f) {
  requireJson(f, "verify-algebra");
  const Potential p = parsePotential(f.model);
  AlgebraOptions opt;
  opt.seed = f.seed;
  if (f.samples) opt.samples = *f.samples;
  return finish(algebraReport(parseModel(f.model, f.params, sweepDefaults(p)), opt), f);
}

int runQuantum(const Flags& f) {
  requireJson(f, "verify-quantum");
  const Potential p = parsePotential(f.model);
  QuantumOptions opt;
  opt.seed = f.seed;
  if (f.samples) opt.points = *f.samples;
  return finish(quantumReport(parseModel(f.model, f.params, sweepDefaults(p)), opt), f);
}

int runTrace(const Flags& f) {
  const Potential p = parsePotential(f.model);
  TraceOptions opt;
  opt.start = traceStart(p);
  if (!f.start.empty()) {
    if (f.start.size() != 4) throw UsageError("--start expects four values u v pu pv");
    opt.start = {f.start[0], f.start[1], f.start[2], f.start[3]};
  }
  opt.h = f.h;
  opt.T = f.T;
  Trajectory t;
  const Json report = traceReport(parseModel(f.model, f.params, sweepDefaults(p)), opt, &t);
  if (f.format == "json") return finish(report, f);
  std::ostringstream csv;
  writeTrajectoryCsv(t, csv);
  emit(csv.str(), f.out);
  return report.at("passed").get<bool>() ? 0 : 1;
}

int runSpectrum(const Flags& f) {
  requireJson(f, "spectrum");
  const Potential p = parsePotential(f.model);
  SpectrumOptions opt;
  opt.levels = f.levels;
  return finish(spectrumReport(parseModel(f.model, f.params, spectrumDefaults(p)), opt), f);
}

int runEmbed(const Flags& f) {
  requireJson(f, "embed");
  const Signature s = f.surface == "euclidean" ? Signature::Euclidean : Signature::Lorentzian;
  EmbedOptions opt;
  opt.nu = f.nu;
  opt.nv = f.nv;
  if (opt.nu < 2 || opt.nv < 2) throw UsageError("--nu and --nv must be at least 2");
  if (!f.mesh.empty()) {
    const auto dot = f.mesh.rfind('.');
    const std::string ext = dot == std::string::npos ? "" : f.mesh.substr(dot + 1);
    if (ext != "obj" && ext != "csv") throw UsageError("--mesh path must end in .obj or .csv");
    const double u0 = s == Signature::Euclidean ? 0.5 : 0.0;
    writeMeshFile(buildMesh(s, u0, 3.0, 0.0, 2.0 * std::numbers::pi, opt.nu, opt.nv), f.mesh, ext);
  }
  return finish(embedReport(s, opt), f);
}

int runHj(const Flags& f) {
  requireJson(f, "hj-check");
  HjOptions opt;
  opt.seed = f.seed;
  if (f.samples) opt.samples = *f.samples;
  return finish(hjReport(opt), f);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Superintegrability checks on the Darboux space D1"};
  app.require_subcommand(1);
  Flags f;

  auto* algebra = app.add_subcommand("verify-algebra", "classical Poisson relations and bracket oracle");
  addModelFlags(algebra, f);
  algebra->add_option("--seed", f.seed, "sampling seed");
  algebra->add_option("--samples", f.samples, "phase points per relation");
  addOutputFlags(algebra, f);

  auto* quantum = app.add_subcommand("verify-quantum", "operator commutators on the test-field suite");
  addModelFlags(quantum, f);
  quantum->add_option("--seed", f.seed, "sampling seed");
  quantum->add_option("--samples", f.samples, "interior evaluation points");
  addOutputFlags(quantum, f);

  auto* trace = app.add_subcommand("trace", "implicit-midpoint trajectory and conservation drift");
  addModelFlags(trace, f);
  trace->set_help_flag("--help", "print this help message and exit");
  trace->add_option("--h", f.h, "step size");
  trace->add_option("--T", f.T, "final time");
  trace->add_option("--start", f.start, "u v pu pv")->expected(4);
  addOutputFlags(trace, f);

  auto* spectrum = app.add_subcommand("spectrum", "bound states of p1 or p2 with Numerov cross-checks");
  addModelFlags(spectrum, f);
  spectrum->add_option("--levels", f.levels, "number of levels");
  addOutputFlags(spectrum, f);

  auto* embed = app.add_subcommand("embed", "surface embeddings and induced-metric residuals");
  embed->add_option("surface", f.surface, "euclidean or lorentzian")
      ->required()
      ->check(CLI::IsMember({"euclidean", "lorentzian"}));
  embed->add_option("--mesh", f.mesh, "mesh output, .obj or .csv");
  embed->add_option("--nu", f.nu, "grid size in u");
  embed->add_option("--nv", f.nv, "grid size in v");
  addOutputFlags(embed, f);

  auto* hj = app.add_subcommand("hj-check", "Hamilton-Jacobi residuals of the separated actions");
  hj->add_option("--seed", f.seed, "sampling seed");
  hj->add_option("--samples", f.samples, "sample count");
  addOutputFlags(hj, f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*algebra) return runAlgebra(f);
    if (*quantum) return runQuantum(f);
    if (*trace) return runTrace(f);
    if (*spectrum) return runSpectrum(f);
    if (*embed) return runEmbed(f);
    if (*hj) return runHj(f);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exitCodeFor(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
