#pragma once

// Verification workflows assembled into JSON reports. Shared by the command
// line tool and the acceptance runner.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "darboux/dynamics.hpp"
#include "darboux/embeddings.hpp"
#include "darboux/phase.hpp"
#include "json.hpp"

namespace darboux {

/// Insertion-ordered so identical inputs give identical documents.
using Json = nlohmann::ordered_json;

/// Two-space indented JSON with every float printed as %.17g.
std::string dumpJson(const Json& j);

enum class LogLevel { Quiet, Info, Debug };
/// From DARBOUX_LOG (quiet, info, debug); quiet when unset.
LogLevel logLevel();
/// Writes to stderr when `level` is enabled.
void logMessage(LogLevel level, const std::string& message);

/// Process exit code: 2 usage and domain errors, 3 numeric failures, 4 I/O.
int exitCodeFor(const Error& e);

Potential parsePotential(const std::string& name);
/// Builds a model from `name=value` entries. An empty list selects
/// `fallback`'s parameters; a partial list is a UsageError.
ModelSpec parseModel(const std::string& name, const std::vector<std::string>& params, const ModelSpec& fallback);

/// Parameters used for sweeps and trajectories when none are given.
ModelSpec sweepDefaults(Potential p);
/// Parameters of the bound-state problems when none are given.
ModelSpec spectrumDefaults(Potential p);
/// Reference start point of each model for conservation runs.
PhasePointd traceStart(Potential p);

Json modelJson(const ModelSpec& m);

struct AlgebraOptions {
  std::size_t samples = 1000;
  std::uint64_t seed = 42;
  double tolerance = 1e-9;         // relation residual / scale
  double oracleTolerance = 1e-6;   // closed form vs finite differences
  double fdStep = 1e-5;
};
/// Classical relations of the model plus the bracket oracle comparison.
Json algebraReport(const ModelSpec& m, const AlgebraOptions& opt);

struct QuantumOptions {
  std::size_t points = 20;
  std::uint64_t seed = 42;
  double printedTolerance = 1e-8;  // free relations as printed
  double fitTolerance = 1e-6;      // potential relations after the fit
};
/// Operator relations on the test-field suite. For the free model the
/// printed relations are gated; for potentials the fitted ones are.
Json quantumReport(const ModelSpec& m, const QuantumOptions& opt);

struct TraceOptions {
  PhasePointd start;
  double h = 1e-3;
  double T = 10.0;
  double tolerance = 1e-8;
  double ratioLo = 3.5;
  double ratioHi = 4.5;
};
/// Conservation of H and every integral along one trajectory, plus the
/// H-drift ratio between steps h and h/2. Fills `trajectory` when given.
Json traceReport(const ModelSpec& m, const TraceOptions& opt, Trajectory* trajectory = nullptr);
/// Header `t,u,v,pu,pv`.
void writeTrajectoryCsv(const Trajectory& t, std::ostream& os);

struct SpectrumOptions {
  int levels = 5;
  double tolerance = 1e-6;  // special-function roots vs Numerov
};
/// Quantized separation constants and energies of P1 or P2 with Numerov
/// cross-checks.
Json spectrumReport(const ModelSpec& m, const SpectrumOptions& opt);

struct EmbedOptions {
  int nu = 50;
  int nv = 50;
  double h = 1e-5;
  double tolerance = 1e-6;
};
/// Induced-metric residual over the reference grid of the surface.
Json embedReport(Signature s, const EmbedOptions& opt);

struct HjOptions {
  std::size_t samples = 200;
  std::uint64_t seed = 42;
  double tolerance = 1e-12;
};
/// Hamilton-Jacobi residuals of the separated actions in the native,
/// rotated and parabolic charts.
Json hjReport(const HjOptions& opt);

}  // namespace darboux
