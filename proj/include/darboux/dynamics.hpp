#pragma once

// Symplectic implicit-midpoint integration of Hamilton's equations and
// conservation diagnostics along the resulting trajectories.

#include <string>
#include <vector>

#include "darboux/phase.hpp"

namespace darboux {

struct Trajectory {
  std::vector<double> times;
  std::vector<PhasePointd> states;
  ModelSpec model;
  bool exitedDomain = false;  // integration stopped early at u <= 0
  std::string exitReason;
};

struct MidpointOptions {
  double tolerance = 1e-13;  // on the scaled fixed-point increment
  int maxIterations = 50;
};

/// Hamiltonian vector field (du/dt, dv/dt, dpu/dt, dpv/dt).
Eigen::Vector4d hamiltonVectorField(const PhasePointd& p, const ModelSpec& m);

/// One implicit-midpoint step z1 = z0 + h f((z0 + z1)/2) solved by
/// fixed-point iteration. Throws NoConvergence or DomainExit.
PhasePointd stepMidpoint(const PhasePointd& s, const ModelSpec& m, double h, const MidpointOptions& opt = {});

/// ceil(T/h) steps of size h (the last one shortened to land on T). A domain
/// exit ends the trajectory early with exitedDomain set.
Trajectory integrate(const PhasePointd& s0, const ModelSpec& m, double h, double T, const MidpointOptions& opt = {});

struct DriftStats {
  ObservableId observable;
  double initial = 0.0;
  double maxAbsDrift = 0.0;
  double maxRelDrift = 0.0;  // maxAbsDrift / max(|initial|, 1)
};

struct ConservationReport {
  std::vector<DriftStats> entries;
  const DriftStats& at(const ObservableId& o) const;
  double worstRelative() const;
};

ConservationReport conservationReport(const Trajectory& t, const std::vector<ObservableId>& observables);

}  // namespace darboux
