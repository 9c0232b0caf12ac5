#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "ealign/diagnostics.hpp"
#include "ealign/eos.hpp"
#include "ealign/kernel.hpp"
#include "ealign/state.hpp"

namespace ealign {

enum class SpatialScheme { spectral, llf_fv };

struct SchemeConfig {
  SpatialScheme spatial = SpatialScheme::spectral;
  bool dealias = true; // 2/3 rule, spectral only
  double cfl = 0.4;    // in (0, 1]
  double dt_max = std::numeric_limits<double>::infinity();
  double t_end = 0.0;
  int snapshot_every = 0; // steps between stored states; 0 = initial/final only
  double blowup_factor = 100.0;
};

struct StateDeriv {
  ScalarField d_density;
  VectorField d_velocity;
};

/// d/dt (rho, u): mass equation kept in divergence form, momentum equation
/// divided through by rho. Aborts on vacuum.
StateDeriv rhs_primitive(const SimState& s, const EosParams& eos, const Kernel& k);

/// d/dt (sigma, u) of the sound-speed-symmetrized system.
StateDeriv rhs_symmetrized(const SimState& s, const EosParams& eos, const Kernel& k);

/// First-order local Lax-Friedrichs finite-volume right-hand side on the
/// conservative (rho, rho u) variables, converted back to (rho, u); damping
/// and alignment enter as zeroth-order sources. Primitive form only.
StateDeriv rhs_llf(const SimState& s, const EosParams& eos, const Kernel& k);

/// min(dt_max, cfl*h / max(|u| + kappa)), kappa from the current state.
double cfl_dt(const SimState& s, const EosParams& eos, const SchemeConfig& cfg);

using RhsFn = std::function<StateDeriv(const SimState&)>;

/// Three-stage strong-stability-preserving Runge-Kutta step; the dealias
/// filter, when enabled, is applied after every stage.
SimState step_ssprk3(const SimState& s, double dt, const RhsFn& rhs, bool dealias);

/// Fixed-step driver, one stored state per step (index i at time i*dt).
/// Used by refinement studies and the successive-approximation comparison.
std::vector<SimState> integrate_fixed(const SimState& initial, const RhsFn& rhs,
                                      double dt, int steps, bool dealias);

struct RunResult {
  std::vector<SimState> snapshots;        // initial, cadence states, final
  std::vector<DiagnosticsRecord> records; // one per step incl. t = 0
  RunStatus status = RunStatus::completed;
  long abort_step = -1;
  std::string message;

  const SimState& final_state() const { return snapshots.back(); }
};

/// Integrates to t_end under CFL control, recording diagnostics every step.
/// Early termination (vacuum, NaN, gradient blow-up against
/// blowup_factor * initial max|grad u|) is a structured status, not a crash.
RunResult run(const SimState& initial, const EosParams& eos, const Kernel& k,
              const SchemeConfig& cfg, int sobolev_s, double beta);

}  // namespace ealign
