#pragma once

#include <vector>

#include "ealign/eos.hpp"
#include "ealign/kernel.hpp"
#include "ealign/state.hpp"

namespace ealign {

struct SigmaU {
  ScalarField sigma;
  VectorField u;
};

/// One approximation (sigma^k, u^k) stored on the uniform time mesh
/// {0, dt, ..., T0}. The two interior Runge-Kutta stage states of every step
/// are kept as well: the next iteration reads its frozen coefficients from
/// them, so the map's fixed point coincides with the discrete nonlinear
/// solution instead of sitting an interpolation error away from it.
struct IterateTrajectory {
  std::vector<SigmaU> states;        // size steps + 1
  std::vector<SigmaU> first_stage;   // size steps
  std::vector<SigmaU> second_stage;  // size steps
  double dt = 0;
  int iterate_index = 0;
  double sup_hs = 0;         // sup_t ||sigma||_Hs + sup_t ||u||_Hs
  bool bound_warning = false; // sup_hs exceeded the configured bound
};

struct PicardConfig {
  double T0 = 0.25;      // iteration horizon
  double dt = 0.25 / 64; // time mesh, must divide T0
  int max_iterations = 8;
  double M_bound = 0;    // 0 = derive sqrt(e_hs(0) + 1) from the data
};

/// Right-hand side of the linear system solved at each iteration: the
/// unknown enters every derivative term, the frozen coefficients supply the
/// transport fields and the alignment forcing.
struct LinearRhs {
  ScalarField d_sigma;
  VectorField d_u;
};
LinearRhs picard_linear_rhs(const SigmaU& unknown, const SigmaU& coeff,
                            const EosParams& eos, const Kernel& k);

/// The zeroth approximation: constant in time, equal to the initial data.
IterateTrajectory picard_zeroth(const SigmaU& init, const PicardConfig& cfg);

/// Integrates the linear system with coefficients read from `prev` at the
/// matching steps and stages; warns (does not abort) when the H^s bound
/// monitor trips.
IterateTrajectory picard_iterate(const IterateTrajectory& prev, const SigmaU& init,
                                 const EosParams& eos, const Kernel& k,
                                 const PicardConfig& cfg, int sobolev_s);

struct ContractionReport {
  std::vector<double> d;      // d_k = sup_t ||diff sigma||_L2 + ||diff u||_L2
  std::vector<double> ratios; // d_{k+1} / d_k
  // Differences at or below this level (1e-12 of d_0) are round-off; their
  // ratios are jitter, not contraction rates, and are ignored by the
  // non-contraction detector.
  double floor = 0;
  int converged_at = -1; // first k with d_k <= floor, -1 if never reached
  bool non_contraction = false; // above-floor ratios > 1 twice in a row
  double T0 = 0;
  double dt = 0;
};

struct PicardResult {
  std::vector<IterateTrajectory> iterates; // index 0 = zeroth
  ContractionReport report;
};

PicardResult picard_run(const SigmaU& init, const EosParams& eos, const Kernel& k,
                        const PicardConfig& cfg, int sobolev_s);

/// sqrt(||sigma0||_Hs^2 + ||u0||_Hs^2 + 1), the iterate bound monitor level.
double default_m_bound(const SigmaU& init, int sobolev_s);

/// Bisects the horizon downward from t_start until the measured difference
/// ratios for k >= 2 drop below `target_ratio`. The analysis only guarantees
/// a valid horizon exists; this finds one empirically.
double auto_pick_t0(const SigmaU& init, const EosParams& eos, const Kernel& k,
                    int sobolev_s, double t_start = 0.5,
                    int steps_per_iterate = 64, int probe_iterations = 5,
                    double target_ratio = 0.5);

}  // namespace ealign
