#pragma once

#include "ealign/field.hpp"

namespace ealign {

// Pointwise admissibility floor for density and for the shifted sound speed.
// Evaluations at or below the floor abort with a diagnostic instead of
// clamping.
inline constexpr double kVacuumFloor = 1e-12;

/// Model constants for the polytropic pressure p = A*rho^gamma, the damping
/// time tau and the alignment strength, plus everything derived from them.
///
/// kappa(rho) = sqrt(A*gamma*rho^(gamma-1)) is the sound speed and
/// sigma = nu*(kappa - kappa_bar), nu = 2/(gamma-1), the symmetrizing
/// variable. `a` multiplies the density-weighted alignment integral of the
/// primitive system; `a_sym` = a*(A*gamma)^(-nu/2) multiplies the
/// (sigma/nu + kappa_bar)^nu-weighted integral of the symmetrized system so
/// the two forces agree pointwise.
struct EosParams {
  double A = 1.0;
  double gamma = 2.0;
  double nu = 2.0;        // 2/(gamma-1)
  double rho_bar = 1.0;
  double kappa_bar = 0.0; // kappa(rho_bar)
  double a = 1.0;
  double tau = 1.0;       // +inf switches damping off
  double a_sym = 0.0;

  double inv_tau() const;
};

/// Validates and derives all constants. gamma must exceed 1 + 1e-6
/// (the isothermal limit is out of scope); tau may be +inf.
EosParams make_eos(double A, double gamma, double rho_bar, double a, double tau);

double sound_speed_value(double rho, const EosParams& p);

ScalarField pressure(const ScalarField& rho, const EosParams& p);
ScalarField sound_speed(const ScalarField& rho, const EosParams& p);
ScalarField sigma_from_rho(const ScalarField& rho, const EosParams& p);
ScalarField rho_from_sigma(const ScalarField& sigma, const EosParams& p);

/// (sigma/nu + kappa_bar)^nu, the alignment weight of the symmetrized
/// system; equals (A*gamma)^(nu/2) * rho pointwise.
ScalarField alignment_weight(const ScalarField& sigma, const EosParams& p);

}  // namespace ealign
