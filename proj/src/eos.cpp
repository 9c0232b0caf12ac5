#include "ealign/eos.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "ealign/errors.hpp"

namespace ealign {

namespace {

void require_above_floor(double m, const char* what) {
  if (!(m > kVacuumFloor))
    throw AdmissibilityError(std::string(what) + " dropped to " + std::to_string(m) +
                             " (admissibility floor " + std::to_string(kVacuumFloor) + ")");
}

}  // namespace

double EosParams::inv_tau() const { return std::isinf(tau) ? 0.0 : 1.0 / tau; }

EosParams make_eos(double A, double gamma, double rho_bar, double a, double tau) {
  if (!(A > 0.0)) throw std::invalid_argument("eos: A must be positive");
  if (!(gamma >= 1.0 + 1e-6))
    throw std::invalid_argument("eos: gamma must be >= 1 + 1e-6 (isothermal limit unsupported)");
  if (!(rho_bar > 0.0)) throw std::invalid_argument("eos: rho_bar must be positive");
  if (!(a > 0.0)) throw std::invalid_argument("eos: a must be positive");
  if (!(tau > 0.0)) throw std::invalid_argument("eos: tau must be positive (inf allowed)");

  EosParams p;
  p.A = A;
  p.gamma = gamma;
  p.nu = 2.0 / (gamma - 1.0);
  p.rho_bar = rho_bar;
  p.kappa_bar = std::sqrt(A * gamma * std::pow(rho_bar, gamma - 1.0));
  p.a = a;
  p.tau = tau;
  p.a_sym = a * std::pow(A * gamma, -0.5 * p.nu);
  return p;
}

double sound_speed_value(double rho, const EosParams& p) {
  return std::sqrt(p.A * p.gamma * std::pow(rho, p.gamma - 1.0));
}

ScalarField pressure(const ScalarField& rho, const EosParams& p) {
  require_above_floor(min_value(rho), "density");
  ScalarField out(rho.grid);
  const std::size_t n = rho.size();
#pragma omp parallel for if (n >= kParallelThreshold)
  for (std::size_t i = 0; i < n; ++i) out.values[i] = p.A * std::pow(rho.values[i], p.gamma);
  return out;
}

ScalarField sound_speed(const ScalarField& rho, const EosParams& p) {
  require_above_floor(min_value(rho), "density");
  ScalarField out(rho.grid);
  const std::size_t n = rho.size();
#pragma omp parallel for if (n >= kParallelThreshold)
  for (std::size_t i = 0; i < n; ++i) out.values[i] = sound_speed_value(rho.values[i], p);
  return out;
}

ScalarField sigma_from_rho(const ScalarField& rho, const EosParams& p) {
  require_above_floor(min_value(rho), "density");
  ScalarField out(rho.grid);
  const std::size_t n = rho.size();
#pragma omp parallel for if (n >= kParallelThreshold)
  for (std::size_t i = 0; i < n; ++i)
    out.values[i] = p.nu * (sound_speed_value(rho.values[i], p) - p.kappa_bar);
  return out;
}

ScalarField rho_from_sigma(const ScalarField& sigma, const EosParams& p) {
  ScalarField out(sigma.grid);
  const std::size_t n = sigma.size();
  double shift_min = std::numeric_limits<double>::infinity();
#pragma omp parallel for reduction(min : shift_min) if (n >= kParallelThreshold)
  for (std::size_t i = 0; i < n; ++i)
    shift_min = std::min(shift_min, sigma.values[i] / p.nu + p.kappa_bar);
  require_above_floor(shift_min, "sound speed (sigma/nu + kappa_bar)");
#pragma omp parallel for if (n >= kParallelThreshold)
  for (std::size_t i = 0; i < n; ++i) {
    const double kap = sigma.values[i] / p.nu + p.kappa_bar;
    out.values[i] = std::pow(kap * kap / (p.A * p.gamma), 1.0 / (p.gamma - 1.0));
  }
  return out;
}

ScalarField alignment_weight(const ScalarField& sigma, const EosParams& p) {
  ScalarField out(sigma.grid);
  const std::size_t n = sigma.size();
  double shift_min = std::numeric_limits<double>::infinity();
#pragma omp parallel for reduction(min : shift_min) if (n >= kParallelThreshold)
  for (std::size_t i = 0; i < n; ++i)
    shift_min = std::min(shift_min, sigma.values[i] / p.nu + p.kappa_bar);
  require_above_floor(shift_min, "sound speed (sigma/nu + kappa_bar)");
#pragma omp parallel for if (n >= kParallelThreshold)
  for (std::size_t i = 0; i < n; ++i)
    out.values[i] = std::pow(sigma.values[i] / p.nu + p.kappa_bar, p.nu);
  return out;
}

}  // namespace ealign
