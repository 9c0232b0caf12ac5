#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ealign/dynamics.hpp"
#include "ealign/eos.hpp"
#include "ealign/kernel.hpp"
#include "ealign/state.hpp"

namespace ealign {

enum class InitialType { single_mode, random_band };

/// Flat sectioned key-value run description. The grammar is `[section]`
/// headers, `key = value` lines and `#` comments; see the README for the
/// full key table.
struct RunConfig {
  // [grid]
  int grid_dim = 1;
  double grid_length = 6.283185307179586; // 2*pi
  int grid_points = 256;
  // [eos]
  double eos_A = 1.0;
  double eos_gamma = 2.0;
  double eos_rho_bar = 1.0;
  double eos_a = 1.0;
  double eos_tau = 1.0;
  // [kernel]
  KernelSpec kernel;
  // [scheme]
  SchemeConfig scheme;
  // [initial]
  Formulation formulation = Formulation::symmetrized;
  InitialType initial_type = InitialType::single_mode;
  int mode_k = 1;
  double initial_amplitude = 0.0;
  int kmin = 1;
  int kmax = 4;
  std::uint64_t seed = 0;
  // [output]
  std::string output_directory;
  std::string series_filename = "series.csv";
  std::string snapshot_prefix = "snap";
  // [diagnostics]
  int sobolev_s = 0; // 0 = default for the dimension (2 in 1D, 3 in 2D)
  double beta = 0.01;

  int effective_sobolev_s() const;
};

struct ParsedConfig {
  std::optional<RunConfig> config;
  std::vector<std::string> errors; // every validation problem, not just the first
  bool ok() const { return errors.empty() && config.has_value(); }
};

/// Parses and fully validates; unknown sections/keys are rejected and all
/// problems are reported together.
ParsedConfig parse_config(const std::string& text);
ParsedConfig parse_config_file(const std::string& path);

GridPtr build_grid(const RunConfig& c);
EosParams build_eos(const RunConfig& c);
Kernel build_kernel_from(const RunConfig& c, GridPtr grid);

/// Initial perturbation in the (sigma, u) variables; a primitive-form state
/// carries rho = rho_from_sigma(sigma), so the two formulations start from
/// equivalent data.
SimState build_initial_state(const RunConfig& c, GridPtr grid, const EosParams& eos);

/// Band-limited random real field, Hermitian-symmetric spectrum, rescaled to
/// max|f| = amplitude. Deterministic in (seed, salt).
ScalarField random_band_field(GridPtr grid, int kmin, int kmax, double amplitude,
                              std::uint64_t seed, std::uint64_t salt);

}  // namespace ealign
