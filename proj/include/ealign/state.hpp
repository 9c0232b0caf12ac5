#pragma once

#include "ealign/field.hpp"

namespace ealign {

enum class Formulation { primitive, symmetrized };

/// Instantaneous simulation state: density-like scalar (rho when primitive,
/// sigma when symmetrized) plus velocity. Admissibility: rho > 0 pointwise,
/// respectively sigma/nu + kappa_bar > 0.
struct SimState {
  Formulation form = Formulation::symmetrized;
  ScalarField density_like;
  VectorField velocity;
  double time = 0.0;
};

enum class RunStatus { completed, vacuum, nan, blowup };

const char* to_string(RunStatus s);
const char* to_string(Formulation f);

}  // namespace ealign
