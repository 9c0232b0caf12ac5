#pragma once

#include <cstddef>
#include <vector>

#include "ealign/grid.hpp"

namespace ealign {

// Loops below this size are not worth spawning threads for.
inline constexpr std::size_t kParallelThreshold = 4096;

/// Real field sampled at the grid points, row-major in 2D.
struct ScalarField {
  GridPtr grid;
  std::vector<double> values;

  ScalarField() = default;
  explicit ScalarField(GridPtr g, double fill = 0.0);

  std::size_t size() const { return values.size(); }
  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }
};

/// dim scalar components sharing one grid.
struct VectorField {
  GridPtr grid;
  std::vector<ScalarField> comps;

  VectorField() = default;
  explicit VectorField(GridPtr g, double fill = 0.0);

  int dim() const { return static_cast<int>(comps.size()); }
};

bool all_finite(const ScalarField& f);
bool all_finite(const VectorField& v);

double min_value(const ScalarField& f);
double max_abs(const ScalarField& f);
/// Pointwise Euclidean magnitude maximum.
double max_abs(const VectorField& v);

/// ca*a + cb*b, elementwise.
ScalarField lincomb(double ca, const ScalarField& a, double cb, const ScalarField& b);
VectorField lincomb(double ca, const VectorField& a, double cb, const VectorField& b);

ScalarField pointwise_product(const ScalarField& a, const ScalarField& b);

/// Throws std::invalid_argument unless both fields live on structurally
/// identical grids.
void require_same_grid(const Grid& a, const Grid& b);

}  // namespace ealign
