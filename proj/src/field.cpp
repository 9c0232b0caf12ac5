#include "ealign/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ealign {

ScalarField::ScalarField(GridPtr g, double fill)
    : grid(std::move(g)), values(grid->cell_count(), fill) {}

VectorField::VectorField(GridPtr g, double fill) : grid(std::move(g)) {
  comps.reserve(static_cast<std::size_t>(grid->dim));
  for (int d = 0; d < grid->dim; ++d) comps.emplace_back(grid, fill);
}

bool all_finite(const ScalarField& f) {
  const std::size_t n = f.size();
  bool ok = true;
#pragma omp parallel for reduction(&& : ok) if (n >= kParallelThreshold)
  for (std::size_t i = 0; i < n; ++i) ok = ok && std::isfinite(f.values[i]);
  return ok;
}

bool all_finite(const VectorField& v) {
  for (const auto& c : v.comps)
    if (!all_finite(c)) return false;
  return true;
}

double min_value(const ScalarField& f) {
  double m = f.values.empty() ? 0.0 : f.values[0];
#pragma omp parallel for reduction(min : m) if (f.size() >= kParallelThreshold)
  for (std::size_t i = 0; i < f.size(); ++i) m = std::min(m, f.values[i]);
  return m;
}

double max_abs(const ScalarField& f) {
  double m = 0.0;
#pragma omp parallel for reduction(max : m) if (f.size() >= kParallelThreshold)
  for (std::size_t i = 0; i < f.size(); ++i) m = std::max(m, std::fabs(f.values[i]));
  return m;
}

double max_abs(const VectorField& v) {
  const std::size_t n = v.grid->cell_count();
  double m = 0.0;
  if (v.dim() == 1) return max_abs(v.comps[0]);
#pragma omp parallel for reduction(max : m) if (n >= kParallelThreshold)
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (const auto& c : v.comps) s += c.values[i] * c.values[i];
    m = std::max(m, std::sqrt(s));
  }
  return m;
}

ScalarField lincomb(double ca, const ScalarField& a, double cb, const ScalarField& b) {
  require_same_grid(*a.grid, *b.grid);
  ScalarField out(a.grid);
  const std::size_t n = a.size();
#pragma omp parallel for if (n >= kParallelThreshold)
  for (std::size_t i = 0; i < n; ++i) out.values[i] = ca * a.values[i] + cb * b.values[i];
  return out;
}

VectorField lincomb(double ca, const VectorField& a, double cb, const VectorField& b) {
  require_same_grid(*a.grid, *b.grid);
  VectorField out(a.grid);
  for (int d = 0; d < a.dim(); ++d) out.comps[d] = lincomb(ca, a.comps[d], cb, b.comps[d]);
  return out;
}

ScalarField pointwise_product(const ScalarField& a, const ScalarField& b) {
  require_same_grid(*a.grid, *b.grid);
  ScalarField out(a.grid);
  const std::size_t n = a.size();
#pragma omp parallel for if (n >= kParallelThreshold)
  for (std::size_t i = 0; i < n; ++i) out.values[i] = a.values[i] * b.values[i];
  return out;
}

void require_same_grid(const Grid& a, const Grid& b) {
  if (!same_grid(a, b)) throw std::invalid_argument("fields live on different grids");
}

}  // namespace ealign
