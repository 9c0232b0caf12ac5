#include "ealign/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ealign {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

std::vector<std::size_t> bit_reversal_table(int n) {
  std::vector<std::size_t> rev(static_cast<std::size_t>(n), 0);
  int log2n = 0;
  while ((1 << log2n) < n) ++log2n;
  for (int i = 0; i < n; ++i) {
    std::size_t r = 0;
    for (int b = 0; b < log2n; ++b)
      if (i & (1 << b)) r |= std::size_t{1} << (log2n - 1 - b);
    rev[static_cast<std::size_t>(i)] = r;
  }
  return rev;
}

}  // namespace

GridPtr make_grid(int dim, double length, int points) {
  if (dim != 1 && dim != 2)
    throw std::invalid_argument("make_grid: dim must be 1 or 2, got " + std::to_string(dim));
  if (!(length > 0.0) || !std::isfinite(length))
    throw std::invalid_argument("make_grid: length must be positive and finite");
  if (points < 8 || !is_power_of_two(points))
    throw std::invalid_argument("make_grid: points must be a power of two >= 8, got " +
                                std::to_string(points));

  auto g = std::make_shared<Grid>();
  g->dim = dim;
  g->points = points;
  g->length = length;
  g->spacing = length / points;

  const double base = 2.0 * std::numbers::pi / length;
  g->wavenumbers.resize(static_cast<std::size_t>(points));
  for (int j = 0; j < points; ++j) {
    const int signed_j = j < points / 2 ? j : j - points;
    g->wavenumbers[static_cast<std::size_t>(j)] = base * signed_j;
  }

  g->bitrev = bit_reversal_table(points);
  g->twiddles.resize(static_cast<std::size_t>(points / 2));
  for (int j = 0; j < points / 2; ++j) {
    const double ang = -2.0 * std::numbers::pi * j / points;
    g->twiddles[static_cast<std::size_t>(j)] = {std::cos(ang), std::sin(ang)};
  }
  return g;
}

bool same_grid(const Grid& a, const Grid& b) {
  return a.dim == b.dim && a.points == b.points && a.length == b.length;
}

}  // namespace ealign
