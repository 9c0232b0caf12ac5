#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

namespace ealign {

/// Uniform periodic lattice on the torus [0, L)^dim, dim in {1, 2}.
///
/// The number of points per axis must be a power of two (radix-2 transform
/// contract). Wavenumbers use the standard FFT ordering
/// {0, 1, ..., n/2-1, -n/2, ..., -1} scaled by 2*pi/L; the table is
/// antisymmetric about zero except for the Nyquist entry. Transform tables
/// (bit reversal, twiddles) are precomputed here so that a Grid is immutable
/// and safe to share across threads.
struct Grid {
  int dim = 1;
  int points = 0;     // n per axis
  double length = 0;  // L per axis
  double spacing = 0; // h = L / n

  std::vector<double> wavenumbers;            // size n, FFT ordering
  std::vector<std::size_t> bitrev;            // size n
  std::vector<std::complex<double>> twiddles; // exp(-2*pi*i*j/n), j < n/2

  std::size_t cell_count() const {
    return dim == 1 ? static_cast<std::size_t>(points)
                    : static_cast<std::size_t>(points) * points;
  }
  std::size_t index(int ix, int iy = 0) const {
    return dim == 1 ? static_cast<std::size_t>(ix)
                    : static_cast<std::size_t>(ix) * points + iy;
  }
  double coord(int j) const { return j * spacing; }

  /// Coordinate mapped into (-L/2, L/2].
  double min_image(double x) const {
    while (x > 0.5 * length) x -= length;
    while (x <= -0.5 * length) x += length;
    return x;
  }

  /// Highest mode index kept by the 2/3 dealiasing rule.
  int dealias_keep() const { return points / 3; }
};

using GridPtr = std::shared_ptr<const Grid>;

/// Builds a grid; rejects dim outside {1,2}, non-power-of-two or
/// too-small point counts, and nonpositive lengths.
GridPtr make_grid(int dim, double length, int points);

bool same_grid(const Grid& a, const Grid& b);

}  // namespace ealign
