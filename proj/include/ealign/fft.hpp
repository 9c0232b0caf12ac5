#pragma once

#include <complex>
#include <vector>

#include "ealign/field.hpp"
#include "ealign/grid.hpp"

namespace ealign::fft {

using Spectrum = std::vector<std::complex<double>>;

/// In-place radix-2 transform over all axes of the grid. Unnormalized
/// forward; inverse carries the 1/n-per-axis factor. Summation order is
/// fixed, so results are reproducible bit-for-bit across runs and thread
/// counts.
void transform(std::complex<double>* data, const Grid& g, bool inverse);

Spectrum forward(const ScalarField& f);
ScalarField inverse_real(Spectrum hat, GridPtr g);

}  // namespace ealign::fft
