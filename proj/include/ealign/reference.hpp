#pragma once

#include "ealign/fft.hpp"
#include "ealign/kernel.hpp"

// Serial reference implementations of the hot kernels. These are kept
// deliberately loop-simple: the test suites check the production paths
// against them, and the benchmark target measures the speedup of the
// OpenMP/fast paths over them.
namespace ealign::ref {

/// O(n^2) periodic matrix convolution, single-threaded, fixed summation
/// order.
VectorField convolve_direct(const Kernel& k, const VectorField& f);

/// Literal double sum -coeff * h^dim * sum_y Gamma(x-y)(u(x)-u(y)) w(y).
VectorField alignment_force_direct(const Kernel& k, const VectorField& u,
                                   const ScalarField& w, double coeff);

/// O(n^2) discrete Fourier transform of one axis worth of data.
fft::Spectrum dft_1d(const fft::Spectrum& in, bool inverse);

}  // namespace ealign::ref
