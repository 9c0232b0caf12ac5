#pragma once

#include <complex>
#include <vector>

#include "ealign/fft.hpp"
#include "ealign/field.hpp"

namespace ealign {

enum class KernelKind { isotropic, projection };
enum class KernelProfile { top_hat, bump, exponential };

/// Radial profile phi with compact support inside (-L/2, L/2)^dim.
/// top_hat: amplitude on [0, radius); bump: the smooth compactly supported
/// mollifier amplitude*exp(1 - 1/(1-(r/radius)^2)); exponential:
/// amplitude*exp(-rate*r) cut off at radius. amplitude = 0 produces the zero
/// kernel (alignment off).
struct KernelSpec {
  KernelKind kind = KernelKind::isotropic;
  KernelProfile profile = KernelProfile::top_hat;
  double radius = 0.5; // support radius (cutoff for exponential)
  double rate = 1.0;   // exponential only
  double amplitude = 1.0;
};

/// Matrix-valued influence function sampled on the torus, with precomputed
/// entry transforms and both L^1 norm conventions. Immutable after build;
/// concurrent convolutions against one Kernel are safe.
struct Kernel {
  GridPtr grid;
  KernelSpec spec;
  std::vector<ScalarField> entries;        // dim*dim, row-major [i*dim+j]
  std::vector<fft::Spectrum> entries_hat;
  bool diagonal = false; // isotropic kind or 1D: single independent entry
  double l1_spectral = 0.0; // integral of the pointwise matrix spectral norm
  double l1_maxentry = 0.0; // integral of the pointwise max |entry|
};

/// Samples the kernel at the grid points (1D top-hat entries are exact cell
/// averages so the quadrature reproduces the analytic integral; the
/// projection kind takes the angular average phi(0)/dim * I at the origin).
/// Rejects support radii >= L/2.
Kernel build_kernel(const KernelSpec& spec, GridPtr grid);

/// Fresh quadrature of the pointwise matrix spectral norm.
double kernel_l1_norm(const Kernel& k);
double kernel_l1_norm_maxentry(const Kernel& k);

enum class ConvMethod { direct, fast };

/// Periodic matrix convolution (Gamma * f)_i = sum_j Gamma_ij * f_j with
/// quadrature weight h^dim. `direct` is the O(n^2) double loop, `fast`
/// multiplies transforms.
VectorField convolve(const Kernel& k, const VectorField& f,
                     ConvMethod method = ConvMethod::fast);

/// Gamma * w for scalar w: dim*dim scalar fields, row-major.
std::vector<ScalarField> convolve_matrix(const Kernel& k, const ScalarField& w,
                                         ConvMethod method = ConvMethod::fast);

/// -coeff * [ (Gamma*w)(x) u(x) - (Gamma*(u w))(x) ], the expanded form of
/// -coeff * Int Gamma(x-y)(u(x)-u(y)) w(y) dy. Rejects negative weights.
VectorField alignment_force(const Kernel& k, const VectorField& u,
                            const ScalarField& w, double coeff,
                            ConvMethod method = ConvMethod::fast);

/// Convolution monitors: ||Gamma*f||_inf <= ||Gamma||_L1 ||f||_inf up to a
/// 1e-12 relative slack. The matrix variant measures the pointwise spectral
/// norm of Gamma*w.
bool young_vector_ok(const Kernel& k, const VectorField& f);
bool young_matrix_ok(const Kernel& k, const ScalarField& w);

}  // namespace ealign
