#pragma once

#include "ealign/field.hpp"
#include "ealign/grid.hpp"

namespace ealign {

/// Wavenumber used in derivative multipliers: the Nyquist mode is zeroed so
/// derivatives of real fields stay real.
double deriv_wavenumber(const Grid& g, int j);

/// Gradient via Fourier multipliers i*k (Nyquist zeroed per axis).
VectorField spectral_grad(const ScalarField& f);

/// Divergence, i.e. the component-summed multiplier derivative.
ScalarField spectral_div(const VectorField& v);

/// Multiplier -|k|^2 with the same Nyquist convention, so that
/// spectral_div(spectral_grad(f)) reproduces it exactly.
ScalarField spectral_laplacian(const ScalarField& f);

/// 2/3-rule filter: zeroes every mode with any axis index above n/3.
void dealias_inplace(ScalarField& f);
void dealias_inplace(VectorField& v);

/// Discrete L^p norm with quadrature weight h^dim; p in {1, 2, inf}.
/// Vector fields use the pointwise Euclidean magnitude.
double lp_norm(const ScalarField& f, double p);
double lp_norm(const VectorField& v, double p);

/// Sum over r = 0..s of the squared L^2 norms of the r-th derivatives,
/// with mixed partials aggregated through the |k|^(2r) multiplier.
/// Supported range: 0 <= s <= 4.
double sobolev_norm_sq(const ScalarField& f, int s);
double sobolev_norm_sq(const VectorField& v, int s);

double integral(const ScalarField& f);
double l2_inner(const ScalarField& a, const ScalarField& b);
double l2_inner(const VectorField& a, const VectorField& b);

}  // namespace ealign
