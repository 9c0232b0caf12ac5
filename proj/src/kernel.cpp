#include "ealign/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ealign/errors.hpp"
#include "ealign/spectral.hpp"

namespace ealign {

namespace {

double profile_value(const KernelSpec& s, double r) {
  switch (s.profile) {
    case KernelProfile::top_hat:
      if (r < s.radius) return s.amplitude;
      if (r == s.radius) return 0.5 * s.amplitude;
      return 0.0;
    case KernelProfile::bump: {
      if (r >= s.radius) return 0.0;
      const double q = r / s.radius;
      return s.amplitude * std::exp(1.0 - 1.0 / (1.0 - q * q));
    }
    case KernelProfile::exponential:
      return r <= s.radius ? s.amplitude * std::exp(-s.rate * r) : 0.0;
  }
  return 0.0;
}

// Exact cell average of the 1D top-hat indicator over [x-h/2, x+h/2],
// accounting for the adjacent periodic images. Makes the discrete L^1 norm
// reproduce the analytic integral 2R*amplitude.
double top_hat_cell_average(double x, double h, double R, double L) {
  double covered = 0.0;
  for (int img = -1; img <= 1; ++img) {
    const double lo = x - 0.5 * h + img * L;
    const double hi = x + 0.5 * h + img * L;
    covered += std::max(0.0, std::min(hi, R) - std::max(lo, -R));
  }
  return covered / h;
}

double spectral_norm_at(const Kernel& k, std::size_t idx) {
  const int dim = k.grid->dim;
  if (dim == 1) return std::fabs(k.entries[0].values[idx]);
  const double a = k.entries[0].values[idx];
  const double b = k.entries[1].values[idx];
  const double c = k.entries[3].values[idx];
  const double mean = 0.5 * (a + c);
  const double disc = std::sqrt(0.25 * (a - c) * (a - c) + b * b);
  return std::max(std::fabs(mean + disc), std::fabs(mean - disc));
}

double max_entry_at(const Kernel& k, std::size_t idx) {
  double m = 0.0;
  for (const auto& e : k.entries) m = std::max(m, std::fabs(e.values[idx]));
  return m;
}

double quad_weight(const Grid& g) {
  return g.dim == 1 ? g.spacing : g.spacing * g.spacing;
}

// out += scale * khat .* fhat
void accumulate_product(fft::Spectrum& out, const fft::Spectrum& khat,
                        const fft::Spectrum& fhat, double scale) {
  const std::size_t n = out.size();
#pragma omp parallel for if (n >= kParallelThreshold)
  for (std::size_t i = 0; i < n; ++i) out[i] += scale * khat[i] * fhat[i];
}

// O(n^2) matrix convolution, outer loop parallel, inner sum in fixed order
// so the result is identical for any thread count.
VectorField convolve_direct_omp(const Kernel& k, const VectorField& f) {
  const Grid& g = *k.grid;
  const int n = g.points;
  const double scale = quad_weight(g);
  VectorField out(f.grid);
  if (g.dim == 1) {
#pragma omp parallel for
    for (int x = 0; x < n; ++x) {
      double acc = 0.0;
      for (int y = 0; y < n; ++y) {
        const int off = (x - y + n) % n;
        acc += k.entries[0].values[static_cast<std::size_t>(off)] *
               f.comps[0].values[static_cast<std::size_t>(y)];
      }
      out.comps[0].values[static_cast<std::size_t>(x)] = acc * scale;
    }
    return out;
  }
#pragma omp parallel for collapse(2)
  for (int x0 = 0; x0 < n; ++x0)
    for (int x1 = 0; x1 < n; ++x1) {
      double acc0 = 0.0, acc1 = 0.0;
      for (int y0 = 0; y0 < n; ++y0) {
        const int o0 = (x0 - y0 + n) % n;
        for (int y1 = 0; y1 < n; ++y1) {
          const int o1 = (x1 - y1 + n) % n;
          const std::size_t off = g.index(o0, o1);
          const std::size_t src = g.index(y0, y1);
          const double f0 = f.comps[0].values[src];
          const double f1 = f.comps[1].values[src];
          acc0 += k.entries[0].values[off] * f0 + k.entries[1].values[off] * f1;
          acc1 += k.entries[2].values[off] * f0 + k.entries[3].values[off] * f1;
        }
      }
      const std::size_t idx = g.index(x0, x1);
      out.comps[0].values[idx] = acc0 * scale;
      out.comps[1].values[idx] = acc1 * scale;
    }
  return out;
}

}  // namespace

Kernel build_kernel(const KernelSpec& spec, GridPtr grid) {
  if (!(spec.amplitude >= 0.0))
    throw std::invalid_argument("kernel: amplitude must be nonnegative");
  if (!(spec.radius > 0.0) || !(spec.radius < 0.5 * grid->length))
    throw std::invalid_argument("kernel: support radius must lie in (0, L/2)");
  if (spec.profile == KernelProfile::exponential && !(spec.rate > 0.0))
    throw std::invalid_argument("kernel: exponential rate must be positive");

  Kernel k;
  k.grid = grid;
  k.spec = spec;
  const int dim = grid->dim;
  const int n = grid->points;
  k.diagonal = dim == 1 || spec.kind == KernelKind::isotropic;
  k.entries.assign(static_cast<std::size_t>(dim * dim), ScalarField(grid));

  const bool exact_cells = dim == 1 && spec.profile == KernelProfile::top_hat;
  for (int ix = 0; ix < n; ++ix) {
    const double x0 = grid->min_image(grid->coord(ix));
    const int ny = dim == 1 ? 1 : n;
    for (int iy = 0; iy < ny; ++iy) {
      const std::size_t idx = grid->index(ix, iy);
      double x1 = 0.0, r = std::fabs(x0);
      if (dim == 2) {
        x1 = grid->min_image(grid->coord(iy));
        r = std::hypot(x0, x1);
      }
      const double phi = exact_cells
                             ? spec.amplitude * top_hat_cell_average(x0, grid->spacing,
                                                                     spec.radius, grid->length)
                             : profile_value(spec, r);
      if (dim == 1) {
        k.entries[0].values[idx] = phi;
        continue;
      }
      if (spec.kind == KernelKind::isotropic) {
        k.entries[0].values[idx] = phi;
        k.entries[3].values[idx] = phi;
      } else if (r == 0.0) {
        // angular average of the rank-1 projection
        k.entries[0].values[idx] = 0.5 * phi;
        k.entries[3].values[idx] = 0.5 * phi;
      } else {
        const double ex = x0 / r, ey = x1 / r;
        k.entries[0].values[idx] = phi * ex * ex;
        k.entries[1].values[idx] = phi * ex * ey;
        k.entries[2].values[idx] = phi * ex * ey;
        k.entries[3].values[idx] = phi * ey * ey;
      }
    }
  }

  k.entries_hat.reserve(k.entries.size());
  for (const auto& e : k.entries) k.entries_hat.push_back(fft::forward(e));

  k.l1_spectral = kernel_l1_norm(k);
  k.l1_maxentry = kernel_l1_norm_maxentry(k);
  return k;
}

double kernel_l1_norm(const Kernel& k) {
  double s = 0.0;
  const std::size_t n = k.grid->cell_count();
  for (std::size_t i = 0; i < n; ++i) s += spectral_norm_at(k, i);
  return s * quad_weight(*k.grid);
}

double kernel_l1_norm_maxentry(const Kernel& k) {
  double s = 0.0;
  const std::size_t n = k.grid->cell_count();
  for (std::size_t i = 0; i < n; ++i) s += max_entry_at(k, i);
  return s * quad_weight(*k.grid);
}

VectorField convolve(const Kernel& k, const VectorField& f, ConvMethod method) {
  require_same_grid(*k.grid, *f.grid);
  if (method == ConvMethod::direct) return convolve_direct_omp(k, f);

  const int dim = k.grid->dim;
  const double scale = quad_weight(*k.grid);
  std::vector<fft::Spectrum> fhat;
  fhat.reserve(static_cast<std::size_t>(dim));
  for (int j = 0; j < dim; ++j) fhat.push_back(fft::forward(f.comps[static_cast<std::size_t>(j)]));

  VectorField out(f.grid);
  for (int i = 0; i < dim; ++i) {
    fft::Spectrum acc(k.grid->cell_count(), {0.0, 0.0});
    if (k.diagonal) {
      accumulate_product(acc, k.entries_hat[static_cast<std::size_t>(i * dim + i)],
                         fhat[static_cast<std::size_t>(i)], scale);
    } else {
      for (int j = 0; j < dim; ++j)
        accumulate_product(acc, k.entries_hat[static_cast<std::size_t>(i * dim + j)],
                           fhat[static_cast<std::size_t>(j)], scale);
    }
    out.comps[static_cast<std::size_t>(i)] = fft::inverse_real(std::move(acc), f.grid);
  }
  return out;
}

std::vector<ScalarField> convolve_matrix(const Kernel& k, const ScalarField& w,
                                         ConvMethod method) {
  require_same_grid(*k.grid, *w.grid);
  const int dim = k.grid->dim;
  const double scale = quad_weight(*k.grid);
  std::vector<ScalarField> out(static_cast<std::size_t>(dim * dim), ScalarField(w.grid));

  if (method == ConvMethod::fast) {
    const auto what = fft::forward(w);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) {
        const std::size_t e = static_cast<std::size_t>(i * dim + j);
        if (k.diagonal && i != j) continue; // identically zero entries
        fft::Spectrum acc(k.grid->cell_count(), {0.0, 0.0});
        accumulate_product(acc, k.entries_hat[e], what, scale);
        out[e] = fft::inverse_real(std::move(acc), w.grid);
      }
    return out;
  }

  // direct double loop
  const int n = k.grid->points;
  if (k.grid->dim == 1) {
#pragma omp parallel for
    for (int x = 0; x < n; ++x) {
      double acc = 0.0;
      for (int y = 0; y < n; ++y) {
        const int off = (x - y + n) % n;
        acc += k.entries[0].values[static_cast<std::size_t>(off)] * w.values[static_cast<std::size_t>(y)];
      }
      out[0].values[static_cast<std::size_t>(x)] = acc * scale;
    }
    return out;
  }
#pragma omp parallel for collapse(2)
  for (int x0 = 0; x0 < n; ++x0)
    for (int x1 = 0; x1 < n; ++x1) {
      double acc[4] = {0, 0, 0, 0};
      for (int y0 = 0; y0 < n; ++y0) {
        const int o0 = (x0 - y0 + n) % n;
        for (int y1 = 0; y1 < n; ++y1) {
          const int o1 = (x1 - y1 + n) % n;
          const std::size_t off = k.grid->index(o0, o1);
          const double wv = w.values[k.grid->index(y0, y1)];
          for (int e = 0; e < 4; ++e) acc[e] += k.entries[static_cast<std::size_t>(e)].values[off] * wv;
        }
      }
      const std::size_t idx = k.grid->index(x0, x1);
      for (int e = 0; e < 4; ++e) out[static_cast<std::size_t>(e)].values[idx] = acc[e] * scale;
    }
  return out;
}

VectorField alignment_force(const Kernel& k, const VectorField& u, const ScalarField& w,
                            double coeff, ConvMethod method) {
  require_same_grid(*k.grid, *u.grid);
  require_same_grid(*k.grid, *w.grid);
  if (min_value(w) < 0.0) throw AdmissibilityError("alignment weight has negative entries");

  const int dim = k.grid->dim;
  const auto matrix = convolve_matrix(k, w, method);
  VectorField uw(u.grid);
  for (int j = 0; j < dim; ++j)
    uw.comps[static_cast<std::size_t>(j)] = pointwise_product(u.comps[static_cast<std::size_t>(j)], w);
  const VectorField conv_uw = convolve(k, uw, method);

  VectorField out(u.grid);
  const std::size_t cells = k.grid->cell_count();
  for (int i = 0; i < dim; ++i) {
#pragma omp parallel for if (cells >= kParallelThreshold)
    for (std::size_t c = 0; c < cells; ++c) {
      double mu = 0.0;
      for (int j = 0; j < dim; ++j)
        mu += matrix[static_cast<std::size_t>(i * dim + j)].values[c] *
              u.comps[static_cast<std::size_t>(j)].values[c];
      out.comps[static_cast<std::size_t>(i)].values[c] =
          -coeff * (mu - conv_uw.comps[static_cast<std::size_t>(i)].values[c]);
    }
  }
  return out;
}

bool young_vector_ok(const Kernel& k, const VectorField& f) {
  const VectorField conv = convolve(k, f, ConvMethod::fast);
  const double lhs = max_abs(conv);
  const double rhs = k.l1_spectral * max_abs(f);
  return lhs <= rhs * (1.0 + 1e-12);
}

bool young_matrix_ok(const Kernel& k, const ScalarField& w) {
  const auto m = convolve_matrix(k, w, ConvMethod::fast);
  const int dim = k.grid->dim;
  const std::size_t cells = k.grid->cell_count();
  double lhs = 0.0;
  if (dim == 1) {
    lhs = max_abs(m[0]);
  } else {
#pragma omp parallel for reduction(max : lhs) if (cells >= kParallelThreshold)
    for (std::size_t c = 0; c < cells; ++c) {
      const double a = m[0].values[c];
      const double b = m[1].values[c];
      const double d = m[3].values[c];
      const double mean = 0.5 * (a + d);
      const double disc = std::sqrt(0.25 * (a - d) * (a - d) + b * b);
      lhs = std::max(lhs, std::max(std::fabs(mean + disc), std::fabs(mean - disc)));
    }
  }
  const double rhs = k.l1_spectral * max_abs(w);
  return lhs <= rhs * (1.0 + 1e-12);
}

}  // namespace ealign
