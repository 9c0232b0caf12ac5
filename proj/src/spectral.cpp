#include "ealign/spectral.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "ealign/fft.hpp"

namespace ealign {

namespace {

// Quadrature weight h^dim and the matching Fourier-side normalization
// (h/n)^dim for Parseval sums.
double quad_weight(const Grid& g) {
  return g.dim == 1 ? g.spacing : g.spacing * g.spacing;
}
double parseval_weight(const Grid& g) {
  const double w = g.spacing / g.points;
  return g.dim == 1 ? w : w * w;
}

}  // namespace

double deriv_wavenumber(const Grid& g, int j) {
  return j == g.points / 2 ? 0.0 : g.wavenumbers[static_cast<std::size_t>(j)];
}

VectorField spectral_grad(const ScalarField& f) {
  const Grid& g = *f.grid;
  const auto hat = fft::forward(f);
  VectorField out(f.grid);
  const int n = g.points;
  if (g.dim == 1) {
    fft::Spectrum d(hat.size());
    for (int j = 0; j < n; ++j) {
      const double k = deriv_wavenumber(g, j);
      d[static_cast<std::size_t>(j)] = std::complex<double>(0.0, k) * hat[static_cast<std::size_t>(j)];
    }
    out.comps[0] = fft::inverse_real(std::move(d), f.grid);
    return out;
  }
  for (int axis = 0; axis < 2; ++axis) {
    fft::Spectrum d(hat.size());
    const bool par = hat.size() >= kParallelThreshold;
#pragma omp parallel for if (par)
    for (int jx = 0; jx < n; ++jx) {
      for (int jy = 0; jy < n; ++jy) {
        const double k = deriv_wavenumber(g, axis == 0 ? jx : jy);
        const std::size_t idx = g.index(jx, jy);
        d[idx] = std::complex<double>(0.0, k) * hat[idx];
      }
    }
    out.comps[static_cast<std::size_t>(axis)] = fft::inverse_real(std::move(d), f.grid);
  }
  return out;
}

ScalarField spectral_div(const VectorField& v) {
  const Grid& g = *v.grid;
  const int n = g.points;
  if (g.dim == 1) {
    return spectral_grad(v.comps[0]).comps[0];
  }
  fft::Spectrum acc(g.cell_count(), {0.0, 0.0});
  for (int axis = 0; axis < 2; ++axis) {
    const auto hat = fft::forward(v.comps[static_cast<std::size_t>(axis)]);
    const bool par = hat.size() >= kParallelThreshold;
#pragma omp parallel for if (par)
    for (int jx = 0; jx < n; ++jx) {
      for (int jy = 0; jy < n; ++jy) {
        const double k = deriv_wavenumber(g, axis == 0 ? jx : jy);
        const std::size_t idx = g.index(jx, jy);
        acc[idx] += std::complex<double>(0.0, k) * hat[idx];
      }
    }
  }
  return fft::inverse_real(std::move(acc), v.grid);
}

ScalarField spectral_laplacian(const ScalarField& f) {
  const Grid& g = *f.grid;
  auto hat = fft::forward(f);
  const int n = g.points;
  if (g.dim == 1) {
    for (int j = 0; j < n; ++j) {
      const double k = deriv_wavenumber(g, j);
      hat[static_cast<std::size_t>(j)] *= -k * k;
    }
  } else {
    const bool par = hat.size() >= kParallelThreshold;
#pragma omp parallel for if (par)
    for (int jx = 0; jx < n; ++jx) {
      const double kx = deriv_wavenumber(g, jx);
      for (int jy = 0; jy < n; ++jy) {
        const double ky = deriv_wavenumber(g, jy);
        hat[g.index(jx, jy)] *= -(kx * kx + ky * ky);
      }
    }
  }
  return fft::inverse_real(std::move(hat), f.grid);
}

void dealias_inplace(ScalarField& f) {
  const Grid& g = *f.grid;
  const int n = g.points;
  const int keep = g.dealias_keep();
  auto hat = fft::forward(f);
  auto cut = [&](int j) {
    const int sj = j < n / 2 ? j : j - n;
    return std::abs(sj) > keep;
  };
  if (g.dim == 1) {
    for (int j = 0; j < n; ++j)
      if (cut(j)) hat[static_cast<std::size_t>(j)] = {0.0, 0.0};
  } else {
    const bool par = hat.size() >= kParallelThreshold;
#pragma omp parallel for if (par)
    for (int jx = 0; jx < n; ++jx)
      for (int jy = 0; jy < n; ++jy)
        if (cut(jx) || cut(jy)) hat[g.index(jx, jy)] = {0.0, 0.0};
  }
  f = fft::inverse_real(std::move(hat), f.grid);
}

void dealias_inplace(VectorField& v) {
  for (auto& c : v.comps) dealias_inplace(c);
}

double lp_norm(const ScalarField& f, double p) {
  if (std::isinf(p)) return max_abs(f);
  const double w = quad_weight(*f.grid);
  if (p == 1.0) {
    double s = 0.0;
    for (double x : f.values) s += std::fabs(x);
    return s * w;
  }
  if (p == 2.0) {
    double s = 0.0;
    for (double x : f.values) s += x * x;
    return std::sqrt(s * w);
  }
  throw std::invalid_argument("lp_norm: p must be 1, 2 or inf");
}

double lp_norm(const VectorField& v, double p) {
  if (std::isinf(p)) return max_abs(v);
  const double w = quad_weight(*v.grid);
  const std::size_t n = v.grid->cell_count();
  if (p == 1.0) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double q = 0.0;
      for (const auto& c : v.comps) q += c.values[i] * c.values[i];
      s += std::sqrt(q);
    }
    return s * w;
  }
  if (p == 2.0) {
    double s = 0.0;
    for (const auto& c : v.comps)
      for (double x : c.values) s += x * x;
    return std::sqrt(s * w);
  }
  throw std::invalid_argument("lp_norm: p must be 1, 2 or inf");
}

double sobolev_norm_sq(const ScalarField& f, int s) {
  if (s < 0 || s > 4) throw std::invalid_argument("sobolev_norm_sq: s must be in [0, 4]");
  const Grid& g = *f.grid;
  const auto hat = fft::forward(f);
  const double w = parseval_weight(g);
  const int n = g.points;
  double total = 0.0;
  auto accumulate = [&](std::size_t idx, double k2) {
    const double a2 = std::norm(hat[idx]);
    double mult = 1.0;
    double sum = 1.0; // r = 0 term
    for (int r = 1; r <= s; ++r) {
      mult *= k2;
      sum += mult;
    }
    total += sum * a2;
  };
  if (g.dim == 1) {
    for (int j = 0; j < n; ++j) {
      const double k = deriv_wavenumber(g, j);
      accumulate(static_cast<std::size_t>(j), k * k);
    }
  } else {
    for (int jx = 0; jx < n; ++jx) {
      const double kx = deriv_wavenumber(g, jx);
      for (int jy = 0; jy < n; ++jy) {
        const double ky = deriv_wavenumber(g, jy);
        accumulate(g.index(jx, jy), kx * kx + ky * ky);
      }
    }
  }
  return total * w;
}

double sobolev_norm_sq(const VectorField& v, int s) {
  double total = 0.0;
  for (const auto& c : v.comps) total += sobolev_norm_sq(c, s);
  return total;
}

double integral(const ScalarField& f) {
  double s = 0.0;
  for (double x : f.values) s += x;
  return s * quad_weight(*f.grid);
}

double l2_inner(const ScalarField& a, const ScalarField& b) {
  require_same_grid(*a.grid, *b.grid);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a.values[i] * b.values[i];
  return s * quad_weight(*a.grid);
}

double l2_inner(const VectorField& a, const VectorField& b) {
  require_same_grid(*a.grid, *b.grid);
  double s = 0.0;
  for (int d = 0; d < a.dim(); ++d) s += l2_inner(a.comps[static_cast<std::size_t>(d)], b.comps[static_cast<std::size_t>(d)]);
  return s;
}

}  // namespace ealign
