#include "ealign/reference.hpp"

#include <cmath>
#include <numbers>

namespace ealign::ref {

VectorField convolve_direct(const Kernel& k, const VectorField& f) {
  const Grid& g = *k.grid;
  const int n = g.points;
  const int dim = g.dim;
  const double scale = dim == 1 ? g.spacing : g.spacing * g.spacing;
  VectorField out(f.grid);
  if (dim == 1) {
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
  for (int x0 = 0; x0 < n; ++x0)
    for (int x1 = 0; x1 < n; ++x1) {
      double acc0 = 0.0, acc1 = 0.0;
      for (int y0 = 0; y0 < n; ++y0) {
        const int o0 = (x0 - y0 + n) % n;
        for (int y1 = 0; y1 < n; ++y1) {
          const int o1 = (x1 - y1 + n) % n;
          const std::size_t off = g.index(o0, o1);
          const std::size_t src = g.index(y0, y1);
          acc0 += k.entries[0].values[off] * f.comps[0].values[src] +
                  k.entries[1].values[off] * f.comps[1].values[src];
          acc1 += k.entries[2].values[off] * f.comps[0].values[src] +
                  k.entries[3].values[off] * f.comps[1].values[src];
        }
      }
      out.comps[0].values[g.index(x0, x1)] = acc0 * scale;
      out.comps[1].values[g.index(x0, x1)] = acc1 * scale;
    }
  return out;
}

VectorField alignment_force_direct(const Kernel& k, const VectorField& u,
                                   const ScalarField& w, double coeff) {
  const Grid& g = *k.grid;
  const int n = g.points;
  const int dim = g.dim;
  const double scale = dim == 1 ? g.spacing : g.spacing * g.spacing;
  VectorField out(u.grid);
  if (dim == 1) {
    for (int x = 0; x < n; ++x) {
      double acc = 0.0;
      const double ux = u.comps[0].values[static_cast<std::size_t>(x)];
      for (int y = 0; y < n; ++y) {
        const int off = (x - y + n) % n;
        acc += k.entries[0].values[static_cast<std::size_t>(off)] *
               (ux - u.comps[0].values[static_cast<std::size_t>(y)]) *
               w.values[static_cast<std::size_t>(y)];
      }
      out.comps[0].values[static_cast<std::size_t>(x)] = -coeff * acc * scale;
    }
    return out;
  }
  for (int x0 = 0; x0 < n; ++x0)
    for (int x1 = 0; x1 < n; ++x1) {
      const std::size_t xi = g.index(x0, x1);
      const double ux0 = u.comps[0].values[xi];
      const double ux1 = u.comps[1].values[xi];
      double acc0 = 0.0, acc1 = 0.0;
      for (int y0 = 0; y0 < n; ++y0) {
        const int o0 = (x0 - y0 + n) % n;
        for (int y1 = 0; y1 < n; ++y1) {
          const int o1 = (x1 - y1 + n) % n;
          const std::size_t off = g.index(o0, o1);
          const std::size_t yi = g.index(y0, y1);
          const double d0 = ux0 - u.comps[0].values[yi];
          const double d1 = ux1 - u.comps[1].values[yi];
          const double wy = w.values[yi];
          acc0 += (k.entries[0].values[off] * d0 + k.entries[1].values[off] * d1) * wy;
          acc1 += (k.entries[2].values[off] * d0 + k.entries[3].values[off] * d1) * wy;
        }
      }
      out.comps[0].values[xi] = -coeff * acc0 * scale;
      out.comps[1].values[xi] = -coeff * acc1 * scale;
    }
  return out;
}

fft::Spectrum dft_1d(const fft::Spectrum& in, bool inverse) {
  const std::size_t n = in.size();
  fft::Spectrum out(n, {0.0, 0.0});
  const double sign = inverse ? 1.0 : -1.0;
  for (std::size_t kk = 0; kk < n; ++kk) {
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t j = 0; j < n; ++j) {
      const double ang = sign * 2.0 * std::numbers::pi *
                         static_cast<double>(kk * j % n) / static_cast<double>(n);
      acc += in[j] * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    out[kk] = inverse ? acc / static_cast<double>(n) : acc;
  }
  return out;
}

}  // namespace ealign::ref
