#pragma once

// Shared helpers for the test suites: deterministic random fields and the
// finite-difference discretization used as an independent check on the
// spectral right-hand sides.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "ealign/config.hpp"
#include "ealign/dynamics.hpp"
#include "ealign/eos.hpp"
#include "ealign/kernel.hpp"
#include "ealign/reference.hpp"
#include "ealign/spectral.hpp"

namespace testsup {

using namespace ealign;

inline constexpr double kPi = std::numbers::pi;

inline ScalarField fill(GridPtr g, const std::function<double(double, double)>& fn) {
  ScalarField f(g);
  const int n = g->points;
  if (g->dim == 1) {
    for (int j = 0; j < n; ++j) f.values[static_cast<std::size_t>(j)] = fn(g->coord(j), 0.0);
    return f;
  }
  for (int ix = 0; ix < n; ++ix)
    for (int iy = 0; iy < n; ++iy)
      f.values[g->index(ix, iy)] = fn(g->coord(ix), g->coord(iy));
  return f;
}

inline ScalarField random_values(GridPtr g, double lo, double hi, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  ScalarField f(g);
  for (auto& v : f.values) v = dist(rng);
  return f;
}

inline VectorField random_band_vector(GridPtr g, int kmin, int kmax, double amp,
                                      std::uint64_t seed) {
  VectorField u(g);
  for (int d = 0; d < g->dim; ++d)
    u.comps[static_cast<std::size_t>(d)] =
        random_band_field(g, kmin, kmax, amp, seed, static_cast<std::uint64_t>(d) + 7);
  return u;
}

inline double max_abs_diff(const ScalarField& a, const ScalarField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::fabs(a.values[i] - b.values[i]));
  return m;
}

inline double max_abs_diff(const VectorField& a, const VectorField& b) {
  double m = 0.0;
  for (int d = 0; d < a.dim(); ++d)
    m = std::max(m, max_abs_diff(a.comps[static_cast<std::size_t>(d)],
                                 b.comps[static_cast<std::size_t>(d)]));
  return m;
}

// ---- second-order centered finite differences on the periodic lattice ----

inline ScalarField fd_deriv(const ScalarField& f, int axis) {
  const Grid& g = *f.grid;
  const int n = g.points;
  const double inv2h = 1.0 / (2.0 * g.spacing);
  ScalarField out(f.grid);
  if (g.dim == 1) {
    for (int j = 0; j < n; ++j)
      out.values[static_cast<std::size_t>(j)] =
          (f.values[static_cast<std::size_t>((j + 1) % n)] -
           f.values[static_cast<std::size_t>((j - 1 + n) % n)]) *
          inv2h;
    return out;
  }
  for (int ix = 0; ix < n; ++ix)
    for (int iy = 0; iy < n; ++iy) {
      const int xp = axis == 0 ? (ix + 1) % n : ix;
      const int xm = axis == 0 ? (ix - 1 + n) % n : ix;
      const int yp = axis == 1 ? (iy + 1) % n : iy;
      const int ym = axis == 1 ? (iy - 1 + n) % n : iy;
      out.values[g.index(ix, iy)] = (f.values[g.index(xp, yp)] - f.values[g.index(xm, ym)]) * inv2h;
    }
  return out;
}

inline VectorField fd_grad(const ScalarField& f) {
  VectorField out(f.grid);
  for (int d = 0; d < f.grid->dim; ++d) out.comps[static_cast<std::size_t>(d)] = fd_deriv(f, d);
  return out;
}

inline ScalarField fd_div(const VectorField& v) {
  ScalarField out(v.grid);
  for (int d = 0; d < v.dim(); ++d) {
    const ScalarField dd = fd_deriv(v.comps[static_cast<std::size_t>(d)], d);
    for (std::size_t i = 0; i < out.size(); ++i) out.values[i] += dd.values[i];
  }
  return out;
}

// Same formulas as rhs_primitive but with FD derivatives and the serial
// double-sum alignment force: an independent discretization of the same
// continuum operator, so the two agree to O(h^2).
inline StateDeriv fd_rhs_primitive(const SimState& s, const EosParams& eos,
                                   const Kernel& k) {
  const ScalarField& rho = s.density_like;
  const VectorField& u = s.velocity;
  const int dim = u.dim();
  const std::size_t n = rho.size();

  VectorField momentum(u.grid);
  for (int i = 0; i < dim; ++i)
    momentum.comps[static_cast<std::size_t>(i)] =
        pointwise_product(rho, u.comps[static_cast<std::size_t>(i)]);
  ScalarField d_rho = fd_div(momentum);
  for (auto& v : d_rho.values) v = -v;

  const ScalarField p = pressure(rho, eos);
  const VectorField grad_p = fd_grad(p);
  std::vector<VectorField> grads;
  for (int i = 0; i < dim; ++i) grads.push_back(fd_grad(u.comps[static_cast<std::size_t>(i)]));
  const VectorField force = ref::alignment_force_direct(k, u, rho, eos.a);
  const double inv_tau = eos.inv_tau();

  StateDeriv out;
  out.d_density = std::move(d_rho);
  out.d_velocity = VectorField(u.grid);
  for (int i = 0; i < dim; ++i)
    for (std::size_t c = 0; c < n; ++c) {
      double adv = 0.0;
      for (int j = 0; j < dim; ++j)
        adv += u.comps[static_cast<std::size_t>(j)].values[c] *
               grads[static_cast<std::size_t>(i)].comps[static_cast<std::size_t>(j)].values[c];
      out.d_velocity.comps[static_cast<std::size_t>(i)].values[c] =
          -adv - grad_p.comps[static_cast<std::size_t>(i)].values[c] / rho.values[c] -
          inv_tau * u.comps[static_cast<std::size_t>(i)].values[c] +
          force.comps[static_cast<std::size_t>(i)].values[c];
    }
  return out;
}

}  // namespace testsup
