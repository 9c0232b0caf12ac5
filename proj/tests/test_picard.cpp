#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "ealign/dynamics.hpp"
#include "ealign/picard.hpp"
#include "ealign/spectral.hpp"
#include "support.hpp"

using namespace ealign;
using testsup::fill;
using testsup::kPi;

namespace {

EosParams reference_eos() { return make_eos(1.0, 2.0, 0.5, 2.0, 0.4); }

Kernel reference_kernel(GridPtr g) {
  KernelSpec s;
  s.kind = KernelKind::isotropic;
  s.profile = KernelProfile::top_hat;
  s.radius = 0.25;
  s.amplitude = 1.0;
  return build_kernel(s, g);
}

SigmaU single_mode_init(GridPtr g, double amp, int mode) {
  SigmaU init;
  init.sigma = fill(g, [&](double x, double) { return amp * std::sin(mode * x); });
  init.u = VectorField(g);
  init.u.comps[0] = fill(g, [&](double x, double) { return amp * std::sin(mode * x); });
  return init;
}

// Exact evolution of one Fourier mode of the damped linear acoustic system
//   sigma_t = -i kb k u,  u_t = -i kb k sigma - u/tau (+ linear alignment),
// via the closed-form 2x2 matrix exponential.
struct ModeSolution {
  std::complex<double> sigma, u;
};
ModeSolution damped_acoustics_mode(std::complex<double> s0, std::complex<double> u0,
                                   double kb, double kwave, double friction, double t) {
  // y' = M y with M = [[0, -i kb k], [-i kb k, -friction]]
  const std::complex<double> ik(0.0, kb * kwave);
  const double half = 0.5 * friction;
  const std::complex<double> disc = std::sqrt(std::complex<double>(half * half - kb * kb * kwave * kwave, 0.0));
  const std::complex<double> l1 = -half + disc;
  const std::complex<double> l2 = -half - disc;
  // eigenvectors (1, -l/ik) since row 1 gives l*sigma = -ik*u
  const std::complex<double> v1 = l1 / (-ik);
  const std::complex<double> v2 = l2 / (-ik);
  // solve [1 1; v1 v2] [c1; c2] = [s0; u0]
  const std::complex<double> det = v2 - v1;
  const std::complex<double> c1 = (v2 * s0 - u0) / det;
  const std::complex<double> c2 = (u0 - v1 * s0) / det;
  ModeSolution out;
  out.sigma = c1 * std::exp(l1 * t) + c2 * std::exp(l2 * t);
  out.u = c1 * v1 * std::exp(l1 * t) + c2 * v2 * std::exp(l2 * t);
  return out;
}

}  // namespace

TEST_CASE("zeroth approximation is constant in time") {
  const auto g = make_grid(1, 2 * kPi, 64);
  const SigmaU init = single_mode_init(g, 0.01, 1);
  PicardConfig cfg;
  cfg.T0 = 0.25;
  cfg.dt = 0.25 / 16;
  const IterateTrajectory traj = picard_zeroth(init, cfg);
  CHECK(traj.states.size() == 17);
  for (const auto& s : traj.states) {
    CHECK(testsup::max_abs_diff(s.sigma, init.sigma) == 0.0);
    CHECK(testsup::max_abs_diff(s.u, init.u) == 0.0);
  }
  PicardConfig degenerate;
  degenerate.T0 = 0.0;
  degenerate.dt = 0.1;
  CHECK(picard_zeroth(init, degenerate).states.size() == 1);
}

TEST_CASE("zero data is a fixed point of the iteration") {
  const auto g = make_grid(1, 2 * kPi, 32);
  const auto eos = reference_eos();
  const auto k = reference_kernel(g);
  SigmaU zero;
  zero.sigma = ScalarField(g);
  zero.u = VectorField(g);
  PicardConfig cfg;
  cfg.T0 = 0.2;
  cfg.dt = 0.2 / 8;
  cfg.max_iterations = 3;
  const PicardResult res = picard_run(zero, eos, k, cfg, 2);
  for (double d : res.report.d) CHECK(d == 0.0);
  CHECK_FALSE(res.report.non_contraction);
}

TEST_CASE("iterate against the per-mode matrix exponential") {
  // With the previous iterate frozen at (0, 0) the linear system is exactly
  // damped acoustics: no transport, no alignment forcing.
  const auto g = make_grid(1, 2 * kPi, 64);
  const auto eos = reference_eos();
  const auto k = reference_kernel(g);
  const int mode = 1;
  const SigmaU init = single_mode_init(g, 0.01, mode);

  PicardConfig cfg;
  cfg.T0 = 0.5;
  cfg.dt = 0.5 / 256;
  SigmaU zero;
  zero.sigma = ScalarField(g);
  zero.u = VectorField(g);
  IterateTrajectory prev = picard_zeroth(zero, cfg);
  prev.states.assign(prev.states.size(), zero);
  const IterateTrajectory traj = picard_iterate(prev, init, eos, k, cfg, 2);

  // project the final slice onto the initial mode and compare
  const auto shat = fft::forward(traj.states.back().sigma);
  const auto uhat = fft::forward(traj.states.back().u.comps[0]);
  const auto shat0 = fft::forward(init.sigma);
  const auto uhat0 = fft::forward(init.u.comps[0]);
  const ModeSolution expect =
      damped_acoustics_mode(shat0[mode], uhat0[mode], eos.kappa_bar,
                            g->wavenumbers[mode], eos.inv_tau(), cfg.T0);
  CHECK(std::abs(shat[mode] - expect.sigma) <= 1e-8 * static_cast<double>(g->points));
  CHECK(std::abs(uhat[mode] - expect.u) <= 1e-8 * static_cast<double>(g->points));

  // energy of the linear system never grows
  double prev_e = 1e300;
  for (const auto& s : traj.states) {
    const double e = lp_norm(s.sigma, 2.0) + lp_norm(s.u, 2.0);
    CHECK(e <= prev_e * (1.0 + 1e-12) + 1e-14);
    prev_e = e;
  }
}

TEST_CASE("uniform bound monitor stays below the derived level") {
  const auto g = make_grid(1, 2 * kPi, 128);
  const auto eos = reference_eos();
  const auto k = reference_kernel(g);
  const SigmaU init = single_mode_init(g, 0.01, 1);
  PicardConfig cfg;
  cfg.T0 = 0.25;
  cfg.dt = 0.25 / 32;
  cfg.max_iterations = 3;
  const PicardResult res = picard_run(init, eos, k, cfg, 2);
  const double bound = default_m_bound(init, 2);
  for (std::size_t i = 1; i < res.iterates.size(); ++i) {
    CHECK(res.iterates[i].sup_hs <= bound);
    CHECK_FALSE(res.iterates[i].bound_warning);
  }
}

TEST_CASE("alignment forcing cancels for spatially uniform coefficients") {
  const auto g = make_grid(1, 2 * kPi, 64);
  const auto eos = reference_eos();
  const auto k = reference_kernel(g);
  SigmaU coeff;
  coeff.sigma = random_band_field(g, 1, 5, 0.05, 3, 0);
  coeff.u = VectorField(g);
  coeff.u.comps[0] = ScalarField(g, 0.4); // constant in x
  SigmaU unknown;
  unknown.sigma = random_band_field(g, 1, 5, 0.05, 4, 0);
  unknown.u = testsup::random_band_vector(g, 1, 5, 0.05, 5);

  const LinearRhs with = picard_linear_rhs(unknown, coeff, eos, k);
  // strip the alignment term by redoing the rhs with amplitude-zero kernel
  KernelSpec off = k.spec;
  off.amplitude = 0.0;
  const Kernel k_off = build_kernel(off, g);
  const LinearRhs without = picard_linear_rhs(unknown, coeff, eos, k_off);
  CHECK(testsup::max_abs_diff(with.d_u, without.d_u) <= 1e-13);
}

TEST_CASE("per-slice energy identity of the linear system") {
  const auto g = make_grid(1, 2 * kPi, 64);
  const auto eos = reference_eos();
  const auto k = reference_kernel(g);
  const SigmaU init = single_mode_init(g, 0.01, 1);
  PicardConfig cfg;
  cfg.T0 = 0.25;
  cfg.dt = 0.25 / 32;
  cfg.max_iterations = 2;
  const PicardResult res = picard_run(init, eos, k, cfg, 2);
  const IterateTrajectory& prev = res.iterates[1];
  const IterateTrajectory& cur = res.iterates[2];

  for (std::size_t i = 0; i < cur.states.size(); i += 8) {
    const SigmaU& y = cur.states[i];
    const SigmaU& c = prev.states[i];
    const LinearRhs d = picard_linear_rhs(y, c, eos, k);
    // (1/2) d/dt(||sigma||^2 + ||u||^2) + (1/tau)||u||^2, via the rhs
    const double lhs = l2_inner(y.sigma, d.d_sigma) + l2_inner(y.u, d.d_u) +
                       eos.inv_tau() * l2_inner(y.u, y.u);

    // independent evaluation of the three flux integrals; the acoustic terms
    // integrate to zero on the torus
    const VectorField grad_sig = spectral_grad(y.sigma);
    const ScalarField div_u = spectral_div(y.u);
    const VectorField grad_u = spectral_grad(y.u.comps[0]);
    double i1 = 0.0, i2 = 0.0;
    for (std::size_t c2 = 0; c2 < y.sigma.size(); ++c2) {
      i1 -= c.u.comps[0].values[c2] * (grad_sig.comps[0].values[c2] * y.sigma.values[c2] +
                                       grad_u.comps[0].values[c2] * y.u.comps[0].values[c2]);
      i2 -= (1.0 / eos.nu) * c.sigma.values[c2] *
            (div_u.values[c2] * y.sigma.values[c2] +
             grad_sig.comps[0].values[c2] * y.u.comps[0].values[c2]);
    }
    i1 *= g->spacing;
    i2 *= g->spacing;
    const ScalarField w = alignment_weight(c.sigma, eos);
    const VectorField force = alignment_force(k, c.u, w, eos.a_sym);
    const double i3 = l2_inner(y.u, force);

    const double rhs_val = i1 + i2 + i3;
    const double scale = std::max({std::fabs(lhs), std::fabs(rhs_val), 1e-10});
    CHECK(std::fabs(lhs - rhs_val) <= 1e-6 * scale);
  }
}

TEST_CASE("contraction and limit identification") {
  const auto g = make_grid(1, 2 * kPi, 128);
  const auto eos = reference_eos();
  const auto k = reference_kernel(g);
  const SigmaU init = single_mode_init(g, 0.01, 1);

  const double T0 = auto_pick_t0(init, eos, k, 2, 0.5, 32, 5);
  CHECK(T0 > 0.0);

  PicardConfig cfg;
  cfg.T0 = T0;
  cfg.dt = T0 / 64;
  cfg.max_iterations = 6;
  const PicardResult res = picard_run(init, eos, k, cfg, 2);
  CHECK_FALSE(res.report.non_contraction);
  for (std::size_t i = 2; i < res.report.ratios.size(); ++i)
    CHECK(res.report.ratios[i] <= 0.5);

  // the difference series is summable in practice
  double total = 0.0;
  for (double d : res.report.d) total += d;
  CHECK(std::isfinite(total));
  CHECK(res.report.d.back() <= 0.51 * res.report.d[res.report.d.size() - 2]);

  // limit identification: compare against the nonlinear evolution
  SimState nl;
  nl.form = Formulation::symmetrized;
  nl.density_like = init.sigma;
  nl.velocity = init.u;
  const auto rhs = [&](const SimState& st) { return rhs_symmetrized(st, eos, k); };
  const auto nonlinear = integrate_fixed(nl, rhs, cfg.dt, 64, true);

  const auto& last = res.iterates.back().states;
  double dist = 0.0;
  for (std::size_t i = 0; i < last.size(); ++i) {
    const ScalarField ds = lincomb(1.0, last[i].sigma, -1.0, nonlinear[i].density_like);
    const VectorField du = lincomb(1.0, last[i].u, -1.0, nonlinear[i].velocity);
    dist = std::max(dist, lp_norm(ds, 2.0) + lp_norm(du, 2.0));
  }
  CHECK(dist <= 10.0 * res.report.d.back());
}
