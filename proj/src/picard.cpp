#include "ealign/picard.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ealign/errors.hpp"
#include "ealign/spectral.hpp"

namespace ealign {

namespace {

int step_count(const PicardConfig& cfg) {
  if (!(cfg.T0 >= 0.0) || !(cfg.dt > 0.0))
    throw std::invalid_argument("picard: need T0 >= 0 and dt > 0");
  const double ratio = cfg.T0 / cfg.dt;
  const int steps = static_cast<int>(std::llround(ratio));
  if (std::fabs(ratio - steps) > 1e-9 * std::max(1.0, ratio))
    throw std::invalid_argument("picard: dt must divide T0");
  return steps;
}

SigmaU lincomb(double ca, const SigmaU& a, double cb, const SigmaU& b) {
  return {ealign::lincomb(ca, a.sigma, cb, b.sigma), ealign::lincomb(ca, a.u, cb, b.u)};
}

SigmaU apply_deriv(double ca, const SigmaU& a, double cb, const SigmaU& b, double cd,
                   const LinearRhs& d) {
  SigmaU out = lincomb(ca, a, cb, b);
  out.sigma = ealign::lincomb(1.0, out.sigma, cd, d.d_sigma);
  out.u = ealign::lincomb(1.0, out.u, cd, d.d_u);
  return out;
}

void dealias(SigmaU& s) {
  dealias_inplace(s.sigma);
  dealias_inplace(s.u);
}

}  // namespace

LinearRhs picard_linear_rhs(const SigmaU& unknown, const SigmaU& coeff,
                            const EosParams& eos, const Kernel& k) {
  const GridPtr grid = unknown.sigma.grid;
  const int dim = unknown.u.dim();
  const std::size_t n = grid->cell_count();
  const double kb = eos.kappa_bar;
  const double inv_nu = 1.0 / eos.nu;
  const double inv_tau = eos.inv_tau();

  const VectorField grad_sig = spectral_grad(unknown.sigma);
  std::vector<VectorField> grad_u;
  grad_u.reserve(static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i) grad_u.push_back(spectral_grad(unknown.u.comps[static_cast<std::size_t>(i)]));
  ScalarField div_u(grid);
#pragma omp parallel for if (n >= kParallelThreshold)
  for (std::size_t c = 0; c < n; ++c) {
    double d = 0.0;
    for (int i = 0; i < dim; ++i) d += grad_u[static_cast<std::size_t>(i)].comps[static_cast<std::size_t>(i)].values[c];
    div_u.values[c] = d;
  }

  // alignment forcing built entirely from the frozen coefficients
  const ScalarField w = alignment_weight(coeff.sigma, eos);
  const VectorField force = alignment_force(k, coeff.u, w, eos.a_sym);

  LinearRhs out;
  out.d_sigma = ScalarField(grid);
#pragma omp parallel for if (n >= kParallelThreshold)
  for (std::size_t c = 0; c < n; ++c) {
    double adv = 0.0;
    for (int j = 0; j < dim; ++j)
      adv += coeff.u.comps[static_cast<std::size_t>(j)].values[c] *
             grad_sig.comps[static_cast<std::size_t>(j)].values[c];
    out.d_sigma.values[c] =
        -kb * div_u.values[c] - adv - inv_nu * coeff.sigma.values[c] * div_u.values[c];
  }

  out.d_u = VectorField(grid);
  for (int i = 0; i < dim; ++i) {
    auto& dv = out.d_u.comps[static_cast<std::size_t>(i)];
#pragma omp parallel for if (n >= kParallelThreshold)
    for (std::size_t c = 0; c < n; ++c) {
      double adv = 0.0;
      for (int j = 0; j < dim; ++j)
        adv += coeff.u.comps[static_cast<std::size_t>(j)].values[c] *
               grad_u[static_cast<std::size_t>(i)].comps[static_cast<std::size_t>(j)].values[c];
      const double gs = grad_sig.comps[static_cast<std::size_t>(i)].values[c];
      dv.values[c] = -kb * gs - inv_tau * unknown.u.comps[static_cast<std::size_t>(i)].values[c] -
                     adv - inv_nu * coeff.sigma.values[c] * gs +
                     force.comps[static_cast<std::size_t>(i)].values[c];
    }
  }
  return out;
}

IterateTrajectory picard_zeroth(const SigmaU& init, const PicardConfig& cfg) {
  const int steps = step_count(cfg);
  IterateTrajectory traj;
  traj.dt = cfg.dt;
  traj.iterate_index = 0;
  traj.states.assign(static_cast<std::size_t>(steps) + 1, init);
  traj.first_stage.assign(static_cast<std::size_t>(steps), init);
  traj.second_stage.assign(static_cast<std::size_t>(steps), init);
  return traj;
}

IterateTrajectory picard_iterate(const IterateTrajectory& prev, const SigmaU& init,
                                 const EosParams& eos, const Kernel& k,
                                 const PicardConfig& cfg, int sobolev_s) {
  const int steps = step_count(cfg);
  if (prev.states.size() != static_cast<std::size_t>(steps) + 1)
    throw std::invalid_argument("picard_iterate: previous iterate lives on a different mesh");

  IterateTrajectory traj;
  traj.dt = cfg.dt;
  traj.iterate_index = prev.iterate_index + 1;
  traj.states.reserve(static_cast<std::size_t>(steps) + 1);
  traj.first_stage.reserve(static_cast<std::size_t>(steps));
  traj.second_stage.reserve(static_cast<std::size_t>(steps));
  SigmaU y = init;
  dealias(y);
  traj.states.push_back(y);

  const double dt = cfg.dt;
  for (int i = 0; i < steps; ++i) {
    const SigmaU& c0 = prev.states[static_cast<std::size_t>(i)];
    const SigmaU& c1 = prev.first_stage[static_cast<std::size_t>(i)];
    const SigmaU& c2 = prev.second_stage[static_cast<std::size_t>(i)];

    const LinearRhs k1 = picard_linear_rhs(y, c0, eos, k);
    SigmaU y1 = apply_deriv(1.0, y, 0.0, y, dt, k1);
    dealias(y1);
    const LinearRhs k2 = picard_linear_rhs(y1, c1, eos, k);
    SigmaU y2 = apply_deriv(0.75, y, 0.25, y1, 0.25 * dt, k2);
    dealias(y2);
    const LinearRhs k3 = picard_linear_rhs(y2, c2, eos, k);
    y = apply_deriv(1.0 / 3.0, y, 2.0 / 3.0, y2, 2.0 / 3.0 * dt, k3);
    dealias(y);

    if (!all_finite(y.sigma) || !all_finite(y.u))
      throw NumericalError("picard_iterate: non-finite state at step " + std::to_string(i + 1));
    traj.first_stage.push_back(std::move(y1));
    traj.second_stage.push_back(std::move(y2));
    traj.states.push_back(y);
  }

  double sup_sigma = 0.0, sup_u = 0.0;
  for (const auto& s : traj.states) {
    sup_sigma = std::max(sup_sigma, std::sqrt(sobolev_norm_sq(s.sigma, sobolev_s)));
    sup_u = std::max(sup_u, std::sqrt(sobolev_norm_sq(s.u, sobolev_s)));
  }
  traj.sup_hs = sup_sigma + sup_u;
  const double bound = cfg.M_bound > 0 ? cfg.M_bound : default_m_bound(init, sobolev_s);
  traj.bound_warning = traj.sup_hs > bound;
  return traj;
}

PicardResult picard_run(const SigmaU& init, const EosParams& eos, const Kernel& k,
                        const PicardConfig& cfg, int sobolev_s) {
  if (cfg.max_iterations < 2)
    throw std::invalid_argument("picard_run: need at least 2 iterations");
  PicardResult res;
  res.report.T0 = cfg.T0;
  res.report.dt = cfg.dt;
  res.iterates.push_back(picard_zeroth(init, cfg));
  for (int it = 1; it <= cfg.max_iterations; ++it) {
    res.iterates.push_back(
        picard_iterate(res.iterates.back(), init, eos, k, cfg, sobolev_s));
    const auto& a = res.iterates[res.iterates.size() - 2].states;
    const auto& b = res.iterates.back().states;
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const ScalarField ds = lincomb(1.0, b[i].sigma, -1.0, a[i].sigma);
      const VectorField du = lincomb(1.0, b[i].u, -1.0, a[i].u);
      d = std::max(d, lp_norm(ds, 2.0) + lp_norm(du, 2.0));
    }
    res.report.d.push_back(d);
  }
  for (std::size_t i = 0; i + 1 < res.report.d.size(); ++i)
    res.report.ratios.push_back(res.report.d[i] > 0 ? res.report.d[i + 1] / res.report.d[i] : 0.0);
  res.report.floor = res.report.d.empty() ? 0.0 : 1e-12 * res.report.d.front();
  for (std::size_t i = 0; i < res.report.d.size(); ++i)
    if (res.report.d[i] <= res.report.floor) {
      res.report.converged_at = static_cast<int>(i);
      break;
    }
  int consecutive = 0;
  for (std::size_t i = 0; i < res.report.ratios.size(); ++i) {
    const bool above_floor = res.report.d[i] > res.report.floor;
    consecutive = above_floor && res.report.ratios[i] > 1.0 ? consecutive + 1 : 0;
    if (consecutive >= 2) res.report.non_contraction = true;
  }
  return res;
}

double default_m_bound(const SigmaU& init, int sobolev_s) {
  return std::sqrt(sobolev_norm_sq(init.sigma, sobolev_s) +
                   sobolev_norm_sq(init.u, sobolev_s) + 1.0);
}

double auto_pick_t0(const SigmaU& init, const EosParams& eos, const Kernel& k,
                    int sobolev_s, double t_start, int steps_per_iterate,
                    int probe_iterations, double target_ratio) {
  double T = t_start;
  for (int attempt = 0; attempt < 24; ++attempt) {
    PicardConfig cfg;
    cfg.T0 = T;
    cfg.dt = T / steps_per_iterate;
    cfg.max_iterations = probe_iterations;
    bool ok = true;
    try {
      const PicardResult res = picard_run(init, eos, k, cfg, sobolev_s);
      for (std::size_t i = 2; i < res.report.ratios.size(); ++i)
        if (res.report.d[i] > res.report.floor)
          ok = ok && res.report.ratios[i] <= target_ratio;
    } catch (const NumericalError&) {
      ok = false;
    }
    if (ok) return T;
    T *= 0.5;
  }
  throw NumericalError("auto_pick_t0: no contracting horizon found");
}

}  // namespace ealign
