#include "ealign/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ealign/errors.hpp"
#include "ealign/spectral.hpp"

namespace ealign {

const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::completed: return "completed";
    case RunStatus::vacuum: return "vacuum";
    case RunStatus::nan: return "nan";
    case RunStatus::blowup: return "blowup";
  }
  return "?";
}

const char* to_string(Formulation f) {
  return f == Formulation::primitive ? "primitive" : "symmetrized";
}

namespace {

void require_form(const SimState& s, Formulation f, const char* who) {
  if (s.form != f)
    throw std::invalid_argument(std::string(who) + ": state has the wrong formulation");
}

// grads[i] = spectral gradient of u_i; also returns div u assembled from the
// same transforms.
struct VelocityDerivs {
  std::vector<VectorField> grads;
  ScalarField div;
};

VelocityDerivs velocity_derivs(const VectorField& u) {
  VelocityDerivs out;
  const int dim = u.dim();
  out.grads.reserve(static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i) out.grads.push_back(spectral_grad(u.comps[static_cast<std::size_t>(i)]));
  out.div = ScalarField(u.grid);
  const std::size_t n = u.grid->cell_count();
#pragma omp parallel for if (n >= kParallelThreshold)
  for (std::size_t c = 0; c < n; ++c) {
    double d = 0.0;
    for (int i = 0; i < dim; ++i) d += out.grads[static_cast<std::size_t>(i)].comps[static_cast<std::size_t>(i)].values[c];
    out.div.values[c] = d;
  }
  return out;
}

}  // namespace

StateDeriv rhs_primitive(const SimState& s, const EosParams& eos, const Kernel& k) {
  require_form(s, Formulation::primitive, "rhs_primitive");
  const ScalarField& rho = s.density_like;
  const VectorField& u = s.velocity;
  const int dim = u.dim();
  const std::size_t n = rho.size();

  // mass equation in divergence form: exact discrete conservation
  VectorField momentum(u.grid);
  for (int i = 0; i < dim; ++i)
    momentum.comps[static_cast<std::size_t>(i)] = pointwise_product(rho, u.comps[static_cast<std::size_t>(i)]);
  ScalarField d_rho = spectral_div(momentum);
#pragma omp parallel for if (n >= kParallelThreshold)
  for (std::size_t c = 0; c < n; ++c) d_rho.values[c] = -d_rho.values[c];

  const ScalarField p = pressure(rho, eos);
  const VectorField grad_p = spectral_grad(p);
  const VelocityDerivs ud = velocity_derivs(u);
  const VectorField force = alignment_force(k, u, rho, eos.a);
  const double inv_tau = eos.inv_tau();

  StateDeriv out;
  out.d_density = std::move(d_rho);
  out.d_velocity = VectorField(u.grid);
  for (int i = 0; i < dim; ++i) {
    auto& dv = out.d_velocity.comps[static_cast<std::size_t>(i)];
#pragma omp parallel for if (n >= kParallelThreshold)
    for (std::size_t c = 0; c < n; ++c) {
      double adv = 0.0;
      for (int j = 0; j < dim; ++j)
        adv += u.comps[static_cast<std::size_t>(j)].values[c] *
               ud.grads[static_cast<std::size_t>(i)].comps[static_cast<std::size_t>(j)].values[c];
      dv.values[c] = -adv - grad_p.comps[static_cast<std::size_t>(i)].values[c] / rho.values[c] -
                     inv_tau * u.comps[static_cast<std::size_t>(i)].values[c] +
                     force.comps[static_cast<std::size_t>(i)].values[c];
    }
  }
  return out;
}

StateDeriv rhs_symmetrized(const SimState& s, const EosParams& eos, const Kernel& k) {
  require_form(s, Formulation::symmetrized, "rhs_symmetrized");
  const ScalarField& sig = s.density_like;
  const VectorField& u = s.velocity;
  const int dim = u.dim();
  const std::size_t n = sig.size();

  const ScalarField w = alignment_weight(sig, eos); // checks positivity
  const VectorField grad_sig = spectral_grad(sig);
  const VelocityDerivs ud = velocity_derivs(u);
  const VectorField force = alignment_force(k, u, w, eos.a_sym);
  const double kb = eos.kappa_bar;
  const double inv_nu = 1.0 / eos.nu;
  const double inv_tau = eos.inv_tau();

  StateDeriv out;
  out.d_density = ScalarField(sig.grid);
#pragma omp parallel for if (n >= kParallelThreshold)
  for (std::size_t c = 0; c < n; ++c) {
    double adv = 0.0;
    for (int j = 0; j < dim; ++j)
      adv += u.comps[static_cast<std::size_t>(j)].values[c] *
             grad_sig.comps[static_cast<std::size_t>(j)].values[c];
    out.d_density.values[c] =
        -kb * ud.div.values[c] - adv - inv_nu * sig.values[c] * ud.div.values[c];
  }

  out.d_velocity = VectorField(u.grid);
  for (int i = 0; i < dim; ++i) {
    auto& dv = out.d_velocity.comps[static_cast<std::size_t>(i)];
#pragma omp parallel for if (n >= kParallelThreshold)
    for (std::size_t c = 0; c < n; ++c) {
      double adv = 0.0;
      for (int j = 0; j < dim; ++j)
        adv += u.comps[static_cast<std::size_t>(j)].values[c] *
               ud.grads[static_cast<std::size_t>(i)].comps[static_cast<std::size_t>(j)].values[c];
      const double gs = grad_sig.comps[static_cast<std::size_t>(i)].values[c];
      dv.values[c] = -kb * gs - inv_tau * u.comps[static_cast<std::size_t>(i)].values[c] - adv -
                     inv_nu * sig.values[c] * gs +
                     force.comps[static_cast<std::size_t>(i)].values[c];
    }
  }
  return out;
}

StateDeriv rhs_llf(const SimState& s, const EosParams& eos, const Kernel& k) {
  require_form(s, Formulation::primitive, "rhs_llf");
  const Grid& g = *s.density_like.grid;
  const ScalarField& rho = s.density_like;
  const VectorField& u = s.velocity;
  const int n = g.points;
  const int dim = g.dim;
  const double h = g.spacing;
  if (!(min_value(rho) > kVacuumFloor))
    throw AdmissibilityError("llf: density at/below the vacuum floor");

  const VectorField force = alignment_force(k, u, rho, eos.a);
  const double inv_tau = eos.inv_tau();

  // conservative variables per cell: q[0] = rho, q[1..dim] = momentum
  const std::size_t cells = g.cell_count();
  const int nq = dim + 1;
  std::vector<double> q(cells * static_cast<std::size_t>(nq));
  std::vector<double> prs(cells), speed(cells);
#pragma omp parallel for if (cells >= kParallelThreshold)
  for (std::size_t c = 0; c < cells; ++c) {
    const double r = rho.values[c];
    q[c * nq] = r;
    double umag2 = 0.0;
    for (int d = 0; d < dim; ++d) {
      const double uv = u.comps[static_cast<std::size_t>(d)].values[c];
      q[c * nq + 1 + d] = r * uv;
      umag2 += uv * uv;
    }
    prs[c] = eos.A * std::pow(r, eos.gamma);
    speed[c] = std::sqrt(umag2) + sound_speed_value(r, eos);
  }

  auto flux = [&](std::size_t c, int axis, double* f) {
    const double r = q[c * nq];
    const double un = q[c * nq + 1 + axis] / r;
    f[0] = q[c * nq + 1 + axis];
    for (int d = 0; d < dim; ++d) f[1 + d] = q[c * nq + 1 + d] * un;
    f[1 + axis] += prs[c];
  };

  std::vector<double> dq(cells * static_cast<std::size_t>(nq), 0.0);
  for (int axis = 0; axis < dim; ++axis) {
#pragma omp parallel for if (cells >= kParallelThreshold)
    for (std::size_t c = 0; c < cells; ++c) {
      // neighbors along this axis
      int ix = dim == 1 ? static_cast<int>(c) : static_cast<int>(c) / n;
      int iy = dim == 1 ? 0 : static_cast<int>(c) % n;
      auto at = [&](int dx) {
        int jx = ix, jy = iy;
        if (axis == 0)
          jx = (ix + dx + n) % n;
        else
          jy = (iy + dx + n) % n;
        return g.index(jx, jy);
      };
      const std::size_t cl = at(-1), cr = at(+1);
      double fl[3], fc[3], fr[3];
      flux(cl, axis, fl);
      flux(c, axis, fc);
      flux(cr, axis, fr);
      const double a_r = std::max(speed[c], speed[cr]);
      const double a_l = std::max(speed[cl], speed[c]);
      for (int m = 0; m < nq; ++m) {
        const double f_right = 0.5 * (fc[m] + fr[m]) - 0.5 * a_r * (q[cr * nq + m] - q[c * nq + m]);
        const double f_left = 0.5 * (fl[m] + fc[m]) - 0.5 * a_l * (q[c * nq + m] - q[cl * nq + m]);
        dq[c * nq + m] += -(f_right - f_left) / h;
      }
    }
  }

  StateDeriv out;
  out.d_density = ScalarField(s.density_like.grid);
  out.d_velocity = VectorField(s.velocity.grid);
#pragma omp parallel for if (cells >= kParallelThreshold)
  for (std::size_t c = 0; c < cells; ++c) {
    const double r = rho.values[c];
    const double drho = dq[c * nq];
    out.d_density.values[c] = drho;
    for (int d = 0; d < dim; ++d) {
      const double uv = u.comps[static_cast<std::size_t>(d)].values[c];
      const double dm = dq[c * nq + 1 + d] - inv_tau * r * uv +
                        r * force.comps[static_cast<std::size_t>(d)].values[c];
      out.d_velocity.comps[static_cast<std::size_t>(d)].values[c] = (dm - uv * drho) / r;
    }
  }
  return out;
}

double cfl_dt(const SimState& s, const EosParams& eos, const SchemeConfig& cfg) {
  const Grid& g = *s.density_like.grid;
  const std::size_t n = g.cell_count();
  const int dim = g.dim;
  double wave = 0.0;
#pragma omp parallel for reduction(max : wave) if (n >= kParallelThreshold)
  for (std::size_t c = 0; c < n; ++c) {
    double umag2 = 0.0;
    for (int d = 0; d < dim; ++d) {
      const double uv = s.velocity.comps[static_cast<std::size_t>(d)].values[c];
      umag2 += uv * uv;
    }
    const double kap = s.form == Formulation::primitive
                           ? sound_speed_value(s.density_like.values[c], eos)
                           : s.density_like.values[c] / eos.nu + eos.kappa_bar;
    wave = std::max(wave, std::sqrt(umag2) + kap);
  }
  if (!std::isfinite(wave)) throw NumericalError("cfl_dt: wave speed is not finite");
  const double dt = cfg.cfl * g.spacing / wave;
  return std::min(cfg.dt_max, dt);
}

namespace {

SimState state_lincomb(double ca, const SimState& a, double cb, const SimState& b,
                       double cd, const StateDeriv& d) {
  SimState out;
  out.form = a.form;
  out.density_like = lincomb(ca, a.density_like, cb, b.density_like);
  out.density_like = lincomb(1.0, out.density_like, cd, d.d_density);
  out.velocity = lincomb(ca, a.velocity, cb, b.velocity);
  out.velocity = lincomb(1.0, out.velocity, cd, d.d_velocity);
  return out;
}

void maybe_dealias(SimState& s, bool enabled) {
  if (!enabled) return;
  dealias_inplace(s.density_like);
  dealias_inplace(s.velocity);
}

}  // namespace

SimState step_ssprk3(const SimState& s, double dt, const RhsFn& rhs, bool dealias) {
  const StateDeriv k1 = rhs(s);
  SimState s1 = state_lincomb(1.0, s, 0.0, s, dt, k1);
  s1.time = s.time + dt;
  maybe_dealias(s1, dealias);

  const StateDeriv k2 = rhs(s1);
  SimState s2 = state_lincomb(0.75, s, 0.25, s1, 0.25 * dt, k2);
  s2.time = s.time + 0.5 * dt;
  maybe_dealias(s2, dealias);

  const StateDeriv k3 = rhs(s2);
  SimState out = state_lincomb(1.0 / 3.0, s, 2.0 / 3.0, s2, 2.0 / 3.0 * dt, k3);
  out.time = s.time + dt;
  maybe_dealias(out, dealias);
  return out;
}

std::vector<SimState> integrate_fixed(const SimState& initial, const RhsFn& rhs,
                                      double dt, int steps, bool dealias) {
  std::vector<SimState> out;
  out.reserve(static_cast<std::size_t>(steps) + 1);
  out.push_back(initial);
  for (int i = 0; i < steps; ++i) {
    SimState next = step_ssprk3(out.back(), dt, rhs, dealias);
    next.time = initial.time + (i + 1) * dt;
    if (!all_finite(next.density_like) || !all_finite(next.velocity))
      throw NumericalError("integrate_fixed: non-finite state at step " + std::to_string(i + 1));
    out.push_back(std::move(next));
  }
  return out;
}

RunResult run(const SimState& initial, const EosParams& eos, const Kernel& k,
              const SchemeConfig& cfg, int sobolev_s, double beta) {
  if (!(cfg.cfl > 0.0 && cfg.cfl <= 1.0))
    throw std::invalid_argument("run: cfl must lie in (0, 1]");
  if (cfg.t_end < 0.0) throw std::invalid_argument("run: t_end must be >= 0");
  if (cfg.spatial == SpatialScheme::llf_fv && initial.form != Formulation::primitive)
    throw std::invalid_argument("run: llf_fv integrates the primitive formulation only");

  const bool spectral = cfg.spatial == SpatialScheme::spectral;
  const bool dealias = spectral && cfg.dealias;
  RhsFn rhs;
  if (!spectral)
    rhs = [&](const SimState& s) { return rhs_llf(s, eos, k); };
  else if (initial.form == Formulation::primitive)
    rhs = [&](const SimState& s) { return rhs_primitive(s, eos, k); };
  else
    rhs = [&](const SimState& s) { return rhs_symmetrized(s, eos, k); };

  RunResult result;
  SimState state = initial;
  maybe_dealias(state, dealias);
  result.records.push_back(energy_report(state, eos, k, sobolev_s, beta));
  result.snapshots.push_back(state);

  const double grad0 = result.records.front().max_grad_u;
  const double blow_at = grad0 > 0 ? cfg.blowup_factor * grad0
                                   : std::numeric_limits<double>::infinity();

  long step = 0;
  while (state.time < cfg.t_end * (1.0 - 1e-12)) {
    double dt = 0.0;
    try {
      dt = cfl_dt(state, eos, cfg);
      dt = std::min(dt, cfg.t_end - state.time);
      state = step_ssprk3(state, dt, rhs, dealias);
      ++step;
      if (!all_finite(state.density_like) || !all_finite(state.velocity))
        throw NumericalError("non-finite field values");
      result.records.push_back(energy_report(state, eos, k, sobolev_s, beta));
    } catch (const AdmissibilityError& e) {
      result.status = RunStatus::vacuum;
      result.abort_step = step;
      result.message = e.what();
      break;
    } catch (const NumericalError& e) {
      result.status = RunStatus::nan;
      result.abort_step = step;
      result.message = std::string(e.what()) + " at step " + std::to_string(step);
      break;
    }
    if (cfg.snapshot_every > 0 && step % cfg.snapshot_every == 0)
      result.snapshots.push_back(state);
    if (result.records.back().max_grad_u > blow_at) {
      result.status = RunStatus::blowup;
      result.abort_step = step;
      result.message = "max |grad u| grew past " + std::to_string(cfg.blowup_factor) +
                       "x its initial value";
      break;
    }
  }

  if (result.snapshots.empty() || result.snapshots.back().time != state.time)
    result.snapshots.push_back(state);
  return result;
}

}  // namespace ealign
