#include "ealign/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ealign/errors.hpp"
#include "ealign/fft.hpp"
#include "ealign/spectral.hpp"

namespace ealign {

namespace {

double margin_from_l1(const EosParams& eos, double l1) {
  return eos.inv_tau() - 2.0 * eos.a_sym * std::pow(eos.kappa_bar, eos.nu) * l1;
}

struct SigmaView {
  ScalarField sigma;
  ScalarField rho;
};

// Either formulation reduced to the (sigma, u) variables plus rho for the
// mass integral.
SigmaView split_state(const SimState& s, const EosParams& eos) {
  if (s.form == Formulation::primitive)
    return {sigma_from_rho(s.density_like, eos), s.density_like};
  return {s.density_like, rho_from_sigma(s.density_like, eos)};
}

double parseval_weight(const Grid& g) {
  const double w = g.spacing / g.points;
  return g.dim == 1 ? w : w * w;
}

}  // namespace

double threshold_margin(const EosParams& eos, const Kernel& k) {
  return margin_from_l1(eos, k.l1_spectral);
}

double threshold_margin_maxentry(const EosParams& eos, const Kernel& k) {
  return margin_from_l1(eos, k.l1_maxentry);
}

double cross_term(const VectorField& u, const ScalarField& sigma, int s) {
  require_same_grid(*u.grid, *sigma.grid);
  if (s < 1) throw std::invalid_argument("cross_term: s must be >= 1");
  const Grid& g = *u.grid;
  const int n = g.points;
  const auto shat = fft::forward(sigma);
  std::vector<fft::Spectrum> uhat;
  for (const auto& c : u.comps) uhat.push_back(fft::forward(c));

  double total = 0.0;
  auto accumulate = [&](std::size_t idx, const double* ks, int dim) {
    // sum_i conj(u_i) * k_i, then Re(i * c * sigma_hat) per derivative order
    std::complex<double> c{0.0, 0.0};
    double k2 = 0.0;
    for (int d = 0; d < dim; ++d) {
      c += std::conj(uhat[static_cast<std::size_t>(d)][idx]) * ks[d];
      k2 += ks[d] * ks[d];
    }
    const double base = (std::complex<double>(0.0, 1.0) * c * shat[idx]).real();
    double mult = 1.0;
    double sum = 0.0;
    for (int r = 1; r <= s; ++r) {
      sum += mult; // |k|^(2(r-1))
      mult *= k2;
    }
    total += sum * base;
  };

  if (g.dim == 1) {
    for (int j = 0; j < n; ++j) {
      const double k = deriv_wavenumber(g, j);
      accumulate(static_cast<std::size_t>(j), &k, 1);
    }
  } else {
    for (int jx = 0; jx < n; ++jx) {
      const double kx = deriv_wavenumber(g, jx);
      for (int jy = 0; jy < n; ++jy) {
        const double ks[2] = {kx, deriv_wavenumber(g, jy)};
        accumulate(g.index(jx, jy), ks, 2);
      }
    }
  }
  return total * parseval_weight(g);
}

DiagnosticsRecord energy_report(const SimState& s, const EosParams& eos,
                                const Kernel& k, int sobolev_s, double beta) {
  if (sobolev_s < 1) throw std::invalid_argument("energy_report: sobolev_s must be >= 1");
  const auto view = split_state(s, eos);
  const auto& u = s.velocity;

  DiagnosticsRecord rec;
  rec.time = s.time;
  const double sig_l2sq = l2_inner(view.sigma, view.sigma);
  const double u_l2sq = l2_inner(u, u);
  rec.e_l2 = sig_l2sq + u_l2sq;
  const double sig_hs = sobolev_norm_sq(view.sigma, sobolev_s);
  rec.u_diss = sobolev_norm_sq(u, sobolev_s);
  rec.e_hs = sig_hs + rec.u_diss;
  rec.grad_sigma_diss = sig_hs - sig_l2sq;
  rec.cross = cross_term(u, view.sigma, sobolev_s);
  rec.lyapunov = rec.e_hs + beta * rec.cross;
  rec.mass = integral(view.rho);

  double mg = 0.0;
  for (const auto& c : u.comps) {
    const VectorField grad = spectral_grad(c);
    for (const auto& gc : grad.comps) mg = std::max(mg, max_abs(gc));
  }
  rec.max_grad_u = mg;

  const ScalarField w = s.form == Formulation::primitive
                            ? view.rho
                            : alignment_weight(view.sigma, eos);
  VectorField uw(u.grid);
  for (int d = 0; d < u.dim(); ++d)
    uw.comps[static_cast<std::size_t>(d)] = pointwise_product(u.comps[static_cast<std::size_t>(d)], w);
  rec.young_ok = young_matrix_ok(k, w) && young_vector_ok(k, uw);
  rec.threshold_margin = threshold_margin(eos, k);

  if (std::fabs(rec.cross) > 0.5 * rec.e_hs * (1.0 + 1e-12))
    throw NumericalError("cross term exceeds e_hs/2 at t = " + std::to_string(s.time));
  return rec;
}

double linear_alignment_power(const Kernel& k, const VectorField& u, int sobolev_s,
                              bool weighted) {
  const Grid& g = *u.grid;
  const int n = g.points;
  const int dim = g.dim;
  const double hd = g.dim == 1 ? g.spacing : g.spacing * g.spacing;
  std::vector<fft::Spectrum> uhat;
  for (const auto& c : u.comps) uhat.push_back(fft::forward(c));

  auto weight = [&](double k2) {
    if (!weighted) return 1.0;
    double mult = 1.0, sum = 0.0;
    for (int r = 1; r <= sobolev_s; ++r) {
      mult *= k2;
      sum += mult;
    }
    return sum;
  };
  auto entry_gap = [&](int i, int j, std::size_t idx) {
    const auto& hat = k.entries_hat[static_cast<std::size_t>(i * dim + j)];
    return (hat[0].real() - hat[idx].real()) * hd;
  };

  double total = 0.0;
  if (dim == 1) {
    for (int j = 0; j < n; ++j) {
      const double kt = deriv_wavenumber(g, j);
      total += weight(kt * kt) * entry_gap(0, 0, static_cast<std::size_t>(j)) *
               std::norm(uhat[0][static_cast<std::size_t>(j)]);
    }
  } else {
    for (int jx = 0; jx < n; ++jx) {
      const double kx = deriv_wavenumber(g, jx);
      for (int jy = 0; jy < n; ++jy) {
        const double ky = deriv_wavenumber(g, jy);
        const std::size_t idx = g.index(jx, jy);
        const double w = weight(kx * kx + ky * ky);
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j)
            total += w * entry_gap(i, j, idx) *
                     (std::conj(uhat[static_cast<std::size_t>(i)][idx]) *
                      uhat[static_cast<std::size_t>(j)][idx])
                         .real();
      }
    }
  }
  return total * parseval_weight(g);
}

DissipationAudit dissipation_audit(const std::vector<SimState>& traj,
                                   const EosParams& eos, const Kernel& k,
                                   int sobolev_s) {
  if (traj.size() < 2)
    throw std::invalid_argument("dissipation_audit: trajectory must hold at least 2 states");
  const std::size_t m = traj.size();
  const double margin = threshold_margin(eos, k);
  const double kb = eos.kappa_bar;
  const double align_coeff = eos.a_sym * std::pow(eos.kappa_bar, eos.nu);

  std::vector<double> t(m), el2(m), ehs(m), cross(m);
  std::vector<double> u_l2sq(m), udiss_hs(m), gradsig_l2sq(m), gradsig_hs(m), u_hsm1(m);
  std::vector<double> kpow_l2(m), kpow_hs(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto view = split_state(traj[i], eos);
    const auto& u = traj[i].velocity;
    t[i] = traj[i].time;
    const double sig_l2 = l2_inner(view.sigma, view.sigma);
    const double sig_hs = sobolev_norm_sq(view.sigma, sobolev_s);
    const double sig_h1 = sobolev_norm_sq(view.sigma, 1);
    const double u_l2 = l2_inner(u, u);
    const double u_hs = sobolev_norm_sq(u, sobolev_s);
    el2[i] = sig_l2 + u_l2;
    ehs[i] = sig_hs + u_hs;
    cross[i] = cross_term(u, view.sigma, sobolev_s);
    u_l2sq[i] = u_l2;
    udiss_hs[i] = u_hs - u_l2;
    gradsig_l2sq[i] = sig_h1 - sig_l2;
    gradsig_hs[i] = sig_hs - sig_l2;
    u_hsm1[i] = sobolev_norm_sq(u, sobolev_s - 1);
    kpow_l2[i] = linear_alignment_power(k, u, sobolev_s, false);
    kpow_hs[i] = linear_alignment_power(k, u, sobolev_s, true);
  }

  auto ddt = [&](const std::vector<double>& y, std::size_t i) {
    if (i == 0) return (y[1] - y[0]) / (t[1] - t[0]);
    if (i + 1 == m) return (y[m - 1] - y[m - 2]) / (t[m - 1] - t[m - 2]);
    return (y[i + 1] - y[i - 1]) / (t[i + 1] - t[i - 1]);
  };

  DissipationAudit audit;
  audit.time = t;
  audit.resid_l2.resize(m);
  audit.resid_hs.resize(m);
  audit.resid_cross.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    audit.resid_l2[i] = 0.5 * ddt(el2, i) + margin * u_l2sq[i];
    audit.resid_hs[i] = 0.5 * (ddt(ehs, i) - ddt(el2, i)) + margin * udiss_hs[i];
    audit.resid_cross[i] = ddt(cross, i) + 0.25 * kb * gradsig_hs[i];
  }

  bool first = true;
  for (std::size_t i = 1; i + 1 < m; ++i) {
    const double dp = t[i + 1] - t[i];
    const double dm = t[i] - t[i - 1];
    // skip genuine mesh breaks (clamped final step); the slow CFL drift of
    // dt is harmless at this tolerance
    if (std::fabs(dp - dm) > 1e-2 * dp) continue;
    const double den_l2 = u_l2sq[i] + gradsig_l2sq[i];
    const double den_hs = udiss_hs[i] + gradsig_hs[i] + u_hsm1[i];
    const double den_cross = sobolev_norm_sq(traj[i].velocity, sobolev_s);
    const double sharp_l2 =
        std::fabs(0.5 * ddt(el2, i) + eos.inv_tau() * u_l2sq[i] + align_coeff * kpow_l2[i]);
    const double sharp_hs = std::fabs(0.5 * (ddt(ehs, i) - ddt(el2, i)) +
                                      eos.inv_tau() * udiss_hs[i] + align_coeff * kpow_hs[i]);
    if (den_l2 > 0) {
      audit.c_delta_l2 = std::max(audit.c_delta_l2, sharp_l2 / den_l2);
      const double slack = audit.resid_l2[i] / den_l2;
      audit.margin_slack_l2 = first ? slack : std::max(audit.margin_slack_l2, slack);
    }
    if (den_hs > 0) {
      audit.c_delta_hs = std::max(audit.c_delta_hs, sharp_hs / den_hs);
      const double slack = audit.resid_hs[i] / den_hs;
      audit.margin_slack_hs = first ? slack : std::max(audit.margin_slack_hs, slack);
    }
    if (den_cross > 0)
      audit.c_cross = std::max(audit.c_cross, audit.resid_cross[i] / den_cross);
    first = false;
  }
  return audit;
}

LyapunovSeries lyapunov_series(const std::vector<SimState>& traj,
                               const EosParams& eos, const Kernel& k,
                               int sobolev_s, double beta) {
  if (!(beta >= 0.0)) throw std::invalid_argument("lyapunov_series: beta must be >= 0");
  (void)k;
  LyapunovSeries out;
  for (const auto& st : traj) {
    const auto view = split_state(st, eos);
    const double ehs = sobolev_norm_sq(view.sigma, sobolev_s) + sobolev_norm_sq(st.velocity, sobolev_s);
    const double cr = cross_term(st.velocity, view.sigma, sobolev_s);
    const double L = ehs + beta * cr;
    out.time.push_back(st.time);
    out.value.push_back(L);
    out.ratio_to_ehs.push_back(ehs > 0 ? L / ehs : 1.0);
    if (std::fabs(beta * cr) > 0.5 * ehs * (1.0 + 1e-12)) out.beta_band_ok = false;
  }
  for (std::size_t i = 1; i < out.value.size(); ++i)
    if (out.value[i] > out.value[i - 1] + 1e-10) out.nonincreasing = false;
  if (!out.beta_band_ok)
    out.message = "beta*cross left the e_hs/2 equivalence band; shrink beta";
  return out;
}

const char* to_string(SweepClass c) {
  switch (c) {
    case SweepClass::decay: return "decay";
    case SweepClass::growth: return "growth";
    case SweepClass::aborted: return "aborted";
  }
  return "?";
}

std::vector<SweepRow> sweep(const EosParams& base, const std::string& param,
                            const std::vector<double>& values, const Kernel& k,
                            const std::function<RunOutcome(const EosParams&)>& runner) {
  if (param != "a" && param != "tau")
    throw std::invalid_argument("sweep: param must be \"a\" or \"tau\"");
  std::vector<SweepRow> rows;
  rows.reserve(values.size());
  for (double v : values) {
    const EosParams eos = param == "a"
                              ? make_eos(base.A, base.gamma, base.rho_bar, v, base.tau)
                              : make_eos(base.A, base.gamma, base.rho_bar, base.a, v);
    SweepRow row;
    row.value = v;
    row.margin = threshold_margin(eos, k);
    row.margin_maxentry = threshold_margin_maxentry(eos, k);
    const RunOutcome outcome = runner(eos);
    row.status = outcome.status;
    row.initial_u_l2 = outcome.initial_u_l2;
    row.final_u_l2 = outcome.final_u_l2;
    row.ratio = outcome.initial_u_l2 > 0 ? outcome.final_u_l2 / outcome.initial_u_l2 : 0.0;
    if (outcome.status != RunStatus::completed)
      row.cls = SweepClass::aborted;
    else
      row.cls = row.ratio < 1.0 ? SweepClass::decay : SweepClass::growth;
    rows.push_back(row);
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const SweepRow& a, const SweepRow& b) { return a.margin < b.margin; });
  return rows;
}

}  // namespace ealign
