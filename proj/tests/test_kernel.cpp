#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ealign/errors.hpp"
#include "ealign/kernel.hpp"
#include "ealign/reference.hpp"
#include "ealign/spectral.hpp"
#include "support.hpp"

using namespace ealign;
using testsup::kPi;

namespace {

KernelSpec spec(KernelKind kind, KernelProfile profile, double radius, double amp,
                double rate = 1.0) {
  KernelSpec s;
  s.kind = kind;
  s.profile = profile;
  s.radius = radius;
  s.amplitude = amp;
  s.rate = rate;
  return s;
}

}  // namespace

TEST_CASE("build_kernel contract checks") {
  const auto g = make_grid(1, 2 * kPi, 64);
  CHECK_THROWS_AS(build_kernel(spec(KernelKind::isotropic, KernelProfile::top_hat,
                                    0.6 * g->length, 1.0), g),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_kernel(spec(KernelKind::isotropic, KernelProfile::top_hat,
                                    0.5, -1.0), g),
                  std::invalid_argument);
  // amplitude 0 is the switched-off kernel, not an error
  const Kernel off = build_kernel(spec(KernelKind::isotropic, KernelProfile::top_hat, 0.5, 0.0), g);
  CHECK(off.l1_spectral == 0.0);
}

TEST_CASE("1D top-hat integrates exactly") {
  const auto g = make_grid(1, 2 * kPi, 64);
  const Kernel k = build_kernel(spec(KernelKind::isotropic, KernelProfile::top_hat, 0.5, 1.0), g);
  CHECK(k.l1_spectral == doctest::Approx(1.0).epsilon(1e-14));
  const Kernel k2 = build_kernel(spec(KernelKind::isotropic, KernelProfile::top_hat, 0.25, 1.0), g);
  CHECK(k2.l1_spectral == doctest::Approx(0.5).epsilon(1e-14));
  // cached value matches a fresh recomputation
  CHECK(kernel_l1_norm(k) == doctest::Approx(k.l1_spectral).epsilon(1e-12));
}

TEST_CASE("truncated exponential integrates to its closed form") {
  const auto g = make_grid(1, 2 * kPi, 256);
  const double rate = 2.0, rc = 1.5;
  const Kernel k =
      build_kernel(spec(KernelKind::isotropic, KernelProfile::exponential, rc, 1.0, rate), g);
  const double exact = 2.0 * (1.0 - std::exp(-rate * rc)) / rate;
  CHECK(k.l1_spectral == doctest::Approx(exact).epsilon(1e-3)); // kink at 0 costs O(h^2)
}

TEST_CASE("amplitude scales the L1 norm linearly") {
  const auto g = make_grid(1, 2 * kPi, 64);
  const Kernel k1 = build_kernel(spec(KernelKind::isotropic, KernelProfile::bump, 1.0, 1.0), g);
  const Kernel k2 = build_kernel(spec(KernelKind::isotropic, KernelProfile::bump, 1.0, 2.0), g);
  CHECK(k2.l1_spectral == doctest::Approx(2.0 * k1.l1_spectral).epsilon(1e-13));
}

TEST_CASE("1D projection kernel equals isotropic") {
  const auto g = make_grid(1, 2 * kPi, 64);
  const Kernel iso = build_kernel(spec(KernelKind::isotropic, KernelProfile::bump, 1.0, 0.8), g);
  const Kernel prj = build_kernel(spec(KernelKind::projection, KernelProfile::bump, 1.0, 0.8), g);
  CHECK(testsup::max_abs_diff(iso.entries[0], prj.entries[0]) == 0.0);
}

TEST_CASE("2D projection kernel structure") {
  const auto g = make_grid(2, 2 * kPi, 32);
  const Kernel k = build_kernel(spec(KernelKind::projection, KernelProfile::bump, 1.2, 1.0), g);
  const Kernel iso = build_kernel(spec(KernelKind::isotropic, KernelProfile::bump, 1.2, 1.0), g);

  SUBCASE("trace recovers the profile") {
    for (std::size_t i = 0; i < g->cell_count(); ++i)
      CHECK(k.entries[0].values[i] + k.entries[3].values[i] ==
            doctest::Approx(iso.entries[0].values[i]).epsilon(1e-13));
  }
  SUBCASE("matrix is symmetric and even in x") {
    const int n = g->points;
    for (int ix = 0; ix < n; ++ix)
      for (int iy = 0; iy < n; ++iy) {
        const std::size_t a = g->index(ix, iy);
        const std::size_t b = g->index((n - ix) % n, (n - iy) % n);
        CHECK(k.entries[1].values[a] == doctest::Approx(k.entries[2].values[a]));
        for (int e = 0; e < 4; ++e)
          CHECK(k.entries[static_cast<std::size_t>(e)].values[a] ==
                doctest::Approx(k.entries[static_cast<std::size_t>(e)].values[b]));
      }
  }
  SUBCASE("projection L1 norm equals the isotropic one (rank-1 spectral norm)") {
    // equal except at the origin cell, whose angular-average value
    // phi(0)/dim * I has spectral norm phi(0)/dim instead of phi(0)
    const double h2 = g->spacing * g->spacing;
    const double origin_gap = h2 * 1.0 * (1.0 - 1.0 / g->dim); // phi(0) = amplitude = 1
    CHECK(k.l1_spectral == doctest::Approx(iso.l1_spectral - origin_gap).epsilon(1e-12));
    // max-entry convention is strictly smaller off-axis
    CHECK(k.l1_maxentry < k.l1_spectral);
  }
}

TEST_CASE("constant-field convolution picks up the kernel integral") {
  const auto g = make_grid(1, 2 * kPi, 64);
  const Kernel k = build_kernel(spec(KernelKind::isotropic, KernelProfile::top_hat, 0.5, 1.0), g);
  VectorField c(g);
  c.comps[0] = ScalarField(g, 2.5);
  const auto out = convolve(k, c);
  for (double v : out.comps[0].values)
    CHECK(v == doctest::Approx(2.5 * k.l1_spectral).epsilon(1e-12));
}

TEST_CASE("zero-amplitude kernel convolves to zero") {
  const auto g = make_grid(1, 2 * kPi, 32);
  const Kernel k = build_kernel(spec(KernelKind::isotropic, KernelProfile::bump, 1.0, 0.0), g);
  const auto f = testsup::random_band_vector(g, 1, 10, 1.0, 5);
  CHECK(max_abs(convolve(k, f)) == 0.0);
}

TEST_CASE("fast convolution agrees with the direct oracle") {
  struct Case {
    int dim;
    int n;
    KernelKind kind;
    KernelProfile profile;
  };
  const Case cases[] = {
      {1, 64, KernelKind::isotropic, KernelProfile::top_hat},
      {1, 64, KernelKind::projection, KernelProfile::bump},
      {2, 32, KernelKind::isotropic, KernelProfile::bump},
      {2, 32, KernelKind::projection, KernelProfile::top_hat},
  };
  for (const auto& c : cases) {
    const auto g = make_grid(c.dim, 2 * kPi, c.n);
    const Kernel k = build_kernel(spec(c.kind, c.profile, 0.9, 0.7), g);
    const auto f = testsup::random_band_vector(g, 1, c.n / 4, 1.0, 77);
    const auto fast = convolve(k, f, ConvMethod::fast);
    const auto direct = convolve(k, f, ConvMethod::direct);
    const auto serial = ref::convolve_direct(k, f);
    const double scale = std::max(1.0, max_abs(direct));
    CHECK(testsup::max_abs_diff(fast, direct) <= 1e-10 * scale);
    // the OpenMP direct path is arithmetic-identical to the serial reference
    CHECK(testsup::max_abs_diff(direct, serial) == 0.0);
  }
}

TEST_CASE("discrete convolution converges to the integral operator") {
  // top-hat against a single harmonic: Int_{-R}^{R} sin(x - y) dy = 2 sin(R) sin(x)
  const double R = 0.5;
  double errs[2];
  int idx = 0;
  for (int n : {64, 256}) {
    const auto g = make_grid(1, 2 * kPi, n);
    const Kernel k = build_kernel(spec(KernelKind::isotropic, KernelProfile::top_hat, R, 1.0), g);
    VectorField f(g);
    f.comps[0] = testsup::fill(g, [](double x, double) { return std::sin(x); });
    const auto conv = convolve(k, f);
    const auto exact =
        testsup::fill(g, [&](double x, double) { return 2.0 * std::sin(R) * std::sin(x); });
    errs[idx++] = testsup::max_abs_diff(conv.comps[0], exact);
  }
  CHECK(errs[0] <= 2e-3);
  CHECK(errs[1] <= errs[0] / 3.0); // second-order-ish refinement
}

TEST_CASE("alignment force vanishes on consensus") {
  const auto g = make_grid(1, 2 * kPi, 64);
  const Kernel k = build_kernel(spec(KernelKind::isotropic, KernelProfile::top_hat, 0.5, 1.0), g);
  VectorField u(g);
  u.comps[0] = ScalarField(g, 0.37);
  const auto w = testsup::random_values(g, 0.5, 2.0, 11);
  const auto force = alignment_force(k, u, w, 1.0);
  CHECK(max_abs(force) <= 1e-12);
}

TEST_CASE("alignment force with zero weight is zero") {
  const auto g = make_grid(1, 2 * kPi, 32);
  const Kernel k = build_kernel(spec(KernelKind::isotropic, KernelProfile::bump, 1.0, 1.0), g);
  const auto u = testsup::random_band_vector(g, 1, 8, 1.0, 3);
  CHECK(max_abs(alignment_force(k, u, ScalarField(g, 0.0), 2.0)) == 0.0);
  ScalarField neg(g, 1.0);
  neg.values[5] = -0.2;
  CHECK_THROWS_AS(alignment_force(k, u, neg, 1.0), AdmissibilityError);
}

TEST_CASE("expanded alignment force matches the double-sum oracle") {
  for (int dim = 1; dim <= 2; ++dim) {
    const auto g = make_grid(dim, 2 * kPi, 32);
    const Kernel k = build_kernel(
        spec(dim == 1 ? KernelKind::isotropic : KernelKind::projection,
             KernelProfile::bump, 1.0, 0.9), g);
    const auto u = testsup::random_band_vector(g, 1, 6, 1.0, 21);
    auto w = testsup::random_values(g, 0.5, 1.5, 31);
    const auto expanded = alignment_force(k, u, w, 1.3);
    const auto oracle = ref::alignment_force_direct(k, u, w, 1.3);
    CHECK(testsup::max_abs_diff(expanded, oracle) <= 1e-10 * std::max(1.0, max_abs(oracle)));
  }
}

TEST_CASE("alignment force is shift covariant in u") {
  const auto g = make_grid(1, 2 * kPi, 64);
  const Kernel k = build_kernel(spec(KernelKind::isotropic, KernelProfile::exponential, 1.5, 1.0, 2.0), g);
  const auto u = testsup::random_band_vector(g, 1, 12, 0.7, 8);
  const auto w = testsup::random_values(g, 0.2, 1.0, 9);
  VectorField shifted = u;
  for (auto& v : shifted.comps[0].values) v += 4.2;
  const auto f1 = alignment_force(k, u, w, 1.0);
  const auto f2 = alignment_force(k, shifted, w, 1.0);
  CHECK(testsup::max_abs_diff(f1, f2) <= 1e-12 * std::max(1.0, max_abs(f1)));
}

TEST_CASE("derivative commutes with convolution") {
  const auto g = make_grid(1, 2 * kPi, 128);
  const Kernel k = build_kernel(spec(KernelKind::isotropic, KernelProfile::bump, 1.0, 1.0), g);
  VectorField f(g);
  f.comps[0] = random_band_field(g, 1, 20, 1.0, 13, 0);
  const auto conv_then_grad = spectral_grad(convolve(k, f).comps[0]);
  VectorField df(g);
  df.comps[0] = spectral_grad(f.comps[0]).comps[0];
  const auto grad_then_conv = convolve(k, df);
  CHECK(testsup::max_abs_diff(conv_then_grad.comps[0], grad_then_conv.comps[0]) <=
        1e-9 * std::max(1.0, max_abs(grad_then_conv.comps[0])));
}

TEST_CASE("convolution preserves evenness") {
  for (const auto kind : {KernelKind::isotropic, KernelKind::projection}) {
    const auto g = make_grid(1, 2 * kPi, 64);
    const Kernel k = build_kernel(spec(kind, KernelProfile::bump, 1.0, 1.0), g);
    // symmetrize a random field about x = 0
    ScalarField base = random_band_field(g, 1, 10, 1.0, 17, 4);
    VectorField f(g);
    f.comps[0] = ScalarField(g);
    const int n = g->points;
    for (int j = 0; j < n; ++j)
      f.comps[0].values[static_cast<std::size_t>(j)] =
          base.values[static_cast<std::size_t>(j)] +
          base.values[static_cast<std::size_t>((n - j) % n)];
    const auto out = convolve(k, f);
    for (int j = 0; j < n; ++j)
      CHECK(out.comps[0].values[static_cast<std::size_t>(j)] ==
            doctest::Approx(out.comps[0].values[static_cast<std::size_t>((n - j) % n)])
                .epsilon(1e-10));
  }
}

TEST_CASE("convolution monitor holds on random fields") {
  for (int dim = 1; dim <= 2; ++dim) {
    const auto g = make_grid(dim, 2 * kPi, dim == 1 ? 128 : 32);
    for (const auto kind : {KernelKind::isotropic, KernelKind::projection}) {
      const Kernel k = build_kernel(spec(kind, KernelProfile::top_hat, 1.0, 1.0), g);
      for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto f = testsup::random_band_vector(g, 0, g->points / 3, 1.0, seed);
        CHECK(young_vector_ok(k, f));
        CHECK(young_matrix_ok(k, testsup::random_values(g, 0.0, 2.0, seed + 50)));
      }
    }
  }
}

TEST_CASE("grid mismatch is rejected") {
  const auto g1 = make_grid(1, 2 * kPi, 64);
  const auto g2 = make_grid(1, 2 * kPi, 32);
  const Kernel k = build_kernel(spec(KernelKind::isotropic, KernelProfile::bump, 1.0, 1.0), g1);
  VectorField f(g2, 1.0);
  CHECK_THROWS_AS(convolve(k, f), std::invalid_argument);
}
