#include "ealign/fft.hpp"

#include <utility>

namespace ealign::fft {

namespace {

void transform_1d(std::complex<double>* a, const Grid& g, bool inverse) {
  const int n = g.points;
  for (int i = 0; i < n; ++i) {
    const int j = static_cast<int>(g.bitrev[static_cast<std::size_t>(i)]);
    if (i < j) std::swap(a[i], a[j]);
  }
  for (int len = 2; len <= n; len <<= 1) {
    const int half = len >> 1;
    const int stride = n / len;
    for (int base = 0; base < n; base += len) {
      for (int j = 0; j < half; ++j) {
        std::complex<double> w = g.twiddles[static_cast<std::size_t>(j) * stride];
        if (inverse) w = std::conj(w);
        const std::complex<double> u = a[base + j];
        const std::complex<double> v = a[base + j + half] * w;
        a[base + j] = u + v;
        a[base + j + half] = u - v;
      }
    }
  }
  if (inverse) {
    const double scale = 1.0 / n;
    for (int i = 0; i < n; ++i) a[i] *= scale;
  }
}

}  // namespace

void transform(std::complex<double>* data, const Grid& g, bool inverse) {
  const int n = g.points;
  if (g.dim == 1) {
    transform_1d(data, g, inverse);
    return;
  }
  const bool par = g.cell_count() >= kParallelThreshold;
#pragma omp parallel for if (par)
  for (int r = 0; r < n; ++r) transform_1d(data + static_cast<std::size_t>(r) * n, g, inverse);
#pragma omp parallel for if (par)
  for (int c = 0; c < n; ++c) {
    std::vector<std::complex<double>> col(static_cast<std::size_t>(n));
    for (int r = 0; r < n; ++r) col[static_cast<std::size_t>(r)] = data[static_cast<std::size_t>(r) * n + c];
    transform_1d(col.data(), g, inverse);
    for (int r = 0; r < n; ++r) data[static_cast<std::size_t>(r) * n + c] = col[static_cast<std::size_t>(r)];
  }
}

Spectrum forward(const ScalarField& f) {
  Spectrum hat(f.size());
  const std::size_t n = f.size();
#pragma omp parallel for if (n >= kParallelThreshold)
  for (std::size_t i = 0; i < n; ++i) hat[i] = f.values[i];
  transform(hat.data(), *f.grid, false);
  return hat;
}

ScalarField inverse_real(Spectrum hat, GridPtr g) {
  transform(hat.data(), *g, true);
  ScalarField out(g);
  const std::size_t n = out.size();
#pragma omp parallel for if (n >= kParallelThreshold)
  for (std::size_t i = 0; i < n; ++i) out.values[i] = hat[i].real();
  return out;
}

}  // namespace ealign::fft
