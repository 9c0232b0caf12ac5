#include "ealign/config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "ealign/errors.hpp"
#include "ealign/spectral.hpp"

namespace ealign {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

// section -> key -> known? (value = required for that section to be usable)
const std::map<std::string, std::set<std::string>> kKnownKeys = {
    {"grid", {"dim", "length", "points"}},
    {"eos", {"A", "gamma", "rho_bar", "a", "tau"}},
    {"kernel", {"kind", "profile", "radius", "rate", "amplitude"}},
    {"scheme",
     {"spatial", "dealias", "cfl", "dt_max", "t_end", "snapshot_every", "blowup_factor"}},
    {"initial", {"formulation", "type", "mode_k", "amplitude", "kmin", "kmax", "seed"}},
    {"output", {"directory", "series", "snapshot_prefix"}},
    {"diagnostics", {"sobolev_s", "beta"}},
};

struct RawConfig {
  std::map<std::string, std::map<std::string, std::string>> kv;
  bool has(const std::string& sec, const std::string& key) const {
    auto s = kv.find(sec);
    return s != kv.end() && s->second.count(key) > 0;
  }
  std::string get(const std::string& sec, const std::string& key) const {
    return kv.at(sec).at(key);
  }
};

class Extractor {
 public:
  Extractor(const RawConfig& raw, std::vector<std::string>& errors)
      : raw_(raw), errors_(errors) {}

  double number(const std::string& sec, const std::string& key, double fallback,
                bool required = false, bool allow_inf = false) {
    if (!raw_.has(sec, key)) {
      if (required) missing(sec, key);
      return fallback;
    }
    const std::string v = raw_.get(sec, key);
    if (allow_inf && (v == "inf" || v == "+inf"))
      return std::numeric_limits<double>::infinity();
    try {
      std::size_t pos = 0;
      const double x = std::stod(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
      return x;
    } catch (...) {
      errors_.push_back("[" + sec + "] " + key + ": not a number: '" + v + "'");
      return fallback;
    }
  }

  long long integer(const std::string& sec, const std::string& key, long long fallback,
                    bool required = false) {
    if (!raw_.has(sec, key)) {
      if (required) missing(sec, key);
      return fallback;
    }
    const std::string v = raw_.get(sec, key);
    try {
      std::size_t pos = 0;
      const long long x = std::stoll(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
      return x;
    } catch (...) {
      errors_.push_back("[" + sec + "] " + key + ": not an integer: '" + v + "'");
      return fallback;
    }
  }

  bool boolean(const std::string& sec, const std::string& key, bool fallback) {
    if (!raw_.has(sec, key)) return fallback;
    const std::string v = raw_.get(sec, key);
    if (v == "true") return true;
    if (v == "false") return false;
    errors_.push_back("[" + sec + "] " + key + ": expected true/false, got '" + v + "'");
    return fallback;
  }

  std::string text(const std::string& sec, const std::string& key,
                   const std::string& fallback, bool required = false) {
    if (!raw_.has(sec, key)) {
      if (required) missing(sec, key);
      return fallback;
    }
    return raw_.get(sec, key);
  }

  template <typename T>
  T choice(const std::string& sec, const std::string& key,
           const std::map<std::string, T>& options, T fallback, bool required = false) {
    if (!raw_.has(sec, key)) {
      if (required) missing(sec, key);
      return fallback;
    }
    const std::string v = raw_.get(sec, key);
    auto it = options.find(v);
    if (it != options.end()) return it->second;
    std::string valid;
    for (const auto& [name, _] : options) valid += (valid.empty() ? "" : "|") + name;
    errors_.push_back("[" + sec + "] " + key + ": unknown value '" + v + "' (expected " +
                      valid + ")");
    return fallback;
  }

  bool present(const std::string& sec, const std::string& key) const {
    return raw_.has(sec, key);
  }

 private:
  void missing(const std::string& sec, const std::string& key) {
    errors_.push_back("[" + sec + "] missing required key '" + key + "'");
  }
  const RawConfig& raw_;
  std::vector<std::string>& errors_;
};

bool is_power_of_two(long long n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

int RunConfig::effective_sobolev_s() const {
  if (sobolev_s > 0) return sobolev_s;
  return grid_dim == 1 ? 2 : 3;
}

ParsedConfig parse_config(const std::string& text) {
  ParsedConfig out;
  RawConfig raw;
  std::string section;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        out.errors.push_back("line " + std::to_string(lineno) + ": malformed section header");
        continue;
      }
      section = trim(line.substr(1, line.size() - 2));
      if (!kKnownKeys.count(section))
        out.errors.push_back("line " + std::to_string(lineno) + ": unknown section [" +
                             section + "]");
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      out.errors.push_back("line " + std::to_string(lineno) + ": expected key = value");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty()) {
      out.errors.push_back("line " + std::to_string(lineno) + ": key outside any section");
      continue;
    }
    auto known = kKnownKeys.find(section);
    if (known != kKnownKeys.end() && !known->second.count(key)) {
      out.errors.push_back("line " + std::to_string(lineno) + ": unknown key '" + key +
                           "' in [" + section + "]");
      continue;
    }
    if (raw.kv[section].count(key)) {
      out.errors.push_back("line " + std::to_string(lineno) + ": duplicate key '" + key +
                           "' in [" + section + "]");
      continue;
    }
    raw.kv[section][key] = value;
  }

  RunConfig c;
  Extractor get(raw, out.errors);

  c.grid_dim = static_cast<int>(get.integer("grid", "dim", 1, true));
  c.grid_length = get.number("grid", "length", c.grid_length);
  c.grid_points = static_cast<int>(get.integer("grid", "points", 256, true));

  c.eos_A = get.number("eos", "A", 1.0);
  c.eos_gamma = get.number("eos", "gamma", 0.0, true);
  c.eos_rho_bar = get.number("eos", "rho_bar", 0.0, true);
  c.eos_a = get.number("eos", "a", 0.0, true);
  c.eos_tau = get.number("eos", "tau", 0.0, true, /*allow_inf=*/true);

  c.kernel.kind = get.choice<KernelKind>(
      "kernel", "kind",
      {{"isotropic", KernelKind::isotropic}, {"projection", KernelKind::projection}},
      KernelKind::isotropic, true);
  c.kernel.profile = get.choice<KernelProfile>(
      "kernel", "profile",
      {{"top_hat", KernelProfile::top_hat},
       {"bump", KernelProfile::bump},
       {"exponential", KernelProfile::exponential}},
      KernelProfile::top_hat, true);
  c.kernel.radius = get.number("kernel", "radius", 0.0, true);
  c.kernel.rate = get.number("kernel", "rate", 1.0);
  c.kernel.amplitude = get.number("kernel", "amplitude", 0.0, true);

  c.scheme.spatial = get.choice<SpatialScheme>(
      "scheme", "spatial",
      {{"spectral", SpatialScheme::spectral}, {"llf_fv", SpatialScheme::llf_fv}},
      SpatialScheme::spectral);
  c.scheme.dealias = get.boolean("scheme", "dealias", true);
  c.scheme.cfl = get.number("scheme", "cfl", 0.4);
  c.scheme.dt_max = get.number("scheme", "dt_max",
                               std::numeric_limits<double>::infinity(), false, true);
  c.scheme.t_end = get.number("scheme", "t_end", 0.0, true);
  c.scheme.snapshot_every = static_cast<int>(get.integer("scheme", "snapshot_every", 0));
  c.scheme.blowup_factor = get.number("scheme", "blowup_factor", 100.0);

  c.formulation = get.choice<Formulation>(
      "initial", "formulation",
      {{"primitive", Formulation::primitive}, {"symmetrized", Formulation::symmetrized}},
      Formulation::symmetrized, true);
  c.initial_type = get.choice<InitialType>(
      "initial", "type",
      {{"single_mode", InitialType::single_mode}, {"random_band", InitialType::random_band}},
      InitialType::single_mode, true);
  c.mode_k = static_cast<int>(get.integer("initial", "mode_k", 1));
  c.initial_amplitude = get.number("initial", "amplitude", 0.0, true);
  c.kmin = static_cast<int>(get.integer("initial", "kmin", 1));
  c.kmax = static_cast<int>(get.integer("initial", "kmax", 4));
  if (c.initial_type == InitialType::random_band) {
    if (!get.present("initial", "seed"))
      out.errors.push_back("[initial] random_band requires an explicit seed");
    else
      c.seed = static_cast<std::uint64_t>(get.integer("initial", "seed", 0));
  }

  c.output_directory = get.text("output", "directory", "", true);
  c.series_filename = get.text("output", "series", c.series_filename);
  c.snapshot_prefix = get.text("output", "snapshot_prefix", c.snapshot_prefix);

  c.sobolev_s = static_cast<int>(get.integer("diagnostics", "sobolev_s", 0));
  c.beta = get.number("diagnostics", "beta", 0.01);

  // cross-field validation
  if (c.grid_dim != 1 && c.grid_dim != 2)
    out.errors.push_back("[grid] dim must be 1 or 2");
  if (!(c.grid_length > 0)) out.errors.push_back("[grid] length must be positive");
  if (c.grid_points < 8 || !is_power_of_two(c.grid_points))
    out.errors.push_back("[grid] points must be a power of two >= 8");
  if (!(c.eos_A > 0)) out.errors.push_back("[eos] A must be positive");
  if (!(c.eos_gamma >= 1.0 + 1e-6))
    out.errors.push_back("[eos] gamma must be >= 1 + 1e-6");
  if (!(c.eos_rho_bar > 0)) out.errors.push_back("[eos] rho_bar must be positive");
  if (!(c.eos_a > 0)) out.errors.push_back("[eos] a must be positive");
  if (!(c.eos_tau > 0)) out.errors.push_back("[eos] tau must be positive (or inf)");
  if (!(c.kernel.radius > 0) || !(c.kernel.radius < 0.5 * c.grid_length))
    out.errors.push_back("[kernel] radius must lie in (0, length/2)");
  if (c.kernel.profile == KernelProfile::exponential && !(c.kernel.rate > 0))
    out.errors.push_back("[kernel] exponential profile needs rate > 0");
  if (!(c.kernel.amplitude >= 0))
    out.errors.push_back("[kernel] amplitude must be >= 0");
  if (!(c.scheme.cfl > 0 && c.scheme.cfl <= 1))
    out.errors.push_back("[scheme] cfl must lie in (0, 1]");
  if (!(c.scheme.dt_max > 0)) out.errors.push_back("[scheme] dt_max must be positive");
  if (c.scheme.t_end < 0) out.errors.push_back("[scheme] t_end must be >= 0");
  if (c.scheme.snapshot_every < 0)
    out.errors.push_back("[scheme] snapshot_every must be >= 0");
  if (!(c.scheme.blowup_factor > 1))
    out.errors.push_back("[scheme] blowup_factor must exceed 1");
  if (c.scheme.spatial == SpatialScheme::llf_fv && c.formulation != Formulation::primitive)
    out.errors.push_back("[scheme] llf_fv requires the primitive formulation");
  if (!(c.initial_amplitude >= 0))
    out.errors.push_back("[initial] amplitude must be >= 0");
  if (c.initial_type == InitialType::single_mode &&
      (c.mode_k < 1 || c.mode_k >= c.grid_points / 2))
    out.errors.push_back("[initial] mode_k must lie in [1, points/2)");
  if (c.initial_type == InitialType::random_band &&
      (c.kmin < 0 || c.kmax < c.kmin || c.kmax >= c.grid_points / 2))
    out.errors.push_back("[initial] need 0 <= kmin <= kmax < points/2");
  if (c.sobolev_s < 0 || c.sobolev_s > 4)
    out.errors.push_back("[diagnostics] sobolev_s must lie in [0, 4] (0 = default)");
  if (!(c.beta >= 0)) out.errors.push_back("[diagnostics] beta must be >= 0");

  if (out.errors.empty()) out.config = c;
  return out;
}

ParsedConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    ParsedConfig out;
    out.errors.push_back("cannot open config file: " + path);
    return out;
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

GridPtr build_grid(const RunConfig& c) {
  return make_grid(c.grid_dim, c.grid_length, c.grid_points);
}

EosParams build_eos(const RunConfig& c) {
  return make_eos(c.eos_A, c.eos_gamma, c.eos_rho_bar, c.eos_a, c.eos_tau);
}

Kernel build_kernel_from(const RunConfig& c, GridPtr grid) {
  return build_kernel(c.kernel, grid);
}

namespace {

ScalarField single_mode_field(GridPtr grid, int mode_k, double amplitude) {
  ScalarField f(grid);
  const int n = grid->points;
  const double freq = 2.0 * std::numbers::pi * mode_k / grid->length;
  if (grid->dim == 1) {
    for (int j = 0; j < n; ++j)
      f.values[static_cast<std::size_t>(j)] = amplitude * std::sin(freq * grid->coord(j));
    return f;
  }
  for (int ix = 0; ix < n; ++ix) {
    const double vx = amplitude * std::sin(freq * grid->coord(ix));
    for (int iy = 0; iy < n; ++iy) f.values[grid->index(ix, iy)] = vx;
  }
  return f;
}

}  // namespace

ScalarField random_band_field(GridPtr grid, int kmin, int kmax, double amplitude,
                              std::uint64_t seed, std::uint64_t salt) {
  std::mt19937_64 rng(seed + 0x9e3779b97f4a7c15ULL * (salt + 1));
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int n = grid->points;
  fft::Spectrum hat(grid->cell_count(), {0.0, 0.0});

  if (grid->dim == 1) {
    if (kmin == 0) hat[0] = {gauss(rng), 0.0};
    for (int j = std::max(1, kmin); j <= kmax; ++j) {
      const std::complex<double> z{gauss(rng), gauss(rng)};
      hat[static_cast<std::size_t>(j)] = z;
      hat[static_cast<std::size_t>(n - j)] = std::conj(z);
    }
  } else {
    auto wrap = [n](int j) { return (j % n + n) % n; };
    for (int jx = -(n / 2 - 1); jx <= n / 2 - 1; ++jx) {
      for (int jy = -(n / 2 - 1); jy <= n / 2 - 1; ++jy) {
        const double kk = std::hypot(static_cast<double>(jx), static_cast<double>(jy));
        if (kk < kmin || kk > kmax) continue;
        // fill each conjugate pair once, from its canonical member
        if (jx < 0 || (jx == 0 && jy < 0)) continue;
        const std::size_t idx = grid->index(wrap(jx), wrap(jy));
        if (jx == 0 && jy == 0) {
          hat[idx] = {gauss(rng), 0.0};
          continue;
        }
        const std::complex<double> z{gauss(rng), gauss(rng)};
        hat[idx] = z;
        hat[grid->index(wrap(-jx), wrap(-jy))] = std::conj(z);
      }
    }
  }

  ScalarField f = fft::inverse_real(std::move(hat), grid);
  const double peak = max_abs(f);
  if (peak > 0 && amplitude > 0) {
    const double scale = amplitude / peak;
    for (auto& v : f.values) v *= scale;
  } else if (amplitude == 0) {
    for (auto& v : f.values) v = 0.0;
  }
  return f;
}

SimState build_initial_state(const RunConfig& c, GridPtr grid, const EosParams& eos) {
  ScalarField sigma(grid);
  VectorField u(grid);
  if (c.initial_type == InitialType::single_mode) {
    sigma = single_mode_field(grid, c.mode_k, c.initial_amplitude);
    for (int d = 0; d < grid->dim; ++d)
      u.comps[static_cast<std::size_t>(d)] = single_mode_field(grid, c.mode_k, c.initial_amplitude);
  } else {
    sigma = random_band_field(grid, c.kmin, c.kmax, c.initial_amplitude, c.seed, 0);
    for (int d = 0; d < grid->dim; ++d)
      u.comps[static_cast<std::size_t>(d)] =
          random_band_field(grid, c.kmin, c.kmax, c.initial_amplitude, c.seed,
                            static_cast<std::uint64_t>(d) + 1);
  }

  SimState s;
  s.form = c.formulation;
  s.velocity = std::move(u);
  s.time = 0.0;
  if (c.formulation == Formulation::symmetrized)
    s.density_like = std::move(sigma);
  else
    s.density_like = rho_from_sigma(sigma, eos);
  return s;
}

}  // namespace ealign
