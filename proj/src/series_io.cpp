#include "ealign/series_io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "ealign/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "snapshot payloads are little-endian");

namespace ealign {

const char* const kSeriesHeader =
    "time,e_l2,e_hs,u_diss,grad_sigma_diss,cross,lyapunov,mass,max_grad_u,young_ok,"
    "threshold_margin";

namespace {

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

double parse_double(const std::string& s, const std::string& path) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return x;
  } catch (...) {
    throw IoError(path + ": malformed numeric field '" + s + "'");
  }
}

}  // namespace

void write_series(const std::string& path, const std::vector<DiagnosticsRecord>& records) {
  std::ofstream out(path, std::ios::binary); // binary: no newline translation
  if (!out) throw IoError("cannot open series file for writing: " + path);
  out << kSeriesHeader << "\n";
  for (const auto& r : records) {
    out << fmt17(r.time) << ',' << fmt17(r.e_l2) << ',' << fmt17(r.e_hs) << ','
        << fmt17(r.u_diss) << ',' << fmt17(r.grad_sigma_diss) << ',' << fmt17(r.cross)
        << ',' << fmt17(r.lyapunov) << ',' << fmt17(r.mass) << ',' << fmt17(r.max_grad_u)
        << ',' << (r.young_ok ? 1 : 0) << ',' << fmt17(r.threshold_margin) << "\n";
  }
  if (!out) throw IoError("failed while writing series file: " + path);
}

std::vector<DiagnosticsRecord> read_series(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open series file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw IoError(path + ": empty series file");
  if (line == std::string(kSeriesHeader) + "\r") line.pop_back();
  if (line != kSeriesHeader) throw IoError(path + ": unexpected series header");
  std::vector<DiagnosticsRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 11) throw IoError(path + ": expected 11 columns");
    DiagnosticsRecord r;
    r.time = parse_double(cells[0], path);
    r.e_l2 = parse_double(cells[1], path);
    r.e_hs = parse_double(cells[2], path);
    r.u_diss = parse_double(cells[3], path);
    r.grad_sigma_diss = parse_double(cells[4], path);
    r.cross = parse_double(cells[5], path);
    r.lyapunov = parse_double(cells[6], path);
    r.mass = parse_double(cells[7], path);
    r.max_grad_u = parse_double(cells[8], path);
    r.young_ok = cells[9] == "1";
    r.threshold_margin = parse_double(cells[10], path);
    records.push_back(r);
  }
  return records;
}

void write_snapshot(const std::string& path, const SimState& s) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open snapshot file for writing: " + path);
  const Grid& g = *s.density_like.grid;
  out << "ealign-snap 1 " << g.dim << ' ' << g.points << ' ' << fmt17(g.length) << ' '
      << fmt17(s.time) << ' ' << to_string(s.form) << "\n";
  auto put = [&](const std::vector<double>& v) {
    out.write(reinterpret_cast<const char*>(v.data()),
              static_cast<std::streamsize>(v.size() * sizeof(double)));
  };
  put(s.density_like.values);
  for (const auto& c : s.velocity.comps) put(c.values);
  if (!out) throw IoError("failed while writing snapshot: " + path);
}

SimState read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open snapshot file: " + path);
  std::string header;
  if (!std::getline(in, header)) throw IoError(path + ": missing snapshot header");
  std::istringstream hs(header);
  std::string magic, version, form;
  int dim = 0, n = 0;
  std::string length_s, time_s;
  hs >> magic >> version >> dim >> n >> length_s >> time_s >> form;
  if (!hs || magic != "ealign-snap") throw IoError(path + ": not a snapshot file");
  if (version != "1") throw IoError(path + ": unsupported snapshot version " + version);
  if (form != "primitive" && form != "symmetrized")
    throw IoError(path + ": unknown formulation '" + form + "'");

  SimState s;
  s.form = form == "primitive" ? Formulation::primitive : Formulation::symmetrized;
  s.time = parse_double(time_s, path);
  GridPtr grid;
  try {
    grid = make_grid(dim, parse_double(length_s, path), n);
  } catch (const std::invalid_argument& e) {
    throw IoError(path + ": bad grid in header: " + e.what());
  }
  s.density_like = ScalarField(grid);
  s.velocity = VectorField(grid);

  auto take = [&](std::vector<double>& v) {
    in.read(reinterpret_cast<char*>(v.data()),
            static_cast<std::streamsize>(v.size() * sizeof(double)));
    if (in.gcount() != static_cast<std::streamsize>(v.size() * sizeof(double)))
      throw IoError(path + ": payload shorter than the header promises");
  };
  take(s.density_like.values);
  for (auto& c : s.velocity.comps) take(c.values);
  char extra;
  if (in.read(&extra, 1))
    throw IoError(path + ": payload longer than the header promises");
  return s;
}

}  // namespace ealign
