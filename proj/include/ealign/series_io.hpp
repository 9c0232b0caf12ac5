#pragma once

#include <string>
#include <vector>

#include "ealign/diagnostics.hpp"
#include "ealign/state.hpp"

namespace ealign {

/// Fixed CSV column order for diagnostics series files.
extern const char* const kSeriesHeader;

/// CSV with the fixed header; floats printed with 17 significant digits so
/// values round-trip exactly.
void write_series(const std::string& path, const std::vector<DiagnosticsRecord>& records);
std::vector<DiagnosticsRecord> read_series(const std::string& path);

/// One snapshot per file: a single text header line
///   ealign-snap 1 <dim> <n> <L> <time> <formulation>
/// followed by little-endian float64 payloads in order: density-like field,
/// then the velocity components, row-major.
void write_snapshot(const std::string& path, const SimState& s);
SimState read_snapshot(const std::string& path);

}  // namespace ealign
