#pragma once

#include "chns/diagnostics.hpp"
#include "chns/simulation.hpp"

#include <string>
#include <vector>

namespace chns {

// Diagnostics time series as CSV: fixed column order, 17 significant digits,
// newline-terminated rows. Deterministic bytes for a fixed series.
std::string diagnostics_csv(const std::vector<DiagnosticsRecord>& series);
void write_diagnostics_csv(const std::vector<DiagnosticsRecord>& series, const std::string& path);

// Legacy VTK structured-points snapshot (ASCII). Fields in fixed order n, v, P, u;
// the staggered u is averaged to cell centers, which does not preserve the discrete
// divergence (lossy by construction).
void write_snapshot(const SimState& state, const std::string& path);

struct Snapshot {
    Snapshot(const GridSpec& g) : grid(g), n(g), v(g), pressure(g), ucx(g), ucy(g) {}

    GridSpec grid;
    double t = 0.0;
    long step = 0;
    ScalarField n, v, pressure;
    ScalarField ucx, ucy; // cell-centered velocity components
};

// Reader for the snapshot format (round-trip checks and file-based initial data).
Snapshot read_snapshot(const std::string& path);

} // namespace chns
