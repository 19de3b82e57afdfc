// Run observables: transformed invariants, envelopes and band entry.
#pragma once

#include "isentropic/gas_model.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace isen {

struct DiagnosticsRecord {
    double t = 0.0;
    double min_z = 0.0, max_w = 0.0;
    double min_ztilde = 0.0, max_wtilde = 0.0;
    double total_mass = 0.0, total_eta = 0.0, total_J = 0.0;
    // Distances to the band [-rho_bar^theta/theta - E0 - eps, rho_bar^theta/theta + eps];
    // positive inside.
    double region_margin_z = 0.0, region_margin_w = 0.0;
    std::optional<double> t0_detected;
};

struct Transformed {
    std::vector<double> ztilde, wtilde; // NaN at vacuum cells
};

// ztilde_c = z(u_c) - I_c, wtilde_c = w(u_c) - I_c.
Transformed transforms(const std::vector<GasState>& cells, const std::vector<double>& prefix_J, const GasParams& P);

// Envelopes over non-vacuum cells and totals over cells of width 2 dx.
DiagnosticsRecord envelopes(const std::vector<GasState>& cells, const std::vector<double>& prefix_J, double t,
                            double dx, double E0, double epsilon, const GasParams& P);

bool in_band(const DiagnosticsRecord& r, double epsilon, double E0, const GasParams& P);

// First recorded time from which every later record lies in the band.
std::optional<double> detect_t0(const std::vector<DiagnosticsRecord>& records, double epsilon, double E0,
                                const GasParams& P);

// (min ztilde - delta t, max wtilde + delta t).
std::pair<double, double> formal_hats(const DiagnosticsRecord& r, double delta);

std::string diagnostics_header();
std::string diagnostics_row(const DiagnosticsRecord& r, bool t0flag);

} // namespace isen
