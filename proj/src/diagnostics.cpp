#include "isentropic/diagnostics.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace isen {

Transformed transforms(const std::vector<GasState>& cells, const std::vector<double>& prefix_J, const GasParams& P)
{
    const double nan = std::numeric_limits<double>::quiet_NaN();
    Transformed out;
    out.ztilde.resize(cells.size(), nan);
    out.wtilde.resize(cells.size(), nan);
    for (std::size_t c = 0; c < cells.size(); ++c) {
        const InvariantPair q = to_invariants(cells[c], P);
        if (q.vacuum) continue;
        out.ztilde[c] = q.z - prefix_J[c];
        out.wtilde[c] = q.w - prefix_J[c];
    }
    return out;
}

DiagnosticsRecord envelopes(const std::vector<GasState>& cells, const std::vector<double>& prefix_J, double t,
                            double dx, double E0, double epsilon, const GasParams& P)
{
    const double inf = std::numeric_limits<double>::infinity();
    DiagnosticsRecord r;
    r.t = t;
    r.min_z = r.min_ztilde = inf;
    r.max_w = r.max_wtilde = -inf;
    for (std::size_t c = 0; c < cells.size(); ++c) {
        const GasState& u = cells[c];
        r.total_mass += 2.0 * dx * u.rho;
        r.total_eta += 2.0 * dx * eta_star(u, P);
        r.total_J += 2.0 * dx * relative_energy_J(u, P);
        const InvariantPair q = to_invariants(u, P);
        if (q.vacuum) continue;
        r.min_z = std::min(r.min_z, q.z);
        r.max_w = std::max(r.max_w, q.w);
        r.min_ztilde = std::min(r.min_ztilde, q.z - prefix_J[c]);
        r.max_wtilde = std::max(r.max_wtilde, q.w - prefix_J[c]);
    }
    if (r.min_z == inf) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        r.min_z = r.max_w = r.min_ztilde = r.max_wtilde = nan;
    }
    const double band = P.band_edge();
    r.region_margin_z = r.min_ztilde - (-band - E0 - epsilon);
    r.region_margin_w = band + epsilon - r.max_wtilde;
    return r;
}

bool in_band(const DiagnosticsRecord& r, double epsilon, double E0, const GasParams& P)
{
    const double band = P.band_edge();
    return r.min_ztilde >= -band - E0 - epsilon && r.max_wtilde <= band + epsilon;
}

std::optional<double> detect_t0(const std::vector<DiagnosticsRecord>& records, double epsilon, double E0,
                                const GasParams& P)
{
    std::optional<double> t0;
    for (auto it = records.rbegin(); it != records.rend(); ++it) {
        if (!in_band(*it, epsilon, E0, P)) break;
        t0 = it->t;
    }
    return t0;
}

std::pair<double, double> formal_hats(const DiagnosticsRecord& r, double delta)
{
    return {r.min_ztilde - delta * r.t, r.max_wtilde + delta * r.t};
}

std::string diagnostics_header() { return "t,min_z,max_w,min_ztilde,max_wtilde,mass,eta,J,t0flag"; }

std::string diagnostics_row(const DiagnosticsRecord& r, bool t0flag)
{
    return fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{}", r.t, r.min_z, r.max_w,
                       r.min_ztilde, r.max_wtilde, r.total_mass, r.total_eta, r.total_J, t0flag ? 1 : 0);
}

} // namespace isen
