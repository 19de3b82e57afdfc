// Numeric certification of the analytic inequalities and an independent
// Lax-Friedrichs reference solver.
#pragma once

#include "isentropic/gas_model.hpp"
#include "isentropic/initial_data.hpp"
#include "isentropic/scheme.hpp"

#include <string>
#include <vector>

namespace isen {

struct CertReport {
    std::string claim;
    long samples = 0;
    double worst_margin = 0.0;
    std::vector<double> worst_point;
    double tolerance = 1e-12;
    bool pass = false;

    std::string to_text() const;
};

// f(t) = (5g-3) t^(3th+1) - 2(3g-1) t^(2th+1) + g(3-g) t^(th+1) - (3-g)(g-1) t^th + 2(g-1)
double poly_f(double t, double gamma);
// g(t) = (g+1)/(2g^2(g-1)) t^(2g) - t^(g+1)/(g-1) + (g+1)/g^2 t^g - 1/(2g^2)
double poly_g(double t, double gamma);

// min f over samples of [0, 1]; margin = f.
CertReport check_f_nonneg(double gamma, long samples = 10000, double tolerance = 1e-12);
// min g over samples of [1, t_max]; margin = g.
CertReport check_g_nonneg(double gamma, long samples = 10000, double t_max = 50.0, double tolerance = 1e-12);

struct SignGrid {
    int n = 200;                // points per axis
    double rho_max_factor = 3.0; // rho in [0, factor * rho_bar]
    double span_factor = 2.0;    // z in [-band - span, -band], span = factor * band
    double locus_radius = 0.02;  // equality allowed within this multiple of rho_bar
    double locus_tol = 1e-10;    // |g| below this counts as equality
};

// g1 >= 0 for z <= -band and g2 <= 0 for w >= band, with near-equality only
// close to the background state. Margin = min(g1, -g2, locus violation).
CertReport check_source_signs(const GasParams& P, const SignGrid& grid = {}, double tolerance = 1e-12);

// Relative gap between the direct and completed-square forms of g1 and g2
// on Halton samples; margin = 1e-10 - gap.
CertReport check_square_identity(const GasParams& P, long samples = 20000, double rho_max = 4.0,
                                 double z_span = 8.0, double tolerance = 0.0);

struct LfResult {
    std::vector<GasState> cells;
    double t = 0.0;
    int steps = 0;
    double dt = 0.0;
    double mass0 = 0.0;
    double mass = 0.0;
};

// Two-point update u_i^{n+1} = (u_{i-1} + u_{i+1}) / 2 - dt / (2 dx) (f_{i+1} - f_{i-1})
// on the lattice x_min + i dx with the scheme's time step; ghosts hold (rho_bar, 0).
// Results are averaged onto the scheme's cells of width 2 dx; masses are lattice sums.
LfResult lax_friedrichs_run(const InitialData& u0, const MeshConfig& cfg);

// Sum over cells of 2 dx (|rho_a - rho_b| + |m_a - m_b|).
double l1_distance(const std::vector<GasState>& a, const std::vector<GasState>& b, double dx);

} // namespace isen
