// Time marching on the cell grid: averaging, cutoff projection, the running
// functional L_n and the decaying bound M_n.
//
// Cells have width 2 dx; cell c spans [x_min + 2 c dx, x_min + 2 (c + 1) dx).
// Construction k (k = 0..N) sits between cells k - 1 and k, spanning their
// centers; cells -1 and N are ghosts frozen at (rho_bar, 0).
#pragma once

#include "isentropic/construction.hpp"
#include "isentropic/gas_model.hpp"
#include "isentropic/initial_data.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace isen {

enum class Variant { Modified, StandardGodunov };

const char* to_string(Variant v);
Variant variant_from_string(const std::string& s);

class CflError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct MeshConfig {
    double dx = 0.05;
    double x_min = -20.0;
    double x_max = 20.0;
    double T = 5.0;
    double gamma = 2.0;
    double rho_bar = 1.0;
    double alpha = 0.75;
    double beta = 0.1;
    double mu = std::numeric_limits<double>::quiet_NaN();    // NaN: default for gamma
    double epsilon = 0.05;
    double delta = std::numeric_limits<double>::quiet_NaN(); // NaN: grid search
    Variant variant = Variant::Modified;

    // Filled by init; a positive dt is kept as given.
    double dt = 0.0;
    double M0 = 0.0;
    double E0 = 0.0;
};

// min(1.2, (1 + 1/(2 theta)) / 2); for theta >= 1/2 the admissible interval
// is empty and 1 is returned.
double default_mu(const GasParams& P);

// Largest delta with g1 > 2 delta and g2 < -2 delta on the margin regions,
// halved. The regions are sampled on a grid over the M0 box.
double select_delta(const GasParams& P, double M0, double E0, double epsilon, int n = 200);

struct TrackedFront {
    double x = 0.0; // position at the middle time
    Front front;
};

struct SchemeState {
    int n = 0;
    double t = 0.0;
    std::vector<GasState> cells;   // u^n
    std::vector<GasState> averages; // E^n, before the cutoff
    std::vector<double> prefix_J;  // I^n at cell centers
    double L = 0.0;
    double M = 0.0;
    std::vector<TrackedFront> fronts; // fronts of the last step
};

struct StepReport {
    double max_rh_residual = 0.0;
    double front_production = 0.0; // sum of sigma [eta*] - [q*] times dt
    double jensen = 0.0;           // averaging remainder terms added to L
    double cut_magnitude = 0.0;    // sum |z(E) - z| + |w(E) - w|
    double max_speed = 0.0;
    double conservation_defect = 0.0; // largest |defect| corrected in a construction
    int vacuum_cells = 0;
    int modified_cells = 0;
    int fallback_cells = 0; // modified variant: interfaces handled by the exact Riemann cell
    bool boundary_touched = false;
};

struct CutoffResult {
    GasState u;
    double cut = 0.0;
};

CutoffResult cutoff_project(const GasState& E, double Mn, double Ln, double Inj, double E0, double dx, double mu,
                            const GasParams& P);

// I_c = sum_{c' < c} 2 dx J(E_c') + dx J(E_c): the integral of J up to the center of cell c.
std::vector<double> prefix_integrals(const std::vector<GasState>& E, double dx, const GasParams& P);

double update_M(double Mn, double Ln, double dt, double delta, double epsilon, const GasParams& P);

// Remainder eta*(u) - eta*(E) - grad eta*(E) (u - E), nonnegative.
double jensen_remainder(const GasState& u, const GasState& E, const GasParams& P);

// Cell average of the initial data and its integral of J.
GasState initial_cell_average(const InitialData& u0, double a, double b);
double integral_J(const InitialData& u0, double a, double b, const GasParams& P);

class Scheme {
public:
    // Computes E0, M0, delta and dt (unless given), averages the data onto the grid.
    Scheme(MeshConfig cfg, const InitialData& u0);

    const MeshConfig& config() const { return cfg_; }
    const GasParams& params() const { return P_; }
    const SchemeState& state() const { return st_; }
    int n_cells() const { return static_cast<int>(st_.cells.size()); }
    double x_center(int c) const { return cfg_.x_min + (2 * c + 1) * cfg_.dx; }
    double mu() const { return mu_; }
    double delta() const { return delta_; }
    double L0() const { return L0_; }
    int total_steps() const { return n_steps_; }
    bool done() const { return st_.n >= n_steps_; }

    // Builds the construction between cells k - 1 and k of the current state.
    ConstructionPtr construction(int k) const;
    CellContext context(int k) const;

    StepReport step();

private:
    GasState cell_or_ghost(int c) const;

    MeshConfig cfg_;
    GasParams P_;
    double mu_ = 1.0;
    double delta_ = 0.0;
    double L0_ = 0.0;
    int n_steps_ = 0;
    SchemeState st_;
};

} // namespace isen
