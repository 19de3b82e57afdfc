// In-cell wave constructions on [x_{j-1}, x_{j+1}) x [t_n, t_{n+1}).
//
// Coordinates are local: s in [0, 2 dx] with the Riemann problem sitting at
// s = dx, and tau = t - t_n in [0, dt].
#pragma once

#include "isentropic/gas_model.hpp"
#include "isentropic/riemann.hpp"

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace isen {

class ConstructionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A discontinuity x = dx + speed * tau inside the cell, with its one-sided
// limits at the middle time tau = dt / 2.
struct Front {
    double speed = 0.0;
    GasState left, right;
    double rh_residual = 0.0;
    double production = 0.0; // sigma [eta*] - [q*]
    std::string kind;        // "fan", "junction", "middle", "shock", "edge"
};

// Data the construction needs from the surrounding scheme.
struct CellContext {
    double dx = 0.0;
    double dt = 0.0;
    double alpha = 0.75;
    double beta = 0.1;
    double E0 = 0.0;
    double M_next = 0.0;     // M_{n+1}
    double L = 0.0;          // L_n
    double I_left = 0.0;     // integral of J(u_{n,0}) up to the left anchor
    double I_right = 0.0;    // integral of J(u_{n,0}) up to the right anchor
};

class CellConstruction {
public:
    virtual ~CellConstruction() = default;

    virtual GasState eval(double s, double tau) const = 0;
    // First-pass state (frozen integrands); equals eval() where no two-pass rule applies.
    virtual GasState eval_check(double s, double tau) const { return eval(s, tau); }
    // Discontinuity locations inside (0, 2 dx) at time tau, ascending.
    virtual std::vector<double> breakpoints(double tau) const = 0;
    virtual std::string kind() const = 0;

    const std::vector<Front>& fronts() const { return fronts_; }
    double max_rh_residual() const;
    double dx() const { return dx_; }
    double dt() const { return dt_; }

    // Largest |u_check - u| over a sample lattice of the cell (sup norm over rho and m).
    double two_pass_gap(int n_tau = 4, int n_s = 8) const;

protected:
    double dx_ = 0.0;
    double dt_ = 0.0;
    std::vector<Front> fronts_;
};

using ConstructionPtr = std::unique_ptr<CellConstruction>;

// u^Delta identically equal to a constant state.
ConstructionPtr make_constant_cell(const GasState& u, double dx, double dt);

// Exact self-similar Riemann solution (baseline Godunov).
ConstructionPtr make_exact_cell(const RiemannSolution& sol, double dx, double dt, const GasParams& P);

// Modified construction with perturbed fan, middle and outer pieces.
ConstructionPtr build_cell(const GasState& uL, const GasState& uR, const CellContext& ctx, const GasParams& P);

// Near-vacuum construction (middle density at most dx^beta).
ConstructionPtr build_cell_vacuum(const GasState& uL, const GasState& uR, const RiemannSolution& sol,
                                  const CellContext& ctx, const GasParams& P);

// Dispatches between the constant, regular and near-vacuum paths.
ConstructionPtr construct(const GasState& uL, const GasState& uR, const CellContext& ctx, const GasParams& P);

// Quantities of the near-vacuum construction exposed for inspection.
struct VacuumSideInfo {
    bool truncated_fan = false; // the dense-side branch
    InvariantPair u1, u2, u3, u4;
    double D = 0.0;
    double U = 0.0;
};
const VacuumSideInfo* vacuum_left_info(const CellConstruction& c);

} // namespace isen
