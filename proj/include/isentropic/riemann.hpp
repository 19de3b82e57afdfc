// Exact Riemann solver for 1-D isentropic gas dynamics.
#pragma once

#include "isentropic/gas_model.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace isen {

class RiemannError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class WaveKind { Rarefaction, Shock, Vacuum };

const char* to_string(WaveKind k);

struct WavePattern {
    WaveKind family1 = WaveKind::Rarefaction;
    WaveKind family2 = WaveKind::Rarefaction;
};

// Piecewise-constant approximation of a rarefaction wave. For the 1-family
// the states share w and march in z; for the 2-family they share z and
// march in w (listed from uR towards uM).
struct RarefactionFan {
    int family = 1;
    int p = 2;
    std::vector<InvariantPair> states; // p entries
    std::vector<double> speeds;        // p - 1 ray slopes
};

struct RiemannSolution {
    GasState uL, uM, uR;
    WavePattern pattern;
    bool degenerate = false; // uL == uR
    // Speed interval of each wave; lo == hi for shocks.
    double s1_lo = 0.0, s1_hi = 0.0;
    double s2_lo = 0.0, s2_hi = 0.0;
    int iterations = 0;

    std::string case_name() const;
};

double shock_speed_S(double rho, double rho0, const GasParams& P);

// Velocity jump across a 1-wave (or 2-wave) from a side state of density
// rho_side to the middle density rho. Monotone increasing in rho.
double wave_jump(double rho, double rho_side, const GasParams& P);
double wave_jump_derivative(double rho, double rho_side, const GasParams& P);

RiemannSolution solve_riemann(const GasState& uL, const GasState& uR, const GasParams& P);

GasState sample(const RiemannSolution& sol, double xi, const GasParams& P);

// Slope of the ray separating fan states (z_a, w) and (z_b, w), 1-family.
double fan_ray_1(double z_a, double z_b, double w, const GasParams& P);

RarefactionFan build_fan(const GasState& uL, double zM, double dx, double alpha, const GasParams& P);
// 2-family mirror image: states from uR towards wM, rays in decreasing order.
RarefactionFan build_fan_2(const GasState& uR, double wM, double dx, double alpha, const GasParams& P);

double rh_residual(double sigma, const GasState& uMinus, const GasState& uPlus, const GasParams& P);

// Entropy production sigma [eta*] - [q*] of a front, nonnegative for admissible shocks.
double entropy_production(double sigma, const GasState& uMinus, const GasState& uPlus, const GasParams& P);

} // namespace isen
