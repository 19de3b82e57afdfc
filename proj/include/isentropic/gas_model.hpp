// Thermodynamics of the isentropic gamma-law gas: p(rho) = rho^gamma / gamma.
#pragma once

#include <utility>

namespace isen {

struct GasParams {
    double gamma = 2.0;
    double theta = 0.5;   // (gamma - 1) / 2
    double rho_bar = 1.0; // background density

    // Accepts 1 < gamma <= 3 and rho_bar > 0; throws std::domain_error otherwise.
    // gamma = 2 is admitted because the reference runs use it.
    static GasParams make(double gamma, double rho_bar);

    // rho_bar^theta / theta, the background value of w (and -z).
    double band_edge() const;
};

struct GasState {
    double rho = 0.0;
    double m = 0.0;

    bool is_vacuum() const { return rho <= 0.0; }
    double v() const { return rho > 0.0 ? m / rho : 0.0; }
};

struct InvariantPair {
    double z = 0.0;
    double w = 0.0;
    bool vacuum = false;
};

// x^e with x clamped below at zero; 0^e = 0.
double pow_pos(double x, double e);

GasState from_rho_v(double rho, double v);

double pressure(double rho, const GasParams& P);
double sound_speed(double rho, const GasParams& P); // rho^theta
std::pair<double, double> flux(const GasState& u, const GasParams& P);

InvariantPair to_invariants(const GasState& u, const GasParams& P);
GasState from_invariants(const InvariantPair& zw, const GasParams& P);
GasState from_invariants(double z, double w, const GasParams& P);

std::pair<double, double> char_speeds(const GasState& u, const GasParams& P);

// Mechanical energy eta* and its flux q*.
std::pair<double, double> entropy_pair(const GasState& u, const GasParams& P);
double eta_star(const GasState& u, const GasParams& P);
double q_star(const GasState& u, const GasParams& P);

// eta* minus its linearisation about (rho_bar, 0). Nonnegative.
double relative_energy_J(const GasState& u, const GasParams& P);
double correction_V(const GasState& u, const GasParams& P);

// Source terms of the transformed invariant equations.
double g1(const GasState& u, const GasParams& P);
double g2(const GasState& u, const GasParams& P);

// Completed-square forms of g1 and g2 in terms of (rho, z) and (rho, w).
// These are independent restatements used for cross-checking; rho > 0.
double g1_square_form(double rho, double z, const GasParams& P);
double g2_square_form(double rho, double w, const GasParams& P);

// Mirror (x, v) -> (-x, -v).
inline GasState mirror(const GasState& u) { return {u.rho, -u.m}; }

} // namespace isen
