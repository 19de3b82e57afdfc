// Initial data: compact perturbations of the background state (rho_bar, 0).
#pragma once

#include "isentropic/gas_model.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace isen {

struct InitialData {
    std::string name;
    std::function<GasState(double)> u;
    // Points where u may jump; quadrature splits there.
    std::vector<double> breakpoints;
    // u equals (rho_bar, 0) outside [support_lo, support_hi].
    double support_lo = 0.0;
    double support_hi = 0.0;
};

InitialData constant_data(const GasParams& P);

// rho = amplitude on [a, b], v = 0.
InitialData square_pulse(const GasParams& P, double amplitude, double a, double b);

// rho = rho_bar + amplitude cos^2(pi x / (2 half_width)) on |x| < half_width, v = 0.
InitialData smooth_pulse(const GasParams& P, double amplitude, double half_width);

// uL on [a, 0), uR on [0, b), background elsewhere.
InitialData riemann_slab(const GasParams& P, const GasState& uL, const GasState& uR, double a, double b);

// n_pieces random constant states on [a, b]; rho in [rho_lo, rho_hi], |v| <= v_max.
InitialData random_piecewise(const GasParams& P, std::uint64_t seed, int n_pieces, double a, double b, double rho_lo,
                        double rho_hi, double v_max);

// Piecewise-constant data from samples (x_i, rho_i, v_i): the i-th state holds
// on [x_i, x_{i+1}); the last sample only closes the support.
InitialData samples_data(const GasParams& P, std::vector<double> x, std::vector<double> rho, std::vector<double> v);

// Reads a whitespace- or comma-separated three-column file; '#' starts a comment.
InitialData samples_file(const GasParams& P, const std::string& path);

} // namespace isen
