// Independent reference computations used by the tests. None of these call
// into the library beyond plain state structs.
#pragma once

#include "isentropic/gas_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

namespace oracle {

inline double p_of(double rho, double g) { return std::pow(rho, g) / g; }

// Velocity jump along the side wave curve, Hugoniot branch for compression.
inline double side_jump(double rho, double rho_k, double g)
{
    const double th = 0.5 * (g - 1.0);
    if (rho > rho_k) return std::sqrt((p_of(rho, g) - p_of(rho_k, g)) * (rho - rho_k) / (rho * rho_k));
    return (std::pow(rho, th) - std::pow(rho_k, th)) / th;
}

// Middle density by plain bisection on [0, 1e4].
inline double middle_density(double rhoL, double vL, double rhoR, double vR, double g)
{
    auto F = [&](double r) { return side_jump(r, rhoL, g) + side_jump(r, rhoR, g) + vR - vL; };
    double lo = 0.0, hi = 1e4;
    if (F(lo) >= 0.0) return 0.0;
    for (int i = 0; i < 400 && hi - lo > 1e-15 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        (F(mid) > 0.0 ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

struct Env {
    double min_z = std::numeric_limits<double>::infinity();
    double max_w = -std::numeric_limits<double>::infinity();
    double min_zt = std::numeric_limits<double>::infinity();
    double max_wt = -std::numeric_limits<double>::infinity();
};

// Direct scan of the invariants, shifted by a running trapezoid-free J sum.
inline Env scan(const std::vector<isen::GasState>& cells, double dx, double g, double rho_bar)
{
    const double th = 0.5 * (g - 1.0);
    Env e;
    double acc = 0.0;
    for (const auto& u : cells) {
        const double v = u.rho > 0.0 ? u.m / u.rho : 0.0;
        const double J = u.rho > 0.0 ? 0.5 * u.rho * v * v + std::pow(u.rho, g) / (g * (g - 1.0)) -
                                           std::pow(rho_bar, g - 1.0) / (g - 1.0) * u.rho + std::pow(rho_bar, g) / g
                                     : std::pow(rho_bar, g) / g;
        const double I = acc + dx * J;
        acc += 2.0 * dx * J;
        if (u.rho <= 0.0) continue;
        const double c = std::pow(u.rho, th) / th;
        e.min_z = std::min(e.min_z, v - c);
        e.max_w = std::max(e.max_w, v + c);
        e.min_zt = std::min(e.min_zt, v - c - I);
        e.max_wt = std::max(e.max_wt, v + c - I);
    }
    return e;
}

} // namespace oracle
