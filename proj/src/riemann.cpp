#include "isentropic/riemann.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <sstream>

namespace isen {

const char* to_string(WaveKind k)
{
    switch (k) {
    case WaveKind::Rarefaction: return "rarefaction";
    case WaveKind::Shock: return "shock";
    case WaveKind::Vacuum: return "vacuum";
    }
    return "?";
}

std::string RiemannSolution::case_name() const
{
    if (degenerate) return "degenerate";
    if (pattern.family1 == WaveKind::Vacuum || pattern.family2 == WaveKind::Vacuum) return "vacuum";
    return std::string("1-") + to_string(pattern.family1) + "/2-" + to_string(pattern.family2);
}

double shock_speed_S(double rho, double rho0, const GasParams& P)
{
    if (!(rho0 > 0.0)) throw std::domain_error("shock_speed_S: rho0 must be positive");
    if (rho < 0.0) throw std::domain_error("shock_speed_S: negative density");
    const double g = P.gamma;
    const double d = rho - rho0;
    double slope; // (p(rho) - p(rho0)) / (rho - rho0)
    if (std::abs(d) <= 1e-6 * rho0) {
        // Taylor expansion of the secant slope about rho0.
        const double p1 = pow_pos(rho0, g - 1.0);
        const double p2 = (g - 1.0) * pow_pos(rho0, g - 2.0);
        const double p3 = (g - 1.0) * (g - 2.0) * pow_pos(rho0, g - 3.0);
        slope = p1 + 0.5 * p2 * d + p3 * d * d / 6.0;
    } else {
        slope = (pressure(rho, P) - pressure(rho0, P)) / d;
    }
    return std::sqrt(std::max(0.0, rho * slope / rho0));
}

double wave_jump(double rho, double rho_side, const GasParams& P)
{
    if (rho <= rho_side) {
        return (pow_pos(rho, P.theta) - pow_pos(rho_side, P.theta)) / P.theta;
    }
    const double dp = pressure(rho, P) - pressure(rho_side, P);
    return std::sqrt(dp * (rho - rho_side) / (rho * rho_side));
}

double wave_jump_derivative(double rho, double rho_side, const GasParams& P)
{
    if (rho <= rho_side) return pow_pos(rho, P.theta - 1.0);
    const double dp = pressure(rho, P) - pressure(rho_side, P);
    const double dr = rho - rho_side;
    const double F = dp * dr / (rho * rho_side);
    const double dF = (pow_pos(rho, P.gamma - 1.0) * dr + dp) / (rho * rho_side) - dp * dr / (rho * rho * rho_side);
    return dF / (2.0 * std::sqrt(F));
}

namespace {

void check_state(const GasState& u, const char* side)
{
    if (!std::isfinite(u.rho) || !std::isfinite(u.m) || u.rho < 0.0) {
        std::ostringstream os;
        os << "solve_riemann: invalid " << side << " state (" << u.rho << ", " << u.m << ")";
        throw RiemannError(os.str());
    }
}

} // namespace

RiemannSolution solve_riemann(const GasState& uL_in, const GasState& uR_in, const GasParams& P)
{
    check_state(uL_in, "left");
    check_state(uR_in, "right");
    const GasState uL = uL_in.rho > 0.0 ? uL_in : GasState{0.0, 0.0};
    const GasState uR = uR_in.rho > 0.0 ? uR_in : GasState{0.0, 0.0};

    RiemannSolution sol;
    sol.uL = uL;
    sol.uR = uR;

    if (uL.rho == uR.rho && uL.m == uR.m) {
        sol.degenerate = true;
        sol.uM = uL;
        const auto [l1, l2] = char_speeds(uL, P);
        sol.s1_lo = sol.s1_hi = l1;
        sol.s2_lo = sol.s2_hi = l2;
        if (uL.rho == 0.0) sol.pattern = {WaveKind::Vacuum, WaveKind::Vacuum};
        return sol;
    }

    const InvariantPair iL = to_invariants(uL, P);
    const InvariantPair iR = to_invariants(uR, P);

    if (uL.rho == 0.0) {
        sol.pattern = {WaveKind::Vacuum, WaveKind::Rarefaction};
        sol.uM = {0.0, 0.0};
        sol.s1_lo = sol.s1_hi = sol.s2_lo = iR.z;
        sol.s2_hi = char_speeds(uR, P).second;
        return sol;
    }
    if (uR.rho == 0.0) {
        sol.pattern = {WaveKind::Rarefaction, WaveKind::Vacuum};
        sol.uM = {0.0, 0.0};
        sol.s1_lo = char_speeds(uL, P).first;
        sol.s1_hi = sol.s2_lo = sol.s2_hi = iL.w;
        return sol;
    }
    if (iL.w <= iR.z) {
        sol.pattern = {WaveKind::Vacuum, WaveKind::Vacuum};
        sol.uM = {0.0, 0.0};
        sol.s1_lo = char_speeds(uL, P).first;
        sol.s1_hi = iL.w;
        sol.s2_lo = iR.z;
        sol.s2_hi = char_speeds(uR, P).second;
        return sol;
    }

    const double vL = uL.v();
    const double vR = uR.v();
    const double target = vL - vR;
    auto phi = [&](double r) { return wave_jump(r, uL.rho, P) + wave_jump(r, uR.rho, P) - target; };
    auto dphi = [&](double r) {
        return wave_jump_derivative(r, uL.rho, P) + wave_jump_derivative(r, uR.rho, P);
    };

    double lo = 0.0;
    double hi = std::max(uL.rho, uR.rho);
    int it = 0;
    while (phi(hi) < 0.0) {
        lo = hi;
        hi *= 2.0;
        if (++it > 200 || !std::isfinite(hi)) {
            std::ostringstream os;
            os << "solve_riemann: failed to bracket middle density, bracket [" << lo << ", " << hi << "]";
            throw RiemannError(os.str());
        }
    }
    const double tol = 1e-14 * (1.0 + std::max(uL.rho, uR.rho));
    while (hi - lo > tol && it < 200) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (phi(mid) < 0.0) lo = mid; else hi = mid;
        ++it;
    }
    if (hi - lo > tol && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi) {
        std::ostringstream os;
        os << "solve_riemann: bisection did not converge, bracket [" << lo << ", " << hi << "]";
        throw RiemannError(os.str());
    }
    double rhoM = 0.5 * (lo + hi);
    for (int k = 0; k < 3 && it < 200; ++k, ++it) {
        const double d = dphi(rhoM);
        if (!(d > 0.0)) break;
        const double next = rhoM - phi(rhoM) / d;
        if (!(next >= lo && next <= hi)) break;
        rhoM = next;
    }
    sol.iterations = it;

    const double vM = 0.5 * ((vL - wave_jump(rhoM, uL.rho, P)) + (vR + wave_jump(rhoM, uR.rho, P)));
    sol.uM = from_rho_v(rhoM, vM);

    const auto lM = char_speeds(sol.uM, P);
    if (rhoM > uL.rho) {
        sol.pattern.family1 = WaveKind::Shock;
        sol.s1_lo = sol.s1_hi = vL - shock_speed_S(rhoM, uL.rho, P);
    } else {
        sol.pattern.family1 = WaveKind::Rarefaction;
        sol.s1_lo = char_speeds(uL, P).first;
        sol.s1_hi = lM.first;
    }
    if (rhoM > uR.rho) {
        sol.pattern.family2 = WaveKind::Shock;
        sol.s2_lo = sol.s2_hi = vR + shock_speed_S(rhoM, uR.rho, P);
    } else {
        sol.pattern.family2 = WaveKind::Rarefaction;
        sol.s2_lo = lM.second;
        sol.s2_hi = char_speeds(uR, P).second;
    }
    return sol;
}

GasState sample(const RiemannSolution& sol, double xi, const GasParams& P)
{
    if (sol.degenerate) return sol.uL;
    const double th = P.theta;

    // Left of and inside the 1-wave.
    if (sol.pattern.family1 == WaveKind::Shock) {
        if (xi < sol.s1_lo) return sol.uL;
    } else if (sol.uL.rho > 0.0) {
        if (xi <= sol.s1_lo) return sol.uL;
        if (xi < sol.s1_hi) {
            const double wL = to_invariants(sol.uL, P).w;
            const double c = std::max(0.0, th * (wL - xi) / (th + 1.0));
            return from_rho_v(pow_pos(c, 1.0 / th), xi + c);
        }
    }
    // Right of and inside the 2-wave.
    if (sol.pattern.family2 == WaveKind::Shock) {
        if (xi > sol.s2_hi) return sol.uR;
    } else if (sol.uR.rho > 0.0) {
        if (xi >= sol.s2_hi) return sol.uR;
        if (xi > sol.s2_lo) {
            const double zR = to_invariants(sol.uR, P).z;
            const double c = std::max(0.0, th * (xi - zR) / (th + 1.0));
            return from_rho_v(pow_pos(c, 1.0 / th), xi - c);
        }
    }
    return sol.uM;
}

double fan_ray_1(double z_a, double z_b, double w, const GasParams& P)
{
    const double th = P.theta;
    const double rho_a = pow_pos(0.5 * th * (w - z_a), 1.0 / th);
    const double rho_b = pow_pos(0.5 * th * (w - z_b), 1.0 / th);
    const double v_a = 0.5 * (w + z_a);
    if (rho_a <= 0.0) return v_a;
    return v_a - shock_speed_S(rho_b, rho_a, P);
}

RarefactionFan build_fan(const GasState& uL, double zM, double dx, double alpha, const GasParams& P)
{
    const InvariantPair iL = to_invariants(uL, P);
    if (iL.vacuum) throw std::domain_error("build_fan: vacuum left state");
    const double zL = iL.z;
    if (zM < zL - 1e-14 * (1.0 + std::abs(zL))) throw std::domain_error("build_fan: zM < zL");
    if (!(alpha > 0.5 && alpha < 1.0)) throw std::domain_error("build_fan: alpha outside (1/2, 1)");
    zM = std::max(zM, zL);

    const double h = std::pow(dx, alpha);
    RarefactionFan fan;
    fan.family = 1;
    fan.p = std::max(static_cast<int>(std::floor((zM - zL) / h)) + 1, 2);
    fan.states.resize(fan.p);
    for (int i = 0; i < fan.p - 1; ++i) fan.states[i] = {zL + i * h, iL.w, false};
    fan.states[fan.p - 1] = {zM, iL.w, false};
    for (auto& s : fan.states) s.vacuum = s.w <= s.z;
    fan.speeds.resize(fan.p - 1);
    for (int i = 0; i + 1 < fan.p; ++i) {
        fan.speeds[i] = fan_ray_1(fan.states[i].z, fan.states[i + 1].z, iL.w, P);
    }
    return fan;
}

RarefactionFan build_fan_2(const GasState& uR, double wM, double dx, double alpha, const GasParams& P)
{
    RarefactionFan fan = build_fan(mirror(uR), -wM, dx, alpha, P);
    fan.family = 2;
    for (auto& s : fan.states) s = {-s.w, -s.z, s.vacuum};
    for (auto& s : fan.speeds) s = -s;
    return fan;
}

double rh_residual(double sigma, const GasState& a, const GasState& b, const GasParams& P)
{
    const auto [fa0, fa1] = flux(a, P);
    const auto [fb0, fb1] = flux(b, P);
    const double r0 = (fb0 - fa0) - sigma * (b.rho - a.rho);
    const double r1 = (fb1 - fa1) - sigma * (b.m - a.m);
    return std::max(std::abs(r0), std::abs(r1));
}

double entropy_production(double sigma, const GasState& a, const GasState& b, const GasParams& P)
{
    return sigma * (eta_star(b, P) - eta_star(a, P)) - (q_star(b, P) - q_star(a, P));
}

} // namespace isen
