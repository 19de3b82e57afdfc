#include "isentropic/gas_model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace isen {

GasParams GasParams::make(double gamma, double rho_bar)
{
    if (!(gamma > 1.0 && gamma <= 3.0)) {
        throw std::domain_error("gamma must lie in (1, 3], got " + std::to_string(gamma));
    }
    if (!(rho_bar > 0.0) || !std::isfinite(rho_bar)) {
        throw std::domain_error("rho_bar must be positive, got " + std::to_string(rho_bar));
    }
    GasParams P;
    P.gamma = gamma;
    P.theta = 0.5 * (gamma - 1.0);
    P.rho_bar = rho_bar;
    return P;
}

double GasParams::band_edge() const { return pow_pos(rho_bar, theta) / theta; }

double pow_pos(double x, double e)
{
    if (x <= 0.0) return 0.0;
    return std::exp(e * std::log(x));
}

GasState from_rho_v(double rho, double v)
{
    if (rho <= 0.0) return {0.0, 0.0};
    return {rho, rho * v};
}

double pressure(double rho, const GasParams& P)
{
    if (rho < 0.0) throw std::domain_error("pressure: negative density");
    return pow_pos(rho, P.gamma) / P.gamma;
}

double sound_speed(double rho, const GasParams& P) { return pow_pos(rho, P.theta); }

std::pair<double, double> flux(const GasState& u, const GasParams& P)
{
    if (u.rho <= 0.0) return {0.0, 0.0};
    return {u.m, u.m * u.m / u.rho + pressure(u.rho, P)};
}

InvariantPair to_invariants(const GasState& u, const GasParams& P)
{
    if (u.rho <= 0.0) return {0.0, 0.0, true};
    const double v = u.m / u.rho;
    const double c = pow_pos(u.rho, P.theta) / P.theta;
    return {v - c, v + c, false};
}

GasState from_invariants(double z, double w, const GasParams& P)
{
    if (w < z) throw std::domain_error("from_invariants: w < z");
    const double rho = pow_pos(0.5 * P.theta * (w - z), 1.0 / P.theta);
    return from_rho_v(rho, 0.5 * (w + z));
}

GasState from_invariants(const InvariantPair& zw, const GasParams& P)
{
    if (zw.vacuum) return {0.0, 0.0};
    return from_invariants(zw.z, zw.w, P);
}

std::pair<double, double> char_speeds(const GasState& u, const GasParams& P)
{
    const double v = u.v();
    const double c = sound_speed(u.rho, P);
    return {v - c, v + c};
}

double eta_star(const GasState& u, const GasParams& P)
{
    if (u.rho <= 0.0) return 0.0;
    const double g = P.gamma;
    return 0.5 * u.m * u.m / u.rho + pow_pos(u.rho, g) / (g * (g - 1.0));
}

double q_star(const GasState& u, const GasParams& P)
{
    if (u.rho <= 0.0) return 0.0;
    const double v = u.m / u.rho;
    return u.m * (0.5 * v * v + pow_pos(u.rho, P.gamma - 1.0) / (P.gamma - 1.0));
}

std::pair<double, double> entropy_pair(const GasState& u, const GasParams& P)
{
    return {eta_star(u, P), q_star(u, P)};
}

double relative_energy_J(const GasState& u, const GasParams& P)
{
    const double g = P.gamma;
    const double rb = P.rho_bar;
    const double value = eta_star(u, P) - pow_pos(rb, g - 1.0) / (g - 1.0) * u.rho + pow_pos(rb, g) / g;
    return value;
}

double correction_V(const GasState& u, const GasParams& P)
{
    return q_star(u, P) - pow_pos(P.rho_bar, P.gamma - 1.0) / (P.gamma - 1.0) * u.m;
}

namespace {

struct GTerms {
    double a;  // rho_bar^gamma / gamma
    double b;  // rho^(gamma+theta) / (gamma (gamma-1))
    double c;  // rho^gamma v / gamma
    double d;  // rho^(theta+1) v^2 / 2
    double e;  // rho_bar^(gamma-1) rho^(theta+1) / (gamma-1)
};

GTerms g_terms(const GasState& u, const GasParams& P)
{
    const double g = P.gamma;
    const double th = P.theta;
    const double v = u.v();
    return {pow_pos(P.rho_bar, g) / g,
            pow_pos(u.rho, g + th) / (g * (g - 1.0)),
            pow_pos(u.rho, g) * v / g,
            0.5 * pow_pos(u.rho, th + 1.0) * v * v,
            pow_pos(P.rho_bar, g - 1.0) * pow_pos(u.rho, th + 1.0) / (g - 1.0)};
}

} // namespace

double g1(const GasState& u, const GasParams& P)
{
    const auto [l1, l2] = char_speeds(u, P);
    const GTerms t = g_terms(u, P);
    return -t.a * l1 + t.b + t.c + t.d - t.e;
}

double g2(const GasState& u, const GasParams& P)
{
    const auto [l1, l2] = char_speeds(u, P);
    const GTerms t = g_terms(u, P);
    return -t.a * l2 - t.b + t.c - t.d + t.e;
}

double g1_square_form(double rho, double z, const GasParams& P)
{
    const double g = P.gamma;
    const double th = P.theta;
    const double rb = P.rho_bar;
    const double r1 = pow_pos(rho, th + 1.0);
    const double rbg = pow_pos(rb, g);
    const double inner = z - rbg / (g * r1) + (3.0 * g - 1.0) / (g * (g - 1.0)) * pow_pos(rho, th);
    return 0.5 * r1 * inner * inner
         + (g + 1.0) / (2.0 * g * g * (g - 1.0)) * pow_pos(rho, g + th)
         - pow_pos(rb, g - 1.0) * r1 / (g - 1.0)
         + (g + 1.0) / (g * g) * rbg * pow_pos(rho, th)
         - rbg * rbg / (2.0 * g * g * r1);
}

double g2_square_form(double rho, double w, const GasParams& P)
{
    const double g = P.gamma;
    const double th = P.theta;
    const double rb = P.rho_bar;
    const double r1 = pow_pos(rho, th + 1.0);
    const double rbg = pow_pos(rb, g);
    const double inner = w + rbg / (g * r1) - (3.0 * g - 1.0) / (g * (g - 1.0)) * pow_pos(rho, th);
    return -0.5 * r1 * inner * inner
         - (g + 1.0) / (2.0 * g * g * (g - 1.0)) * pow_pos(rho, g + th)
         + pow_pos(rb, g - 1.0) * r1 / (g - 1.0)
         - (g + 1.0) / (g * g) * rbg * pow_pos(rho, th)
         + rbg * rbg / (2.0 * g * g * r1);
}

} // namespace isen
