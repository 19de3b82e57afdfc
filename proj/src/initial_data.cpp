#include "isentropic/initial_data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

namespace isen {

namespace {

GasState background(const GasParams& P) { return {P.rho_bar, 0.0}; }

} // namespace

InitialData constant_data(const GasParams& P)
{
    InitialData d;
    d.name = "constant";
    d.u = [bg = background(P)](double) { return bg; };
    return d;
}

InitialData square_pulse(const GasParams& P, double amplitude, double a, double b)
{
    if (!(amplitude >= 0.0) || !(b > a)) throw std::invalid_argument("square_pulse: need amplitude >= 0 and b > a");
    InitialData d;
    d.name = "square-pulse";
    d.u = [bg = background(P), amplitude, a, b](double x) {
        return (x >= a && x < b) ? GasState{amplitude, 0.0} : bg;
    };
    d.breakpoints = {a, b};
    d.support_lo = a;
    d.support_hi = b;
    return d;
}

InitialData smooth_pulse(const GasParams& P, double amplitude, double half_width)
{
    if (!(half_width > 0.0)) throw std::invalid_argument("smooth_pulse: half_width must be positive");
    if (!(P.rho_bar + std::min(amplitude, 0.0) >= 0.0)) throw std::invalid_argument("smooth_pulse: negative density");
    InitialData d;
    d.name = "smooth-pulse";
    d.u = [bg = background(P), amplitude, half_width](double x) {
        if (std::abs(x) >= half_width) return bg;
        const double c = std::cos(0.5 * std::numbers::pi * x / half_width);
        return GasState{bg.rho + amplitude * c * c, 0.0};
    };
    d.breakpoints = {-half_width, half_width};
    d.support_lo = -half_width;
    d.support_hi = half_width;
    return d;
}

InitialData riemann_slab(const GasParams& P, const GasState& uL, const GasState& uR, double a, double b)
{
    if (!(a < 0.0 && b > 0.0)) throw std::invalid_argument("riemann_slab: need a < 0 < b");
    if (uL.rho < 0.0 || uR.rho < 0.0) throw std::invalid_argument("riemann_slab: negative density");
    InitialData d;
    d.name = "riemann";
    d.u = [bg = background(P), uL, uR, a, b](double x) {
        if (x >= a && x < 0.0) return uL;
        if (x >= 0.0 && x < b) return uR;
        return bg;
    };
    d.breakpoints = {a, 0.0, b};
    d.support_lo = a;
    d.support_hi = b;
    return d;
}

InitialData random_piecewise(const GasParams& P, std::uint64_t seed, int n_pieces, double a, double b, double rho_lo,
                        double rho_hi, double v_max)
{
    if (n_pieces < 1 || !(b > a) || !(rho_lo >= 0.0) || !(rho_hi >= rho_lo) || !(v_max >= 0.0)) {
        throw std::invalid_argument("random_piecewise: invalid parameters");
    }
    std::mt19937_64 gen(seed);
    // Draw from raw 53-bit mantissas so the sequence does not depend on the
    // standard library's distribution implementation.
    auto unit = [&gen]() { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
    std::vector<double> x(n_pieces + 1), rho(n_pieces + 1), v(n_pieces + 1, 0.0);
    for (int i = 0; i <= n_pieces; ++i) x[i] = a + (b - a) * i / n_pieces;
    for (int i = 0; i < n_pieces; ++i) {
        rho[i] = rho_lo + (rho_hi - rho_lo) * unit();
        v[i] = v_max * (2.0 * unit() - 1.0);
    }
    rho[n_pieces] = P.rho_bar;
    InitialData d = samples_data(P, x, rho, v);
    d.name = "random";
    return d;
}

InitialData samples_data(const GasParams& P, std::vector<double> x, std::vector<double> rho, std::vector<double> v)
{
    if (x.size() < 2 || rho.size() != x.size() || v.size() != x.size()) {
        throw std::invalid_argument("samples: need at least two rows of equal length");
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x[i]) || !std::isfinite(rho[i]) || !std::isfinite(v[i])) {
            throw std::invalid_argument("samples: non-finite value in row " + std::to_string(i));
        }
        if (rho[i] < 0.0) throw std::invalid_argument("samples: negative density in row " + std::to_string(i));
        if (i > 0 && !(x[i] > x[i - 1])) throw std::invalid_argument("samples: x must increase strictly");
    }
    InitialData d;
    d.name = "samples";
    d.breakpoints = x;
    d.support_lo = x.front();
    d.support_hi = x.back();
    d.u = [bg = background(P), x = std::move(x), rho = std::move(rho), v = std::move(v)](double s) {
        if (s < x.front() || s >= x.back()) return bg;
        const auto it = std::upper_bound(x.begin(), x.end(), s);
        const std::size_t i = static_cast<std::size_t>(it - x.begin()) - 1;
        return from_rho_v(rho[i], v[i]);
    };
    return d;
}

InitialData samples_file(const GasParams& P, const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open samples file " + path);
    std::vector<double> x, rho, v;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ls(line);
        double a, b, c;
        if (!(ls >> a)) continue;
        if (!(ls >> b >> c)) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected three columns x rho v");
        }
        x.push_back(a);
        rho.push_back(b);
        v.push_back(c);
    }
    return samples_data(P, std::move(x), std::move(rho), std::move(v));
}

} // namespace isen
