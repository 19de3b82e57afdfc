#include "isentropic/verify.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace isen {

std::string CertReport::to_text() const
{
    std::string pt;
    for (std::size_t i = 0; i < worst_point.size(); ++i) {
        pt += fmt::format("{}{:.17g}", i ? ", " : "", worst_point[i]);
    }
    return fmt::format("claim={} samples={} worst_margin={:.6e} worst_point=({}) tolerance={:.3e} pass={}", claim,
                       samples, worst_margin, pt, tolerance, pass ? "true" : "false");
}

double poly_f(double t, double g)
{
    const double th = 0.5 * (g - 1.0);
    return (5.0 * g - 3.0) * pow_pos(t, 3.0 * th + 1.0) - 2.0 * (3.0 * g - 1.0) * pow_pos(t, 2.0 * th + 1.0) +
           g * (3.0 - g) * pow_pos(t, th + 1.0) - (3.0 - g) * (g - 1.0) * pow_pos(t, th) + 2.0 * (g - 1.0);
}

double poly_g(double t, double g)
{
    return (g + 1.0) / (2.0 * g * g * (g - 1.0)) * std::pow(t, 2.0 * g) - std::pow(t, g + 1.0) / (g - 1.0) +
           (g + 1.0) / (g * g) * std::pow(t, g) - 1.0 / (2.0 * g * g);
}

namespace {

CertReport scan_1d(const std::string& claim, double a, double b, long samples, double tolerance,
                   double (*fn)(double, double), double gamma)
{
    CertReport r;
    r.claim = claim;
    r.tolerance = tolerance;
    r.samples = samples;
    r.worst_margin = std::numeric_limits<double>::infinity();
    for (long i = 0; i < samples; ++i) {
        const double t = a + (b - a) * static_cast<double>(i) / static_cast<double>(samples - 1);
        const double v = fn(t, gamma);
        if (v < r.worst_margin) {
            r.worst_margin = v;
            r.worst_point = {gamma, t};
        }
    }
    r.pass = r.worst_margin >= -tolerance;
    return r;
}

double halton(long i, int base)
{
    double f = 1.0, r = 0.0;
    while (i > 0) {
        f /= base;
        r += f * static_cast<double>(i % base);
        i /= base;
    }
    return r;
}

} // namespace

CertReport check_f_nonneg(double gamma, long samples, double tolerance)
{
    return scan_1d("f-nonneg", 0.0, 1.0, std::max(samples, 2L), tolerance, poly_f, gamma);
}

CertReport check_g_nonneg(double gamma, long samples, double t_max, double tolerance)
{
    return scan_1d("g-nonneg", 1.0, t_max, std::max(samples, 2L), tolerance, poly_g, gamma);
}

CertReport check_source_signs(const GasParams& P, const SignGrid& grid, double tolerance)
{
    CertReport r;
    r.claim = "source-signs";
    r.tolerance = tolerance;
    r.worst_margin = std::numeric_limits<double>::infinity();
    const double band = P.band_edge();
    const double span = grid.span_factor * band;
    const double rho_max = grid.rho_max_factor * P.rho_bar;
    const double radius = grid.locus_radius * P.rho_bar;
    auto consider = [&](double margin, std::vector<double> pt) {
        if (margin < r.worst_margin) {
            r.worst_margin = margin;
            r.worst_point = std::move(pt);
        }
    };
    for (int i = 0; i < grid.n; ++i) {
        const double rho = rho_max * i / (grid.n - 1);
        for (int k = 0; k < grid.n; ++k) {
            // z from -band down to -band - span; w mirrored.
            const double z = -band - span * k / (grid.n - 1);
            const double w = -z;
            const double s = pow_pos(rho, P.theta) / P.theta;
            const GasState a = from_rho_v(rho, z + s);
            const GasState b = from_rho_v(rho, w - s);
            const double v1 = rho > 0.0 ? g1(a, P) : -pow_pos(P.rho_bar, P.gamma) / P.gamma * z;
            const double v2 = rho > 0.0 ? g2(b, P) : -pow_pos(P.rho_bar, P.gamma) / P.gamma * w;
            consider(v1, {1.0, rho, z});
            consider(-v2, {2.0, rho, w});
            r.samples += 2;
            // Near-equality must stay close to the background state.
            const double dist = std::hypot(rho - P.rho_bar, z + band);
            if (dist > radius) {
                if (std::abs(v1) <= grid.locus_tol) consider(-1.0, {1.0, rho, z});
                if (std::abs(v2) <= grid.locus_tol) consider(-1.0, {2.0, rho, w});
            }
        }
    }
    r.pass = r.worst_margin >= -tolerance;
    return r;
}

CertReport check_square_identity(const GasParams& P, long samples, double rho_max, double z_span, double tolerance)
{
    CertReport r;
    r.claim = "square-identity";
    r.tolerance = tolerance;
    r.samples = samples;
    r.worst_margin = std::numeric_limits<double>::infinity();
    const double band = P.band_edge();
    auto check = [&](double rho, double z) {
        const double s = pow_pos(rho, P.theta) / P.theta;
        const GasState u = from_rho_v(rho, z + s);
        const double d1 = g1(u, P);
        const double q1 = g1_square_form(rho, z, P);
        const double w = z + 2.0 * s;
        const double d2 = g2(u, P);
        const double q2 = g2_square_form(rho, w, P);
        const double gap1 = std::abs(d1 - q1) / std::max({1.0, std::abs(d1), std::abs(q1)});
        const double gap2 = std::abs(d2 - q2) / std::max({1.0, std::abs(d2), std::abs(q2)});
        const double margin = 1e-10 - std::max(gap1, gap2);
        if (margin < r.worst_margin) {
            r.worst_margin = margin;
            r.worst_point = {rho, z};
        }
    };
    check(P.rho_bar, -band);
    check(rho_max, -band - z_span);
    check(rho_max, -band + z_span);
    for (long i = 1; i < samples; ++i) {
        const double rho = 1e-3 * P.rho_bar + (rho_max - 1e-3 * P.rho_bar) * halton(i, 2);
        const double z = -band - z_span + 2.0 * z_span * halton(i, 3);
        check(rho, z);
    }
    r.samples = samples + 2;
    r.pass = r.worst_margin >= -tolerance;
    return r;
}

LfResult lax_friedrichs_run(const InitialData& u0, const MeshConfig& cfg_in)
{
    const GasParams P = GasParams::make(cfg_in.gamma, cfg_in.rho_bar);
    MeshConfig cfg = cfg_in;
    if (!(cfg.dt > 0.0)) {
        // Same step as the scheme would take.
        const Scheme s(cfg, u0);
        cfg = s.config();
    }
    const double dx = cfg.dx;
    const int N = static_cast<int>(std::lround((cfg.x_max - cfg.x_min) / (2.0 * dx)));
    const int n_pts = 2 * N + 1; // lattice points x_min + i dx, i = 0..2N
    std::vector<GasState> u(n_pts), next(n_pts);
    for (int i = 0; i < n_pts; ++i) {
        const double x = cfg.x_min + i * dx;
        u[i] = initial_cell_average(u0, x - 0.5 * dx, x + 0.5 * dx);
    }
    auto lattice_mass = [&] {
        double m = 0.0;
        for (const auto& q : u) m += dx * q.rho;
        return m;
    };
    LfResult out;
    out.dt = cfg.dt;
    out.mass0 = lattice_mass();
    const int n_steps = static_cast<int>(std::ceil(cfg.T / cfg.dt - 1e-9));
    const double ratio = cfg.dt / (2.0 * dx);
    const GasState bg{P.rho_bar, 0.0};
    std::vector<std::pair<double, double>> F(n_pts + 2);
    for (int n = 0; n < n_steps; ++n) {
        auto at = [&](int i) { return (i < 0 || i >= n_pts) ? bg : u[i]; };
        double smax = 0.0;
        for (int i = -1; i <= n_pts; ++i) {
            const GasState q = at(i);
            F[i + 1] = flux(q, P);
            if (q.rho > 0.0) {
                const auto [l1, l2] = char_speeds(q, P);
                smax = std::max({smax, std::abs(l1), std::abs(l2)});
            }
        }
        if (smax * cfg.dt > dx) {
            std::ostringstream os;
            os << "Lax-Friedrichs CFL violation at step " << n << ": speed " << smax;
            throw CflError(os.str());
        }
        for (int i = 0; i < n_pts; ++i) {
            const GasState a = at(i - 1);
            const GasState b = at(i + 1);
            next[i] = {0.5 * (a.rho + b.rho) - ratio * (F[i + 2].first - F[i].first),
                       0.5 * (a.m + b.m) - ratio * (F[i + 2].second - F[i].second)};
            if (next[i].rho < 0.0) next[i] = {0.0, 0.0};
        }
        u.swap(next);
        ++out.steps;
    }
    out.t = out.steps * cfg.dt;
    out.mass = lattice_mass();
    // Cell c covers half of point 2c, all of point 2c + 1 and half of point 2c + 2.
    out.cells.resize(N);
    for (int c = 0; c < N; ++c) {
        const GasState& l = u[2 * c];
        const GasState& m = u[2 * c + 1];
        const GasState& r = u[2 * c + 2];
        out.cells[c] = {0.25 * l.rho + 0.5 * m.rho + 0.25 * r.rho, 0.25 * l.m + 0.5 * m.m + 0.25 * r.m};
    }
    return out;
}

double l1_distance(const std::vector<GasState>& a, const std::vector<GasState>& b, double dx)
{
    const std::size_t n = std::min(a.size(), b.size());
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += 2.0 * dx * (std::abs(a[i].rho - b[i].rho) + std::abs(a[i].m - b[i].m));
    return s;
}

} // namespace isen
