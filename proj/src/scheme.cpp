#include "isentropic/scheme.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace isen {

const char* to_string(Variant v)
{
    return v == Variant::Modified ? "modified" : "godunov";
}

Variant variant_from_string(const std::string& s)
{
    if (s == "modified") return Variant::Modified;
    if (s == "godunov" || s == "standard") return Variant::StandardGodunov;
    throw std::invalid_argument("unknown scheme variant '" + s + "' (expected modified or godunov)");
}

double default_mu(const GasParams& P)
{
    const double upper = 1.0 / (2.0 * P.theta);
    if (upper <= 1.0) return 1.0;
    return std::min(1.2, 0.5 * (1.0 + upper));
}

double select_delta(const GasParams& P, double M0, double E0, double epsilon, int n)
{
    const double band = P.band_edge();
    const double z_hi = -band - 0.5 * epsilon;
    const double w_lo = band + 0.5 * epsilon;
    // The box may be thinner than the margin strip (data inside the band).
    const double z_lo = std::min(-M0 - E0, z_hi);
    const double w_hi = std::max(M0 + E0, w_lo);
    double m = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= n; ++i) {
        const double z = z_lo + (z_hi - z_lo) * i / n;
        const double w = w_hi - (w_hi - w_lo) * i / n;
        const double smax_z = 0.5 * (w_hi - z);  // rho^theta/theta range keeping w <= w_hi
        const double smax_w = 0.5 * (w - z_lo);  // keeping z >= z_lo
        for (int k = 0; k <= n; ++k) {
            const double s1 = smax_z * k / n;
            const GasState a = from_rho_v(pow_pos(P.theta * s1, 1.0 / P.theta), z + s1);
            m = std::min(m, a.rho > 0.0 ? g1(a, P) : -pow_pos(P.rho_bar, P.gamma) / P.gamma * z);
            const double s2 = smax_w * k / n;
            const GasState b = from_rho_v(pow_pos(P.theta * s2, 1.0 / P.theta), w - s2);
            m = std::min(m, b.rho > 0.0 ? -g2(b, P) : pow_pos(P.rho_bar, P.gamma) / P.gamma * w);
        }
    }
    if (!(m > 0.0)) {
        std::ostringstream os;
        os << "select_delta: margin " << m << " is not positive";
        throw std::runtime_error(os.str());
    }
    return 0.5 * (0.5 * m);
}

CutoffResult cutoff_project(const GasState& E, double Mn, double Ln, double Inj, double E0, double dx, double mu,
                            const GasParams& P)
{
    CutoffResult r;
    if (E.rho < std::pow(dx, mu)) {
        r.u = {0.0, 0.0};
        if (E.rho > 0.0) {
            const InvariantPair q = to_invariants(E, P);
            r.cut = q.w - q.z;
        }
        return r;
    }
    const InvariantPair q = to_invariants(E, P);
    const double z = std::max(q.z, -Mn - E0 - Ln + Inj);
    const double w = std::min(q.w, Mn + Ln + Inj);
    r.cut = std::abs(z - q.z) + std::abs(w - q.w);
    if (r.cut == 0.0) {
        r.u = E;
    } else if (w <= z) {
        r.u = {0.0, 0.0};
    } else {
        r.u = from_invariants(z, w, P);
    }
    return r;
}

std::vector<double> prefix_integrals(const std::vector<GasState>& E, double dx, const GasParams& P)
{
    std::vector<double> I(E.size());
    double acc = 0.0;
    for (std::size_t c = 0; c < E.size(); ++c) {
        const double j = relative_energy_J(E[c], P);
        I[c] = acc + dx * j;
        acc += 2.0 * dx * j;
    }
    return I;
}

double update_M(double Mn, double Ln, double dt, double delta, double epsilon, const GasParams& P)
{
    if (Mn + Ln >= P.band_edge() + epsilon) return Mn - delta * dt;
    return Mn;
}

double jensen_remainder(const GasState& u, const GasState& E, const GasParams& P)
{
    if (E.rho <= 0.0) return eta_star(u, P);
    const double v = E.m / E.rho;
    const double d_rho = -0.5 * v * v + pow_pos(E.rho, P.gamma - 1.0) / (P.gamma - 1.0);
    return eta_star(u, P) - eta_star(E, P) - d_rho * (u.rho - E.rho) - v * (u.m - E.m);
}

namespace {

constexpr std::array<double, 3> kGx{-0.7745966692414834, 0.0, 0.7745966692414834};
constexpr std::array<double, 3> kGw{0.5555555555555556, 0.8888888888888888, 0.5555555555555556};

// Sub-intervals of [a, b] split at the data breakpoints, each further cut in k parts.
std::vector<double> knots(const InitialData& u0, double a, double b, int k)
{
    std::vector<double> pts{a};
    for (double x : u0.breakpoints) {
        if (x > a && x < b) pts.push_back(x);
    }
    pts.push_back(b);
    std::vector<double> out{a};
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        for (int q = 1; q <= k; ++q) out.push_back(pts[i] + (pts[i + 1] - pts[i]) * q / k);
    }
    out.back() = b;
    return out;
}

template <class F>
void gauss_over(const std::vector<double>& kn, F&& f)
{
    for (std::size_t i = 0; i + 1 < kn.size(); ++i) {
        const double a = kn[i];
        const double b = kn[i + 1];
        if (!(b > a)) continue;
        for (int q = 0; q < 3; ++q) f(0.5 * (a + b) + 0.5 * (b - a) * kGx[q], 0.5 * (b - a) * kGw[q]);
    }
}

constexpr int kInitialSplit = 8;

struct Node {
    double x;   // global position
    double wgt; // quadrature weight
    GasState u;
};

GasState add(const GasState& a, const GasState& b) { return {a.rho + b.rho, a.m + b.m}; }
GasState scale(const GasState& a, double s) { return {a.rho * s, a.m * s}; }

// Gauss nodes of u(., dt) on local [a, b], split at the construction's breakpoints.
void half_nodes(const CellConstruction& c, double a, double b, double x_offset, std::vector<Node>& out,
                GasState& integral)
{
    std::vector<double> pts{a};
    for (double x : c.breakpoints(c.dt())) {
        if (x > a && x < b) pts.push_back(x);
    }
    pts.push_back(b);
    integral = {0.0, 0.0};
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double lo = pts[i];
        const double hi = pts[i + 1];
        if (!(hi > lo)) continue;
        for (int q = 0; q < 3; ++q) {
            const double s = 0.5 * (lo + hi) + 0.5 * (hi - lo) * kGx[q];
            const double wq = 0.5 * (hi - lo) * kGw[q];
            const GasState u = c.eval(s, c.dt());
            out.push_back({x_offset + s, wq, u});
            integral = add(integral, scale(u, wq));
        }
    }
}

} // namespace

GasState initial_cell_average(const InitialData& u0, double a, double b)
{
    GasState sum{0.0, 0.0};
    gauss_over(knots(u0, a, b, kInitialSplit), [&](double x, double wq) { sum = add(sum, scale(u0.u(x), wq)); });
    return scale(sum, 1.0 / (b - a));
}

double integral_J(const InitialData& u0, double a, double b, const GasParams& P)
{
    double sum = 0.0;
    gauss_over(knots(u0, a, b, kInitialSplit), [&](double x, double wq) { sum += wq * relative_energy_J(u0.u(x), P); });
    return sum;
}

namespace {

// M0 from one-sided samples of the transformed invariants of u0.
double compute_M0(const InitialData& u0, double E0, const GasParams& P)
{
    const double band = P.band_edge();
    double inf_zt = -band;      // left of the support
    double sup_wt = band;
    inf_zt = std::min(inf_zt, -band - E0); // right of the support
    if (u0.support_hi > u0.support_lo) {
        const std::vector<double> kn = knots(u0, u0.support_lo, u0.support_hi, 32);
        double I = 0.0;
        for (std::size_t i = 0; i + 1 < kn.size(); ++i) {
            const double a = kn[i];
            const double b = kn[i + 1];
            if (!(b > a)) continue;
            const double tiny = 1e-12 * (b - a);
            double Jab = 0.0;
            for (int q = 0; q < 3; ++q) {
                Jab += 0.5 * (b - a) * kGw[q] * relative_energy_J(u0.u(0.5 * (a + b) + 0.5 * (b - a) * kGx[q]), P);
            }
            const GasState ua = u0.u(a + tiny);
            const GasState ub = u0.u(b - tiny);
            if (ua.rho > 0.0) {
                const InvariantPair q = to_invariants(ua, P);
                inf_zt = std::min(inf_zt, q.z - I);
                sup_wt = std::max(sup_wt, q.w - I);
            }
            if (ub.rho > 0.0) {
                const InvariantPair q = to_invariants(ub, P);
                inf_zt = std::min(inf_zt, q.z - I - Jab);
                sup_wt = std::max(sup_wt, q.w - I - Jab);
            }
            I += Jab;
        }
    }
    return std::max({band, -inf_zt + E0, sup_wt});
}

} // namespace

Scheme::Scheme(MeshConfig cfg, const InitialData& u0) : cfg_(cfg), P_(GasParams::make(cfg.gamma, cfg.rho_bar))
{
    if (!(cfg_.dx > 0.0)) throw std::invalid_argument("mesh.dx must be positive");
    if (!(cfg_.x_max > cfg_.x_min)) throw std::invalid_argument("mesh.x_max must exceed mesh.x_min");
    if (!(cfg_.T >= 0.0)) throw std::invalid_argument("mesh.T must be nonnegative");
    if (!(cfg_.alpha > 0.5 && cfg_.alpha < 1.0)) throw std::invalid_argument("scheme.alpha must lie in (1/2, 1)");
    if (!(cfg_.beta > 0.0)) throw std::invalid_argument("scheme.beta must be positive");
    if (!(cfg_.epsilon > 0.0)) throw std::invalid_argument("scheme.epsilon must be positive");
    const double cells = (cfg_.x_max - cfg_.x_min) / (2.0 * cfg_.dx);
    const int N = static_cast<int>(std::lround(cells));
    if (N < 2 || std::abs(cells - N) > 1e-9 * cells) {
        throw std::invalid_argument("mesh: (x_max - x_min) must be a multiple of 2 dx");
    }

    mu_ = std::isnan(cfg_.mu) ? default_mu(P_) : cfg_.mu;
    if (!(mu_ >= 1.0)) throw std::invalid_argument("scheme.mu must be at least 1");

    if (u0.support_hi > u0.support_lo) {
        cfg_.E0 = integral_J(u0, u0.support_lo, u0.support_hi, P_);
    } else {
        cfg_.E0 = 0.0;
    }
    // Floored at the decay threshold so that M_1 = M_0 - delta dt keeps M_n >= band + eps - delta dt.
    cfg_.M0 = std::max(compute_M0(u0, cfg_.E0, P_), P_.band_edge() + cfg_.epsilon);
    delta_ = std::isnan(cfg_.delta) ? select_delta(P_, cfg_.M0, cfg_.E0, cfg_.epsilon) : cfg_.delta;
    if (!(delta_ >= 0.0)) throw std::invalid_argument("scheme.delta must be nonnegative");
    cfg_.delta = delta_;
    cfg_.mu = mu_;
    if (!(cfg_.dt > 0.0)) cfg_.dt = cfg_.dx / (2.0 * (cfg_.M0 + cfg_.E0));
    n_steps_ = static_cast<int>(std::ceil(cfg_.T / cfg_.dt - 1e-9));

    st_.cells.resize(N);
    st_.averages.resize(N);
    for (int c = 0; c < N; ++c) {
        const double a = cfg_.x_min + 2.0 * c * cfg_.dx;
        st_.averages[c] = initial_cell_average(u0, a, a + 2.0 * cfg_.dx);
        if (!(st_.averages[c].rho >= 0.0) || !std::isfinite(st_.averages[c].m)) {
            throw std::invalid_argument("initial data: negative or non-finite state near x = " + std::to_string(a));
        }
    }
    st_.prefix_J = prefix_integrals(st_.averages, cfg_.dx, P_);
    st_.M = cfg_.M0;

    // Averaging remainder of the initial data.
    double L0 = 0.0;
    for (int c = 0; c < N; ++c) {
        const double a = cfg_.x_min + 2.0 * c * cfg_.dx;
        const double b = a + 2.0 * cfg_.dx;
        const GasState E = st_.averages[c];
        gauss_over(knots(u0, a, b, kInitialSplit), [&](double x, double wq) {
            const double R = jensen_remainder(u0.u(x), E, P_);
            L0 += wq * R * (1.0 + (b - x) / (2.0 * cfg_.dx));
        });
    }
    L0_ = L0;
    st_.L = L0;

    for (int c = 0; c < N; ++c) {
        if (cfg_.variant == Variant::Modified) {
            st_.cells[c] =
                cutoff_project(st_.averages[c], st_.M, st_.L, st_.prefix_J[c], cfg_.E0, cfg_.dx, mu_, P_).u;
        } else {
            st_.cells[c] = st_.averages[c];
        }
    }
}

GasState Scheme::cell_or_ghost(int c) const
{
    if (c < 0 || c >= n_cells()) return {P_.rho_bar, 0.0};
    return st_.cells[c];
}

CellContext Scheme::context(int k) const
{
    CellContext ctx;
    ctx.dx = cfg_.dx;
    ctx.dt = cfg_.dt;
    ctx.alpha = cfg_.alpha;
    ctx.beta = cfg_.beta;
    ctx.E0 = cfg_.E0;
    ctx.M_next = st_.n == 0 ? cfg_.M0 - delta_ * cfg_.dt
                            : update_M(st_.M, st_.L, cfg_.dt, delta_, cfg_.epsilon, P_);
    ctx.L = st_.L;
    const int N = n_cells();
    const double total = N > 0 ? st_.prefix_J[N - 1] + cfg_.dx * relative_energy_J(st_.averages[N - 1], P_) : 0.0;
    auto I_at = [&](int c) { return c < 0 ? 0.0 : (c >= N ? total : st_.prefix_J[c]); };
    ctx.I_left = I_at(k - 1);
    ctx.I_right = I_at(k);
    return ctx;
}

ConstructionPtr Scheme::construction(int k) const
{
    const GasState uL = cell_or_ghost(k - 1);
    const GasState uR = cell_or_ghost(k);
    if (cfg_.variant == Variant::StandardGodunov) {
        if (uL.rho == uR.rho && uL.m == uR.m) return make_constant_cell(uL, cfg_.dx, cfg_.dt);
        return make_exact_cell(solve_riemann(uL, uR, P_), cfg_.dx, cfg_.dt, P_);
    }
    try {
        return construct(uL, uR, context(k), P_);
    } catch (const ConstructionError&) {
        // Very weak waves can leave the perturbed rays out of order; the exact
        // Riemann cell takes over for that interface.
        return make_exact_cell(solve_riemann(uL, uR, P_), cfg_.dx, cfg_.dt, P_);
    }
}

StepReport Scheme::step()
{
    const int N = n_cells();
    const double dx = cfg_.dx;
    const double dt = cfg_.dt;
    const double h = 0.5 * dt;
    StepReport rep;
    const double M_next = context(0).M_next;

    std::vector<GasState> QL(N + 1), QR(N + 1);
    std::vector<std::vector<Node>> nodesL(N + 1), nodesR(N + 1);
    std::vector<std::pair<double, double>> G(N + 2);
    std::vector<TrackedFront> fronts;

    for (int k = 0; k <= N; ++k) {
        const GasState uL = cell_or_ghost(k - 1);
        const GasState uR = cell_or_ghost(k);
        const double x0 = cfg_.x_min + (2 * k - 1) * dx; // center of cell k - 1
        ConstructionPtr c;
        try {
            c = construction(k);
        } catch (const std::exception& e) {
            std::ostringstream os;
            os << "step " << st_.n << ", interface at x = " << x0 + dx << ": " << e.what();
            throw ConstructionError(os.str());
        }
        if (c->kind() == "vacuum") ++rep.vacuum_cells;
        if (c->kind().rfind("modified", 0) == 0) ++rep.modified_cells;
        if (cfg_.variant == Variant::Modified && c->kind() == "exact") ++rep.fallback_cells;

        for (const Front& f : c->fronts()) {
            rep.max_speed = std::max(rep.max_speed, std::abs(f.speed));
            if (std::abs(f.speed) * dt > dx * (1.0 + 1e-12)) {
                std::ostringstream os;
                os.precision(17);
                os << "CFL violation at step " << st_.n << ", x = " << x0 + dx << ": front speed " << f.speed
                   << " exceeds dx/dt = " << dx / dt;
                throw CflError(os.str());
            }
            if (f.kind != "edge") rep.max_rh_residual = std::max(rep.max_rh_residual, f.rh_residual);
            rep.front_production += f.production * dt;
            fronts.push_back({x0 + dx + f.speed * h, f});
        }

        half_nodes(*c, 0.0, dx, x0, nodesL[k], QL[k]);
        half_nodes(*c, dx, 2.0 * dx, x0, nodesR[k], QR[k]);

        if (cfg_.variant == Variant::StandardGodunov) {
            const auto fL = flux(uL, P_);
            const auto fR = flux(uR, P_);
            const auto fm = flux(c->eval(dx, h), P_);
            G[k] = fL;
            if (k == N) G[N + 1] = fR;
            QL[k] = {dx * uL.rho - dt * (fm.first - fL.first), dx * uL.m - dt * (fm.second - fL.second)};
            QR[k] = {dx * uR.rho - dt * (fR.first - fm.first), dx * uR.m - dt * (fR.second - fm.second)};
        } else {
            G[k] = flux(c->eval(0.0, h), P_);
            if (k == N) G[N + 1] = flux(c->eval(2.0 * dx, h), P_);
        }
    }

    if (cfg_.variant == Variant::Modified) {
        // Restore exact conservation: each construction's content is matched to
        // the flux balance through its edges, which are shared with neighbours.
        for (int k = 0; k <= N; ++k) {
            const GasState uL = cell_or_ghost(k - 1);
            const GasState uR = cell_or_ghost(k);
            const double t_rho = dx * (uL.rho + uR.rho) - dt * (G[k + 1].first - G[k].first);
            const double t_m = dx * (uL.m + uR.m) - dt * (G[k + 1].second - G[k].second);
            const double d_rho = t_rho - (QL[k].rho + QR[k].rho);
            const double d_m = t_m - (QL[k].m + QR[k].m);
            rep.conservation_defect = std::max({rep.conservation_defect, std::abs(d_rho), std::abs(d_m)});
            const double mass = QL[k].rho + QR[k].rho;
            const double share = mass > 0.0 ? QL[k].rho / mass : 0.5;
            QL[k].rho += share * d_rho;
            QR[k].rho += (1.0 - share) * d_rho;
            QL[k].m += 0.5 * d_m;
            QR[k].m += 0.5 * d_m;
        }
    }

    std::vector<GasState> E(N);
    for (int c = 0; c < N; ++c) {
        E[c] = scale(add(QR[c], QL[c + 1]), 1.0 / (2.0 * dx));
        if (!std::isfinite(E[c].rho) || !std::isfinite(E[c].m)) {
            std::ostringstream os;
            os << "non-finite cell average at step " << st_.n << ", cell " << c;
            throw std::runtime_error(os.str());
        }
        if (E[c].rho < 0.0) E[c] = {0.0, 0.0};
    }

    double jensen = 0.0;
    for (int c = 0; c < N; ++c) {
        const double xr = cfg_.x_min + 2.0 * (c + 1) * dx;
        for (const auto* list : {&nodesR[c], &nodesL[c + 1]}) {
            for (const Node& nd : *list) {
                jensen += nd.wgt * jensen_remainder(nd.u, E[c], P_) * (1.0 + (xr - nd.x) / (2.0 * dx));
            }
        }
    }
    rep.jensen = jensen;

    st_.averages = E;
    st_.prefix_J = prefix_integrals(E, dx, P_);
    st_.L += rep.front_production + rep.jensen;
    st_.M = M_next;
    for (int c = 0; c < N; ++c) {
        if (cfg_.variant == Variant::Modified) {
            const CutoffResult r = cutoff_project(E[c], st_.M, st_.L, st_.prefix_J[c], cfg_.E0, dx, mu_, P_);
            st_.cells[c] = r.u;
            rep.cut_magnitude += r.cut;
        } else {
            st_.cells[c] = E[c];
        }
    }
    st_.fronts = std::move(fronts);
    ++st_.n;
    st_.t = st_.n * dt;

    const GasState bg{P_.rho_bar, 0.0};
    for (int c : {0, 1, N - 2, N - 1}) {
        const GasState u = st_.cells[c];
        if (std::abs(u.rho - bg.rho) > 1e-12 || std::abs(u.m) > 1e-12) rep.boundary_touched = true;
    }
    return rep;
}

} // namespace isen
