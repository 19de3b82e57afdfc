#include "isentropic/construction.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

namespace isen {

double CellConstruction::max_rh_residual() const
{
    double r = 0.0;
    for (const auto& f : fronts_) {
        if (f.kind == "edge") continue;
        r = std::max(r, f.rh_residual);
    }
    return r;
}

double CellConstruction::two_pass_gap(int n_tau, int n_s) const
{
    double gap = 0.0;
    for (int i = 1; i <= n_tau; ++i) {
        const double tau = dt_ * i / n_tau;
        std::vector<double> pts{0.0};
        for (double b : breakpoints(tau)) pts.push_back(b);
        pts.push_back(2.0 * dx_);
        for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
            const double a = pts[k];
            const double b = pts[k + 1];
            if (b <= a) continue;
            for (int q = 0; q < n_s; ++q) {
                const double s = a + (b - a) * (q + 0.5) / n_s;
                const GasState u = eval(s, tau);
                const GasState c = eval_check(s, tau);
                gap = std::max({gap, std::abs(u.rho - c.rho), std::abs(u.m - c.m)});
            }
        }
    }
    return gap;
}

namespace {

GasState state_of(double z, double w, const GasParams& P)
{
    if (!(w > z)) return {0.0, 0.0};
    return from_invariants(z, w, P);
}

double lambda1_of(const InvariantPair& q, const GasParams& P)
{
    return 0.5 * (q.w + q.z) - 0.5 * P.theta * (q.w - q.z);
}

// Gauss-Legendre nodes on [-1, 1].
constexpr std::array<double, 3> kGaussX{-0.7745966692414834, 0.0, 0.7745966692414834};
constexpr std::array<double, 3> kGaussW{0.5555555555555556, 0.8888888888888888, 0.5555555555555556};

// ---------------------------------------------------------------------------
// Chain: pieces sharing one anchor edge, in a local frame where the anchor
// edge is y = 0, the Riemann problem sits at y = dx and y grows into the cell.

struct Piece {
    double z0 = 0.0, w0 = 0.0;
    double Jf = 0.0, g1f = 0.0, g2f = 0.0; // frozen integrands of the first pass
    double speed = 0.0;                     // local speed of the inner front (k >= 1)
    double prod = 0.0;                      // accumulated front production, fronts 1..k
};

class Chain {
public:
    Chain() = default;
    Chain(const GasState& anchor, double dx, double dt, const GasParams& P)
        : dx_(dx), dt_(dt), P_(P), V_(correction_V(anchor, P))
    {
        const InvariantPair q = to_invariants(anchor, P);
        Piece p0;
        p0.z0 = q.z;
        p0.w0 = q.w;
        if (q.vacuum) p0.z0 = p0.w0 = 0.0;
        set_frozen(p0);
        pieces_.push_back(p0);
        A_half_.push_back(0.0);
    }

    int size() const { return static_cast<int>(pieces_.size()); }
    const Piece& piece(int k) const { return pieces_[k]; }
    double V() const { return V_; }

    double X(int k, double tau) const { return k == 0 ? 0.0 : dx_ + pieces_[k].speed * tau; }

    GasState base(int k) const { return state_of(pieces_[k].z0, pieces_[k].w0, P_); }

    // Appends (or overwrites, when k == size()-1 is passed to set_piece) a piece.
    void push(double z0, double w0, double speed)
    {
        pieces_.push_back({});
        A_half_.push_back(0.0);
        set_piece(size() - 1, z0, w0, speed);
    }

    void set_piece(int k, double z0, double w0, double speed)
    {
        Piece& p = pieces_[k];
        p.z0 = z0;
        p.w0 = w0;
        p.speed = speed;
        set_frozen(p);
        const double h = 0.5 * dt_;
        const double a = X(k - 1, h);
        const double b = X(k, h);
        const GasState u = eval_piece(k - 1, 0.5 * (a + b), h, A_half_[k - 1], false);
        A_half_[k] = A_half_[k - 1] + (b - a) * relative_energy_J(u, P_);
        p.prod = pieces_[k - 1].prod;
    }

    void add_production(int k, double e) { pieces_[k].prod = pieces_[k - 1].prod + e; }

    double A_half(int k) const { return A_half_[k]; }

    // A[k] = integral of J over pieces 0..k-1 at time tau, for k = 0..upto.
    void prefix(double tau, int upto, std::vector<double>& A) const
    {
        A.assign(upto + 1, 0.0);
        if (tau == 0.5 * dt_) {
            for (int k = 0; k <= upto; ++k) A[k] = A_half_[k];
            return;
        }
        for (int l = 0; l < upto; ++l) {
            const double a = X(l, tau);
            const double b = X(l + 1, tau);
            const GasState u = eval_piece(l, 0.5 * (a + b), tau, A[l], false);
            A[l + 1] = A[l] + (b - a) * relative_energy_J(u, P_);
        }
    }

    GasState eval_piece(int k, double y, double tau, double Ak, bool check) const
    {
        const Piece& p = pieces_[k];
        const double h = 0.5 * dt_;
        double bz, bw, tr;
        if (k == 0) {
            bz = p.z0 + V_ * tau;
            bw = p.w0 + V_ * tau;
            tr = tau;
        } else {
            const double shift = V_ * (tau - h) + (Ak - A_half_[k]) + p.prod * (tau - h);
            bz = p.z0 + shift;
            bw = p.w0 + shift;
            tr = tau - h;
        }
        const double d = y - X(k, tau);
        const GasState uc = state_of(bz + d * p.Jf + p.g1f * tr, bw + d * p.Jf + p.g2f * tr, P_);
        if (check) return uc;
        const GasState um = state_of(bz + 0.5 * d * p.Jf + p.g1f * tr, bw + 0.5 * d * p.Jf + p.g2f * tr, P_);
        const double Jm = relative_energy_J(um, P_);
        return state_of(bz + d * Jm + g1(uc, P_) * tr, bw + d * Jm + g2(uc, P_) * tr, P_);
    }

    // Index of the piece containing y at time tau, among pieces 0..last.
    int locate(double y, double tau, int last) const
    {
        int k = 0;
        while (k < last && y >= X(k + 1, tau)) ++k;
        return k;
    }

private:
    void set_frozen(Piece& p) const
    {
        const GasState b = state_of(p.z0, p.w0, P_);
        p.Jf = relative_energy_J(b, P_);
        p.g1f = g1(b, P_);
        p.g2f = g2(b, P_);
    }

    double dx_ = 0.0, dt_ = 0.0;
    GasParams P_;
    double V_ = 0.0;
    std::vector<Piece> pieces_;
    std::vector<double> A_half_;
};

// RH residual vector of the pair (a | b) moving at speed s.
std::array<double, 2> rh_vec(double s, const GasState& a, const GasState& b, const GasParams& P)
{
    const auto [fa0, fa1] = flux(a, P);
    const auto [fb0, fb1] = flux(b, P);
    return {(fb0 - fa0) - s * (b.rho - a.rho), (fb1 - fa1) - s * (b.m - a.m)};
}

double flux_scale(const GasState& a, const GasState& b, const GasParams& P)
{
    const auto [fa0, fa1] = flux(a, P);
    const auto [fb0, fb1] = flux(b, P);
    return 1.0 + std::max({std::abs(fa0), std::abs(fa1), std::abs(fb0), std::abs(fb1), a.rho, b.rho});
}

// Damped Newton with a finite-difference Jacobian and minimum-norm steps.
template <int N>
bool newton_solve(const std::function<Eigen::Matrix<double, N, 1>(const Eigen::Matrix<double, N, 1>&)>& F,
                  Eigen::Matrix<double, N, 1>& x, double tol, int max_iter, double& final_norm)
{
    using Vec = Eigen::Matrix<double, N, 1>;
    using Mat = Eigen::Matrix<double, N, N>;
    Vec r = F(x);
    double norm = r.template lpNorm<Eigen::Infinity>();
    for (int it = 0; it < max_iter && norm > tol; ++it) {
        Mat Jm;
        for (int i = 0; i < N; ++i) {
            const double h = 1e-7 * (1.0 + std::abs(x[i]));
            Vec xp = x, xm = x;
            xp[i] += h;
            xm[i] -= h;
            Jm.col(i) = (F(xp) - F(xm)) / (2.0 * h);
        }
        Eigen::CompleteOrthogonalDecomposition<Mat> cod(Jm);
        cod.setThreshold(1e-12);
        const Vec step = -cod.solve(r);
        if (!step.allFinite()) break;
        double lam = 1.0;
        bool improved = false;
        for (int ls = 0; ls < 30; ++ls, lam *= 0.5) {
            const Vec xn = x + lam * step;
            const Vec rn = F(xn);
            const double nn = rn.template lpNorm<Eigen::Infinity>();
            if (rn.allFinite() && nn < norm) {
                x = xn;
                r = rn;
                norm = nn;
                improved = true;
                break;
            }
        }
        if (!improved) break;
    }
    final_norm = norm;
    return norm <= tol;
}

std::string describe(const GasState& uL, const GasState& uR)
{
    std::ostringstream os;
    os.precision(17);
    os << "uL=(" << uL.rho << ", " << uL.m << ") uR=(" << uR.rho << ", " << uR.m << ")";
    return os.str();
}

// Builds pieces 1..targets.size() of a fan chain: each new piece takes the
// prescribed z, and its inner front speed and w come from the mid-time
// Rankine-Hugoniot conditions against the previous piece.
void extend_fan_chain(Chain& chain, const std::vector<double>& z_targets, const std::vector<double>& guesses,
                      std::vector<Front>& local_fronts, double dx, double dt, const GasParams& P,
                      const GasState& uL_diag, const GasState& uR_diag)
{
    const double h = 0.5 * dt;
    for (std::size_t i = 0; i < z_targets.size(); ++i) {
        const int k = chain.size();
        const double zt = z_targets[i];
        const GasState prev = chain.base(k - 1);
        const InvariantPair qp = to_invariants(prev, P);
        const double rho_guess = pow_pos(0.5 * P.theta * (qp.w - zt), 1.0 / P.theta);
        const double Ak = chain.A_half(k - 1);

        auto right_state = [&](double rho) {
            rho = std::max(rho, 1e-300);
            return from_rho_v(rho, zt + pow_pos(rho, P.theta) / P.theta);
        };
        std::function<Eigen::Vector2d(const Eigen::Vector2d&)> F = [&](const Eigen::Vector2d& x) {
            const GasState a = chain.eval_piece(k - 1, dx + x[1] * h, h, Ak, false);
            const auto r = rh_vec(x[1], a, right_state(x[0]), P);
            return Eigen::Vector2d(r[0], r[1]);
        };
        Eigen::Vector2d x(rho_guess, guesses[i]);
        double norm = 0.0;
        const double tol = 1e-14 * flux_scale(prev, right_state(rho_guess), P);
        if (!newton_solve<2>(F, x, tol, 60, norm) && norm > 1e-9 * flux_scale(prev, prev, P)) {
            std::ostringstream os;
            os << "fan front " << k << " did not converge (residual " << norm << ") for " << describe(uL_diag, uR_diag);
            throw ConstructionError(os.str());
        }
        const GasState b = right_state(x[0]);
        const InvariantPair qb = to_invariants(b, P);
        chain.push(zt, qb.w, x[1]);
        const GasState a = chain.eval_piece(k - 1, dx + x[1] * h, h, Ak, false);
        const double e = entropy_production(x[1], a, b, P);
        chain.add_production(k, e);
        Front f;
        f.speed = x[1];
        f.left = a;
        f.right = b;
        f.kind = "fan";
        local_fronts.push_back(f);
    }
}

Front mirror_front(const Front& f)
{
    Front g = f;
    g.speed = -f.speed;
    g.left = mirror(f.right);
    g.right = mirror(f.left);
    return g;
}

void finish_front(Front& f, const GasParams& P)
{
    f.rh_residual = rh_residual(f.speed, f.left, f.right, P);
    f.production = entropy_production(f.speed, f.left, f.right, P);
}

// ---------------------------------------------------------------------------

class ConstantCell final : public CellConstruction {
public:
    ConstantCell(const GasState& u, double dx, double dt) : u_(u)
    {
        dx_ = dx;
        dt_ = dt;
    }
    GasState eval(double, double) const override { return u_; }
    std::vector<double> breakpoints(double) const override { return {}; }
    std::string kind() const override { return "constant"; }

private:
    GasState u_;
};

class ExactCell final : public CellConstruction {
public:
    ExactCell(const RiemannSolution& sol, double dx, double dt, const GasParams& P) : sol_(sol), P_(P)
    {
        dx_ = dx;
        dt_ = dt;
        if (sol.degenerate) return;
        if (sol.pattern.family1 == WaveKind::Shock) add_shock(sol.s1_lo, sol.uL, sol.uM);
        if (sol.pattern.family2 == WaveKind::Shock) add_shock(sol.s2_lo, sol.uM, sol.uR);
    }

    GasState eval(double s, double tau) const override
    {
        if (tau <= 0.0) return s < dx_ ? sol_.uL : sol_.uR;
        return sample(sol_, (s - dx_) / tau, P_);
    }

    std::vector<double> breakpoints(double tau) const override
    {
        if (sol_.degenerate) return {};
        std::vector<double> b{dx_ + sol_.s1_lo * tau, dx_ + sol_.s1_hi * tau, dx_ + sol_.s2_lo * tau,
                              dx_ + sol_.s2_hi * tau};
        std::sort(b.begin(), b.end());
        b.erase(std::unique(b.begin(), b.end()), b.end());
        return b;
    }

    std::string kind() const override { return "exact"; }

private:
    void add_shock(double s, const GasState& a, const GasState& b)
    {
        Front f;
        f.speed = s;
        f.left = a;
        f.right = b;
        f.kind = "shock";
        finish_front(f, P_);
        fronts_.push_back(f);
    }

    RiemannSolution sol_;
    GasParams P_;
};

// ---------------------------------------------------------------------------
// Regular construction. Works in a frame where the middle piece hangs off the
// right chain; Case 2 (1-shock, 2-rarefaction) is handled by mirroring.

class ModifiedCell final : public CellConstruction {
public:
    ModifiedCell(const GasState& uL_in, const GasState& uR_in, const CellContext& ctx, const GasParams& P)
        : P_(P)
    {
        dx_ = ctx.dx;
        dt_ = ctx.dt;
        RiemannSolution sol = solve_riemann(uL_in, uR_in, P);
        if (!sol.degenerate && sol.pattern.family1 == WaveKind::Shock &&
            sol.pattern.family2 == WaveKind::Rarefaction) {
            mirrored_ = true;
            sol = solve_riemann(mirror(uR_in), mirror(uL_in), P);
        }
        build(sol, ctx, uL_in, uR_in);
    }

    GasState eval(double s, double tau) const override { return eval_any(s, tau, false); }
    GasState eval_check(double s, double tau) const override { return eval_any(s, tau, true); }

    std::vector<double> breakpoints(double tau) const override
    {
        std::vector<double> b;
        for (int k = 1; k < left_.size(); ++k) b.push_back(left_.X(k, tau));
        b.push_back(dx_ + sigma_p_ * tau);
        for (int k = right_.size() - 1; k >= 1; --k) b.push_back(2.0 * dx_ - right_.X(k, tau));
        if (mirrored_) {
            for (double& x : b) x = 2.0 * dx_ - x;
        }
        std::sort(b.begin(), b.end());
        return b;
    }

    std::string kind() const override { return mirrored_ ? "modified-mirrored" : "modified"; }

    int fan_pieces() const { return left_.size(); }

private:
    GasState eval_any(double s, double tau, bool check) const
    {
        if (mirrored_) return mirror(eval_frame(2.0 * dx_ - s, tau, check));
        return eval_frame(s, tau, check);
    }

    GasState eval_frame(double s, double tau, bool check) const
    {
        const double xj = dx_ + sigma_p_ * tau;
        if (s < xj) {
            const int k = left_.locate(s, tau, left_.size() - 1);
            const double Ak = prefix_value(left_, cacheL_, tau, k);
            return left_.eval_piece(k, s, tau, Ak, check);
        }
        const double y = 2.0 * dx_ - s;
        const int k = right_.locate(y, tau, right_.size() - 1);
        const double Ak = prefix_value(right_, cacheR_, tau, k);
        return mirror(right_.eval_piece(k, y, tau, Ak, check));
    }

    struct PrefixCache {
        double tau = -1.0;
        std::vector<double> A;
    };

    static double prefix_value(const Chain& c, PrefixCache& cache, double tau, int k)
    {
        if (cache.tau != tau) {
            c.prefix(tau, c.size() - 1, cache.A);
            cache.tau = tau;
        }
        return cache.A[k];
    }

    void build(const RiemannSolution& sol, const CellContext& ctx, const GasState& uL_diag, const GasState& uR_diag)
    {
        const GasParams& P = P_;
        const double alpha = ctx.alpha;
        const double h = 0.5 * dt_;
        const GasState uL = sol.uL;
        const GasState uR = sol.uR;
        const InvariantPair iL = to_invariants(uL, P);
        const InvariantPair iR = to_invariants(uR, P);
        const InvariantPair iM = to_invariants(sol.uM, P);

        std::vector<Front> lf, rf;

        // Left chain: 1-fan pieces 1..p-1, or the single state uL.
        left_ = Chain(uL, dx_, dt_, P);
        double sigma_guess;
        if (sol.pattern.family1 == WaveKind::Shock) {
            sigma_guess = sol.s1_lo;
        } else {
            const RarefactionFan fan = build_fan(uL, std::max(iM.z, iL.z), dx_, alpha, P);
            std::vector<double> zt, sg;
            for (int i = 1; i + 1 < fan.p; ++i) {
                zt.push_back(fan.states[i].z);
                sg.push_back(fan.speeds[i - 1]);
            }
            extend_fan_chain(left_, zt, sg, lf, dx_, dt_, P, uL_diag, uR_diag);
            sigma_guess = fan.speeds[fan.p - 2];
        }

        // Right chain in the mirrored frame: 2-fan pieces, then the middle piece.
        right_ = Chain(mirror(uR), dx_, dt_, P);
        double s_guess_local;
        if (sol.pattern.family2 == WaveKind::Shock) {
            s_guess_local = -sol.s2_lo;
        } else {
            const RarefactionFan fan = build_fan(mirror(uR), std::max(-iM.w, -iR.w), dx_, alpha, P);
            std::vector<double> zt, sg;
            for (int i = 1; i + 1 < fan.p; ++i) {
                zt.push_back(fan.states[i].z);
                sg.push_back(fan.speeds[i - 1]);
            }
            extend_fan_chain(right_, zt, sg, rf, dx_, dt_, P, uL_diag, uR_diag);
            s_guess_local = fan.speeds[fan.p - 2];
        }

        // Middle piece: base invariants, its anchor front and the junction speed
        // are fixed by the two mid-time Rankine-Hugoniot conditions.
        // The guess comes from the Riemann problem between the perturbed outer
        // pieces at the middle time, which already carry the O(dx) offsets.
        const int nl = left_.size() - 1;
        GasState uM_guess = sol.uM;
        for (int pass = 0; pass < 2; ++pass) {
            const int mr = right_.size() - 1;
            const GasState a = left_.eval_piece(nl, dx_ + sigma_guess * h, h, left_.A_half(nl), false);
            const GasState b =
                mirror(right_.eval_piece(mr, dx_ + s_guess_local * h, h, right_.A_half(mr), false));
            if (a.rho <= 0.0 || b.rho <= 0.0) break;
            const RiemannSolution g = solve_riemann(a, b, P);
            if (g.uM.rho <= 0.0) break;
            uM_guess = g.uM;
            const auto cM = char_speeds(g.uM, P);
            sigma_guess = g.pattern.family1 == WaveKind::Shock ? g.s1_lo
                                                               : 0.5 * (char_speeds(a, P).first + cM.first);
            s_guess_local = -(g.pattern.family2 == WaveKind::Shock ? g.s2_lo
                                                                   : 0.5 * (cM.second + char_speeds(b, P).second));
        }
        const InvariantPair qm = to_invariants(mirror(uM_guess), P);
        right_.push(qm.z, qm.w, s_guess_local);
        const int m = right_.size() - 1;

        auto middle_state = [&](double y) { return right_.eval_piece(m, y, h, right_.A_half(m), false); };

        std::function<Eigen::Vector4d(const Eigen::Vector4d&)> F = [&](const Eigen::Vector4d& x) {
            right_.set_piece(m, x[0], std::max(x[1], x[0]), x[2]);
            const GasState a_loc = right_.eval_piece(m - 1, dx_ + x[2] * h, h, right_.A_half(m - 1), false);
            const auto r1 = rh_vec(x[2], a_loc, right_.base(m), P);
            const double xp = dx_ + x[3] * h;
            const GasState a = left_.eval_piece(nl, xp, h, left_.A_half(nl), false);
            const GasState b = mirror(middle_state(2.0 * dx_ - xp));
            const auto r2 = rh_vec(x[3], a, b, P);
            Eigen::Vector4d r(r1[0], r1[1], r2[0], r2[1]);
            if (x[1] < x[0]) r *= 1e3;
            return r;
        };
        Eigen::Vector4d x(qm.z, qm.w, s_guess_local, sigma_guess);
        const double scale = flux_scale(uL, uR, P);
        double norm = 0.0;
        if (!newton_solve<4>(F, x, 1e-14 * scale, 80, norm) && norm > 1e-9 * scale) {
            std::ostringstream os;
            os << "diamond solve did not converge (residual " << norm << ") for " << describe(uL_diag, uR_diag);
            throw ConstructionError(os.str());
        }
        F(x); // leave the chain in the converged configuration
        sigma_p_ = x[3];

        // Production of the middle's anchor front enters the middle piece.
        const GasState a_loc = right_.eval_piece(m - 1, dx_ + x[2] * h, h, right_.A_half(m - 1), false);
        right_.add_production(m, entropy_production(x[2], a_loc, right_.base(m), P));
        Front ms;
        ms.speed = x[2];
        ms.left = a_loc;
        ms.right = right_.base(m);
        ms.kind = "middle";

        const double xp = dx_ + sigma_p_ * h;
        Front jf;
        jf.speed = sigma_p_;
        jf.left = left_.eval_piece(nl, xp, h, left_.A_half(nl), false);
        jf.right = mirror(middle_state(2.0 * dx_ - xp));
        jf.kind = "junction";

        std::vector<Front> all = lf;
        all.push_back(jf);
        all.push_back(mirror_front(ms));
        for (auto it = rf.rbegin(); it != rf.rend(); ++it) all.push_back(mirror_front(*it));
        if (mirrored_) {
            std::vector<Front> flipped;
            for (auto it = all.rbegin(); it != all.rend(); ++it) flipped.push_back(mirror_front(*it));
            all.swap(flipped);
        }
        for (auto& f : all) finish_front(f, P);

        for (std::size_t i = 1; i < all.size(); ++i) {
            if (!(all[i].speed > all[i - 1].speed)) {
                std::ostringstream os;
                os << "front speeds not increasing (" << all[i - 1].kind << " " << all[i - 1].speed << ", "
                   << all[i].kind << " " << all[i].speed << ") for " << describe(uL_diag, uR_diag);
                throw ConstructionError(os.str());
            }
        }
        fronts_ = std::move(all);
    }

    GasParams P_;
    bool mirrored_ = false;
    Chain left_, right_;
    double sigma_p_ = 0.0;
    mutable PrefixCache cacheL_, cacheR_;
};

// ---------------------------------------------------------------------------
// Near-vacuum construction.

struct SideBounds {
    double D = 0.0;        // lower clamp for z (local frame) before eta terms
    double U = 0.0;        // upper clamp for w (local frame)
    bool eta_terms = false;
};

struct VacuumSide {
    Chain chain;
    double end_speed = 0.0; // local speed where the chain region ends
    bool profile = false;
    InvariantPair u3, u4;
    VacuumSideInfo info;
};

GasState profile_sample(const InvariantPair& u3, const InvariantPair& u4, double xi, const GasParams& P)
{
    if (xi <= lambda1_of(u3, P)) return state_of(u3.z, u3.w, P);
    if (xi >= lambda1_of(u4, P)) return state_of(u4.z, u4.w, P);
    const double th = P.theta;
    const double c = std::max(0.0, th * (u3.w - xi) / (th + 1.0));
    return from_rho_v(pow_pos(c, 1.0 / th), xi + c);
}

// One side of the near-vacuum cell in its local frame; `anchor` is the local
// outer state, `family` its wave kind, `shock_speed` the local shock speed if
// any and `zM` the local z the rarefaction heads for.
VacuumSide build_vacuum_side(const GasState& anchor, WaveKind family, double shock_speed, double zM,
                             const SideBounds& bounds, const CellContext& ctx, const GasParams& P,
                             std::vector<Front>& fronts, const GasState& uL_diag, const GasState& uR_diag)
{
    const double dx = ctx.dx;
    const double dt = ctx.dt;
    VacuumSide side;
    side.chain = Chain(anchor, dx, dt, P);
    if (family == WaveKind::Shock) {
        side.end_speed = shock_speed;
        return side;
    }
    const InvariantPair qa = to_invariants(anchor, P);
    if (qa.vacuum) {
        side.end_speed = 0.0;
        return side;
    }
    const double hb = std::pow(dx, ctx.beta);
    const double th = P.theta;
    zM = std::max(zM, qa.z);

    auto eta_integral = [&](double end) {
        // Integral of eta* over the chain region [0, end] at tau = dt.
        std::vector<double> A;
        Chain& c = side.chain;
        c.prefix(dt, c.size() - 1, A);
        double total = 0.0;
        for (int k = 0; k < c.size(); ++k) {
            const double a = c.X(k, dt);
            const double b = (k + 1 < c.size()) ? c.X(k + 1, dt) : end;
            if (b <= a) continue;
            for (int q = 0; q < 3; ++q) {
                const double y = 0.5 * (a + b) + 0.5 * (b - a) * kGaussX[q];
                total += 0.5 * (b - a) * kGaussW[q] * eta_star(c.eval_piece(k, y, dt, A[k], false), P);
            }
        }
        return total;
    };
    const double eta_const = bounds.eta_terms ? 2.0 * dx * pow_pos(P.rho_bar, P.gamma) / P.gamma : 0.0;

    if (anchor.rho > hb) {
        side.info.truncated_fan = true;
        const double z1 = qa.w - 2.0 * pow_pos(hb, th) / th;
        side.info.u1 = {z1, qa.w, false};
        const RarefactionFan fan = build_fan(anchor, z1, dx, ctx.alpha, P);
        std::vector<double> zt, sg;
        for (int i = 1; i + 1 < fan.p; ++i) {
            zt.push_back(fan.states[i].z);
            sg.push_back(fan.speeds[i - 1]);
        }
        extend_fan_chain(side.chain, zt, sg, fronts, dx, dt, P, uL_diag, uR_diag);
        Chain& c = side.chain;
        const int last = c.size() - 1;
        std::vector<double> A;
        c.prefix(dt, last, A);
        double lam = char_speeds(c.base(last), P).first;
        GasState u2 = c.base(last);
        for (int it = 0; it < 4; ++it) {
            u2 = c.eval_piece(last, dx + lam * dt, dt, A[last], false);
            lam = char_speeds(u2, P).first;
        }
        side.end_speed = lam;
        const InvariantPair q2 = to_invariants(u2, P);
        side.info.u2 = q2;
        const double D = bounds.D + (bounds.eta_terms ? eta_const + eta_integral(dx + lam * dt) : 0.0);
        side.info.D = D;
        side.info.U = bounds.U;
        side.u3 = {std::max(q2.z, D), q2.w, false};
        side.u4 = {std::max(side.u3.z, zM), side.u3.w, false};
    } else {
        side.end_speed = char_speeds(anchor, P).first;
        const double D = bounds.D + (bounds.eta_terms ? eta_const + eta_integral(dx + side.end_speed * dt) : 0.0);
        side.info.D = D;
        side.info.U = bounds.U;
        side.info.u2 = qa;
        side.u3 = {std::max(qa.z, D), std::min(qa.w, bounds.U), false};
        if (side.u3.w < side.u3.z) side.u3.w = side.u3.z;
        side.u4 = {std::max(side.u3.z, zM), side.u3.w, false};
    }
    side.u3.vacuum = side.u3.w <= side.u3.z;
    side.u4.vacuum = side.u4.w <= side.u4.z;
    side.info.u3 = side.u3;
    side.info.u4 = side.u4;
    side.profile = true;
    return side;
}

class VacuumCell final : public CellConstruction {
public:
    VacuumCell(const GasState& uL, const GasState& uR, const RiemannSolution& sol, const CellContext& ctx,
               const GasParams& P)
        : P_(P)
    {
        dx_ = ctx.dx;
        dt_ = ctx.dt;
        const InvariantPair iL = to_invariants(sol.uL, P);
        const InvariantPair iR = to_invariants(sol.uR, P);
        const InvariantPair iM = to_invariants(sol.uM, P);
        const bool mvac = sol.uM.rho <= 0.0;

        const double VL = correction_V(sol.uL, P);
        const double VR = correction_V(sol.uR, P);
        SideBounds bl;
        bl.D = -ctx.M_next - ctx.L + ctx.I_left + VL * dt_;
        bl.U = ctx.M_next + ctx.L + ctx.I_left + VL * dt_;
        bl.eta_terms = true;
        SideBounds br;
        br.D = -(ctx.M_next + ctx.L + ctx.I_right + VR * dt_);
        br.U = ctx.M_next + ctx.E0 + ctx.L - ctx.I_right - VR * dt_;

        std::vector<Front> lf, rf;
        const double zM_left = mvac ? iL.w : iM.z;
        const double zM_right = mvac ? -iR.z : -iM.w;
        left_ = build_vacuum_side(sol.uL, sol.pattern.family1, sol.s1_lo, zM_left, bl, ctx, P, lf, uL, uR);
        right_ = build_vacuum_side(mirror(sol.uR), sol.pattern.family2, -sol.s2_hi, zM_right, br, ctx, P, rf, uL,
                                   uR);

        if (left_.profile && !right_.profile) {
            mid_ = state_of(left_.u4.z, left_.u4.w, P);
        } else if (!left_.profile && right_.profile) {
            mid_ = mirror(state_of(right_.u4.z, right_.u4.w, P));
        } else {
            mid_ = sol.uM;
        }

        for (auto& f : lf) {
            f.kind = "fan";
            finish_front(f, P);
            fronts_.push_back(f);
        }
        // Remaining interfaces are located numerically at the middle time.
        const double h = 0.5 * dt_;
        std::vector<double> bps = region_bounds(h);
        std::sort(bps.begin(), bps.end());
        bps.erase(std::unique(bps.begin(), bps.end()), bps.end());
        for (double b : bps) {
            const double eps = 1e-12 * dx_;
            Front f;
            f.speed = (b - dx_) / h;
            f.left = eval(b - eps, h);
            f.right = eval(b + eps, h);
            if (std::abs(f.left.rho - f.right.rho) + std::abs(f.left.m - f.right.m) < 1e-14) continue;
            f.kind = "edge";
            finish_front(f, P);
            fronts_.push_back(f);
        }
        for (auto it = rf.rbegin(); it != rf.rend(); ++it) {
            Front f = mirror_front(*it);
            f.kind = "fan";
            finish_front(f, P);
            fronts_.push_back(f);
        }
        std::sort(fronts_.begin(), fronts_.end(), [](const Front& a, const Front& b) { return a.speed < b.speed; });
    }

    GasState eval(double s, double tau) const override
    {
        const Layout L = layout(tau);
        if (s < L.left_end) {
            const Chain& c = left_.chain;
            const int k = c.locate(s, tau, c.size() - 1);
            std::vector<double> A;
            c.prefix(tau, k, A);
            return c.eval_piece(k, s, tau, A[k], false);
        }
        if (s >= L.right_end) {
            const Chain& c = right_.chain;
            const double y = 2.0 * dx_ - s;
            const int k = c.locate(y, tau, c.size() - 1);
            std::vector<double> A;
            c.prefix(tau, k, A);
            return mirror(c.eval_piece(k, y, tau, A[k], false));
        }
        if (left_.profile && s < L.left_profile_end) {
            return profile_sample(left_.u3, left_.u4, (s - dx_) / tau, P_);
        }
        if (right_.profile && s > L.right_profile_start) {
            return mirror(profile_sample(right_.u3, right_.u4, (dx_ - s) / tau, P_));
        }
        return mid_;
    }

    std::vector<double> breakpoints(double tau) const override
    {
        std::vector<double> b = region_bounds(tau);
        for (int k = 1; k < left_.chain.size(); ++k) b.push_back(left_.chain.X(k, tau));
        for (int k = 1; k < right_.chain.size(); ++k) b.push_back(2.0 * dx_ - right_.chain.X(k, tau));
        if (left_.profile) {
            b.push_back(dx_ + lambda1_of(left_.u3, P_) * tau);
        }
        if (right_.profile) {
            b.push_back(dx_ - lambda1_of(right_.u3, P_) * tau);
        }
        std::sort(b.begin(), b.end());
        std::vector<double> out;
        for (double x : b) {
            if (x > 0.0 && x < 2.0 * dx_) out.push_back(x);
        }
        return out;
    }

    std::string kind() const override { return "vacuum"; }

    const VacuumSideInfo& left_info() const { return left_.info; }

private:
    struct Layout {
        double left_end, left_profile_end, right_profile_start, right_end;
    };

    Layout layout(double tau) const
    {
        Layout L;
        L.left_end = dx_ + left_.end_speed * tau;
        L.left_profile_end = left_.profile ? dx_ + lambda1_of(left_.u4, P_) * tau : L.left_end;
        L.right_end = dx_ - right_.end_speed * tau;
        L.right_profile_start = right_.profile ? dx_ - lambda1_of(right_.u4, P_) * tau : L.right_end;
        L.left_profile_end = std::max(L.left_profile_end, L.left_end);
        L.right_profile_start = std::min(L.right_profile_start, L.right_end);
        return L;
    }

    std::vector<double> region_bounds(double tau) const
    {
        const Layout L = layout(tau);
        return {L.left_end, L.left_profile_end, L.right_profile_start, L.right_end};
    }

    GasParams P_;
    VacuumSide left_, right_;
    GasState mid_;
};

} // namespace

ConstructionPtr make_constant_cell(const GasState& u, double dx, double dt)
{
    return std::make_unique<ConstantCell>(u, dx, dt);
}

ConstructionPtr make_exact_cell(const RiemannSolution& sol, double dx, double dt, const GasParams& P)
{
    return std::make_unique<ExactCell>(sol, dx, dt, P);
}

ConstructionPtr build_cell(const GasState& uL, const GasState& uR, const CellContext& ctx, const GasParams& P)
{
    return std::make_unique<ModifiedCell>(uL, uR, ctx, P);
}

ConstructionPtr build_cell_vacuum(const GasState& uL, const GasState& uR, const RiemannSolution& sol,
                                  const CellContext& ctx, const GasParams& P)
{
    return std::make_unique<VacuumCell>(uL, uR, sol, ctx, P);
}

ConstructionPtr construct(const GasState& uL, const GasState& uR, const CellContext& ctx, const GasParams& P)
{
    const bool same = uL.rho == uR.rho && uL.m == uR.m;
    if (same && (uL.rho <= 0.0 || (uL.rho == P.rho_bar && uL.m == 0.0))) {
        return make_constant_cell(uL.rho <= 0.0 ? GasState{0.0, 0.0} : uL, ctx.dx, ctx.dt);
    }
    const RiemannSolution sol = solve_riemann(uL, uR, P);
    const double hb = std::pow(ctx.dx, ctx.beta);
    if (uL.rho <= 0.0 || uR.rho <= 0.0 || sol.uM.rho <= hb) {
        return build_cell_vacuum(uL, uR, sol, ctx, P);
    }
    return build_cell(uL, uR, ctx, P);
}

const VacuumSideInfo* vacuum_left_info(const CellConstruction& c)
{
    const auto* v = dynamic_cast<const VacuumCell*>(&c);
    return v ? &v->left_info() : nullptr;
}

} // namespace isen
