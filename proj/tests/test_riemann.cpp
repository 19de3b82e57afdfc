#include "isentropic/riemann.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace isen;

namespace {

void check_solution(const RiemannSolution& s, const GasParams& P)
{
    // Shocks: Rankine-Hugoniot and Lax. Rarefactions: invariant carried across.
    const InvariantPair qL = to_invariants(s.uL, P);
    const InvariantPair qR = to_invariants(s.uR, P);
    const InvariantPair qM = to_invariants(s.uM, P);
    if (s.pattern.family1 == WaveKind::Shock) {
        CHECK(s.s1_lo == s.s1_hi);
        CHECK(rh_residual(s.s1_lo, s.uL, s.uM, P) <= 1e-10 * (1.0 + s.uM.rho * s.uM.rho));
        CHECK(char_speeds(s.uL, P).first >= s.s1_lo - 1e-10);
        CHECK(s.s1_lo >= char_speeds(s.uM, P).first - 1e-10);
        CHECK(entropy_production(s.s1_lo, s.uL, s.uM, P) >= -1e-10);
    } else if (s.pattern.family1 == WaveKind::Rarefaction && !qM.vacuum) {
        CHECK(std::abs(qM.w - qL.w) <= 1e-12 * (1.0 + std::abs(qL.w)));
    }
    if (s.pattern.family2 == WaveKind::Shock) {
        CHECK(rh_residual(s.s2_lo, s.uM, s.uR, P) <= 1e-10 * (1.0 + s.uM.rho * s.uM.rho));
        CHECK(char_speeds(s.uM, P).second >= s.s2_lo - 1e-10);
        CHECK(s.s2_lo >= char_speeds(s.uR, P).second - 1e-10);
        CHECK(entropy_production(s.s2_lo, s.uM, s.uR, P) >= -1e-10);
    } else if (s.pattern.family2 == WaveKind::Rarefaction && !qM.vacuum) {
        CHECK(std::abs(qM.z - qR.z) <= 1e-12 * (1.0 + std::abs(qR.z)));
    }
}

} // namespace

TEST_CASE("symmetric collision matches the bisection oracle")
{
    const GasParams P = GasParams::make(2.0, 1.0);
    const RiemannSolution s = solve_riemann(from_rho_v(1.0, 1.0), from_rho_v(1.0, -1.0), P);
    CHECK(s.pattern.family1 == WaveKind::Shock);
    CHECK(s.pattern.family2 == WaveKind::Shock);
    // Frozen from the bisection oracle.
    constexpr double kRhoM = 2.1700864866260337;
    CHECK(std::abs(oracle::middle_density(1.0, 1.0, 1.0, -1.0, 2.0) - kRhoM) < 1e-12);
    CHECK(std::abs(s.uM.rho - kRhoM) < 1e-8);
    CHECK(std::abs(s.uM.m) < 1e-12);
    CHECK(s.s1_lo == doctest::Approx(-0.8546).epsilon(1e-4));
    CHECK(s.s2_lo == doctest::Approx(0.8546).epsilon(1e-4));
    check_solution(s, P);
}

TEST_CASE("equal states give the degenerate solution")
{
    const GasParams P = GasParams::make(1.4, 1.0);
    const RiemannSolution s = solve_riemann({1.0, 0.3}, {1.0, 0.3}, P);
    CHECK(s.degenerate);
    CHECK(sample(s, 0.37, P).m == doctest::Approx(0.3));
}

TEST_CASE("diverging states open a vacuum")
{
    const GasParams P = GasParams::make(2.0, 1.0);
    // w(uL) = -5 + 2 < z(uR) = 5 - 2.
    const RiemannSolution s = solve_riemann(from_rho_v(1.0, -5.0), from_rho_v(1.0, 5.0), P);
    CHECK(s.case_name() == "vacuum");
    CHECK(s.uM.rho == 0.0);
    CHECK(sample(s, 0.0, P).rho == 0.0);
}

TEST_CASE("random pairs: middle state, admissibility and invariants")
{
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> rho_d(0.1, 10.0), v_d(-5.0, 5.0);
    for (double g : {1.4, 5.0 / 3.0, 2.0}) {
        const GasParams P = GasParams::make(g, 1.0);
        for (int i = 0; i < 1000; ++i) {
            const double rL = rho_d(rng), vL = v_d(rng), rR = rho_d(rng), vR = v_d(rng);
            const RiemannSolution s = solve_riemann(from_rho_v(rL, vL), from_rho_v(rR, vR), P);
            if (s.case_name() == "vacuum") {
                CHECK(to_invariants(s.uL, P).w <= to_invariants(s.uR, P).z + 1e-12);
                continue;
            }
            const double rho_o = oracle::middle_density(rL, vL, rR, vR, g);
            CHECK(s.uM.rho == doctest::Approx(rho_o).epsilon(1e-9));
            // Pattern follows the middle density.
            if (s.uM.rho > std::max(rL, rR) * (1 + 1e-12)) {
                CHECK(s.pattern.family1 == WaveKind::Shock);
                CHECK(s.pattern.family2 == WaveKind::Shock);
            }
            if (s.uM.rho < std::min(rL, rR) * (1 - 1e-12)) {
                CHECK(s.pattern.family1 == WaveKind::Rarefaction);
                CHECK(s.pattern.family2 == WaveKind::Rarefaction);
            }
            check_solution(s, P);
        }
    }
}

TEST_CASE("reflection symmetry")
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> rho_d(0.1, 5.0), v_d(-2.0, 2.0);
    const GasParams P = GasParams::make(1.4, 1.0);
    for (int i = 0; i < 200; ++i) {
        const GasState a = from_rho_v(rho_d(rng), v_d(rng));
        const GasState b = from_rho_v(rho_d(rng), v_d(rng));
        const RiemannSolution s = solve_riemann(a, b, P);
        const RiemannSolution m = solve_riemann(mirror(b), mirror(a), P);
        CHECK(m.uM.rho == doctest::Approx(s.uM.rho).epsilon(1e-12));
        CHECK(m.uM.m == doctest::Approx(-s.uM.m).epsilon(1e-12).scale(1.0));
        for (double xi : {-1.3, -0.2, 0.0, 0.4, 1.1}) {
            const GasState u = sample(s, xi, P);
            const GasState v = sample(m, -xi, P);
            CHECK(v.rho == doctest::Approx(u.rho).epsilon(1e-10));
            CHECK(v.m == doctest::Approx(-u.m).epsilon(1e-10).scale(1.0));
        }
    }
}

TEST_CASE("sampled rarefaction is continuous at its edges")
{
    const GasParams P = GasParams::make(1.4, 1.0);
    const RiemannSolution s = solve_riemann(from_rho_v(2.0, -0.5), from_rho_v(1.0, 0.5), P);
    REQUIRE(s.pattern.family1 == WaveKind::Rarefaction);
    const GasState in = sample(s, s.s1_hi - 1e-9, P);
    CHECK(in.rho == doctest::Approx(s.uM.rho).epsilon(1e-6));
    const GasState left = sample(s, s.s1_lo + 1e-9, P);
    CHECK(left.rho == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("fan sizes follow the dx^alpha increment")
{
    const GasParams P = GasParams::make(2.0, 1.0);
    const GasState uL{1.0, 0.0};
    const double zL = to_invariants(uL, P).z;
    const RarefactionFan small = build_fan(uL, zL + 0.05, 1e-2, 0.75, P);
    CHECK(small.p == 2);
    const RarefactionFan big = build_fan(uL, zL + 0.5, 1e-2, 0.75, P);
    CHECK(big.p == 16);
    // Telescoping: the last state is the middle state; w is shared; rays increase.
    CHECK(big.states.back().z == zL + 0.5);
    for (const auto& q : big.states) CHECK(std::abs(q.w - to_invariants(uL, P).w) <= 1e-14);
    for (std::size_t i = 1; i < big.speeds.size(); ++i) CHECK(big.speeds[i] > big.speeds[i - 1]);
    const RarefactionFan flat = build_fan(uL, zL, 1e-2, 0.75, P);
    CHECK(flat.p == 2);
    CHECK(flat.states[0].z == flat.states[1].z);
}

TEST_CASE("2-family fan mirrors the 1-family fan")
{
    const GasParams P = GasParams::make(2.0, 1.0);
    const GasState uR{1.0, 0.0};
    const double wR = to_invariants(uR, P).w;
    const RarefactionFan f = build_fan_2(uR, wR - 0.5, 1e-2, 0.75, P);
    CHECK(f.family == 2);
    CHECK(f.p == 16);
    for (std::size_t i = 1; i < f.speeds.size(); ++i) CHECK(f.speeds[i] < f.speeds[i - 1]);
}

TEST_CASE("rh_residual detects a perturbed speed")
{
    const GasParams P = GasParams::make(2.0, 1.0);
    const RiemannSolution s = solve_riemann(from_rho_v(1.0, 1.0), from_rho_v(1.0, -1.0), P);
    CHECK(rh_residual(0.3, s.uR, s.uR, P) == 0.0);
    CHECK(rh_residual(s.s2_lo, s.uM, s.uR, P) <= 1e-10);
    CHECK(rh_residual(s.s2_lo + 0.1, s.uM, s.uR, P) > 1e-3);
}
