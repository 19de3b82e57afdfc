#include "isentropic/diagnostics.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace isen;

TEST_CASE("background state: transforms equal the band edges")
{
    const GasParams P = GasParams::make(2.0, 1.0);
    const std::vector<GasState> cells(10, GasState{1.0, 0.0});
    const std::vector<double> I(10, 0.0);
    const Transformed t = transforms(cells, I, P);
    for (std::size_t i = 0; i < cells.size(); ++i) {
        CHECK(t.ztilde[i] == doctest::Approx(-2.0));
        CHECK(t.wtilde[i] == doctest::Approx(2.0));
    }
    const DiagnosticsRecord r = envelopes(cells, I, 0.0, 0.1, 0.0, 0.05, P);
    CHECK(r.min_z == doctest::Approx(-2.0));
    CHECK(r.max_w == doctest::Approx(2.0));
    CHECK(r.total_mass == doctest::Approx(2.0));
    CHECK(r.total_J == doctest::Approx(0.0));
    CHECK(in_band(r, 0.05, 0.0, P));
}

TEST_CASE("two cells: min and max of two numbers")
{
    const GasParams P = GasParams::make(2.0, 1.0);
    const std::vector<GasState> cells{from_rho_v(1.0, 0.5), from_rho_v(4.0, -0.5)};
    const std::vector<double> I{0.0, 0.0};
    const DiagnosticsRecord r = envelopes(cells, I, 0.0, 0.1, 0.0, 0.05, P);
    CHECK(r.min_z == doctest::Approx(-4.5));
    CHECK(r.max_w == doctest::Approx(3.5));
}

TEST_CASE("vacuum cells are skipped by the transforms")
{
    const GasParams P = GasParams::make(2.0, 1.0);
    const std::vector<GasState> cells{{1.0, 0.0}, {0.0, 0.0}};
    const Transformed t = transforms(cells, {0.0, 0.1}, P);
    CHECK(std::isnan(t.ztilde[1]));
    CHECK(std::isnan(t.wtilde[1]));
}

TEST_CASE("randomized envelopes match a brute-force scan")
{
    const GasParams P = GasParams::make(2.0, 1.0);
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> rd(0.0, 3.0), vd(-2.0, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<GasState> cells(40);
        for (auto& u : cells) u = rd(rng) < 0.1 ? GasState{0.0, 0.0} : from_rho_v(rd(rng), vd(rng));
        std::vector<double> I(cells.size());
        double acc = 0.0;
        for (std::size_t c = 0; c < cells.size(); ++c) {
            const double j = relative_energy_J(cells[c], P);
            I[c] = acc + 0.05 * j;
            acc += 0.1 * j;
        }
        const DiagnosticsRecord r = envelopes(cells, I, 0.0, 0.05, 1.0, 0.05, P);
        const oracle::Env e = oracle::scan(cells, 0.05, 2.0, 1.0);
        CHECK(r.min_z == doctest::Approx(e.min_z).epsilon(1e-13));
        CHECK(r.max_w == doctest::Approx(e.max_w).epsilon(1e-13));
        CHECK(r.min_ztilde == doctest::Approx(e.min_zt).epsilon(1e-12));
        CHECK(r.max_wtilde == doctest::Approx(e.max_wt).epsilon(1e-12));
        CHECK(r.max_w >= r.min_z);
        CHECK(r.total_J >= 0.0);
        // The shift only lowers w.
        CHECK(r.max_wtilde <= r.max_w);
    }
}

TEST_CASE("t0 requires the band to persist")
{
    const GasParams P = GasParams::make(2.0, 1.0);
    auto rec = [](double t, double zt, double wt) {
        DiagnosticsRecord r;
        r.t = t;
        r.min_ztilde = zt;
        r.max_wtilde = wt;
        return r;
    };
    // Band: -2 - E0 - eps <= min ztilde, max wtilde <= 2 + eps with E0 = 1, eps = 0.05.
    std::vector<DiagnosticsRecord> trace{rec(0.0, -3.0, 2.5), rec(1.0, -3.0, 2.01), rec(2.0, -3.0, 2.2),
                                         rec(3.0, -3.0, 2.04), rec(4.0, -3.04, 2.0)};
    const auto t0 = detect_t0(trace, 0.05, 1.0, P);
    REQUIRE(t0.has_value());
    CHECK(*t0 == 3.0);
    trace.push_back(rec(5.0, -3.2, 2.0));
    CHECK_FALSE(detect_t0(trace, 0.05, 1.0, P).has_value());
    CHECK_FALSE(detect_t0({}, 0.05, 1.0, P).has_value());
}

TEST_CASE("formal hats move linearly with time")
{
    DiagnosticsRecord r;
    r.t = 2.0;
    r.min_ztilde = -2.5;
    r.max_wtilde = 2.5;
    const auto [zh, wh] = formal_hats(r, 0.1);
    CHECK(zh == doctest::Approx(-2.7));
    CHECK(wh == doctest::Approx(2.7));
}

TEST_CASE("diagnostics row formatting")
{
    CHECK(diagnostics_header() == "t,min_z,max_w,min_ztilde,max_wtilde,mass,eta,J,t0flag");
    DiagnosticsRecord r;
    r.t = 0.5;
    const std::string row = diagnostics_row(r, true);
    CHECK(row.rfind("0.5,", 0) == 0);
    CHECK(row.back() == '1');
    CHECK(std::count(row.begin(), row.end(), ',') == 8);
}
