#include "isentropic/cli.hpp"

#include "isentropic/diagnostics.hpp"
#include "isentropic/riemann.hpp"
#include "isentropic/verify.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

namespace isen::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr const char* kVersion = "0.1.0";

json base_config()
{
    return json{
        {"gas", {{"gamma", 2.0}, {"rho_bar", 1.0}}},
        {"mesh", {{"dx", 0.05}, {"x_min", -20.0}, {"x_max", 20.0}, {"T", 5.0}}},
        {"scheme", {{"variant", "modified"}, {"alpha", 0.75}, {"beta", 0.1}, {"epsilon", 0.05}}},
        {"output", {{"snapshots", 11}}},
    };
}

} // namespace

std::vector<std::string> preset_names()
{
    return {"constant", "square-pulse", "decay-pulse", "smooth-pulse", "riemann", "random"};
}

json preset_config(const std::string& name)
{
    json c = base_config();
    if (name == "constant") {
        c["mesh"].update({{"x_min", -5.0}, {"x_max", 5.0}, {"T", 1.0}});
        c["initial"] = {{"preset", "constant"}};
    } else if (name == "square-pulse") {
        c["initial"] = {{"preset", "square-pulse"}, {"amplitude", 2.0}, {"a", -1.0}, {"b", 1.0}};
    } else if (name == "decay-pulse") {
        // The square pulse with a band wide enough to be entered before T.
        c["scheme"]["epsilon"] = 0.25;
        c["initial"] = {{"preset", "square-pulse"}, {"amplitude", 2.0}, {"a", -1.0}, {"b", 1.0}};
    } else if (name == "smooth-pulse") {
        c["mesh"].update({{"x_min", -10.0}, {"x_max", 10.0}, {"T", 1.0}});
        c["initial"] = {{"preset", "smooth-pulse"}, {"amplitude", 0.5}, {"half_width", 2.0}};
    } else if (name == "riemann") {
        c["mesh"].update({{"x_min", -15.0}, {"x_max", 15.0}, {"T", 2.0}});
        c["initial"] = {{"preset", "riemann"}, {"left", {2.0, 0.0}}, {"right", {1.0, 0.0}}, {"a", -5.0}, {"b", 5.0}};
    } else if (name == "random") {
        c["mesh"].update({{"x_min", -15.0}, {"x_max", 15.0}, {"T", 2.0}});
        c["initial"] = {{"preset", "random"}, {"seed", 1},       {"pieces", 8},     {"a", -2.0},
                        {"b", 2.0},         {"rho_lo", 0.5},    {"rho_hi", 1.5},   {"v_max", 0.3}};
    } else {
        throw UsageError("unknown preset '" + name + "'");
    }
    return c;
}

void apply_override(json& cfg, const std::string& assignment)
{
    const auto eq = assignment.find('=');
    const auto dot = assignment.find('.');
    if (eq == std::string::npos || dot == std::string::npos || dot > eq || dot == 0 || dot + 1 == eq) {
        throw UsageError("override '" + assignment + "' must look like section.key=value");
    }
    const std::string section = assignment.substr(0, dot);
    const std::string key = assignment.substr(dot + 1, eq - dot - 1);
    const std::string text = assignment.substr(eq + 1);
    json value = json::parse(text, nullptr, false);
    if (value.is_discarded()) value = text;
    if (cfg.contains(section) && !cfg[section].is_object()) {
        throw UsageError("override '" + assignment + "': '" + section + "' is not a section");
    }
    cfg[section][key] = value;
}

namespace {

const std::set<std::string>& allowed_keys(const std::string& section)
{
    static const std::map<std::string, std::set<std::string>> keys{
        {"gas", {"gamma", "rho_bar"}},
        {"mesh", {"dx", "x_min", "x_max", "T"}},
        {"scheme", {"variant", "alpha", "beta", "mu", "epsilon", "delta"}},
        {"initial", {"preset", "amplitude", "a", "b", "half_width", "left", "right", "seed", "pieces", "rho_lo",
                     "rho_hi", "v_max", "file"}},
        {"output", {"snapshots"}},
    };
    static const std::set<std::string> none;
    const auto it = keys.find(section);
    return it == keys.end() ? none : it->second;
}

class Reader {
public:
    explicit Reader(const json& cfg) : cfg_(cfg) {}

    bool has(const std::string& s, const std::string& k) const
    {
        return cfg_.contains(s) && cfg_[s].contains(k) && !cfg_[s][k].is_null();
    }

    double num(const std::string& s, const std::string& k, std::optional<double> def = std::nullopt) const
    {
        if (!has(s, k)) {
            if (def) return *def;
            throw UsageError("missing required key " + s + "." + k);
        }
        const json& v = cfg_[s][k];
        if (!v.is_number()) throw UsageError("key " + s + "." + k + " must be a number");
        const double d = v.get<double>();
        if (!std::isfinite(d)) throw UsageError("key " + s + "." + k + " must be finite");
        return d;
    }

    std::string str(const std::string& s, const std::string& k, std::optional<std::string> def = std::nullopt) const
    {
        if (!has(s, k)) {
            if (def) return *def;
            throw UsageError("missing required key " + s + "." + k);
        }
        const json& v = cfg_[s][k];
        if (!v.is_string()) throw UsageError("key " + s + "." + k + " must be a string");
        return v.get<std::string>();
    }

    GasState pair(const std::string& s, const std::string& k) const
    {
        if (!has(s, k)) throw UsageError("missing required key " + s + "." + k);
        const json& v = cfg_[s][k];
        if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
            throw UsageError("key " + s + "." + k + " must be [rho, v]");
        }
        const double rho = v[0].get<double>();
        if (!(rho >= 0.0) || !std::isfinite(v[1].get<double>())) {
            throw UsageError("key " + s + "." + k + " needs rho >= 0 and finite v");
        }
        return from_rho_v(rho, v[1].get<double>());
    }

private:
    const json& cfg_;
};

} // namespace

RunSetup resolve(const json& cfg)
{
    if (!cfg.is_object()) throw UsageError("configuration must be a JSON object");
    for (const auto& [section, body] : cfg.items()) {
        const auto& keys = allowed_keys(section);
        if (keys.empty()) throw UsageError("unknown section '" + section + "'");
        if (!body.is_object()) throw UsageError("section '" + section + "' must be an object");
        for (const auto& [key, _] : body.items()) {
            if (!keys.count(key)) throw UsageError("unknown key " + section + "." + key);
        }
    }
    const Reader r(cfg);
    RunSetup s;
    MeshConfig& m = s.mesh;
    m.gamma = r.num("gas", "gamma");
    m.rho_bar = r.num("gas", "rho_bar", 1.0);
    if (!(m.gamma > 1.0 && m.gamma <= 3.0)) throw UsageError("key gas.gamma must lie in (1, 3]");
    if (!(m.rho_bar > 0.0)) throw UsageError("key gas.rho_bar must be positive");
    m.dx = r.num("mesh", "dx");
    m.x_min = r.num("mesh", "x_min");
    m.x_max = r.num("mesh", "x_max");
    m.T = r.num("mesh", "T");
    if (!(m.dx > 0.0)) throw UsageError("key mesh.dx must be positive");
    if (!(m.x_max > m.x_min)) throw UsageError("key mesh.x_max must exceed mesh.x_min");
    if (!(m.T >= 0.0)) throw UsageError("key mesh.T must be nonnegative");
    const double cells = (m.x_max - m.x_min) / (2.0 * m.dx);
    if (std::abs(cells - std::round(cells)) > 1e-9 * cells || cells < 2.0) {
        throw UsageError("key mesh.dx must divide (x_max - x_min) / 2 into at least two cells");
    }
    try {
        m.variant = variant_from_string(r.str("scheme", "variant", std::string("modified")));
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("key scheme.variant: ") + e.what());
    }
    m.alpha = r.num("scheme", "alpha", 0.75);
    m.beta = r.num("scheme", "beta", 0.1);
    m.epsilon = r.num("scheme", "epsilon", 0.05);
    if (r.has("scheme", "mu")) m.mu = r.num("scheme", "mu");
    if (r.has("scheme", "delta")) m.delta = r.num("scheme", "delta");
    if (!(m.alpha > 0.5 && m.alpha < 1.0)) throw UsageError("key scheme.alpha must lie in (1/2, 1)");
    if (!(m.beta > 0.0)) throw UsageError("key scheme.beta must be positive");
    if (!(m.epsilon > 0.0)) throw UsageError("key scheme.epsilon must be positive");
    if (r.has("scheme", "mu") && !(m.mu >= 1.0)) throw UsageError("key scheme.mu must be at least 1");
    if (r.has("scheme", "delta") && !(m.delta >= 0.0)) throw UsageError("key scheme.delta must be nonnegative");

    const double snaps = r.num("output", "snapshots", 11.0);
    if (!(snaps >= 1.0) || snaps != std::floor(snaps)) throw UsageError("key output.snapshots must be a positive integer");
    s.snapshots = static_cast<int>(snaps);

    const GasParams P = GasParams::make(m.gamma, m.rho_bar);
    const std::string preset = r.str("initial", "preset");
    try {
        if (preset == "constant") {
            s.initial = constant_data(P);
        } else if (preset == "square-pulse") {
            s.initial = square_pulse(P, r.num("initial", "amplitude", 2.0), r.num("initial", "a", -1.0),
                                     r.num("initial", "b", 1.0));
        } else if (preset == "smooth-pulse") {
            s.initial = smooth_pulse(P, r.num("initial", "amplitude", 0.5), r.num("initial", "half_width", 2.0));
        } else if (preset == "riemann") {
            s.initial = riemann_slab(P, r.pair("initial", "left"), r.pair("initial", "right"),
                                     r.num("initial", "a", -5.0), r.num("initial", "b", 5.0));
        } else if (preset == "random") {
            const double seed = r.num("initial", "seed", 1.0);
            if (!(seed >= 0.0) || seed != std::floor(seed)) throw UsageError("key initial.seed must be a nonnegative integer");
            s.initial = random_piecewise(P, static_cast<std::uint64_t>(seed), static_cast<int>(r.num("initial", "pieces", 8.0)),
                                    r.num("initial", "a", -2.0), r.num("initial", "b", 2.0),
                                    r.num("initial", "rho_lo", 0.5), r.num("initial", "rho_hi", 1.5),
                                    r.num("initial", "v_max", 0.3));
        } else if (preset == "samples") {
            s.initial = samples_file(P, r.str("initial", "file"));
        } else {
            throw UsageError("key initial.preset: unknown preset '" + preset + "'");
        }
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("initial data: ") + e.what());
    }
    if (s.initial.support_hi > s.initial.support_lo &&
        (s.initial.support_lo < m.x_min || s.initial.support_hi > m.x_max)) {
        throw UsageError("initial data support must lie inside [mesh.x_min, mesh.x_max]");
    }
    return s;
}

namespace {

std::uint64_t fnv1a(const std::string& s, std::uint64_t h = 1469598103934665603ULL)
{
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string fmt_num(double v) { return fmt::format("{:.17g}", v); }

void write_snapshot(const fs::path& path, const Scheme& s)
{
    const auto& st = s.state();
    const Transformed tr = transforms(st.cells, st.prefix_J, s.params());
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << "x,rho,m,v,z,w,ztilde,wtilde\n";
    for (int c = 0; c < s.n_cells(); ++c) {
        const GasState u = st.cells[c];
        const InvariantPair q = to_invariants(u, s.params());
        const double nan = std::numeric_limits<double>::quiet_NaN();
        fmt::print(f, "{},{},{},{},{},{},{},{}\n", fmt_num(s.x_center(c)), fmt_num(u.rho), fmt_num(u.m),
                   fmt_num(u.v()), fmt_num(q.vacuum ? nan : q.z), fmt_num(q.vacuum ? nan : q.w),
                   fmt_num(tr.ztilde[c]), fmt_num(tr.wtilde[c]));
    }
}

json record_json(const DiagnosticsRecord& r)
{
    return {{"t", r.t},
            {"min_z", r.min_z},
            {"max_w", r.max_w},
            {"min_ztilde", r.min_ztilde},
            {"max_wtilde", r.max_wtilde},
            {"mass", r.total_mass},
            {"eta", r.total_eta},
            {"J", r.total_J}};
}

json load_config(const RunOptions& opt)
{
    json cfg = json::object();
    if (opt.preset) cfg = preset_config(*opt.preset);
    if (opt.config_path) {
        std::ifstream in(*opt.config_path);
        if (!in) throw UsageError("cannot read config file " + *opt.config_path);
        json file = json::parse(in, nullptr, false, true);
        if (file.is_discarded()) throw UsageError("config file " + *opt.config_path + " is not valid JSON");
        if (opt.preset) {
            cfg.merge_patch(file);
        } else {
            cfg = std::move(file);
        }
    }
    if (!opt.preset && !opt.config_path) throw UsageError("run needs --config PATH or --preset NAME");
    for (const auto& o : opt.overrides) apply_override(cfg, o);
    if (opt.snapshots) {
        if (*opt.snapshots < 1) throw UsageError("--snapshots must be positive");
        cfg["output"]["snapshots"] = *opt.snapshots;
    }
    return cfg;
}

} // namespace

int cmd_run(const RunOptions& opt, std::ostream& out, std::ostream& err)
{
    json cfg;
    RunSetup setup;
    try {
        cfg = load_config(opt);
        setup = resolve(cfg);
    } catch (const UsageError& e) {
        fmt::print(err, "usage error: {}\n", e.what());
        return 2;
    }

    const auto t_start = std::chrono::steady_clock::now();
    try {
        fs::create_directories(opt.out_dir);
        Scheme scheme(setup.mesh, setup.initial);
        const MeshConfig& mc = scheme.config();
        const GasParams& P = scheme.params();
        const int S = scheme.total_steps();

        std::vector<int> snap_steps;
        const int K = setup.snapshots;
        for (int i = 0; i < K; ++i) {
            const int n = K == 1 ? S : static_cast<int>(std::llround(static_cast<double>(i) * S / (K - 1)));
            if (snap_steps.empty() || n != snap_steps.back()) snap_steps.push_back(n);
        }
        if (snap_steps.back() != S) snap_steps.push_back(S);

        std::vector<std::string> outputs;
        std::vector<DiagnosticsRecord> records;
        json L_hist = json::array(), M_hist = json::array();
        double max_rh = 0.0, max_cut = 0.0, max_defect = 0.0;
        long vacuum_total = 0;
        long fallback_total = 0;
        bool boundary = false;
        const double mass0 = envelopes(scheme.state().cells, scheme.state().prefix_J, 0.0, mc.dx, mc.E0, mc.epsilon, P)
                                 .total_mass;
        std::size_t next_snap = 0;
        int snap_index = 0;
        auto maybe_snapshot = [&]() {
            if (next_snap < snap_steps.size() && snap_steps[next_snap] == scheme.state().n) {
                const std::string name = fmt::format("snapshot_{:05d}.csv", snap_index++);
                write_snapshot(fs::path(opt.out_dir) / name, scheme);
                outputs.push_back(name);
                records.push_back(envelopes(scheme.state().cells, scheme.state().prefix_J, scheme.state().t, mc.dx,
                                            mc.E0, mc.epsilon, P));
                ++next_snap;
            }
        };
        L_hist.push_back(scheme.state().L);
        M_hist.push_back(scheme.state().M);
        maybe_snapshot();
        while (!scheme.done()) {
            const StepReport rep = scheme.step();
            max_rh = std::max(max_rh, rep.max_rh_residual);
            max_cut = std::max(max_cut, rep.cut_magnitude);
            max_defect = std::max(max_defect, rep.conservation_defect);
            vacuum_total += rep.vacuum_cells;
            fallback_total += rep.fallback_cells;
            boundary = boundary || rep.boundary_touched;
            L_hist.push_back(scheme.state().L);
            M_hist.push_back(scheme.state().M);
            maybe_snapshot();
        }
        const auto t0 = detect_t0(records, mc.epsilon, mc.E0, P);

        {
            std::ofstream f(fs::path(opt.out_dir) / "diagnostics.csv");
            f << diagnostics_header() << "\n";
            for (const auto& r : records) {
                f << diagnostics_row(r, t0 && r.t >= *t0) << "\n";
            }
        }
        outputs.push_back("diagnostics.csv");

        const DiagnosticsRecord& last = records.back();
        json summary{
            {"variant", to_string(mc.variant)},
            {"steps", S},
            {"cells", scheme.n_cells()},
            {"dx", mc.dx},
            {"dt", mc.dt},
            {"t_final", scheme.state().t},
            {"E0", mc.E0},
            {"M0", mc.M0},
            {"delta", scheme.delta()},
            {"mu", scheme.mu()},
            {"L0", scheme.L0()},
            {"L_final", scheme.state().L},
            {"M_final", scheme.state().M},
            {"L", L_hist},
            {"M", M_hist},
            {"envelopes_final", record_json(last)},
            {"t0", t0 ? json(*t0) : json(nullptr)},
            {"epsilon", mc.epsilon},
            {"max_rh_residual", max_rh},
            {"max_cut_magnitude", max_cut},
            {"max_conservation_defect", max_defect},
            {"mass_initial", mass0},
            {"mass_final", last.total_mass},
            {"mass_drift", last.total_mass - mass0},
            {"vacuum_constructions", vacuum_total},
            {"fallback_constructions", fallback_total},
            {"boundary_touched", boundary},
        };
        {
            std::ofstream f(fs::path(opt.out_dir) / "summary.json");
            f << summary.dump(2) << "\n";
        }
        outputs.push_back("summary.json");

        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
        std::uint64_t h = fnv1a(cfg.dump());
        if (setup.initial.name == "samples") {
            std::ifstream in(cfg["initial"]["file"].get<std::string>(), std::ios::binary);
            std::ostringstream bytes;
            bytes << in.rdbuf();
            h = fnv1a(bytes.str(), h);
        }
        json files = json::array();
        for (const auto& name : outputs) {
            files.push_back({{"file", name}, {"bytes", fs::file_size(fs::path(opt.out_dir) / name)}});
        }
        json manifest{
            {"version", kVersion},
            {"config", cfg},
            {"input_hash", fmt::format("fnv1a64:{:016x}", h)},
            {"outputs", files},
            {"timings", {{"total_seconds", seconds}, {"mean_step_seconds", S > 0 ? seconds / S : 0.0}}},
        };
        {
            std::ofstream f(fs::path(opt.out_dir) / "manifest.json");
            f << manifest.dump(2) << "\n";
        }

        if (!opt.quiet) {
            fmt::print(out, "steps={} dt={:.6g} E0={:.6g} M0={:.6g} L={:.6g} M={:.6g} mass_drift={:.3e} t0={}\n", S,
                       mc.dt, mc.E0, mc.M0, scheme.state().L, scheme.state().M, last.total_mass - mass0,
                       t0 ? fmt::format("{:.6g}", *t0) : std::string("absent"));
            if (boundary) fmt::print(err, "warning: waves reached the domain boundary\n");
        }
    } catch (const std::invalid_argument& e) {
        fmt::print(err, "usage error: {}\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        fmt::print(err, "run failed: {}\n", e.what());
        return 1;
    }
    return 0;
}

int cmd_riemann(const RiemannOptions& opt, std::ostream& out, std::ostream& err)
{
    GasParams P;
    GasState uL, uR;
    try {
        if (opt.left.size() != 2 || opt.right.size() != 2) throw UsageError("states need two values: rho,v");
        for (const auto* s : {&opt.left, &opt.right}) {
            if (!((*s)[0] >= 0.0) || !std::isfinite((*s)[0]) || !std::isfinite((*s)[1])) {
                throw UsageError("states need rho >= 0 and finite values");
            }
        }
        if (opt.samples < 2) throw UsageError("--samples must be at least 2");
        P = GasParams::make(opt.gamma, opt.rho_bar);
        uL = from_rho_v(opt.left[0], opt.left[1]);
        uR = from_rho_v(opt.right[0], opt.right[1]);
    } catch (const UsageError& e) {
        fmt::print(err, "usage error: {}\n", e.what());
        return 2;
    } catch (const std::domain_error& e) {
        fmt::print(err, "usage error: {}\n", e.what());
        return 2;
    }
    try {
        const RiemannSolution sol = solve_riemann(uL, uR, P);
        fmt::print(out, "pattern={}\n", sol.case_name());
        fmt::print(out, "uM: rho={:.17g} m={:.17g} v={:.17g}\n", sol.uM.rho, sol.uM.m, sol.uM.v());
        fmt::print(out, "wave1: {} speeds [{:.17g}, {:.17g}]\n", to_string(sol.pattern.family1), sol.s1_lo, sol.s1_hi);
        fmt::print(out, "wave2: {} speeds [{:.17g}, {:.17g}]\n", to_string(sol.pattern.family2), sol.s2_lo, sol.s2_hi);
        const double S = 1.25 * std::max({std::abs(sol.s1_lo), std::abs(sol.s2_hi), 1e-3});
        std::ofstream f(opt.out_file);
        if (!f) throw std::runtime_error("cannot write " + opt.out_file);
        f << "xi,rho,m,v\n";
        for (int i = 0; i < opt.samples; ++i) {
            const double xi = -S + 2.0 * S * i / (opt.samples - 1);
            const GasState u = sample(sol, xi, P);
            fmt::print(f, "{},{},{},{}\n", fmt_num(xi), fmt_num(u.rho), fmt_num(u.m), fmt_num(u.v()));
        }
        fmt::print(out, "profile written to {}\n", opt.out_file);
    } catch (const std::exception& e) {
        fmt::print(err, "riemann failed: {}\n", e.what());
        return 1;
    }
    return 0;
}

std::vector<std::string> claim_ids() { return {"f-nonneg", "g-nonneg", "source-signs", "square-identity"}; }

int cmd_verify(const VerifyOptions& opt, std::ostream& out, std::ostream& err)
{
    std::vector<std::string> sel = opt.claims;
    if (sel.empty() || (sel.size() == 1 && sel[0] == "all")) sel = claim_ids();
    const auto ids = claim_ids();
    for (const auto& c : sel) {
        if (std::find(ids.begin(), ids.end(), c) == ids.end()) {
            fmt::print(err, "usage error: unknown claim '{}' (known: {})\n", c, fmt::join(ids, ", "));
            return 2;
        }
    }
    for (double g : opt.gammas) {
        if (!(g > 1.0 && g <= 3.0)) {
            fmt::print(err, "usage error: gamma {} outside (1, 3]\n", g);
            return 2;
        }
    }
    bool ok = true;
    try {
        for (const auto& c : sel) {
            for (double g : opt.gammas) {
                CertReport r;
                const GasParams P = GasParams::make(g, 1.0);
                if (c == "f-nonneg") r = check_f_nonneg(g, 10000, opt.tolerance);
                if (c == "g-nonneg") r = check_g_nonneg(g, 10000, 50.0, opt.tolerance);
                if (c == "source-signs") r = check_source_signs(P, SignGrid{}, opt.tolerance);
                if (c == "square-identity") r = check_square_identity(P, 20000, 4.0, 8.0, opt.tolerance);
                fmt::print(out, "gamma={:.6g} {}\n", g, r.to_text());
                ok = ok && r.pass;
            }
        }
    } catch (const std::exception& e) {
        fmt::print(err, "verify failed: {}\n", e.what());
        return 1;
    }
    return ok ? 0 : 1;
}

int main_entry(int argc, char** argv)
{
    CLI::App app{"Isentropic gas dynamics: decay-bound finite-volume scheme"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    RunOptions run;
    std::string config_path, preset;
    int snapshots = 0;
    auto* run_cmd = app.add_subcommand("run", "Run the scheme and write snapshots, diagnostics and a summary");
    run_cmd->add_option("--config", config_path, "JSON configuration file");
    run_cmd->add_option("--preset", preset, "Built-in configuration")
        ->check(CLI::IsMember(preset_names()));
    run_cmd->add_option("--set", run.overrides, "Override section.key=value (repeatable)");
    run_cmd->add_option("--out", run.out_dir, "Output directory")->capture_default_str();
    run_cmd->add_option("--snapshots", snapshots, "Number of snapshots, including initial and final");
    run_cmd->add_flag("--quiet", run.quiet, "Suppress the summary line");

    RiemannOptions rie;
    auto* rie_cmd = app.add_subcommand("riemann", "Solve one Riemann problem and sample its profile");
    rie_cmd->add_option("--left", rie.left, "Left state rho,v")->delimiter(',')->expected(2)->required();
    rie_cmd->add_option("--right", rie.right, "Right state rho,v")->delimiter(',')->expected(2)->required();
    rie_cmd->add_option("--gamma", rie.gamma, "Adiabatic exponent")->capture_default_str();
    rie_cmd->add_option("--rho-bar", rie.rho_bar, "Background density")->capture_default_str();
    rie_cmd->add_option("--samples", rie.samples, "Profile samples")->capture_default_str();
    rie_cmd->add_option("--out", rie.out_file, "Profile CSV")->capture_default_str();

    VerifyOptions ver;
    auto* ver_cmd = app.add_subcommand("verify", "Certify the analytic inequalities numerically");
    ver_cmd->add_option("claims", ver.claims, "Claim ids or 'all'");
    ver_cmd->add_option("--gamma", ver.gammas, "Exponents to check")->delimiter(',');
    ver_cmd->add_option("--tolerance", ver.tolerance, "Allowed negative margin")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (*run_cmd) {
        if (!config_path.empty()) run.config_path = config_path;
        if (!preset.empty()) run.preset = preset;
        if (run_cmd->count("--snapshots")) run.snapshots = snapshots;
        return cmd_run(run, std::cout, std::cerr);
    }
    if (*rie_cmd) return cmd_riemann(rie, std::cout, std::cerr);
    return cmd_verify(ver, std::cout, std::cerr);
}

} // namespace isen::cli
