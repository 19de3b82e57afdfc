// Command-line front end. Exit codes: 0 success, 1 runtime failure, 2 usage error.
#pragma once

#include "isentropic/initial_data.hpp"
#include "isentropic/scheme.hpp"

#include <json.hpp>

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace isen::cli {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Built-in configurations: constant, square-pulse, decay-pulse, smooth-pulse,
// riemann, random.
nlohmann::json preset_config(const std::string& name);
std::vector<std::string> preset_names();

// Applies "section.key=value"; value is parsed as JSON when possible, else kept as a string.
void apply_override(nlohmann::json& cfg, const std::string& assignment);

struct RunSetup {
    MeshConfig mesh;
    InitialData initial;
    int snapshots = 11; // snapshot count including the initial and final states
};

// Validates the configuration; throws UsageError naming the offending key.
RunSetup resolve(const nlohmann::json& cfg);

struct RunOptions {
    std::optional<std::string> config_path;
    std::optional<std::string> preset;
    std::vector<std::string> overrides;
    std::string out_dir = "out";
    std::optional<int> snapshots;
    bool quiet = false;
};

int cmd_run(const RunOptions& opt, std::ostream& out, std::ostream& err);

struct RiemannOptions {
    std::vector<double> left{1.0, 0.0};  // rho, v
    std::vector<double> right{1.0, 0.0}; // rho, v
    double gamma = 2.0;
    double rho_bar = 1.0;
    int samples = 401;
    std::string out_file = "riemann_profile.csv";
};

int cmd_riemann(const RiemannOptions& opt, std::ostream& out, std::ostream& err);

struct VerifyOptions {
    std::vector<std::string> claims; // empty or "all": every claim
    std::vector<double> gammas{1.1, 1.4, 5.0 / 3.0};
    double tolerance = 1e-12;
};

std::vector<std::string> claim_ids();
int cmd_verify(const VerifyOptions& opt, std::ostream& out, std::ostream& err);

// Parses argv and dispatches; never throws.
int main_entry(int argc, char** argv);

} // namespace isen::cli
