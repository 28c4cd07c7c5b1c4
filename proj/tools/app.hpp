#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace nlslab::app {

using nlohmann::json;

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode { kOk = 0, kConfigError = 2, kInvariantFailure = 3, kBudgetExceeded = 4 };

struct AppError : std::runtime_error {
    AppError(int code, const std::string& what) : std::runtime_error(what), code(code) {}
    int code;
};

// Default parameter block for each experiment.
json default_config(const std::string& experiment);
// Defaults overlaid with the file block and then the flags; unknown keys are rejected.
json merge_config(const std::string& experiment, const json& file, const json& flags);
// Throws AppError(kConfigError) when a parameter fails the owning module's preconditions.
void validate_config(const std::string& experiment, const json& cfg);

// "2^-3..2^-7", "0.125,0.0625" or a JSON array.
std::vector<double> parse_eps_list(const json& v);
std::vector<double> dyadic_range(double lo, double hi);

std::string format_double(double v);  // 17 significant digits
std::uint64_t fnv1a(const std::string& s);

// Writes to a temporary sibling and renames over the target.
void write_atomic(const std::string& path, const std::string& content);

struct Csv {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::string str() const;
};

// Two-column log-log text for one curve.
std::string plot_data(const std::vector<double>& x, const std::vector<double>& y, const std::string& title);

// Manifest next to the outputs: config hash, grid parameters, version, wall time.
void write_manifest(const std::string& path, const json& cfg, const json& grids, double wall_seconds);

int run_experiment(const std::string& experiment, const json& cfg);

struct SelfcheckOptions {
    std::string inject;  // "", "partition", "transform"
};
json selfcheck(const SelfcheckOptions& opt = {});

}  // namespace nlslab::app
