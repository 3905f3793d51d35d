#pragma once

// Flat-key run configuration shared by every subcommand.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "gll/dynamics.hpp"
#include "gll/harness.hpp"

namespace gll::cli {

struct RunConfig {
    // Flow. form "auto" means regularized when epsilon > 0, intrinsic otherwise.
    std::string form = "auto";
    double epsilon = 0.0;
    /// Empty: A = 0. n+1 entries: diagonal. (n+1)^2 entries: row-major.
    std::vector<double> potential;
    double t_end = 1.0;
    double cfl = 0.05;
    std::string scheme = "spectral";
    int sample_every = 100;

    // Grid and initial data.
    std::size_t n_points = 128;
    std::size_t sphere_dim = 2;
    std::string initial = "great_circle";
    double amplitude = 0.3;
    int n_modes = 8;
    double decay = 3.0;
    std::uint64_t seed = 1;

    // Execution.
    std::string out = "out";
    unsigned threads = 1;

    // Studies.
    double sample_dt = 1e-3;
    std::vector<std::size_t> n_list{32, 64, 128};
    std::vector<double> epsilons{1e-2, 1e-3, 1e-4};
    double delta = 1e-6;

    bool operator==(const RunConfig&) const = default;

    /// Throws Error(Config) with a message that starts with the offending key.
    void validate() const;

    FlowForm resolved_form() const;
    PotentialMatrix potential_matrix() const;
    FlowSpec flow_spec() const;
    InitialKind initial_kind() const;
    InitialParams initial_params() const;
    StudyOptions study_options() const;
};

/// Every key with its current value.
nlohmann::json to_json(const RunConfig& cfg);
/// Unknown keys and type mismatches throw Error(Config) naming the key.
RunConfig from_json(const nlohmann::json& j, RunConfig base = {});
/// Applies one "key=value" override. Lists are comma separated.
void apply_override(RunConfig& cfg, std::string_view assignment);

std::vector<std::string> config_keys();

/// File (optional) -> --set overrides, in order. Does not validate.
RunConfig load_config(const std::optional<std::filesystem::path>& file, const std::vector<std::string>& overrides);

}  // namespace gll::cli
