#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "run_config.hpp"

namespace gll::cli {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitInstability = 3;

int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Lookup used for tolerance overrides (GLL_VERIFY_TOL_<CHECK>); defaults to getenv.
using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

struct VerifyCheck {
    std::string name;
    double value = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

/// Runs the identity suite at N = 64 (quick) or N = 256 (full).
std::vector<VerifyCheck> run_verify(std::string_view level, const EnvLookup& env = {});
int cmd_verify(std::string_view level, std::ostream& out, std::ostream& err, const EnvLookup& env = {});

std::vector<std::string> study_names();
int cmd_study(std::string_view name, const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace gll::cli
