#pragma once

// Scripted numerical studies: traveling wave, vanishing viscosity,
// uniqueness/stability and the energy laws, each producing a StudyReport.

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "gll/dynamics.hpp"
#include "gll/fields.hpp"
#include "gll/geometry.hpp"

namespace gll {

enum class InitialKind { GreatCircle, PerturbedCircle, RandomSmooth };

std::string_view to_string(InitialKind k);
InitialKind parse_initial_kind(std::string_view name);

struct InitialParams {
    std::size_t n_points = 128;
    std::size_t sphere_dim = 2;
    /// Perturbed circle: size of the tangent noise. Random smooth: Fourier amplitude.
    double amplitude = 0.3;
    int n_modes = 8;
    double decay = 3.0;
};

/// great_circle: (cos x, sin x, 0, ...). perturbed_circle: great circle plus
/// amplitude * (smooth tangent noise), re-projected. random_smooth: Fourier
/// field around e_0 projected to S^n. BadParams on invalid parameters.
SphereField make_initial(InitialKind kind, const InitialParams& params, std::uint64_t seed);

struct Check {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    std::string relation;  // "<=", ">=", "==", or "holds" for boolean checks
    bool pass = false;
};

struct CaseResult {
    std::string name;
    std::map<std::string, double> metrics;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

struct StudyReport {
    std::string study;
    nlohmann::json parameters = nlohmann::json::object();
    std::vector<CaseResult> cases;
    std::vector<Check> checks;
    nlohmann::json provenance = nlohmann::json::object();

    bool passed() const;
    const CaseResult& find_case(std::string_view name) const;
    const Check& find_check(std::string_view name) const;
    nlohmann::json to_json() const;

    Check& check_le(std::string name, double value, double threshold);
    Check& check_ge(std::string name, double value, double threshold);
    Check& check_holds(std::string name, bool ok, double value = 0.0);
};

/// Shared knobs. sample_dt sets the diagnostics spacing (sample_every =
/// max(1, floor(sample_dt / dt))).
struct StudyOptions {
    std::size_t n_points = 128;
    double cfl = 0.05;
    Scheme scheme = Scheme::Spectral;
    unsigned threads = 1;
    std::uint64_t seed = 1;
    double sample_dt = 1e-3;
};

/// Great circle, A = 0, T = 1 per N; error against u0(x + t/2).
StudyReport study_traveling_wave(const std::vector<std::size_t>& n_list, const StudyOptions& opt = {});

/// Regularized runs for each epsilon against the epsilon = 0 run from the same u0.
StudyReport study_epsilon_vanishing(const std::vector<double>& epsilons, const SphereField& u0,
                                    const PotentialMatrix& a, double t_end, const StudyOptions& opt = {});

/// Growth of ||u - v||_{W^{1,2}} / delta for a tangent perturbation of size
/// delta, compared against the same run at delta / 2.
StudyReport study_uniqueness(const SphereField& u0, double delta, const PotentialMatrix& a, double t_end,
                             const StudyOptions& opt = {});

/// One undamped run: E1 drift, E2 drift (A = 0) or closed-form dE2/dt residual
/// (A != 0), Gronwall fits of E2, E3 and int |grad^2 u_x|^2, rate cancellation.
StudyReport study_energy_laws(const SphereField& u0, const PotentialMatrix& a, double t_end,
                              const StudyOptions& opt = {});

/// ||w||_{L^2} + ||w_x||_{L^2} for the ambient difference w = u - v.
double w12_distance(const SphereField& u, const SphereField& v);

/// Thresholds shared by the studies and the acceptance suite.
namespace thresholds {
inline constexpr double kTravelingWaveError = 1e-6;
inline constexpr double kE1Drift = 1e-6;
inline constexpr double kE2Drift = 1e-6;
inline constexpr double kDe2Relative = 1e-3;
inline constexpr double kRateCancellation = 1e-12;
inline constexpr double kKineticRateRelative = 1e-4;
inline constexpr double kH22Spread = 0.10;
inline constexpr double kE1IncreaseRate = 1e-7;
inline constexpr double kLinearity = 0.01;
inline constexpr double kEnvelopeSlack = 1e-3;
inline constexpr double kDirichletGrowth = 1e-5;
}  // namespace thresholds

}  // namespace gll
