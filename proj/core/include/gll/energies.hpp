#pragma once

// Energy functionals E1, E2, E3 of the flow, their closed-form rates, and
// Gronwall-type semi-conservation checks on sampled trajectories.

#include <span>
#include <string_view>
#include <vector>

#include "gll/fields.hpp"
#include "gll/geometry.hpp"
#include "gll/trajectory.hpp"

namespace gll {

/// E1 = 1/2 int |u_x|^2 + 1/2 int (u, Au)
double energy_e1(const SphereField& u, const PotentialMatrix& a, Scheme scheme = Scheme::Spectral);

/// E2 = int |grad u_x|^2 - 1/4 int |u_x|^4 - 9/4 int (u,Au)|u_x|^2 + int (u_x, A u_x)
double energy_e2(const SphereField& u, const PotentialMatrix& a, Scheme scheme = Scheme::Spectral);

/// E3 = int |grad^2 u_x|^2 - int <u_x, grad u_x>^2 - 3/2 int |u_x|^2 |grad u_x|^2
double energy_e3(const SphereField& u, Scheme scheme = Scheme::Spectral);

/// int |grad^2 u_x|^2, the quantity E3 ultimately controls.
double second_covariant_energy(const SphereField& u, Scheme scheme = Scheme::Spectral);

/// Half the time derivative of int |u_x|^2 and of int (u,Au) along the
/// undamped flow. They are the same quadrature with opposite sign.
struct E1Rates {
    double kinetic = 0.0;
    double potential = 0.0;
};
E1Rates e1_rate_components(const SphereField& u, const PotentialMatrix& a, Scheme scheme = Scheme::Spectral);

/// Closed-form dE2/dt:
///   9/4 int (u_x,Au)|u_x|^4 + 3 int (u_x,Au)(u_x,Au_x)
///   - 9/2 int (u_x,Au_x)<grad u_x,u_x> - 27/4 int (u,Au)(u_x,Au)|u_x|^2
/// Every term carries A, so the rate vanishes identically for A = 0.
double de2_dt_formula(const SphereField& u, const PotentialMatrix& a, Scheme scheme = Scheme::Spectral);

/// Everything except de2_residual, which needs neighbouring samples.
DiagnosticsRecord diagnose(const SphereField& u, const PotentialMatrix& a, double t, Scheme scheme = Scheme::Spectral);

/// Second-order finite-difference derivative of samples on a possibly
/// non-uniform time grid: centred three-point inside, one-sided at the ends.
/// Needs at least 3 samples (TooFewSamples).
std::vector<double> fd_rates(std::span<const double> t, std::span<const double> v);

/// Fits the smallest C >= 0 with dE/dt <= C (E + shift) + slack on every
/// sampled interval, then checks E against the Gronwall envelope
/// (E(0) + shift) e^{Ct} - shift.
struct GronwallReport {
    double c_hat = 0.0;
    /// max(1, 1 - min E): keeps E + shift >= 1 so negative energies stay meaningful.
    double shift = 1.0;
    double max_violation = 0.0;
    double max_envelope_excess = 0.0;
    bool envelope_ok = true;
    double max_value = 0.0;
    double min_value = 0.0;
    std::size_t samples = 0;
};

inline constexpr double kGronwallSlack = 1e-6;

GronwallReport gronwall_fit(std::span<const double> t, std::span<const double> e, double slack = kGronwallSlack);

enum class Functional { E2, E3 };
std::string_view to_string(Functional f);

GronwallReport semi_conservation_check(const Trajectory& traj, Functional which);

}  // namespace gll
