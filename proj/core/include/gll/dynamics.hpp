#pragma once

// Right-hand sides of the four flow equations and the projected RK4 march.

#include <cstddef>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "gll/energies.hpp"
#include "gll/fields.hpp"
#include "gll/geometry.hpp"
#include "gll/grid.hpp"
#include "gll/trajectory.hpp"

namespace gll {

enum class FlowForm { Extrinsic, Intrinsic, Regularized, ClassicalLL };

std::string_view to_string(FlowForm f);
FlowForm parse_flow_form(std::string_view name);

struct FlowSpec {
    FlowForm form = FlowForm::Intrinsic;
    double epsilon = 0.0;
    PotentialMatrix a;
    double t_end = 1.0;
    double cfl = 0.05;
    Scheme scheme = Scheme::Spectral;
    int sample_every = 100;

    /// Throws BadParams / WrongDimension / DimensionMismatch naming the field.
    void validate(std::size_t sphere_dim) const;
};

/// u_t = u_xxx + 3(u_x,u_xx)u + 3/2|u_x|^2 u_x + 3/2(u,Au)u_x, from ambient derivatives.
TangentField rhs_extrinsic(const SphereField& u, const PotentialMatrix& a, Scheme scheme = Scheme::Spectral);
/// u_t = grad^2 u_x + 1/2|u_x|^2 u_x + 3/2(u,Au)u_x, from covariant derivatives.
TangentField rhs_intrinsic(const SphereField& u, const PotentialMatrix& a, Scheme scheme = Scheme::Spectral);
/// -epsilon grad^3 u_x + rhs_intrinsic. epsilon = 0 is rhs_intrinsic bit for bit.
TangentField rhs_regularized(const SphereField& u, const PotentialMatrix& a, double epsilon,
                             Scheme scheme = Scheme::Spectral);
/// u_t = u x u_xx + (Au) x u on S^2 only (WrongDimension otherwise).
TangentField rhs_classical_ll(const SphereField& u, const PotentialMatrix& a, Scheme scheme = Scheme::Spectral);

/// Raw node-major right-hand side: du = F(u).
using RhsFn = std::function<void(std::span<const double> u, std::span<double> du)>;

/// Reusable evaluator for one flow form on a fixed grid and dimension.
class FlowRhs {
public:
    FlowRhs(PeriodicGrid grid, std::size_t ambient_dim, FlowForm form, PotentialMatrix a, double epsilon = 0.0,
            Scheme scheme = Scheme::Spectral);

    void operator()(std::span<const double> u, std::span<double> du);
    TangentField operator()(const SphereField& u);
    RhsFn as_function();

    FlowForm form() const noexcept { return form_; }

private:
    void extrinsic(std::span<const double> u, std::span<double> du);
    void intrinsic(std::span<const double> u, std::span<double> du, int depth);
    void classical_ll(std::span<const double> u, std::span<double> du);

    PeriodicGrid grid_;
    std::size_t dim_;
    FlowForm form_;
    PotentialMatrix a_;
    double epsilon_;
    Scheme scheme_;
    std::vector<std::vector<double>> d_;
    std::vector<std::vector<double>> jet_;
    std::vector<double> au_;
};

/// cfl * min(h^3, h^4 / max(epsilon, h))
double stable_dt(const PeriodicGrid& grid, double epsilon, double cfl = 0.05);

/// max over resolved modes of |R(dt * lambda_m)|, R the RK4 stability
/// polynomial and lambda_m the symbol of the form's leading linear part
/// (-i s^3 - epsilon s^4, or i s^2 for classical_ll) under the given scheme.
double linear_amplification(const PeriodicGrid& grid, FlowForm form, double epsilon, double dt,
                            Scheme scheme = Scheme::Spectral);

/// A stage increment dt*|k| beyond this is treated as an unresolved, unstable step.
inline constexpr double kMaxStageIncrement = 0.5;

/// Classical four-stage RK4 in R^{n+1}; every stage input and the result are
/// projected back to the sphere. NonFinite if a stage is not finite or an
/// increment exceeds kMaxStageIncrement.
SphereField step_rk4(const SphereField& u, const RhsFn& rhs, double dt);

/// Fixed-step projected RK4 from u0 to spec.t_end (last step shortened to land
/// on t_end). Samples diagnostics at t = 0, every sample_every steps and at t_end.
/// InstabilityError carries the time of failure; a step size whose linear
/// amplification exceeds 1 is rejected up front at t = 0.
Trajectory evolve(const SphereField& u0, const FlowSpec& spec);

/// Central-difference Lie bracket [F, G](u) of two vector fields on the
/// sphere, with perturbations u +- tau*X re-projected pointwise.
struct BracketReport {
    double bracket_sup = 0.0;
    double f_sup = 0.0;
    double g_sup = 0.0;
};
BracketReport lie_bracket(const SphereField& u, const RhsFn& f, const RhsFn& g, double tau = 1e-5);

}  // namespace gll
