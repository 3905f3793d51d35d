#include "gll/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <string>

#include "gll/error.hpp"
#include "kinematics.hpp"

namespace gll {

using detail::at;
using kernel::dot;

std::string_view to_string(FlowForm f) {
    switch (f) {
        case FlowForm::Extrinsic: return "extrinsic";
        case FlowForm::Intrinsic: return "intrinsic";
        case FlowForm::Regularized: return "regularized";
        case FlowForm::ClassicalLL: return "classical_ll";
    }
    return "unknown";
}

FlowForm parse_flow_form(std::string_view name) {
    if (name == "extrinsic") return FlowForm::Extrinsic;
    if (name == "intrinsic") return FlowForm::Intrinsic;
    if (name == "regularized") return FlowForm::Regularized;
    if (name == "classical_ll") return FlowForm::ClassicalLL;
    throw Error(ErrorCode::BadParams,
                "form: unknown flow form '" + std::string(name) + "' (extrinsic|intrinsic|regularized|classical_ll)");
}

void FlowSpec::validate(std::size_t sphere_dim) const {
    if (form == FlowForm::Regularized) {
        if (!(epsilon > 0.0 && epsilon <= 1.0)) {
            throw Error(ErrorCode::BadParams,
                        "epsilon: must lie in (0, 1] for the regularized flow, got " + std::to_string(epsilon));
        }
    } else if (epsilon != 0.0) {
        throw Error(ErrorCode::BadParams, "epsilon: must be 0 unless form is regularized, got " + std::to_string(epsilon));
    }
    if (form == FlowForm::ClassicalLL && sphere_dim != 2) {
        throw Error(ErrorCode::WrongDimension,
                    "sphere_dim: classical_ll requires sphere_dim = 2, got " + std::to_string(sphere_dim));
    }
    if (a.dim() != sphere_dim + 1) {
        throw Error(ErrorCode::DimensionMismatch, "potential: expected a " + std::to_string(sphere_dim + 1) +
                                                      "x" + std::to_string(sphere_dim + 1) + " matrix, got dimension " +
                                                      std::to_string(a.dim()));
    }
    if (!(t_end > 0.0) || !std::isfinite(t_end)) {
        throw Error(ErrorCode::BadParams, "t_end: must be positive and finite, got " + std::to_string(t_end));
    }
    if (!(cfl > 0.0) || !std::isfinite(cfl)) {
        throw Error(ErrorCode::BadParams, "cfl: must be positive and finite, got " + std::to_string(cfl));
    }
    if (sample_every < 1) {
        throw Error(ErrorCode::BadParams, "sample_every: must be >= 1, got " + std::to_string(sample_every));
    }
}

FlowRhs::FlowRhs(PeriodicGrid grid, std::size_t ambient_dim, FlowForm form, PotentialMatrix a, double epsilon,
                 Scheme scheme)
    : grid_(std::move(grid)), dim_(ambient_dim), form_(form), a_(std::move(a)), epsilon_(epsilon), scheme_(scheme) {
    if (a_.dim() != dim_) {
        throw Error(ErrorCode::DimensionMismatch, "potential matrix is " + std::to_string(a_.dim()) +
                                                      "-dimensional, field is " + std::to_string(dim_));
    }
    if (form_ == FlowForm::ClassicalLL && dim_ != 3) {
        throw Error(ErrorCode::WrongDimension, "classical Landau-Lifshitz needs maps into S^2");
    }
    if (!(epsilon_ >= 0.0)) throw Error(ErrorCode::BadParams, "epsilon must be >= 0");
    const std::size_t size = grid_.n_points() * dim_;
    d_.assign(3, std::vector<double>(size));
    jet_.assign(4, std::vector<double>(size));
    au_.assign(dim_, 0.0);
}

void FlowRhs::operator()(std::span<const double> u, std::span<double> du) {
    switch (form_) {
        case FlowForm::Extrinsic: extrinsic(u, du); break;
        case FlowForm::Intrinsic: intrinsic(u, du, 2); break;
        case FlowForm::Regularized: intrinsic(u, du, epsilon_ == 0.0 ? 2 : 3); break;
        case FlowForm::ClassicalLL: classical_ll(u, du); break;
    }
}

TangentField FlowRhs::operator()(const SphereField& u) {
    if (u.ambient_dim() != dim_ || !(u.grid() == grid_)) {
        throw Error(ErrorCode::DimensionMismatch, "field does not match the evaluator's grid/dimension");
    }
    std::vector<double> out(u.data().size());
    (*this)(u.data(), out);
    return TangentField::assume_tangent(u, std::move(out));
}

RhsFn FlowRhs::as_function() {
    return [this](std::span<const double> u, std::span<double> du) { (*this)(u, du); };
}

void FlowRhs::extrinsic(std::span<const double> u, std::span<double> du) {
    const int orders[] = {1, 2, 3};
    const std::span<double> outs[] = {d_[0], d_[1], d_[2]};
    grid_.derivatives(u, dim_, orders, outs, scheme_);
    for (std::size_t i = 0; i < grid_.n_points(); ++i) {
        const auto p = at(u, i, dim_);
        const auto u1 = at(std::span<const double>(d_[0]), i, dim_);
        const auto u2 = at(std::span<const double>(d_[1]), i, dim_);
        const auto u3 = at(std::span<const double>(d_[2]), i, dim_);
        auto out = at(du, i, dim_);
        const double c_u = 3.0 * dot(u1, u2);
        const double c_u1 = 1.5 * dot(u1, u1) + 1.5 * a_.bilinear(p, p);
        for (std::size_t c = 0; c < dim_; ++c) out[c] = u3[c] + c_u * p[c] + c_u1 * u1[c];
    }
}

void FlowRhs::intrinsic(std::span<const double> u, std::span<double> du, int depth) {
    detail::tangent_derivative(grid_, dim_, u, u, jet_[0], scheme_);
    for (int l = 1; l <= depth; ++l) detail::tangent_derivative(grid_, dim_, u, jet_[l - 1], jet_[l], scheme_);
    for (std::size_t i = 0; i < grid_.n_points(); ++i) {
        const auto p = at(u, i, dim_);
        const auto ux = at(std::span<const double>(jet_[0]), i, dim_);
        const auto n2 = at(std::span<const double>(jet_[2]), i, dim_);
        auto out = at(du, i, dim_);
        const double c_ux = 0.5 * dot(ux, ux) + 1.5 * a_.bilinear(p, p);
        for (std::size_t c = 0; c < dim_; ++c) out[c] = n2[c] + c_ux * ux[c];
        if (depth == 3) {
            const auto n3 = at(std::span<const double>(jet_[3]), i, dim_);
            for (std::size_t c = 0; c < dim_; ++c) out[c] = -epsilon_ * n3[c] + out[c];
        }
    }
}

void FlowRhs::classical_ll(std::span<const double> u, std::span<double> du) {
    const int orders[] = {2};
    const std::span<double> outs[] = {d_[1]};
    grid_.derivatives(u, dim_, orders, outs, scheme_);
    auto cross = [](std::span<const double> a, std::span<const double> b, std::span<double> r, double s) {
        r[0] += s * (a[1] * b[2] - a[2] * b[1]);
        r[1] += s * (a[2] * b[0] - a[0] * b[2]);
        r[2] += s * (a[0] * b[1] - a[1] * b[0]);
    };
    for (std::size_t i = 0; i < grid_.n_points(); ++i) {
        const auto p = at(u, i, dim_);
        const auto u2 = at(std::span<const double>(d_[1]), i, dim_);
        auto out = at(du, i, dim_);
        std::fill(out.begin(), out.end(), 0.0);
        a_.apply(p, au_);
        cross(p, u2, out, 1.0);
        cross(au_, p, out, 1.0);
    }
}

namespace {

TangentField evaluate(const SphereField& u, FlowForm form, const PotentialMatrix& a, double eps, Scheme scheme) {
    FlowRhs rhs(u.grid(), u.ambient_dim(), form, a, eps, scheme);
    return rhs(u);
}

// Projected RK4 on raw node-major data with preallocated stage storage.
class Rk4 {
public:
    Rk4(std::size_t n_points, std::size_t dim) : n_(n_points), dim_(dim) {
        for (auto& k : k_) k.resize(n_points * dim);
        stage_.resize(n_points * dim);
    }

    void step(std::vector<double>& u, const RhsFn& rhs, double dt) {
        rhs(u, k_[0]);
        check(k_[0], dt / 2);
        stage_input(u, k_[0], dt / 2);
        rhs(stage_, k_[1]);
        check(k_[1], dt / 2);
        stage_input(u, k_[1], dt / 2);
        rhs(stage_, k_[2]);
        check(k_[2], dt);
        stage_input(u, k_[2], dt);
        rhs(stage_, k_[3]);
        check(k_[3], dt);
        const double w = dt / 6.0;
        for (std::size_t j = 0; j < u.size(); ++j) {
            u[j] += w * (k_[0][j] + 2.0 * k_[1][j] + 2.0 * k_[2][j] + k_[3][j]);
        }
        project(u);
    }

private:
    void stage_input(const std::vector<double>& u, const std::vector<double>& k, double h) {
        for (std::size_t j = 0; j < u.size(); ++j) stage_[j] = u[j] + h * k[j];
        project(stage_);
    }

    void project(std::vector<double>& v) const {
        for (std::size_t i = 0; i < n_; ++i) {
            auto p = at(std::span<double>(v), i, dim_);
            const double len = kernel::norm(p);
            if (!(len > kDefaultZeroFloor) || !std::isfinite(len)) {
                throw Error(ErrorCode::NonFinite, "state left the sphere neighbourhood at node " + std::to_string(i));
            }
            for (double& x : p) x /= len;
        }
    }

    void check(const std::vector<double>& k, double h) const {
        double worst = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            const double m = kernel::norm(at(std::span<const double>(k), i, dim_));
            if (!std::isfinite(m)) throw Error(ErrorCode::NonFinite, "stage derivative is not finite");
            worst = std::max(worst, m);
        }
        if (h * worst > kMaxStageIncrement) {
            throw Error(ErrorCode::NonFinite,
                        "stage increment " + std::to_string(h * worst) + " exceeds " + std::to_string(kMaxStageIncrement));
        }
    }

    std::size_t n_;
    std::size_t dim_;
    std::vector<double> k_[4];
    std::vector<double> stage_;
};

}  // namespace

TangentField rhs_extrinsic(const SphereField& u, const PotentialMatrix& a, Scheme scheme) {
    return evaluate(u, FlowForm::Extrinsic, a, 0.0, scheme);
}

TangentField rhs_intrinsic(const SphereField& u, const PotentialMatrix& a, Scheme scheme) {
    return evaluate(u, FlowForm::Intrinsic, a, 0.0, scheme);
}

TangentField rhs_regularized(const SphereField& u, const PotentialMatrix& a, double epsilon, Scheme scheme) {
    return evaluate(u, FlowForm::Regularized, a, epsilon, scheme);
}

TangentField rhs_classical_ll(const SphereField& u, const PotentialMatrix& a, Scheme scheme) {
    if (u.sphere_dim() != 2) {
        throw Error(ErrorCode::WrongDimension,
                    "classical Landau-Lifshitz needs maps into S^2, got S^" + std::to_string(u.sphere_dim()));
    }
    return evaluate(u, FlowForm::ClassicalLL, a, 0.0, scheme);
}

double stable_dt(const PeriodicGrid& grid, double epsilon, double cfl) {
    if (!(cfl > 0.0)) throw Error(ErrorCode::BadParams, "cfl must be positive");
    const double h = grid.spacing();
    const double h3 = h * h * h;
    return cfl * std::min(h3, h3 * h / std::max(epsilon, h));
}

double linear_amplification(const PeriodicGrid& grid, FlowForm form, double epsilon, double dt, Scheme scheme) {
    const std::size_t n = grid.n_points();
    const double h = grid.spacing();
    double worst = 0.0;
    for (std::size_t m = 1; m <= n / 2; ++m) {
        const double md = static_cast<double>(m);
        const bool nyquist = 2 * m == n;
        double s = md;
        if (scheme == Scheme::Fd4) s = (8.0 * std::sin(md * h) - std::sin(2.0 * md * h)) / (6.0 * h);
        // Odd spectral derivatives drop the Nyquist mode.
        const double s_odd = (scheme == Scheme::Spectral && nyquist) ? 0.0 : s;
        std::complex<double> lambda;
        if (form == FlowForm::ClassicalLL) {
            lambda = {0.0, s * s};
        } else {
            const double eps = form == FlowForm::Regularized ? epsilon : 0.0;
            lambda = {-eps * s * s * s * s, -s_odd * s_odd * s_odd};
        }
        const std::complex<double> z = dt * lambda;
        const std::complex<double> r = 1.0 + z * (1.0 + z * (0.5 + z * (1.0 / 6.0 + z / 24.0)));
        worst = std::max(worst, std::abs(r));
    }
    return worst;
}

SphereField step_rk4(const SphereField& u, const RhsFn& rhs, double dt) {
    if (!(dt > 0.0)) throw Error(ErrorCode::BadParams, "dt must be positive");
    std::vector<double> state(u.data().begin(), u.data().end());
    Rk4 rk(u.n_points(), u.ambient_dim());
    rk.step(state, rhs, dt);
    return SphereField(u.grid(), u.sphere_dim(), std::move(state));
}

Trajectory evolve(const SphereField& u0, const FlowSpec& spec) {
    spec.validate(u0.sphere_dim());
    const auto& grid = u0.grid();
    FlowRhs rhs(grid, u0.ambient_dim(), spec.form, spec.a, spec.epsilon, spec.scheme);
    const RhsFn f = rhs.as_function();

    Trajectory traj;
    traj.dt = stable_dt(grid, spec.epsilon, spec.cfl);
    const double ratio = spec.t_end / traj.dt;
    const auto n_steps = static_cast<std::size_t>(std::max(1.0, std::ceil(ratio - 1e-9)));
    const double last_dt = spec.t_end - static_cast<double>(n_steps - 1) * traj.dt;
    for (double h : {traj.dt, last_dt}) {
        const double amp = linear_amplification(grid, spec.form, spec.epsilon, std::min(h, spec.t_end), spec.scheme);
        if (amp > 1.0 + 1e-9) {
            char msg[160];
            std::snprintf(msg, sizeof msg, "dt=%.6g lies outside the RK4 stability region (amplification %.6g per step)",
                          h, amp);
            throw InstabilityError(0.0, msg);
        }
    }

    auto record = [&](const SphereField& u, double t) {
        traj.times.push_back(t);
        traj.diagnostics.push_back(diagnose(u, spec.a, t, spec.scheme));
        traj.de2_formula.push_back(de2_dt_formula(u, spec.a, spec.scheme));
        traj.states.push_back(u);
    };

    record(u0, 0.0);
    std::vector<double> state(u0.data().begin(), u0.data().end());
    Rk4 rk(u0.n_points(), u0.ambient_dim());
    double t = 0.0;
    for (std::size_t k = 1; k <= n_steps; ++k) {
        const bool last = k == n_steps;
        const double h = last ? last_dt : traj.dt;
        try {
            rk.step(state, f, h);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::NonFinite) throw;
            throw InstabilityError(t, e.detail());
        }
        t = last ? spec.t_end : static_cast<double>(k) * traj.dt;
        if (last || k % static_cast<std::size_t>(spec.sample_every) == 0) {
            record(SphereField(grid, u0.sphere_dim(), state), t);
        }
    }
    traj.steps = n_steps;

    if (traj.size() >= 3) {
        std::vector<double> e2;
        for (const auto& d : traj.diagnostics) e2.push_back(d.e2);
        const auto rates = fd_rates(traj.times, e2);
        for (std::size_t k = 0; k < traj.size(); ++k) traj.diagnostics[k].de2_residual = rates[k] - traj.de2_formula[k];
    }
    return traj;
}

BracketReport lie_bracket(const SphereField& u, const RhsFn& f, const RhsFn& g, double tau) {
    const std::size_t size = u.data().size();
    const std::size_t dim = u.ambient_dim();
    std::vector<double> fu(size), gu(size), plus(size), minus(size), fp(size), fm(size), gp(size), gm(size);
    f(u.data(), fu);
    g(u.data(), gu);

    auto shifted = [&](const std::vector<double>& dir, double s, std::vector<double>& out) {
        for (std::size_t j = 0; j < size; ++j) out[j] = u.data()[j] + s * dir[j];
        for (std::size_t i = 0; i < u.n_points(); ++i) kernel::normalize(at(std::span<double>(out), i, dim));
    };
    shifted(gu, tau, plus);
    shifted(gu, -tau, minus);
    f(plus, fp);
    f(minus, fm);
    shifted(fu, tau, plus);
    shifted(fu, -tau, minus);
    g(plus, gp);
    g(minus, gm);

    BracketReport r;
    for (std::size_t i = 0; i < u.n_points(); ++i) {
        double b2 = 0.0;
        for (std::size_t c = 0; c < dim; ++c) {
            const std::size_t j = i * dim + c;
            const double b = (fp[j] - fm[j]) / (2 * tau) - (gp[j] - gm[j]) / (2 * tau);
            b2 += b * b;
        }
        r.bracket_sup = std::max(r.bracket_sup, std::sqrt(b2));
        r.f_sup = std::max(r.f_sup, kernel::norm(at(std::span<const double>(fu), i, dim)));
        r.g_sup = std::max(r.g_sup, kernel::norm(at(std::span<const double>(gu), i, dim)));
    }
    return r;
}

}  // namespace gll
