#include "gll/energies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gll/error.hpp"
#include "kinematics.hpp"

namespace gll {

namespace {

using detail::at;
using kernel::dot;

struct Pointwise {
    const SphereField& u;
    const detail::CovariantJet& jet;
    std::size_t dim;

    std::span<const double> p(std::size_t i) const { return u.node(i); }
    std::span<const double> ux(std::size_t i) const { return at(std::span<const double>(jet.levels[0]), i, dim); }
    std::span<const double> cov(int l, std::size_t i) const {
        return at(std::span<const double>(jet.levels[static_cast<std::size_t>(l)]), i, dim);
    }
};

detail::CovariantJet make_jet(const SphereField& u, int depth, Scheme scheme) {
    detail::CovariantJet jet;
    detail::covariant_jet(u.grid(), u.ambient_dim(), u.data(), depth, scheme, jet);
    return jet;
}

void require_dim(const SphereField& u, const PotentialMatrix& a) {
    if (a.dim() != u.ambient_dim()) {
        throw Error(ErrorCode::DimensionMismatch, "potential matrix is " + std::to_string(a.dim()) +
                                                      "-dimensional, field is " + std::to_string(u.ambient_dim()));
    }
}

double e1_from(const Pointwise& pw, const PotentialMatrix& a) {
    return detail::quad(pw.u.grid(), [&](std::size_t i) {
        return 0.5 * dot(pw.ux(i), pw.ux(i)) + 0.5 * a.bilinear(pw.p(i), pw.p(i));
    });
}

double e2_from(const Pointwise& pw, const PotentialMatrix& a) {
    return detail::quad(pw.u.grid(), [&](std::size_t i) {
        const double ux2 = dot(pw.ux(i), pw.ux(i));
        const double n1 = dot(pw.cov(1, i), pw.cov(1, i));
        return n1 - 0.25 * ux2 * ux2 - 2.25 * a.bilinear(pw.p(i), pw.p(i)) * ux2 + a.bilinear(pw.ux(i), pw.ux(i));
    });
}

double e3_from(const Pointwise& pw) {
    return detail::quad(pw.u.grid(), [&](std::size_t i) {
        const double ux2 = dot(pw.ux(i), pw.ux(i));
        const double n1 = dot(pw.cov(1, i), pw.cov(1, i));
        const double n2 = dot(pw.cov(2, i), pw.cov(2, i));
        const double mix = dot(pw.ux(i), pw.cov(1, i));
        return n2 - mix * mix - 1.5 * ux2 * n1;
    });
}

double de2_from(const Pointwise& pw, const PotentialMatrix& a) {
    return detail::quad(pw.u.grid(), [&](std::size_t i) {
        const auto p = pw.p(i);
        const auto ux = pw.ux(i);
        const double ux2 = dot(ux, ux);
        const double ux_au = a.bilinear(ux, p);
        const double ux_aux = a.bilinear(ux, ux);
        const double u_au = a.bilinear(p, p);
        const double n1_ux = dot(pw.cov(1, i), ux);
        return 2.25 * ux_au * ux2 * ux2 + 3.0 * ux_au * ux_aux - 4.5 * ux_aux * n1_ux - 6.75 * u_au * ux_au * ux2;
    });
}

}  // namespace

double energy_e1(const SphereField& u, const PotentialMatrix& a, Scheme scheme) {
    require_dim(u, a);
    const auto jet = make_jet(u, 0, scheme);
    return e1_from(Pointwise{u, jet, u.ambient_dim()}, a);
}

double energy_e2(const SphereField& u, const PotentialMatrix& a, Scheme scheme) {
    require_dim(u, a);
    const auto jet = make_jet(u, 1, scheme);
    return e2_from(Pointwise{u, jet, u.ambient_dim()}, a);
}

double energy_e3(const SphereField& u, Scheme scheme) {
    const auto jet = make_jet(u, 2, scheme);
    return e3_from(Pointwise{u, jet, u.ambient_dim()});
}

double second_covariant_energy(const SphereField& u, Scheme scheme) {
    const auto jet = make_jet(u, 2, scheme);
    const double l2 = detail::l2(u.grid(), u.ambient_dim(), jet.levels[2]);
    return l2 * l2;
}

E1Rates e1_rate_components(const SphereField& u, const PotentialMatrix& a, Scheme scheme) {
    require_dim(u, a);
    const auto jet = make_jet(u, 0, scheme);
    const Pointwise pw{u, jet, u.ambient_dim()};
    auto integrand = [&](std::size_t i) { return dot(pw.ux(i), pw.ux(i)) * a.bilinear(pw.p(i), pw.ux(i)); };
    E1Rates r;
    r.kinetic = 1.5 * detail::quad(u.grid(), integrand);
    r.potential = -1.5 * detail::quad(u.grid(), integrand);
    return r;
}

double de2_dt_formula(const SphereField& u, const PotentialMatrix& a, Scheme scheme) {
    require_dim(u, a);
    const auto jet = make_jet(u, 1, scheme);
    return de2_from(Pointwise{u, jet, u.ambient_dim()}, a);
}

DiagnosticsRecord diagnose(const SphereField& u, const PotentialMatrix& a, double t, Scheme scheme) {
    require_dim(u, a);
    const auto jet = make_jet(u, 2, scheme);
    const Pointwise pw{u, jet, u.ambient_dim()};
    const auto& grid = u.grid();
    const std::size_t dim = u.ambient_dim();

    DiagnosticsRecord r;
    r.t = t;
    r.e1 = e1_from(pw, a);
    r.e2 = e2_from(pw, a);
    r.e3 = e3_from(pw);
    const double l0 = detail::l2(grid, dim, jet.levels[0]);
    const double l1 = detail::l2(grid, dim, jet.levels[1]);
    const double l2 = detail::l2(grid, dim, jet.levels[2]);
    r.h12 = l0 + l1;
    r.h22 = l0 + l1 + l2;
    r.w32 = detail::l2(grid, dim, u.data()) + sobolev_w(u, 2, scheme);
    double sup = 0.0;
    for (std::size_t i = 0; i < u.n_points(); ++i) sup = std::max(sup, kernel::norm(pw.ux(i)));
    r.sup_ux = sup;
    r.constraint_err = u.constraint_error();
    r.de2_residual = 0.0;
    return r;
}

std::vector<double> fd_rates(std::span<const double> t, std::span<const double> v) {
    const std::size_t n = t.size();
    if (n < 3 || v.size() != n) throw Error(ErrorCode::TooFewSamples, "need at least 3 samples for rates");
    std::vector<double> r(n);
    for (std::size_t k = 0; k < n; ++k) {
        // Three consecutive samples around k (shifted inward at the ends).
        const std::size_t c = std::clamp<std::size_t>(k, 1, n - 2);
        const double t0 = t[c - 1], t1 = t[c], t2 = t[c + 1];
        const double x = t[k];
        // Derivative of the Lagrange interpolant through the three points, at x.
        const double d0 = ((x - t1) + (x - t2)) / ((t0 - t1) * (t0 - t2));
        const double d1 = ((x - t0) + (x - t2)) / ((t1 - t0) * (t1 - t2));
        const double d2 = ((x - t0) + (x - t1)) / ((t2 - t0) * (t2 - t1));
        r[k] = d0 * v[c - 1] + d1 * v[c] + d2 * v[c + 1];
    }
    return r;
}

GronwallReport gronwall_fit(std::span<const double> t, std::span<const double> e, double slack) {
    const std::size_t n = t.size();
    if (n < 3 || e.size() != n) throw Error(ErrorCode::TooFewSamples, "Gronwall fit needs at least 3 samples");

    GronwallReport rep;
    rep.samples = n;
    rep.min_value = *std::min_element(e.begin(), e.end());
    rep.max_value = *std::max_element(e.begin(), e.end());
    rep.shift = std::max(1.0, 1.0 - rep.min_value);

    auto tol = [&](std::size_t k) { return slack * (1.0 + std::abs(e[k])); };

    double c = 0.0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double rate = (e[k + 1] - e[k]) / (t[k + 1] - t[k]);
        c = std::max(c, (rate - tol(k)) / (e[k] + rep.shift));
    }
    rep.c_hat = c;

    double viol = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double rate = (e[k + 1] - e[k]) / (t[k + 1] - t[k]);
        viol = std::max(viol, rate - c * (e[k] + rep.shift) - tol(k));
    }
    rep.max_violation = viol;

    // Discrete Gronwall: the per-interval slack accumulates, amplified by e^{Ct}.
    double accumulated = 0.0;
    double excess = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k) {
        const double growth = std::exp(c * (t[k] - t[0]));
        const double envelope = (e[0] + rep.shift) * growth - rep.shift;
        const double allowance = growth * accumulated + 1e-12 * (1.0 + std::abs(e[k]));
        excess = std::max(excess, e[k] - envelope - allowance);
        if (k + 1 < n) accumulated += tol(k) * (t[k + 1] - t[k]);
    }
    rep.max_envelope_excess = excess;
    rep.envelope_ok = std::isfinite(c) && excess <= 0.0;
    return rep;
}

std::string_view to_string(Functional f) { return f == Functional::E2 ? "e2" : "e3"; }

GronwallReport semi_conservation_check(const Trajectory& traj, Functional which) {
    if (traj.diagnostics.size() < 3) throw Error(ErrorCode::TooFewSamples, "trajectory has fewer than 3 samples");
    std::vector<double> t, e;
    for (const auto& d : traj.diagnostics) {
        t.push_back(d.t);
        e.push_back(which == Functional::E2 ? d.e2 : d.e3);
    }
    return gronwall_fit(t, e);
}

}  // namespace gll
