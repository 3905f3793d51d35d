#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iomanip>
#include <ostream>
#include <random>

#include "commands.hpp"
#include "gll/energies.hpp"
#include "gll/error.hpp"
#include "gll/io.hpp"

namespace gll::cli {

namespace {

struct Ensemble {
    std::vector<SphereField> fields;
    std::vector<PotentialMatrix> potentials;
};

Ensemble make_ensemble(std::size_t n) {
    Ensemble e;
    const PeriodicGrid grid(n);
    for (std::size_t sd : {2u, 4u}) {
        std::vector<double> diag(sd + 1);
        for (std::size_t i = 0; i < diag.size(); ++i) diag[i] = 1.0 + static_cast<double>(i);
        for (std::uint64_t seed = 1; seed <= 4; ++seed) {
            e.fields.push_back(random_smooth_field(grid, sd, seed, {8, 0.3, 3.0}));
            e.potentials.push_back(PotentialMatrix::diagonal(diag));
        }
    }
    return e;
}

double sup_diff(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
    return m;
}

double max_normal_component(const SphereField& u, const TangentField& v) {
    double m = 0.0;
    for (std::size_t i = 0; i < u.n_points(); ++i) m = std::max(m, std::abs(kernel::dot(u.node(i), v.node(i))));
    return m;
}

double check_ext_vs_int(const Ensemble& e) {
    double worst = 0.0;
    for (std::size_t k = 0; k < e.fields.size(); ++k) {
        const auto ext = rhs_extrinsic(e.fields[k], e.potentials[k]);
        const auto in = rhs_intrinsic(e.fields[k], e.potentials[k]);
        worst = std::max(worst, sup_diff(ext.data(), in.data()) / (1.0 + sup_norm(in)));
    }
    return worst;
}

double check_tangency(const Ensemble& e) {
    double worst = 0.0;
    for (std::size_t k = 0; k < e.fields.size(); ++k) {
        const auto& u = e.fields[k];
        const auto& a = e.potentials[k];
        worst = std::max(worst, max_normal_component(u, rhs_extrinsic(u, a)));
        worst = std::max(worst, max_normal_component(u, rhs_intrinsic(u, a)));
        worst = std::max(worst, max_normal_component(u, rhs_regularized(u, a, 1e-3)));
        if (u.sphere_dim() == 2) worst = std::max(worst, max_normal_component(u, rhs_classical_ll(u, a)));
    }
    return worst;
}

// grad^2 u_x against u_xxx + 3(u_x,u_xx)u + |u_x|^2 u_x.
double check_covariant_identity(const Ensemble& e) {
    double worst = 0.0;
    for (const auto& u : e.fields) {
        const std::size_t d = u.ambient_dim();
        std::vector<double> d1(u.data().size()), d2(d1.size()), d3(d1.size());
        const int orders[] = {1, 2, 3};
        const std::span<double> outs[] = {d1, d2, d3};
        u.grid().derivatives(u.data(), d, orders, outs);
        const auto lhs = covariant_derivative_iter(u, map_derivative(u), 2);
        std::vector<double> rhs(d1.size());
        for (std::size_t i = 0; i < u.n_points(); ++i) {
            const std::span<const double> ux(d1.data() + i * d, d), uxx(d2.data() + i * d, d);
            const double a = 3.0 * kernel::dot(ux, uxx);
            const double b = kernel::dot(ux, ux);
            for (std::size_t c = 0; c < d; ++c) rhs[i * d + c] = d3[i * d + c] + a * u.node(i)[c] + b * ux[c];
        }
        worst = std::max(worst, sup_diff(lhs.data(), rhs) / (1.0 + sup_norm(lhs)));
    }
    return worst;
}

double inner(const TangentField& v, const TangentField& w) {
    std::vector<double> p(v.n_points());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = kernel::dot(v.node(i), w.node(i));
    return v.grid().integrate(p);
}

double check_covariant_ibp(const Ensemble& e) {
    double worst = 0.0;
    std::uint64_t seed = 100;
    for (const auto& u : e.fields) {
        const auto v = random_tangent_section(u, seed++);
        const auto w = random_tangent_section(u, seed++);
        const auto dv = covariant_derivative(u, v);
        const auto dw = covariant_derivative(u, w);
        const double scale = l2_norm(dv) * l2_norm(w) + l2_norm(v) * l2_norm(dw);
        worst = std::max(worst, std::abs(inner(dv, w) + inner(v, dw)) / scale);
    }
    return worst;
}

struct CurvatureSample {
    AmbientVector x, y, z, w;
};

std::vector<CurvatureSample> curvature_samples(std::size_t count) {
    std::mt19937_64 rng(2024);
    std::normal_distribution<double> g;
    std::vector<CurvatureSample> out;
    for (std::size_t k = 0; k < count; ++k) {
        const std::size_t dim = 3 + k % 4;
        auto draw = [&] {
            AmbientVector v(dim);
            for (std::size_t c = 0; c < dim; ++c) v[c] = g(rng);
            return v;
        };
        const AmbientVector p = project_to_sphere(draw());
        out.push_back({project_to_tangent(p, draw()), project_to_tangent(p, draw()), project_to_tangent(p, draw()),
                       project_to_tangent(p, draw())});
    }
    return out;
}

double rel(const AmbientVector& v, double scale) { return v.norm() / (1.0 + scale); }

double check_curvature_antisymmetry(const std::vector<CurvatureSample>& s) {
    double worst = 0.0;
    for (const auto& c : s) {
        const auto a = curvature_apply(c.x, c.y, c.z);
        worst = std::max(worst, rel(a + curvature_apply(c.y, c.x, c.z), a.norm()));
    }
    return worst;
}

double check_curvature_bianchi(const std::vector<CurvatureSample>& s) {
    double worst = 0.0;
    for (const auto& c : s) {
        const auto a = curvature_apply(c.x, c.y, c.z);
        const auto b = curvature_apply(c.y, c.z, c.x);
        const auto d = curvature_apply(c.z, c.x, c.y);
        worst = std::max(worst, rel(a + b + d, a.norm() + b.norm() + d.norm()));
    }
    return worst;
}

double check_curvature_pair_symmetry(const std::vector<CurvatureSample>& s) {
    double worst = 0.0;
    for (const auto& c : s) {
        const double l = dot(curvature_apply(c.x, c.y, c.z), c.w);
        const double r = dot(curvature_apply(c.z, c.w, c.x), c.y);
        worst = std::max(worst, std::abs(l - r) / (1.0 + std::abs(l)));
    }
    return worst;
}

double check_interpolation_scale(const Ensemble& e) {
    double worst = 0.0;
    std::uint64_t seed = 300;
    for (const auto& u : e.fields) {
        const auto v = random_tangent_section(u, seed++);
        const double r = interpolation_ratio(u, v);
        for (double lambda : {1e-3, 7.5, 1e3}) {
            worst = std::max(worst, std::abs(interpolation_ratio(u, v.scaled(lambda)) - r) / r);
        }
    }
    return worst;
}

double check_interpolation_bound(const Ensemble& e) {
    double worst = 0.0;
    std::uint64_t seed = 500;
    for (const auto& u : e.fields) {
        for (int k = 0; k < 4; ++k) worst = std::max(worst, interpolation_ratio(u, random_tangent_section(u, seed++)));
    }
    return worst;
}

double check_rate_cancellation(const Ensemble& e) {
    double worst = 0.0;
    for (std::size_t k = 0; k < e.fields.size(); ++k) {
        const auto r = e1_rate_components(e.fields[k], e.potentials[k]);
        worst = std::max(worst, std::abs(r.kinetic + r.potential));
    }
    return worst;
}

double check_sphere_constraint(const Ensemble& e) {
    const auto& u = e.fields.front();
    FlowSpec spec;
    spec.a = e.potentials.front();
    spec.t_end = 20.0 * stable_dt(u.grid(), 0.0, spec.cfl);
    spec.sample_every = 5;
    double worst = 0.0;
    for (const auto& d : evolve(u, spec).diagnostics) worst = std::max(worst, d.constraint_err);
    return worst;
}

struct CheckDef {
    const char* name;
    double quick_tol;
    double full_tol;
    std::function<double(const Ensemble&, const std::vector<CurvatureSample>&)> measure;
};

std::string short_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string env_name(const std::string& check) {
    std::string s = "GLL_VERIFY_TOL_";
    for (char c : check) s += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return s;
}

std::optional<std::string> getenv_lookup(const std::string& name) {
    const char* v = std::getenv(name.c_str());
    if (!v) return std::nullopt;
    return std::string(v);
}

}  // namespace

std::vector<VerifyCheck> run_verify(std::string_view level, const EnvLookup& env_in) {
    if (level != "quick" && level != "full") {
        throw Error(ErrorCode::Config, "level: expected quick or full, got '" + std::string(level) + "'");
    }
    const bool full = level == "full";
    const EnvLookup env = env_in ? env_in : EnvLookup(getenv_lookup);

    // Tolerances: quick at N = 64, full at N = 256. The derivative-based checks
    // are resolution limited at N = 64, hence the looser quick values.
    const std::vector<CheckDef> defs = {
        {"extrinsic_vs_intrinsic", 1e-5, 1e-9, [](const auto& e, const auto&) { return check_ext_vs_int(e); }},
        {"tangency", 1e-5, 1e-8, [](const auto& e, const auto&) { return check_tangency(e); }},
        {"covariant_identity", 1e-5, 1e-9, [](const auto& e, const auto&) { return check_covariant_identity(e); }},
        {"covariant_ibp", 1e-12, 1e-13, [](const auto& e, const auto&) { return check_covariant_ibp(e); }},
        {"curvature_antisymmetry", 1e-14, 1e-15,
         [](const auto&, const auto& s) { return check_curvature_antisymmetry(s); }},
        {"curvature_bianchi", 1e-14, 1e-14, [](const auto&, const auto& s) { return check_curvature_bianchi(s); }},
        {"curvature_pair_symmetry", 1e-13, 1e-13,
         [](const auto&, const auto& s) { return check_curvature_pair_symmetry(s); }},
        {"interpolation_scale_invariance", 1e-12, 1e-12,
         [](const auto& e, const auto&) { return check_interpolation_scale(e); }},
        {"interpolation_ratio_bound", 2.0, 2.0, [](const auto& e, const auto&) { return check_interpolation_bound(e); }},
        {"e1_rate_cancellation", 1e-12, 1e-12, [](const auto& e, const auto&) { return check_rate_cancellation(e); }},
        {"sphere_constraint", 1e-13, 1e-13, [](const auto& e, const auto&) { return check_sphere_constraint(e); }},
    };

    const Ensemble ensemble = make_ensemble(full ? 256 : 64);
    const auto samples = curvature_samples(full ? 5000 : 500);

    std::vector<VerifyCheck> out;
    for (const auto& d : defs) {
        VerifyCheck c;
        c.name = d.name;
        c.tolerance = full ? d.full_tol : d.quick_tol;
        if (const auto o = env(env_name(c.name))) {
            double v{};
            const auto [ptr, ec] = std::from_chars(o->data(), o->data() + o->size(), v);
            if (ec != std::errc{} || ptr != o->data() + o->size()) {
                throw Error(ErrorCode::Config, env_name(c.name) + ": cannot parse '" + *o + "' as a number");
            }
            c.tolerance = v;
        }
        c.value = d.measure(ensemble, samples);
        c.pass = std::isfinite(c.value) && c.value <= c.tolerance;
        out.push_back(c);
    }
    return out;
}

int cmd_verify(std::string_view level, std::ostream& out, std::ostream& err, const EnvLookup& env) {
    std::vector<VerifyCheck> checks;
    try {
        checks = run_verify(level, env);
    } catch (const Error& e) {
        err << "config error: " << e.detail() << '\n';
        return kExitConfig;
    }
    bool ok = true;
    for (const auto& c : checks) {
        out << std::left << std::setw(32) << c.name << std::setw(16) << short_num(c.value) << "<= "
            << std::setw(14) << short_num(c.tolerance) << (c.pass ? "PASS" : "FAIL") << '\n';
        if (!c.pass) {
            err << "check failed: " << c.name << " value=" << format_double(c.value)
                << " tolerance=" << format_double(c.tolerance) << '\n';
            ok = false;
        }
    }
    out << "verify " << level << ": " << (ok ? "all checks passed" : "FAILED") << '\n';
    return ok ? kExitOk : kExitFailure;
}

}  // namespace gll::cli
