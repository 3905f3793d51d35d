// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <spdlog/spdlog.h>

#include "commands.hpp"
#include "gll/dynamics.hpp"
#include "gll/harness.hpp"
#include "oracle.hpp"

using namespace gll;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void line(int id, const std::string& name, bool pass, const std::string& detail) {
    std::printf("%s criterion %2d %-34s %s\n", pass ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

std::string format(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

PotentialMatrix diag_potential(std::size_t dim) {
    std::vector<double> d(dim);
    for (std::size_t i = 0; i < dim; ++i) d[i] = 1.0 + static_cast<double>(i);
    return PotentialMatrix::diagonal(d);
}

double sup(std::span<const double> v) { return oracle::sup_abs(v); }

double max_normal(const SphereField& u, const TangentField& v) {
    double m = 0;
    for (std::size_t i = 0; i < u.n_points(); ++i) m = std::max(m, std::abs(kernel::dot(u.node(i), v.node(i))));
    return m;
}

std::string failed_checks(const StudyReport& r) {
    std::string s;
    for (const auto& c : r.checks)
        if (!c.pass) s += " " + c.name + "=" + format("%.3g", c.value);
    return s;
}

SphereField perturbed_circle(std::size_t n, std::uint64_t seed) {
    InitialParams p;
    p.n_points = n;
    return make_initial(InitialKind::PerturbedCircle, p, seed);
}

std::vector<SphereField> ensemble() {
    std::vector<SphereField> out;
    for (std::size_t sd : {2u, 4u})
        for (std::uint64_t seed = 1; seed <= 20; ++seed) out.push_back(random_smooth_field(PeriodicGrid(128), sd, seed));
    return out;
}

void geometric_rewriting(const std::vector<SphereField>& fields) {
    double worst = 0;
    for (const auto& u : fields) {
        const auto a = diag_potential(u.ambient_dim());
        const auto ext = rhs_extrinsic(u, a);
        const auto in = rhs_intrinsic(u, a);
        worst = std::max(worst, oracle::sup_abs_diff(ext.data(), in.data()) / (1 + sup(ext.data())));
    }
    line(1, "extrinsic_vs_intrinsic", worst <= 1e-9, format("max scaled diff %.3g (<= 1e-9), %zu fields", worst, fields.size()));
}

void tangency(const std::vector<SphereField>& fields) {
    double worst = 0;
    for (const auto& u : fields) {
        const auto a = diag_potential(u.ambient_dim());
        worst = std::max({worst, max_normal(u, rhs_extrinsic(u, a)), max_normal(u, rhs_intrinsic(u, a)),
                          max_normal(u, rhs_regularized(u, a, 1e-2))});
        if (u.sphere_dim() == 2) worst = std::max(worst, max_normal(u, rhs_classical_ll(u, a)));
    }
    line(2, "tangency_all_forms", worst <= 1e-8, format("max |(u, rhs)| %.3g (<= 1e-8)", worst));
}

void convergence() {
    // RK4 order in dt against a dt/8 reference.
    const auto u0 = random_smooth_field(PeriodicGrid(32), 2, 4, {8, 0.3, 3.0});
    FlowRhs rhs(u0.grid(), 3, FlowForm::Intrinsic, diag_potential(3));
    const RhsFn f = rhs.as_function();
    const double dt = stable_dt(u0.grid(), 0.0);
    auto march = [&](double h, int steps) {
        SphereField u = u0;
        for (int k = 0; k < steps; ++k) u = step_rk4(u, f, h);
        return u;
    };
    const int steps = 16;
    const auto ref = march(dt / 8, steps * 8);
    const double e1 = oracle::sup_abs_diff(march(dt, steps).data(), ref.data());
    const double e2 = oracle::sup_abs_diff(march(dt / 2, steps * 2).data(), ref.data());
    const double time_order = std::log2(e1 / e2);

    // fd4 against spectral right-hand side on a smooth field.
    std::vector<double> diffs;
    for (std::size_t n : {64u, 128u, 256u}) {
        const auto u = random_smooth_field(PeriodicGrid(n), 2, 3, {4, 0.3, 3.0});
        const auto a = diag_potential(3);
        diffs.push_back(oracle::sup_abs_diff(rhs_extrinsic(u, a, Scheme::Fd4).data(), rhs_extrinsic(u, a).data()));
    }
    const double space_order = std::min(std::log2(diffs[0] / diffs[1]), std::log2(diffs[1] / diffs[2]));
    line(12, "temporal_spatial_order", time_order >= 3.5 && space_order >= 3.5,
         format("rk4 order %.2f, fd4 order %.2f (>= 3.5); fd4 diffs %.3g %.3g %.3g", time_order, space_order, diffs[0],
             diffs[1], diffs[2]));
}

void interpolation() {
    double max128 = 0, max256 = 0, scale_err = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        for (std::size_t n : {128u, 256u}) {
            const auto u = random_smooth_field(PeriodicGrid(n), 2, seed);
            const auto v = random_tangent_section(u, seed + 1000);
            const double r = interpolation_ratio(u, v);
            (n == 128 ? max128 : max256) = std::max(n == 128 ? max128 : max256, r);
            if (n == 128)
                for (double lambda : {-2.0, 1e-3, 7.0, 1e3})
                    scale_err = std::max(scale_err, std::abs(interpolation_ratio(u, v.scaled(lambda)) / r - 1));
        }
    }
    const double change = std::abs(max256 - max128) / max128;
    line(11, "interpolation_inequality",
         std::isfinite(max128) && std::isfinite(max256) && change <= 0.05 && scale_err <= 1e-13,
         format("max ratio %.6g (N=128) %.6g (N=256), change %.3g (<= 0.05), scale error %.3g (<= 1e-13)", max128,
             max256, change, scale_err));
}

void determinism() {
    const auto base = fs::temp_directory_path() / "gll_acceptance_determinism";
    fs::remove_all(base);
    std::string csv[2], state[2];
    bool ok = true;
    for (int k = 0; k < 2; ++k) {
        cli::RunConfig cfg;
        cfg.n_points = 64;
        cfg.t_end = 0.05;
        cfg.initial = "random_smooth";
        cfg.potential = {1, 2, 3};
        cfg.seed = 42;
        cfg.threads = 1;
        cfg.out = (base / std::to_string(k)).string();
        std::ostringstream out, err;
        ok = ok && cli::cmd_simulate(cfg, out, err) == cli::kExitOk;
        auto read = [](const fs::path& p) {
            std::ifstream is(p, std::ios::binary);
            std::stringstream ss;
            ss << is.rdbuf();
            return ss.str();
        };
        csv[k] = read(fs::path(cfg.out) / "diagnostics.csv");
        state[k] = read(fs::path(cfg.out) / "state_final.json");
    }
    fs::remove_all(base);
    const bool same = ok && !csv[0].empty() && csv[0] == csv[1] && state[0] == state[1];
    line(13, "determinism", same, format("diagnostics.csv %zu bytes, identical=%s", csv[0].size(), same ? "yes" : "no"));
}

}  // namespace

int main() {
    spdlog::set_level(spdlog::level::warn);
    const auto start = std::chrono::steady_clock::now();
    StudyOptions opt;

    {
        const auto fields = ensemble();
        geometric_rewriting(fields);
        tangency(fields);
    }

    // Energy laws with a potential, resolved at N = 256.
    StudyOptions fine = opt;
    fine.n_points = 256;
    fine.sample_dt = 2.5e-4;  // finer samples keep the time-difference oracle well below the tolerance
    const auto with_a = study_energy_laws(perturbed_circle(256, 1), diag_potential(3), 1.0, fine);
    const auto& fa = with_a.find_case("flow").metrics;
    line(3, "e1_conservation",
         with_a.find_check("e1_drift").pass && with_a.find_check("rate_cancellation").pass,
         format("relative drift %.3g (<= 1e-6), rate cancellation %.3g (<= 1e-12)", fa.at("e1_drift"),
             fa.at("rate_cancellation")));

    const auto no_a = study_energy_laws(perturbed_circle(128, 2), PotentialMatrix::zero(3), 1.0, opt);
    line(4, "e2_conservation_without_potential", no_a.find_check("e2_drift").pass,
         format("relative drift %.3g (<= 1e-6)", no_a.find_case("flow").metrics.at("e2_drift")));

    const auto& de2 = with_a.find_check("de2_relative_residual");
    line(5, "de2_formula", de2.pass,
         format("relative residual %.3g (<= 1e-3); time-difference oracle check %.3g (<= 1e-4)", de2.value,
             fa.at("kinetic_rate_relative")));

    {
        InitialParams p;
        p.sphere_dim = 4;
        const auto extra = study_energy_laws(make_initial(InitialKind::RandomSmooth, p, 3), diag_potential(5), 0.5, opt);
        bool ok = true;
        std::string detail;
        for (const auto* r : {&with_a, &no_a, &extra}) {
            const auto& m = r->find_case("flow").metrics;
            for (const char* name : {"e2_envelope", "e3_envelope", "curvature_envelope"}) ok = ok && r->find_check(name).pass;
            ok = ok && std::isfinite(m.at("e2_c_hat")) && std::isfinite(m.at("e3_c_hat")) &&
                 std::isfinite(m.at("curvature_c_hat"));
            detail += format("[C2 %.3g C3 %.3g Ccurv %.3g max|grad^2 u_x|^2 %.3g] ", m.at("e2_c_hat"), m.at("e3_c_hat"),
                          m.at("curvature_c_hat"), m.at("curvature_max"));
        }
        line(6, "semi_conservation_envelopes", ok, detail + "3 trajectories");
    }

    {
        const auto tw = study_traveling_wave({32, 64, 128}, opt);
        const auto& n64 = tw.find_case("N64").metrics;
        const bool ok = tw.find_check("N64_error").pass && tw.find_check("monotone_decrease").pass;
        line(7, "traveling_wave", ok,
             format("errors %.3g %.3g %.3g (N=32,64,128); N=64 bound 1e-6; monotone=%s",
                 tw.find_case("N32").metrics.at("error"), n64.at("error"), tw.find_case("N128").metrics.at("error"),
                 tw.find_check("monotone_decrease").pass ? "yes" : "no"));
    }

    {
        const auto ev = study_epsilon_vanishing({1e-2, 1e-3, 1e-4}, perturbed_circle(128, 1), PotentialMatrix::zero(3),
                                                0.5, opt);
        const auto& d = [&](const char* n) { return ev.find_case(n).metrics.at("d"); };
        line(8, "vanishing_viscosity",
             ev.find_check("d_strictly_decreasing").pass && ev.find_check("h22_spread").pass,
             format("d = %.3g %.3g %.3g, h22 spread %.3g (<= 0.10)", d("eps_0.01"), d("eps_0.001"), d("eps_0.0001"),
                 ev.find_check("h22_spread").value));
        const auto& r2 = ev.find_check("eps_0.01_e1_increase_rate");
        const auto& r3 = ev.find_check("eps_0.001_e1_increase_rate");
        line(9, "regularized_dissipation", r2.pass && r3.pass,
             format("max dE1/dt %.3g (eps=1e-2), %.3g (eps=1e-3), tolerance 1e-7", r2.value, r3.value));
    }

    {
        const auto un = study_uniqueness(perturbed_circle(128, 1), 1e-6, diag_potential(3), 0.5, opt);
        const auto& m = un.find_case("growth").metrics;
        line(10, "uniqueness_stability", un.passed(),
             format("C_hat %.3g, envelope excess %.3g (<= 0), halving change %.3g (<= 0.01)%s", m.at("c_hat"),
                 m.at("envelope_excess"), m.at("linearity_error"), failed_checks(un).c_str()));
    }

    interpolation();
    convergence();
    determinism();

    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%d criteria failed, %.1f s\n", failures, secs);
    return failures == 0 ? 0 : 1;
}
