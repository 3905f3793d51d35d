#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "gll/dynamics.hpp"
#include "gll/energies.hpp"
#include "gll/harness.hpp"
#include "oracle.hpp"

using namespace gll;

namespace {

AmbientVector random_vec(std::mt19937_64& rng, std::size_t dim) {
    std::normal_distribution<double> g;
    AmbientVector v(dim);
    for (std::size_t i = 0; i < dim; ++i) v[i] = g(rng);
    return v;
}

double vec_diff(const AmbientVector& a, const AmbientVector& b) { return (a - b).norm(); }

std::vector<double> sample(const PeriodicGrid& g, auto&& f) {
    std::vector<double> v(g.n_points());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(g.node(i));
    return v;
}

double inner(const TangentField& v, const TangentField& w) {
    std::vector<double> p(v.n_points());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = kernel::dot(v.node(i), w.node(i));
    return v.grid().integrate(p);
}

double max_normal(const SphereField& u, const TangentField& v) {
    double m = 0;
    for (std::size_t i = 0; i < u.n_points(); ++i) m = std::max(m, std::abs(kernel::dot(u.node(i), v.node(i))));
    return m;
}

SphereField march(const SphereField& u0, FlowRhs& rhs, double dt, int steps) {
    SphereField u = u0;
    const RhsFn f = rhs.as_function();
    for (int k = 0; k < steps; ++k) u = step_rk4(u, f, dt);
    return u;
}

}  // namespace

// geometry

TEST(GeometryProperty, TangentProjectionIsIdempotent) {
    std::mt19937_64 rng(1);
    for (int k = 0; k < 500; ++k) {
        const std::size_t dim = 2 + k % 6;
        const auto p = project_to_sphere(random_vec(rng, dim));
        const auto once = project_to_tangent(p, random_vec(rng, dim));
        EXPECT_LE(vec_diff(project_to_tangent(p, once), once), 1e-15 * (1 + once.norm()));
        EXPECT_LE(std::abs(dot(p, once)), 1e-15 * (1 + once.norm()));
    }
}

TEST(GeometryProperty, CurvatureSymmetries) {
    std::mt19937_64 rng(2);
    for (int k = 0; k < 500; ++k) {
        const std::size_t dim = 3 + k % 5;
        const auto p = project_to_sphere(random_vec(rng, dim));
        const auto x = project_to_tangent(p, random_vec(rng, dim));
        const auto y = project_to_tangent(p, random_vec(rng, dim));
        const auto z = project_to_tangent(p, random_vec(rng, dim));
        const auto w = project_to_tangent(p, random_vec(rng, dim));
        const auto rxy = curvature_apply(x, y, z);
        EXPECT_LE((rxy + curvature_apply(y, x, z)).norm(), 1e-15);
        EXPECT_LE((rxy + curvature_apply(y, z, x) + curvature_apply(z, x, y)).norm(), 1e-13);
        EXPECT_NEAR(dot(rxy, w), -dot(curvature_apply(x, y, w), z), 1e-13);
        // Sectional curvature +1.
        const double denom = dot(x, x) * dot(y, y) - dot(x, y) * dot(x, y);
        EXPECT_NEAR(dot(curvature_apply(x, y, y), x), denom, 1e-13 * dot(x, x) * dot(y, y));
    }
}

TEST(GeometryProperty, PotentialIsEven) {
    std::mt19937_64 rng(3);
    const auto a = PotentialMatrix(3, {1, 0.5, -2, 0.5, 3, 0.25, -2, 0.25, -1});
    for (int k = 0; k < 200; ++k) {
        const auto u = random_vec(rng, 3);
        EXPECT_EQ(quadratic_potential(a, u), quadratic_potential(a, -1.0 * u));
    }
}

// grid

TEST(GridProperty, DiscreteIntegrationByParts) {
    const PeriodicGrid g(64);
    const auto f = sample(g, [](double x) { return std::exp(std::cos(2 * x)); });
    const auto h = sample(g, [](double x) { return std::sin(x) + 0.3 * std::cos(5 * x); });
    const auto df = g.derivative(f, 1), dh = g.derivative(h, 1);
    std::vector<double> p(64);
    for (std::size_t i = 0; i < 64; ++i) p[i] = f[i] * dh[i] + df[i] * h[i];
    EXPECT_LE(std::abs(g.integrate(p)), 1e-10);
}

TEST(GridProperty, DerivativeOrdersCompose) {
    const PeriodicGrid g(64);
    const auto f = sample(g, [](double x) { return std::sin(3 * x) + 0.5 * std::cos(7 * x); });
    for (int k1 = 1; k1 <= 2; ++k1)
        for (int k2 = 1; k2 <= 2; ++k2)
            EXPECT_LE(oracle::sup_abs_diff(g.derivative(g.derivative(f, k1), k2), g.derivative(f, k1 + k2)), 1e-9);
}

TEST(GridProperty, Fd4ConvergesToSpectralAtFourthOrder) {
    double prev = 0;
    for (std::size_t n : {32u, 64u, 128u, 256u}) {
        const PeriodicGrid g(n);
        const auto f = sample(g, [](double x) { return std::exp(std::sin(x)); });
        const double e = oracle::sup_abs_diff(g.derivative(f, 2, Scheme::Fd4), g.derivative(f, 2));
        if (prev > 0) EXPECT_GE(std::log2(prev / e), 3.5) << n;
        prev = e;
    }
}

// fields

TEST(FieldsProperty, ModuleOutputsAreTangent) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto u = random_smooth_field(PeriodicGrid(128), 1 + seed % 4, seed);
        const auto ux = map_derivative(u);
        EXPECT_LE(max_normal(u, ux), 1e-7);
        EXPECT_LE(max_normal(u, covariant_derivative_iter(u, ux, 3)), 1e-7);
        EXPECT_LE(max_normal(u, random_tangent_section(u, seed)), 1e-7);
    }
}

TEST(FieldsProperty, CovariantIntegrationByParts) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto u = random_smooth_field(PeriodicGrid(128), 2, seed);
        const auto v = random_tangent_section(u, 100 + seed);
        const auto w = random_tangent_section(u, 200 + seed);
        EXPECT_LE(std::abs(inner(covariant_derivative(u, v), w) + inner(v, covariant_derivative(u, w))), 1e-8);
    }
}

TEST(FieldsProperty, ClosedFormSecondCovariantDerivative) {
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        const std::size_t sd = seed % 2 ? 2 : 4;
        const auto u = random_smooth_field(PeriodicGrid(128), sd, seed);
        const std::size_t d = sd + 1;
        const auto u1 = oracle::derivative(u.data(), d, 1);
        const auto u2 = oracle::derivative(u.data(), d, 2);
        const auto u3 = oracle::derivative(u.data(), d, 3);
        std::vector<double> ref(u1.size());
        for (std::size_t i = 0; i < u.n_points(); ++i) {
            const double a = 3 * oracle::dot(&u1[i * d], &u2[i * d], d);
            const double b = oracle::dot(&u1[i * d], &u1[i * d], d);
            for (std::size_t c = 0; c < d; ++c) ref[i * d + c] = u3[i * d + c] + a * u.data()[i * d + c] + b * u1[i * d + c];
        }
        EXPECT_LE(oracle::sup_abs_diff(covariant_derivative_iter(u, map_derivative(u), 2).data(), ref), 1e-7);
    }
}

TEST(FieldsProperty, NormEquivalenceRatiosAreBounded) {
    double worst_wh = 0, worst_hw = 0;
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        const auto u = random_smooth_field(PeriodicGrid(128), 2, seed, {8, 0.3 + 0.01 * seed, 3.0});
        for (int k = 1; k <= 3; ++k) {
            const double h = sobolev_h(u, k - 1), w = sobolev_w(u, k - 1);
            worst_wh = std::max(worst_wh, w / std::max(h, std::pow(h, k)));
            worst_hw = std::max(worst_hw, h / std::max(w, std::pow(w, k)));
        }
    }
    EXPECT_TRUE(std::isfinite(worst_wh));
    EXPECT_LE(worst_wh, 10.0);
    EXPECT_LE(worst_hw, 10.0);
}

TEST(FieldsProperty, InterpolationRatioIsHomogeneousOfDegreeZero) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto u = random_smooth_field(PeriodicGrid(64), 3, seed);
        const auto v = random_tangent_section(u, seed + 50);
        const double r = interpolation_ratio(u, v);
        for (double lambda : {-3.0, 1e-6, 0.5, 1e6}) EXPECT_NEAR(interpolation_ratio(u, v.scaled(lambda)) / r, 1.0, 1e-14);
    }
}

// dynamics

TEST(DynamicsProperty, EveryFormIsTangent) {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        const std::size_t sd = seed <= 3 ? 2 : 4;
        const auto u = random_smooth_field(PeriodicGrid(128), sd, seed);
        std::vector<double> diag(sd + 1);
        for (std::size_t i = 0; i <= sd; ++i) diag[i] = 1.0 + i;
        const auto a = PotentialMatrix::diagonal(diag);
        EXPECT_LE(max_normal(u, rhs_extrinsic(u, a)), 1e-8);
        EXPECT_LE(max_normal(u, rhs_intrinsic(u, a)), 1e-8);
        EXPECT_LE(max_normal(u, rhs_regularized(u, a, 0.01)), 1e-8);
        if (sd == 2) EXPECT_LE(max_normal(u, rhs_classical_ll(u, a)), 1e-8);
    }
}

TEST(DynamicsProperty, StepsPreserveTheConstraint) {
    const auto u0 = random_smooth_field(PeriodicGrid(64), 2, 9);
    FlowRhs rhs(u0.grid(), 3, FlowForm::Regularized, PotentialMatrix::diagonal({1, 2, 3}), 1e-3);
    const auto u = march(u0, rhs, stable_dt(u0.grid(), 1e-3), 50);
    EXPECT_LE(u.constraint_error(), 1e-15);
}

TEST(DynamicsProperty, Rk4TemporalOrder) {
    const auto u0 = random_smooth_field(PeriodicGrid(32), 2, 4, {8, 0.3, 3.0});
    FlowRhs rhs(u0.grid(), 3, FlowForm::Intrinsic, PotentialMatrix::diagonal({1, 2, 3}), 0.0);
    const double dt = stable_dt(u0.grid(), 0.0);
    const int steps = 16;
    const auto ref = march(u0, rhs, dt / 8, steps * 8);
    const double e1 = oracle::sup_abs_diff(march(u0, rhs, dt, steps).data(), ref.data());
    const double e2 = oracle::sup_abs_diff(march(u0, rhs, dt / 2, steps * 2).data(), ref.data());
    EXPECT_GE(std::log2(e1 / e2), 3.5) << e1 << " " << e2;
}

TEST(DynamicsProperty, EvolveIsDeterministic) {
    const auto u0 = random_smooth_field(PeriodicGrid(32), 2, 4);
    FlowSpec spec;
    spec.a = PotentialMatrix::diagonal({1, 2, 3});
    spec.t_end = 0.02;
    spec.sample_every = 20;
    const auto a = evolve(u0, spec), b = evolve(u0, spec);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        EXPECT_EQ(a.diagnostics[k], b.diagnostics[k]);
        for (std::size_t j = 0; j < a.states[k].data().size(); ++j) ASSERT_EQ(a.states[k].data()[j], b.states[k].data()[j]);
    }
}

// energies

TEST(EnergiesProperty, DirichletEnergyBoundedWithoutPotential) {
    const auto u0 = random_smooth_field(PeriodicGrid(64), 2, 7, {8, 0.3, 3.0});
    FlowSpec spec;
    spec.a = PotentialMatrix::zero(3);
    spec.t_end = 0.1;
    spec.sample_every = 200;
    const auto traj = evolve(u0, spec);
    const double l0 = l2_norm(map_derivative(traj.states.front()));
    for (const auto& s : traj.states) EXPECT_LE(l2_norm(map_derivative(s)) / l0 - 1, 1e-5);
}

TEST(EnergiesProperty, RegularizedFlowDissipatesE1) {
    const auto u0 = random_smooth_field(PeriodicGrid(64), 2, 7, {8, 0.3, 3.0});
    FlowSpec spec;
    spec.form = FlowForm::Regularized;
    spec.epsilon = 1e-2;
    spec.a = PotentialMatrix::diagonal({1, 2, 3});
    spec.t_end = 0.05;
    spec.sample_every = 100;
    const auto traj = evolve(u0, spec);
    for (std::size_t k = 1; k < traj.size(); ++k) {
        const auto& d0 = traj.diagnostics[k - 1];
        const auto& d1 = traj.diagnostics[k];
        EXPECT_LE((d1.e1 - d0.e1) / (d1.t - d0.t), 1e-7);
    }
}

// harness

TEST(HarnessProperty, StudiesAreDeterministic) {
    InitialParams p;
    p.n_points = 32;
    const auto u0 = make_initial(InitialKind::PerturbedCircle, p, 4);
    StudyOptions o;
    o.n_points = 32;
    const auto a = study_uniqueness(u0, 1e-6, PotentialMatrix::diagonal({1, 2, 3}), 0.02, o).to_json().dump();
    const auto b = study_uniqueness(u0, 1e-6, PotentialMatrix::diagonal({1, 2, 3}), 0.02, o).to_json().dump();
    EXPECT_EQ(a, b);
}

TEST(HarnessProperty, ParallelCasesMatchSerial) {
    InitialParams p;
    p.n_points = 32;
    const auto u0 = make_initial(InitialKind::PerturbedCircle, p, 4);
    StudyOptions o;
    o.n_points = 32;
    const auto serial = study_epsilon_vanishing({1e-2, 1e-3}, u0, PotentialMatrix::zero(3), 0.02, o).to_json();
    o.threads = 3;
    auto parallel = study_epsilon_vanishing({1e-2, 1e-3}, u0, PotentialMatrix::zero(3), 0.02, o).to_json();
    parallel["provenance"]["threads"] = 1;
    EXPECT_EQ(serial.dump(), parallel.dump());
}

TEST(HarnessProperty, HeadlineMetricStableUnderRefinement) {
    InitialParams p;
    p.n_points = 64;
    StudyOptions o;
    o.n_points = 64;
    const auto coarse = study_uniqueness(make_initial(InitialKind::PerturbedCircle, p, 4), 1e-6,
                                         PotentialMatrix::zero(3), 0.05, o);
    p.n_points = o.n_points = 128;
    const auto fine = study_uniqueness(make_initial(InitialKind::PerturbedCircle, p, 4), 1e-6,
                                       PotentialMatrix::zero(3), 0.05, o);
    const double gc = coarse.find_case("growth").metrics.at("g_final");
    const double gf = fine.find_case("growth").metrics.at("g_final");
    EXPECT_LE(std::abs(gc - gf) / gf, 0.10);
}
