#include "gll/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <limits>
#include <numbers>
#include <string>

#include "gll/energies.hpp"
#include "gll/error.hpp"
#include "gll/io.hpp"
#include "kinematics.hpp"

namespace gll {

std::string_view to_string(InitialKind k) {
    switch (k) {
        case InitialKind::GreatCircle: return "great_circle";
        case InitialKind::PerturbedCircle: return "perturbed_circle";
        case InitialKind::RandomSmooth: return "random_smooth";
    }
    return "unknown";
}

InitialKind parse_initial_kind(std::string_view name) {
    if (name == "great_circle") return InitialKind::GreatCircle;
    if (name == "perturbed_circle") return InitialKind::PerturbedCircle;
    if (name == "random_smooth") return InitialKind::RandomSmooth;
    throw Error(ErrorCode::BadParams, "initial: unknown kind '" + std::string(name) +
                                          "' (great_circle|perturbed_circle|random_smooth)");
}

namespace {

SphereField great_circle(const PeriodicGrid& grid, std::size_t sphere_dim) {
    const std::size_t dim = sphere_dim + 1;
    std::vector<double> s(grid.n_points() * dim, 0.0);
    for (std::size_t i = 0; i < grid.n_points(); ++i) {
        s[i * dim] = std::cos(grid.node(i));
        s[i * dim + 1] = std::sin(grid.node(i));
    }
    return SphereField(grid, sphere_dim, std::move(s));
}

// Runs fn(0..count-1), up to `threads` at a time; results keep index order.
template <class T, class F>
std::vector<T> run_cases(std::size_t count, unsigned threads, F&& fn) {
    std::vector<T> out;
    out.reserve(count);
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) out.push_back(fn(i));
        return out;
    }
    for (std::size_t start = 0; start < count; start += threads) {
        std::vector<std::future<T>> batch;
        for (std::size_t i = start; i < std::min<std::size_t>(count, start + threads); ++i) {
            batch.push_back(std::async(std::launch::async, [&fn, i] { return fn(i); }));
        }
        for (auto& f : batch) out.push_back(f.get());
    }
    return out;
}

FlowSpec make_spec(const PeriodicGrid& grid, FlowForm form, double eps, const PotentialMatrix& a, double t_end,
                   const StudyOptions& opt) {
    FlowSpec spec;
    spec.form = form;
    spec.epsilon = eps;
    spec.a = a;
    spec.t_end = t_end;
    spec.cfl = opt.cfl;
    spec.scheme = opt.scheme;
    const double dt = stable_dt(grid, eps, opt.cfl);
    spec.sample_every = static_cast<int>(std::max(1.0, std::floor(opt.sample_dt / dt)));
    return spec;
}

Trajectory run_flow(const SphereField& u0, double eps, const PotentialMatrix& a, double t_end, const StudyOptions& opt) {
    const FlowForm form = eps > 0.0 ? FlowForm::Regularized : FlowForm::Intrinsic;
    return evolve(u0, make_spec(u0.grid(), form, eps, a, t_end, opt));
}

std::vector<std::string> diagnostics_columns() {
    std::vector<std::string> cols;
    std::string_view h = kDiagnosticsHeader;
    std::size_t start = 0;
    while (start <= h.size()) {
        const auto pos = h.find(',', start);
        cols.emplace_back(h.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return cols;
}

std::vector<std::vector<double>> diagnostics_rows(const Trajectory& traj) {
    std::vector<std::vector<double>> rows;
    for (const auto& r : traj.diagnostics) {
        rows.push_back({r.t, r.e1, r.e2, r.e3, r.h12, r.h22, r.w32, r.sup_ux, r.constraint_err, r.de2_residual});
    }
    return rows;
}

double sup_distance(const SphereField& a, const SphereField& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.n_points(); ++i) {
        double s = 0.0;
        for (std::size_t c = 0; c < a.ambient_dim(); ++c) {
            const double d = a.node(i)[c] - b.node(i)[c];
            s += d * d;
        }
        m = std::max(m, std::sqrt(s));
    }
    return m;
}

nlohmann::json matrix_json(const PotentialMatrix& a) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < a.dim(); ++i) {
        std::vector<double> r;
        for (std::size_t j = 0; j < a.dim(); ++j) r.push_back(a(i, j));
        rows.push_back(r);
    }
    return rows;
}

nlohmann::json provenance(const StudyOptions& opt, std::size_t n_points) {
    return {{"seed", opt.seed},
            {"n_points", n_points},
            {"cfl", opt.cfl},
            {"scheme", std::string(to_string(opt.scheme))},
            {"sample_dt", opt.sample_dt},
            {"threads", opt.threads}};
}

std::string eps_label(double eps) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", eps);
    return std::string("eps_") + buf;
}

nlohmann::json number(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(format_double(v)); }

}  // namespace

SphereField make_initial(InitialKind kind, const InitialParams& p, std::uint64_t seed) {
    if (p.sphere_dim < 1) throw Error(ErrorCode::BadParams, "sphere_dim: must be >= 1");
    if (!(p.amplitude >= 0.0) || !std::isfinite(p.amplitude)) {
        throw Error(ErrorCode::BadParams, "amplitude: must be finite and >= 0");
    }
    if (p.n_modes < 1) throw Error(ErrorCode::BadParams, "n_modes: must be >= 1");
    if (!std::isfinite(p.decay)) throw Error(ErrorCode::BadParams, "decay: must be finite");
    const PeriodicGrid grid(p.n_points);

    switch (kind) {
        case InitialKind::GreatCircle: return great_circle(grid, p.sphere_dim);
        case InitialKind::PerturbedCircle: {
            SphereField circle = great_circle(grid, p.sphere_dim);
            if (p.amplitude == 0.0) return circle;
            const TangentField noise = random_tangent_section(circle, seed, {p.n_modes, 1.0, p.decay});
            std::vector<double> raw(circle.data().begin(), circle.data().end());
            for (std::size_t j = 0; j < raw.size(); ++j) raw[j] += p.amplitude * noise.data()[j];
            return SphereField::project(grid, p.sphere_dim, std::move(raw));
        }
        case InitialKind::RandomSmooth:
            return random_smooth_field(grid, p.sphere_dim, seed, {p.n_modes, p.amplitude, p.decay});
    }
    throw Error(ErrorCode::BadParams, "unknown initial kind");
}

bool StudyReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

const CaseResult& StudyReport::find_case(std::string_view name) const {
    for (const auto& c : cases)
        if (c.name == name) return c;
    throw Error(ErrorCode::BadParams, "no case named " + std::string(name));
}

const Check& StudyReport::find_check(std::string_view name) const {
    for (const auto& c : checks)
        if (c.name == name) return c;
    throw Error(ErrorCode::BadParams, "no check named " + std::string(name));
}

Check& StudyReport::check_le(std::string name, double value, double threshold) {
    checks.push_back({std::move(name), value, threshold, "<=", std::isfinite(value) && value <= threshold});
    return checks.back();
}

Check& StudyReport::check_ge(std::string name, double value, double threshold) {
    checks.push_back({std::move(name), value, threshold, ">=", std::isfinite(value) && value >= threshold});
    return checks.back();
}

Check& StudyReport::check_holds(std::string name, bool ok, double value) {
    checks.push_back({std::move(name), value, 0.0, "holds", ok});
    return checks.back();
}

nlohmann::json StudyReport::to_json() const {
    nlohmann::json j;
    j["study"] = study;
    j["parameters"] = parameters;
    j["provenance"] = provenance;
    j["cases"] = nlohmann::json::array();
    for (const auto& c : cases) {
        nlohmann::json m = nlohmann::json::object();
        for (const auto& [k, v] : c.metrics) m[k] = number(v);
        j["cases"].push_back({{"name", c.name}, {"metrics", m}});
    }
    j["checks"] = nlohmann::json::array();
    for (const auto& c : checks) {
        j["checks"].push_back({{"name", c.name},
                               {"value", number(c.value)},
                               {"threshold", number(c.threshold)},
                               {"relation", c.relation},
                               {"pass", c.pass}});
    }
    j["passed"] = passed();
    return j;
}

double w12_distance(const SphereField& u, const SphereField& v) {
    if (u.data().size() != v.data().size() || !(u.grid() == v.grid())) {
        throw Error(ErrorCode::DimensionMismatch, "fields live on different grids");
    }
    std::vector<double> w(u.data().size());
    for (std::size_t j = 0; j < w.size(); ++j) w[j] = u.data()[j] - v.data()[j];
    std::vector<double> wx(w.size());
    const int order[] = {1};
    const std::span<double> outs[] = {wx};
    u.grid().derivatives(w, u.ambient_dim(), order, outs);
    return detail::l2(u.grid(), u.ambient_dim(), w) + detail::l2(u.grid(), u.ambient_dim(), wx);
}

StudyReport study_traveling_wave(const std::vector<std::size_t>& n_list, const StudyOptions& opt) {
    if (n_list.empty() || !std::is_sorted(n_list.begin(), n_list.end()) ||
        std::adjacent_find(n_list.begin(), n_list.end()) != n_list.end()) {
        throw Error(ErrorCode::BadParams, "N_list must be non-empty and strictly ascending");
    }
    StudyReport rep;
    rep.study = "traveling_wave";
    rep.parameters = {{"n_list", n_list}, {"t_end", 1.0}, {"form", "intrinsic"}, {"potential", "zero"}};
    rep.provenance = provenance(opt, n_list.front());

    constexpr double t_end = 1.0;
    rep.cases = run_cases<CaseResult>(n_list.size(), opt.threads, [&](std::size_t idx) {
        const std::size_t n = n_list[idx];
        CaseResult c;
        c.name = "N" + std::to_string(n);
        InitialParams ip;
        ip.n_points = n;
        const SphereField u0 = make_initial(InitialKind::GreatCircle, ip, opt.seed);
        const PotentialMatrix a = PotentialMatrix::zero(3);
        c.metrics["n_points"] = static_cast<double>(n);
        c.metrics["dt"] = stable_dt(u0.grid(), 0.0, opt.cfl);
        try {
            const Trajectory traj = run_flow(u0, 0.0, a, t_end, opt);
            const SphereField exact = SphereField::sample(u0.grid(), 2, [&](double x, std::span<double> o) {
                o[0] = std::cos(x + 0.5 * t_end);
                o[1] = std::sin(x + 0.5 * t_end);
                o[2] = 0.0;
            });
            c.metrics["error"] = sup_distance(traj.states.back(), exact);
            c.metrics["steps"] = static_cast<double>(traj.steps);
            c.metrics["unstable"] = 0.0;
            c.columns = diagnostics_columns();
            c.rows = diagnostics_rows(traj);
        } catch (const InstabilityError& e) {
            c.metrics["unstable"] = 1.0;
            c.metrics["instability_time"] = e.time();
            c.metrics["error"] = std::numeric_limits<double>::infinity();
        }
        return c;
    });

    double worst_ratio = 0.0;
    bool monotone = true;
    for (std::size_t i = 0; i < rep.cases.size(); ++i) {
        const auto& c = rep.cases[i];
        if (c.metrics.at("unstable") != 0.0) {
            rep.check_holds(c.name + "_stable", false, c.metrics.at("instability_time"));
            monotone = false;
            continue;
        }
        rep.check_le(c.name + "_error", c.metrics.at("error"), thresholds::kTravelingWaveError);
        if (i > 0) {
            const double prev = rep.cases[i - 1].metrics.at("error");
            const double ratio = c.metrics.at("error") / prev;
            worst_ratio = std::max(worst_ratio, ratio);
            monotone = monotone && c.metrics.at("error") <= prev;
        }
    }
    if (rep.cases.size() > 1) rep.check_holds("monotone_decrease", monotone, worst_ratio);
    return rep;
}

StudyReport study_epsilon_vanishing(const std::vector<double>& epsilons, const SphereField& u0,
                                    const PotentialMatrix& a, double t_end, const StudyOptions& opt) {
    if (epsilons.empty()) throw Error(ErrorCode::BadParams, "epsilon list is empty");
    for (std::size_t i = 0; i < epsilons.size(); ++i) {
        if (!(epsilons[i] >= 0.0 && epsilons[i] <= 1.0)) {
            throw Error(ErrorCode::BadParams, "epsilon values must lie in [0, 1]");
        }
        if (i > 0 && !(epsilons[i] < epsilons[i - 1])) {
            throw Error(ErrorCode::BadParams, "epsilon list must be strictly descending");
        }
    }
    StudyReport rep;
    rep.study = "epsilon";
    rep.parameters = {{"epsilons", epsilons}, {"t_end", t_end}, {"potential", matrix_json(a)}};
    rep.provenance = provenance(opt, u0.n_points());

    // Index 0 is the epsilon = 0 reference; the rest follow the list.
    std::vector<double> all_eps{0.0};
    all_eps.insert(all_eps.end(), epsilons.begin(), epsilons.end());
    const auto trajs = run_cases<Trajectory>(all_eps.size(), opt.threads,
                                             [&](std::size_t i) { return run_flow(u0, all_eps[i], a, t_end, opt); });
    const SphereField& limit = trajs[0].states.back();

    auto summarize = [&](const Trajectory& traj, double eps, const std::string& name) {
        CaseResult c;
        c.name = name;
        c.metrics["epsilon"] = eps;
        c.metrics["d"] = sup_distance(traj.states.back(), limit);
        double sup_h22 = 0.0;
        for (const auto& d : traj.diagnostics) sup_h22 = std::max(sup_h22, d.h22);
        c.metrics["sup_h22"] = sup_h22;
        double rise = -std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k + 1 < traj.size(); ++k) {
            const auto& d0 = traj.diagnostics[k];
            const auto& d1 = traj.diagnostics[k + 1];
            rise = std::max(rise, (d1.e1 - d0.e1) / (d1.t - d0.t));
        }
        c.metrics["e1_max_increase_rate"] = rise;
        c.metrics["e1_change"] = traj.diagnostics.back().e1 - traj.diagnostics.front().e1;
        c.metrics["dt"] = traj.dt;
        c.metrics["steps"] = static_cast<double>(traj.steps);
        c.columns = diagnostics_columns();
        c.rows = diagnostics_rows(traj);
        return c;
    };

    rep.cases.push_back(summarize(trajs[0], 0.0, "reference"));
    for (std::size_t i = 1; i < all_eps.size(); ++i) rep.cases.push_back(summarize(trajs[i], all_eps[i], eps_label(all_eps[i])));

    bool decreasing = true;
    double worst = 0.0;
    for (std::size_t i = 2; i < rep.cases.size(); ++i) {
        const double prev = rep.cases[i - 1].metrics.at("d");
        const double cur = rep.cases[i].metrics.at("d");
        decreasing = decreasing && cur < prev;
        worst = std::max(worst, cur / prev);
        if (prev > 0.0 && cur > 0.0) {
            const double rate = std::log(prev / cur) /
                                std::log(rep.cases[i - 1].metrics.at("epsilon") / rep.cases[i].metrics.at("epsilon"));
            rep.cases[i].metrics["observed_rate"] = rate;
        }
    }
    if (rep.cases.size() > 2) rep.check_holds("d_strictly_decreasing", decreasing, worst);

    double hmin = std::numeric_limits<double>::infinity(), hmax = 0.0;
    for (const auto& c : rep.cases) {
        hmin = std::min(hmin, c.metrics.at("sup_h22"));
        hmax = std::max(hmax, c.metrics.at("sup_h22"));
    }
    rep.check_le("h22_spread", (hmax - hmin) / hmax, thresholds::kH22Spread);

    for (std::size_t i = 1; i < rep.cases.size(); ++i) {
        const auto& c = rep.cases[i];
        if (c.metrics.at("epsilon") > 0.0) {
            rep.check_le(c.name + "_e1_increase_rate", c.metrics.at("e1_max_increase_rate"),
                         thresholds::kE1IncreaseRate);
        }
    }
    return rep;
}

StudyReport study_uniqueness(const SphereField& u0, double delta, const PotentialMatrix& a, double t_end,
                             const StudyOptions& opt) {
    if (!(delta >= 0.0) || !std::isfinite(delta)) throw Error(ErrorCode::BadParams, "delta must be >= 0");
    StudyReport rep;
    rep.study = "uniqueness";
    rep.parameters = {{"delta", delta}, {"t_end", t_end}, {"potential", matrix_json(a)}};
    rep.provenance = provenance(opt, u0.n_points());

    // Unit W^{1,2} tangent direction.
    TangentField dir = random_tangent_section(u0, opt.seed ^ 0x9e3779b97f4a7c15ULL);
    {
        std::vector<double> zero(u0.data().size(), 0.0);
        std::vector<double> wx(zero.size());
        const int order[] = {1};
        const std::span<double> outs[] = {wx};
        u0.grid().derivatives(dir.data(), u0.ambient_dim(), order, outs);
        const double norm = l2_norm(dir) + detail::l2(u0.grid(), u0.ambient_dim(), wx);
        dir = dir.scaled(1.0 / norm);
    }
    auto perturbed = [&](double d) {
        if (d == 0.0) return u0;
        std::vector<double> raw(u0.data().begin(), u0.data().end());
        for (std::size_t j = 0; j < raw.size(); ++j) raw[j] += d * dir.data()[j];
        return SphereField::project(u0.grid(), u0.sphere_dim(), std::move(raw));
    };

    const std::vector<SphereField> starts{u0, perturbed(delta), perturbed(delta / 2)};
    const auto trajs = run_cases<Trajectory>(starts.size(), opt.threads,
                                             [&](std::size_t i) { return run_flow(starts[i], 0.0, a, t_end, opt); });

    CaseResult c;
    c.name = "growth";
    c.columns = {"t", "g_delta", "g_half_delta"};
    std::vector<double> g, gh;
    for (std::size_t k = 0; k < trajs[0].size(); ++k) {
        const double d1 = w12_distance(trajs[0].states[k], trajs[1].states[k]);
        const double d2 = w12_distance(trajs[0].states[k], trajs[2].states[k]);
        g.push_back(delta > 0.0 ? d1 / delta : d1);
        gh.push_back(delta > 0.0 ? d2 / (delta / 2) : d2);
        c.rows.push_back({trajs[0].times[k], g.back(), gh.back()});
    }
    const auto& t = trajs[0].times;

    if (delta == 0.0) {
        const bool identical = std::all_of(g.begin(), g.end(), [](double x) { return x == 0.0; });
        c.metrics["g_final"] = g.back();
        rep.cases.push_back(std::move(c));
        rep.check_holds("identical_runs", identical, 0.0);
        return rep;
    }

    double c_hat = 0.0;
    for (std::size_t k = 0; k + 1 < g.size(); ++k) c_hat = std::max(c_hat, std::log(g[k + 1] / g[k]) / (t[k + 1] - t[k]));
    double excess = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < g.size(); ++k) {
        excess = std::max(excess, g[k] / (std::exp(c_hat * t[k]) * (1.0 + thresholds::kEnvelopeSlack)) - 1.0);
    }
    // Least-squares slope of log g, descriptive only.
    double st = 0, sl = 0, stt = 0, stl = 0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        const double l = std::log(g[k]);
        st += t[k];
        sl += l;
        stt += t[k] * t[k];
        stl += t[k] * l;
    }
    const double n = static_cast<double>(g.size());
    const double ls_rate = (n * stl - st * sl) / (n * stt - st * st);

    double linearity = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) linearity = std::max(linearity, std::abs(g[k] - gh[k]) / g[k]);

    c.metrics["g0"] = g.front();
    c.metrics["g_final"] = g.back();
    c.metrics["g_max"] = *std::max_element(g.begin(), g.end());
    c.metrics["c_hat"] = c_hat;
    c.metrics["ls_rate"] = ls_rate;
    c.metrics["envelope_excess"] = excess;
    c.metrics["linearity_error"] = linearity;
    rep.cases.push_back(std::move(c));

    rep.check_holds("finite_growth", std::all_of(g.begin(), g.end(), [](double x) { return std::isfinite(x); }),
                    g.back());
    rep.check_le("envelope_excess", excess, 0.0);
    rep.check_le("halving_delta_change", linearity, thresholds::kLinearity);
    return rep;
}

StudyReport study_energy_laws(const SphereField& u0, const PotentialMatrix& a, double t_end, const StudyOptions& opt) {
    StudyReport rep;
    rep.study = "energy_laws";
    rep.parameters = {{"t_end", t_end}, {"potential", matrix_json(a)}};
    rep.provenance = provenance(opt, u0.n_points());

    const Trajectory traj = run_flow(u0, 0.0, a, t_end, opt);
    const auto& diag = traj.diagnostics;
    const std::size_t n = traj.size();

    CaseResult c;
    c.name = "flow";
    c.columns = diagnostics_columns();
    c.rows = diagnostics_rows(traj);

    const double e1_0 = diag.front().e1;
    const double e2_0 = diag.front().e2;
    double e1_drift = 0.0, e2_drift = 0.0;
    for (const auto& d : diag) {
        e1_drift = std::max(e1_drift, std::abs(d.e1 - e1_0) / (1.0 + std::abs(e1_0)));
        e2_drift = std::max(e2_drift, std::abs(d.e2 - e2_0) / (1.0 + std::abs(e2_0)));
    }
    c.metrics["e1_drift"] = e1_drift;
    c.metrics["e2_drift"] = e2_drift;

    std::vector<double> t(traj.times), kinetic_energy, kinetic_rate, curv, dirichlet;
    double cancellation = 0.0;
    double max_res = 0.0, max_fd = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const auto& u = traj.states[k];
        const TangentField ux = map_derivative(u, opt.scheme);
        const double l2 = l2_norm(ux);
        dirichlet.push_back(l2);
        kinetic_energy.push_back(0.5 * l2 * l2);
        const E1Rates r = e1_rate_components(u, a, opt.scheme);
        kinetic_rate.push_back(r.kinetic);
        cancellation = std::max(cancellation, std::abs(r.kinetic + r.potential));
        curv.push_back(second_covariant_energy(u, opt.scheme));
        max_res = std::max(max_res, std::abs(diag[k].de2_residual));
        max_fd = std::max(max_fd, std::abs(diag[k].de2_residual + traj.de2_formula[k]));
    }
    c.metrics["rate_cancellation"] = cancellation;
    c.metrics["de2_abs_residual"] = max_res;
    c.metrics["de2_fd_scale"] = max_fd;

    const GronwallReport g2 = semi_conservation_check(traj, Functional::E2);
    const GronwallReport g3 = semi_conservation_check(traj, Functional::E3);
    const GronwallReport gc = gronwall_fit(t, curv);
    c.metrics["e2_c_hat"] = g2.c_hat;
    c.metrics["e3_c_hat"] = g3.c_hat;
    c.metrics["curvature_c_hat"] = gc.c_hat;
    c.metrics["e3_max"] = g3.max_value;
    c.metrics["curvature_max"] = gc.max_value;

    const double dirichlet_bound = 2.0 * e1_0 + 2.0 * std::numbers::pi * a.spectral_radius();
    double dirichlet_excess = -std::numeric_limits<double>::infinity();
    double dirichlet_growth = 0.0;
    for (double l : dirichlet) {
        dirichlet_excess = std::max(dirichlet_excess, l * l - dirichlet_bound * (1.0 + thresholds::kE1Drift));
        if (dirichlet.front() > 0.0) dirichlet_growth = std::max(dirichlet_growth, l / dirichlet.front() - 1.0);
    }
    c.metrics["dirichlet_excess"] = dirichlet_excess;
    c.metrics["dirichlet_growth"] = dirichlet_growth;

    rep.check_le("e1_drift", e1_drift, thresholds::kE1Drift);
    rep.check_le("rate_cancellation", cancellation, thresholds::kRateCancellation);
    if (a.is_zero()) {
        rep.check_le("e2_drift", e2_drift, thresholds::kE2Drift);
        rep.check_le("dirichlet_growth", dirichlet_growth, thresholds::kDirichletGrowth);
    } else {
        const double rel = max_fd > 0.0 ? max_res / max_fd : max_res;
        c.metrics["de2_relative_residual"] = rel;
        rep.check_le("de2_relative_residual", rel, thresholds::kDe2Relative);
        rep.check_le("dirichlet_bound_excess", dirichlet_excess, 0.0);

        if (n >= 3) {
            const auto fd = fd_rates(t, kinetic_energy);
            double err = 0.0, scale = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                err = std::max(err, std::abs(fd[k] - kinetic_rate[k]));
                scale = std::max(scale, std::abs(kinetic_rate[k]));
            }
            c.metrics["kinetic_rate_relative"] = scale > 0.0 ? err / scale : err;
            rep.check_le("kinetic_rate_relative", c.metrics["kinetic_rate_relative"], thresholds::kKineticRateRelative);
        }
    }
    rep.check_holds("e2_envelope", g2.envelope_ok, g2.max_envelope_excess);
    rep.check_holds("e3_envelope", g3.envelope_ok, g3.max_envelope_excess);
    rep.check_holds("curvature_envelope", gc.envelope_ok && std::isfinite(gc.max_value), gc.max_value);
    rep.cases.push_back(std::move(c));
    return rep;
}

}  // namespace gll
