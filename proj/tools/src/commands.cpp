#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <ostream>

#include <spdlog/spdlog.h>

#include "gll/energies.hpp"
#include "gll/error.hpp"
#include "gll/io.hpp"

#ifndef GLL_VERSION
#define GLL_VERSION "unknown"
#endif

namespace gll::cli {

namespace fs = std::filesystem;

namespace {

void write_json(const fs::path& path, const nlohmann::json& j) {
    std::ofstream os(path);
    if (!os) throw Error(ErrorCode::Config, "out: cannot write " + path.string());
    os << j.dump(2) << '\n';
}

fs::path prepare_out(const RunConfig& cfg) {
    fs::path dir(cfg.out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::Config, "out: cannot create " + dir.string() + " (" + ec.message() + ")");
    return dir;
}

}  // namespace

int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    std::optional<SphereField> u0;
    try {
        cfg.validate();
        u0.emplace(make_initial(cfg.initial_kind(), cfg.initial_params(), cfg.seed));
    } catch (const Error& e) {
        err << "config error: " << e.detail() << '\n';
        return kExitConfig;
    }
    const FlowSpec spec = cfg.flow_spec();
    const fs::path dir = prepare_out(cfg);
    spdlog::info("simulate: form={} N={} n={} t_end={} dt={}", to_string(spec.form), cfg.n_points, cfg.sphere_dim,
                 cfg.t_end, stable_dt(u0->grid(), spec.epsilon, spec.cfl));

    const auto start = std::chrono::steady_clock::now();
    Trajectory traj;
    try {
        traj = evolve(*u0, spec);
    } catch (const InstabilityError& e) {
        err << "instability: " << e.detail() << '\n';
        return kExitInstability;
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    {
        std::ofstream os(dir / "diagnostics.csv");
        write_diagnostics_csv(os, traj.diagnostics);
    }
    write_json(dir / "state_final.json", field_to_json(traj.states.back(), cfg.seed));
    write_json(dir / "manifest.json", {{"command", "simulate"},
                                       {"version", GLL_VERSION},
                                       {"config", to_json(cfg)},
                                       {"wall_time_s", wall},
                                       {"steps", traj.steps},
                                       {"dt", traj.dt},
                                       {"final_time", traj.times.back()}});
    out << "simulate: " << traj.steps << " steps to t=" << format_double(traj.times.back()) << ", wrote "
        << dir.string() << '\n';
    return kExitOk;
}

std::vector<std::string> study_names() { return {"traveling_wave", "epsilon", "uniqueness", "energy_laws"}; }

int cmd_study(std::string_view name, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const auto names = study_names();
    if (std::find(names.begin(), names.end(), name) == names.end()) {
        err << "unknown study '" << name << "' (traveling_wave|epsilon|uniqueness|energy_laws)\n";
        return kExitConfig;
    }
    try {
        cfg.validate();
    } catch (const Error& e) {
        err << "config error: " << e.detail() << '\n';
        return kExitConfig;
    }
    const StudyOptions opt = cfg.study_options();
    const fs::path dir = prepare_out(cfg);
    spdlog::info("study {}: N={} threads={} seed={}", name, cfg.n_points, cfg.threads, cfg.seed);

    const auto start = std::chrono::steady_clock::now();
    StudyReport rep;
    try {
        if (name == "traveling_wave") {
            rep = study_traveling_wave(cfg.n_list, opt);
        } else {
            const SphereField u0 = make_initial(cfg.initial_kind(), cfg.initial_params(), cfg.seed);
            const PotentialMatrix a = cfg.potential_matrix();
            if (name == "epsilon") rep = study_epsilon_vanishing(cfg.epsilons, u0, a, cfg.t_end, opt);
            else if (name == "uniqueness") rep = study_uniqueness(u0, cfg.delta, a, cfg.t_end, opt);
            else rep = study_energy_laws(u0, a, cfg.t_end, opt);
        }
    } catch (const InstabilityError& e) {
        err << "instability: " << e.detail() << '\n';
        return kExitInstability;
    } catch (const Error& e) {
        err << "study error: " << e.detail() << '\n';
        return kExitConfig;
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    nlohmann::json j = rep.to_json();
    j["provenance"]["version"] = GLL_VERSION;
    j["provenance"]["config"] = to_json(cfg);
    write_json(dir / ("report_" + rep.study + ".json"), j);
    for (const auto& c : rep.cases) {
        if (c.columns.empty()) continue;
        std::ofstream os(dir / (rep.study + "_" + c.name + ".csv"));
        write_table_csv(os, c.columns, c.rows);
    }
    spdlog::debug("study {} finished in {:.2f}s", name, wall);

    for (const auto& c : rep.checks) {
        out << (c.pass ? "PASS  " : "FAIL  ") << c.name << "  value=" << format_double(c.value);
        if (c.relation != "holds") out << "  " << c.relation << ' ' << format_double(c.threshold);
        out << '\n';
    }
    out << "study " << rep.study << ": " << (rep.passed() ? "passed" : "FAILED") << '\n';
    return rep.passed() ? kExitOk : kExitFailure;
}

}  // namespace gll::cli
