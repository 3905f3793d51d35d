#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "commands.hpp"
#include "gll/error.hpp"

namespace {

void setup_logging() {
    auto logger = spdlog::stderr_color_mt("gll");
    spdlog::set_default_logger(logger);
    spdlog::set_level(spdlog::level::warn);
    if (const char* lvl = std::getenv("GLL_LOG")) {
        const std::string s(lvl);
        if (s == "debug") spdlog::set_level(spdlog::level::debug);
        else if (s == "info") spdlog::set_level(spdlog::level::info);
    }
}

}  // namespace

int main(int argc, char** argv) {
    setup_logging();
    namespace cli = gll::cli;

    CLI::App app{"Generalized Landau-Lifshitz flow on spheres: simulation, identity checks and studies", "gll"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::vector<std::string> sets;
    std::optional<std::string> out_dir;
    std::optional<unsigned> threads;
    std::optional<std::uint64_t> seed;
    app.add_option("--config", config_path, "JSON config file with flat keys")->check(CLI::ExistingFile);
    app.add_option("--set", sets, "key=value override (repeatable, wins over --config)");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--threads", threads, "worker threads for study cases (default 1)");
    app.add_option("--seed", seed, "seed for random initial data and perturbations");

    auto* simulate = app.add_subcommand("simulate", "evolve one initial datum and write diagnostics");
    std::string level = "quick";
    auto* verify = app.add_subcommand("verify", "run the identity and invariant checks");
    verify->add_option("level", level, "quick (N=64) or full (N=256)")->check(CLI::IsMember({"quick", "full"}));
    std::string study_name;
    auto* study = app.add_subcommand("study", "run a scripted study and write its report");
    study->add_option("name", study_name, "traveling_wave | epsilon | uniqueness | energy_laws")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : cli::kExitConfig;
    }

    try {
        if (*verify) return cli::cmd_verify(level, std::cout, std::cerr);

        cli::RunConfig cfg = cli::load_config(
            config_path.empty() ? std::nullopt : std::optional<std::filesystem::path>(config_path), sets);
        if (out_dir) cfg.out = *out_dir;
        if (threads) cfg.threads = *threads;
        if (seed) cfg.seed = *seed;

        if (*simulate) return cli::cmd_simulate(cfg, std::cout, std::cerr);
        return cli::cmd_study(study_name, cfg, std::cout, std::cerr);
    } catch (const gll::Error& e) {
        std::cerr << (e.code() == gll::ErrorCode::Config ? "config error: " : "error: ") << e.detail() << '\n';
        return e.code() == gll::ErrorCode::Config ? cli::kExitConfig : cli::kExitFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return cli::kExitFailure;
    }
}
