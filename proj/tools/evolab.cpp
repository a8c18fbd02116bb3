// evolab command-line driver.
//
// Subcommands map one-to-one onto the experiment runners; every run writes a
// self-contained archive directory. Failures print a single machine-readable
// JSON record to stderr: exit 2 for configuration/usage problems, 1 for
// runtime failures.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "evolab/evolab.hpp"

namespace {

void emit_error(const std::string& kind, const std::string& message,
                const std::string& context) {
    const nlohmann::json record = {
        {"error", {{"kind", kind}, {"message", message}, {"context", context}}}};
    std::cerr << record.dump() << "\n";
}

struct RunFlags {
    std::string config_path;
    std::string preset;
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
    std::optional<int> runs;
    std::string out;
    std::string name;
    std::string archive;  // retest only
};

void add_run_flags(CLI::App* cmd, RunFlags& flags) {
    cmd->add_option("--config", flags.config_path, "JSON config file");
    cmd->add_option("--preset", flags.preset, "named built-in config");
    cmd->add_option("--seed", flags.seed, "override the root seed");
    cmd->add_option("--workers", flags.workers, "override the worker count");
    cmd->add_option("--runs", flags.runs, "override the number of runs");
    cmd->add_option("--out", flags.out, "output root directory");
    cmd->add_option("--name", flags.name, "archive directory name");
}

nlohmann::json load_config_json(const RunFlags& flags) {
    if (flags.config_path.empty() == flags.preset.empty())
        throw evolab::exp::ConfigError("give exactly one of --config and --preset",
                                       "cli");
    if (!flags.preset.empty()) return evolab::exp::preset_config(flags.preset);
    if (!std::filesystem::exists(flags.config_path))
        throw evolab::exp::ConfigError("config file not found: " + flags.config_path,
                                       "cli");
    try {
        return nlohmann::json::parse(evolab::exp::read_text_file(flags.config_path));
    } catch (const nlohmann::json::exception& e) {
        throw evolab::exp::ConfigError(std::string("config is not valid JSON: ") +
                                           e.what(),
                                       "cli");
    }
}

evolab::exp::ExperimentConfig load_config(const RunFlags& flags,
                                          const std::string& expected) {
    evolab::exp::ExperimentConfig cfg = evolab::exp::parse_config(load_config_json(flags));
    evolab::exp::CommonConfig& common = evolab::exp::common_of(cfg);
    if (common.experiment != expected)
        throw evolab::exp::ConfigError("config is for '" + common.experiment +
                                           "' but the subcommand is '" + expected + "'",
                                       "cli");
    if (flags.seed) common.seed = *flags.seed;
    if (flags.workers) common.workers = *flags.workers;
    if (flags.runs) common.runs = *flags.runs;
    if (!flags.out.empty()) common.out_dir = flags.out;
    if (!flags.name.empty()) common.name = flags.name;
    if (common.runs <= 0 || common.workers <= 0)
        throw evolab::exp::ConfigError("runs and workers must be > 0", "cli");
    return cfg;
}

std::filesystem::path out_dir_for(const evolab::exp::ExperimentConfig& cfg) {
    return evolab::exp::resolve_out_dir(evolab::exp::common_of(cfg),
                                        evolab::exp::config_to_json(cfg));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "evolab: deterministic workbench for oscillator-network skill learning and "
        "swarm-controller evolution"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "0.1.0");

    std::function<int()> action;

    RunFlags evolve_flags;
    CLI::App* evolve = app.add_subcommand(
        "evolve-swarm", "evolve reservoir output layers for gradient-seeking swarms");
    add_run_flags(evolve, evolve_flags);
    evolve->callback([&] {
        action = [&]() -> int {
            const auto cfg = load_config(evolve_flags, "evolve-swarm");
            const auto& ec = std::get<evolab::exp::EvolveSwarmConfig>(cfg);
            const auto out = evolab::exp::run_evolve_swarm(ec, out_dir_for(cfg));
            std::cout << "archive " << out.dir.string() << "\n"
                      << "best_fitness " << out.best_fitness << " (run " << out.best_run
                      << ")\n";
            return 0;
        };
    });

    RunFlags skills_flags;
    CLI::App* skills = app.add_subcommand(
        "learn-skills", "learn locomotion skills on a modular body");
    add_run_flags(skills, skills_flags);
    skills->callback([&] {
        action = [&]() -> int {
            const auto cfg = load_config(skills_flags, "learn-skills");
            const auto& sc = std::get<evolab::exp::LearnSkillsConfig>(cfg);
            const auto out = evolab::exp::run_learn_skills(sc, out_dir_for(cfg));
            std::cout << "archive " << out.dir.string() << "\n";
            for (const auto& entry : out.summary.at("skills")) {
                std::cout << "skill " << entry.at("skill").get<std::string>() << ":";
                if (entry.contains("wo"))
                    std::cout << " wo_mbf_final="
                              << entry.at("wo").at("mbf_final").get<double>();
                if (entry.contains("iso"))
                    std::cout << " iso_mbf_final="
                              << entry.at("iso").at("mbf_final").get<double>();
                std::cout << "\n";
            }
            return 0;
        };
    });

    RunFlags retest_flags;
    CLI::App* retest = app.add_subcommand(
        "retest", "re-run an evolved controller across deployment settings");
    add_run_flags(retest, retest_flags);
    retest->add_option("--archive", retest_flags.archive,
                       "evolve-swarm archive holding the controller");
    retest->callback([&] {
        action = [&]() -> int {
            auto cfg = load_config(retest_flags, "retest");
            auto& rc = std::get<evolab::exp::RetestConfig>(cfg);
            if (!retest_flags.archive.empty()) rc.archive = retest_flags.archive;
            const auto out = evolab::exp::run_retest(rc, out_dir_for(cfg));
            std::cout << "archive " << out.dir.string() << "\n"
                      << "cells " << out.cells.size() << " repetitions "
                      << rc.sweep.repetitions << "\n";
            return 0;
        };
    });

    std::vector<std::string> metric_archives;
    std::string metrics_out;
    CLI::App* metrics = app.add_subcommand(
        "metrics", "recompute headline metrics from archived evaluation logs");
    metrics->add_option("--archive", metric_archives, "archive directory (repeatable)")
        ->required();
    metrics->add_option("--out", metrics_out, "also write the combined table here");
    metrics->callback([&] {
        action = [&]() -> int {
            std::vector<evolab::exp::MetricRow> combined;
            for (const std::string& dir : metric_archives) {
                auto rows = evolab::exp::recompute_metrics(dir);
                evolab::exp::write_metrics_csv(
                    std::filesystem::path(dir) / "metrics.csv", rows);
                for (auto& r : rows) {
                    r.condition = "archive=" + dir +
                                  (r.condition.empty() ? "" : ";" + r.condition);
                    combined.push_back(std::move(r));
                }
            }
            std::size_t learn_count = 0;
            for (const std::string& dir : metric_archives)
                if (evolab::exp::open_archive(dir).experiment == "learn-skills")
                    ++learn_count;
            if (learn_count >= 2 && learn_count == metric_archives.size()) {
                std::vector<std::filesystem::path> dirs(metric_archives.begin(),
                                                        metric_archives.end());
                for (auto& r : evolab::exp::cross_archive_stats(dirs))
                    combined.push_back(std::move(r));
            }
            std::cout << "metric,condition,value\n";
            for (const auto& r : combined)
                std::cout << r.metric << ',' << r.condition << ','
                          << (r.value ? evolab::exp::format_double(*r.value)
                                      : std::string())
                          << "\n";
            if (!metrics_out.empty())
                evolab::exp::write_metrics_csv(metrics_out, combined);
            return 0;
        };
    });

    std::string export_archive_dir;
    int export_resolution = 101;
    CLI::App* exporter =
        app.add_subcommand("export", "write plot-ready tables for an archive");
    exporter->add_option("--archive", export_archive_dir, "archive directory")
        ->required();
    exporter->add_option("--resolution", export_resolution,
                         "field grid resolution (cells per side)");
    exporter->callback([&] {
        action = [&]() -> int {
            const auto out =
                evolab::exp::export_archive(export_archive_dir, export_resolution);
            std::cout << "export " << out.string() << "\n";
            return 0;
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        if (code != 0) {
            emit_error("usage", e.what(), "cli");
            return 2;
        }
        return 0;
    }

    try {
        return action();
    } catch (const evolab::exp::ConfigError& e) {
        emit_error("config", e.what(), e.context);
        return 2;
    } catch (const evolab::exp::ArchiveError& e) {
        emit_error("archive", e.what(), "archive");
        return 2;
    } catch (const std::exception& e) {
        emit_error("runtime", e.what(), "");
        return 1;
    }
}
