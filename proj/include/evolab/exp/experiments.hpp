#pragma once

// Experiment runners. Each takes a parsed config plus an output directory,
// writes a complete archive (config.json, logs, summary.json), and returns
// the headline results in memory for callers that want to assert on them.
//
// Determinism contract: every stochastic decision draws from a stream named
// by (root seed, structured label), and parallel evaluation writes results
// by index. Worker count never changes any archived byte.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "evolab/cpg/morphology.hpp"
#include "evolab/cpg/network.hpp"
#include "evolab/ctrl/regulatory.hpp"
#include "evolab/ctrl/reservoir.hpp"
#include "evolab/exp/archive.hpp"
#include "evolab/exp/config.hpp"
#include "evolab/exp/io.hpp"
#include "evolab/exp/parallel.hpp"
#include "evolab/metrics/learning.hpp"
#include "evolab/metrics/skills.hpp"
#include "evolab/opt/cmaes.hpp"
#include "evolab/opt/de.hpp"
#include "evolab/opt/iso.hpp"
#include "evolab/opt/revde.hpp"
#include "evolab/sim/drive.hpp"
#include "evolab/sim/field.hpp"
#include "evolab/sim/trial.hpp"
#include "evolab/sim/world.hpp"

namespace evolab::exp {

// Output root precedence: explicit config out_dir, then the EVOLAB_OUT
// environment variable, then ./runs. The archive directory name defaults to
// <experiment>-<config hash prefix>-s<seed>.
inline std::filesystem::path resolve_out_dir(const CommonConfig& common,
                                             const nlohmann::json& canonical) {
    std::filesystem::path root;
    if (!common.out_dir.empty()) {
        root = common.out_dir;
    } else if (const char* env = std::getenv("EVOLAB_OUT"); env && *env) {
        root = env;
    } else {
        root = "runs";
    }
    std::string name = common.name;
    if (name.empty()) {
        const std::string hash = config_hash_hex(scientific_config(canonical));
        name = common.experiment + "-" + hash.substr(0, 8) + "-s" +
               std::to_string(common.seed);
    }
    return root / name;
}

namespace expdetail {

inline std::uint64_t derived_seed(std::uint64_t root, const std::string& label) {
    return core::RandomStream(root, label).bits();
}

inline double aggregate_repeats(std::vector<double> v, bool use_min) {
    if (v.empty()) throw std::invalid_argument("aggregate_repeats: empty");
    if (use_min) return *std::min_element(v.begin(), v.end());
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

inline metrics::MeanStd batch_stats(const std::vector<double>& v) {
    return metrics::detail::mean_std(std::span<const double>(v.data(), v.size()));
}

// population spread of one gene block across all candidates
inline double block_std(const opt::Population& pop, int offset, int count) {
    std::vector<double> flat;
    flat.reserve(pop.size() * static_cast<std::size_t>(count));
    for (const auto& x : pop)
        for (int g = 0; g < count; ++g) flat.push_back(x[offset + g]);
    return batch_stats(flat).std;
}

}  // namespace expdetail

// --- swarm-controller evolution ---------------------------------------------------

struct EvolveOutcome {
    std::filesystem::path dir;
    nlohmann::json summary;
    std::vector<std::vector<double>> gen_best;  // per run, per logged batch
    Eigen::VectorXd best_genotype;
    sim::ControllerBundle best_bundle;
    double best_fitness = -std::numeric_limits<double>::infinity();
    int best_run = -1;
};

inline EvolveOutcome run_evolve_swarm(const EvolveSwarmConfig& cfg,
                                      const std::filesystem::path& out_dir) {
    const nlohmann::json canonical = config_to_json(cfg);
    const sim::ScalarField field = sim::make_field(cfg.field, cfg.world.arena_side);
    const int reservoir_count = cfg.controller.reservoir_count();
    const int dim = reservoir_count * ctrl::kGenesPerReservoir;
    const bool use_de = cfg.optimizer == "de";
    const int repeats = use_de ? cfg.de.repeats : cfg.cma.repeats;
    const std::optional<ctrl::RegulatoryPolicy> policy =
        cfg.controller.regulatory ? std::optional<ctrl::RegulatoryPolicy>(
                                        ctrl::RegulatoryPolicy{})
                                  : std::nullopt;

    EvolveOutcome out;
    out.dir = out_dir;
    std::vector<EvalRow> evals;
    std::vector<GenStatRow> gen_rows;
    std::vector<std::vector<double>> run_eval_fitness(
        static_cast<std::size_t>(cfg.common.runs));
    std::vector<std::vector<ctrl::ReservoirNet>> run_reservoirs;

    for (int run = 0; run < cfg.common.runs; ++run) {
        core::RandomStream res_rng =
            core::rng_stream(cfg.common.seed, "run/" + std::to_string(run) + "/reservoirs");
        std::vector<ctrl::ReservoirNet> reservoirs;
        for (int i = 0; i < reservoir_count; ++i)
            reservoirs.push_back(ctrl::reservoir_init(res_rng, cfg.controller.hidden_range));
        run_reservoirs.push_back(reservoirs);

        long eval_counter = 0;
        const std::size_t run_row_start = gen_rows.size();
        const opt::BatchObjective objective = [&](const opt::Population& pop,
                                                  int generation) {
            std::vector<double> fitness(pop.size(), 0.0);
            parallel_for_index(pop.size(), cfg.common.workers, [&](std::size_t i) {
                std::vector<double> reps(static_cast<std::size_t>(repeats), 0.0);
                const sim::ControllerBundle bundle = sim::make_bundle(
                    pop[i], reservoirs, cfg.controller.velocity_mode(), policy);
                for (int p = 0; p < repeats; ++p) {
                    const std::uint64_t trial_seed = expdetail::derived_seed(
                        cfg.common.seed, "eval/" + std::to_string(run) + "/" +
                                             std::to_string(generation) + "/" +
                                             std::to_string(i) + "/" + std::to_string(p));
                    reps[static_cast<std::size_t>(p)] =
                        sim::run_swarm_trial(bundle, cfg.world, field, trial_seed).fitness;
                }
                fitness[i] = expdetail::aggregate_repeats(reps, use_de);
            });
            for (std::size_t i = 0; i < pop.size(); ++i) {
                ++eval_counter;
                evals.push_back({run, "", "", eval_counter - 1, generation,
                                 static_cast<double>(eval_counter) * cfg.world.duration *
                                     repeats,
                                 fitness[i]});
                run_eval_fitness[static_cast<std::size_t>(run)].push_back(fitness[i]);
            }
            GenStatRow row;
            row.run = run;
            row.generation = generation;
            const auto ms = expdetail::batch_stats(fitness);
            row.best = *std::max_element(fitness.begin(), fitness.end());
            row.mean = ms.mean;
            row.std = ms.std;
            if (reservoir_count == 2) {
                row.genotype_std_a =
                    expdetail::block_std(pop, 0, ctrl::kGenesPerReservoir);
                row.genotype_std_b = expdetail::block_std(pop, ctrl::kGenesPerReservoir,
                                                          ctrl::kGenesPerReservoir);
            }
            gen_rows.push_back(row);
            return fitness;
        };

        core::RandomStream opt_rng =
            core::rng_stream(cfg.common.seed, "run/" + std::to_string(run) + "/opt");
        Eigen::VectorXd run_best;
        double run_best_fitness = -std::numeric_limits<double>::infinity();
        if (use_de) {
            opt::DeConfig dc;
            dc.population = cfg.de.population;
            dc.scale_f = cfg.de.scale_f;
            dc.crossover_rate = cfg.de.crossover_rate;
            dc.lower = cfg.de.lower;
            dc.upper = cfg.de.upper;
            dc.generations = cfg.de.generations;
            const opt::EvolutionResult res = opt::de_optimize(objective, dim, dc, opt_rng);
            run_best = res.best;
            run_best_fitness = res.best_fitness;
            // the elitist merge keeps generation rows describing the surviving
            // population, not the trial batch, so the logged mean tracks learning
            for (std::size_t g = 0; g < res.population_fitness.size(); ++g) {
                GenStatRow& row = gen_rows.at(run_row_start + g);
                const auto& fit = res.population_fitness[g];
                const auto ms = expdetail::batch_stats(fit);
                row.best = *std::max_element(fit.begin(), fit.end());
                row.mean = ms.mean;
                row.std = ms.std;
            }
        } else {
            opt::CmaesConfig cc;
            cc.lambda = cfg.cma.lambda;
            cc.sigma0 = cfg.cma.sigma0;
            cc.generations = cfg.cma.generations;
            cc.mean_lower = cfg.cma.mean_lower;
            cc.mean_upper = cfg.cma.mean_upper;
            cc.lower = cfg.cma.lower;
            cc.upper = cfg.cma.upper;
            const opt::CmaesResult res = opt::cmaes_optimize(objective, dim, cc, opt_rng);
            run_best = res.best;
            run_best_fitness = res.best_fitness;
            for (std::size_t g = 0; g < res.stats.size(); ++g) {
                GenStatRow& row = gen_rows.at(run_row_start + g);
                row.sigma = res.stats[g].sigma;
                row.min_eigenvalue = res.stats[g].min_eigenvalue;
                row.max_eigenvalue = res.stats[g].max_eigenvalue;
            }
        }

        std::vector<double> run_gen_best;
        for (std::size_t i = run_row_start; i < gen_rows.size(); ++i)
            run_gen_best.push_back(gen_rows[i].best);
        out.gen_best.push_back(std::move(run_gen_best));
        if (run_best_fitness > out.best_fitness) {
            out.best_fitness = run_best_fitness;
            out.best_genotype = run_best;
            out.best_run = run;
        }
    }

    out.best_bundle =
        sim::make_bundle(out.best_genotype, run_reservoirs[static_cast<std::size_t>(
                                                out.best_run)],
                         cfg.controller.velocity_mode(), policy);

    metrics::MetricSeries series{run_eval_fitness};
    const std::vector<double> curve = metrics::mbf(series);
    const metrics::AesResult aes = metrics::aes(series);
    nlohmann::json per_run = nlohmann::json::array();
    for (int run = 0; run < cfg.common.runs; ++run) {
        const auto& f = run_eval_fitness[static_cast<std::size_t>(run)];
        per_run.push_back({{"run", run},
                           {"best_fitness", *std::max_element(f.begin(), f.end())},
                           {"evaluations", f.size()}});
    }
    out.summary = {{"experiment", "evolve-swarm"},
                   {"config_hash", config_hash_hex(scientific_config(canonical))},
                   {"seed", cfg.common.seed},
                   {"runs", cfg.common.runs},
                   {"optimizer", cfg.optimizer},
                   {"best_fitness", out.best_fitness},
                   {"best_run", out.best_run},
                   {"mbf_final", curve.back()},
                   {"aes_mean", aes.mean},
                   {"aes_std", aes.std},
                   {"per_run", per_run}};

    ensure_dir(out_dir);
    write_archive_json(out_dir, "config.json", canonical);
    write_evals_csv(out_dir / "evals.csv", evals);
    write_gen_stats_csv(out_dir / "gen_stats.csv", gen_rows);
    write_archive_json(out_dir, "best_genotype.json",
                       {{"run", out.best_run},
                        {"fitness", out.best_fitness},
                        {"genotype", vector_to_json(out.best_genotype)}});
    write_archive_json(out_dir, "reservoirs.json", bundle_to_json(out.best_bundle));
    write_archive_json(out_dir, "summary.json", out.summary);
    return out;
}

// --- skill learning ----------------------------------------------------------------

struct SkillsOutcome {
    std::filesystem::path dir;
    nlohmann::json summary;
    std::map<std::string, metrics::MetricSeries> wo_series;   // per skill, runs x trials
    std::map<std::string, metrics::MetricSeries> iso_series;  // per skill, runs x trials
};

inline cpg::Morphology load_morphology(const std::string& spec) {
    if (spec == "spider") return cpg::spider_morphology();
    const std::filesystem::path p(spec);
    if (!std::filesystem::exists(p))
        throw ConfigError("morphology must be 'spider' or a path to a JSON tree",
                          "morphology");
    try {
        return cpg::morphology_from_json(nlohmann::json::parse(read_text_file(p)));
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad morphology file: ") + e.what(), "morphology");
    }
}

inline SkillsOutcome run_learn_skills(const LearnSkillsConfig& cfg,
                                      const std::filesystem::path& out_dir) {
    const nlohmann::json canonical = config_to_json(cfg);
    const cpg::Morphology morph = load_morphology(cfg.morphology);
    morph.validate();
    if (morph.joint_count() < 2)
        throw ConfigError("skill learning needs a body with at least two joints",
                          "morphology");
    const auto pairs = cpg::neighbor_pairs(morph);
    const int k = morph.joint_count();
    const int dim = k + static_cast<int>(pairs.size());
    const bool do_wo = cfg.learner == "weights" || cfg.learner == "both";
    const bool do_iso = cfg.learner == "initial-state" || cfg.learner == "both";

    SkillsOutcome out;
    out.dir = out_dir;
    std::vector<EvalRow> evals;
    nlohmann::json wo_best = nlohmann::json::array();
    nlohmann::json iso_best = nlohmann::json::array();

    for (int run = 0; run < cfg.common.runs; ++run) {
        if (do_wo) {
            nlohmann::json run_entry = {{"run", run},
                                        {"skills", nlohmann::json::array()}};
            for (metrics::SkillKind skill : cfg.skills) {
                const std::string skill_name = metrics::to_string(skill);
                opt::RevDeConfig rc;
                rc.lambda = cfg.wo.lambda;
                rc.mu = cfg.wo.mu;
                rc.scale_f = cfg.wo.scale_f;
                rc.crossover_rate = cfg.wo.crossover_rate;
                rc.generations = static_cast<int>(
                    (cfg.wo.n_trials + cfg.wo.lambda - 1) / cfg.wo.lambda) - 1;

                std::vector<double> log;
                Eigen::VectorXd best_weights;
                double best_fitness = -std::numeric_limits<double>::infinity();
                const opt::BatchObjective objective = [&](const opt::Population& pop,
                                                          int) {
                    std::vector<double> fitness(pop.size(), 0.0);
                    parallel_for_index(pop.size(), cfg.common.workers,
                                       [&](std::size_t i) {
                                           cpg::CpgNetwork net(k, pairs);
                                           net.set_weights(pop[i]);
                                           net.set_uniform_state(
                                               cfg.wo.initial_state_value);
                                           const sim::CpgDriveTrial td =
                                               sim::cpg_drive_trial(std::move(net),
                                                                    cfg.drive,
                                                                    cfg.wo.t_trial);
                                           fitness[i] = metrics::skill_fitness(
                                               td.poses, 0.0, cfg.wo.t_trial, skill);
                                       });
                    for (std::size_t i = 0; i < pop.size(); ++i) {
                        if (static_cast<int>(log.size()) < cfg.wo.n_trials &&
                            fitness[i] > best_fitness) {
                            best_fitness = fitness[i];
                            best_weights = pop[i];
                        }
                        log.push_back(fitness[i]);
                    }
                    return fitness;
                };
                core::RandomStream wo_rng = core::rng_stream(
                    cfg.common.seed,
                    "wo/run/" + std::to_string(run) + "/skill/" + skill_name);
                opt::revde_optimize(objective, dim, rc, wo_rng);

                log.resize(static_cast<std::size_t>(cfg.wo.n_trials));
                for (std::size_t i = 0; i < log.size(); ++i)
                    evals.push_back({run, "wo", skill_name, static_cast<long>(i),
                                     static_cast<int>(i / cfg.wo.lambda),
                                     static_cast<double>(i + 1) * cfg.wo.t_trial,
                                     log[i]});
                out.wo_series[skill_name].runs.push_back(log);
                run_entry["skills"].push_back(
                    {{"skill", skill_name},
                     {"fitness", best_fitness},
                     {"weights", vector_to_json(best_weights)}});
            }
            wo_best.push_back(std::move(run_entry));
        }

        if (do_iso) {
            opt::IsoConfig ic;
            ic.n_trials = cfg.iso.n_trials;
            ic.t_trial = cfg.iso.t_trial;
            ic.t_eval = cfg.iso.t_eval;
            ic.sample_period = cfg.iso.sample_period;
            ic.skills = cfg.skills;
            core::RandomStream iso_rng =
                core::rng_stream(cfg.common.seed, "iso/run/" + std::to_string(run));
            const opt::NetFactory factory = [&](core::RandomStream& rng) {
                return cpg::build_cpg_network(morph, rng);
            };
            const opt::IsoResult res = opt::iso_optimize(
                factory, opt::drive_body_trial(cfg.drive), ic, iso_rng);

            nlohmann::json run_entry = {
                {"run", run},
                {"net_weights", vector_to_json(res.net.weights())},
                {"skills", nlohmann::json::array()}};
            for (const opt::IsoSkillResult& r : res.skills) {
                const std::string skill_name = metrics::to_string(r.skill);
                for (std::size_t i = 0; i < r.per_trial_best.size(); ++i)
                    evals.push_back({run, "iso", skill_name, static_cast<long>(i), 0,
                                     static_cast<double>(i + 1) * cfg.iso.t_trial,
                                     r.per_trial_best[i]});
                out.iso_series[skill_name].runs.push_back(r.per_trial_best);
                run_entry["skills"].push_back(
                    {{"skill", skill_name},
                     {"fitness", r.best_fitness},
                     {"trial", r.best_trial},
                     {"window_start", r.best_window_start},
                     {"state", vector_to_json(r.best_state)}});
            }
            iso_best.push_back(std::move(run_entry));
        }
    }

    // headline metrics: per-skill final MBF and AES for each learner, plus the
    // overtake time and self-normalized curves on a shared interaction-time grid
    nlohmann::json skills_summary = nlohmann::json::array();
    std::vector<double> grid;
    std::vector<std::vector<double>> wo_grid_curves, iso_grid_curves;
    if (do_wo && do_iso) {
        const double spacing = std::max(cfg.wo.t_trial, cfg.iso.t_trial);
        const double total = std::min(cfg.wo.n_trials * cfg.wo.t_trial,
                                      cfg.iso.n_trials * cfg.iso.t_trial);
        for (double t = spacing; t <= total + 1e-9; t += spacing) grid.push_back(t);
    }
    for (metrics::SkillKind skill : cfg.skills) {
        const std::string skill_name = metrics::to_string(skill);
        nlohmann::json entry = {{"skill", skill_name}};
        std::vector<double> wo_curve, iso_curve;
        if (do_wo) {
            const auto& series = out.wo_series.at(skill_name);
            const auto curve = metrics::mbf(series);
            const auto a = metrics::aes(series);
            entry["wo"] = {{"mbf_final", curve.back()},
                           {"aes_mean", a.mean},
                           {"aes_std", a.std}};
            std::vector<double> times(curve.size());
            for (std::size_t i = 0; i < curve.size(); ++i)
                times[i] = static_cast<double>(i + 1) * cfg.wo.t_trial;
            if (!grid.empty()) wo_curve = metrics::resample_step(curve, times, grid);
        }
        if (do_iso) {
            const auto& series = out.iso_series.at(skill_name);
            const auto curve = metrics::mbf(series);
            const auto a = metrics::aes(series);
            entry["iso"] = {{"mbf_final", curve.back()},
                            {"aes_mean", a.mean},
                            {"aes_std", a.std}};
            std::vector<double> times(curve.size());
            for (std::size_t i = 0; i < curve.size(); ++i)
                times[i] = static_cast<double>(i + 1) * cfg.iso.t_trial;
            if (!grid.empty()) iso_curve = metrics::resample_step(curve, times, grid);
        }
        if (!grid.empty()) {
            const auto overtake = metrics::tteq(wo_curve, iso_curve, grid);
            entry["tteq_overtake"] =
                overtake ? nlohmann::json(*overtake) : nlohmann::json();
            const double wo_final = entry["wo"]["mbf_final"].get<double>();
            const double iso_final = entry["iso"]["mbf_final"].get<double>();
            entry["iso_to_wo_final_ratio"] =
                wo_final != 0.0 ? nlohmann::json(iso_final / wo_final)
                                : nlohmann::json();
            wo_grid_curves.push_back(std::move(wo_curve));
            iso_grid_curves.push_back(std::move(iso_curve));
        }
        skills_summary.push_back(std::move(entry));
    }

    nlohmann::json normalized;
    if (!grid.empty()) {
        bool all_nonzero = true;
        for (const auto& c : wo_grid_curves)
            if (c.back() == 0.0) all_nonzero = false;
        if (all_nonzero) {
            const auto np =
                metrics::normalized_performance(wo_grid_curves, iso_grid_curves);
            normalized = {{"times", grid}, {"iso_sigma", np.iso_sigma}};
            nlohmann::json wo_json;
            for (std::size_t s = 0; s < cfg.skills.size(); ++s)
                wo_json[metrics::to_string(cfg.skills[s])] = np.wo_normalized[s];
            normalized["wo"] = wo_json;
        }
    }

    out.summary = {{"experiment", "learn-skills"},
                   {"config_hash", config_hash_hex(scientific_config(canonical))},
                   {"seed", cfg.common.seed},
                   {"runs", cfg.common.runs},
                   {"morphology", cfg.morphology},
                   {"joints", k},
                   {"pair_weights", pairs.size()},
                   {"learner", cfg.learner},
                   {"skills", skills_summary},
                   {"normalized", normalized}};

    ensure_dir(out_dir);
    write_archive_json(out_dir, "config.json", canonical);
    write_archive_json(out_dir, "morphology.json", cpg::morphology_to_json(morph));
    write_evals_csv(out_dir / "evals.csv", evals);
    if (do_wo) write_archive_json(out_dir, "wo_best.json", wo_best);
    if (do_iso) write_archive_json(out_dir, "iso_best_states.json", iso_best);
    write_archive_json(out_dir, "summary.json", out.summary);
    return out;
}

// --- behavior re-testing across deployment settings --------------------------------

struct RetestCell {
    std::string family;
    double arena_side = 0.0;
    int swarm_size = 0;
    std::pair<int, int> ratio = {1, 1};
    double r_ratio = 0.0;
    double spawn_radius = 0.0;
    double mean_fitness = 0.0;
    double mean_order = 0.0;
    std::vector<double> fitness;  // per repetition
};

struct RetestOutcome {
    std::filesystem::path dir;
    nlohmann::json summary;
    std::vector<RetestCell> cells;
};

namespace expdetail {

// Spawn distance capped so the spawn box always fits; the cap binds only for
// the largest requested distances in small arenas.
inline double fit_spawn_radius(double requested, const sim::WorldConfig& w) {
    const double max_fit = w.arena_side / 2.0 - w.spawn_box_side / 2.0;
    return std::clamp(requested, 0.0, max_fit);
}

}  // namespace expdetail

inline RetestOutcome run_retest(const RetestConfig& cfg,
                                const std::filesystem::path& out_dir) {
    const nlohmann::json canonical = config_to_json(cfg);
    if (cfg.archive.empty())
        throw ConfigError("retest needs the archive of an evolved controller", "config");
    const ArchiveInfo source = open_archive(cfg.archive);
    if (source.experiment != "evolve-swarm")
        throw ConfigError("retest expects an evolve-swarm archive", "config");
    const sim::ControllerBundle bundle =
        bundle_from_json(read_archive_json(source.dir, "reservoirs.json"));
    const sim::WorldConfig base =
        cfgdetail::parse_world(source.config.at("world"), sim::WorldConfig{});
    const sim::FieldKind field_kind =
        sim::field_kind_from_string(source.config.at("field").get<std::string>());

    RetestOutcome out;
    out.dir = out_dir;
    std::vector<sim::WorldConfig> cell_worlds;

    const auto add_cell = [&](RetestCell cell, sim::WorldConfig w) {
        w.duration = cfg.sweep.duration;
        w.validate();
        cell.arena_side = w.arena_side;
        cell.swarm_size = w.swarm_size;
        cell.ratio = w.group_ratio;
        cell.spawn_radius = w.spawn_radius;
        out.cells.push_back(std::move(cell));
        cell_worlds.push_back(w);
    };

    if (!cfg.sweep.ratios.empty() && !cfg.sweep.r_ratios.empty()) {
        for (const auto& ratio : cfg.sweep.ratios)
            for (double rr : cfg.sweep.r_ratios) {
                sim::WorldConfig w = base;
                w.group_ratio = ratio;
                w.spawn_radius =
                    expdetail::fit_spawn_radius(rr * cfg.sweep.spawn_radius_base, w);
                RetestCell cell;
                cell.family = "ratio";
                cell.r_ratio = rr;
                add_cell(std::move(cell), w);
            }
    }
    for (double side : cfg.sweep.arenas) {
        sim::WorldConfig w = base;
        w.arena_side = side;
        w.spawn_radius = expdetail::fit_spawn_radius(base.spawn_radius, w);
        RetestCell cell;
        cell.family = "arena";
        add_cell(std::move(cell), w);
    }
    for (int size : cfg.sweep.swarm_sizes) {
        sim::WorldConfig w = base;
        w.swarm_size = size;
        RetestCell cell;
        cell.family = "size";
        add_cell(std::move(cell), w);
    }
    if (out.cells.empty()) throw ConfigError("retest sweep is empty", "sweep");

    std::vector<sim::ScalarField> cell_fields;
    cell_fields.reserve(cell_worlds.size());
    for (const auto& w : cell_worlds)
        cell_fields.push_back(sim::make_field(field_kind, w.arena_side));

    const int reps = cfg.sweep.repetitions;
    const std::size_t jobs = out.cells.size() * static_cast<std::size_t>(reps);
    std::vector<SweepRow> rows(jobs);
    parallel_for_index(jobs, cfg.common.workers, [&](std::size_t j) {
        const std::size_t c = j / static_cast<std::size_t>(reps);
        const int rep = static_cast<int>(j % static_cast<std::size_t>(reps));
        const RetestCell& cell = out.cells[c];
        const std::uint64_t trial_seed = expdetail::derived_seed(
            cfg.common.seed, "retest/" + cell.family + "/" + std::to_string(c) + "/" +
                                 std::to_string(rep));
        const sim::TrialLog log =
            sim::run_swarm_trial(bundle, cell_worlds[c], cell_fields[c], trial_seed);
        SweepRow row;
        row.family = cell.family;
        row.arena_side = cell.arena_side;
        row.swarm_size = cell.swarm_size;
        row.ratio_a = cell.ratio.first;
        row.ratio_b = cell.ratio.second;
        row.r_ratio = cell.r_ratio;
        row.spawn_radius = cell.spawn_radius;
        row.repetition = rep;
        row.seed = trial_seed;
        row.fitness = log.fitness;
        row.mean_order = log.mean_order;
        row.collisions = log.collisions;
        rows[j] = std::move(row);
    });

    for (std::size_t c = 0; c < out.cells.size(); ++c) {
        RetestCell& cell = out.cells[c];
        double fit_sum = 0.0, order_sum = 0.0;
        for (int rep = 0; rep < reps; ++rep) {
            const SweepRow& row = rows[c * static_cast<std::size_t>(reps) +
                                       static_cast<std::size_t>(rep)];
            cell.fitness.push_back(row.fitness);
            fit_sum += row.fitness;
            order_sum += row.mean_order;
        }
        cell.mean_fitness = fit_sum / reps;
        cell.mean_order = order_sum / reps;
    }

    nlohmann::json families;
    if (!cfg.sweep.ratios.empty() && !cfg.sweep.r_ratios.empty()) {
        nlohmann::json ratios = nlohmann::json::array();
        for (auto [a, b] : cfg.sweep.ratios)
            ratios.push_back(std::to_string(a) + ":" + std::to_string(b));
        nlohmann::json grid = nlohmann::json::array();
        std::size_t idx = 0;
        for (std::size_t i = 0; i < cfg.sweep.ratios.size(); ++i) {
            nlohmann::json column = nlohmann::json::array();
            for (std::size_t jr = 0; jr < cfg.sweep.r_ratios.size(); ++jr)
                column.push_back(out.cells[idx++].mean_fitness);
            grid.push_back(column);
        }
        families["ratio"] = {{"ratios", ratios},
                             {"r_ratios", cfg.sweep.r_ratios},
                             {"mean_fitness", grid}};
    }
    const auto family_table = [&](const std::string& name) {
        nlohmann::json arr = nlohmann::json::array();
        for (const RetestCell& cell : out.cells)
            if (cell.family == name)
                arr.push_back({{"arena_side", cell.arena_side},
                               {"swarm_size", cell.swarm_size},
                               {"mean_fitness", cell.mean_fitness},
                               {"mean_order", cell.mean_order}});
        return arr;
    };
    if (!cfg.sweep.arenas.empty()) families["arena"] = family_table("arena");
    if (!cfg.sweep.swarm_sizes.empty()) families["size"] = family_table("size");

    out.summary = {{"experiment", "retest"},
                   {"config_hash", config_hash_hex(scientific_config(canonical))},
                   {"seed", cfg.common.seed},
                   {"archive", cfg.archive},
                   {"repetitions", reps},
                   {"cells", out.cells.size()},
                   {"families", families}};

    ensure_dir(out_dir);
    write_archive_json(out_dir, "config.json", canonical);
    write_sweep_csv(out_dir / "sweep.csv", rows);
    if (families.contains("ratio")) {
        std::ostringstream os;
        os << "r_ratio";
        for (const auto& label : families["ratio"]["ratios"])
            os << ',' << label.get<std::string>();
        os << '\n';
        for (std::size_t jr = 0; jr < cfg.sweep.r_ratios.size(); ++jr) {
            os << format_double(cfg.sweep.r_ratios[jr]);
            for (std::size_t i = 0; i < cfg.sweep.ratios.size(); ++i)
                os << ','
                   << format_double(
                          families["ratio"]["mean_fitness"][i][jr].get<double>());
            os << '\n';
        }
        write_text_file(out_dir / "grid_fitness.csv", os.str());
    }
    write_archive_json(out_dir, "summary.json", out.summary);
    return out;
}

}  // namespace evolab::exp
