#pragma once

// Post-hoc reporting over archives: recompute headline metrics from the raw
// evaluation logs (not from summary.json, so the logs stay authoritative),
// compare several archives, and export plot-ready tables.

#include <algorithm>
#include <filesystem>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "evolab/exp/archive.hpp"
#include "evolab/exp/config.hpp"
#include "evolab/exp/experiments.hpp"
#include "evolab/metrics/learning.hpp"

namespace evolab::exp {

struct MetricRow {
    std::string metric;
    std::string condition;  // semicolon-separated key=value tags, CSV-safe
    std::optional<double> value;
};

inline void write_metrics_csv(const std::filesystem::path& path,
                              const std::vector<MetricRow>& rows) {
    std::ostringstream os;
    os << "metric,condition,value\n";
    for (const MetricRow& r : rows)
        os << r.metric << ',' << r.condition << ','
           << (r.value ? format_double(*r.value) : std::string()) << '\n';
    write_text_file(path, os.str());
}

namespace repdetail {

// evals.csv rows -> rectangular per-run series, keyed by "learner/skill"
// ("" key for swarm evolution logs). Rows arrive in evaluation order per run.
inline std::map<std::string, metrics::MetricSeries> series_by_key(
    const std::vector<EvalRow>& rows) {
    std::map<std::string, std::map<int, std::vector<double>>> grouped;
    for (const EvalRow& r : rows)
        grouped[r.learner + "/" + r.skill][r.run].push_back(r.fitness);
    std::map<std::string, metrics::MetricSeries> out;
    for (auto& [key, runs] : grouped) {
        metrics::MetricSeries s;
        for (auto& [run, fitness] : runs) s.runs.push_back(std::move(fitness));
        s.validate();
        out[key] = std::move(s);
    }
    return out;
}

}  // namespace repdetail

inline std::vector<MetricRow> recompute_metrics(const std::filesystem::path& dir) {
    const ArchiveInfo info = open_archive(dir);
    std::vector<MetricRow> rows;

    if (info.experiment == "retest") {
        const auto sweep = read_sweep_csv(dir / "sweep.csv");
        std::map<std::string, std::pair<double, int>> fit, order;
        std::vector<std::string> cell_order;
        for (const SweepRow& r : sweep) {
            std::ostringstream key;
            key << "family=" << r.family << ";arena=" << format_double(r.arena_side)
                << ";size=" << r.swarm_size << ";ratio=" << r.ratio_a << ":"
                << r.ratio_b << ";r=" << format_double(r.r_ratio);
            if (!fit.count(key.str())) cell_order.push_back(key.str());
            auto& f = fit[key.str()];
            f.first += r.fitness;
            f.second += 1;
            auto& o = order[key.str()];
            o.first += r.mean_order;
            o.second += 1;
        }
        for (const std::string& key : cell_order) {
            rows.push_back({"mean_fitness", key, fit[key].first / fit[key].second});
            rows.push_back({"mean_order", key, order[key].first / order[key].second});
        }
        return rows;
    }

    const auto evals = read_evals_csv(dir / "evals.csv");
    const auto series = repdetail::series_by_key(evals);

    if (info.experiment == "evolve-swarm") {
        const auto& s = series.at("/");
        const auto curve = metrics::mbf(s);
        const auto a = metrics::aes(s);
        double best = -std::numeric_limits<double>::infinity();
        for (const auto& run : s.runs)
            best = std::max(best, *std::max_element(run.begin(), run.end()));
        rows.push_back({"mbf_final", "", curve.back()});
        rows.push_back({"aes_mean", "", a.mean});
        rows.push_back({"aes_std", "", a.std});
        rows.push_back({"best_fitness", "", best});
        return rows;
    }

    // learn-skills: per learner/skill, plus the cross-learner comparisons
    const ExperimentConfig cfg = parse_config(info.config);
    const auto& sk = std::get<LearnSkillsConfig>(cfg);
    std::map<std::string, std::vector<double>> grid_curves;
    std::vector<double> grid;
    {
        const double spacing = std::max(sk.wo.t_trial, sk.iso.t_trial);
        const double total = std::min(sk.wo.n_trials * sk.wo.t_trial,
                                      sk.iso.n_trials * sk.iso.t_trial);
        for (double t = spacing; t <= total + 1e-9; t += spacing) grid.push_back(t);
    }
    for (const auto& [key, s] : series) {
        const auto curve = metrics::mbf(s);
        const auto a = metrics::aes(s);
        const std::string condition =
            "learner=" + key.substr(0, key.find('/')) +
            ";skill=" + key.substr(key.find('/') + 1);
        rows.push_back({"mbf_final", condition, curve.back()});
        rows.push_back({"aes_mean", condition, a.mean});
        rows.push_back({"aes_std", condition, a.std});
        const double t_trial =
            key.rfind("wo/", 0) == 0 ? sk.wo.t_trial : sk.iso.t_trial;
        if (!grid.empty()) {
            std::vector<double> times(curve.size());
            for (std::size_t i = 0; i < curve.size(); ++i)
                times[i] = static_cast<double>(i + 1) * t_trial;
            grid_curves[key] = metrics::resample_step(curve, times, grid);
        }
    }
    for (const auto& [key, curve] : grid_curves) {
        if (key.rfind("iso/", 0) != 0) continue;
        const std::string skill = key.substr(key.find('/') + 1);
        const auto wo_it = grid_curves.find("wo/" + skill);
        if (wo_it == grid_curves.end()) continue;
        const std::string condition = "skill=" + skill;
        const auto overtake = metrics::tteq(wo_it->second, curve, grid);
        rows.push_back({"tteq_overtake", condition,
                        overtake ? std::optional<double>(*overtake) : std::nullopt});
        const double wo_final = wo_it->second.back();
        rows.push_back({"iso_to_wo_final_ratio", condition,
                        wo_final != 0.0
                            ? std::optional<double>(curve.back() / wo_final)
                            : std::nullopt});
    }
    return rows;
}

// Cross-archive robustness/consistency: every archive contributes one body
// (its morphology label); statistics run per learner/skill over the bodies.
inline std::vector<MetricRow> cross_archive_stats(
    const std::vector<std::filesystem::path>& dirs) {
    if (dirs.size() < 2)
        throw ArchiveError("cross-archive statistics need at least two archives");
    std::map<std::string, std::map<std::string, metrics::MetricSeries>> by_key;
    for (std::size_t i = 0; i < dirs.size(); ++i) {
        const ArchiveInfo info = open_archive(dirs[i]);
        if (info.experiment != "learn-skills")
            throw ArchiveError("cross-archive statistics expect learn-skills archives");
        std::string label = info.config.value("morphology", "body");
        label += "#" + std::to_string(i);
        const auto series = repdetail::series_by_key(read_evals_csv(dirs[i] / "evals.csv"));
        for (const auto& [key, s] : series) by_key[key][label] = s;
    }
    std::vector<MetricRow> rows;
    for (const auto& [key, per_body] : by_key) {
        if (per_body.size() != dirs.size()) continue;  // skill missing somewhere
        const metrics::RobustnessConsistency rc =
            metrics::robustness_consistency(per_body);
        const std::string condition =
            "learner=" + key.substr(0, key.find('/')) +
            ";skill=" + key.substr(key.find('/') + 1);
        rows.push_back({"rob_mbf", condition, rc.rob_mbf});
        rows.push_back({"rob_aes", condition, rc.rob_aes});
        rows.push_back({"con_mbf_mean", condition, rc.con_mbf.mean});
        rows.push_back({"con_mbf_std", condition, rc.con_mbf.std});
        rows.push_back({"con_aes_mean", condition, rc.con_aes.mean});
        rows.push_back({"con_aes_std", condition, rc.con_aes.std});
    }
    return rows;
}

namespace repdetail {

inline void write_pose_csv(const std::filesystem::path& path,
                           const std::vector<metrics::PoseSample>& poses) {
    std::ostringstream os;
    os << "t,x,y,heading\n";
    for (const metrics::PoseSample& p : poses)
        os << format_double(p.t) << ',' << format_double(p.x) << ','
           << format_double(p.y) << ',' << format_double(p.heading) << '\n';
    write_text_file(path, os.str());
}

}  // namespace repdetail

// Plot-ready exports into <archive>/export: recomputed metrics, and per
// experiment kind the field grid, a replayed best trial, or best skill traces.
inline std::filesystem::path export_archive(const std::filesystem::path& dir,
                                            int grid_resolution = 101) {
    const ArchiveInfo info = open_archive(dir);
    const std::filesystem::path out = dir / "export";
    ensure_dir(out);
    write_metrics_csv(out / "metrics.csv", recompute_metrics(dir));

    if (info.experiment == "evolve-swarm") {
        const auto& cfg = std::get<EvolveSwarmConfig>(parse_config(info.config));
        const sim::ScalarField field = sim::make_field(cfg.field, cfg.world.arena_side);
        {
            std::ostringstream os;
            sim::write_field_grid_csv(os, field, grid_resolution);
            write_text_file(out / "field_grid.csv", os.str());
        }
        const sim::ControllerBundle bundle =
            bundle_from_json(read_archive_json(dir, "reservoirs.json"));
        const std::uint64_t replay_seed =
            expdetail::derived_seed(cfg.common.seed, "export/best_trial");
        const sim::TrialLog log =
            sim::run_swarm_trial(bundle, cfg.world, field, replay_seed);
        std::ostringstream os;
        sim::write_trial_csv(os, log);
        write_text_file(out / "best_trial.csv", os.str());
        return out;
    }

    if (info.experiment == "learn-skills") {
        const auto& cfg = std::get<LearnSkillsConfig>(parse_config(info.config));
        const cpg::Morphology morph =
            cpg::morphology_from_json(read_archive_json(dir, "morphology.json"));
        const auto pairs = cpg::neighbor_pairs(morph);
        const int k = morph.joint_count();

        const auto best_per_skill = [](const nlohmann::json& runs) {
            std::map<std::string, nlohmann::json> best;
            for (const auto& run : runs)
                for (const auto& entry : run.at("skills")) {
                    const std::string skill = entry.at("skill").get<std::string>();
                    double f = entry.at("fitness").get<double>();
                    if (!best.count(skill) ||
                        f > best[skill].at("fitness").get<double>()) {
                        best[skill] = entry;
                        if (run.contains("net_weights"))
                            best[skill]["net_weights"] = run.at("net_weights");
                    }
                }
            return best;
        };

        if (std::filesystem::exists(dir / "wo_best.json")) {
            for (const auto& [skill, entry] :
                 best_per_skill(read_archive_json(dir, "wo_best.json"))) {
                cpg::CpgNetwork net(k, pairs);
                net.set_weights(vector_from_json(entry.at("weights")));
                net.set_uniform_state(cfg.wo.initial_state_value);
                const sim::CpgDriveTrial td =
                    sim::cpg_drive_trial(std::move(net), cfg.drive, cfg.wo.t_trial);
                repdetail::write_pose_csv(out / ("wo_" + skill + "_trace.csv"),
                                          td.poses);
            }
        }
        if (std::filesystem::exists(dir / "iso_best_states.json")) {
            for (const auto& [skill, entry] :
                 best_per_skill(read_archive_json(dir, "iso_best_states.json"))) {
                cpg::CpgNetwork net(k, pairs);
                net.set_weights(vector_from_json(entry.at("net_weights")));
                net.set_initial_state(vector_from_json(entry.at("state")));
                const sim::CpgDriveTrial td =
                    sim::cpg_drive_trial(std::move(net), cfg.drive, cfg.iso.t_eval);
                repdetail::write_pose_csv(out / ("iso_" + skill + "_trace.csv"),
                                          td.poses);
            }
        }
        return out;
    }

    // retest: pivot the sweep log into one table per family
    const auto sweep = read_sweep_csv(dir / "sweep.csv");
    std::map<std::string, std::vector<const SweepRow*>> by_family;
    for (const SweepRow& r : sweep) by_family[r.family].push_back(&r);
    for (const auto& [family, rows] : by_family) {
        std::map<std::string, std::pair<double, int>> cells;
        std::vector<std::string> order;
        for (const SweepRow* r : rows) {
            std::ostringstream key;
            if (family == "ratio")
                key << r->ratio_a << ":" << r->ratio_b << ','
                    << format_double(r->r_ratio);
            else if (family == "arena")
                key << format_double(r->arena_side);
            else
                key << r->swarm_size;
            if (!cells.count(key.str())) order.push_back(key.str());
            auto& c = cells[key.str()];
            c.first += r->fitness;
            c.second += 1;
        }
        std::ostringstream os;
        os << (family == "ratio" ? "ratio,r_ratio,mean_fitness\n"
               : family == "arena" ? "arena_side,mean_fitness\n"
                                   : "swarm_size,mean_fitness\n");
        for (const std::string& key : order)
            os << key << ',' << format_double(cells[key].first / cells[key].second)
               << '\n';
        write_text_file(out / ("retest_" + family + ".csv"), os.str());
    }
    return out;
}

}  // namespace evolab::exp
