#pragma once

// Run archives: one directory per experiment run.
//
// Every archive holds config.json (canonical, defaults materialized) and
// summary.json (headline numbers plus the config hash). Experiment-specific
// logs are plain CSV with headers; numbers print with %.17g so re-reading is
// lossless and byte-identical across worker counts.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "evolab/ctrl/regulatory.hpp"
#include "evolab/ctrl/reservoir.hpp"
#include "evolab/exp/io.hpp"
#include "evolab/sim/trial.hpp"

namespace evolab::exp {

struct ArchiveError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ArchiveInfo {
    std::filesystem::path dir;
    nlohmann::json config;
    nlohmann::json summary;
    std::string experiment;
};

inline void write_archive_json(const std::filesystem::path& dir, const std::string& name,
                               const nlohmann::json& j) {
    ensure_dir(dir);
    write_text_file(dir / name, j.dump(2) + "\n");
}

inline nlohmann::json read_archive_json(const std::filesystem::path& dir,
                                        const std::string& name) {
    const std::filesystem::path p = dir / name;
    if (!std::filesystem::exists(p))
        throw ArchiveError("archive file missing: " + p.string());
    try {
        return nlohmann::json::parse(read_text_file(p));
    } catch (const nlohmann::json::exception& e) {
        throw ArchiveError("archive file unreadable: " + p.string() + ": " + e.what());
    }
}

inline ArchiveInfo open_archive(const std::filesystem::path& dir) {
    ArchiveInfo info;
    info.dir = dir;
    info.config = read_archive_json(dir, "config.json");
    info.summary = read_archive_json(dir, "summary.json");
    if (!info.config.contains("experiment"))
        throw ArchiveError("archive config has no experiment field: " + dir.string());
    info.experiment = info.config.at("experiment").get<std::string>();
    return info;
}

// --- evaluation log -------------------------------------------------------------

// One row per optimizer-visible evaluation, in evaluation order. `learner`
// and `skill` stay empty for swarm evolution; `time` is cumulative simulated
// interaction time after the evaluation.
struct EvalRow {
    int run = 0;
    std::string learner;
    std::string skill;
    long trial = 0;  // 0-based global evaluation index within the run
    int generation = 0;
    double time = 0.0;
    double fitness = 0.0;
};

inline void write_evals_csv(const std::filesystem::path& path,
                            const std::vector<EvalRow>& rows) {
    std::ostringstream os;
    os << "run_id,learner,skill,trial,generation,time,fitness\n";
    for (const EvalRow& r : rows)
        os << r.run << ',' << r.learner << ',' << r.skill << ',' << r.trial << ','
           << r.generation << ',' << format_double(r.time) << ','
           << format_double(r.fitness) << '\n';
    write_text_file(path, os.str());
}

inline std::vector<EvalRow> read_evals_csv(const std::filesystem::path& path) {
    const auto table = read_csv(path);
    if (table.empty() || table.front().size() != 7)
        throw ArchiveError("bad evaluation log: " + path.string());
    std::vector<EvalRow> rows;
    rows.reserve(table.size() - 1);
    for (std::size_t i = 1; i < table.size(); ++i) {
        const auto& t = table[i];
        if (t.size() != 7) throw ArchiveError("ragged evaluation log: " + path.string());
        EvalRow r;
        r.run = std::stoi(t[0]);
        r.learner = t[1];
        r.skill = t[2];
        r.trial = std::stol(t[3]);
        r.generation = std::stoi(t[4]);
        r.time = std::stod(t[5]);
        r.fitness = std::stod(t[6]);
        rows.push_back(std::move(r));
    }
    return rows;
}

// --- per-generation statistics ---------------------------------------------------

// Optional fields are written as empty cells: sigma and the eigenvalue pair
// only exist for covariance-adapting runs, the genotype spreads only for
// two-group controllers (one value per 18-gene output block).
struct GenStatRow {
    int run = 0;
    int generation = 0;
    double best = 0.0;
    double mean = 0.0;
    double std = 0.0;
    std::optional<double> sigma;
    std::optional<double> min_eigenvalue;
    std::optional<double> max_eigenvalue;
    std::optional<double> genotype_std_a;
    std::optional<double> genotype_std_b;
};

inline void write_gen_stats_csv(const std::filesystem::path& path,
                                const std::vector<GenStatRow>& rows) {
    std::ostringstream os;
    os << "run_id,generation,best_fitness,mean_fitness,fitness_std,sigma,"
          "min_eigenvalue,max_eigenvalue,genotype_std_a,genotype_std_b\n";
    const auto opt = [](const std::optional<double>& v) {
        return v ? format_double(*v) : std::string();
    };
    for (const GenStatRow& r : rows)
        os << r.run << ',' << r.generation << ',' << format_double(r.best) << ','
           << format_double(r.mean) << ',' << format_double(r.std) << ','
           << opt(r.sigma) << ',' << opt(r.min_eigenvalue) << ','
           << opt(r.max_eigenvalue) << ',' << opt(r.genotype_std_a) << ','
           << opt(r.genotype_std_b) << '\n';
    write_text_file(path, os.str());
}

inline std::vector<GenStatRow> read_gen_stats_csv(const std::filesystem::path& path) {
    const auto table = read_csv(path);
    if (table.empty() || table.front().size() != 10)
        throw ArchiveError("bad generation log: " + path.string());
    const auto opt = [](const std::string& s) -> std::optional<double> {
        if (s.empty()) return std::nullopt;
        return std::stod(s);
    };
    std::vector<GenStatRow> rows;
    for (std::size_t i = 1; i < table.size(); ++i) {
        const auto& t = table[i];
        if (t.size() != 10) throw ArchiveError("ragged generation log: " + path.string());
        GenStatRow r;
        r.run = std::stoi(t[0]);
        r.generation = std::stoi(t[1]);
        r.best = std::stod(t[2]);
        r.mean = std::stod(t[3]);
        r.std = std::stod(t[4]);
        r.sigma = opt(t[5]);
        r.min_eigenvalue = opt(t[6]);
        r.max_eigenvalue = opt(t[7]);
        r.genotype_std_a = opt(t[8]);
        r.genotype_std_b = opt(t[9]);
        rows.push_back(r);
    }
    return rows;
}

// --- controller bundle / genotype -------------------------------------------------

inline nlohmann::json bundle_to_json(const sim::ControllerBundle& bundle) {
    nlohmann::json reservoirs = nlohmann::json::array();
    for (const auto& r : bundle.reservoirs) reservoirs.push_back(ctrl::reservoir_to_json(r));
    nlohmann::json j = {
        {"mode", bundle.mode == sim::VelocityMode::forward_only ? "forward_only"
                                                                : "symmetric"},
        {"reservoirs", reservoirs}};
    if (bundle.policy) {
        const auto& p = *bundle.policy;
        j["policy"] = {{"high_threshold", p.high_threshold},
                       {"low_threshold", p.low_threshold},
                       {"p_high", p.p_high},
                       {"p_mid", p.p_mid},
                       {"p_low", p.p_low},
                       {"update_period", p.update_period}};
    }
    return j;
}

inline sim::ControllerBundle bundle_from_json(const nlohmann::json& j) {
    sim::ControllerBundle bundle;
    const std::string mode = j.at("mode").get<std::string>();
    if (mode == "forward_only")
        bundle.mode = sim::VelocityMode::forward_only;
    else if (mode == "symmetric")
        bundle.mode = sim::VelocityMode::symmetric;
    else
        throw ArchiveError("bundle: unknown velocity mode '" + mode + "'");
    for (const auto& r : j.at("reservoirs"))
        bundle.reservoirs.push_back(ctrl::reservoir_from_json(r));
    if (j.contains("policy")) {
        const auto& p = j.at("policy");
        ctrl::RegulatoryPolicy policy;
        policy.high_threshold = p.at("high_threshold").get<double>();
        policy.low_threshold = p.at("low_threshold").get<double>();
        policy.p_high = p.at("p_high").get<double>();
        policy.p_mid = p.at("p_mid").get<double>();
        policy.p_low = p.at("p_low").get<double>();
        policy.update_period = p.at("update_period").get<double>();
        bundle.policy = policy;
    }
    bundle.validate();
    return bundle;
}

inline nlohmann::json vector_to_json(const Eigen::VectorXd& v) {
    nlohmann::json arr = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
    return arr;
}

inline Eigen::VectorXd vector_from_json(const nlohmann::json& arr) {
    if (!arr.is_array()) throw ArchiveError("expected a JSON array of numbers");
    Eigen::VectorXd v(static_cast<Eigen::Index>(arr.size()));
    for (std::size_t i = 0; i < arr.size(); ++i)
        v[static_cast<Eigen::Index>(i)] = arr.at(i).get<double>();
    return v;
}

// --- re-test sweep log -------------------------------------------------------------

struct SweepRow {
    std::string family;  // "ratio", "arena", "size"
    double arena_side = 0.0;
    int swarm_size = 0;
    int ratio_a = 0;
    int ratio_b = 0;
    double r_ratio = 0.0;
    double spawn_radius = 0.0;
    int repetition = 0;
    std::uint64_t seed = 0;
    double fitness = 0.0;
    double mean_order = 0.0;
    std::uint64_t collisions = 0;
};

inline void write_sweep_csv(const std::filesystem::path& path,
                            const std::vector<SweepRow>& rows) {
    std::ostringstream os;
    os << "family,arena_side,swarm_size,ratio_a,ratio_b,r_ratio,spawn_radius,"
          "repetition,seed,fitness,mean_order,collisions\n";
    for (const SweepRow& r : rows)
        os << r.family << ',' << format_double(r.arena_side) << ',' << r.swarm_size
           << ',' << r.ratio_a << ',' << r.ratio_b << ',' << format_double(r.r_ratio)
           << ',' << format_double(r.spawn_radius) << ',' << r.repetition << ','
           << r.seed << ',' << format_double(r.fitness) << ','
           << format_double(r.mean_order) << ',' << r.collisions << '\n';
    write_text_file(path, os.str());
}

inline std::vector<SweepRow> read_sweep_csv(const std::filesystem::path& path) {
    const auto table = read_csv(path);
    if (table.empty() || table.front().size() != 12)
        throw ArchiveError("bad sweep log: " + path.string());
    std::vector<SweepRow> rows;
    for (std::size_t i = 1; i < table.size(); ++i) {
        const auto& t = table[i];
        if (t.size() != 12) throw ArchiveError("ragged sweep log: " + path.string());
        SweepRow r;
        r.family = t[0];
        r.arena_side = std::stod(t[1]);
        r.swarm_size = std::stoi(t[2]);
        r.ratio_a = std::stoi(t[3]);
        r.ratio_b = std::stoi(t[4]);
        r.r_ratio = std::stod(t[5]);
        r.spawn_radius = std::stod(t[6]);
        r.repetition = std::stoi(t[7]);
        r.seed = std::stoull(t[8]);
        r.fitness = std::stod(t[9]);
        r.mean_order = std::stod(t[10]);
        r.collisions = std::stoull(t[11]);
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace evolab::exp
