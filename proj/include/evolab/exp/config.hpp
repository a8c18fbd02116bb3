#pragma once

// Experiment configuration: a strict JSON schema with materialized defaults.
//
// Unknown keys are errors (configs fail loudly instead of silently ignoring
// typos). parse_config returns the typed config plus its canonical JSON form
// with every default filled in; archives store that canonical form, and its
// hash identifies the run.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "evolab/metrics/skills.hpp"
#include "evolab/sim/drive.hpp"
#include "evolab/sim/field.hpp"
#include "evolab/sim/trial.hpp"
#include "evolab/sim/world.hpp"

namespace evolab::exp {

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& message, std::string context_arg = "")
        : std::runtime_error(message), context(std::move(context_arg)) {}
    std::string context;
};

namespace cfgdetail {

inline void check_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed,
                       const std::string& context) {
    if (!j.is_object()) throw ConfigError("expected an object", context);
    for (const auto& [key, _] : j.items()) {
        bool ok = false;
        for (const char* a : allowed)
            if (key == a) {
                ok = true;
                break;
            }
        if (!ok) throw ConfigError("unknown key '" + key + "'", context);
    }
}

template <typename T>
T get_or(const nlohmann::json& j, const char* key, T fallback, const std::string& context) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError(std::string("bad value for '") + key + "'", context);
    }
}

template <typename T>
T require(const nlohmann::json& j, const char* key, const std::string& context) {
    if (!j.contains(key)) throw ConfigError(std::string("missing key '") + key + "'", context);
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError(std::string("bad value for '") + key + "'", context);
    }
}

}  // namespace cfgdetail

// --- shared sections ----------------------------------------------------------

struct CommonConfig {
    std::string experiment;
    std::uint64_t seed = 1;
    int runs = 1;
    int workers = 1;
    std::string out_dir;  // empty: derived from the output root and run name
    std::string name;     // archive directory stem; empty: derived
};

struct ControllerConfig {
    std::string mode = "homogeneous";  // or "heterogeneous"
    double hidden_range = 2.0;
    bool regulatory = false;

    int reservoir_count() const { return mode == "heterogeneous" ? 2 : 1; }
    sim::VelocityMode velocity_mode() const {
        return mode == "homogeneous" ? sim::VelocityMode::forward_only
                                     : sim::VelocityMode::symmetric;
    }
};

struct DeParams {
    int population = 25;
    int generations = 100;
    double scale_f = 0.5;
    double crossover_rate = 0.9;
    int repeats = 2;  // min-aggregated
    double lower = -10.0;
    double upper = 10.0;
};

struct CmaesParams {
    int lambda = 30;
    int generations = 100;
    double sigma0 = 1.0;
    int repeats = 3;  // median-aggregated
    double mean_lower = -5.0;
    double mean_upper = 5.0;
    double lower = -10.0;
    double upper = 10.0;
};

struct WoParams {
    int lambda = 30;
    int mu = 10;
    double scale_f = 0.5;
    double crossover_rate = 0.9;
    int n_trials = 300;       // total evaluations; logs truncate to this count
    double t_trial = 60.0;    // evaluation window is the whole trial
    double initial_state_value = 0.70710678118654752;  // every neuron, each trial
};

struct IsoParams {
    int n_trials = 150;
    double t_trial = 120.0;
    double t_eval = 60.0;
    double sample_period = 0.1;
};

struct SweepParams {
    std::vector<double> arenas;                     // arena-side sweep
    std::vector<int> swarm_sizes;                   // swarm-size sweep
    std::vector<std::pair<int, int>> ratios;        // group-ratio columns
    std::vector<double> r_ratios;                   // spawn-distance rows
    double spawn_radius_base = 12.0;                // r = r_ratio * base
    int repetitions = 20;
    double duration = 600.0;
};

// --- experiments ----------------------------------------------------------------

struct EvolveSwarmConfig {
    CommonConfig common;
    sim::WorldConfig world;
    sim::FieldKind field = sim::FieldKind::center;
    ControllerConfig controller;
    std::string optimizer;  // "de" or "cmaes"
    DeParams de;
    CmaesParams cma;
};

struct LearnSkillsConfig {
    CommonConfig common;
    std::string morphology = "spider";  // preset name or path to a .json tree
    std::vector<metrics::SkillKind> skills = {metrics::SkillKind::gait,
                                              metrics::SkillKind::rotate_ccw,
                                              metrics::SkillKind::rotate_cw};
    std::string learner = "both";  // "weights", "initial-state", "both"
    WoParams wo;
    IsoParams iso;
    sim::DriveConfig drive;
};

struct RetestConfig {
    CommonConfig common;
    std::string archive;  // evolve-swarm archive to re-test
    SweepParams sweep;
};

using ExperimentConfig = std::variant<EvolveSwarmConfig, LearnSkillsConfig, RetestConfig>;

inline const CommonConfig& common_of(const ExperimentConfig& cfg) {
    return std::visit([](const auto& c) -> const CommonConfig& { return c.common; }, cfg);
}

inline CommonConfig& common_of(ExperimentConfig& cfg) {
    return std::visit([](auto& c) -> CommonConfig& { return c.common; }, cfg);
}

// --- JSON emit (canonical form: all defaults materialized) ---------------------

inline nlohmann::json world_to_json(const sim::WorldConfig& w) {
    return {{"arena_side", w.arena_side},
            {"swarm_size", w.swarm_size},
            {"spawn_radius", w.spawn_radius},
            {"spawn_box_side", w.spawn_box_side},
            {"dt", w.dt},
            {"control_period", w.control_period},
            {"duration", w.duration},
            {"wheel_speed_max", w.wheel_speed_max},
            {"robot_radius", w.robot_radius},
            {"axle_width", w.axle_width},
            {"sensor_range", w.sensor_range},
            {"empty_quadrant_distance", w.empty_quadrant_distance},
            {"group_ratio", {w.group_ratio.first, w.group_ratio.second}}};
}

inline nlohmann::json config_to_json(const ExperimentConfig& cfg);

namespace cfgdetail {

inline nlohmann::json common_to_json(const CommonConfig& c) {
    return {{"experiment", c.experiment}, {"seed", c.seed},   {"runs", c.runs},
            {"workers", c.workers},       {"out_dir", c.out_dir}, {"name", c.name}};
}

}  // namespace cfgdetail

inline nlohmann::json config_to_json(const EvolveSwarmConfig& c) {
    nlohmann::json j = cfgdetail::common_to_json(c.common);
    j["world"] = world_to_json(c.world);
    j["field"] = sim::to_string(c.field);
    j["controller"] = {{"mode", c.controller.mode},
                       {"hidden_range", c.controller.hidden_range},
                       {"regulatory", c.controller.regulatory}};
    if (c.optimizer == "de") {
        j["optimizer"] = {{"kind", "de"},
                          {"population", c.de.population},
                          {"generations", c.de.generations},
                          {"scale_f", c.de.scale_f},
                          {"crossover_rate", c.de.crossover_rate},
                          {"repeats", c.de.repeats},
                          {"lower", c.de.lower},
                          {"upper", c.de.upper}};
    } else {
        j["optimizer"] = {{"kind", "cmaes"},
                          {"lambda", c.cma.lambda},
                          {"generations", c.cma.generations},
                          {"sigma0", c.cma.sigma0},
                          {"repeats", c.cma.repeats},
                          {"mean_lower", c.cma.mean_lower},
                          {"mean_upper", c.cma.mean_upper},
                          {"lower", c.cma.lower},
                          {"upper", c.cma.upper}};
    }
    return j;
}

inline nlohmann::json config_to_json(const LearnSkillsConfig& c) {
    nlohmann::json j = cfgdetail::common_to_json(c.common);
    j["morphology"] = c.morphology;
    nlohmann::json skills = nlohmann::json::array();
    for (metrics::SkillKind s : c.skills) skills.push_back(metrics::to_string(s));
    j["skills"] = skills;
    j["learner"] = c.learner;
    j["wo"] = {{"lambda", c.wo.lambda},
               {"mu", c.wo.mu},
               {"scale_f", c.wo.scale_f},
               {"crossover_rate", c.wo.crossover_rate},
               {"n_trials", c.wo.n_trials},
               {"t_trial", c.wo.t_trial},
               {"initial_state_value", c.wo.initial_state_value}};
    j["iso"] = {{"n_trials", c.iso.n_trials},
                {"t_trial", c.iso.t_trial},
                {"t_eval", c.iso.t_eval},
                {"sample_period", c.iso.sample_period}};
    j["drive"] = {{"dt", c.drive.dt},
                  {"control_period", c.drive.control_period},
                  {"wheel_speed_max", c.drive.wheel_speed_max},
                  {"axle_width", c.drive.axle_width}};
    return j;
}

inline nlohmann::json config_to_json(const RetestConfig& c) {
    nlohmann::json j = cfgdetail::common_to_json(c.common);
    j["archive"] = c.archive;
    nlohmann::json ratios = nlohmann::json::array();
    for (auto [a, b] : c.sweep.ratios) ratios.push_back({a, b});
    j["sweep"] = {{"arenas", c.sweep.arenas},
                  {"swarm_sizes", c.sweep.swarm_sizes},
                  {"ratios", ratios},
                  {"r_ratios", c.sweep.r_ratios},
                  {"spawn_radius_base", c.sweep.spawn_radius_base},
                  {"repetitions", c.sweep.repetitions},
                  {"duration", c.sweep.duration}};
    return j;
}

inline nlohmann::json config_to_json(const ExperimentConfig& cfg) {
    return std::visit([](const auto& c) { return config_to_json(c); }, cfg);
}

// --- JSON parse -----------------------------------------------------------------

namespace cfgdetail {

inline CommonConfig parse_common(const nlohmann::json& j, const std::string& experiment) {
    CommonConfig c;
    c.experiment = experiment;
    c.seed = get_or<std::uint64_t>(j, "seed", 1, "config");
    c.runs = get_or<int>(j, "runs", 1, "config");
    c.workers = get_or<int>(j, "workers", 1, "config");
    c.out_dir = get_or<std::string>(j, "out_dir", "", "config");
    c.name = get_or<std::string>(j, "name", "", "config");
    if (c.runs <= 0) throw ConfigError("runs must be > 0", "config");
    if (c.workers <= 0) throw ConfigError("workers must be > 0", "config");
    return c;
}

inline sim::WorldConfig parse_world(const nlohmann::json& j, sim::WorldConfig w) {
    check_keys(j,
               {"arena_side", "swarm_size", "spawn_radius", "spawn_box_side", "dt",
                "control_period", "duration", "wheel_speed_max", "robot_radius",
                "axle_width", "sensor_range", "empty_quadrant_distance", "group_ratio"},
               "world");
    w.arena_side = get_or(j, "arena_side", w.arena_side, "world");
    w.swarm_size = get_or(j, "swarm_size", w.swarm_size, "world");
    w.spawn_radius = get_or(j, "spawn_radius", w.spawn_radius, "world");
    w.spawn_box_side = get_or(j, "spawn_box_side", w.spawn_box_side, "world");
    w.dt = get_or(j, "dt", w.dt, "world");
    w.control_period = get_or(j, "control_period", w.control_period, "world");
    w.duration = get_or(j, "duration", w.duration, "world");
    w.wheel_speed_max = get_or(j, "wheel_speed_max", w.wheel_speed_max, "world");
    w.robot_radius = get_or(j, "robot_radius", w.robot_radius, "world");
    w.axle_width = get_or(j, "axle_width", w.axle_width, "world");
    w.sensor_range = get_or(j, "sensor_range", w.sensor_range, "world");
    w.empty_quadrant_distance =
        get_or(j, "empty_quadrant_distance", w.empty_quadrant_distance, "world");
    if (j.contains("group_ratio")) {
        const auto& r = j.at("group_ratio");
        if (!r.is_array() || r.size() != 2)
            throw ConfigError("group_ratio must be a two-entry array", "world");
        w.group_ratio = {r.at(0).get<int>(), r.at(1).get<int>()};
    }
    try {
        w.validate();
    } catch (const std::exception& e) {
        throw ConfigError(e.what(), "world");
    }
    return w;
}

}  // namespace cfgdetail

inline EvolveSwarmConfig parse_evolve_swarm(const nlohmann::json& j) {
    using namespace cfgdetail;
    check_keys(j,
               {"experiment", "seed", "runs", "workers", "out_dir", "name", "world",
                "field", "controller", "optimizer"},
               "config");
    EvolveSwarmConfig c;
    c.common = parse_common(j, "evolve-swarm");
    if (j.contains("world")) c.world = parse_world(j.at("world"), c.world);
    try {
        c.field = sim::field_kind_from_string(
            get_or<std::string>(j, "field", "center", "config"));
    } catch (const std::exception& e) {
        throw ConfigError(e.what(), "field");
    }
    if (j.contains("controller")) {
        const auto& k = j.at("controller");
        check_keys(k, {"mode", "hidden_range", "regulatory"}, "controller");
        c.controller.mode = get_or<std::string>(k, "mode", c.controller.mode, "controller");
        c.controller.hidden_range =
            get_or(k, "hidden_range", c.controller.hidden_range, "controller");
        c.controller.regulatory =
            get_or(k, "regulatory", c.controller.regulatory, "controller");
    }
    if (c.controller.mode != "homogeneous" && c.controller.mode != "heterogeneous")
        throw ConfigError("mode must be homogeneous or heterogeneous", "controller");
    if (c.controller.regulatory && c.controller.mode != "heterogeneous")
        throw ConfigError("regulatory switching needs heterogeneous mode", "controller");
    if (!(c.controller.hidden_range > 0.0))
        throw ConfigError("hidden_range must be > 0", "controller");

    const nlohmann::json opt = j.contains("optimizer") ? j.at("optimizer")
                                                       : nlohmann::json{{"kind", "de"}};
    c.optimizer = cfgdetail::get_or<std::string>(opt, "kind", "de", "optimizer");
    if (c.optimizer == "de") {
        check_keys(opt,
                   {"kind", "population", "generations", "scale_f", "crossover_rate",
                    "repeats", "lower", "upper"},
                   "optimizer");
        c.de.population = get_or(opt, "population", c.de.population, "optimizer");
        c.de.generations = get_or(opt, "generations", c.de.generations, "optimizer");
        c.de.scale_f = get_or(opt, "scale_f", c.de.scale_f, "optimizer");
        c.de.crossover_rate = get_or(opt, "crossover_rate", c.de.crossover_rate, "optimizer");
        c.de.repeats = get_or(opt, "repeats", c.de.repeats, "optimizer");
        c.de.lower = get_or(opt, "lower", c.de.lower, "optimizer");
        c.de.upper = get_or(opt, "upper", c.de.upper, "optimizer");
        if (c.de.repeats <= 0) throw ConfigError("repeats must be > 0", "optimizer");
    } else if (c.optimizer == "cmaes") {
        check_keys(opt,
                   {"kind", "lambda", "generations", "sigma0", "repeats", "mean_lower",
                    "mean_upper", "lower", "upper"},
                   "optimizer");
        c.cma.lambda = get_or(opt, "lambda", c.cma.lambda, "optimizer");
        c.cma.generations = get_or(opt, "generations", c.cma.generations, "optimizer");
        c.cma.sigma0 = get_or(opt, "sigma0", c.cma.sigma0, "optimizer");
        c.cma.repeats = get_or(opt, "repeats", c.cma.repeats, "optimizer");
        c.cma.mean_lower = get_or(opt, "mean_lower", c.cma.mean_lower, "optimizer");
        c.cma.mean_upper = get_or(opt, "mean_upper", c.cma.mean_upper, "optimizer");
        c.cma.lower = get_or(opt, "lower", c.cma.lower, "optimizer");
        c.cma.upper = get_or(opt, "upper", c.cma.upper, "optimizer");
        if (c.cma.repeats <= 0) throw ConfigError("repeats must be > 0", "optimizer");
    } else {
        throw ConfigError("optimizer kind must be de or cmaes", "optimizer");
    }
    return c;
}

inline LearnSkillsConfig parse_learn_skills(const nlohmann::json& j) {
    using namespace cfgdetail;
    check_keys(j,
               {"experiment", "seed", "runs", "workers", "out_dir", "name", "morphology",
                "skills", "learner", "wo", "iso", "drive"},
               "config");
    LearnSkillsConfig c;
    c.common = parse_common(j, "learn-skills");
    c.morphology = get_or<std::string>(j, "morphology", c.morphology, "config");
    if (j.contains("skills")) {
        c.skills.clear();
        for (const auto& s : j.at("skills")) {
            try {
                c.skills.push_back(metrics::skill_from_string(s.get<std::string>()));
            } catch (const std::exception& e) {
                throw ConfigError(e.what(), "skills");
            }
        }
        if (c.skills.empty()) throw ConfigError("skills must not be empty", "skills");
    }
    c.learner = get_or<std::string>(j, "learner", c.learner, "config");
    if (c.learner != "weights" && c.learner != "initial-state" && c.learner != "both")
        throw ConfigError("learner must be weights, initial-state, or both", "config");
    if (j.contains("wo")) {
        const auto& w = j.at("wo");
        check_keys(w,
                   {"lambda", "mu", "scale_f", "crossover_rate", "n_trials", "t_trial",
                    "initial_state_value"},
                   "wo");
        c.wo.lambda = get_or(w, "lambda", c.wo.lambda, "wo");
        c.wo.mu = get_or(w, "mu", c.wo.mu, "wo");
        c.wo.scale_f = get_or(w, "scale_f", c.wo.scale_f, "wo");
        c.wo.crossover_rate = get_or(w, "crossover_rate", c.wo.crossover_rate, "wo");
        c.wo.n_trials = get_or(w, "n_trials", c.wo.n_trials, "wo");
        c.wo.t_trial = get_or(w, "t_trial", c.wo.t_trial, "wo");
        c.wo.initial_state_value =
            get_or(w, "initial_state_value", c.wo.initial_state_value, "wo");
        if (c.wo.n_trials < c.wo.lambda)
            throw ConfigError("n_trials must cover at least one generation", "wo");
    }
    if (j.contains("iso")) {
        const auto& w = j.at("iso");
        check_keys(w, {"n_trials", "t_trial", "t_eval", "sample_period"}, "iso");
        c.iso.n_trials = get_or(w, "n_trials", c.iso.n_trials, "iso");
        c.iso.t_trial = get_or(w, "t_trial", c.iso.t_trial, "iso");
        c.iso.t_eval = get_or(w, "t_eval", c.iso.t_eval, "iso");
        c.iso.sample_period = get_or(w, "sample_period", c.iso.sample_period, "iso");
    }
    if (j.contains("drive")) {
        const auto& d = j.at("drive");
        check_keys(d, {"dt", "control_period", "wheel_speed_max", "axle_width"}, "drive");
        c.drive.dt = get_or(d, "dt", c.drive.dt, "drive");
        c.drive.control_period = get_or(d, "control_period", c.drive.control_period, "drive");
        c.drive.wheel_speed_max =
            get_or(d, "wheel_speed_max", c.drive.wheel_speed_max, "drive");
        c.drive.axle_width = get_or(d, "axle_width", c.drive.axle_width, "drive");
        try {
            c.drive.validate();
        } catch (const std::exception& e) {
            throw ConfigError(e.what(), "drive");
        }
    }
    return c;
}

inline RetestConfig parse_retest(const nlohmann::json& j) {
    using namespace cfgdetail;
    check_keys(j, {"experiment", "seed", "runs", "workers", "out_dir", "name", "archive",
                   "sweep"},
               "config");
    RetestConfig c;
    c.common = parse_common(j, "retest");
    c.archive = get_or<std::string>(j, "archive", "", "config");
    if (j.contains("sweep")) {
        const auto& s = j.at("sweep");
        check_keys(s,
                   {"arenas", "swarm_sizes", "ratios", "r_ratios", "spawn_radius_base",
                    "repetitions", "duration"},
                   "sweep");
        c.sweep.arenas = get_or<std::vector<double>>(s, "arenas", {}, "sweep");
        c.sweep.swarm_sizes = get_or<std::vector<int>>(s, "swarm_sizes", {}, "sweep");
        if (s.contains("ratios")) {
            c.sweep.ratios.clear();
            for (const auto& r : s.at("ratios")) {
                if (!r.is_array() || r.size() != 2)
                    throw ConfigError("each ratio must be a two-entry array", "sweep");
                c.sweep.ratios.emplace_back(r.at(0).get<int>(), r.at(1).get<int>());
            }
        }
        c.sweep.r_ratios = get_or<std::vector<double>>(s, "r_ratios", {}, "sweep");
        c.sweep.spawn_radius_base =
            get_or(s, "spawn_radius_base", c.sweep.spawn_radius_base, "sweep");
        c.sweep.repetitions = get_or(s, "repetitions", c.sweep.repetitions, "sweep");
        c.sweep.duration = get_or(s, "duration", c.sweep.duration, "sweep");
        if (c.sweep.repetitions <= 0)
            throw ConfigError("repetitions must be > 0", "sweep");
    }
    return c;
}

// The configuration that determines results: operational keys (output
// location, archive name, worker count) stripped. Hashing this keeps the
// config hash stable across worker counts and output locations.
inline nlohmann::json scientific_config(nlohmann::json canonical) {
    canonical.erase("out_dir");
    canonical.erase("name");
    canonical.erase("workers");
    return canonical;
}

inline ExperimentConfig parse_config(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object", "config");
    const std::string experiment =
        cfgdetail::require<std::string>(j, "experiment", "config");
    if (experiment == "evolve-swarm") return parse_evolve_swarm(j);
    if (experiment == "learn-skills") return parse_learn_skills(j);
    if (experiment == "retest") return parse_retest(j);
    throw ConfigError("experiment must be evolve-swarm, learn-skills, or retest", "config");
}

// --- presets --------------------------------------------------------------------

inline std::vector<std::string> preset_names() {
    return {"evolve-desk", "evolve-full", "hetero-desk", "hetero-full",
            "skills-desk", "skills-full", "retest-desk", "retest-full"};
}

inline nlohmann::json preset_config(const std::string& name) {
    if (name == "evolve-desk")
        return {{"experiment", "evolve-swarm"},
                {"seed", 1},
                {"world", {{"arena_side", 10.0}, {"swarm_size", 14}, {"spawn_radius", 3.0},
                           {"duration", 120.0}, {"group_ratio", {1, 0}}}},
                {"field", "center"},
                {"controller", {{"mode", "homogeneous"}, {"hidden_range", 2.0}}},
                {"optimizer", {{"kind", "de"}, {"population", 25}, {"generations", 30},
                               {"repeats", 2}}}};
    if (name == "evolve-full")
        return {{"experiment", "evolve-swarm"},
                {"seed", 1},
                {"world", {{"arena_side", 10.0}, {"swarm_size", 14}, {"spawn_radius", 3.0},
                           {"duration", 600.0}, {"group_ratio", {1, 0}}}},
                {"field", "center"},
                {"controller", {{"mode", "homogeneous"}, {"hidden_range", 2.0}}},
                {"optimizer", {{"kind", "de"}, {"population", 25}, {"generations", 100},
                               {"repeats", 2}}}};
    if (name == "hetero-desk")
        return {{"experiment", "evolve-swarm"},
                {"seed", 1},
                {"world", {{"arena_side", 30.0}, {"swarm_size", 20}, {"spawn_radius", 12.0},
                           {"duration", 120.0}, {"group_ratio", {1, 1}}}},
                {"field", "center"},
                {"controller", {{"mode", "heterogeneous"}, {"hidden_range", 1.0}}},
                {"optimizer", {{"kind", "cmaes"}, {"lambda", 12}, {"generations", 6},
                               {"sigma0", 1.0}, {"repeats", 1}}}};
    if (name == "hetero-full")
        return {{"experiment", "evolve-swarm"},
                {"seed", 1},
                {"world", {{"arena_side", 30.0}, {"swarm_size", 20}, {"spawn_radius", 12.0},
                           {"duration", 600.0}, {"group_ratio", {1, 1}}}},
                {"field", "center"},
                {"controller", {{"mode", "heterogeneous"}, {"hidden_range", 1.0}}},
                {"optimizer", {{"kind", "cmaes"}, {"lambda", 30}, {"generations", 100},
                               {"sigma0", 1.0}, {"repeats", 3}}}};
    if (name == "skills-desk")
        return {{"experiment", "learn-skills"},
                {"seed", 1},
                {"morphology", "spider"},
                {"learner", "both"},
                {"wo", {{"n_trials", 100}, {"t_trial", 60.0}}},
                {"iso", {{"n_trials", 5}, {"t_trial", 120.0}, {"t_eval", 60.0}}}};
    if (name == "skills-full")
        return {{"experiment", "learn-skills"},
                {"seed", 1},
                {"morphology", "spider"},
                {"learner", "both"},
                {"wo", {{"n_trials", 300}, {"t_trial", 60.0}}},
                {"iso", {{"n_trials", 150}, {"t_trial", 120.0}, {"t_eval", 60.0}}}};
    if (name == "retest-desk")
        return {{"experiment", "retest"},
                {"seed", 1},
                {"sweep",
                 {{"ratios", {{4, 0}, {3, 1}, {2, 2}, {1, 3}, {0, 4}}},
                  {"r_ratios", {0.0, 0.25, 0.5, 0.75, 1.0, 1.25}},
                  {"spawn_radius_base", 12.0},
                  {"repetitions", 20},
                  {"duration", 120.0}}}};
    if (name == "retest-full")
        return {{"experiment", "retest"},
                {"seed", 1},
                {"sweep",
                 {{"arenas", {10.0, 30.0, 45.0}},
                  {"swarm_sizes", {10, 20, 50}},
                  {"ratios", {{4, 0}, {3, 1}, {2, 2}, {1, 3}, {0, 4}}},
                  {"r_ratios", {0.0, 0.25, 0.5, 0.75, 1.0, 1.25}},
                  {"spawn_radius_base", 12.0},
                  {"repetitions", 60},
                  {"duration", 600.0}}}};
    throw ConfigError("unknown preset '" + name + "'", "preset");
}

}  // namespace evolab::exp
