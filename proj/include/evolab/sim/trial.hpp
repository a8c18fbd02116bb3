#pragma once

// Full swarm trials: spawn, sense-think-act loop, logging, fitness.
//
// Controllers run once per control period from a synchronous snapshot: all
// robots sense, all wheel commands are set, then the world integrates. The
// controller's (v, w) in [-1, 1]^2 maps to body speed v * wheel_speed_max
// and turn rate w * (2 wheel_speed_max / axle_width); per-wheel speeds are
// clamped to the wheel limit. Homogeneous swarms use the forward-only
// velocity mapping v -> (v + 1) / 2.
//
// One record is logged per control period (at its start). Fitness is the
// time average of the swarm-mean field value, normalized by the field
// maximum, so it lies in [0, 1].

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "evolab/core/rng.hpp"
#include "evolab/ctrl/regulatory.hpp"
#include "evolab/ctrl/reservoir.hpp"
#include "evolab/metrics/swarm.hpp"
#include "evolab/sim/field.hpp"
#include "evolab/sim/world.hpp"

namespace evolab::sim {

enum class VelocityMode { symmetric, forward_only };

struct ControllerBundle {
    // one reservoir for homogeneous swarms, one per group otherwise
    std::vector<ctrl::ReservoirNet> reservoirs;
    VelocityMode mode = VelocityMode::symmetric;
    std::optional<ctrl::RegulatoryPolicy> policy;

    void validate() const {
        if (reservoirs.empty())
            throw std::invalid_argument("controller bundle: no reservoirs");
        if (policy && reservoirs.size() < 2)
            throw std::invalid_argument(
                "controller bundle: regulatory switching needs one reservoir per group");
    }
};

struct TrialRobotRecord {
    double x = 0.0;
    double y = 0.0;
    double heading = 0.0;
    double light = 0.0;
    int group = 0;
};

struct TrialRecord {
    double t = 0.0;
    std::vector<TrialRobotRecord> robots;
    double order = 0.0;
    std::uint64_t collisions = 0;  // cumulative at record time
};

struct TrialLog {
    std::vector<TrialRecord> records;  // duration / control_period entries
    double fitness = 0.0;
    double mean_order = 0.0;
    std::uint64_t collisions = 0;
};

inline TrialLog run_swarm_trial(const ControllerBundle& bundle, const WorldConfig& cfg,
                                const ScalarField& field, std::uint64_t seed) {
    bundle.validate();
    cfg.validate();
    if (std::abs(field.arena_side() - cfg.arena_side) > 1e-12)
        throw std::invalid_argument("run_swarm_trial: field/arena size mismatch");

    core::RandomStream rng(seed, "swarm_trial");
    core::RandomStream spawn_rng = rng.substream("spawn");
    core::RandomStream reg_rng = rng.substream("regulatory");

    SwarmWorld world(cfg, spawn_swarm(cfg, spawn_rng));
    const long steps_per_period = std::lround(cfg.control_period / cfg.dt);
    const long periods = std::lround(cfg.duration / cfg.control_period);
    long regulatory_every = 0;
    if (bundle.policy) {
        regulatory_every = std::lround(bundle.policy->update_period / cfg.control_period);
        if (regulatory_every <= 0 ||
            std::abs(regulatory_every * cfg.control_period - bundle.policy->update_period) >
                1e-9)
            throw std::invalid_argument(
                "run_swarm_trial: update_period must be a multiple of control_period");
    }

    TrialLog log;
    log.records.reserve(static_cast<std::size_t>(periods));
    std::vector<double> mean_light_per_record;
    mean_light_per_record.reserve(static_cast<std::size_t>(periods));

    for (long p = 0; p < periods; ++p) {
        world.begin_control_step();
        const double t = static_cast<double>(p) * cfg.control_period;

        if (bundle.policy && p % regulatory_every == 0) {
            for (int i = 0; i < world.size(); ++i) {
                RobotPose& robot = world.robots[static_cast<std::size_t>(i)];
                const double light = field.value(robot.x, robot.y);
                robot.group =
                    ctrl::regulatory_update(robot.group, light, reg_rng, *bundle.policy);
            }
        }

        TrialRecord rec;
        rec.t = t;
        rec.collisions = world.collision_count;
        rec.robots.reserve(static_cast<std::size_t>(world.size()));
        std::vector<double> headings;
        std::vector<std::vector<int>> perceived;
        headings.reserve(static_cast<std::size_t>(world.size()));
        perceived.reserve(static_cast<std::size_t>(world.size()));
        double light_sum = 0.0;

        for (int i = 0; i < world.size(); ++i) {
            const RobotPose& robot = world.robots[static_cast<std::size_t>(i)];
            const std::array<double, 9> inputs = sense(world, field, i);
            const std::size_t res_idx =
                bundle.reservoirs.size() == 1
                    ? 0
                    : static_cast<std::size_t>(robot.group) % bundle.reservoirs.size();
            const Eigen::Vector2d vw = ctrl::reservoir_forward(
                bundle.reservoirs[res_idx],
                Eigen::Map<const Eigen::Matrix<double, 9, 1>>(inputs.data()));
            double v = vw[0];
            if (bundle.mode == VelocityMode::forward_only) v = (v + 1.0) / 2.0;
            const double u = v * cfg.wheel_speed_max;
            const double turn_term = vw[1] * cfg.wheel_speed_max;  // w * 2 v_max / axle * axle/2
            world.set_wheels(i, u - turn_term, u + turn_term);

            const double light = field.value(robot.x, robot.y);
            light_sum += light;
            rec.robots.push_back({robot.x, robot.y, robot.heading, light, robot.group});
            headings.push_back(robot.heading);
            perceived.push_back(perceived_neighbors(world, i));
        }

        rec.order = metrics::order_parameter(headings, perceived);
        mean_light_per_record.push_back(light_sum / world.size());
        log.records.push_back(std::move(rec));

        for (long s = 0; s < steps_per_period; ++s) step_world(world, cfg.dt);
    }

    log.collisions = world.collision_count;
    log.fitness = metrics::swarm_fitness(mean_light_per_record, ScalarField::kMaxValue);
    double order_sum = 0.0;
    for (const TrialRecord& rec : log.records) order_sum += rec.order;
    log.mean_order = order_sum / static_cast<double>(log.records.size());
    return log;
}

// Bundle construction from an evolvable genotype: 18 genes per reservoir
// (output layer, row-major), reservoirs in group order.
inline ControllerBundle make_bundle(const Eigen::VectorXd& genotype,
                                    std::vector<ctrl::ReservoirNet> reservoirs,
                                    VelocityMode mode,
                                    std::optional<ctrl::RegulatoryPolicy> policy) {
    ctrl::decode_swarm_genotype(genotype, reservoirs);
    ControllerBundle bundle{std::move(reservoirs), mode, std::move(policy)};
    bundle.validate();
    return bundle;
}

// One row per robot per record: t, robot_id, x, y, heading, light, group,
// collisions (swarm cumulative at record time).
inline void write_trial_csv(std::ostream& os, const TrialLog& log) {
    os << "t,robot_id,x,y,heading,light,group,collisions\n";
    char buf[192];
    for (const TrialRecord& rec : log.records) {
        for (std::size_t i = 0; i < rec.robots.size(); ++i) {
            const TrialRobotRecord& r = rec.robots[i];
            std::snprintf(buf, sizeof buf,
                          "%.17g,%zu,%.17g,%.17g,%.17g,%.17g,%d,%llu\n", rec.t, i,
                          r.x, r.y, r.heading, r.light, r.group,
                          static_cast<unsigned long long>(rec.collisions));
            os << buf;
        }
    }
}

}  // namespace evolab::sim
