#pragma once

// Planar kinematic swarm world.
//
// Robots are differential-drive disks. Between control updates wheel surface
// speeds are constant, so each simulation step advances a robot along an
// exact circular arc (or straight line). Robots never leave the arena:
// positions are clamped so the disk stays inside (sliding along walls), and
// overlapping disks are pushed apart symmetrically. A robot pair's collision
// counter increments at most once per control step.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "evolab/core/angles.hpp"
#include "evolab/core/rng.hpp"
#include "evolab/sim/field.hpp"

namespace evolab::sim {

struct WorldConfig {
    double arena_side = 10.0;       // m
    int swarm_size = 14;
    double spawn_radius = 3.0;      // distance of spawn-box center from arena center, m
    double spawn_box_side = 3.0;    // m
    double dt = 0.05;               // integration step, s
    double control_period = 0.1;    // controller update period, s
    double duration = 600.0;        // trial length, s
    double wheel_speed_max = 0.14;  // m/s per wheel
    double robot_radius = 0.085;    // m
    double axle_width = 0.094;      // m
    double sensor_range = 2.0;      // m
    double empty_quadrant_distance = 2.0;  // reported when a quadrant is empty, m
    std::pair<int, int> group_ratio = {1, 1};

    void validate() const {
        if (!(arena_side > 0.0)) throw std::invalid_argument("world: arena_side must be > 0");
        if (swarm_size <= 0) throw std::invalid_argument("world: swarm_size must be > 0");
        if (!(dt > 0.0) || !(control_period > 0.0) || !(duration > 0.0))
            throw std::invalid_argument("world: time steps must be > 0");
        const long sub = std::lround(control_period / dt);
        const long periods = std::lround(duration / control_period);
        if (sub <= 0 || std::abs(sub * dt - control_period) > 1e-9)
            throw std::invalid_argument("world: control_period must be a multiple of dt");
        if (periods <= 0 || std::abs(periods * control_period - duration) > 1e-9)
            throw std::invalid_argument("world: duration must be a multiple of control_period");
        if (!(robot_radius > 0.0) || !(axle_width > 0.0) || !(wheel_speed_max > 0.0))
            throw std::invalid_argument("world: robot geometry must be positive");
        if (!(sensor_range > 0.0)) throw std::invalid_argument("world: sensor_range must be > 0");
        if (group_ratio.first < 0 || group_ratio.second < 0 ||
            group_ratio.first + group_ratio.second == 0)
            throw std::invalid_argument("world: group_ratio must have a positive total");
        if (spawn_radius < 0.0 ||
            spawn_radius + spawn_box_side / 2.0 > arena_side / 2.0)
            throw std::invalid_argument("world: spawn box does not fit inside the arena");
    }
};

struct RobotPose {
    double x = 0.0;
    double y = 0.0;
    double heading = 0.0;  // (-pi, pi]
    int group = 0;
};

// Robots in the first `size * a / (a + b)` slots carry group 0, the rest
// group 1, for ratio (a, b).
inline int group_zero_count(int size, std::pair<int, int> ratio) {
    const int total = ratio.first + ratio.second;
    if (total <= 0) throw std::invalid_argument("group ratio must have a positive total");
    return size * ratio.first / total;
}

// Spawn box center uniform on the circle of radius cfg.spawn_radius around
// the arena center; members uniform in the box with uniform headings,
// rejection-sampled until disks do not overlap. Draw order per robot:
// x, y, heading.
inline std::vector<RobotPose> spawn_swarm(const WorldConfig& cfg,
                                          core::RandomStream& rng) {
    cfg.validate();
    const double angle = rng.uniform(0.0, 2.0 * core::kPi);
    const double cx = cfg.arena_side / 2.0 + cfg.spawn_radius * std::cos(angle);
    const double cy = cfg.arena_side / 2.0 + cfg.spawn_radius * std::sin(angle);
    const double half = cfg.spawn_box_side / 2.0;

    std::vector<RobotPose> robots;
    robots.reserve(static_cast<std::size_t>(cfg.swarm_size));
    const int zeros = group_zero_count(cfg.swarm_size, cfg.group_ratio);
    for (int i = 0; i < cfg.swarm_size; ++i) {
        RobotPose p;
        p.group = i < zeros ? 0 : 1;
        for (int attempt = 0;; ++attempt) {
            if (attempt >= 10000)
                throw std::runtime_error("spawn_swarm: could not place robot without overlap");
            p.x = cx + rng.uniform(-half, half);
            p.y = cy + rng.uniform(-half, half);
            p.heading = core::wrap_pi(rng.uniform(-core::kPi, core::kPi));
            bool clear = true;
            for (const RobotPose& q : robots) {
                if (std::hypot(p.x - q.x, p.y - q.y) < 2.0 * cfg.robot_radius) {
                    clear = false;
                    break;
                }
            }
            if (clear) break;
        }
        robots.push_back(p);
    }
    return robots;
}

struct SwarmWorld {
    WorldConfig cfg;
    std::vector<RobotPose> robots;
    std::vector<double> wheel_left;   // m/s
    std::vector<double> wheel_right;  // m/s
    std::uint64_t collision_count = 0;
    // pair flags for the once-per-control-step collision counter
    std::vector<std::uint8_t> pair_counted;

    SwarmWorld(WorldConfig config, std::vector<RobotPose> poses)
        : cfg(std::move(config)), robots(std::move(poses)) {
        cfg.validate();
        if (static_cast<int>(robots.size()) != cfg.swarm_size)
            throw std::invalid_argument("world: pose count != swarm_size");
        wheel_left.assign(robots.size(), 0.0);
        wheel_right.assign(robots.size(), 0.0);
        pair_counted.assign(robots.size() * robots.size(), 0);
    }

    int size() const { return static_cast<int>(robots.size()); }

    // Call at each control-step boundary: collision pairs may count again.
    void begin_control_step() {
        std::fill(pair_counted.begin(), pair_counted.end(), 0);
    }

    void set_wheels(int i, double left, double right) {
        const double m = cfg.wheel_speed_max;
        wheel_left[i] = std::clamp(left, -m, m);
        wheel_right[i] = std::clamp(right, -m, m);
    }
};

namespace detail {

inline void advance_arc(RobotPose& p, double left, double right, double axle,
                        double dt) {
    const double u = 0.5 * (left + right);
    const double omega = (right - left) / axle;
    if (std::abs(omega) < 1e-12) {
        p.x += u * dt * std::cos(p.heading);
        p.y += u * dt * std::sin(p.heading);
    } else {
        const double radius = u / omega;
        const double h2 = p.heading + omega * dt;
        p.x += radius * (std::sin(h2) - std::sin(p.heading));
        p.y -= radius * (std::cos(h2) - std::cos(p.heading));
        p.heading = core::wrap_pi(h2);
    }
}

inline void clamp_to_walls(RobotPose& p, const WorldConfig& cfg) {
    const double lo = cfg.robot_radius;
    const double hi = cfg.arena_side - cfg.robot_radius;
    p.x = std::clamp(p.x, lo, hi);
    p.y = std::clamp(p.y, lo, hi);
}

// Quadrants in robot i's frame: 0 front, 1 back, 2 left, 3 right, each 90
// degrees wide with half-open boundaries. Returns the nearest in-range
// neighbor per quadrant (ties: lowest index).
struct QuadrantHit {
    int robot = -1;
    double distance = 0.0;
    double rel_heading = 0.0;
};

inline std::array<QuadrantHit, 4> quadrant_nearest(const SwarmWorld& world, int i) {
    const RobotPose& self = world.robots[i];
    std::array<QuadrantHit, 4> best;
    std::array<double, 4> best_d;
    best_d.fill(std::numeric_limits<double>::infinity());
    const double quarter = core::kPi / 4.0;
    for (int j = 0; j < world.size(); ++j) {
        if (j == i) continue;
        const RobotPose& other = world.robots[j];
        const double d = std::hypot(other.x - self.x, other.y - self.y);
        if (d > world.cfg.sensor_range) continue;
        const double bearing =
            core::wrap_pi(std::atan2(other.y - self.y, other.x - self.x) - self.heading);
        int q;
        if (bearing > -quarter && bearing <= quarter) q = 0;
        else if (bearing > quarter && bearing <= 3.0 * quarter) q = 2;
        else if (bearing > -3.0 * quarter && bearing <= -quarter) q = 3;
        else q = 1;
        if (d < best_d[q]) {
            best_d[q] = d;
            best[q] = {j, d, core::wrap_pi(other.heading - self.heading)};
        }
    }
    return best;
}

}  // namespace detail

// One integration step: arcs, wall clamping, then symmetric separation of any
// overlapping pairs (re-clamping after each pass so resolution cannot push a
// robot out). Separation never increases overlap; newly overlapping pairs
// bump the collision counter unless already counted this control step.
inline void step_world(SwarmWorld& world, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("step_world: dt must be > 0");
    const int n = world.size();
    for (int i = 0; i < n; ++i) {
        detail::advance_arc(world.robots[i], world.wheel_left[i],
                            world.wheel_right[i], world.cfg.axle_width, dt);
        detail::clamp_to_walls(world.robots[i], world.cfg);
    }

    const double min_sep = 2.0 * world.cfg.robot_radius;
    for (int pass = 0; pass < 8; ++pass) {
        bool any = false;
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                RobotPose& a = world.robots[i];
                RobotPose& b = world.robots[j];
                double dx = b.x - a.x;
                double dy = b.y - a.y;
                double d = std::hypot(dx, dy);
                if (d >= min_sep) continue;
                any = true;
                auto& counted =
                    world.pair_counted[static_cast<std::size_t>(i) * n + j];
                if (!counted) {
                    counted = 1;
                    ++world.collision_count;
                }
                if (d < 1e-12) {  // coincident disks: deterministic axis
                    dx = 1.0;
                    dy = 0.0;
                    d = 1.0;
                }
                const double push = 0.5 * (min_sep - d) / d;
                a.x -= dx * push;
                a.y -= dy * push;
                b.x += dx * push;
                b.y += dy * push;
                detail::clamp_to_walls(a, world.cfg);
                detail::clamp_to_walls(b, world.cfg);
            }
        }
        if (!any) break;
    }
}

// Nine normalized sensor inputs for robot i: per quadrant (front, back,
// left, right) the nearest in-range neighbor's center distance and relative
// heading, then the local field value. Normalization: distance d -> d - 1,
// heading t -> t / pi, light g -> 2 g / 255 - 1. Empty quadrants report
// (cfg.empty_quadrant_distance, 0) before normalization.
inline std::array<double, 9> sense(const SwarmWorld& world, const ScalarField& field,
                                   int i) {
    if (i < 0 || i >= world.size())
        throw std::out_of_range("sense: robot index out of range");
    const auto hits = detail::quadrant_nearest(world, i);
    std::array<double, 9> out{};
    for (int q = 0; q < 4; ++q) {
        const double d =
            hits[q].robot >= 0 ? hits[q].distance : world.cfg.empty_quadrant_distance;
        const double t = hits[q].robot >= 0 ? hits[q].rel_heading : 0.0;
        out[2 * q] = d - 1.0;
        out[2 * q + 1] = t / core::kPi;
    }
    const RobotPose& self = world.robots[i];
    out[8] = 2.0 * field.value(self.x, self.y) / ScalarField::kMaxValue - 1.0;
    return out;
}

// Indices of the (at most four) quadrant-nearest neighbors robot i perceives;
// the adjacency used by the order measure.
inline std::vector<int> perceived_neighbors(const SwarmWorld& world, int i) {
    const auto hits = detail::quadrant_nearest(world, i);
    std::vector<int> out;
    for (const auto& h : hits)
        if (h.robot >= 0) out.push_back(h.robot);
    return out;
}

}  // namespace evolab::sim
