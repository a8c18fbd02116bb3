#pragma once

// Differential-drive surrogate body driven by an oscillator network.
//
// A single two-wheeled disk on an unbounded plane. The first two joint
// outputs command the left and right wheel surface speeds (scaled by the
// wheel speed limit); commands update once per control period and the pose
// advances along exact arcs between updates. Deterministic: same network and
// initial state, same trajectory.

#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "evolab/cpg/network.hpp"
#include "evolab/metrics/skills.hpp"
#include "evolab/sim/world.hpp"

namespace evolab::sim {

struct DriveConfig {
    double dt = 0.05;               // oscillator integration step, s
    double control_period = 0.1;    // wheel command period, s
    double wheel_speed_max = 0.14;  // m/s
    double axle_width = 0.094;      // m

    void validate() const {
        if (!(dt > 0.0) || !(control_period > 0.0))
            throw std::invalid_argument("drive: time steps must be > 0");
        const long sub = std::lround(control_period / dt);
        if (sub <= 0 || std::abs(sub * dt - control_period) > 1e-9)
            throw std::invalid_argument("drive: control_period must be a multiple of dt");
        if (!(wheel_speed_max > 0.0) || !(axle_width > 0.0))
            throw std::invalid_argument("drive: geometry must be positive");
    }
};

struct CpgDriveTrial {
    // N + 1 poses, t = 0, cp, ..., duration (endpoints included)
    std::vector<metrics::PoseSample> poses;
    // N oscillator states, one per control-period start
    std::vector<Eigen::VectorXd> cpg_states;
};

// Runs the network's stored state forward for `duration` seconds. Needs at
// least two joints (outputs 0 and 1 are the wheel commands).
inline CpgDriveTrial cpg_drive_trial(cpg::CpgNetwork net, const DriveConfig& cfg,
                                     double duration) {
    cfg.validate();
    if (net.joint_count() < 2)
        throw std::invalid_argument("cpg_drive_trial: need at least two joints");
    const long periods = std::lround(duration / cfg.control_period);
    if (periods <= 0 || std::abs(periods * cfg.control_period - duration) > 1e-9)
        throw std::invalid_argument(
            "cpg_drive_trial: duration must be a positive multiple of control_period");

    CpgDriveTrial out;
    out.poses.reserve(static_cast<std::size_t>(periods) + 1);
    out.cpg_states.reserve(static_cast<std::size_t>(periods));

    RobotPose pose;  // origin, heading 0
    out.poses.push_back({0.0, pose.x, pose.y, pose.heading});
    for (long p = 0; p < periods; ++p) {
        out.cpg_states.push_back(net.state());
        const Eigen::VectorXd outs = net.outputs();
        const double left = cfg.wheel_speed_max * outs[0];
        const double right = cfg.wheel_speed_max * outs[1];
        net.integrate(cfg.control_period, cfg.dt);
        detail::advance_arc(pose, left, right, cfg.axle_width, cfg.control_period);
        out.poses.push_back({static_cast<double>(p + 1) * cfg.control_period, pose.x,
                             pose.y, pose.heading});
    }
    return out;
}

}  // namespace evolab::sim
