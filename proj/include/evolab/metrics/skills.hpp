#pragma once

// Locomotion skill fitness over a planar pose trajectory.
//
// A trajectory is a uniformly sampled series of (t, x, y, heading) with
// positions in meters. Gait fitness is net displacement speed in cm/s over
// the evaluation window; rotation fitness is mean signed angular speed in
// rad/s, accumulated from per-sample unwrapped heading steps so full turns
// are counted, with the sign flipped for the clockwise skill.

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "evolab/core/angles.hpp"

namespace evolab::metrics {

struct PoseSample {
    double t = 0.0;
    double x = 0.0;
    double y = 0.0;
    double heading = 0.0;
};

enum class SkillKind { gait, rotate_ccw, rotate_cw };

inline const char* to_string(SkillKind s) {
    switch (s) {
        case SkillKind::gait: return "gait";
        case SkillKind::rotate_ccw: return "rotate_ccw";
        case SkillKind::rotate_cw: return "rotate_cw";
    }
    return "?";
}

inline SkillKind skill_from_string(const std::string& s) {
    if (s == "gait") return SkillKind::gait;
    if (s == "rotate_ccw") return SkillKind::rotate_ccw;
    if (s == "rotate_cw") return SkillKind::rotate_cw;
    throw std::invalid_argument("unknown skill: " + s);
}

namespace detail {

struct Window {
    std::size_t first = 0;
    std::size_t last = 0;  // inclusive
    double t_eval = 0.0;
};

inline Window resolve_window(std::span<const PoseSample> traj, double t_start,
                             double t_eval) {
    if (traj.size() < 2)
        throw std::invalid_argument("skill window: trajectory too short");
    if (!(t_eval > 0.0))
        throw std::invalid_argument("skill window: t_eval must be > 0");
    const double period = traj[1].t - traj[0].t;
    if (!(period > 0.0))
        throw std::invalid_argument("skill window: non-increasing timestamps");
    const double i0f = (t_start - traj[0].t) / period;
    const double spanf = t_eval / period;
    const auto i0 = static_cast<long>(std::lround(i0f));
    const auto count = static_cast<long>(std::lround(spanf));
    if (std::abs(i0f - static_cast<double>(i0)) > 1e-6 ||
        std::abs(spanf - static_cast<double>(count)) > 1e-6 || count < 1)
        throw std::invalid_argument("skill window: bounds must align with the sample grid");
    if (i0 < 0 || static_cast<std::size_t>(i0 + count) >= traj.size())
        throw std::invalid_argument("skill window: window exceeds trajectory");
    return {static_cast<std::size_t>(i0), static_cast<std::size_t>(i0 + count), t_eval};
}

}  // namespace detail

// Net displacement speed in cm/s over [t_start, t_start + t_eval].
inline double gait_fitness(std::span<const PoseSample> traj, double t_start,
                           double t_eval) {
    const auto w = detail::resolve_window(traj, t_start, t_eval);
    const double dx = traj[w.last].x - traj[w.first].x;
    const double dy = traj[w.last].y - traj[w.first].y;
    return 100.0 * std::hypot(dx, dy) / w.t_eval;
}

// Mean angular speed in rad/s over the window; counterclockwise positive.
// `clockwise` selects the mirrored skill (sign flipped). Degenerate heading
// steps contribute zero.
inline double rotation_fitness(std::span<const PoseSample> traj, double t_start,
                               double t_eval, bool clockwise) {
    const auto w = detail::resolve_window(traj, t_start, t_eval);
    double total = 0.0;
    for (std::size_t j = w.first + 1; j <= w.last; ++j)
        total += core::unwrap_z(traj[j].heading, traj[j - 1].heading).delta;
    const double ccw = total / w.t_eval;
    return clockwise ? -ccw : ccw;
}

inline double skill_fitness(std::span<const PoseSample> traj, double t_start,
                            double t_eval, SkillKind skill) {
    switch (skill) {
        case SkillKind::gait: return gait_fitness(traj, t_start, t_eval);
        case SkillKind::rotate_ccw: return rotation_fitness(traj, t_start, t_eval, false);
        case SkillKind::rotate_cw: return rotation_fitness(traj, t_start, t_eval, true);
    }
    throw std::invalid_argument("skill_fitness: unknown skill");
}

}  // namespace evolab::metrics
