#pragma once

// Initial-state optimization.
//
// Weights stay fixed at one random draw; learning searches over where on the
// conserved-energy shell the oscillators start. Each trial draws a fresh
// initial state, rolls the body for t_trial, and scores every rolling
// t_eval window (one window per sample period). Because the full oscillator
// state is stored at every sample, a window's start state is exact and can
// be replayed. All skills are scored in the same pass over windows, so
// adding skills adds near-zero cost per trial; the per-skill candidate is
// the best window of the trial.

#include <algorithm>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "evolab/core/rng.hpp"
#include "evolab/cpg/network.hpp"
#include "evolab/metrics/skills.hpp"
#include "evolab/sim/drive.hpp"

namespace evolab::opt {

struct IsoConfig {
    int n_trials = 150;
    double t_trial = 120.0;
    double t_eval = 60.0;
    double sample_period = 0.1;
    std::vector<metrics::SkillKind> skills = {metrics::SkillKind::gait,
                                              metrics::SkillKind::rotate_ccw,
                                              metrics::SkillKind::rotate_cw};

    long windows_per_trial() const {
        return std::lround((t_trial - t_eval) / sample_period);
    }

    void validate() const {
        if (n_trials <= 0) throw std::invalid_argument("iso: n_trials must be > 0");
        if (!(sample_period > 0.0))
            throw std::invalid_argument("iso: sample_period must be > 0");
        const long n_eval = std::lround(t_eval / sample_period);
        const long n_trial = std::lround(t_trial / sample_period);
        if (n_eval <= 0 || std::abs(n_eval * sample_period - t_eval) > 1e-9)
            throw std::invalid_argument("iso: t_eval must be a multiple of sample_period");
        if (std::abs(n_trial * sample_period - t_trial) > 1e-9)
            throw std::invalid_argument("iso: t_trial must be a multiple of sample_period");
        if (windows_per_trial() < 1)
            throw std::invalid_argument("iso: t_trial must exceed t_eval");
        if (skills.empty()) throw std::invalid_argument("iso: no skills");
    }
};

using NetFactory = std::function<cpg::CpgNetwork(core::RandomStream&)>;
using BodyTrial = std::function<sim::CpgDriveTrial(
    const cpg::CpgNetwork& net, const Eigen::VectorXd& s0, double duration)>;

struct IsoSkillResult {
    metrics::SkillKind skill = metrics::SkillKind::gait;
    Eigen::VectorXd best_state;  // window-start oscillator state, exact
    double best_fitness = -std::numeric_limits<double>::infinity();
    int best_trial = -1;
    double best_window_start = 0.0;
    std::vector<double> per_trial_best;  // the trial's best window, per trial
};

struct IsoResult {
    cpg::CpgNetwork net;  // the fixed random-weight network
    long windows_per_trial = 0;
    std::vector<IsoSkillResult> skills;
};

// Body trial backed by the differential-drive surrogate.
inline BodyTrial drive_body_trial(const sim::DriveConfig& cfg) {
    return [cfg](const cpg::CpgNetwork& net, const Eigen::VectorXd& s0,
                 double duration) {
        cpg::CpgNetwork copy = net;
        copy.set_initial_state(s0);
        return sim::cpg_drive_trial(std::move(copy), cfg, duration);
    };
}

inline IsoResult iso_optimize(const NetFactory& net_factory, const BodyTrial& body_trial,
                              const IsoConfig& cfg, core::RandomStream& rng) {
    cfg.validate();
    core::RandomStream weight_rng = rng.substream("weights");
    cpg::CpgNetwork net = net_factory(weight_rng);

    const long n_eval = std::lround(cfg.t_eval / cfg.sample_period);
    const long n_win = cfg.windows_per_trial();

    IsoResult res{net, n_win, {}};
    res.skills.reserve(cfg.skills.size());
    for (metrics::SkillKind s : cfg.skills) {
        IsoSkillResult r;
        r.skill = s;
        res.skills.push_back(std::move(r));
    }

    for (int trial = 0; trial < cfg.n_trials; ++trial) {
        core::RandomStream trial_rng = rng.substream("trial/" + std::to_string(trial));
        const Eigen::VectorXd s0 =
            trial_rng.uniform_vector(net.state_size(), -1.0, 1.0);
        const sim::CpgDriveTrial td = body_trial(net, s0, cfg.t_trial);
        if (td.poses.size() < static_cast<std::size_t>(n_win + n_eval) + 1 ||
            td.cpg_states.size() < static_cast<std::size_t>(n_win))
            throw std::runtime_error("iso: body trial returned too few samples");

        // prefix sums of per-sample heading steps make every window O(1)
        std::vector<double> turn_prefix(td.poses.size(), 0.0);
        for (std::size_t j = 1; j < td.poses.size(); ++j)
            turn_prefix[j] =
                turn_prefix[j - 1] +
                core::unwrap_z(td.poses[j].heading, td.poses[j - 1].heading).delta;

        std::vector<double> trial_best(cfg.skills.size(),
                                       -std::numeric_limits<double>::infinity());
        std::vector<long> trial_best_window(cfg.skills.size(), 0);
        for (long n = 0; n < n_win; ++n) {
            const auto a = static_cast<std::size_t>(n);
            const auto b = static_cast<std::size_t>(n + n_eval);
            for (std::size_t s = 0; s < cfg.skills.size(); ++s) {
                double f;
                switch (cfg.skills[s]) {
                    case metrics::SkillKind::gait: {
                        const double dx = td.poses[b].x - td.poses[a].x;
                        const double dy = td.poses[b].y - td.poses[a].y;
                        f = 100.0 * std::hypot(dx, dy) / cfg.t_eval;
                        break;
                    }
                    case metrics::SkillKind::rotate_ccw:
                        f = (turn_prefix[b] - turn_prefix[a]) / cfg.t_eval;
                        break;
                    case metrics::SkillKind::rotate_cw:
                        f = -(turn_prefix[b] - turn_prefix[a]) / cfg.t_eval;
                        break;
                    default:
                        throw std::invalid_argument("iso: unknown skill");
                }
                if (f > trial_best[s]) {
                    trial_best[s] = f;
                    trial_best_window[s] = n;
                }
            }
        }

        for (std::size_t s = 0; s < cfg.skills.size(); ++s) {
            IsoSkillResult& r = res.skills[s];
            r.per_trial_best.push_back(trial_best[s]);
            if (trial_best[s] > r.best_fitness) {
                r.best_fitness = trial_best[s];
                r.best_trial = trial;
                r.best_window_start =
                    static_cast<double>(trial_best_window[s]) * cfg.sample_period;
                r.best_state =
                    td.cpg_states[static_cast<std::size_t>(trial_best_window[s])];
            }
        }
    }
    return res;
}

// Fresh rollout of exactly t_eval seconds from a stored window-start state;
// returns the skill fitness of the whole rollout.
inline double iso_retest(const Eigen::VectorXd& state, const cpg::CpgNetwork& net,
                         const BodyTrial& body_trial, double t_eval,
                         metrics::SkillKind skill) {
    if (state.size() != net.state_size())
        throw std::invalid_argument("iso_retest: state length does not match network");
    if (!(t_eval > 0.0)) throw std::invalid_argument("iso_retest: t_eval must be > 0");
    const sim::CpgDriveTrial td = body_trial(net, state, t_eval);
    return metrics::skill_fitness(td.poses, 0.0, t_eval, skill);
}

}  // namespace evolab::opt
