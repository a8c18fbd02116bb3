#pragma once

// Coupled SO(2) oscillator networks over a body's hinges.
//
// Each joint i carries a two-neuron oscillator (x_i, y_i):
//
//   dx_i/dt = w_yx_i * y_i + sum_{j in N_i} c_ji * x_j
//   dy_i/dt = w_xy_i * x_i,        with w_yx_i = -w_xy_i
//
// and coupling weights obey c_ji = -c_ij, so the full state matrix A acting
// on s = [x_1..x_k, y_1..y_k] is exactly anti-symmetric: eigenvalues are
// purely imaginary and |s| is conserved by the flow. Joint outputs are
// tanh(x_i).
//
// The genotype is one weight per joint (w_xy_i, ordered by joint index)
// followed by one weight per neighbor pair (c_ij for canonical pairs (i, j),
// i < j, in lexicographic pair order): k + |N| entries in [-1, 1].

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include "evolab/core/integrate.hpp"
#include "evolab/core/rng.hpp"
#include "evolab/cpg/morphology.hpp"

namespace evolab::cpg {

class CpgNetwork {
  public:
    CpgNetwork(int joint_count, std::vector<std::pair<int, int>> pairs)
        : k_(joint_count), pairs_(std::move(pairs)) {
        if (k_ <= 0) throw std::invalid_argument("cpg: need at least one joint");
        for (auto [a, b] : pairs_)
            if (a < 0 || b < 0 || a >= k_ || b >= k_ || a >= b)
                throw std::invalid_argument("cpg: malformed neighbor pair");
        intra_ = Eigen::VectorXd::Zero(k_);
        inter_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(pairs_.size()));
        state_ = Eigen::VectorXd::Zero(2 * k_);
    }

    int joint_count() const { return k_; }
    int state_size() const { return 2 * k_; }
    int weight_count() const { return k_ + static_cast<int>(pairs_.size()); }
    const std::vector<std::pair<int, int>>& pairs() const { return pairs_; }

    const Eigen::VectorXd& state() const { return state_; }

    // Entries are clamped into [-1, 1]; optimizers search that box and
    // arithmetic recombination may step outside it.
    void set_weights(const Eigen::VectorXd& w) {
        if (w.size() != weight_count())
            throw std::invalid_argument("cpg: weight vector length mismatch");
        if (!w.allFinite()) throw std::invalid_argument("cpg: non-finite weights");
        const Eigen::VectorXd c = w.cwiseMax(-1.0).cwiseMin(1.0);
        intra_ = c.head(k_);
        inter_ = c.tail(static_cast<Eigen::Index>(pairs_.size()));
    }

    Eigen::VectorXd weights() const {
        Eigen::VectorXd w(weight_count());
        w.head(k_) = intra_;
        w.tail(static_cast<Eigen::Index>(pairs_.size())) = inter_;
        return w;
    }

    void set_initial_state(const Eigen::VectorXd& s0) {
        if (s0.size() != state_size())
            throw std::invalid_argument("cpg: state vector length mismatch");
        if (!s0.allFinite()) throw std::invalid_argument("cpg: non-finite state");
        state_ = s0;
    }

    // Every neuron set to the same value; v = 1/2 sqrt(2) is the
    // weight-learning convention.
    void set_uniform_state(double v) {
        state_ = Eigen::VectorXd::Constant(2 * k_, v);
    }

    // Anti-symmetric state matrix over [x..., y...]:
    //   A[x_i, y_i] = -w_xy_i,  A[y_i, x_i] = +w_xy_i
    //   A[x_i, x_j] = -c_ij,    A[x_j, x_i] = +c_ij   for canonical (i, j)
    Eigen::MatrixXd system_matrix() const {
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2 * k_, 2 * k_);
        for (int i = 0; i < k_; ++i) {
            a(i, k_ + i) = -intra_[i];
            a(k_ + i, i) = intra_[i];
        }
        for (std::size_t p = 0; p < pairs_.size(); ++p) {
            const auto [i, j] = pairs_[p];
            const double c = inter_[static_cast<Eigen::Index>(p)];
            a(i, j) = -c;
            a(j, i) = c;
        }
        return a;
    }

    Eigen::VectorXd outputs() const {
        return state_.head(k_).array().tanh().matrix();
    }

    // Advance the stored state by `duration` with RK4 steps of `dt`.
    void integrate(double duration, double dt) {
        const Eigen::MatrixXd a = system_matrix();
        const auto deriv = [&a](const Eigen::VectorXd& s) -> Eigen::VectorXd {
            return a * s;
        };
        const long steps = std::lround(duration / dt);
        if (steps <= 0 || std::abs(steps * dt - duration) > 1e-9)
            throw std::invalid_argument("cpg: duration must be a positive multiple of dt");
        for (long i = 0; i < steps; ++i) state_ = core::rk4_step(deriv, state_, dt);
    }

  private:
    int k_;
    std::vector<std::pair<int, int>> pairs_;
    Eigen::VectorXd intra_;  // w_xy per joint
    Eigen::VectorXd inter_;  // c_ij per canonical pair
    Eigen::VectorXd state_;  // [x_1..x_k, y_1..y_k]
};

// Network over a body's hinges with weights drawn uniform on [-1, 1] (intra
// weights first, joint order, then pair weights in canonical order) and a
// zeroed state.
inline CpgNetwork build_cpg_network(const Morphology& m, core::RandomStream& rng) {
    m.validate();
    const int k = m.joint_count();
    if (k == 0) throw std::invalid_argument("cpg: morphology has no hinges");
    CpgNetwork net(k, neighbor_pairs(m));
    net.set_weights(rng.uniform_vector(net.weight_count(), -1.0, 1.0));
    return net;
}

// Largest |Re(lambda)| over the eigenvalues of the state matrix; exact
// anti-symmetry puts this at numerical zero.
inline double spectral_check(const CpgNetwork& net) {
    const Eigen::MatrixXd a = net.system_matrix();
    Eigen::EigenSolver<Eigen::MatrixXd> es(a, /*computeEigenvectors=*/false);
    return es.eigenvalues().real().cwiseAbs().maxCoeff();
}

// --- rollout ----------------------------------------------------------------

// One record per control period, taken at the period start; after the call
// the network's stored state sits at t = duration. A 120 s rollout at a
// 0.1 s control period therefore logs 1200 records, t = 0 .. 119.9.
struct CpgRollout {
    double dt = 0.0;
    double control_period = 0.0;
    std::vector<double> times;
    std::vector<Eigen::VectorXd> states;   // 2k, at period starts
    std::vector<Eigen::VectorXd> outputs;  // k, tanh(x) at period starts
};

// Header t,x_1..x_k,y_1..y_k,out_1..out_k, one row per control period.
inline void write_rollout_csv(std::ostream& os, const CpgRollout& log) {
    if (log.states.empty()) throw std::invalid_argument("rollout csv: empty rollout");
    const Eigen::Index k = log.outputs.front().size();
    os << "t";
    for (Eigen::Index i = 1; i <= k; ++i) os << ",x_" << i;
    for (Eigen::Index i = 1; i <= k; ++i) os << ",y_" << i;
    for (Eigen::Index i = 1; i <= k; ++i) os << ",out_" << i;
    os << "\n";
    char buf[32];
    for (std::size_t row = 0; row < log.times.size(); ++row) {
        std::snprintf(buf, sizeof buf, "%.17g", log.times[row]);
        os << buf;
        for (Eigen::Index i = 0; i < 2 * k; ++i) {
            std::snprintf(buf, sizeof buf, ",%.17g", log.states[row][i]);
            os << buf;
        }
        for (Eigen::Index i = 0; i < k; ++i) {
            std::snprintf(buf, sizeof buf, ",%.17g", log.outputs[row][i]);
            os << buf;
        }
        os << "\n";
    }
}

inline CpgRollout rollout(CpgNetwork& net, double duration, double dt,
                          double control_period) {
    if (!(duration > 0.0) || !(dt > 0.0) || !(control_period > 0.0))
        throw std::invalid_argument("rollout: durations must be positive");
    const long periods = std::lround(duration / control_period);
    const long sub = std::lround(control_period / dt);
    if (std::abs(periods * control_period - duration) > 1e-9 ||
        std::abs(sub * dt - control_period) > 1e-9)
        throw std::invalid_argument("rollout: duration/control_period/dt must nest");

    CpgRollout log;
    log.dt = dt;
    log.control_period = control_period;
    log.times.reserve(static_cast<std::size_t>(periods));
    log.states.reserve(static_cast<std::size_t>(periods));
    log.outputs.reserve(static_cast<std::size_t>(periods));
    for (long p = 0; p < periods; ++p) {
        log.times.push_back(static_cast<double>(p) * control_period);
        log.states.push_back(net.state());
        log.outputs.push_back(net.outputs());
        net.integrate(control_period, dt);
    }
    return log;
}

}  // namespace evolab::cpg
