#pragma once

// Classical fourth-order Runge-Kutta step for autonomous ODEs.

#include <cmath>
#include <stdexcept>

#include <Eigen/Core>

namespace evolab::core {

struct NumericsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One RK4 step of ds/dt = deriv(s). Throws NumericsError if the input or the
// result is non-finite; dt must be finite and positive.
template <typename Deriv>
Eigen::VectorXd rk4_step(Deriv&& deriv, const Eigen::VectorXd& s, double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw NumericsError("rk4_step: dt must be finite and positive");
    if (!s.allFinite()) throw NumericsError("rk4_step: non-finite state");

    const Eigen::VectorXd k1 = deriv(s);
    const Eigen::VectorXd k2 = deriv(s + (0.5 * dt) * k1);
    const Eigen::VectorXd k3 = deriv(s + (0.5 * dt) * k2);
    const Eigen::VectorXd k4 = deriv(s + dt * k3);
    Eigen::VectorXd out = s + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!out.allFinite()) throw NumericsError("rk4_step: non-finite result");
    return out;
}

}  // namespace evolab::core
