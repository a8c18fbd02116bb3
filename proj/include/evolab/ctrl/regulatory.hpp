#pragma once

// Light-driven probabilistic group switching.
//
// Each robot re-draws its active sub-group on a fixed period from a banded
// probability of adopting group 0 ("green"): bright light makes group 0
// certain, mid light favors it, dim light is a coin flip. Between updates
// the active group is constant.

#include <array>
#include <stdexcept>

#include "evolab/core/rng.hpp"

namespace evolab::ctrl {

struct RegulatoryPolicy {
    double high_threshold = 229.0;  // light above this: P(group 0) = p_high
    double low_threshold = 76.0;    // light at or below this: P(group 0) = p_low
    double p_high = 1.0;
    double p_mid = 0.75;
    double p_low = 0.5;
    double update_period = 5.0;  // seconds
};

// P(group 0) for a light reading in [0, 255].
inline double regulatory_probability(double light, const RegulatoryPolicy& policy) {
    if (!(light >= 0.0) || !(light <= 255.0))
        throw std::invalid_argument("regulatory_probability: light outside [0, 255]");
    if (light > policy.high_threshold) return policy.p_high;
    if (light > policy.low_threshold) return policy.p_mid;
    return policy.p_low;
}

// One scheduled re-draw; consumes exactly one uniform draw.
inline int regulatory_update(int /*current_group*/, double light,
                             core::RandomStream& rng, const RegulatoryPolicy& policy) {
    const double p = regulatory_probability(light, policy);
    return rng.uniform() < p ? 0 : 1;
}

}  // namespace evolab::ctrl
