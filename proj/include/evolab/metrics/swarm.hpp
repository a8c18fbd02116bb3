#pragma once

// Swarm-level measures: gradient-following fitness and heading order.

#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

namespace evolab::metrics {

// Time-averaged swarm-mean field value, normalized by the field maximum.
// `mean_value_per_record` holds the swarm mean at each control step; the
// result lies in [0, 1] because every field value does.
inline double swarm_fitness(std::span<const double> mean_value_per_record,
                            double max_value = 255.0) {
    if (mean_value_per_record.empty())
        throw std::invalid_argument("swarm_fitness: empty record series");
    double total = 0.0;
    for (double v : mean_value_per_record) total += v;
    return total / (max_value * static_cast<double>(mean_value_per_record.size()));
}

// Local heading order of agent n against its perceived neighbors p:
//   phi_n = | sum_p e^{i theta_p} + e^{i theta_n} | / (P + 1)
// and the swarm order is the mean of phi_n. Both lie in [0, 1]; an agent
// with no neighbors scores 1.
inline double order_parameter(std::span<const double> headings,
                              std::span<const std::vector<int>> perceived) {
    if (headings.empty())
        throw std::invalid_argument("order_parameter: no agents");
    if (perceived.size() != headings.size())
        throw std::invalid_argument("order_parameter: adjacency size mismatch");
    double total = 0.0;
    for (std::size_t n = 0; n < headings.size(); ++n) {
        std::complex<double> sum = std::polar(1.0, headings[n]);
        for (int p : perceived[n]) {
            if (p < 0 || static_cast<std::size_t>(p) >= headings.size())
                throw std::out_of_range("order_parameter: neighbor index out of range");
            sum += std::polar(1.0, headings[static_cast<std::size_t>(p)]);
        }
        total += std::abs(sum) / static_cast<double>(perceived[n].size() + 1);
    }
    return total / static_cast<double>(headings.size());
}

}  // namespace evolab::metrics
