#pragma once

// Fixed-reservoir feed-forward controller: 9 inputs, two hidden ReLU layers
// of 9 units, 2 tanh outputs (v, w). Hidden weights are drawn once per
// experiment and frozen; only the 2x9 output layer is evolved. All biases
// are zero. The evolvable genotype is the output layer in row-major order
// (v-row first), 18 entries per reservoir.

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "evolab/core/rng.hpp"

namespace evolab::ctrl {

inline constexpr int kSensorInputs = 9;
inline constexpr int kGenesPerReservoir = 2 * kSensorInputs;

struct ReservoirNet {
    Eigen::Matrix<double, 9, 9> w_h1 = Eigen::Matrix<double, 9, 9>::Zero();
    Eigen::Matrix<double, 9, 9> w_h2 = Eigen::Matrix<double, 9, 9>::Zero();
    Eigen::Matrix<double, 2, 9> w_out = Eigen::Matrix<double, 2, 9>::Zero();
};

// Hidden layers uniform on [-hidden_range, hidden_range] (row-major draw
// order, first layer then second), output layer zeroed until decoded.
inline ReservoirNet reservoir_init(core::RandomStream& rng, double hidden_range) {
    if (!(hidden_range > 0.0))
        throw std::invalid_argument("reservoir_init: hidden_range must be > 0");
    ReservoirNet net;
    for (int r = 0; r < 9; ++r)
        for (int c = 0; c < 9; ++c) net.w_h1(r, c) = rng.uniform(-hidden_range, hidden_range);
    for (int r = 0; r < 9; ++r)
        for (int c = 0; c < 9; ++c) net.w_h2(r, c) = rng.uniform(-hidden_range, hidden_range);
    return net;
}

// (v, w) = tanh(W_out relu(W_h2 relu(W_h1 s))), both components in (-1, 1).
inline Eigen::Vector2d reservoir_forward(const ReservoirNet& net,
                                         const Eigen::Matrix<double, 9, 1>& input) {
    if (!input.allFinite())
        throw std::invalid_argument("reservoir_forward: non-finite input");
    const Eigen::Matrix<double, 9, 1> h1 = (net.w_h1 * input).cwiseMax(0.0);
    const Eigen::Matrix<double, 9, 1> h2 = (net.w_h2 * h1).cwiseMax(0.0);
    return (net.w_out * h2).array().tanh();
}

// Splits x into consecutive 18-entry blocks, one per reservoir, each filling
// W_out row-major (v-row entries 0..8, w-row entries 9..17).
inline void decode_swarm_genotype(const Eigen::VectorXd& x,
                                  std::vector<ReservoirNet>& reservoirs) {
    if (reservoirs.empty())
        throw std::invalid_argument("decode_swarm_genotype: no reservoirs");
    if (x.size() != static_cast<Eigen::Index>(kGenesPerReservoir * reservoirs.size()))
        throw std::invalid_argument("decode_swarm_genotype: genotype length mismatch");
    if (!x.allFinite())
        throw std::invalid_argument("decode_swarm_genotype: non-finite genotype");
    for (std::size_t n = 0; n < reservoirs.size(); ++n) {
        const Eigen::Index base = static_cast<Eigen::Index>(n) * kGenesPerReservoir;
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 9; ++c)
                reservoirs[n].w_out(r, c) = x[base + 9 * r + c];
    }
}

// Inverse of decode_swarm_genotype; round-trips exactly.
inline Eigen::VectorXd encode_swarm_genotype(const std::vector<ReservoirNet>& reservoirs) {
    Eigen::VectorXd x(kGenesPerReservoir * static_cast<Eigen::Index>(reservoirs.size()));
    for (std::size_t n = 0; n < reservoirs.size(); ++n) {
        const Eigen::Index base = static_cast<Eigen::Index>(n) * kGenesPerReservoir;
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 9; ++c) x[base + 9 * r + c] = reservoirs[n].w_out(r, c);
    }
    return x;
}

// --- fixture serialization ---------------------------------------------------

inline nlohmann::json reservoir_to_json(const ReservoirNet& net) {
    auto dump = [](const auto& m) {
        nlohmann::json rows = nlohmann::json::array();
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            nlohmann::json row = nlohmann::json::array();
            for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
            rows.push_back(row);
        }
        return rows;
    };
    return {{"w_h1", dump(net.w_h1)}, {"w_h2", dump(net.w_h2)}, {"w_out", dump(net.w_out)}};
}

inline ReservoirNet reservoir_from_json(const nlohmann::json& j) {
    ReservoirNet net;
    auto load = [](const nlohmann::json& rows, auto& m) {
        if (rows.size() != static_cast<std::size_t>(m.rows()))
            throw std::invalid_argument("reservoir json: row count mismatch");
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            const auto& row = rows.at(static_cast<std::size_t>(r));
            if (row.size() != static_cast<std::size_t>(m.cols()))
                throw std::invalid_argument("reservoir json: column count mismatch");
            for (Eigen::Index c = 0; c < m.cols(); ++c)
                m(r, c) = row.at(static_cast<std::size_t>(c)).get<double>();
        }
    };
    load(j.at("w_h1"), net.w_h1);
    load(j.at("w_h2"), net.w_h2);
    load(j.at("w_out"), net.w_out);
    return net;
}

}  // namespace evolab::ctrl
