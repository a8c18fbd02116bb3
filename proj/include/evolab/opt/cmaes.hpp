#pragma once

// Covariance matrix adaptation evolution strategy, (mu/mu_w, lambda) with
// the standard tutorial parameterization: log-linear recombination weights
// over the full ranking (the worse half enters the rank-mu update with
// negative, variance-renormalized weights), cumulative step-size control,
// rank-one plus rank-mu covariance update. Maximizes. The initial mean is
// drawn uniform in [mean_lower, mean_upper]^n; candidates outside the
// (optional) search box are resampled up to ten times, then clamped
// coordinate-wise.
//
// The covariance is eigendecomposed every generation; its smallest
// eigenvalue is recorded and must stay positive (the update is a convex
// combination of positive-semidefinite terms with a positive base factor).

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include "evolab/core/rng.hpp"
#include "evolab/opt/common.hpp"

namespace evolab::opt {

struct CmaesConfig {
    int lambda = 30;
    double sigma0 = 1.0;
    int generations = 100;
    double mean_lower = -5.0;  // initial-mean box
    double mean_upper = 5.0;
    std::optional<double> lower;  // candidate box (both or neither)
    std::optional<double> upper;
    std::optional<double> stop_when_best_at_least;

    void validate() const {
        if (lambda < 4) throw std::invalid_argument("cmaes: lambda must be >= 4");
        if (!(sigma0 > 0.0)) throw std::invalid_argument("cmaes: sigma0 must be > 0");
        if (generations <= 0) throw std::invalid_argument("cmaes: generations must be > 0");
        if (!(mean_lower <= mean_upper))
            throw std::invalid_argument("cmaes: empty initial-mean box");
        if (lower.has_value() != upper.has_value())
            throw std::invalid_argument("cmaes: bounds must be given as a pair");
        if (lower && !(*lower < *upper))
            throw std::invalid_argument("cmaes: empty search box");
    }
};

struct CmaesGenStats {
    double sigma = 0.0;
    double min_eigenvalue = 0.0;
    double max_eigenvalue = 0.0;
    double best_fitness = 0.0;
    double mean_fitness = 0.0;
};

struct CmaesResult {
    Eigen::VectorXd best;
    double best_fitness = -std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> generation_fitness;  // candidate order
    std::vector<CmaesGenStats> stats;
    int generations_run = 0;
};

inline CmaesResult cmaes_optimize(const BatchObjective& objective, int n,
                                  const CmaesConfig& cfg, core::RandomStream& rng) {
    cfg.validate();
    if (n <= 0) throw std::invalid_argument("cmaes: dimension must be > 0");

    const int lambda = cfg.lambda;
    const int mu = lambda / 2;
    Eigen::VectorXd weights(lambda);
    for (int i = 0; i < lambda; ++i)
        weights[i] = std::log((lambda + 1.0) / 2.0) - std::log(static_cast<double>(i + 1));
    const double positive_sum = weights.head(mu).sum();
    const double negative_sum = -weights.tail(lambda - mu).sum();
    const double mu_eff = positive_sum * positive_sum / weights.head(mu).squaredNorm();
    const double mu_eff_neg =
        negative_sum * negative_sum / weights.tail(lambda - mu).squaredNorm();

    const double nd = static_cast<double>(n);
    const double c_sigma = (mu_eff + 2.0) / (nd + mu_eff + 5.0);
    const double d_sigma =
        1.0 + 2.0 * std::max(0.0, std::sqrt((mu_eff - 1.0) / (nd + 1.0)) - 1.0) + c_sigma;
    const double c_c = (4.0 + mu_eff / nd) / (nd + 4.0 + 2.0 * mu_eff / nd);
    const double c_1 = 2.0 / ((nd + 1.3) * (nd + 1.3) + mu_eff);
    const double c_mu = std::min(1.0 - c_1, 2.0 * (mu_eff - 2.0 + 1.0 / mu_eff) /
                                                ((nd + 2.0) * (nd + 2.0) + mu_eff));
    // Negative weights are scaled so they cannot break positive definiteness
    // on their own; the smallest of the three caps is the binding one.
    const double alpha_neg =
        std::min({1.0 + c_1 / c_mu, 1.0 + 2.0 * mu_eff_neg / (mu_eff + 2.0),
                  (1.0 - c_1 - c_mu) / (nd * c_mu)});
    weights.head(mu) /= positive_sum;
    weights.tail(lambda - mu) *= alpha_neg / negative_sum;
    const double weight_sum = weights.sum();
    const double chi_n = std::sqrt(nd) * (1.0 - 1.0 / (4.0 * nd) + 1.0 / (21.0 * nd * nd));

    Eigen::VectorXd mean = rng.uniform_vector(n, cfg.mean_lower, cfg.mean_upper);
    double sigma = cfg.sigma0;
    Eigen::MatrixXd cov = Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd p_sigma = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd p_c = Eigen::VectorXd::Zero(n);

    CmaesResult res;
    for (int g = 0; g < cfg.generations; ++g) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
        if (eig.info() != Eigen::Success)
            throw std::runtime_error("cmaes: eigendecomposition failed");
        const Eigen::VectorXd eigvals = eig.eigenvalues();
        const double min_eig = eigvals.minCoeff();
        if (!(min_eig > 0.0))
            throw std::runtime_error("cmaes: covariance lost positive definiteness");
        const Eigen::MatrixXd b = eig.eigenvectors();
        const Eigen::VectorXd d = eigvals.cwiseSqrt();

        Population pop;
        pop.reserve(static_cast<std::size_t>(lambda));
        std::vector<Eigen::VectorXd> y_raw;
        y_raw.reserve(static_cast<std::size_t>(lambda));
        for (int i = 0; i < lambda; ++i) {
            Eigen::VectorXd x;
            Eigen::VectorXd y;
            bool inside = false;
            for (int attempt = 0; attempt < 10 && !inside; ++attempt) {
                y = b * d.cwiseProduct(rng.gaussian_vector(n)).eval();
                x = mean + sigma * y;
                inside = !cfg.lower || ((x.array() >= *cfg.lower).all() &&
                                        (x.array() <= *cfg.upper).all());
            }
            if (!inside) {
                x = x.cwiseMax(*cfg.lower).cwiseMin(*cfg.upper);
                y = (x - mean) / sigma;
            }
            pop.push_back(x);
            y_raw.push_back(y);
        }

        std::vector<double> fit = objective(pop, g);
        detail::check_batch(pop, fit);
        res.generation_fitness.push_back(fit);
        for (int i = 0; i < lambda; ++i) {
            if (fit[static_cast<std::size_t>(i)] > res.best_fitness) {
                res.best_fitness = fit[static_cast<std::size_t>(i)];
                res.best = pop[static_cast<std::size_t>(i)];
            }
        }

        std::vector<int> order(static_cast<std::size_t>(lambda));
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b2) { return fit[a] > fit[b2]; });

        const Eigen::VectorXd old_mean = mean;
        Eigen::VectorXd y_w = Eigen::VectorXd::Zero(n);
        for (int i = 0; i < mu; ++i) y_w += weights[i] * y_raw[static_cast<std::size_t>(order[i])];
        mean = old_mean + sigma * y_w;

        const Eigen::MatrixXd inv_sqrt =
            b * d.cwiseInverse().asDiagonal() * b.transpose();
        p_sigma = (1.0 - c_sigma) * p_sigma +
                  std::sqrt(c_sigma * (2.0 - c_sigma) * mu_eff) * (inv_sqrt * y_w);
        const double expected_decay =
            std::sqrt(1.0 - std::pow(1.0 - c_sigma, 2.0 * (g + 1)));
        const bool h_sigma =
            p_sigma.norm() / expected_decay / chi_n < 1.4 + 2.0 / (nd + 1.0);
        p_c = (1.0 - c_c) * p_c +
              (h_sigma ? std::sqrt(c_c * (2.0 - c_c) * mu_eff) : 0.0) * y_w;

        Eigen::MatrixXd rank_mu = Eigen::MatrixXd::Zero(n, n);
        for (int i = 0; i < lambda; ++i) {
            const Eigen::VectorXd& y = y_raw[static_cast<std::size_t>(order[i])];
            double w = weights[i];
            if (w < 0.0) w *= nd / std::max((inv_sqrt * y).squaredNorm(), 1e-300);
            rank_mu += w * (y * y.transpose());
        }
        const double c1a = c_1 * (1.0 - (h_sigma ? 0.0 : 1.0) * c_c * (2.0 - c_c));
        cov = (1.0 - c1a - c_mu * weight_sum) * cov + c_1 * (p_c * p_c.transpose()) +
              c_mu * rank_mu;
        cov = 0.5 * (cov + cov.transpose()).eval();  // keep exact symmetry

        sigma *= std::exp((c_sigma / d_sigma) * (p_sigma.norm() / chi_n - 1.0));

        CmaesGenStats gs;
        gs.sigma = sigma;
        gs.min_eigenvalue = min_eig;
        gs.max_eigenvalue = eigvals.maxCoeff();
        gs.best_fitness = *std::max_element(fit.begin(), fit.end());
        gs.mean_fitness =
            std::accumulate(fit.begin(), fit.end(), 0.0) / static_cast<double>(lambda);
        res.stats.push_back(gs);
        res.generations_run = g + 1;

        if (cfg.stop_when_best_at_least &&
            res.best_fitness >= *cfg.stop_when_best_at_least)
            break;
    }
    return res;
}

}  // namespace evolab::opt
