#pragma once

// Gaussian-kernel scattered-data interpolation on the plane.
//
// Each sample point contributes an isotropic Gaussian weight
//   P_k(q) = (1 / (2 pi sigma_p^2)) exp(-(|q - p_k|^2) / (2 sigma_p^2))
// and the interpolated value is the weight-normalized sum of sample values.
// Far from all samples every weight underflows; the query then falls back to
// the nearest sample's value and is flagged as extrapolated.

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>

#include "evolab/core/angles.hpp"

namespace evolab::core {

struct LandscapePoint {
    double x = 0.0;
    double y = 0.0;
    double value = 0.0;
};

struct LandscapeConfig {
    double sigma_p = 0.1;  // kernel width, must be > 0
};

struct LandscapeSample {
    double value = 0.0;
    bool extrapolated = false;  // all kernel weights underflowed
};

inline LandscapeSample gaussian_landscape(std::span<const LandscapePoint> points,
                                          const LandscapeConfig& cfg,
                                          double qx, double qy) {
    if (points.empty())
        throw std::invalid_argument("gaussian_landscape: empty point set");
    if (!(cfg.sigma_p > 0.0))
        throw std::invalid_argument("gaussian_landscape: sigma_p must be > 0");

    const double inv_two_sigma2 = 1.0 / (2.0 * cfg.sigma_p * cfg.sigma_p);
    const double norm = inv_two_sigma2 / kPi;  // 1 / (2 pi sigma^2)

    double wsum = 0.0;
    double vsum = 0.0;
    double best_d2 = std::numeric_limits<double>::infinity();
    std::size_t best_k = 0;
    bool any_live = false;

    for (std::size_t k = 0; k < points.size(); ++k) {
        const double dx = qx - points[k].x;
        const double dy = qy - points[k].y;
        const double d2 = dx * dx + dy * dy;
        if (d2 < best_d2) {
            best_d2 = d2;
            best_k = k;
        }
        const double w = norm * std::exp(-d2 * inv_two_sigma2);
        if (w >= 1e-300) any_live = true;
        wsum += w;
        vsum += w * points[k].value;
    }

    if (!any_live) return {points[best_k].value, true};
    return {vsum / wsum, false};
}

}  // namespace evolab::core
