#pragma once

// Scalar brightness fields over a square arena [0, side] x [0, side].
//
// Values live in [0, 255] everywhere (255 = brightest). Four shapes:
//
//   center   cone peaking at the arena center:
//            255 * clamp(1 - |p - c| / (side/2), 0, 1)
//   bimodal  max of two center-style cones with radius side/4, centered at
//            c +- (side/4, 0), peaks 255 (right) and 200 (left)
//   linear   ramp along x: 255 * clamp((p.x - c.x)/side + 1/2, 0, 1)
//   banana   curved ridge: 255 * exp(-rosenbrock((p - c)/s) / kappa) with
//            s = side/6 and kappa = 100; the single maximum (255) sits at
//            c + (s, s)

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>

namespace evolab::sim {

enum class FieldKind { center, bimodal, linear, banana };

inline const char* to_string(FieldKind k) {
    switch (k) {
        case FieldKind::center: return "center";
        case FieldKind::bimodal: return "bimodal";
        case FieldKind::linear: return "linear";
        case FieldKind::banana: return "banana";
    }
    return "?";
}

inline FieldKind field_kind_from_string(const std::string& s) {
    if (s == "center") return FieldKind::center;
    if (s == "bimodal") return FieldKind::bimodal;
    if (s == "linear") return FieldKind::linear;
    if (s == "banana") return FieldKind::banana;
    throw std::invalid_argument("unknown field kind: " + s);
}

class ScalarField {
  public:
    static constexpr double kMaxValue = 255.0;

    ScalarField(FieldKind kind, double arena_side) : kind_(kind), side_(arena_side) {
        if (!(arena_side > 0.0))
            throw std::invalid_argument("field: arena_side must be > 0");
    }

    FieldKind kind() const { return kind_; }
    double arena_side() const { return side_; }

    double value(double x, double y) const {
        const double cx = side_ / 2.0;
        const double cy = side_ / 2.0;
        switch (kind_) {
            case FieldKind::center:
                return cone(x, y, cx, cy, side_ / 2.0, kMaxValue);
            case FieldKind::bimodal:
                return std::max(cone(x, y, cx + side_ / 4.0, cy, side_ / 4.0, 255.0),
                                cone(x, y, cx - side_ / 4.0, cy, side_ / 4.0, 200.0));
            case FieldKind::linear:
                return kMaxValue * clamp01((x - cx) / side_ + 0.5);
            case FieldKind::banana: {
                const double s = side_ / 6.0;
                const double u = (x - cx) / s;
                const double v = (y - cy) / s;
                const double r = (1.0 - u) * (1.0 - u) +
                                 100.0 * (v - u * u) * (v - u * u);
                return kMaxValue * std::exp(-r / 100.0);
            }
        }
        return 0.0;
    }

  private:
    static double clamp01(double t) { return std::clamp(t, 0.0, 1.0); }

    static double cone(double x, double y, double px, double py, double radius,
                       double peak) {
        const double d = std::hypot(x - px, y - py);
        return peak * clamp01(1.0 - d / radius);
    }

    FieldKind kind_;
    double side_;
};

inline ScalarField make_field(FieldKind kind, double arena_side) {
    return ScalarField(kind, arena_side);
}

// Dense grid dump: header x,y,value; resolution samples per axis at cell
// centers.
inline void write_field_grid_csv(std::ostream& os, const ScalarField& field,
                                 int resolution) {
    if (resolution <= 0)
        throw std::invalid_argument("field grid: resolution must be > 0");
    os << "x,y,value\n";
    const double step = field.arena_side() / resolution;
    char buf[96];
    for (int iy = 0; iy < resolution; ++iy) {
        for (int ix = 0; ix < resolution; ++ix) {
            const double x = (ix + 0.5) * step;
            const double y = (iy + 0.5) * step;
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", x, y,
                          field.value(x, y));
            os << buf;
        }
    }
}

}  // namespace evolab::sim
