#pragma once

// Hot-loop helpers: lifted projective angles along products of A + tB.

#include <cmath>
#include <vector>

#include "cocycle/family.hpp"
#include "cocycle/mat2.hpp"

namespace cocycle {

enum class AngleConvention {
    Polar,     // alpha(t) + atan2(u^Pu, u.Pu), alpha continued in t from t = 0
    Circle,    // per-step S^1 increment in (-pi, pi]
    HalfTurn,  // per-step projective increment in (-pi/2, pi/2]
};
const char* to_string(AngleConvention c);
AngleConvention parse_convention(const std::string& s);

struct StepData {
    Mat2d m;       // A + tB
    Mat2d b;       // B
    Mat2d p;       // polar factor of m
    double alpha;  // rotation angle of m, continuous in t
};

void step_table(const std::vector<Mat2d>& A, const std::vector<Mat2d>& B, double t, std::vector<StepData>& out);
inline std::vector<StepData> step_table(const Orbit& o, double t) {
    std::vector<StepData> s;
    step_table(o.A, o.B, t, s);
    return s;
}

inline void keep_scale(Vec2d& u) {
    double s = std::abs(u.x) + std::abs(u.y);
    if (s > 1e100 || s < 1e-100) {
        u.x /= s;
        u.y /= s;
    }
}

// S^1 angle from u to m u; u is advanced (not normalized)
inline double polar_step(const StepData& s, Vec2d& u) {
    Vec2d pu = s.p * u;
    double d = s.alpha + std::atan2(wedge(u, pu), dot(u, pu));
    u = s.m * u;
    return d;
}

inline double circle_step(const StepData& s, Vec2d& u) {
    Vec2d mu = s.m * u;
    double d = std::atan2(wedge(u, mu), dot(u, mu));
    u = mu;
    return d;
}

// counts increments landing within 1e-3 of the +-pi/2 boundary in `flag`
inline double halfturn_step(const StepData& s, Vec2d& u, long& flag) {
    Vec2d mu = s.m * u;
    double w = wedge(u, mu), c = dot(u, mu);
    double d = (c == 0) ? M_PI / 2 : std::atan(w / c);
    if (d == -M_PI / 2) d = M_PI / 2;
    if (std::abs(d) > M_PI / 2 - 1e-3) ++flag;
    u = mu;
    return d;
}

struct LiftEval {
    double phi = 0;       // lifted S^1 angle of M v, starting at arg(v)
    double speed = 0;     // (Mv ^ dM/dt v) / |Mv|^2
    double log_norm = 0;  // log |Mv|
    Vec2d dir;            // unit Mv
};

// one pass over the orbit at the table's parameter; speed only if requested
LiftEval lift_eval(const Orbit& o, const std::vector<StepData>& tab, const Vec2d& v, bool with_speed);

}  // namespace cocycle
