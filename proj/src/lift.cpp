#include "cocycle/lift.hpp"

#include <string>

namespace cocycle {

const char* to_string(AngleConvention c) {
    switch (c) {
        case AngleConvention::Polar: return "polar";
        case AngleConvention::Circle: return "circle";
        case AngleConvention::HalfTurn: return "halfturn";
    }
    return "?";
}

AngleConvention parse_convention(const std::string& s) {
    if (s == "polar") return AngleConvention::Polar;
    if (s == "circle") return AngleConvention::Circle;
    if (s == "halfturn") return AngleConvention::HalfTurn;
    throw DomainError("unknown angle convention '" + s + "' (polar|circle|halfturn)");
}

void step_table(const std::vector<Mat2d>& A, const std::vector<Mat2d>& B, double t, std::vector<StepData>& out) {
    out.resize(A.size());
    for (size_t i = 0; i < A.size(); ++i) {
        StepData& s = out[i];
        s.m = A[i] + B[i] * t;
        s.b = B[i];
        Polar p = polar(s.m);
        s.p = p.p;
        // continue the rotation angle from t = 0 along the affine path
        double a0 = polar(A[i]).alpha;
        s.alpha = polar_angle_continued(s.m, A[i], a0);
    }
}

LiftEval lift_eval(const Orbit& o, const std::vector<StepData>& tab, const Vec2d& v, bool with_speed) {
    LiftEval r;
    Vec2d u = unit(v);
    Vec2d du{0, 0};
    double lift = std::atan2(u.y, u.x);
    double ln = 0;
    const size_t n = o.size();
    if (!with_speed) {
        for (size_t j = 0; j < n; ++j) {
            lift += polar_step(tab[o.idx[j]], u);
            double s = std::abs(u.x) + std::abs(u.y);
            if (s > 1e64 || s < 1e-64) {
                ln += std::log(s);
                u.x /= s;
                u.y /= s;
            }
        }
    } else {
        for (size_t j = 0; j < n; ++j) {
            const StepData& s = tab[o.idx[j]];
            Vec2d bu = s.b * u;
            du = s.m * du + bu;
            lift += polar_step(s, u);
            double sc = std::abs(u.x) + std::abs(u.y);
            if (sc > 1e64 || sc < 1e-64) {
                ln += std::log(sc);
                u.x /= sc;
                u.y /= sc;
                du.x /= sc;
                du.y /= sc;
            }
        }
        r.speed = wedge(u, du) / dot(u, u);
    }
    double nn = norm(u);
    r.log_norm = ln + std::log(nn);
    r.dir = {u.x / nn, u.y / nn};
    r.phi = lift;
    return r;
}

}  // namespace cocycle
