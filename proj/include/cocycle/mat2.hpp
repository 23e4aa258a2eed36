#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <string>

namespace cocycle {

// bad input (non-positive det, nilpotency mismatch, ...)
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
// an internal numerical contract could not be met
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

template <class S>
struct Vec2 {
    S x{}, y{};
    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(S s) const { return {x * s, y * s}; }
    bool operator==(const Vec2&) const = default;
};

template <class S>
struct Mat2 {
    S a11{}, a12{}, a21{}, a22{};

    static Mat2 identity() { return {S(1), S(0), S(0), S(1)}; }
    static Mat2 diag(S d1, S d2) { return {d1, S(0), S(0), d2}; }

    S det() const { return a11 * a22 - a12 * a21; }
    S trace() const { return a11 + a22; }

    Mat2 operator+(const Mat2& o) const { return {a11 + o.a11, a12 + o.a12, a21 + o.a21, a22 + o.a22}; }
    Mat2 operator-(const Mat2& o) const { return {a11 - o.a11, a12 - o.a12, a21 - o.a21, a22 - o.a22}; }
    Mat2 operator*(S s) const { return {a11 * s, a12 * s, a21 * s, a22 * s}; }
    Mat2 operator*(const Mat2& o) const {
        return {a11 * o.a11 + a12 * o.a21, a11 * o.a12 + a12 * o.a22,
                a21 * o.a11 + a22 * o.a21, a21 * o.a12 + a22 * o.a22};
    }
    Vec2<S> operator*(const Vec2<S>& v) const { return {a11 * v.x + a12 * v.y, a21 * v.x + a22 * v.y}; }
    bool operator==(const Mat2&) const = default;

    Mat2 transpose() const { return {a11, a21, a12, a22}; }
    Mat2 inverse() const {
        S d = det();
        return {a22 / d, -a12 / d, -a21 / d, a11 / d};
    }
    // adjugate: inverse without the division, exact for SL2
    Mat2 adjugate() const { return {a22, -a12, -a21, a11}; }
};

using Vec2d = Vec2<double>;
using Mat2d = Mat2<double>;
using cplx = std::complex<double>;
using Vec2c = Vec2<cplx>;
using Mat2c = Mat2<cplx>;

template <class S>
Mat2<S> operator*(S s, const Mat2<S>& m) { return m * s; }

inline Mat2c to_complex(const Mat2d& m) { return {m.a11, m.a12, m.a21, m.a22}; }

inline double max_abs(const Mat2d& m) {
    return std::max(std::max(std::abs(m.a11), std::abs(m.a12)), std::max(std::abs(m.a21), std::abs(m.a22)));
}
inline double frob(const Mat2d& m) { return std::hypot(std::hypot(m.a11, m.a12), std::hypot(m.a21, m.a22)); }

inline double wedge(const Vec2d& v, const Vec2d& w) { return v.x * w.y - v.y * w.x; }
inline double dot(const Vec2d& v, const Vec2d& w) { return v.x * w.x + v.y * w.y; }
inline double norm(const Vec2d& v) { return std::hypot(v.x, v.y); }
inline Vec2d unit(const Vec2d& v) { double n = norm(v); return {v.x / n, v.y / n}; }
inline Vec2d dir(double theta) { return {std::cos(theta), std::sin(theta)}; }
// rotate by +pi/2
inline Vec2d perp(const Vec2d& v) { return {-v.y, v.x}; }

// d(v, w) = |sin angle|
inline double proj_dist(const Vec2d& v, const Vec2d& w) { return std::abs(wedge(v, w)) / (norm(v) * norm(w)); }

// angle of the projective point in [0, pi)
inline double proj_angle(const Vec2d& v) {
    double a = std::atan2(v.y, v.x);
    if (a < 0) a += M_PI;
    if (a >= M_PI) a -= M_PI;
    return a;
}

// spectral norm, closed form
double op_norm(const Mat2d& a);

template <class S>
S det_affine(const Mat2d& e, S t) {
    return S(1) + t * e.trace() + t * t * e.det();
}

Mat2d e_sharp(const Mat2d& e);
inline double discriminant(const Mat2d& e) { return 4.0 * e.det() - e.trace() * e.trace(); }
// max(|e11 - e22|, 2|e12|, 2|e21|); zero iff E is a multiple of I
double xi(const Mat2d& e);

enum class Definiteness { PositiveDefinite, PositiveSemidefinite, NegativeDefinite, NegativeSemidefinite, Indefinite, Zero };
const char* to_string(Definiteness d);

struct WindingClass {
    Definiteness tag = Definiteness::Zero;
    double discriminant = 0;
    std::optional<Vec2d> eig_dir;  // semidefinite cases only
};

WindingClass winding_class(const Mat2d& e);
// +1 / -1 for (semi)definite classes, 0 otherwise
int winding_sign(Definiteness d);

struct ConeCoords {
    double r = 0;
    double theta = 0;
};
Mat2d cone_embed(const ConeCoords& c);
// theta is returned in [0, pi); (r, theta + pi) gives the same matrix
ConeCoords cone_coords(const Mat2d& e);

struct SingularFrame {
    Vec2d vbar, vund, vbar_star, vund_star;
    double norm = 0, conorm = 0;
    bool degenerate = false;
};
SingularFrame singular_frame(const Mat2d& a);

double dist_to_least_singular(const Mat2d& a, const Vec2d& v);

struct GammaMatch {
    Vec2d e1, e2;  // unit representatives
    double margin = 0;
};
// conditions (1)-(3) replayed on stored directions
bool gamma_conditions_hold(const Mat2d& b, const Mat2d& a, double gamma, const Vec2d& e1, const Vec2d& e2);
std::optional<GammaMatch> gamma_matching(const Mat2d& b, const Mat2d& a, double gamma);

double almost_turn_gap(const Mat2d& b, const Mat2d& a, double gamma, const Vec2d& v, const Vec2d& w);

// Polar splitting A = R(alpha) P with P symmetric positive definite (det A > 0).
// The S^1 angle from v to Av is alpha + atan2(v^Pv, v.Pv), continuous in v.
struct Polar {
    double alpha = 0;
    Mat2d p;
};
Polar polar(const Mat2d& a);
// angle of the rotation part, continued from a reference matrix
double polar_angle_continued(const Mat2d& a, const Mat2d& ref, double ref_alpha);

// lifted projective angle; theta is never reduced
struct ProjAngle {
    double theta = 0;
    double reduced() const {
        double r = std::fmod(theta, M_PI);
        if (r < 0) r += M_PI;
        return r >= M_PI ? 0.0 : r;
    }
};

}  // namespace cocycle
