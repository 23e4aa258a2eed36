#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "cocycle/base.hpp"
#include "cocycle/mat2.hpp"

namespace cocycle {

enum class BaseKind { Bernoulli, Torus };

// Torus families are Schroedinger-type with a named potential so they can be serialized.
struct TorusPotential {
    std::string kind = "cosine";  // "cosine": lambda cos(2 pi (x + phase)); "identity": lambda x
    double lambda = 1.0;
    double phase = 0.0;
    double operator()(double x) const;
};

struct AffineFamily {
    BaseKind kind = BaseKind::Bernoulli;
    BernoulliBase bernoulli;
    TorusBase torus;
    // Bernoulli: per-symbol data, B = A E
    std::vector<Mat2d> A, E, B;
    // torus: phase maps
    std::function<Mat2d(double)> A_phase, E_phase;
    TorusPotential potential;  // set for serializable torus families
    bool torus_serializable = false;
    std::string preset;        // informational tag

    int kappa() const { return static_cast<int>(A.size()); }
    bool bernoulli_base() const { return kind == BaseKind::Bernoulli; }
    Mat2d A_at_phase(double x) const { return A_phase(x); }
    Mat2d B_at_phase(double x) const { return A_phase(x) * E_phase(x); }
};

AffineFamily make_family(const BernoulliBase& base, const std::vector<Mat2d>& A, const std::vector<Mat2d>& E);
// det A > 0 is validated on a phase grid
AffineFamily make_torus_family(const TorusBase& base, std::function<Mat2d(double)> A_of,
                               std::function<Mat2d(double)> E_of, int grid = 4096);
AffineFamily schrodinger_family(const BernoulliBase& base, const std::vector<double>& potential);
AffineFamily schrodinger_family(const TorusBase& base, const TorusPotential& v);

inline Mat2d schrodinger_A(double v) { return {v, -1.0, 1.0, 0.0}; }
inline Mat2d schrodinger_E() { return {0.0, 0.0, 1.0, 0.0}; }

Mat2d evaluate(const AffineFamily& f, uint32_t symbol, double t);
Mat2c evaluate(const AffineFamily& f, uint32_t symbol, cplx t);
Mat2d evaluate_phase(const AffineFamily& f, double x, double t);
Mat2c evaluate_phase(const AffineFamily& f, double x, cplx t);

// A finite orbit segment: table of distinct factors plus the application order.
struct Orbit {
    std::vector<Mat2d> A, B;
    std::vector<uint32_t> idx;  // idx[0] is applied first
    size_t size() const { return idx.size(); }
    Mat2d at(size_t j, double t) const { return A[idx[j]] + B[idx[j]] * t; }
    Mat2d a(size_t j) const { return A[idx[j]]; }
    Mat2d b(size_t j) const { return B[idx[j]]; }
};

// Monte Carlo sample number `stream` of length n (Bernoulli: counter RNG; torus: start phase)
Orbit sample(const AffineFamily& f, uint64_t stream, size_t n);
void sample(const AffineFamily& f, uint64_t stream, size_t n, Orbit& out);
// Bernoulli word, symbols in application order
Orbit word_orbit(const AffineFamily& f, const std::vector<uint32_t>& word);

// renormalized product, P = exp(log_scale) * m with max|m| = 1
struct ScaledMat {
    Mat2d m = Mat2d::identity();
    double log_scale = 0;
    void normalize();
    void left_mul(const Mat2d& a) {
        m = a * m;
        normalize();
    }
};
ScaledMat product(const Orbit& o, double t, size_t from = 0, size_t to = std::numeric_limits<size_t>::max());
ScaledMat product_B(const Orbit& o);

struct IterateResult {
    double log_norm = 0;  // log ||A_t^n v||
    ProjAngle proj;       // lift of the projective direction of A_t^n v (polar convention)
    Vec2d dir;            // unit direction of A_t^n v
    ScaledMat frame;      // renormalized A_t^n
};
IterateResult iterate(const Orbit& o, double t, const Vec2d& v);

struct IterateComplex {
    double log_norm = 0;
    Vec2c dir;
};
IterateComplex iterate(const Orbit& o, cplx t, const Vec2c& v);

struct MatrixPolynomial {
    int degree = 0;
    std::vector<Mat2<long double>> coeffs;  // scaled, C_0 .. C_n
    double scale_log = 0;

    // sum C_k t^k, without exp(scale_log)
    Mat2<long double> eval_scaled(long double t) const;
    Mat2d evaluate(double t) const;
    // scalar polynomial <C_k v, w>
    std::vector<long double> entry(const Vec2d& v, const Vec2d& w) const;
    std::vector<long double> trace() const;
};
constexpr int kMaxPolyDegree = 60;
MatrixPolynomial matrix_polynomial(const Orbit& o);
MatrixPolynomial matrix_polynomial(const AffineFamily& f, const std::vector<uint32_t>& word);

// f, f', f'' by Horner
struct PolyEval {
    long double f = 0, d1 = 0, d2 = 0;
};
PolyEval poly_eval(const std::vector<long double>& c, long double t);

struct InvertibilityReport {
    bool holds = false;
    double strip_R = 0;      // +inf when every E is nilpotent
    double det_floor_c = 0;  // |det A_t| >= c on the strip
};
struct WindingReport {
    int sign = 0;  // +1, -1, 0 (none)
    std::vector<WindingClass> classes;
};
struct DominatedReport {
    bool holds = false;
    bool rank1 = false;
    double chain_nonvanishing_floor = 0;  // min ||B_i B_j|| / max||B||^2
};
struct StrictWindingReport {
    double c_star = 0;
    int n0 = 2;
    double J_lo = 0, J_hi = 0;
};
struct AssumptionReport {
    InvertibilityReport invertibility;
    WindingReport winding;
    bool affine = true;
    DominatedReport dominated_splitting;
    StrictWindingReport strict_winding;
    bool certified = true;  // false for torus (sampled grid)
    bool all_hold() const {
        return invertibility.holds && winding.sign != 0 && affine && dominated_splitting.holds &&
               strict_winding.c_star > 0;
    }
};

struct AssumptionOptions {
    double J_lo = -3, J_hi = 3;
    int t_points = 101;
    int v_points = 0;  // 0: sized for about 1e5 samples
    int phase_grid = 4096;
};
AssumptionReport check_assumptions(const AffineFamily& f, const AssumptionOptions& opt = {});

// rank-1 split B = v w^t with |v| = 1; returns false if B is not rank 1
bool rank1_split(const Mat2d& b, Vec2d& v, Vec2d& w, double rel_tol = 1e-12);

}  // namespace cocycle
