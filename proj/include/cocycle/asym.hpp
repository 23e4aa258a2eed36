#pragma once

#include <vector>

#include "cocycle/family.hpp"
#include "cocycle/lift.hpp"

namespace cocycle {

struct ScalarEstimate {
    double value = 0;
    double std_error = 0;
    long n_steps = 0;
    long n_samples = 0;
};

// mean and standard error of per-sample values
ScalarEstimate summarize(const std::vector<double>& xs, long n_steps);

struct McOptions {
    int workers = 0;
    size_t burn = 256;           // discarded warm-up steps per orbit
    uint64_t stream_offset = 0;  // first Monte Carlo stream
};

ScalarEstimate lyapunov(const AffineFamily& f, cplx t, size_t n, size_t samples, const McOptions& opt = {});
inline ScalarEstimate lyapunov(const AffineFamily& f, double t, size_t n, size_t samples, const McOptions& opt = {}) {
    return lyapunov(f, cplx(t, 0), n, samples, opt);
}

// finite-n quantity E[(1/n) log ||A_t^n||] : exact over all words, and Monte Carlo
double lyapunov_words_exact(const AffineFamily& f, double t, int n);
ScalarEstimate lyapunov_words_mc(const AffineFamily& f, double t, int n, size_t samples, const McOptions& opt = {});
// limit oracle: E log|A^n v| - E log|A^{n-1} v| over all words
double lyapunov_increment_exact(const AffineFamily& f, double t, int n, const Vec2d& v = {1, 0});

double lyapunov_rank1_exact(const AffineFamily& f);
// direct iteration of the B cocycle
ScalarEstimate lyapunov_B(const AffineFamily& f, size_t n, size_t samples, const McOptions& opt = {});

double winding_speed(const Mat2d& A, const Mat2d& B, double t, const Vec2d& v);
double winding_speed(const AffineFamily& f, uint32_t symbol, double t, const Vec2d& v);

struct WindingSpeedN {
    double product_rule = 0;
    double summation = 0;
};
WindingSpeedN winding_speed_n(const Orbit& o, double t, const Vec2d& v);

struct RotationOptions {
    AngleConvention convention = AngleConvention::Polar;
    int workers = 0;
    uint64_t stream_offset = 0;
    Vec2d v0{0.8134732861516011, 0.5816155720471716};  // generic start direction
};

// rho on a grid with common random numbers: every t uses the same orbits
struct RhoGrid {
    std::vector<double> t;
    std::vector<double> rho;     // mean over samples
    std::vector<double> se;      // standard error of rho(t_i)
    std::vector<double> rel_se;  // standard error of rho(t_i) - rho(t_0)
    std::vector<std::vector<double>> per_sample;  // [sample][i]
    long guard_flags = 0;  // halfturn convention: near-boundary increments
    size_t n = 0;
    double rel(size_t i) const { return rho[i] - rho[0]; }
};
RhoGrid rotation_grid(const AffineFamily& f, const std::vector<double>& t_grid, size_t n, size_t samples,
                      const RotationOptions& opt = {});
ScalarEstimate rotation_number(const AffineFamily& f, double t, size_t n, size_t samples,
                               const RotationOptions& opt = {});

struct WindingLength {
    double length = 0;           // quadrature over J (+ tails for the real line)
    double lift_difference = 0;  // phi(hi) - phi(lo), exact for monotone winding
    double tail = 0;             // tail angles added (real line only)
    double tail_bound = 0;
    double T = 0;
    long evaluations = 0;
    long unresolved_panels = 0;  // panels closed with the lift difference instead of Simpson
};
WindingLength winding_length(const Orbit& o, const Vec2d& v, double lo, double hi, double rel_tol = 1e-6);
// J = R: [-T, T] plus tail angles towards the direction of B^n v; T grows until the tail bound < tail_tol
WindingLength winding_length_line(const Orbit& o, const Vec2d& v, double tail_tol = 1e-4, double rel_tol = 1e-6);

struct UhProbe {
    double min_growth_rate = 0;
    double orbit_growth = 0;  // min over sampled orbits of (1/n) log ||A^n||
    double word_growth = 0;   // min over short words of (1/|w|) log spectral radius
    bool verdict = false;
};
UhProbe uh_probe(const AffineFamily& f, double t, size_t n, size_t samples, double threshold = 0.02,
                 int word_len = 8, const McOptions& opt = {});

double spectral_radius(const Mat2d& m);

}  // namespace cocycle
