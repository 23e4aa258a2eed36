#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cocycle/asym.hpp"
#include "cocycle/family.hpp"

namespace cocycle {

// Weighted atoms on R. With `lo`/`hi` set, atom i stands for mass spread uniformly on [lo_i, hi_i].
struct EmpiricalMeasure1D {
    std::vector<double> atoms, weights;
    std::vector<double> lo, hi;

    bool cells() const { return !lo.empty(); }
    double total_mass() const;
    double cdf(double x) const;  // right-continuous
    double integrate(const std::function<double(double)>& phi) const;
    // sort, merge atoms closer than tol
    static EmpiricalMeasure1D from_points(std::vector<std::pair<double, double>> pts, double tol = 1e-12);
};

double ks_distance(const EmpiricalMeasure1D& a, const EmpiricalMeasure1D& b);

struct AtomCollision : DomainError {
    using DomainError::DomainError;
};
double log_potential(cplx t, const EmpiricalMeasure1D& m);

struct RootOptions {
    int max_resamples = 8;
    double tol = 1e-12;
    bool allow_resample = true;
};
struct RootsResult {
    std::vector<double> roots;
    Vec2d v_used;
    int resamples = 0;
    int clusters = 0;  // roots assigned to a common point below resolution
    double T = 0;      // bracket [-T, T]
    long evaluations = 0;
};
// n roots of <A_t^n v, w> from the monotone lifted angle
RootsResult roots_of_entry(const Orbit& word, const Vec2d& v, const Vec2d& w, const RootOptions& opt = {});
RootsResult roots_of_entry(const AffineFamily& f, const std::vector<uint32_t>& word, const Vec2d& v, const Vec2d& w,
                           const RootOptions& opt = {});

struct DrhoRoots {
    EmpiricalMeasure1D measure;
    std::vector<std::vector<double>> per_word;
    double min_root = 0, max_root = 0;
    bool support_growth_flag = false;
    int resamples = 0;
    int clusters = 0;
};
DrhoRoots drho_from_roots(const AffineFamily& f, size_t n, size_t samples, const Vec2d& v = {1, 0},
                          const Vec2d& w = {1, 0}, int workers = 0, uint64_t stream_offset = 0);

struct DrhoRotation {
    EmpiricalMeasure1D measure;  // cells
    RhoGrid grid;
    int negative_flags = 0;      // increments below -2/(pi n)
};
DrhoRotation drho_from_rotation(const AffineFamily& f, const std::vector<double>& t_grid, size_t n, size_t samples,
                                const RotationOptions& opt = {});
DrhoRotation drho_from_grid(const RhoGrid& g);

struct SupportInfo {
    double a = 0;              // grid half-width [-a, a]
    double lo = 0, hi = 0;     // first/last cell with increment above tol
};
SupportInfo detect_support(const AffineFamily& f, size_t n = 2000, size_t samples = 16, double tol = 1e-4,
                           int workers = 0);

std::vector<double> linspace(double a, double b, size_t n);
// support-covering grid with the given step, as used by the rotation route
std::vector<double> rotation_support_grid(const AffineFamily& f, double step, int workers = 0,
                                          SupportInfo* info = nullptr);

enum class DrhoSource { Roots, Rotation };
const char* to_string(DrhoSource s);

struct ThoulessOptions {
    size_t n = 10000;
    size_t samples = 400;
    DrhoSource source = DrhoSource::Rotation;
    size_t roots_n = 0;        // 0: min(n, 1000)
    size_t roots_samples = 0;  // 0: samples
    double grid_step = 0.02;   // rotation route cell width
    double delta = 1e-3;       // offset for real t
    bool require_assumptions = true;
    int workers = 0;
    McOptions mc;
    const RhoGrid* rotation = nullptr;  // reuse a grid from rotation_support_grid (same family, n, samples)
};

struct ThoulessReport {
    cplx t_requested, t;
    double delta = 0;
    ScalarEstimate lhs;
    double l1b = 0;
    std::string l1b_method;
    double potential = 0, potential_se = 0;
    double residual = 0, residual_se = 0;
    DrhoSource source = DrhoSource::Rotation;
    double support_lo = 0, support_hi = 0;
    size_t n = 0, samples = 0;
};
ThoulessReport thouless_residual(const AffineFamily& f, cplx t, const ThoulessOptions& opt = {});

struct LogConcavity {
    double min_defect = 0;  // min over grid of (f'^2 - f f'') / (f'^2 + |f f''|); pass needs > 0
    bool pass = false;
    int checked = 0;
};
LogConcavity log_concavity_check(const AffineFamily& f, const std::vector<uint32_t>& word, const Vec2d& v,
                                 const Vec2d& w, const std::vector<double>& t_grid = {});

struct TraceRoots {
    std::vector<double> roots;
    std::vector<double> extrema;      // critical points between consecutive roots
    double min_abs_extremum = 0;      // min |tr| over those critical points
    double min_abs_derivative = 0;    // min |tr'| over the roots
    bool extrema_outside = false;     // every interior extremum has |tr| >= 2
};
struct ProductVanishes : NumericalError {
    using NumericalError::NumericalError;
};
TraceRoots trace_roots(const AffineFamily& f, const std::vector<uint32_t>& word);

// text formats
std::string measure_to_text(const EmpiricalMeasure1D& m);
EmpiricalMeasure1D measure_from_text(const std::string& s);
std::string report_to_kv(const ThoulessReport& r);
std::string report_to_json(const ThoulessReport& r);

}  // namespace cocycle
