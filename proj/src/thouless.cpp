#include "cocycle/thouless.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "cocycle/parallel.hpp"
#include "json.hpp"

namespace cocycle {

// ---------------------------------------------------------------- measures

double EmpiricalMeasure1D::total_mass() const {
    double s = 0;
    for (double w : weights) s += w;
    return s;
}

double EmpiricalMeasure1D::cdf(double x) const {
    double c = 0;
    if (!cells()) {
        auto it = std::upper_bound(atoms.begin(), atoms.end(), x);
        for (auto p = atoms.begin(); p != it; ++p) c += weights[p - atoms.begin()];
        return c;
    }
    for (size_t i = 0; i < atoms.size(); ++i) {
        if (x >= hi[i]) {
            c += weights[i];
        } else if (x > lo[i]) {
            c += weights[i] * (x - lo[i]) / (hi[i] - lo[i]);
        }
    }
    return c;
}

double EmpiricalMeasure1D::integrate(const std::function<double(double)>& phi) const {
    double s = 0;
    if (!cells()) {
        for (size_t i = 0; i < atoms.size(); ++i) s += weights[i] * phi(atoms[i]);
        return s;
    }
    // 5-point Gauss-Legendre per cell
    static const double x5[5] = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                                 0.9061798459386640};
    static const double w5[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889, 0.4786286704993665,
                                 0.2369268850561891};
    for (size_t i = 0; i < atoms.size(); ++i) {
        double m = 0.5 * (lo[i] + hi[i]), h = 0.5 * (hi[i] - lo[i]);
        double a = 0;
        for (int k = 0; k < 5; ++k) a += w5[k] * phi(m + h * x5[k]);
        s += weights[i] * 0.5 * a;
    }
    return s;
}

EmpiricalMeasure1D EmpiricalMeasure1D::from_points(std::vector<std::pair<double, double>> pts, double tol) {
    std::sort(pts.begin(), pts.end());
    EmpiricalMeasure1D m;
    for (auto& [x, w] : pts) {
        if (!m.atoms.empty() && x - m.atoms.back() < tol) {
            m.weights.back() += w;
        } else {
            m.atoms.push_back(x);
            m.weights.push_back(w);
        }
    }
    return m;
}

double ks_distance(const EmpiricalMeasure1D& a, const EmpiricalMeasure1D& b) {
    std::vector<double> xs;
    auto add = [&](const EmpiricalMeasure1D& m) {
        xs.insert(xs.end(), m.atoms.begin(), m.atoms.end());
        xs.insert(xs.end(), m.lo.begin(), m.lo.end());
        xs.insert(xs.end(), m.hi.begin(), m.hi.end());
    };
    add(a);
    add(b);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    double d = 0;
    for (double x : xs) {
        // right limits and left limits
        d = std::max(d, std::abs(a.cdf(x) - b.cdf(x)));
        double xl = std::nextafter(x, -std::numeric_limits<double>::infinity());
        d = std::max(d, std::abs(a.cdf(xl) - b.cdf(xl)));
    }
    return d;
}

namespace {

// Re of the antiderivative of log(t - s) in s
double re_antiderivative(cplx t, double s) {
    double x = t.real() - s, y = t.imag();
    double r = std::hypot(x, y);
    if (r == 0) return 0.0;
    double zlogz = x * std::log(r) - (y != 0 ? y * std::atan2(y, x) : 0.0);
    return -zlogz + x;
}

// average of log|t - s| over s in [a, b]
double cell_log_average(cplx t, double a, double b) {
    if (b - a <= 1e-12 * std::max(1.0, std::abs(a))) return std::log(std::abs(t - 0.5 * (a + b)));
    return (re_antiderivative(t, b) - re_antiderivative(t, a)) / (b - a);
}

}  // namespace

double log_potential(cplx t, const EmpiricalMeasure1D& m) {
    double s = 0;
    if (m.cells()) {
        for (size_t i = 0; i < m.atoms.size(); ++i) s += m.weights[i] * cell_log_average(t, m.lo[i], m.hi[i]);
        return s;
    }
    for (size_t i = 0; i < m.atoms.size(); ++i) {
        double d = std::abs(t - m.atoms[i]);
        if (t.imag() == 0 && d < 1e-9)
            throw AtomCollision("AtomCollision: real t within 1e-9 of an atom at " + std::to_string(m.atoms[i]));
        s += m.weights[i] * std::log(d);
    }
    return s;
}

std::vector<double> linspace(double a, double b, size_t n) {
    std::vector<double> g(n);
    if (n == 1) {
        g[0] = a;
        return g;
    }
    for (size_t i = 0; i < n; ++i) g[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    g.back() = b;
    return g;
}

std::vector<double> rotation_support_grid(const AffineFamily& f, double step, int workers, SupportInfo* info) {
    SupportInfo si = detect_support(f, 2000, 16, 1e-4, workers);
    if (info) *info = si;
    double lo = si.lo - 0.25, hi = si.hi + 0.25;
    size_t G = static_cast<size_t>(std::ceil((hi - lo) / step)) + 1;
    return linspace(lo, hi, G);
}

const char* to_string(DrhoSource s) { return s == DrhoSource::Roots ? "roots" : "rotation"; }

// ---------------------------------------------------------------- roots

namespace {

struct RootSolver {
    const Orbit& o;
    Vec2d v;
    double sgn = 1;
    double c = 0;  // target offset: roots at sgn*phi = c + k pi
    double tol = 1e-12;
    std::vector<StepData> tab{};
    std::vector<double>* out = nullptr;
    int clusters = 0;
    long evals = 0;

    LiftEval eval(double t, bool speed) {
        step_table(o.A, o.B, t, tab);
        ++evals;
        return lift_eval(o, tab, v, speed);
    }
    double G(double t) { return sgn * eval(t, false).phi; }

    double newton(double a, double b, double Ga, double Gb, double target) {
        double t = a + (b - a) * (target - Ga) / (Gb - Ga);
        if (!(t > a && t < b)) t = 0.5 * (a + b);
        for (int it = 0; it < 200; ++it) {
            LiftEval e = eval(t, true);
            double g = sgn * e.phi - target;
            double d = sgn * e.speed;
            if (g == 0) return t;
            if (g < 0) a = t; else b = t;
            double res = std::max(tol, 4 * std::numeric_limits<double>::epsilon() * std::abs(t));
            if (b - a <= res) return 0.5 * (a + b);
            double tn = t - g / d;
            if (!(d > 0) || !(tn > a && tn < b)) tn = 0.5 * (a + b);
            if (std::abs(tn - t) <= 0.1 * res) return tn;
            t = tn;
        }
        return t;
    }

    void solve(double a, double b, double Ga, double Gb, long klo, long khi, int depth) {
        if (klo > khi) return;
        if (klo == khi) {
            out->push_back(newton(a, b, Ga, Gb, c + klo * M_PI));
            return;
        }
        double res = std::max(tol, 8 * std::numeric_limits<double>::epsilon() * std::max(std::abs(a), std::abs(b)));
        if (b - a <= res || depth > 200) {
            double m = 0.5 * (a + b);
            for (long k = klo; k <= khi; ++k) out->push_back(m);
            clusters += static_cast<int>(khi - klo);
            return;
        }
        double m = 0.5 * (a + b);
        double Gm = G(m);
        // targets strictly below Gm go left
        long kl = static_cast<long>(std::ceil((Gm - c) / M_PI)) - 1;  // largest k with c + k pi < Gm
        kl = std::clamp(kl, klo - 1, khi);
        if (c + (kl + 1) * M_PI == Gm && kl + 1 <= khi) {
            // exact hit
            out->push_back(m);
            solve(a, m, Ga, Gm, klo, kl, depth + 1);
            solve(m, b, Gm, Gb, kl + 2, khi, depth + 1);
            return;
        }
        solve(a, m, Ga, Gm, klo, kl, depth + 1);
        solve(m, b, Gm, Gb, kl + 1, khi, depth + 1);
    }
};

}  // namespace

RootsResult roots_of_entry(const Orbit& o, const Vec2d& v, const Vec2d& w, const RootOptions& opt) {
    const size_t n = o.size();
    if (n == 0) throw DomainError("roots_of_entry: empty word");
    RootsResult r;
    ScaledMat pb = product_B(o);
    double nb = op_norm(pb.m);
    if (!(nb > 0)) throw NumericalError("DegreeDeficient: B_n...B_1 = 0");
    Vec2d vv = unit(v), ww = unit(w);
    CounterRng rng(0x5EED5EEDULL, n);
    for (;;) {
        double lead = std::abs(dot(pb.m * vv, ww)) / nb;
        if (lead > 1e-10) break;
        if (!opt.allow_resample || r.resamples >= opt.max_resamples)
            throw NumericalError("DegreeDeficient: <B^n v, w> = 0 after " + std::to_string(r.resamples) +
                                 " resamples of v");
        vv = dir(M_PI * rng.uniform());
        ++r.resamples;
    }
    r.v_used = vv;

    RootSolver rs{o, vv, 1.0, 0.0, opt.tol};
    std::vector<double> roots;
    rs.out = &roots;
    double T = 2;
    double Glo = 0, Ghi = 0;
    long kmin = 0, kmax = -1;
    for (;;) {
        double plo = rs.eval(-T, false).phi, phi_hi = rs.eval(T, false).phi;
        rs.sgn = phi_hi >= plo ? 1.0 : -1.0;
        rs.c = rs.sgn * (std::atan2(ww.y, ww.x) + M_PI / 2);
        Glo = rs.sgn * plo;
        Ghi = rs.sgn * phi_hi;
        kmin = static_cast<long>(std::floor((Glo - rs.c) / M_PI)) + 1;
        kmax = static_cast<long>(std::ceil((Ghi - rs.c) / M_PI)) - 1;
        long count = kmax - kmin + 1;
        if (count == static_cast<long>(n)) break;
        if (count > static_cast<long>(n))
            throw NumericalError("BracketFailure: " + std::to_string(count) + " crossings on [-" + std::to_string(T) +
                                 ", " + std::to_string(T) + "] exceed the degree " + std::to_string(n) +
                                 " (family not winding?)");
        T *= 2;
        if (T > 1e15)
            throw NumericalError("BracketFailure: only " + std::to_string(count) + " of " + std::to_string(n) +
                                 " crossings found on [-1e15, 1e15]");
    }
    r.T = T;
    rs.solve(-T, T, Glo, Ghi, kmin, kmax, 0);
    std::sort(roots.begin(), roots.end());
    r.roots = std::move(roots);
    r.clusters = rs.clusters;
    r.evaluations = rs.evals;
    return r;
}

RootsResult roots_of_entry(const AffineFamily& f, const std::vector<uint32_t>& word, const Vec2d& v, const Vec2d& w,
                           const RootOptions& opt) {
    return roots_of_entry(word_orbit(f, word), v, w, opt);
}

DrhoRoots drho_from_roots(const AffineFamily& f, size_t n, size_t samples, const Vec2d& v, const Vec2d& w,
                          int workers, uint64_t stream_offset) {
    DrhoRoots d;
    d.per_word.resize(samples);
    std::vector<int> res(samples, 0), cl(samples, 0);
    parallel_for(samples, workers, [&](size_t s) {
        Orbit o = sample(f, stream_offset + s, n);
        RootsResult r = roots_of_entry(o, v, w);
        d.per_word[s] = std::move(r.roots);
        res[s] = r.resamples;
        cl[s] = r.clusters;
    });
    std::vector<std::pair<double, double>> pts;
    pts.reserve(n * samples);
    double wt = 1.0 / (static_cast<double>(n) * samples);
    d.min_root = std::numeric_limits<double>::infinity();
    d.max_root = -d.min_root;
    for (size_t s = 0; s < samples; ++s) {
        for (double x : d.per_word[s]) {
            pts.emplace_back(x, wt);
            d.min_root = std::min(d.min_root, x);
            d.max_root = std::max(d.max_root, x);
        }
        d.resamples += res[s];
        d.clusters += cl[s];
    }
    d.measure = EmpiricalMeasure1D::from_points(std::move(pts));
    if (n >= 8) {
        // compact support: the root range should not grow with n
        size_t s2 = std::max<size_t>(samples / 4, 1);
        double lo2 = std::numeric_limits<double>::infinity(), hi2 = -lo2;
        for (size_t s = 0; s < s2; ++s) {
            Orbit o = sample(f, stream_offset + s, n / 2);
            for (double x : roots_of_entry(o, v, w).roots) {
                lo2 = std::min(lo2, x);
                hi2 = std::max(hi2, x);
            }
        }
        double w2 = std::max(std::abs(lo2), std::abs(hi2));
        double w1 = std::max(std::abs(d.min_root), std::abs(d.max_root));
        d.support_growth_flag = w1 > 1.25 * w2 + 0.1;
    }
    return d;
}

DrhoRotation drho_from_rotation(const AffineFamily& f, const std::vector<double>& t_grid, size_t n, size_t samples,
                                const RotationOptions& opt) {
    for (size_t i = 1; i < t_grid.size(); ++i)
        if (!(t_grid[i] > t_grid[i - 1])) throw DomainError("drho_from_rotation: t grid must be increasing");
    return drho_from_grid(rotation_grid(f, t_grid, n, samples, opt));
}

DrhoRotation drho_from_grid(const RhoGrid& g) {
    DrhoRotation d;
    d.grid = g;
    const auto& t_grid = g.t;
    double slack = 2.0 / (M_PI * static_cast<double>(g.n));
    for (size_t i = 0; i + 1 < t_grid.size(); ++i) {
        double inc = d.grid.rho[i + 1] - d.grid.rho[i];
        if (inc < -slack) ++d.negative_flags;
        if (inc <= 0) continue;
        d.measure.lo.push_back(t_grid[i]);
        d.measure.hi.push_back(t_grid[i + 1]);
        d.measure.atoms.push_back(0.5 * (t_grid[i] + t_grid[i + 1]));
        d.measure.weights.push_back(inc);
    }
    return d;
}

SupportInfo detect_support(const AffineFamily& f, size_t n, size_t samples, double tol, int workers) {
    SupportInfo si;
    double a = 4;
    RotationOptions ro;
    ro.workers = workers;
    for (int it = 0; it < 40; ++it) {
        const size_t G = 81;
        auto grid = linspace(-a, a, G);
        RhoGrid g = rotation_grid(f, grid, n, samples, ro);
        double left = 0, right = 0;
        for (size_t i = 0; i + 1 < G; ++i) {
            double inc = g.rho[i + 1] - g.rho[i];
            if (grid[i + 1] <= -0.9 * a) left += inc;
            if (grid[i] >= 0.9 * a) right += inc;
        }
        if ((left < tol && right < tol) || a > 1e4) {
            si.a = a;
            si.lo = -a;
            si.hi = a;
            for (size_t i = 0; i + 1 < G; ++i)
                if (g.rho[i + 1] - g.rho[i] > tol) {
                    si.lo = grid[i];
                    break;
                }
            for (size_t i = G - 1; i > 0; --i)
                if (g.rho[i] - g.rho[i - 1] > tol) {
                    si.hi = grid[i];
                    break;
                }
            return si;
        }
        a *= 1.5;
    }
    si.a = a;
    si.lo = -a;
    si.hi = a;
    return si;
}

// ---------------------------------------------------------------- Thouless

ThoulessReport thouless_residual(const AffineFamily& f, cplx t, const ThoulessOptions& opt) {
    if (opt.require_assumptions) {
        AssumptionReport rep = check_assumptions(f);
        if (!rep.invertibility.holds) throw DomainError("thouless: Assumption 1 (invertibility) fails");
        if (rep.winding.sign == 0) throw DomainError("thouless: Assumption 2 (winding) fails");
        if (!rep.dominated_splitting.holds) throw DomainError("thouless: Assumption 4 (dominated splitting) fails");
    }
    ThoulessReport r;
    r.t_requested = t;
    r.t = t;
    if (t.imag() == 0) {
        r.delta = opt.delta;
        r.t = cplx(t.real(), opt.delta);
    }
    r.source = opt.source;
    r.n = opt.n;
    r.samples = opt.samples;
    McOptions mc = opt.mc;
    mc.workers = opt.workers;
    r.lhs = lyapunov(f, r.t, opt.n, opt.samples, mc);
    try {
        r.l1b = lyapunov_rank1_exact(f);
        r.l1b_method = "rank1-closed-form";
    } catch (const DomainError&) {
        r.l1b = lyapunov_B(f, opt.n, opt.samples, mc).value;
        r.l1b_method = "monte-carlo";
    }

    std::vector<double> pot;
    if (opt.source == DrhoSource::Roots) {
        size_t nr = opt.roots_n ? opt.roots_n : std::min<size_t>(opt.n, 1000);
        size_t sr = opt.roots_samples ? opt.roots_samples : opt.samples;
        DrhoRoots d = drho_from_roots(f, nr, sr, {1, 0}, {1, 0}, opt.workers);
        for (const auto& rw : d.per_word) {
            double s = 0;
            for (double x : rw) s += std::log(std::abs(r.t - x));
            pot.push_back(s / static_cast<double>(nr));
        }
        r.support_lo = d.min_root;
        r.support_hi = d.max_root;
    } else {
        SupportInfo si;
        RhoGrid own;
        const RhoGrid* gp = opt.rotation;
        if (!gp) {
            auto grid = rotation_support_grid(f, opt.grid_step, opt.workers, &si);
            RotationOptions ro;
            ro.workers = opt.workers;
            ro.stream_offset = mc.stream_offset;
            own = rotation_grid(f, grid, opt.n, opt.samples, ro);
            gp = &own;
        } else {
            si.lo = gp->t.front();
            si.hi = gp->t.back();
        }
        const RhoGrid& g = *gp;
        const auto& grid = g.t;
        const size_t G = grid.size();
        std::vector<double> avg(G - 1);
        for (size_t i = 0; i + 1 < G; ++i) avg[i] = cell_log_average(r.t, grid[i], grid[i + 1]);
        for (const auto& row : g.per_sample) {
            double s = 0;
            for (size_t i = 0; i + 1 < G; ++i) s += (row[i + 1] - row[i]) * avg[i];
            pot.push_back(s);
        }
        r.support_lo = si.lo;
        r.support_hi = si.hi;
    }
    ScalarEstimate pe = summarize(pot, 0);
    r.potential = pe.value;
    r.potential_se = pe.std_error;
    r.residual = r.lhs.value - r.l1b - r.potential;
    r.residual_se = std::hypot(r.lhs.std_error, r.potential_se);
    return r;
}

// ---------------------------------------------------------------- structure checks

namespace {

// f, f', f'' of <M_t v, w> by the Leibniz rule along the product, up to a common positive scale.
// Coefficient sums cancel badly at n ~ 30; this stays forward stable.
struct EntryDerivs {
    double f = 0, d1 = 0, d2 = 0;
};
EntryDerivs entry_derivs(const Orbit& o, double t, const Vec2d& v, const Vec2d& w) {
    Vec2d p = v, dp{0, 0}, ddp{0, 0};
    for (size_t j = 0; j < o.size(); ++j) {
        Mat2d m = o.at(j, t), b = o.b(j);
        ddp = m * ddp + b * dp * 2.0;
        dp = m * dp + b * p;
        p = m * p;
        double s = std::max({std::abs(p.x), std::abs(p.y), std::abs(dp.x), std::abs(dp.y), std::abs(ddp.x),
                             std::abs(ddp.y)});
        if (s > 1e100) {
            p = p * (1.0 / s);
            dp = dp * (1.0 / s);
            ddp = ddp * (1.0 / s);
        }
    }
    return {dot(p, w), dot(dp, w), dot(ddp, w)};
}

}  // namespace

LogConcavity log_concavity_check(const AffineFamily& f, const std::vector<uint32_t>& word, const Vec2d& v,
                                 const Vec2d& w, const std::vector<double>& t_grid) {
    Orbit o = word_orbit(f, word);
    RootOptions ro;
    ro.allow_resample = false;
    RootsResult rr = roots_of_entry(o, v, w, ro);
    Vec2d vu = unit(v), wu = unit(w);
    std::vector<double> grid = t_grid;
    if (grid.empty()) grid = linspace(rr.roots.front() - 1.0, rr.roots.back() + 1.0, 401);
    LogConcavity lc;
    lc.min_defect = std::numeric_limits<double>::infinity();
    for (double t : grid) {
        auto it = std::lower_bound(rr.roots.begin(), rr.roots.end(), t);
        double dist = std::numeric_limits<double>::infinity();
        if (it != rr.roots.end()) dist = std::min(dist, *it - t);
        if (it != rr.roots.begin()) dist = std::min(dist, t - *(it - 1));
        if (dist <= 1e-6) continue;
        EntryDerivs e = entry_derivs(o, t, vu, wu);
        double num = e.d1 * e.d1 - e.f * e.d2;
        double den = e.d1 * e.d1 + std::abs(e.f * e.d2);
        if (den == 0) continue;
        lc.min_defect = std::min(lc.min_defect, num / den);
        ++lc.checked;
    }
    lc.pass = lc.checked > 0 && lc.min_defect > 0;
    return lc;
}

namespace {

struct TraceEval {
    double tr = 0, dtr = 0;  // real units
};

TraceEval trace_at(const Orbit& o, double t) {
    Mat2d p = Mat2d::identity(), dp{};
    double ls = 0;
    for (size_t j = 0; j < o.size(); ++j) {
        Mat2d m = o.at(j, t);
        dp = m * dp + o.b(j) * p;
        p = m * p;
        double s = std::max(max_abs(p), max_abs(dp));
        int e;
        std::frexp(s, &e);
        double k = std::ldexp(1.0, -e);
        p = p * k;
        dp = dp * k;
        ls += e * M_LN2;
    }
    double sc = std::exp(ls);
    return {p.trace() * sc, dp.trace() * sc};
}

int sign_of(double x) { return (x > 0) - (x < 0); }

}  // namespace

TraceRoots trace_roots(const AffineFamily& f, const std::vector<uint32_t>& word) {
    Orbit o = word_orbit(f, word);
    const size_t n = o.size();
    ScaledMat pb = product_B(o);
    double nb = op_norm(pb.m);
    if (!(nb > 0) || pb.log_scale + std::log(nb) < -700) throw ProductVanishes("ProductVanishes: B_n...B_1 = 0");
    if (std::abs(pb.m.trace()) <= 1e-10 * nb)
        throw ProductVanishes("ProductVanishes: tr(B_n...B_1) = 0, trace has degree < n");

    RootOptions ro;
    ro.allow_resample = false;
    std::string why;
    for (double th : {0.0, 0.3, 0.7, 1.1, 1.9}) {
        Vec2d b1 = dir(th), b2 = perp(b1);
        RootsResult r1, r2;
        try {
            r1 = roots_of_entry(o, b1, b1, ro);
            r2 = roots_of_entry(o, b2, b2, ro);
        } catch (const NumericalError& e) {
            why = e.what();
            continue;
        }
        std::vector<double> pts;
        pts.insert(pts.end(), r1.roots.begin(), r1.roots.end());
        pts.insert(pts.end(), r2.roots.begin(), r2.roots.end());
        std::sort(pts.begin(), pts.end());
        double T = std::max(r1.T, r2.T);
        std::vector<double> roots;
        for (int grow = 0; grow < 60; ++grow) {
            std::vector<double> q;
            q.push_back(-T);
            q.insert(q.end(), pts.begin(), pts.end());
            q.push_back(T);
            roots.clear();
            int prev = sign_of(trace_at(o, q[0]).tr);
            double prev_t = q[0];
            for (size_t i = 1; i < q.size(); ++i) {
                int s = sign_of(trace_at(o, q[i]).tr);
                if (s == 0) {
                    roots.push_back(q[i]);
                    s = -prev;
                } else if (prev != 0 && s != prev) {
                    double a = prev_t, b = q[i];
                    for (int it = 0; it < 200 && b - a > 1e-12 * std::max(1.0, std::abs(a)); ++it) {
                        double m = 0.5 * (a + b);
                        int sm = sign_of(trace_at(o, m).tr);
                        if (sm == 0) {
                            a = b = m;
                            break;
                        }
                        if (sm == prev) a = m; else b = m;
                    }
                    roots.push_back(0.5 * (a + b));
                }
                prev = s;
                prev_t = q[i];
            }
            if (roots.size() >= n) break;
            T *= 2;
        }
        if (roots.size() != n) {
            why = "BracketFailure: " + std::to_string(roots.size()) + " trace sign changes, expected " +
                  std::to_string(n);
            continue;
        }
        TraceRoots tr;
        tr.roots = roots;
        tr.min_abs_derivative = std::numeric_limits<double>::infinity();
        for (double x : roots) tr.min_abs_derivative = std::min(tr.min_abs_derivative, std::abs(trace_at(o, x).dtr));
        tr.min_abs_extremum = std::numeric_limits<double>::infinity();
        for (size_t k = 0; k + 1 < roots.size(); ++k) {
            double a = roots[k], b = roots[k + 1];
            int sa = sign_of(trace_at(o, a).dtr);
            for (int it = 0; it < 200 && b - a > 1e-13 * std::max(1.0, std::abs(a)); ++it) {
                double m = 0.5 * (a + b);
                if (sign_of(trace_at(o, m).dtr) == sa) a = m; else b = m;
            }
            double x = 0.5 * (a + b);
            tr.extrema.push_back(x);
            tr.min_abs_extremum = std::min(tr.min_abs_extremum, std::abs(trace_at(o, x).tr));
        }
        tr.extrema_outside = tr.extrema.empty() || tr.min_abs_extremum >= 2.0 * (1.0 - 1e-9);
        return tr;
    }
    throw NumericalError("trace_roots: " + why);
}

// ---------------------------------------------------------------- formats

std::string measure_to_text(const EmpiricalMeasure1D& m) {
    std::ostringstream os;
    os << "# atom weight\n";
    if (m.cells()) os << "# cells: atom is the midpoint of a cell carrying uniform mass\n";
    char buf[96];
    for (size_t i = 0; i < m.atoms.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g %.17g\n", m.atoms[i], m.weights[i]);
        os << buf;
    }
    return os.str();
}

EmpiricalMeasure1D measure_from_text(const std::string& s) {
    std::istringstream is(s);
    std::string line;
    std::vector<std::pair<double, double>> pts;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        double a, w;
        if (!(ls >> a >> w)) throw DomainError("measure_from_text: malformed line '" + line + "'");
        pts.emplace_back(a, w);
    }
    EmpiricalMeasure1D m;
    std::sort(pts.begin(), pts.end());
    for (auto& [a, w] : pts) {
        m.atoms.push_back(a);
        m.weights.push_back(w);
    }
    return m;
}

namespace {
std::string g17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}
}  // namespace

std::string report_to_kv(const ThoulessReport& r) {
    std::ostringstream os;
    os << "t_re=" << g17(r.t.real()) << "\n"
       << "t_im=" << g17(r.t.imag()) << "\n"
       << "t_requested_re=" << g17(r.t_requested.real()) << "\n"
       << "t_requested_im=" << g17(r.t_requested.imag()) << "\n"
       << "delta=" << g17(r.delta) << "\n"
       << "lhs=" << g17(r.lhs.value) << "\n"
       << "lhs_se=" << g17(r.lhs.std_error) << "\n"
       << "l1b=" << g17(r.l1b) << "\n"
       << "l1b_method=" << r.l1b_method << "\n"
       << "potential=" << g17(r.potential) << "\n"
       << "potential_se=" << g17(r.potential_se) << "\n"
       << "residual=" << g17(r.residual) << "\n"
       << "residual_se=" << g17(r.residual_se) << "\n"
       << "source=" << to_string(r.source) << "\n"
       << "support_lo=" << g17(r.support_lo) << "\n"
       << "support_hi=" << g17(r.support_hi) << "\n"
       << "n=" << r.n << "\n"
       << "samples=" << r.samples << "\n";
    return os.str();
}

std::string report_to_json(const ThoulessReport& r) {
    nlohmann::ordered_json j;
    j["t"] = {r.t.real(), r.t.imag()};
    j["t_requested"] = {r.t_requested.real(), r.t_requested.imag()};
    j["delta"] = r.delta;
    j["lhs"] = {{"value", r.lhs.value}, {"std_error", r.lhs.std_error}, {"n_steps", r.lhs.n_steps},
                {"n_samples", r.lhs.n_samples}};
    j["l1b"] = r.l1b;
    j["l1b_method"] = r.l1b_method;
    j["potential"] = r.potential;
    j["potential_se"] = r.potential_se;
    j["residual"] = r.residual;
    j["residual_se"] = r.residual_se;
    j["source"] = to_string(r.source);
    j["support"] = {r.support_lo, r.support_hi};
    return j.dump(2);
}

}  // namespace cocycle
