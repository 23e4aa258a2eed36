#include "cocycle/asym.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "cocycle/parallel.hpp"

namespace cocycle {

ScalarEstimate summarize(const std::vector<double>& xs, long n_steps) {
    ScalarEstimate e;
    e.n_steps = n_steps;
    e.n_samples = static_cast<long>(xs.size());
    if (xs.empty()) return e;
    double m = 0;
    for (double x : xs) m += x;
    m /= xs.size();
    double v = 0;
    for (double x : xs) v += (x - m) * (x - m);
    e.value = m;
    e.std_error = xs.size() > 1 ? std::sqrt(v / (xs.size() - 1) / xs.size()) : 0.0;
    return e;
}

namespace {

const Vec2d kStart{0.8134732861516011, 0.5816155720471716};

double lyap_real(const Orbit& o, double t, size_t burn) {
    std::vector<Mat2d> m(o.A.size());
    for (size_t i = 0; i < m.size(); ++i) m[i] = o.A[i] + o.B[i] * t;
    Vec2d u = kStart;
    double sum = 0, prod = 1;
    const size_t n = o.size();
    for (size_t j = 0; j < n; ++j) {
        u = m[o.idx[j]] * u;
        double nn = std::sqrt(u.x * u.x + u.y * u.y);
        u.x /= nn;
        u.y /= nn;
        if (j < burn) continue;
        prod *= nn;
        if ((j & 15) == 15 || prod > 1e150 || prod < 1e-150) {
            sum += std::log(prod);
            prod = 1;
        }
    }
    return sum + std::log(prod);
}

double lyap_complex(const Orbit& o, cplx t, size_t burn) {
    double tr = t.real(), ti = t.imag();
    struct CM { double r11, i11, r12, i12, r21, i21, r22, i22; };
    std::vector<CM> m(o.A.size());
    for (size_t i = 0; i < m.size(); ++i) {
        const Mat2d& a = o.A[i];
        const Mat2d& b = o.B[i];
        m[i] = {a.a11 + b.a11 * tr, b.a11 * ti, a.a12 + b.a12 * tr, b.a12 * ti,
                a.a21 + b.a21 * tr, b.a21 * ti, a.a22 + b.a22 * tr, b.a22 * ti};
    }
    double xr = kStart.x, xi = 0, yr = kStart.y, yi = 0;
    double sum = 0, prod = 1;
    const size_t n = o.size();
    for (size_t j = 0; j < n; ++j) {
        const CM& c = m[o.idx[j]];
        double nxr = (c.r11 * xr - c.i11 * xi) + (c.r12 * yr - c.i12 * yi);
        double nxi = (c.r11 * xi + c.i11 * xr) + (c.r12 * yi + c.i12 * yr);
        double nyr = (c.r21 * xr - c.i21 * xi) + (c.r22 * yr - c.i22 * yi);
        double nyi = (c.r21 * xi + c.i21 * xr) + (c.r22 * yi + c.i22 * yr);
        double nn = std::sqrt(nxr * nxr + nxi * nxi + nyr * nyr + nyi * nyi);
        xr = nxr / nn; xi = nxi / nn; yr = nyr / nn; yi = nyi / nn;
        if (j < burn) continue;
        prod *= nn;
        if ((j & 15) == 15 || prod > 1e150 || prod < 1e-150) {
            sum += std::log(prod);
            prod = 1;
        }
    }
    return sum + std::log(prod);
}

double log_op_norm(const ScaledMat& p) { return p.log_scale + std::log(op_norm(p.m)); }

}  // namespace

ScalarEstimate lyapunov(const AffineFamily& f, cplx t, size_t n, size_t samples, const McOptions& opt) {
    std::vector<double> vals(samples);
    parallel_for(samples, opt.workers, [&](size_t s) {
        Orbit o;
        sample(f, opt.stream_offset + s, n + opt.burn, o);
        double ln = t.imag() == 0 ? lyap_real(o, t.real(), opt.burn) : lyap_complex(o, t, opt.burn);
        vals[s] = ln / static_cast<double>(n);
    });
    return summarize(vals, static_cast<long>(n));
}

double lyapunov_words_exact(const AffineFamily& f, double t, int n) {
    if (!f.bernoulli_base()) throw DomainError("lyapunov_words_exact: needs a Bernoulli base");
    WordEnumerator en{f.kappa(), n, f.bernoulli.probs};
    double acc = 0;
    Orbit o = word_orbit(f, {});
    en.for_each([&](const std::vector<uint32_t>& w, double wt) {
        if (wt == 0) return;
        o.idx = w;
        acc += wt * log_op_norm(product(o, t));
    });
    return acc / n;
}

ScalarEstimate lyapunov_words_mc(const AffineFamily& f, double t, int n, size_t samples, const McOptions& opt) {
    std::vector<double> vals(samples);
    parallel_for(samples, opt.workers, [&](size_t s) {
        Orbit o = sample(f, opt.stream_offset + s, n);
        vals[s] = log_op_norm(product(o, t)) / n;
    });
    return summarize(vals, n);
}

double lyapunov_increment_exact(const AffineFamily& f, double t, int n, const Vec2d& v) {
    if (!f.bernoulli_base()) throw DomainError("lyapunov_increment_exact: needs a Bernoulli base");
    if (n < 2 || n > 24) throw DomainError("lyapunov_increment_exact: need 2 <= n <= 24");
    WordEnumerator{f.kappa(), n, f.bernoulli.probs}.count();  // size guard
    std::vector<Mat2d> m(f.kappa());
    for (int i = 0; i < f.kappa(); ++i) m[i] = evaluate(f, i, t);
    const auto& p = f.bernoulli.probs;
    double e_n = 0, e_nm1 = 0;
    std::function<void(int, Vec2d, double, double)> rec = [&](int depth, Vec2d u, double ln, double wt) {
        if (depth == n - 1) e_nm1 += wt * ln;
        if (depth == n) {
            e_n += wt * ln;
            return;
        }
        for (int s = 0; s < f.kappa(); ++s) {
            if (p[s] == 0) continue;
            Vec2d w = m[s] * u;
            double nn = norm(w);
            rec(depth + 1, {w.x / nn, w.y / nn}, ln + std::log(nn), wt * p[s]);
        }
    };
    rec(0, unit(v), 0.0, 1.0);
    return e_n - e_nm1;
}

double lyapunov_rank1_exact(const AffineFamily& f) {
    if (!f.bernoulli_base()) throw DomainError("lyapunov_rank1_exact: needs a Bernoulli base");
    int k = f.kappa();
    std::vector<Vec2d> v(k), w(k);
    for (int j = 0; j < k; ++j)
        if (!rank1_split(f.B[j], v[j], w[j]))
            throw DomainError("lyapunov_rank1_exact: B is not rank 1 for symbol " + std::to_string(j));
    const auto& p = f.bernoulli.probs;
    double acc = 0;
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            if (p[i] == 0 || p[j] == 0) continue;
            double ip = dot(w[i], v[j]);
            if (std::abs(ip) <= 1e-14 * norm(w[i]))
                throw DomainError("lyapunov_rank1_exact: B(Tx) B(x) = 0 for symbols (" + std::to_string(j) + ", " +
                                  std::to_string(i) + ")");
            acc += p[i] * p[j] * std::log(std::abs(ip));
        }
    return acc;
}

ScalarEstimate lyapunov_B(const AffineFamily& f, size_t n, size_t samples, const McOptions& opt) {
    std::vector<double> vals(samples);
    parallel_for(samples, opt.workers, [&](size_t s) {
        Orbit o;
        sample(f, opt.stream_offset + s, n + 16, o);
        Vec2d u = kStart;
        double ln = 0;
        for (size_t j = 0; j < o.size(); ++j) {
            u = o.b(j) * u;
            double nn = norm(u);
            if (nn == 0) {
                ln = -std::numeric_limits<double>::infinity();
                break;
            }
            u = u * (1.0 / nn);
            if (j >= 16) ln += std::log(nn);
        }
        vals[s] = ln / static_cast<double>(n);
    });
    return summarize(vals, static_cast<long>(n));
}

double winding_speed(const Mat2d& A, const Mat2d& B, double t, const Vec2d& v) {
    Vec2d u = (A + B * t) * v;
    return wedge(u, B * v) / dot(u, u);
}

double winding_speed(const AffineFamily& f, uint32_t s, double t, const Vec2d& v) {
    return winding_speed(f.A.at(s), f.B.at(s), t, v);
}

WindingSpeedN winding_speed_n(const Orbit& o, double t, const Vec2d& v) {
    WindingSpeedN r;
    auto tab = step_table(o, t);
    r.product_rule = lift_eval(o, tab, v, true).speed;

    // sum_j det(M_n..M_{j+1}) (M_j u ^ B_j u) / |M v|^2 with u = u_{j-1}
    const size_t n = o.size();
    std::vector<double> term(n), lnu(n + 1), lndet(n);
    Vec2d u = unit(v);
    lnu[0] = 0;
    for (size_t j = 0; j < n; ++j) {
        const StepData& s = tab[o.idx[j]];
        Vec2d mu = s.m * u;
        term[j] = wedge(mu, s.b * u);
        lndet[j] = std::log(s.m.det());
        double nn = norm(mu);
        lnu[j + 1] = lnu[j] + std::log(nn);
        u = mu * (1.0 / nn);
    }
    double suffix = 0, acc = 0;
    for (size_t j = n; j-- > 0;) {
        acc += term[j] * std::exp(suffix + 2.0 * lnu[j] - 2.0 * lnu[n]);
        suffix += lndet[j];
    }
    r.summation = acc;
    return r;
}

RhoGrid rotation_grid(const AffineFamily& f, const std::vector<double>& t_grid, size_t n, size_t samples,
                      const RotationOptions& opt) {
    RhoGrid g;
    g.t = t_grid;
    g.n = n;
    const size_t G = t_grid.size();
    g.per_sample.assign(samples, std::vector<double>(G));
    std::vector<long> flags(samples, 0);
    parallel_for(samples, opt.workers, [&](size_t s) {
        Orbit o;
        sample(f, opt.stream_offset + s, n, o);
        std::vector<StepData> tab;
        for (size_t i = 0; i < G; ++i) {
            step_table(o.A, o.B, t_grid[i], tab);
            Vec2d u = opt.v0;
            double lift = 0;
            switch (opt.convention) {
                case AngleConvention::Polar:
                    for (size_t j = 0; j < n; ++j) {
                        lift += polar_step(tab[o.idx[j]], u);
                        keep_scale(u);
                    }
                    break;
                case AngleConvention::Circle:
                    for (size_t j = 0; j < n; ++j) {
                        lift += circle_step(tab[o.idx[j]], u);
                        keep_scale(u);
                    }
                    break;
                case AngleConvention::HalfTurn:
                    for (size_t j = 0; j < n; ++j) {
                        lift += halfturn_step(tab[o.idx[j]], u, flags[s]);
                        keep_scale(u);
                    }
                    break;
            }
            g.per_sample[s][i] = lift / (M_PI * static_cast<double>(n));
        }
    });
    g.rho.assign(G, 0);
    g.se.assign(G, 0);
    g.rel_se.assign(G, 0);
    std::vector<double> col(samples), dcol(samples);
    for (size_t i = 0; i < G; ++i) {
        for (size_t s = 0; s < samples; ++s) {
            col[s] = g.per_sample[s][i];
            dcol[s] = g.per_sample[s][i] - g.per_sample[s][0];
        }
        ScalarEstimate e = summarize(col, n), d = summarize(dcol, n);
        g.rho[i] = e.value;
        g.se[i] = e.std_error;
        g.rel_se[i] = d.std_error;
    }
    for (long fl : flags) g.guard_flags += fl;
    return g;
}

ScalarEstimate rotation_number(const AffineFamily& f, double t, size_t n, size_t samples, const RotationOptions& opt) {
    RhoGrid g = rotation_grid(f, {t}, n, samples, opt);
    ScalarEstimate e;
    e.value = g.rho[0];
    e.std_error = g.se[0];
    e.n_steps = static_cast<long>(n);
    e.n_samples = static_cast<long>(samples);
    return e;
}

namespace {

struct SpeedEval {
    const Orbit& o;
    Vec2d v;
    std::vector<StepData> tab;
    long count = 0;
    long unresolved = 0;
    // integrand in u = atan(t), plus the lift phi(t)
    std::pair<double, double> operator()(double u) {
        double t = std::tan(u);
        step_table(o.A, o.B, t, tab);
        LiftEval r = lift_eval(o, tab, v, true);
        ++count;
        double c = std::cos(u);
        return {r.speed / (c * c), r.phi};
    }
};

struct Panel {
    double a, b, fa, fm, fb, pa, pb, whole;
};

double simpson(double a, double b, double fa, double fm, double fb) { return (b - a) / 6.0 * (fa + 4.0 * fm + fb); }

double adapt(SpeedEval& ev, const Panel& p, double eps, int depth) {
    double m = 0.5 * (p.a + p.b);
    auto [flm, plm] = ev(0.5 * (p.a + m));
    auto [frm, prm] = ev(0.5 * (m + p.b));
    (void)plm;
    (void)prm;
    double left = simpson(p.a, m, p.fa, flm, p.fm);
    double right = simpson(m, p.b, p.fm, frm, p.fb);
    double delta = left + right - p.whole;
    double est = left + right + delta / 15.0;
    // second indicator: the lift difference over the panel equals the integral
    double lift = p.pb - p.pa;
    // lifts at a fast turn carry rounding amplified by the speed; never ask for less than that,
    // and stop splitting once the panel is at the resolution of u
    double tol = std::max(15.0 * eps, 1e-11 * (1.0 + std::abs(p.pa) + std::abs(p.pb)));
    bool ok = std::abs(delta) <= tol && std::abs(est - lift) <= tol;
    if (ok) return est;
    if (depth <= 0 || p.b - p.a < 1e-12) {
        // a turn narrower than the grid can resolve (|A_t v| nearly 0): the lift is the integral
        ++ev.unresolved;
        return lift;
    }
    auto [fmid, pmid] = ev(m);
    (void)fmid;
    Panel L{p.a, m, p.fa, flm, p.fm, p.pa, pmid, left};
    Panel R{m, p.b, p.fm, frm, p.fb, pmid, p.pb, right};
    return adapt(ev, L, eps / 2, depth - 1) + adapt(ev, R, eps / 2, depth - 1);
}

}  // namespace

WindingLength winding_length(const Orbit& o, const Vec2d& v, double lo, double hi, double rel_tol) {
    WindingLength r;
    SpeedEval ev{o, unit(v), {}};
    double ua = std::atan(lo), ub = std::atan(hi);
    auto [fa0, pa0] = ev(ua);
    auto [fb0, pb0] = ev(ub);
    (void)fa0;
    (void)fb0;
    r.lift_difference = pb0 - pa0;
    double eps = rel_tol * (std::abs(r.lift_difference) + 1.0);
    const int panels = 256;
    double total = 0;
    double h = (ub - ua) / panels;
    auto prev = ev(ua);
    for (int i = 0; i < panels; ++i) {
        double a = ua + i * h, b = (i + 1 == panels) ? ub : a + h;
        auto mid = ev(0.5 * (a + b));
        auto nxt = ev(b);
        Panel p{a, b, prev.first, mid.first, nxt.first, prev.second, nxt.second, 0};
        p.whole = simpson(a, b, p.fa, p.fm, p.fb);
        total += adapt(ev, p, eps / panels, 40);
        prev = nxt;
    }
    r.length = total;
    r.evaluations = ev.count;
    r.unresolved_panels = ev.unresolved;
    return r;
}

WindingLength winding_length_line(const Orbit& o, const Vec2d& v, double tail_tol, double rel_tol) {
    ScaledMat bn = product_B(o);
    Vec2d lim = bn.m * unit(v);
    if (norm(lim) <= 1e-12 * op_norm(bn.m)) throw DomainError("winding_length_line: B^n v = 0 (degree deficient)");
    // M_t v / t^n -> B^n v, so the curve ends at +lim (t -> +inf) and (-1)^n lim (t -> -inf).
    // Tails are oriented angles on the circle: a projective test would accept a point half a turn short.
    Vec2d lim_minus = (o.size() % 2 == 0) ? lim : lim * -1.0;
    auto s1_angle = [](const Vec2d& a, const Vec2d& b) { return std::abs(std::atan2(wedge(a, b), dot(a, b))); };
    double T = 4;
    double tail = 0;
    for (;;) {
        Vec2d up = product(o, T).m * unit(v);
        Vec2d um = product(o, -T).m * unit(v);
        tail = s1_angle(up, lim) + s1_angle(um, lim_minus);
        if (tail < tail_tol || T > 1e8) break;
        T *= 2;
    }
    WindingLength r = winding_length(o, v, -T, T, rel_tol);
    r.tail = tail;
    r.tail_bound = tail;
    r.T = T;
    r.length += tail;
    return r;
}

double spectral_radius(const Mat2d& m) {
    double tr = m.trace(), dt = m.det();
    double disc = tr * tr - 4.0 * dt;
    if (disc >= 0) return 0.5 * (std::abs(tr) + std::sqrt(disc));
    return std::sqrt(dt);
}

UhProbe uh_probe(const AffineFamily& f, double t, size_t n, size_t samples, double threshold, int word_len,
                 const McOptions& opt) {
    UhProbe r;
    std::vector<double> g(samples);
    parallel_for(samples, opt.workers, [&](size_t s) {
        Orbit o = sample(f, opt.stream_offset + s, n);
        g[s] = log_op_norm(product(o, t)) / static_cast<double>(n);
    });
    r.orbit_growth = samples ? *std::min_element(g.begin(), g.end()) : 0.0;
    r.word_growth = std::numeric_limits<double>::infinity();
    if (f.bernoulli_base()) {
        int k = f.kappa();
        int L = word_len;
        while (L > 1 && std::pow(double(k), L) > 2e5) --L;
        std::vector<Mat2d> m(k);
        for (int i = 0; i < k; ++i) m[i] = evaluate(f, i, t);
        std::function<void(int, const ScaledMat&)> rec = [&](int len, const ScaledMat& p) {
            if (len > 0) {
                double rr = spectral_radius(p.m);
                double gr = rr > 0 ? (p.log_scale + std::log(rr)) / len : -std::numeric_limits<double>::infinity();
                r.word_growth = std::min(r.word_growth, gr);
            }
            if (len == L) return;
            for (int s = 0; s < k; ++s) {
                if (f.bernoulli.probs[s] == 0) continue;
                ScaledMat q = p;
                q.left_mul(m[s]);
                rec(len + 1, q);
            }
        };
        rec(0, ScaledMat{});
    }
    r.min_growth_rate = std::min(r.orbit_growth, r.word_growth);
    r.verdict = r.min_growth_rate >= threshold;
    return r;
}

}  // namespace cocycle
