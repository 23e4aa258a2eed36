#include "cocycle/family.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cocycle/lift.hpp"

namespace cocycle {

double TorusPotential::operator()(double x) const {
    if (kind == "cosine") return lambda * std::cos(2.0 * M_PI * (x + phase));
    if (kind == "identity") return lambda * x;
    throw DomainError("unknown torus potential '" + kind + "'");
}

AffineFamily make_family(const BernoulliBase& base, const std::vector<Mat2d>& A, const std::vector<Mat2d>& E) {
    if (A.size() != base.probs.size() || E.size() != A.size())
        throw DomainError("make_family: need one A and one E per symbol");
    AffineFamily f;
    f.kind = BaseKind::Bernoulli;
    f.bernoulli = base;
    for (size_t j = 0; j < A.size(); ++j) {
        if (!(A[j].det() > 0))
            throw DomainError("NonPositiveDeterminant: det A <= 0 for symbol " + std::to_string(j));
    }
    f.A = A;
    f.E = E;
    f.B.resize(A.size());
    for (size_t j = 0; j < A.size(); ++j) f.B[j] = A[j] * E[j];
    return f;
}

AffineFamily make_torus_family(const TorusBase& base, std::function<Mat2d(double)> A_of,
                               std::function<Mat2d(double)> E_of, int grid) {
    for (int i = 0; i < grid; ++i) {
        double x = static_cast<double>(i) / grid;
        if (!(A_of(x).det() > 0))
            throw DomainError("NonPositiveDeterminant: det A <= 0 at phase " + std::to_string(x));
    }
    AffineFamily f;
    f.kind = BaseKind::Torus;
    f.torus = base;
    f.A_phase = std::move(A_of);
    f.E_phase = std::move(E_of);
    return f;
}

AffineFamily schrodinger_family(const BernoulliBase& base, const std::vector<double>& potential) {
    std::vector<Mat2d> A, E;
    for (double v : potential) {
        A.push_back(schrodinger_A(v));
        E.push_back(schrodinger_E());
    }
    AffineFamily f = make_family(base, A, E);
    f.preset = "schrodinger";
    return f;
}

AffineFamily schrodinger_family(const TorusBase& base, const TorusPotential& v) {
    AffineFamily f = make_torus_family(
        base, [v](double x) { return schrodinger_A(v(x)); }, [](double) { return schrodinger_E(); });
    f.potential = v;
    f.torus_serializable = true;
    f.preset = "schrodinger-torus";
    return f;
}

Mat2d evaluate(const AffineFamily& f, uint32_t s, double t) { return f.A.at(s) + f.B.at(s) * t; }

Mat2c evaluate(const AffineFamily& f, uint32_t s, cplx t) { return to_complex(f.A.at(s)) + to_complex(f.B.at(s)) * t; }

Mat2d evaluate_phase(const AffineFamily& f, double x, double t) { return f.A_phase(x) + f.B_at_phase(x) * t; }

Mat2c evaluate_phase(const AffineFamily& f, double x, cplx t) {
    return to_complex(f.A_phase(x)) + to_complex(f.B_at_phase(x)) * t;
}

void sample(const AffineFamily& f, uint64_t stream, size_t n, Orbit& o) {
    if (f.bernoulli_base()) {
        o.A = f.A;
        o.B = f.B;
        sample_orbit(f.bernoulli, stream, n, o.idx);
        return;
    }
    double x = f.torus.sample_start(stream);
    TorusBase b = f.torus;
    b.x0 = x;
    o.A.resize(n);
    o.B.resize(n);
    o.idx.resize(n);
    for (size_t j = 0; j < n; ++j) {
        double p = b.phase(j);
        o.A[j] = f.A_phase(p);
        o.B[j] = o.A[j] * f.E_phase(p);
        o.idx[j] = static_cast<uint32_t>(j);
    }
}

Orbit sample(const AffineFamily& f, uint64_t stream, size_t n) {
    Orbit o;
    sample(f, stream, n, o);
    return o;
}

Orbit word_orbit(const AffineFamily& f, const std::vector<uint32_t>& word) {
    if (!f.bernoulli_base()) throw DomainError("word_orbit: family has no symbolic base");
    Orbit o;
    o.A = f.A;
    o.B = f.B;
    o.idx = word;
    for (uint32_t s : word)
        if (s >= f.A.size()) throw DomainError("word_orbit: symbol out of range");
    return o;
}

void ScaledMat::normalize() {
    double s = max_abs(m);
    if (s == 0 || !std::isfinite(s)) return;
    int e;
    std::frexp(s, &e);
    // power-of-two scaling is exact
    m = m * std::ldexp(1.0, -e);
    log_scale += e * M_LN2;
}

ScaledMat product(const Orbit& o, double t, size_t from, size_t to) {
    ScaledMat p;
    to = std::min(to, o.size());
    for (size_t j = from; j < to; ++j) p.left_mul(o.at(j, t));
    return p;
}

ScaledMat product_B(const Orbit& o) {
    ScaledMat p;
    for (size_t j = 0; j < o.size(); ++j) p.left_mul(o.b(j));
    return p;
}

IterateResult iterate(const Orbit& o, double t, const Vec2d& v) {
    IterateResult r;
    auto tab = step_table(o, t);
    double n0 = std::sqrt(v.x * v.x + v.y * v.y);
    Vec2d u{v.x / n0, v.y / n0};
    double lift = std::atan2(u.y, u.x);
    double ln = 0;
    for (size_t j = 0; j < o.size(); ++j) {
        const StepData& s = tab[o.idx[j]];
        lift += polar_step(s, u);
        double nn = std::sqrt(u.x * u.x + u.y * u.y);
        ln += std::log(nn);
        u.x /= nn;
        u.y /= nn;
        r.frame.left_mul(s.m);
    }
    r.log_norm = ln;
    r.proj.theta = lift;
    r.dir = u;
    return r;
}

IterateComplex iterate(const Orbit& o, cplx t, const Vec2c& v) {
    // componentwise arithmetic so that Im t = 0 reproduces the real iteration
    double tr = t.real(), ti = t.imag();
    double xr = v.x.real(), xi = v.x.imag(), yr = v.y.real(), yi = v.y.imag();
    double n0 = std::sqrt(xr * xr + xi * xi + yr * yr + yi * yi);
    xr /= n0; xi /= n0; yr /= n0; yi /= n0;
    double ln = 0;
    for (size_t j = 0; j < o.size(); ++j) {
        const Mat2d& a = o.A[o.idx[j]];
        const Mat2d& b = o.B[o.idx[j]];
        double m11r = a.a11 + b.a11 * tr, m11i = b.a11 * ti;
        double m12r = a.a12 + b.a12 * tr, m12i = b.a12 * ti;
        double m21r = a.a21 + b.a21 * tr, m21i = b.a21 * ti;
        double m22r = a.a22 + b.a22 * tr, m22i = b.a22 * ti;
        double nxr = (m11r * xr - m11i * xi) + (m12r * yr - m12i * yi);
        double nxi = (m11r * xi + m11i * xr) + (m12r * yi + m12i * yr);
        double nyr = (m21r * xr - m21i * xi) + (m22r * yr - m22i * yi);
        double nyi = (m21r * xi + m21i * xr) + (m22r * yi + m22i * yr);
        double nn = std::sqrt(nxr * nxr + nxi * nxi + nyr * nyr + nyi * nyi);
        ln += std::log(nn);
        xr = nxr / nn; xi = nxi / nn; yr = nyr / nn; yi = nyi / nn;
    }
    return {ln, {{xr, xi}, {yr, yi}}};
}

Mat2<long double> MatrixPolynomial::eval_scaled(long double t) const {
    Mat2<long double> acc{};
    for (int k = degree; k >= 0; --k) acc = acc * t + coeffs[k];
    return acc;
}

Mat2d MatrixPolynomial::evaluate(double t) const {
    Mat2<long double> m = eval_scaled(t);
    long double s = std::exp(static_cast<long double>(scale_log));
    return {static_cast<double>(m.a11 * s), static_cast<double>(m.a12 * s), static_cast<double>(m.a21 * s),
            static_cast<double>(m.a22 * s)};
}

std::vector<long double> MatrixPolynomial::entry(const Vec2d& v, const Vec2d& w) const {
    std::vector<long double> c(degree + 1);
    for (int k = 0; k <= degree; ++k) {
        const auto& m = coeffs[k];
        long double x = m.a11 * v.x + m.a12 * v.y;
        long double y = m.a21 * v.x + m.a22 * v.y;
        c[k] = x * w.x + y * w.y;
    }
    return c;
}

std::vector<long double> MatrixPolynomial::trace() const {
    std::vector<long double> c(degree + 1);
    for (int k = 0; k <= degree; ++k) c[k] = coeffs[k].a11 + coeffs[k].a22;
    return c;
}

MatrixPolynomial matrix_polynomial(const Orbit& o) {
    int n = static_cast<int>(o.size());
    if (n > kMaxPolyDegree) throw DomainError("matrix_polynomial: word length exceeds 60");
    using LD = long double;
    MatrixPolynomial p;
    p.degree = n;
    p.coeffs.assign(n + 1, Mat2<LD>{});
    p.coeffs[0] = Mat2<LD>::identity();
    for (int j = 0; j < n; ++j) {
        Mat2d a = o.a(j), b = o.b(j);
        double s = std::max(max_abs(a), max_abs(b));
        if (s == 0) s = 1;
        Mat2<LD> al{a.a11 / LD(s), a.a12 / LD(s), a.a21 / LD(s), a.a22 / LD(s)};
        Mat2<LD> bl{b.a11 / LD(s), b.a12 / LD(s), b.a21 / LD(s), b.a22 / LD(s)};
        p.scale_log += std::log(s);
        // left-multiply by (a + t b)
        for (int k = j + 1; k >= 0; --k) {
            Mat2<LD> c = (k <= j) ? al * p.coeffs[k] : Mat2<LD>{};
            if (k >= 1) c = c + bl * p.coeffs[k - 1];
            p.coeffs[k] = c;
        }
    }
    return p;
}

MatrixPolynomial matrix_polynomial(const AffineFamily& f, const std::vector<uint32_t>& word) {
    return matrix_polynomial(word_orbit(f, word));
}

PolyEval poly_eval(const std::vector<long double>& c, long double t) {
    PolyEval r;
    for (int k = static_cast<int>(c.size()) - 1; k >= 0; --k) {
        r.d2 = r.d2 * t + 2 * r.d1;
        r.d1 = r.d1 * t + r.f;
        r.f = r.f * t + c[k];
    }
    return r;
}

bool rank1_split(const Mat2d& b, Vec2d& v, Vec2d& w, double rel_tol) {
    double fn = frob(b);
    if (fn == 0) return false;
    if (std::abs(b.det()) > rel_tol * fn * fn) return false;
    // column space from the larger column
    Vec2d c1{b.a11, b.a21}, c2{b.a12, b.a22};
    Vec2d c = norm(c1) >= norm(c2) ? c1 : c2;
    v = unit(c);
    // B = v w^t  =>  w = B^t v
    w = b.transpose() * v;
    return true;
}

namespace {

double two_step_speed(const Mat2d& a1, const Mat2d& b1, const Mat2d& a2, const Mat2d& b2, double t, const Vec2d& v) {
    Mat2d m1 = a1 + b1 * t, m2 = a2 + b2 * t;
    Vec2d u1 = m1 * v;
    Vec2d u = m2 * u1;
    Vec2d du = m2 * (b1 * v) + b2 * u1;
    return wedge(u, du) / dot(u, u);
}

}  // namespace

AssumptionReport check_assumptions(const AffineFamily& f, const AssumptionOptions& opt) {
    AssumptionReport rep;
    rep.certified = f.bernoulli_base();

    // materialize a finite list of (A, E) sites and consecutive pairs
    std::vector<Mat2d> As, Es;
    std::vector<std::pair<size_t, size_t>> pairs;  // (x, Tx)
    if (f.bernoulli_base()) {
        As = f.A;
        Es = f.E;
        for (size_t i = 0; i < As.size(); ++i)
            for (size_t j = 0; j < As.size(); ++j)
                if (f.bernoulli.probs[i] > 0 && f.bernoulli.probs[j] > 0) pairs.emplace_back(i, j);
    } else {
        int g = opt.phase_grid;
        for (int i = 0; i < g; ++i) {
            double x = static_cast<double>(i) / g;
            As.push_back(f.A_phase(x));
            Es.push_back(f.E_phase(x));
            double tx = x + f.torus.alpha;
            tx -= std::floor(tx);
            As.push_back(f.A_phase(tx));
            Es.push_back(f.E_phase(tx));
            pairs.emplace_back(2 * i, 2 * i + 1);
        }
    }
    std::vector<Mat2d> Bs(As.size());
    for (size_t i = 0; i < As.size(); ++i) Bs[i] = As[i] * Es[i];

    // invertibility
    {
        bool ok = true;
        double min_detA = std::numeric_limits<double>::infinity();
        double r = std::numeric_limits<double>::infinity(), ell = 0;
        bool any_disc = false;
        for (size_t i = 0; i < As.size(); ++i) {
            double da = As[i].det();
            min_detA = std::min(min_detA, da);
            if (!(da > 0)) ok = false;
            Mat2d e2 = Es[i] * Es[i];
            double fe = frob(Es[i]);
            bool nil = frob(e2) <= 1e-12 * std::max(fe * fe, 1e-300);
            if (nil) continue;
            double d = discriminant(Es[i]);
            if (d > 0) {
                any_disc = true;
                r = std::min(r, d);
                ell = std::max(ell, Es[i].det());
            } else {
                ok = false;
            }
        }
        rep.invertibility.holds = ok;
        if (ok) {
            if (!any_disc) {
                rep.invertibility.strip_R = std::numeric_limits<double>::infinity();
                rep.invertibility.det_floor_c = min_detA;
            } else {
                double q = r / (8.0 * ell * ell);
                rep.invertibility.strip_R = std::sqrt(q);
                rep.invertibility.det_floor_c = min_detA * std::min(1.0, (r / 4.0) * q);
            }
        }
    }

    // winding classes
    {
        int sign = 0;
        bool ok = true;
        for (size_t i = 0; i < Es.size(); ++i) {
            WindingClass wc = winding_class(Es[i]);
            if (f.bernoulli_base()) rep.winding.classes.push_back(wc);
            int s = winding_sign(wc.tag);
            if (s == 0) ok = false;
            if (sign == 0) sign = s;
            if (s != sign) ok = false;
        }
        rep.winding.sign = ok ? sign : 0;
    }

    // dominated splitting via rank-1 B and B(Tx) B(x) != 0
    {
        bool rank1 = true;
        double scale = 0;
        for (const auto& b : Bs) {
            Vec2d v, w;
            if (!rank1_split(b, v, w)) rank1 = false;
            scale = std::max(scale, op_norm(b));
        }
        double floor = std::numeric_limits<double>::infinity();
        for (auto [x, tx] : pairs) floor = std::min(floor, op_norm(Bs[tx] * Bs[x]));
        rep.dominated_splitting.rank1 = rank1;
        rep.dominated_splitting.chain_nonvanishing_floor = scale > 0 ? floor / (scale * scale) : 0;
        rep.dominated_splitting.holds = rank1 && scale > 0 && floor >= 1e-10 * scale * scale;
    }

    // strict winding with n0 = 2
    {
        auto& sw = rep.strict_winding;
        sw.J_lo = opt.J_lo;
        sw.J_hi = opt.J_hi;
        int nt = std::max(2, opt.t_points);
        int np = static_cast<int>(pairs.size());
        int nv = opt.v_points > 0 ? opt.v_points : std::max(16, static_cast<int>(1e5 / (double(nt) * np)));
        double sgn = rep.winding.sign != 0 ? rep.winding.sign : 1.0;
        double cmin = std::numeric_limits<double>::infinity();
        for (auto [x, tx] : pairs)
            for (int i = 0; i < nt; ++i) {
                double t = opt.J_lo + (opt.J_hi - opt.J_lo) * i / (nt - 1);
                for (int k = 0; k < nv; ++k) {
                    Vec2d v = dir(M_PI * (k + 0.5) / nv);
                    cmin = std::min(cmin, sgn * two_step_speed(As[x], Bs[x], As[tx], Bs[tx], t, v));
                }
            }
        sw.c_star = rep.winding.sign != 0 ? std::max(cmin, 0.0) : 0.0;
    }
    return rep;
}

}  // namespace cocycle
