#include "cocycle/mat2.hpp"

#include <algorithm>
#include <limits>

namespace cocycle {

namespace {

// (|q|, |d|)/2 split: sigma1 = s + d, sigma2 = |s - d|
void sv_split(const Mat2d& a, double& s, double& d) {
    s = 0.5 * std::hypot(a.a11 + a.a22, a.a21 - a.a12);
    d = 0.5 * std::hypot(a.a11 - a.a22, a.a21 + a.a12);
}

Vec2d canonical_sign(Vec2d v) {
    if (v.x < 0 || (v.x == 0 && v.y < 0)) return {-v.x, -v.y};
    return v;
}

}  // namespace

double op_norm(const Mat2d& a) {
    double s, d;
    sv_split(a, s, d);
    return s + d;
}

Mat2d e_sharp(const Mat2d& e) {
    double off = 0.5 * (e.a22 - e.a11);
    return {e.a21, off, off, -e.a12};
}

double xi(const Mat2d& e) {
    return std::max({std::abs(e.a11 - e.a22), 2.0 * std::abs(e.a12), 2.0 * std::abs(e.a21)});
}

const char* to_string(Definiteness d) {
    switch (d) {
        case Definiteness::PositiveDefinite: return "PositiveDefinite";
        case Definiteness::PositiveSemidefinite: return "PositiveSemidefinite";
        case Definiteness::NegativeDefinite: return "NegativeDefinite";
        case Definiteness::NegativeSemidefinite: return "NegativeSemidefinite";
        case Definiteness::Indefinite: return "Indefinite";
        case Definiteness::Zero: return "Zero";
    }
    return "?";
}

int winding_sign(Definiteness d) {
    switch (d) {
        case Definiteness::PositiveDefinite:
        case Definiteness::PositiveSemidefinite: return 1;
        case Definiteness::NegativeDefinite:
        case Definiteness::NegativeSemidefinite: return -1;
        default: return 0;
    }
}

WindingClass winding_class(const Mat2d& e) {
    WindingClass wc;
    wc.discriminant = discriminant(e);
    double scale = xi(e);
    if (scale == 0) return wc;

    Mat2d s = e_sharp(e);
    double m = 0.5 * (s.a11 + s.a22);
    double h = std::hypot(0.5 * (s.a11 - s.a22), s.a12);
    double dets = s.a11 * s.a22 - s.a12 * s.a12;
    // the small eigenvalue from det / big one, avoids cancellation in m - h
    double big = (m >= 0) ? m + h : m - h;
    double small = (big != 0) ? dets / big : 0.0;
    double lmax = std::max(big, small), lmin = std::min(big, small);
    double tol = 1e-12 * scale;

    if (lmin > tol) {
        wc.tag = Definiteness::PositiveDefinite;
    } else if (lmax < -tol) {
        wc.tag = Definiteness::NegativeDefinite;
    } else if (std::abs(lmin) <= tol && lmax > tol) {
        wc.tag = Definiteness::PositiveSemidefinite;
    } else if (std::abs(lmax) <= tol && lmin < -tol) {
        wc.tag = Definiteness::NegativeSemidefinite;
    } else {
        wc.tag = Definiteness::Indefinite;
    }
    if (wc.tag == Definiteness::PositiveSemidefinite || wc.tag == Definiteness::NegativeSemidefinite) {
        // null vector of E#; the rows of E# - lambda I with lambda ~ 0
        Vec2d r1{-s.a12, s.a11}, r2{s.a22, -s.a12};
        Vec2d v = norm(r1) >= norm(r2) ? r1 : r2;
        wc.eig_dir = canonical_sign(unit(v));
    }
    return wc;
}

Mat2d cone_embed(const ConeCoords& c) {
    double cs = std::cos(c.theta), sn = std::sin(c.theta);
    return Mat2d{-cs * sn, cs * cs, -sn * sn, cs * sn} * c.r;
}

ConeCoords cone_coords(const Mat2d& e) {
    double sc = xi(e);
    if (sc == 0) throw DomainError("cone_coords: E is a multiple of the identity (Xi(E) = 0)");
    double fro = frob(e);
    if (std::abs(e.trace()) > 1e-10 * fro || std::abs(e.det()) > 1e-10 * fro * fro)
        throw DomainError("cone_coords: E is not nilpotent");
    double r = e.a12 - e.a21;
    if (r == 0) throw DomainError("cone_coords: E is not nilpotent");
    double c2 = e.a12 / r, s2 = -e.a21 / r, csn = -e.a11 / r;
    double c, s;
    if (c2 >= s2) {
        c = std::sqrt(std::max(c2, 0.0));
        s = csn / c;
    } else {
        s = std::sqrt(std::max(s2, 0.0));
        c = csn / s;
    }
    double th = std::atan2(s, c);
    if (th < 0) th += M_PI;
    if (th >= M_PI) th -= M_PI;
    return {r, th};
}

SingularFrame singular_frame(const Mat2d& a) {
    SingularFrame f;
    double s, d;
    sv_split(a, s, d);
    f.norm = s + d;
    if (f.norm == 0) throw DomainError("singular_frame: zero matrix");
    double dt = a.det();
    f.conorm = std::abs(dt) / f.norm;
    if (d <= 1e-14 * f.norm) {
        f.degenerate = true;
        f.vbar = {1, 0};
        f.vund = {0, 1};
        f.vbar_star = unit(a * f.vbar);
        f.vund_star = dt >= 0 ? perp(f.vbar_star) : perp(f.vbar_star) * -1.0;
        return f;
    }
    // eigenvector of A^t A for the top eigenvalue
    double p = a.a11 * a.a11 + a.a21 * a.a21;
    double r = a.a12 * a.a12 + a.a22 * a.a22;
    double q = a.a11 * a.a12 + a.a21 * a.a22;
    double th = 0.5 * std::atan2(2.0 * q, p - r);
    f.vbar = canonical_sign({std::cos(th), std::sin(th)});
    f.vund = perp(f.vbar);
    f.vbar_star = unit(a * f.vbar);
    f.vund_star = dt >= 0 ? perp(f.vbar_star) : perp(f.vbar_star) * -1.0;
    return f;
}

double dist_to_least_singular(const Mat2d& a, const Vec2d& v) {
    double n = op_norm(a);
    if (std::abs(a.det() - 1.0) > 1e-8 * std::max(1.0, n * n))
        throw DomainError("dist_to_least_singular: det A != 1");
    if (n <= 1.0 + 1e-12) throw DomainError("dist_to_least_singular: A is an isometry (||A|| = 1)");
    Vec2d av = a * unit(v);
    double n2 = n * n, ninv2 = 1.0 / n2;
    double num = dot(av, av) - ninv2;
    double x = num / (n2 - ninv2);
    return std::sqrt(std::clamp(x, 0.0, 1.0));
}

namespace {

// log-margin of conditions (2), (3) at e1 = dir(theta); (1) holds by construction
double match_margin(const Mat2d& b, const Mat2d& ab, double gamma, double theta) {
    Vec2d e1 = dir(theta);
    double nb = norm(b * e1);
    double nab = norm(ab * e1);
    // ||A^-1 e2|| = ||B e1|| / ||A B e1||
    return std::min(std::log(nb) - gamma, std::log(nb) - std::log(nab) - gamma);
}

}  // namespace

bool gamma_conditions_hold(const Mat2d& b, const Mat2d& a, double gamma, const Vec2d& e1, const Vec2d& e2) {
    double eg = std::exp(gamma);
    Vec2d u1 = unit(e1), u2 = unit(e2);
    Vec2d abe = a * (b * u1);
    if (proj_dist(abe, u2) > 1e-10) return false;
    double nb = op_norm(b), na = op_norm(a);
    double nbe = norm(b * u1), nai = norm(a.inverse() * u2);
    const double slack = 1e-12;
    return nbe >= eg * (1 - slack) && nb <= 2 * eg * (1 + slack) && nbe <= nb * (1 + slack) &&
           nai >= eg * (1 - slack) && na <= 2 * eg * (1 + slack) && nai <= na * (1 + slack);
}

std::optional<GammaMatch> gamma_matching(const Mat2d& b, const Mat2d& a, double gamma) {
    double eg = std::exp(gamma);
    double nb = op_norm(b), na = op_norm(a);
    if (nb < eg || nb > 2 * eg || na < eg || na > 2 * eg) return std::nullopt;

    Mat2d ab = a * b;
    double eg2 = eg * eg;
    int npts = static_cast<int>(std::ceil(8.0 * M_PI * eg)) + 1;
    double h = M_PI / npts;
    int best = -1;
    double best_lin = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < npts; ++i) {
        Vec2d e1 = dir(i * h);
        Vec2d be = b * e1, abe = ab * e1;
        double nb2 = dot(be, be), nab2 = dot(abe, abe);
        // compare squared norms; log-free on the grid
        double m = std::min(nb2 / eg2, nb2 / (eg2 * nab2));
        if (m > best_lin) {
            best_lin = m;
            best = i;
        }
    }
    double theta = best * h;
    double margin = match_margin(b, ab, gamma, theta);
    if (margin < 0) {
        // golden-section on the margin around the best grid point
        double lo = theta - h, hi = theta + h;
        const double g = 0.5 * (std::sqrt(5.0) - 1.0);
        double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
        double f1 = match_margin(b, ab, gamma, x1), f2 = match_margin(b, ab, gamma, x2);
        for (int it = 0; it < 80 && hi - lo > 1e-15; ++it) {
            if (f1 < f2) {
                lo = x1; x1 = x2; f1 = f2;
                x2 = lo + g * (hi - lo);
                f2 = match_margin(b, ab, gamma, x2);
            } else {
                hi = x2; x2 = x1; f2 = f1;
                x1 = hi - g * (hi - lo);
                f1 = match_margin(b, ab, gamma, x1);
            }
            if (std::max(f1, f2) >= 0) break;
        }
        theta = f1 >= f2 ? x1 : x2;
        margin = std::max(f1, f2);
    }
    if (margin < 0) return std::nullopt;
    GammaMatch gm;
    gm.e1 = dir(theta);
    gm.e2 = unit(ab * gm.e1);
    gm.margin = margin;
    if (!gamma_conditions_hold(b, a, gamma, gm.e1, gm.e2)) return std::nullopt;
    return gm;
}

double almost_turn_gap(const Mat2d& b, const Mat2d& a, double gamma, const Vec2d& v, const Vec2d& w) {
    double eg = std::exp(-gamma);
    SingularFrame fb = singular_frame(b), fa = singular_frame(a);
    if (proj_dist(v, fb.vund) < eg) throw DomainError("almost_turn_gap: d(v, vund(B)) < e^-gamma");
    if (proj_dist(w, fa.vbar_star) < eg) throw DomainError("almost_turn_gap: d(w, vbar*(A)) < e^-gamma");
    return proj_dist(b * v, a.inverse() * w);
}

Polar polar(const Mat2d& a) {
    Polar p;
    p.alpha = std::atan2(a.a21 - a.a12, a.a11 + a.a22);
    double c = std::cos(p.alpha), s = std::sin(p.alpha);
    Mat2d rinv{c, s, -s, c};
    p.p = rinv * a;
    // symmetric by construction; remove rounding asymmetry
    double off = 0.5 * (p.p.a12 + p.p.a21);
    p.p.a12 = p.p.a21 = off;
    return p;
}

double polar_angle_continued(const Mat2d& a, const Mat2d& ref, double ref_alpha) {
    Vec2d q0{ref.a11 + ref.a22, ref.a21 - ref.a12};
    Vec2d q1{a.a11 + a.a22, a.a21 - a.a12};
    return ref_alpha + std::atan2(wedge(q0, q1), dot(q0, q1));
}

}  // namespace cocycle
