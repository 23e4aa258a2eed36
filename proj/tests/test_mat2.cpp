#include <random>

#include "cocycle/mat2.hpp"
#include "doctest.h"

using namespace cocycle;

namespace {

Mat2d rot(double a) { return {std::cos(a), -std::sin(a), std::sin(a), std::cos(a)}; }

bool close(const Mat2d& a, const Mat2d& b, double tol) { return max_abs(a - b) <= tol; }

// B = R1 diag(s, 1/s) R0, A = R2 diag(1/s', s') R1^t: a gamma-matching by construction
std::pair<Mat2d, Mat2d> make_matching(std::mt19937_64& g, double gamma) {
    std::uniform_real_distribution<double> ang(0, 2 * M_PI), sc(1.05, 1.95);
    double s = sc(g) * std::exp(gamma), s2 = sc(g) * std::exp(gamma);
    Mat2d r0 = rot(ang(g)), r1 = rot(ang(g)), r2 = rot(ang(g));
    Mat2d b = r1 * Mat2d::diag(s, 1 / s) * r0;
    Mat2d a = r2 * Mat2d::diag(1 / s2, s2) * r1.transpose();
    return {b, a};
}

}  // namespace

TEST_SUITE("mat2") {

TEST_CASE("wedge") {
    CHECK(wedge({1, 0}, {0, 1}) == 1.0);
    CHECK(wedge({0.3, -2}, {0.3, -2}) == 0.0);
    CHECK(wedge({2, 0}, {1, 3}) == 6.0);
    std::mt19937_64 g(1);
    std::normal_distribution<double> nd;
    for (int i = 0; i < 1000; ++i) {
        Vec2d v{nd(g), nd(g)}, w{nd(g), nd(g)}, u{nd(g), nd(g)};
        CHECK(wedge(v, w) == -wedge(w, v));
        double lhs = wedge(v * 2.5 + u, w), rhs = 2.5 * wedge(v, w) + wedge(u, w);
        CHECK(std::abs(lhs - rhs) <= 1e-14 * (std::abs(lhs) + 10));
    }
}

TEST_CASE("det_affine") {
    Mat2d schr{0, 0, 1, 0};
    for (double t : {-3.0, 0.0, 0.7, 12.0}) {
        CHECK(det_affine(schr, t) == 1.0);
        CHECK(det_affine(Mat2d::identity(), t) == doctest::Approx((1 + t) * (1 + t)));
        CHECK(det_affine(Mat2d{0, 1, -1, 0}, t) == doctest::Approx(1 + t * t));
    }
    std::mt19937_64 g(2);
    std::normal_distribution<double> nd;
    for (int i = 0; i < 1000; ++i) {
        Mat2d e{nd(g), nd(g), nd(g), nd(g)};
        cplx t(nd(g), nd(g));
        Mat2c m = Mat2c::identity() + to_complex(e) * t;
        CHECK(std::abs(det_affine(e, t) - m.det()) <= 1e-13 * (1 + std::abs(m.det()) + std::norm(t) * frob(e)));
    }
}

TEST_CASE("e_sharp") {
    CHECK(e_sharp({0, 0, 1, 0}) == Mat2d{1, 0, 0, 0});
    CHECK(e_sharp({0, 0, 0, 0}) == Mat2d{0, 0, 0, 0});
    CHECK(e_sharp({1, 2, 3, 4}) == Mat2d{3, 1.5, 1.5, -2});
    std::mt19937_64 g(3);
    std::normal_distribution<double> nd;
    for (int i = 0; i < 1000; ++i) {
        Mat2d e{nd(g), nd(g), nd(g), nd(g)};
        Mat2d s = e_sharp(e);
        CHECK(s.a12 == s.a21);
        CHECK(std::abs(4 * s.det() - discriminant(e)) <= 1e-12 * (1 + frob(e) * frob(e)));
    }
}

TEST_CASE("winding_class") {
    auto w = winding_class({0, 0, 1, 0});
    CHECK(w.tag == Definiteness::PositiveSemidefinite);
    REQUIRE(w.eig_dir.has_value());
    CHECK(proj_dist(*w.eig_dir, {0, 1}) < 1e-15);
    // E_sharp = -I here
    CHECK(winding_class({0, 1, -1, 0}).tag == Definiteness::NegativeDefinite);
    CHECK(winding_class({0, -1, 1, 0}).tag == Definiteness::PositiveDefinite);
    CHECK(winding_class(Mat2d::diag(1, -1)).tag == Definiteness::Indefinite);
    CHECK(winding_class(Mat2d::identity() * 3.0).tag == Definiteness::Zero);
}

TEST_CASE("cone images land in one semidefinite class") {
    for (double r : {-10.0, -1.0, 1.0, 10.0}) {
        for (int i = 0; i < 720; ++i) {
            double th = 2 * M_PI * i / 720;
            auto w = winding_class(cone_embed({r, th}));
            CHECK(w.tag == (r < 0 ? Definiteness::PositiveSemidefinite : Definiteness::NegativeSemidefinite));
        }
    }
}

TEST_CASE("cone_embed / cone_coords") {
    CHECK(close(cone_embed({1, 0}), {0, 1, 0, 0}, 1e-16));
    CHECK(close(cone_embed({-1, M_PI / 2}), {0, 0, 1, 0}, 1e-16));
    auto c = cone_coords(cone_embed({2, 1}));
    CHECK(c.r == doctest::Approx(2).epsilon(1e-12));
    CHECK(c.theta == doctest::Approx(1).epsilon(1e-12));
    auto c2 = cone_coords(cone_embed({-3, 4.0}));  // theta + pi class
    CHECK(close(cone_embed(c2), cone_embed({-3, 4.0}), 1e-12));
    CHECK_THROWS_AS(cone_coords(Mat2d::identity()), DomainError);
    CHECK_THROWS_AS(cone_coords({0, 0, 0, 0}), DomainError);
}

TEST_CASE("singular_frame") {
    auto f = singular_frame(Mat2d::diag(3, 1.0 / 3));
    CHECK(f.norm == doctest::Approx(3));
    CHECK(f.conorm == doctest::Approx(1.0 / 3));
    CHECK(proj_dist(f.vbar, {1, 0}) < 1e-15);
    CHECK(singular_frame(rot(0.4)).degenerate);

    std::mt19937_64 g(4);
    std::normal_distribution<double> nd;
    std::vector<Mat2d> ms{{2, 1, 0, 0.5}};
    for (int i = 0; i < 1000; ++i) ms.push_back({nd(g), nd(g), nd(g), nd(g)});
    for (const auto& a : ms) {
        auto s = singular_frame(a);
        Vec2d vb = s.vbar, vu = s.vund, vbs = s.vbar_star, vus = s.vund_star;
        Mat2d rec = Mat2d{vbs.x * vb.x, vbs.x * vb.y, vbs.y * vb.x, vbs.y * vb.y} * s.norm +
                    Mat2d{vus.x * vu.x, vus.x * vu.y, vus.y * vu.x, vus.y * vu.y} * s.conorm;
        CHECK(max_abs(rec - a) <= 1e-12 * (1 + max_abs(a)));
        CHECK(s.vbar.x + (s.vbar.x == 0 ? s.vbar.y : 0) > 0);
    }
}

TEST_CASE("dist_to_least_singular") {
    Mat2d a = Mat2d::diag(2, 0.5);
    CHECK(dist_to_least_singular(a, {1, 0}) == doctest::Approx(1));
    CHECK(dist_to_least_singular(a, {0, 1}) == doctest::Approx(0).epsilon(1e-12));
    CHECK(dist_to_least_singular(a, unit({1, 1})) == doctest::Approx(std::sqrt(0.5)));
    CHECK_THROWS_AS(dist_to_least_singular(rot(1.0), {1, 0}), DomainError);

    std::mt19937_64 g(5);
    std::normal_distribution<double> nd;
    for (int i = 0; i < 1000; ++i) {
        Mat2d m{nd(g), nd(g), nd(g), nd(g)};
        if (m.det() < 0) std::swap(m.a11, m.a21), std::swap(m.a12, m.a22);
        m = m * (1.0 / std::sqrt(m.det()));
        if (op_norm(m) < 1 + 1e-6) continue;
        Vec2d v = dir(std::uniform_real_distribution<double>(0, M_PI)(g));
        CHECK(std::abs(dist_to_least_singular(m, v) - proj_dist(v, singular_frame(m).vund)) < 1e-10);
    }
}

TEST_CASE("gamma_matching") {
    CHECK_FALSE(gamma_matching(Mat2d::identity(), Mat2d::identity(), 1.0).has_value());
    std::mt19937_64 g(6);
    for (int i = 0; i < 200; ++i) {
        double gamma = 3 + 0.01 * i;
        auto [b, a] = make_matching(g, gamma);
        auto m = gamma_matching(b, a, gamma);
        REQUIRE(m.has_value());
        CHECK(gamma_conditions_hold(b, a, gamma, m->e1, m->e2));
    }
}

TEST_CASE("almost_turn_gap") {
    std::mt19937_64 g(7);
    std::uniform_real_distribution<double> ang(0, M_PI);
    for (int i = 0; i < 300; ++i) {
        double gamma = 3 + 0.005 * i;
        auto [b, a] = make_matching(g, gamma);
        auto fb = singular_frame(b), fa = singular_frame(a);
        CHECK(almost_turn_gap(b, a, gamma, fb.vbar, fa.vund_star) <= 3 * std::exp(-gamma));
        Vec2d v = dir(ang(g)), w = dir(ang(g));
        if (proj_dist(v, fb.vund) < std::exp(-gamma) || proj_dist(w, fa.vbar_star) < std::exp(-gamma)) continue;
        CHECK(almost_turn_gap(b, a, gamma, v, w) <= 3 * std::exp(-gamma));
    }
    auto [b, a] = make_matching(g, 3.0);
    CHECK_THROWS_AS(almost_turn_gap(b, a, 3.0, singular_frame(b).vund, {1, 0}), DomainError);
}

TEST_CASE("contraction toward the top direction") {
    std::mt19937_64 g(8);
    std::normal_distribution<double> nd;
    for (int i = 0; i < 2000; ++i) {
        Mat2d m{nd(g), nd(g), nd(g), nd(g)};
        if (m.det() <= 0) continue;
        m = m * (1.0 / std::sqrt(m.det()));
        double n = op_norm(m);
        if (n < 1 + 1e-3) continue;
        auto s = singular_frame(m);
        Vec2d v = unit({nd(g), nd(g)});
        double d = proj_dist(v, s.vund);
        if (d < 1e-6) continue;
        CHECK(proj_dist(m * v, s.vbar_star) <= 1.0 / (d * n * n) * (1 + 1e-9));
    }
}

TEST_CASE("polar splitting") {
    std::mt19937_64 g(9);
    std::normal_distribution<double> nd;
    for (int i = 0; i < 500; ++i) {
        Mat2d m{nd(g), nd(g), nd(g), nd(g)};
        if (m.det() <= 0) continue;
        auto p = polar(m);
        CHECK(p.p.a11 > 0);
        CHECK(p.p.det() > 0);
        CHECK(max_abs(rot(p.alpha) * p.p - m) < 1e-12 * (1 + max_abs(m)));
    }
}

TEST_CASE("ProjAngle reduction") {
    CHECK(ProjAngle{-0.5}.reduced() == doctest::Approx(M_PI - 0.5));
    CHECK(ProjAngle{7 * M_PI + 0.25}.reduced() == doctest::Approx(0.25));
}

}
