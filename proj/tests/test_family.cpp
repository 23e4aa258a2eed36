#include <random>

#include "cocycle/family.hpp"
#include "cocycle/presets.hpp"
#include "doctest.h"

using namespace cocycle;

namespace {

Mat2d rot(double a) { return {std::cos(a), -std::sin(a), std::sin(a), std::cos(a)}; }

std::vector<uint32_t> random_word(std::mt19937_64& g, int n, int kappa) {
    std::vector<uint32_t> w(n);
    for (auto& s : w) s = static_cast<uint32_t>(g() % kappa);
    return w;
}

}  // namespace

TEST_SUITE("family") {

TEST_CASE("make_family rejects det <= 0") {
    BernoulliBase b({0.5, 0.5});
    CHECK_THROWS_AS(make_family(b, {Mat2d::identity(), Mat2d::diag(1, -1)}, {Mat2d{}, Mat2d{}}), DomainError);
    auto id = make_family(BernoulliBase({1.0}), {Mat2d::identity()}, {Mat2d{}});
    CHECK(evaluate(id, 0, 5.0) == Mat2d::identity());
}

TEST_CASE("schrodinger evaluation") {
    auto f = schrodinger_family(BernoulliBase({1.0}), {0.0});
    CHECK(evaluate(f, 0, 0.0) == Mat2d{0, -1, 1, 0});
    Mat2c ci = evaluate(f, 0, cplx(0, 1));
    CHECK(ci.a11 == cplx(0, -1));
    CHECK(ci.a12 == cplx(-1, 0));
    CHECK(ci.a21 == cplx(1, 0));
    CHECK(ci.a22 == cplx(0, 0));
    auto g = schrodinger_family(BernoulliBase({0.5, 0.5}), {-1.3, 0.4});
    for (double t : {-2.0, 0.1, 3.5}) {
        CHECK(evaluate(g, 0, t) == Mat2d{-1.3 - t, -1, 1, 0});
        CHECK(evaluate(g, 1, t) == Mat2d{0.4 - t, -1, 1, 0});
    }
    Mat2d e = g.E[0];
    CHECK(e * e == Mat2d{0, 0, 0, 0});

    auto amo = schrodinger_family(TorusBase(0.5 * (std::sqrt(5.0) - 1), 0.0), TorusPotential{"identity", 2.0, 0.0});
    CHECK(evaluate_phase(amo, 0.25, 0.1).a11 == doctest::Approx(0.5 - 0.1));
    CHECK(evaluate_phase(amo, 0.25, 0.1).a12 == -1.0);
}

TEST_CASE("A(I+tE) = A + tB") {
    std::mt19937_64 g(1);
    std::normal_distribution<double> nd;
    for (int i = 0; i < 1000; ++i) {
        Mat2d a{nd(g), nd(g), nd(g), nd(g)};
        if (a.det() <= 0) std::swap(a.a11, a.a12), std::swap(a.a21, a.a22);
        Mat2d e{nd(g), nd(g), nd(g), nd(g)};
        auto f = make_family(BernoulliBase({1.0}), {a}, {e});
        double t = 3 * nd(g);
        Mat2d lhs = a * (Mat2d::identity() + e * t);
        CHECK(max_abs(lhs - evaluate(f, 0, t)) <= 1e-14 * (1 + max_abs(lhs) + std::abs(t) * max_abs(a) * max_abs(e)) * 4);
    }
}

TEST_CASE("iterate") {
    auto diag = make_family(BernoulliBase({1.0}), {Mat2d::diag(M_E, 1 / M_E)}, {Mat2d{}});
    auto o = sample(diag, 0, 100);
    CHECK(iterate(o, 0.0, {1, 0}).log_norm == doctest::Approx(100).epsilon(1e-13));
    auto r = make_family(BernoulliBase({1.0}), {rot(0.7)}, {Mat2d{}});
    CHECK(std::abs(iterate(sample(r, 0, 1000), 0.0, unit({0.3, 1})).log_norm) < 1e-12);

    auto cd = make_preset("cd-n1");
    std::mt19937_64 g(2);
    for (int i = 0; i < 10; ++i) {
        auto w = random_word(g, 10, 2);
        auto ow = word_orbit(cd, w);
        double t = -1.5 + 0.3 * i;
        auto mp = matrix_polynomial(ow);
        Vec2d mv = mp.evaluate(t) * Vec2d{1, 0};
        CHECK(iterate(ow, t, {1, 0}).log_norm == doctest::Approx(std::log(norm(mv))).epsilon(1e-9));
        // complex iteration on the real axis matches the real one
        auto ic = iterate(ow, cplx(t, 0), Vec2c{1, 0});
        CHECK(ic.log_norm == doctest::Approx(iterate(ow, t, {1, 0}).log_norm).epsilon(1e-12));
    }
}

TEST_CASE("cocycle law and det multiplicativity") {
    auto f = make_preset("schrodinger-anderson");
    std::mt19937_64 g(3);
    for (int i = 0; i < 200; ++i) {
        auto w = random_word(g, 40, 2);
        auto o = word_orbit(f, w);
        double t = std::uniform_real_distribution<double>(-3, 3)(g);
        size_t m = 1 + g() % 38;
        ScaledMat full = product(o, t), p1 = product(o, t, 0, m), p2 = product(o, t, m, o.size());
        Mat2d comp = p2.m * p1.m;
        double ls = p1.log_scale + p2.log_scale;
        double s = std::exp(ls - full.log_scale);
        CHECK(max_abs(comp * s - full.m) <= 1e-10);
        // nilpotent E: det A_t^n = prod det A = 1, on a prefix short enough for det to be well conditioned
        ScaledMat head = product(o, t, 0, 5);
        double ldet = std::log(std::abs(head.m.det())) + 2 * head.log_scale;
        CHECK(std::abs(ldet) < 1e-10 * std::exp(2 * head.log_scale));
    }
}

TEST_CASE("matrix_polynomial") {
    auto s = make_preset("schrodinger-const");
    auto p1 = matrix_polynomial(s, {0});
    CHECK(p1.degree == 1);
    CHECK(p1.evaluate(0.0) == s.A[0]);
    CHECK(max_abs(p1.evaluate(1.0) - p1.evaluate(0.0) - s.B[0]) < 1e-15);

    auto p2 = matrix_polynomial(s, {0, 0});
    auto e = p2.entry({1, 0}, {1, 0});
    long double sc = std::exp((long double)p2.scale_log);
    REQUIRE(e.size() == 3);
    CHECK((double)(e[0] * sc) == doctest::Approx(-1));
    CHECK((double)(e[1] * sc) == doctest::Approx(0).epsilon(1e-15));
    CHECK((double)(e[2] * sc) == doctest::Approx(1));

    auto cd = make_preset("cd-n1");
    std::mt19937_64 g(4);
    for (int n : {5, 20, 40}) {
        auto w = random_word(g, n, 2);
        auto o = word_orbit(cd, w);
        auto mp = matrix_polynomial(o);
        // leading coefficient is B_n ... B_1
        ScaledMat bn = product_B(o);
        Mat2<long double> lead = mp.coeffs.back();
        double r = std::exp(mp.scale_log - bn.log_scale);
        CHECK(std::abs((double)lead.a11 * r - bn.m.a11) < 1e-9);
        CHECK(std::abs((double)lead.a21 * r - bn.m.a21) < 1e-9);
        for (double t : {-10.0, -0.7, 0.0, 2.5, 10.0}) {
            ScaledMat d = product(o, t);
            Mat2d ev = mp.evaluate(t) * std::exp(-d.log_scale);
            CHECK(max_abs(ev - d.m) <= 1e-9);
        }
    }
    CHECK_THROWS_AS(matrix_polynomial(cd, std::vector<uint32_t>(61, 0)), DomainError);
}

TEST_CASE("poly_eval") {
    auto pe = poly_eval({-1, 0, 1}, 3);
    CHECK((double)pe.f == 8);
    CHECK((double)pe.d1 == 6);
    CHECK((double)pe.d2 == 2);
}

TEST_CASE("check_assumptions") {
    auto s = check_assumptions(make_preset("schrodinger-const"));
    CHECK(s.all_hold());
    CHECK(s.winding.sign == 1);
    CHECK(s.dominated_splitting.rank1);

    auto cd = check_assumptions(make_preset("cd-n1"));
    CHECK(cd.all_hold());
    CHECK(cd.winding.sign == 1);
    CHECK(cd.strict_winding.c_star > 0);

    auto mixed = make_family(BernoulliBase({0.5, 0.5}), {Mat2d::identity(), Mat2d::diag(2, 0.5)},
                             {cone_embed({-1, 0.3}), cone_embed({1, 0.3})});
    auto mr = check_assumptions(mixed);
    CHECK(mr.winding.sign == 0);
    CHECK_FALSE(mr.all_hold());

    // rank-2 B: no rank-1 dominated splitting criterion
    auto rk2 = make_family(BernoulliBase({1.0}), {Mat2d::identity()}, {Mat2d{0, 1, -1, 0}});
    auto rr = check_assumptions(rk2);
    CHECK_FALSE(rr.dominated_splitting.rank1);
    CHECK(rr.winding.sign == -1);
    CHECK(rr.invertibility.holds);
}

TEST_CASE("rank1_split") {
    Vec2d v, w;
    CHECK(rank1_split({0, 0, -1, 0}, v, w));
    CHECK(std::abs(norm(v) - 1) < 1e-15);
    CHECK_FALSE(rank1_split(Mat2d::identity(), v, w));
}

}
