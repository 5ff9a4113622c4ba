#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <mpfr.h>

#include <cmath>
#include <random>

#include "doctest.h"
#include "maass/ball.hpp"

using namespace maass;

TEST_CASE("exact integer arithmetic stays exact") {
    Ball one = Ball::exact(1L);
    Ball two = one + one;
    CHECK(two.is_exact());
    CHECK(two.mid_d() == 2.0);

    Ball x = Ball::from_midrad(3.7, 0.25);
    Ball z = x * Ball();
    CHECK(z.is_exact());
    CHECK(z.mid_d() == 0.0);
}

TEST_CASE("interval product over endpoints") {
    Ball a = Ball::from_midrad(1.0, 0.1);
    Ball p = a * a;
    CHECK(p.contains(0.81));
    CHECK(p.contains(1.21));
    CHECK(p.contains(1.0));
}

TEST_CASE("elementary function pins") {
    CHECK(exp(Ball()).mid_d() == 1.0);
    CHECK(exp(Ball()).is_exact());

    Ball l = log(Ball::exact(1L));
    CHECK(l.contains(0.0));
    CHECK(l.rad_d() < 1e-30);

    // inverse round trip: cosh(acosh(v)) contains v
    Ball v = Ball::exact(7.9057);
    Ball rt = cosh(acosh(v));
    CHECK(rt.contains(7.9057));
    CHECK(rt.rad_d() < 1e-30);
}

TEST_CASE("domain violations throw") {
    Ball z = Ball::from_midrad(0.0, 0.5);
    CHECK_THROWS_AS(Ball::exact(1L) / z, BallDomainError);
    CHECK_THROWS_AS(log(z), BallDomainError);
    CHECK_THROWS_AS(sqrt(Ball::exact(-2L)), BallDomainError);
    CHECK_THROWS_AS(acosh(Ball::exact(0.5)), BallDomainError);
}

namespace {

// point evaluation of the same expression chain at high precision
double rnd_in(std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> d(lo, hi);
    return d(rng);
}

}  // namespace

TEST_CASE("containment fuzz: random op chains keep the true point inside") {
    std::mt19937_64 rng(20240817);
    const int kTrials = 12000;
    mpfr_t px, py, pt;
    mpfr_init2(px, 512);
    mpfr_init2(py, 512);
    mpfr_init2(pt, 512);
    for (int trial = 0; trial < kTrials; ++trial) {
        double x0 = rnd_in(rng, -3.0, 3.0);
        double y0 = rnd_in(rng, 0.1, 4.0);
        Ball bx = Ball::exact(x0);
        Ball by = Ball::exact(y0);
        mpfr_set_d(px, x0, MPFR_RNDN);
        mpfr_set_d(py, y0, MPFR_RNDN);
        int nops = 1 + (int)(rng() % 6);
        for (int i = 0; i < nops; ++i) {
            switch (rng() % 10) {
                case 0:
                    bx = bx + by;
                    mpfr_add(px, px, py, MPFR_RNDN);
                    break;
                case 1:
                    bx = bx - by;
                    mpfr_sub(px, px, py, MPFR_RNDN);
                    break;
                case 2:
                    bx = bx * by;
                    mpfr_mul(px, px, py, MPFR_RNDN);
                    break;
                case 3:
                    bx = bx / by;
                    mpfr_div(px, px, py, MPFR_RNDN);
                    break;
                case 4:
                    bx = sin(bx);
                    mpfr_sin(px, px, MPFR_RNDN);
                    break;
                case 5:
                    bx = cos(bx);
                    mpfr_cos(px, px, MPFR_RNDN);
                    break;
                case 6:
                    by = exp(by * Ball::exact(0.25));
                    mpfr_mul_d(py, py, 0.25, MPFR_RNDN);
                    mpfr_exp(py, py, MPFR_RNDN);
                    break;
                case 7:
                    by = sqrt(by);
                    mpfr_sqrt(py, py, MPFR_RNDN);
                    break;
                case 8:
                    bx = sinh(bx * Ball::exact(0.5));
                    mpfr_mul_d(px, px, 0.5, MPFR_RNDN);
                    mpfr_sinh(px, px, MPFR_RNDN);
                    break;
                default:
                    bx = cosh(bx * Ball::exact(0.5));
                    mpfr_mul_d(px, px, 0.5, MPFR_RNDN);
                    mpfr_cosh(px, px, MPFR_RNDN);
                    break;
            }
            // keep y usable as a divisor and exp argument, keep x from overflowing
            if (mpfr_cmp_d(py, 0.05) < 0 || mpfr_cmp_d(py, 50.0) > 0) {
                mpfr_set_d(py, 1.5, MPFR_RNDN);
                by = Ball::exact(1.5);
            }
            if (mpfr_cmpabs_ui(px, 1000000) > 0) {
                mpfr_set_d(px, -2.25, MPFR_RNDN);
                bx = Ball::exact(-2.25);
            }
        }
        // the 512-bit point value must lie inside the ball; it is known only
        // to double accuracy here, so test overlap against a tight point ball
        double pv = mpfr_get_d(px, MPFR_RNDN);
        Ball point = Ball::from_midrad(pv, std::fabs(pv) * 1e-15 + 1e-290);
        bool overlap = true;
        try {
            bx.intersect(point);
        } catch (const RigorError&) {
            overlap = false;
        }
        CHECK(overlap);
        if (!overlap) {
            MESSAGE("trial ", trial, " ball ", bx.str(), " point ", pv);
            break;
        }
    }
    mpfr_clear(px);
    mpfr_clear(py);
    mpfr_clear(pt);
}

TEST_CASE("radius monotonicity under composition") {
    Ball a = Ball::from_midrad(1.25, 1e-10);
    Ball b = Ball::from_midrad(2.5, 2e-10);
    Ball s = a + b;
    CHECK(s.rad_d() >= 3e-10);
    Ball p = a * b;
    // |a| rb + |b| ra is the first-order floor
    CHECK(p.rad_d() >= 1.25 * 2e-10 + 2.5 * 1e-10 - 1e-24);
}

TEST_CASE("sinc handles zero-containing balls") {
    Ball z = Ball::from_midrad(0.0, 1e-8);
    Ball s = sinc(z);
    CHECK(s.contains(1.0));
    CHECK(s.rad_d() < 1e-15);
    Ball w = sinc(Ball::exact(1.5));
    CHECK(std::fabs(w.mid_d() - std::sin(1.5) / 1.5) < 1e-15);
}

TEST_CASE("decimal serialization round-trips exactly") {
    Ball x = Ball::pi() / Ball::exact(3L);
    std::string m = x.mid_string(), r = x.rad_string();
    Ball y = Ball::from_strings(m, r);
    // midpoints identical and radius not smaller
    CHECK(mpfr_cmp(x.mid(), y.mid()) == 0);
    CHECK(mpfr_cmp(y.rad(), x.rad()) >= 0);
    CHECK(y.contains(x));
}

TEST_CASE("pow_ui by squaring") {
    Ball t = Ball::exact(3L);
    CHECK(pow_ui(t, 7).contains(2187.0));
    CHECK(pow_ui(t, 1).contains(3.0));
    CHECK(pow_ui(t, 0).mid_d() == 1.0);
}
