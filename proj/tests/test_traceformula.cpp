#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "maass/traceformula.hpp"

using namespace maass;

namespace {

struct Fixture {
    TestFunctionPackage pkg;
    LevelContext level;
    ClassDataStore store;
    Fixture(double X, int d, long N, i64 n_top) : pkg(make_package(X, d)), level(N) {
        i64 bound = TraceComputer::required_discriminant_bound(X, n_top);
        store.ensure_range(bound, 4 * n_top + 8);
    }
};

double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    double h = (b - a) / n, s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4 : 2);
    return s * h / 3;
}

}  // namespace

TEST_CASE("elliptic table degree pins c = 1 + sqrt 2") {
    CHECK(elliptic_table_degree(std::ldexp(1.0, -64)) == 51);
    CHECK(elliptic_table_degree(1.0 / 1024.0) == 8);  // ceil(10 log 2 / log(1+sqrt2))
}

TEST_CASE("elliptic table matches adaptive quadrature and contains it") {
    TestFunctionPackage pkg = make_package(2.0, 5);
    double eps = std::ldexp(1.0, -40);
    EllipticTable tab = build_elliptic_table(pkg, eps, 1e-4);
    Ball half_s = pkg.u_scale().mul_2exp(-1);
    std::mt19937_64 rng(31);
    for (int i = 0; i < 60; ++i) {
        double x = std::exp(std::log(1e-4) * (double)(rng() % 10000) / 10000.0);
        Ball xv = Ball::exact(x);
        Ball tv = tab.eval(xv);
        // direct certified quadrature of the k = 0 integral (lattice coords)
        Integrand f;
        f.value = [&](const Ball& u) {
            Ball sh = sinh(half_s * u);
            return pkg.eval.eval(u) * cosh(half_s * u) / (sh * sh + xv);
        };
        f.taylor = [&](const Ball& c, int deg) {
            Series sg = pkg.eval.taylor(c, deg);
            Series sch = series_cosh_linear(half_s, c, deg);
            Series ssh = series_sinh_linear(half_s, c, deg);
            Series den = ssh * ssh;
            den.c[0] += xv;
            return sg * sch * series_recip(den);
        };
        std::vector<double> breaks{1, 2, 3, 4};
        QuadResult q = integrate(f, 0.0, 5.0, breaks, 1e-20);
        CHECK(q.certified);
        double diff = std::fabs(tv.mid_d() - q.value.mid_d());
        CHECK(diff <= eps + tv.rad_d() + q.value.rad_d());
        // containment of the reference value in the table ball
        CHECK_NOTHROW(tv.intersect(q.value));
    }
    // f positive, decreasing in x: spot check
    Ball f1 = tab.eval(Ball::exact(0.9));
    Ball f2 = tab.eval(Ball::exact(0.3));
    CHECK(f1.is_positive());
    CHECK(f2.lower_d() > f1.upper_d() * 0.99);
}

TEST_CASE("table coverage error below x_min") {
    TestFunctionPackage pkg = make_package(2.0, 5);
    EllipticTable tab = build_elliptic_table(pkg, 1e-8, 1e-2);
    CHECK_THROWS_AS(tab.eval(Ball::exact(1e-7)), BallDomainError);
}

TEST_CASE("hyperbolic support cutoff: n = 1 with small X") {
    // smallest argument for n = 1 is at t = 3: 2 log((3 + sqrt 5)/2) = 1.9248...
    Fixture fx(1.9, 5, 5, 4);
    TraceComputer tc(fx.pkg, fx.level, fx.store, 1e-12, 4);
    Ball h = tc.hyperbolic_sum(1);
    CHECK(h.mid_d() == 0.0);
    CHECK(h.rad_d() == 0.0);

    // with empty class data it still works (no term is ever touched)
    ClassDataStore empty;
    TraceComputer tc2(fx.pkg, fx.level, empty, 1e-12, 4);
    CHECK(tc2.hyperbolic_sum(1).mid_d() == 0.0);

    // slightly larger X pulls the t = +-3 terms in and needs class data
    TestFunctionPackage wide = make_package(2.0, 5);
    TraceComputer tc3(wide, fx.level, empty, 1e-12, 4);
    CHECK_THROWS_AS(tc3.hyperbolic_sum(1), MissingDataError);
    TraceComputer tc4(wide, fx.level, fx.store, 1e-12, 4);
    Ball h4 = tc4.hyperbolic_sum(1);
    CHECK(h4.rad_d() > 0.0);
    CHECK(h4.mid_d() != 0.0);
}

TEST_CASE("hyperbolic terms for n < 0 exist for every t") {
    Fixture fx(2.0, 5, 5, 6);
    TraceComputer tc(fx.pkg, fx.level, fx.store, 1e-12, 6);
    Ball h = tc.hyperbolic_sum(-1);  // t = 0 term has D = 4
    // D = 4 is square: skipped; t = 1 gives D = 5...
    CHECK(std::isfinite(h.mid_d()));
    // direct re-computation of the t range: |t| <= 2 sinh(X/2)
    CHECK(2.0 * std::sinh(1.0) < 3.0);
}

TEST_CASE("square discriminants are skipped") {
    // n = 3: t = 4 gives D = 4 (square); must not ask for its class record
    Fixture fx(2.4, 5, 5, 4);
    TraceComputer tc(fx.pkg, fx.level, fx.store, 1e-12, 4);
    CHECK_NOTHROW(tc.hyperbolic_sum(3));
}

TEST_CASE("parabolic terms: composite level vanishes, N = 2 matches enumeration") {
    Fixture fx6(2.0, 5, 6, 4);
    TraceComputer tc6(fx6.pkg, fx6.level, fx6.store, 1e-10, 4);
    Ball p6 = tc6.parabolic_terms(1);
    CHECK(p6.mid_d() == 0.0);

    Fixture fx2(2.0, 5, 2, 4);
    TraceComputer tc2(fx2.pkg, fx2.level, fx2.store, 1e-10, 4);
    Ball p2 = tc2.parabolic_terms(1);
    // only (a,d) = (1,1): first sum empty; second = -2 log2 sum_r 2^{-r} g(-2r log 2)
    double log2 = std::log(2.0);
    Ball expect;
    for (long r = 0;; ++r) {
        double arg = -2.0 * r * log2;
        if (arg < -fx2.pkg.X) break;
        expect += fx2.pkg.g_value(Ball::exact(arg)).div(1L << std::min<long>(r, 62));
    }
    expect = expect * log(Ball::exact(2L)).mul(-2);
    CHECK(std::fabs(p2.mid_d() - expect.mid_d()) < 1e-20 + p2.rad_d() + expect.rad_d());

    // r truncation: r_max = ceil((X + |log(a/d)|)/(2 log N))
    long rmax = (long)std::ceil((fx2.pkg.X + 0.0) / (2 * log2));
    CHECK(rmax >= 1);
}

TEST_CASE("identity term: zero cases and quadrature oracle") {
    Fixture fx(2.0, 5, 6, 4);
    TraceComputer tc(fx.pkg, fx.level, fx.store, 1e-10, 4);
    CHECK(tc.identity_term(2).mid_d() == 0.0);
    CHECK(tc.identity_term(-4).mid_d() == 0.0);
    CHECK(tc.identity_term(-1).mid_d() == 0.0);

    Ball i1 = tc.identity_term(1);
    // prefactor for N = 6: -(1)(2)/12 = -1/6
    // oracle: I = 2 (d/X) int_0^d G'(x)/sinh(s x/2) dx in double; the integrand
    // extends continuously to 0, so a midpoint sliver below delta suffices
    double s = fx.pkg.X / fx.pkg.d;
    auto phi = [&](double x) {
        return fx.pkg.deriv_eval.eval(Ball::exact(x)).mid_d() / std::sinh(s * x / 2);
    };
    const double delta = 1e-6;
    double I = delta * phi(delta / 2) + simpson(phi, delta, 1.0, 20000);
    for (int piece = 1; piece < 5; ++piece) I += simpson(phi, piece, piece + 1.0, 20000);
    I *= 2.0 * fx.pkg.d / fx.pkg.X;
    CHECK(std::fabs(i1.mid_d() - (-1.0 / 6.0) * I) < 1e-8);
    CHECK(i1.rad_d() < 1e-25);
}

TEST_CASE("full trace: residual, parity split, positivity of t(1,.)") {
    Fixture fx(2.0, 5, 5, 6);
    TraceComputer tc(fx.pkg, fx.level, fx.store, 1e-12, 6);

    Ball t1 = tc.trace(1);
    CHECK(std::isfinite(t1.mid_d()));
    // t(1,H) = sum h(r_j) >= 0 for h >= 0
    CHECK(t1.upper_d() > 0);

    auto [ev, od] = tc.parity_traces(2);
    Ball recombined = ev + od;
    Ball t2 = tc.trace(2);
    CHECK(std::fabs(recombined.mid_d() - t2.mid_d()) < 1e-25 + recombined.rad_d() + t2.rad_d());

    // identity term enters t(4) but never t(-4)
    Ball i4 = tc.identity_term(4), im4 = tc.identity_term(-4);
    CHECK(i4.mid_d() != 0.0);
    CHECK(im4.mid_d() == 0.0);

    // lambda package: residual vanishes
    TestFunctionPackage lam = apply_lambda_poly(fx.pkg, {0, 1, 0});
    TraceComputer tcl(lam, fx.level, fx.store, 1e-12, 6);
    CHECK(std::fabs(tcl.residual_h().mid_d()) < 1e-25 + tcl.residual_h().rad_d());
}

TEST_CASE("trace self-consistency across table tolerances") {
    Fixture fx(2.0, 6, 5, 6);
    TraceComputer coarse(fx.pkg, fx.level, fx.store, 1e-8, 6);
    TraceComputer fine(fx.pkg, fx.level, fx.store, 1e-12, 6);
    for (i64 n : {1L, 2L, 3L, 4L, 6L, -1L, -3L}) {
        Ball a = coarse.trace(n);
        Ball b = fine.trace(n);
        CHECK(std::fabs(a.mid_d() - b.mid_d()) <= a.rad_d() + b.rad_d() + 1e-25);
    }
}
