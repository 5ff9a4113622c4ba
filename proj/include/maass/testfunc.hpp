#pragma once

#include <array>
#include <string>

#include "maass/poly.hpp"
#include "maass/series.hpp"

namespace maass {

// The Fourier transform g_d of h_d = h_1^d in lattice coordinates:
//   G(x) = sum_{m in {-1,0,1}} A_m(x) e^{i pi m x},  supported on [-d, d],
// A_m(x) = A_{m,j}(x - j - 1/2) for x in [j, j+1). Piece polynomials use the
// centered variable xi = x - j - 1/2.
struct PiecewiseExpPoly {
    int d = 0;
    // pieces[j + d][m + 1] for j in [-d, d-1], m in {-1, 0, 1}
    std::vector<std::array<PolyC, 3>> pieces;

    static PiecewiseExpPoly g1();
    static PiecewiseExpPoly zero(int d);
    // (d-1)-fold self-convolution of g1
    static PiecewiseExpPoly power_of_g1(int d);

    PiecewiseExpPoly convolve(const PiecewiseExpPoly& other) const;
    PiecewiseExpPoly round_to(long bits) const;
    PiecewiseExpPoly lattice_derivative() const;
    PiecewiseExpPoly add(const PiecewiseExpPoly& other) const;  // same d
    PiecewiseExpPoly scale(const Ball& s) const;

    const PolyC& piece(int m, int j) const { return pieces[j + d][m + 1]; }
    PolyC& piece(int m, int j) { return pieces[j + d][m + 1]; }

    // real evaluation table: value(x) = r0(xi) + rc(xi) cos(pi x) + rs(xi) sin(pi x)
    struct Compiled {
        int d = 0;
        std::vector<std::array<std::vector<Ball>, 3>> polys;  // r0, rc, rs per piece
        Ball eval(const Ball& x) const;     // 0 outside [-d, d]; spans handled by hull
        Series taylor(const Ball& center, int deg) const;  // center must stay in one piece
        Ball max_abs() const;               // certified bound of sup |G|
        Ball eval_in_piece(const Ball& x, int j) const;
    };
    Compiled compile() const;

    // int_{-d}^{d} G(x) e^{w x} dx for real w != 0 (closed form per piece)
    Ball integral_exp(const Ball& w) const;
};

// Bundled dilated test function h(r) = p(lambda(r)) h_d(X r / d) with its
// lattice-side data. The stored pieces already have the lambda polynomial
// applied, so the real-coordinate transform is g~(u) = (d/X) G(d u / X).
struct TestFunctionPackage {
    double X = 0;  // exact double; support of g~ is [-X, X]
    int d = 0;
    double bits2 = 0;                          // 2B from the optimizer (metadata)
    std::array<double, 3> lambda_poly{1, 0, 0};  // p(lambda), degree <= 2
    PiecewiseExpPoly g;
    PiecewiseExpPoly::Compiled eval;           // compiled from g
    PiecewiseExpPoly::Compiled deriv_eval;     // compiled from G'
    std::string id = "base";

    Ball u_scale() const;   // X/d as a ball
    Ball x_scale() const;   // d/X as a ball

    // enclosure of g~(u) at a real-coordinate ball
    Ball g_value(const Ball& u) const;
    // enclosure of g~'(u)
    Ball gprime_value(const Ball& u) const;

    // h on the r scale (formula route, includes the lambda polynomial)
    Ball h_eval_r(const Ball& r) const;
    // h on the lambda scale; lambda < 1/4 uses the exponential-integral route
    Ball h_eval_lambda(const Ball& lambda) const;
    // h(i/2) = int g~(u) e^{u/2} du, closed form
    Ball h_at_i_half() const;
    // sup |g~|
    Ball max_abs_g() const;
};

TestFunctionPackage make_package(double X, int d, double bits2 = 0);
// p(lambda) multiplication on the h side = p(1/4 - d^2/du^2) on the g side.
// Requires d >= 2 deg(p) + 1.
TestFunctionPackage apply_lambda_poly(const TestFunctionPackage& base, const std::array<double, 3>& p);

// h_1 and the parameter optimizer (double precision; the optimizer only
// selects parameters, rigor is not needed here)
double h1_double(double t);

struct OptimizedParams {
    double R_max;
    double X;
    int d;
    double twoB;
};
// R_max = sqrt(24 M / N); X = 2 acosh(sqrt(D_max)/(2M));
// d maximizes -log2(h1(X R_max / d)) d over 1..100; 2B is the maximum.
OptimizedParams optimize_params(long N, long M, double D_max);

}  // namespace maass
