#pragma once

#include <functional>
#include <vector>

#include "maass/ball.hpp"
#include "maass/series.hpp"

namespace maass {

// Gauss-Legendre rule with certified node and weight enclosures, plus the
// constant C_n in the remainder bound
//   |E| <= C_n * (b-a)^(2n+1) * |f^(2n)(xi)| / (2n)!
// so that |E| <= C_n * h^(2n+1) * |T_2n| with T_2n an enclosure of the
// degree-2n Taylor coefficient of f on the subinterval.
struct GaussLegendreRule {
    int n;
    std::vector<Ball> nodes;    // on [-1, 1]
    std::vector<Ball> weights;
    Ball error_const;           // (n!)^4 / ((2n+1) ((2n)!)^2)

    static const GaussLegendreRule& get(int n);  // cached per (n, precision)
};

struct Integrand {
    std::function<Ball(const Ball&)> value;
    // Taylor coefficients of the integrand at a (possibly wide) ball center,
    // degrees 0..deg. Null = only the doubling-rule heuristic radius is
    // available and the result is flagged non-certified.
    std::function<Series(const Ball& center, int deg)> taylor;
};

struct QuadResult {
    Ball value;
    bool certified = true;
};

struct QuadOptions {
    int order = 10;       // GL points per panel
    int max_depth = 60;   // adaptive bisection limit per piece
};

// Integral of f over [a, b], split at the supplied smoothness breakpoints
// (all endpoints exact doubles). The truncation radius is kept below tol;
// ball evaluation radii come on top of that.
QuadResult integrate(const Integrand& f, double a, double b, const std::vector<double>& breakpoints, double tol,
                     const QuadOptions& opt = {});

}  // namespace maass
