#pragma once

#include <vector>

#include "maass/ball.hpp"

namespace maass {

// Truncated Taylor expansions with ball coefficients, in an offset variable t
// around some (possibly interval-valued) center. Evaluating a builder at an
// interval center yields coefficient enclosures of f^(j)(xi)/j! valid for
// every xi in the interval, which is how quadrature derives derivative
// bounds.
struct Series {
    std::vector<Ball> c;

    Series() = default;
    explicit Series(int deg) : c(deg + 1) {}
    int deg() const { return (int)c.size() - 1; }

    Series& operator+=(const Series& o);
    Series operator*(const Series& o) const;  // truncated to max degree of inputs
    Series& scale(const Ball& s);             // multiply all coefficients
    Series derivative() const;
};

// 1/a; requires the constant term to exclude zero.
Series series_recip(const Series& a);
// exp(a)
Series series_exp(const Series& a);

// Builders for f(c + t):
Series series_poly(const std::vector<Ball>& poly, const Ball& c, const Ball& stretch, int deg);
// cos(w*(c+t) + done-in-w phase), sin likewise
Series series_cos_linear(const Ball& w, const Ball& c, int deg);
Series series_sin_linear(const Ball& w, const Ball& c, int deg);
Series series_cosh_linear(const Ball& w, const Ball& c, int deg);
Series series_sinh_linear(const Ball& w, const Ball& c, int deg);
Series series_const(const Ball& v, int deg);

}  // namespace maass
