#include "maass/series.hpp"

namespace maass {

Series& Series::operator+=(const Series& o) {
    if (o.c.size() > c.size()) c.resize(o.c.size());
    for (size_t i = 0; i < o.c.size(); ++i) c[i] += o.c[i];
    return *this;
}

Series Series::operator*(const Series& o) const {
    int d = std::max(deg(), o.deg());
    Series r(d);
    for (int i = 0; i <= deg(); ++i) {
        if (i > d) break;
        for (int j = 0; j <= o.deg() && i + j <= d; ++j) r.c[i + j] += c[i] * o.c[j];
    }
    return r;
}

Series& Series::scale(const Ball& s) {
    for (auto& x : c) x *= s;
    return *this;
}

Series Series::derivative() const {
    if (c.size() <= 1) return Series(0);
    Series r(deg() - 1);
    for (int j = 1; j <= deg(); ++j) r.c[j - 1] = c[j].mul(j);
    return r;
}

Series series_recip(const Series& a) {
    int d = a.deg();
    Series r(d);
    Ball inv0 = Ball::exact(1L) / a.c[0];
    r.c[0] = inv0;
    for (int j = 1; j <= d; ++j) {
        Ball acc;
        for (int i = 1; i <= j; ++i) acc += a.c[i] * r.c[j - i];
        r.c[j] = -(inv0 * acc);
    }
    return r;
}

Series series_exp(const Series& a) {
    int d = a.deg();
    Series r(d);
    r.c[0] = exp(a.c[0]);
    for (int j = 1; j <= d; ++j) {
        Ball acc;
        for (int i = 1; i <= j; ++i) acc += a.c[i].mul(i) * r.c[j - i];
        r.c[j] = acc.div(j);
    }
    return r;
}

Series series_poly(const std::vector<Ball>& poly, const Ball& c, const Ball& stretch, int deg) {
    // P(c + stretch*t), Horner in the series ring
    Series r(deg);
    for (int k = (int)poly.size() - 1; k >= 0; --k) {
        // r = r*(c + stretch*t) + p_k
        Series next(deg);
        for (int j = 0; j <= deg; ++j) {
            Ball v = r.c[j] * c;
            if (j > 0) v += r.c[j - 1] * stretch;
            next.c[j] = v;
        }
        next.c[0] += poly[k];
        r = std::move(next);
    }
    return r;
}

namespace {
// trig_kind: 0 -> cos, 1 -> sin, 2 -> cosh, 3 -> sinh
Series linear_series(int kind, const Ball& w, const Ball& c, int deg) {
    Series r(deg);
    Ball arg = w * c;
    Ball v0, v1;
    if (kind <= 1) {
        v0 = cos(arg);
        v1 = sin(arg);
    } else {
        v0 = cosh(arg);
        v1 = sinh(arg);
    }
    // d/dt of f(w(c+t)) cycles through the pattern below with factor w^j/j!
    Ball wpow = Ball::exact(1L);
    for (int j = 0; j <= deg; ++j) {
        Ball base;
        switch (kind) {
            case 0:  // cos: cos, -sin, -cos, sin
                base = (j % 2 == 0) ? v0 : v1;
                if (j % 4 == 1 || j % 4 == 2) base = -base;
                break;
            case 1:  // sin: sin, cos, -sin, -cos
                base = (j % 2 == 0) ? v1 : v0;
                if (j % 4 == 2 || j % 4 == 3) base = -base;
                break;
            case 2:  // cosh: cosh, sinh, cosh, ...
                base = (j % 2 == 0) ? v0 : v1;
                break;
            default:  // sinh
                base = (j % 2 == 0) ? v1 : v0;
                break;
        }
        r.c[j] = base * wpow;
        wpow = (wpow * w).div(j + 1);
    }
    return r;
}
}  // namespace

Series series_cos_linear(const Ball& w, const Ball& c, int deg) { return linear_series(0, w, c, deg); }
Series series_sin_linear(const Ball& w, const Ball& c, int deg) { return linear_series(1, w, c, deg); }
Series series_cosh_linear(const Ball& w, const Ball& c, int deg) { return linear_series(2, w, c, deg); }
Series series_sinh_linear(const Ball& w, const Ball& c, int deg) { return linear_series(3, w, c, deg); }

Series series_const(const Ball& v, int deg) {
    Series r(deg);
    r.c[0] = v;
    return r;
}

}  // namespace maass
