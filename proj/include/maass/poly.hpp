#pragma once

#include <vector>

#include "maass/ball.hpp"

namespace maass {

struct BallC {
    Ball re, im;
    BallC() = default;
    BallC(Ball r, Ball i) : re(std::move(r)), im(std::move(i)) {}
    static BallC real(Ball r) { return {std::move(r), Ball()}; }

    BallC operator+(const BallC& o) const { return {re + o.re, im + o.im}; }
    BallC operator-(const BallC& o) const { return {re - o.re, im - o.im}; }
    BallC operator*(const BallC& o) const { return {re * o.re - im * o.im, re * o.im + im * o.re}; }
    BallC operator*(const Ball& s) const { return {re * s, im * s}; }
    BallC operator-() const { return {-re, -im}; }
    BallC conj() const { return {re, -im}; }
    BallC mul_i() const { return {-im, re}; }  // multiply by i
    BallC operator/(const BallC& o) const {
        Ball n = o.re * o.re + o.im * o.im;
        BallC num = *this * o.conj();
        return {num.re / n, num.im / n};
    }
    BallC& operator+=(const BallC& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
};

// Dense polynomial with complex ball coefficients (variable centered per use).
struct PolyC {
    std::vector<BallC> c;

    PolyC() = default;
    explicit PolyC(int deg) : c(deg + 1) {}
    int deg() const { return (int)c.size() - 1; }
    bool empty() const { return c.empty(); }

    BallC eval(const Ball& x) const {
        BallC acc;
        for (int k = deg(); k >= 0; --k) acc = acc * BallC::real(x) + c[k];
        return acc;
    }

    PolyC deriv() const {
        if (c.size() <= 1) return PolyC(0);
        PolyC r((int)c.size() - 2);
        for (size_t k = 1; k < c.size(); ++k) r.c[k - 1] = c[k] * Ball::exact((long)k);
        return r;
    }

    // antiderivative vanishing at base
    PolyC antideriv_from(const Ball& base) const {
        PolyC r((int)c.size());
        for (size_t k = 0; k < c.size(); ++k) r.c[k + 1] = c[k] * (Ball::exact(1L).div((long)k + 1));
        BallC at = r.eval(base);
        r.c[0] = r.c[0] - at;
        return r;
    }

    PolyC operator+(const PolyC& o) const {
        PolyC r(std::max(deg(), o.deg()));
        for (size_t k = 0; k < c.size(); ++k) r.c[k] += c[k];
        for (size_t k = 0; k < o.c.size(); ++k) r.c[k] += o.c[k];
        return r;
    }

    PolyC scale(const BallC& s) const {
        PolyC r = *this;
        for (auto& v : r.c) v = v * s;
        return r;
    }

    PolyC& add_scaled(const PolyC& o, const BallC& s) {
        if (o.deg() > deg()) c.resize(o.c.size());
        for (size_t k = 0; k < o.c.size(); ++k) c[k] += o.c[k] * s;
        return *this;
    }

    // upper bound of sum (|re_k| + |im_k|) rho^k, a modulus bound on |x| <= rho
    Ball modulus_bound(const Ball& rho) const {
        Ball acc, p = Ball::exact(1L);
        for (const auto& v : c) {
            acc += (abs(v.re) + abs(v.im)) * p;
            p *= rho;
        }
        return acc;
    }
};

}  // namespace maass
