#include "maass/testfunc.hpp"

#include <cmath>
#include <cstdio>

namespace maass {

namespace {

Ball kappa() {  // pi^2 / (pi^2 + 4)
    Ball p2 = Ball::pi() * Ball::pi();
    return p2 / p2.add(4);
}

long binomial(long n, long k) {
    long r = 1;
    for (long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace

PiecewiseExpPoly PiecewiseExpPoly::zero(int d) {
    PiecewiseExpPoly g;
    g.d = d;
    g.pieces.resize(2 * d);
    return g;
}

PiecewiseExpPoly PiecewiseExpPoly::g1() {
    PiecewiseExpPoly g = zero(1);
    Ball k = kappa();
    // A_{0,0}(xi) = kappa (1/2 - xi), A_{±1,0} = A_{0,0}/2
    PolyC a00(1);
    a00.c[0] = BallC::real(k.mul_2exp(-1));
    a00.c[1] = BallC::real(-k);
    g.piece(0, 0) = a00;
    g.piece(1, 0) = a00.scale(BallC::real(Ball::exact(0.5)));
    g.piece(-1, 0) = g.piece(1, 0);
    // A_{m,-1}(xi) = conj(A_{m,0}(-xi)): real coefficients here, flip odd powers
    PolyC a0m(1);
    a0m.c[0] = a00.c[0];
    a0m.c[1] = BallC::real(k);
    g.piece(0, -1) = a0m;
    g.piece(1, -1) = a0m.scale(BallC::real(Ball::exact(0.5)));
    g.piece(-1, -1) = g.piece(1, -1);
    return g;
}

PiecewiseExpPoly PiecewiseExpPoly::convolve(const PiecewiseExpPoly& other) const {
    const PiecewiseExpPoly& A = *this;
    const PiecewiseExpPoly& B = other;
    PiecewiseExpPoly C = zero(A.d + B.d);
    Ball pi_ball = Ball::pi();

    for (int j = -A.d; j < A.d; ++j) {
        for (int m = -1; m <= 1; ++m) {
            const PolyC& Amj = A.piece(m, j);
            if (Amj.empty()) continue;
            std::vector<PolyC> Ader{Amj};
            while (Ader.back().deg() > 0) Ader.push_back(Ader.back().deriv());
            for (int k = -B.d; k < B.d; ++k) {
                for (int n = -1; n <= 1; ++n) {
                    const PolyC& Bnk = B.piece(n, k);
                    if (Bnk.empty()) continue;
                    std::vector<PolyC> Bder{Bnk};
                    while (Bder.back().deg() > 0) Bder.push_back(Bder.back().deriv());

                    for (int delta = 0; delta <= 1; ++delta) {
                        int J = j + k + delta;
                        Ball base = Ball::exact(delta - 0.5);
                        if (m == n) {
                            // (-1)^delta sum_l B^{(l-1)}(delta - 1/2) P_{delta,l}(t)
                            PolyC P = Amj;
                            PolyC acc;
                            for (int l = 1; l <= Bnk.deg() + 1; ++l) {
                                P = P.antideriv_from(base);
                                BallC bval = Bder[l - 1].eval(base);
                                acc.add_scaled(P, bval);
                            }
                            C.piece(m, J).add_scaled(acc, BallC::real(Ball::exact(delta ? -1L : 1L)));
                        } else {
                            int mn = m - n;
                            int sgn_all = (((mn + 1) * delta) % 2) ? -1 : 1;
                            int degA = Amj.deg(), degB = Bnk.deg();
                            // 1/(-pi i mn) = i/(pi mn)
                            BallC inv(Ball(), Ball::exact(1L) / pi_ball.mul(mn));
                            std::vector<BallC> invpow(degA + degB + 2);
                            invpow[0] = BallC::real(Ball::exact(1L));
                            for (size_t p = 1; p < invpow.size(); ++p) invpow[p] = invpow[p - 1] * inv;
                            int sA = ((mn * j) % 2) ? -1 : 1;
                            int sB = ((mn * k) % 2) ? -1 : 1;
                            PolyC accN, accM;
                            for (int r = 0; r <= degA; ++r) {
                                BallC aval = Ader[r].eval(base);
                                for (int s = 0; s <= degB; ++s) {
                                    long bin = binomial(r + s, s);
                                    BallC w = invpow[r + s + 1] * Ball::exact((s % 2 ? -1L : 1L) * bin);
                                    accN.add_scaled(Bder[s], w * aval * Ball::exact((long)sA));
                                    BallC bval = Bder[s].eval(base);
                                    accM.add_scaled(Ader[r], w * bval * Ball::exact(-(long)sB));
                                }
                            }
                            Ball sg = Ball::exact((long)sgn_all);
                            C.piece(n, J).add_scaled(accN, BallC::real(sg));
                            C.piece(m, J).add_scaled(accM, BallC::real(sg));
                        }
                    }
                }
            }
        }
    }
    return C;
}

PiecewiseExpPoly PiecewiseExpPoly::power_of_g1(int dd) {
    if (dd < 1) throw std::invalid_argument("power_of_g1: d >= 1 required");
    PiecewiseExpPoly g = g1();
    PiecewiseExpPoly one = g1();
    for (int k = 2; k <= dd; ++k) g = g.convolve(one);
    return g;
}

PiecewiseExpPoly PiecewiseExpPoly::lattice_derivative() const {
    PiecewiseExpPoly r = zero(d);
    Ball pi_ball = Ball::pi();
    for (int j = -d; j < d; ++j) {
        for (int m = -1; m <= 1; ++m) {
            const PolyC& A = piece(m, j);
            if (A.empty()) continue;
            PolyC out = A.deriv();
            if (m != 0) out.add_scaled(A, BallC(Ball(), pi_ball.mul(m)));  // + i pi m A
            r.piece(m, j) = std::move(out);
        }
    }
    return r;
}

PiecewiseExpPoly PiecewiseExpPoly::add(const PiecewiseExpPoly& other) const {
    if (other.d != d) throw std::invalid_argument("piecewise add: mismatched support");
    PiecewiseExpPoly r = *this;
    for (int j = -d; j < d; ++j)
        for (int m = -1; m <= 1; ++m) r.piece(m, j) = r.piece(m, j) + other.piece(m, j);
    return r;
}

PiecewiseExpPoly PiecewiseExpPoly::scale(const Ball& s) const {
    PiecewiseExpPoly r = *this;
    for (auto& arr : r.pieces)
        for (auto& p : arr) p = p.scale(BallC::real(s));
    return r;
}

PiecewiseExpPoly::Compiled PiecewiseExpPoly::compile() const {
    Compiled c;
    c.d = d;
    c.polys.resize(2 * d);
    for (int j = -d; j < d; ++j) {
        const PolyC& a0 = piece(0, j);
        const PolyC& a1 = piece(1, j);
        const PolyC& am = piece(-1, j);
        int deg = std::max({a0.deg(), a1.deg(), am.deg(), 0});
        auto& trip = c.polys[j + d];
        for (auto& v : trip) v.assign(deg + 1, Ball());
        for (int k = 0; k <= deg; ++k) {
            if (k < (int)a0.c.size()) trip[0][k] = a0.c[k].re;
            Ball rc, rs;
            if (k < (int)a1.c.size()) {
                rc += a1.c[k].re;
                rs -= a1.c[k].im;
            }
            if (k < (int)am.c.size()) {
                rc += am.c[k].re;
                rs += am.c[k].im;
            }
            trip[1][k] = rc;
            trip[2][k] = rs;
        }
    }
    return c;
}

namespace {
Ball poly_eval(const std::vector<Ball>& p, const Ball& x) {
    Ball acc;
    for (int k = (int)p.size() - 1; k >= 0; --k) acc = acc * x + p[k];
    return acc;
}
}  // namespace

Ball PiecewiseExpPoly::Compiled::eval_in_piece(const Ball& x, int j) const {
    const auto& trip = polys[j + d];
    Ball xi = x - Ball::exact(j + 0.5);
    Ball px = Ball::pi() * x;
    return poly_eval(trip[0], xi) + poly_eval(trip[1], xi) * cos(px) + poly_eval(trip[2], xi) * sin(px);
}

Ball PiecewiseExpPoly::Compiled::eval(const Ball& x) const {
    double lo = x.lower_d(), hi = x.upper_d();
    if (lo >= d || hi <= -d) return Ball();
    int jlo = std::max((int)std::floor(lo), -d);
    int jhi = std::min((int)std::floor(hi), d - 1);
    Ball acc;
    bool first = true;
    if (hi > d || lo < -d) first = false;  // support edge: keep 0 in the hull
    for (int j = jlo; j <= jhi; ++j) {
        Ball v = eval_in_piece(x, j);
        acc = first ? v : acc.hull(v);
        first = false;
    }
    return acc;
}

Series PiecewiseExpPoly::Compiled::taylor(const Ball& center, int deg) const {
    double lo = center.lower_d(), hi = center.upper_d();
    int j = (int)std::floor((lo + hi) / 2);
    if ((lo + hi) / 2 >= d || (lo + hi) / 2 < -d) throw RigorError("piecewise taylor: center outside support");
    j = std::max(std::min(j, d - 1), -d);
    if (lo < j - 1e-9 || hi > j + 1 + 1e-9)
        throw RigorError("piecewise taylor: center not inside a single piece");
    const auto& trip = polys[j + d];
    Ball xi = center - Ball::exact(j + 0.5);
    Ball one = Ball::exact(1L);
    Series s = series_poly(trip[0], xi, one, deg);
    s += series_poly(trip[1], xi, one, deg) * series_cos_linear(Ball::pi(), center, deg);
    s += series_poly(trip[2], xi, one, deg) * series_sin_linear(Ball::pi(), center, deg);
    return s;
}

Ball PiecewiseExpPoly::Compiled::max_abs() const {
    Ball half = Ball::exact(0.5);
    double best = 0;
    for (const auto& trip : polys) {
        Ball bound;
        for (const auto& p : trip) {
            Ball acc, pw = Ball::exact(1L);
            for (const Ball& coeff : p) {
                acc += abs(coeff) * pw;
                pw *= half;
            }
            bound += acc;
        }
        best = std::max(best, bound.upper_d());
    }
    return Ball::from_midrad(best / 2, best / 2);
}

Ball PiecewiseExpPoly::integral_exp(const Ball& w) const {
    if (!w.is_positive()) throw BallDomainError("integral_exp: real exponent must be positive");
    BallC total;
    Ball half = Ball::exact(0.5);
    for (int m = -1; m <= 1; ++m) {
        BallC a(w, m == 0 ? Ball() : Ball::pi().mul(m));
        int degmax = 0;
        for (int j = -d; j < d; ++j) degmax = std::max(degmax, piece(m, j).deg());
        Ball eh = exp(w.mul_2exp(-1)), el = exp((-w).mul_2exp(-1));
        // e^{a/2} = e^{w/2} e^{i pi m/2}; e^{i pi m/2} = 1 (m=0) or i m
        BallC rot_half = (m == 0) ? BallC::real(Ball::exact(1L)) : BallC(Ball(), Ball::exact((long)m));
        BallC ehc = rot_half * eh;
        BallC elc = rot_half.conj() * el;
        std::vector<BallC> I(degmax + 1);
        BallC ainv = BallC::real(Ball::exact(1L)) / a;
        std::vector<Ball> hpow(degmax + 2);
        hpow[0] = Ball::exact(1L);
        for (int k = 1; k <= degmax + 1; ++k) hpow[k] = hpow[k - 1] * half;
        I[0] = (ehc - elc) * ainv;
        double amod = std::sqrt(a.re.mid_d() * a.re.mid_d() + a.im.mid_d() * a.im.mid_d());
        if (amod < 2.0 && degmax >= 1) {
            // upward I_k = (bnd_k - k I_{k-1})/a amplifies radii by k/|a|; run the
            // recurrence downward instead, seeding with |I_j| <= e^{w/2} 2^{-j}/(j+1)
            int top = degmax + 16;
            std::vector<BallC> J(top + 1);
            double seed = eh.upper_d() * std::ldexp(1.0, -top) / (top + 1);
            J[top] = BallC(Ball::from_midrad(0.0, seed), Ball::from_midrad(0.0, seed));
            Ball p = Ball::exact(1L);
            for (int i = 0; i < top; ++i) p = p * half;
            for (int k = top; k >= 1; --k) {
                // I_{k-1} = (bnd_k - a I_k)/k
                BallC boundary = ehc * p - elc * (k % 2 ? -p : p);
                J[k - 1] = (boundary - a * J[k]).operator*(Ball::exact(1L).div(k));
                p = p.mul(2);
            }
            for (int k = 0; k <= degmax; ++k) I[k] = J[k];
        } else {
            for (int k = 1; k <= degmax; ++k) {
                BallC boundary = ehc * hpow[k] - elc * (k % 2 ? -hpow[k] : hpow[k]);
                I[k] = (boundary - I[k - 1] * Ball::exact((long)k)) * ainv;
            }
        }
        for (int j = -d; j < d; ++j) {
            const PolyC& A = piece(m, j);
            if (A.empty()) continue;
            Ball re = exp(w.mul(2 * j + 1).mul_2exp(-1));
            BallC rot;
            if (m == 0)
                rot = BallC::real(re);
            else {
                // e^{i pi m (j + 1/2)} = i^m (-1)^{m j}
                int sgn = ((m * j) % 2) ? -1 : 1;
                rot = BallC(Ball(), Ball::exact((long)(m * sgn))) * re;
            }
            BallC contrib;
            for (int k = 0; k <= A.deg(); ++k) contrib += A.c[k] * I[k];
            total += contrib * rot;
        }
    }
    return total.re;  // the true integral is real
}

// ---------------------------------------------------------------------------

Ball TestFunctionPackage::u_scale() const { return Ball::exact(X).div(d); }
Ball TestFunctionPackage::x_scale() const { return Ball::exact((long)d) / Ball::exact(X); }

Ball TestFunctionPackage::g_value(const Ball& u) const { return eval.eval(u * x_scale()) * x_scale(); }

Ball TestFunctionPackage::gprime_value(const Ball& u) const {
    Ball s = x_scale();
    return deriv_eval.eval(u * s) * s * s;
}

namespace {
Ball h1_ball(const Ball& t) {
    Ball k = kappa();
    Ball half_t = t.mul_2exp(-1);
    Ball pi_half = Ball::pi().mul_2exp(-1);
    Ball s0 = sinc(half_t);
    Ball sm = sinc(half_t - pi_half);
    Ball sp = sinc(half_t + pi_half);
    return k * (s0 * s0 + (sm * sm + sp * sp).mul_2exp(-1));
}
}  // namespace

Ball TestFunctionPackage::h_eval_r(const Ball& r) const {
    Ball arg = r * u_scale();
    Ball h = pow_ui(h1_ball(arg), (unsigned long)d);
    Ball lam = Ball::exact(0.25) + r * r;
    Ball p = Ball::exact(lambda_poly[0]) + lam * Ball::exact(lambda_poly[1]) +
             lam * lam * Ball::exact(lambda_poly[2]);
    return p * h;
}

Ball TestFunctionPackage::h_eval_lambda(const Ball& lambda) const {
    Ball quarter = Ball::exact(0.25);
    Ball diff = lambda - quarter;
    if (diff.is_positive()) return h_eval_r(sqrt(diff));
    if (diff.contains_zero()) {
        double s = std::sqrt(std::max(diff.upper_d(), 0.0)) * (1 + 1e-14);
        return h_eval_r(Ball::from_midrad(s / 2, s / 2));
    }
    // lambda < 1/4: h(i rho); the stored pieces already carry the lambda polynomial
    Ball rho = sqrt(quarter - lambda);
    return g.integral_exp(rho * u_scale());
}

Ball TestFunctionPackage::h_at_i_half() const { return g.integral_exp(u_scale().mul_2exp(-1)); }

Ball TestFunctionPackage::max_abs_g() const { return eval.max_abs() * x_scale(); }

PiecewiseExpPoly PiecewiseExpPoly::round_to(long bits) const {
    PiecewiseExpPoly r = *this;
    for (auto& arr : r.pieces)
        for (auto& p : arr)
            for (auto& c : p.c) c = BallC(c.re.round_to(bits), c.im.round_to(bits));
    return r;
}

TestFunctionPackage make_package(double X, int d, double bits2) {
    if (!(X > 0) || d < 1) throw std::invalid_argument("make_package: bad parameters");
    TestFunctionPackage pkg;
    pkg.X = X;
    pkg.d = d;
    pkg.bits2 = bits2;
    {
        // the d-fold convolution amplifies coefficient radii; build with
        // headroom and round back to the working precision
        long base = precision::default_bits();
        precision::Scoped guard(base + 64 + 10L * d);
        pkg.g = PiecewiseExpPoly::power_of_g1(d).round_to(base);
    }
    pkg.eval = pkg.g.compile();
    pkg.deriv_eval = pkg.g.lattice_derivative().compile();
    pkg.id = "base";
    return pkg;
}

TestFunctionPackage apply_lambda_poly(const TestFunctionPackage& base, const std::array<double, 3>& p) {
    int degp = p[2] != 0 ? 2 : (p[1] != 0 ? 1 : 0);
    if (base.d < 2 * degp + 1)
        throw std::invalid_argument("apply_lambda_poly: d too small for the requested smoothness");
    TestFunctionPackage pkg;
    pkg.X = base.X;
    pkg.d = base.d;
    pkg.bits2 = base.bits2;
    pkg.lambda_poly = p;
    // L = 1/4 - (d/X)^2 Dx^2 piecewise
    Ball s2 = base.x_scale() * base.x_scale();
    auto L = [&](const PiecewiseExpPoly& G) {
        PiecewiseExpPoly d2 = G.lattice_derivative().lattice_derivative();
        return G.scale(Ball::exact(0.25)).add(d2.scale(-s2));
    };
    PiecewiseExpPoly acc = base.g.scale(Ball::exact(p[0]));
    if (degp >= 1) {
        PiecewiseExpPoly lg = L(base.g);
        acc = acc.add(lg.scale(Ball::exact(p[1])));
        if (degp >= 2) acc = acc.add(L(lg).scale(Ball::exact(p[2])));
    }
    pkg.g = std::move(acc);
    pkg.eval = pkg.g.compile();
    pkg.deriv_eval = pkg.g.lattice_derivative().compile();
    char buf[96];
    std::snprintf(buf, sizeof buf, "lam:%.17g,%.17g,%.17g", p[0], p[1], p[2]);
    pkg.id = buf;
    return pkg;
}

double h1_double(double t) {
    auto sinc = [](double x) { return x == 0 ? 1.0 : std::sin(x) / x; };
    const double pi = 3.14159265358979323846;
    double k = pi * pi / (pi * pi + 4);
    double s0 = sinc(t / 2), sm = sinc((t - pi) / 2), sp = sinc((t + pi) / 2);
    return k * (s0 * s0 + 0.5 * (sm * sm + sp * sp));
}

OptimizedParams optimize_params(long N, long M, double D_max) {
    if (N < 1 || M < 1 || !(D_max > 0)) throw std::invalid_argument("optimize_params: bad inputs");
    double arg = std::sqrt(D_max) / (2.0 * M);
    if (arg <= 1.0) throw std::domain_error("optimize_params: D_max too small (acosh domain)");
    OptimizedParams out;
    out.R_max = std::sqrt(24.0 * M / N);
    out.X = 2.0 * std::acosh(arg);
    out.d = 1;
    out.twoB = -1;
    for (int d = 1; d <= 100; ++d) {
        double h = h1_double(out.X * out.R_max / d);
        if (!(h > 0) || h >= 1) continue;
        double val = -std::log2(h) * d;
        if (val > out.twoB) {
            out.twoB = val;
            out.d = d;
        }
    }
    return out;
}

}  // namespace maass
