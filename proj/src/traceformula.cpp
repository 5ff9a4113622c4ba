#include "maass/traceformula.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <thread>
#include <cmath>
#include <cstdlib>

namespace maass {

int elliptic_table_degree(double eps) {
    double c = 1.0 + std::sqrt(2.0);
    return (int)std::ceil(std::log(1.0 / eps) / std::log(c));
}

namespace {

struct EllipticPanelJob {
    double a, b;
    int depth;
};

void build_table_point(const TestFunctionPackage& pkg, EllipticTable& tab, const Ball& c, int j, double eps,
                       int gl_order, int series_deg, const Ball& half_s, int d, double s_d,
                       const GaussLegendreRule& rule) {
    {
        Ball xj = pow_ui(Ball::exact(1L) / c, (unsigned long)j);
        tab.xs[j] = xj;
        std::vector<Ball> integrals(tab.K + 2);  // integrals[q] = I_q, q = 1..K+1

        // per-k acceptance scale: eps pi M_g x^{-1/2-k} prod_{i<=k} (2i-1)/(2i),
        // in ball arithmetic (the powers overflow double for deep tables)
        std::vector<Ball> slack(tab.K + 2);
        {
            // the slack is only an acceptance threshold; a point upper bound
            // of M_g keeps the ratio test well defined. Coefficient k is
            // damped by (x - x0)^k ~ (0.554 x0)^k at evaluation time, so its
            // tolerance may grow by 1/0.7^k while the evaluated radius still
            // sums to O(eps) times the value scale.
            Ball mg = Ball::exact(std::max(tab.M_g.upper_d(), 1e-30));
            Ball acc = Ball::pi() * mg * Ball::exact(eps) / sqrt(xj);
            Ball invx = Ball::exact(1L) / xj;
            Ball loosen = Ball::exact(1L);
            Ball loosen_step = Ball::exact(1L) / Ball::exact(0.7);
            for (int k = 0; k <= tab.K; ++k) {
                acc = acc.mul(2 * k + 1).div(2 * k + 2);
                slack[k + 1] = acc * loosen;
                acc = acc * invx;
                loosen = loosen * loosen_step;
            }
        }

        std::vector<EllipticPanelJob> stack;
        for (int p = 1; p < d; ++p) stack.push_back({(double)p, (double)(p + 1), 0});
        {
            // geometric panels toward the kernel's near-pole at lattice distance
            // ~ 2 sqrt(x)/s from 0; halving from 1 keeps endpoints dyadic
            double edge = std::min(1.0, std::max(std::sqrt(xj.mid_d()) / std::max(s_d, 1e-9), 1.0 / 4096));
            double hi = 1.0;
            while (hi > edge) {
                double lo = std::max(hi / 2, edge);
                stack.push_back({lo, hi, 0});
                hi = lo;
            }
            stack.push_back({0.0, hi, 0});
        }
        while (!stack.empty()) {
            EllipticPanelJob pj = stack.back();
            stack.pop_back();
            double h = pj.b - pj.a;
            bool ok = true;
            std::vector<Ball> rem(tab.K + 2);
            try {
                Ball cover = Ball::exact(pj.a).hull(Ball::exact(pj.b));
                Series sg = pkg.eval.taylor(cover, series_deg);
                Series sch = series_cosh_linear(half_s, cover, series_deg);
                Series ssh = series_sinh_linear(half_s, cover, series_deg);
                Series den = ssh * ssh;
                den.c[0] += xj;
                Series rec = series_recip(den);
                Series cur = sg * sch;
                Ball hpow = pow_ui(Ball::exact(h), 2 * gl_order + 1) * rule.error_const;
                Ball frac = Ball::exact(h).div(d);
                for (int q = 1; q <= tab.K + 1; ++q) {
                    cur = cur * rec;
                    rem[q] = abs(cur.c[series_deg]) * hpow;
                    Ball ratio = rem[q] / (slack[q] * frac);
                    if (!(ratio.upper_d() <= 1.0)) {
                        ok = false;
                        break;
                    }
                }
            } catch (const RigorError&) {
                ok = false;
            }
            if (!ok) {
                if (pj.depth > 58) throw ToleranceError("elliptic table: panel subdivision exhausted", h);
                double m = (pj.a + pj.b) / 2;
                stack.push_back({pj.a, m, pj.depth + 1});
                stack.push_back({m, pj.b, pj.depth + 1});
                continue;
            }
            Ball mid = (Ball::exact(pj.a) + Ball::exact(pj.b)).mul_2exp(-1);
            Ball half = (Ball::exact(pj.b) - Ball::exact(pj.a)).mul_2exp(-1);
            std::vector<Ball> acc_q(tab.K + 2);
            for (int i = 0; i < rule.n; ++i) {
                Ball x = mid + half * rule.nodes[i];
                Ball gx = pkg.eval.eval(x);
                Ball arg = half_s * x;
                Ball sh = sinh(arg);
                Ball rec = Ball::exact(1L) / (sh * sh + xj);
                Ball base = gx * cosh(arg) * rule.weights[i];
                for (int q = 1; q <= tab.K + 1; ++q) {
                    base = base * rec;
                    acc_q[q] += base;
                }
            }
            for (int q = 1; q <= tab.K + 1; ++q) integrals[q] += acc_q[q] * half + Ball::zero_pm(rem[q]);
        }
        std::vector<Ball> row(tab.K + 1);
        for (int k = 0; k <= tab.K; ++k) row[k] = (k % 2) ? -integrals[k + 1] : integrals[k + 1];
        tab.coeffs[j] = std::move(row);
    }
}

}  // namespace

EllipticTable build_elliptic_table(const TestFunctionPackage& pkg, double eps, double x_min, int gl_order) {
    if (!(eps > 0) || !(x_min > 0) || x_min > 1) throw std::invalid_argument("elliptic table: bad parameters");
    EllipticTable tab;
    tab.K = elliptic_table_degree(eps);
    tab.eps = eps;
    tab.x_min = x_min;
    tab.M_g = pkg.max_abs_g();
    Ball c = Ball::exact(1L) + sqrt(Ball::exact(2L));
    double cd = 1.0 + std::sqrt(2.0);
    int jmax = (int)std::ceil(std::log(2.0 / ((cd + 1) * x_min)) / std::log(cd));
    jmax = std::max(jmax, 0);
    tab.remainder_product = Ball::exact(1L);
    for (int k = 1; k <= tab.K + 1; ++k)
        tab.remainder_product = tab.remainder_product.mul(2 * k - 1).div(2 * k);

    const GaussLegendreRule& rule = GaussLegendreRule::get(gl_order);
    int series_deg = 2 * gl_order;
    Ball half_s = pkg.u_scale().mul_2exp(-1);  // kernel argument scale: sinh(s x / 2), s = X/d
    int d = pkg.d;
    double s_d = pkg.X / pkg.d;

    tab.xs.resize(jmax + 1);
    tab.coeffs.resize(jmax + 1);
    std::atomic<int> next_j{0};
    std::atomic<bool> failed{false};
    std::string fail_what;
    std::mutex fail_mutex;
    auto point_worker = [&]() {
        for (;;) {
            int j = next_j.fetch_add(1);
            if (j > jmax || failed.load()) break;
            try {
                build_table_point(pkg, tab, c, j, eps, gl_order, series_deg, half_s, d, s_d, rule);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(fail_mutex);
                fail_what = e.what();
                failed.store(true);
            }
        }
    };
    unsigned hw = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), (unsigned)(jmax + 1)));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < hw; ++t) pool.emplace_back(point_worker);
    point_worker();
    for (auto& th : pool) th.join();
    if (failed.load()) throw ToleranceError("elliptic table: " + fail_what, 0.0);
    return tab;
}



Ball EllipticTable::eval(const Ball& x) const {
    double xm = x.mid_d();
    if (!(xm > 0)) throw BallDomainError("elliptic table: x must be positive");
    double cd = 1.0 + std::sqrt(2.0);
    int j = (int)std::lround(std::log(1.0 / xm) / std::log(cd));
    j = std::max(0, std::min<int>(j, (int)xs.size() - 1));
    const Ball& xj = xs[j];
    Ball dx = x - xj;
    const std::vector<Ball>& row = coeffs[j];
    Ball acc;
    for (int k = (int)row.size() - 1; k >= 0; --k) acc = acc * dx + row[k];
    // remainder: pi M_g xi^{-3/2} (|x - xj| / xi)^{K+1} prod, xi = min(x, xj)
    Ball xi = x.lower_d() < xj.lower_d() ? x : xj;
    if (!xi.is_positive()) throw BallDomainError("elliptic table: x not positive");
    Ball ratio = abs(dx) / xi;
    if (!(ratio.upper_d() < 1))
        throw BallDomainError("elliptic table: x below table coverage (remainder diverges)");
    Ball rem = Ball::pi() * M_g * pow_ui(ratio, (unsigned long)K + 1) * remainder_product / sqrt(xi);
    return acc + Ball::zero_pm(rem);
}

// ---------------------------------------------------------------------------

TraceComputer::TraceComputer(const TestFunctionPackage& pkg, const LevelContext& level,
                             const ClassDataStore& classdata, double table_eps, i64 n_top)
    : pkg_(pkg),
      level_(level),
      classdata_(classdata),
      table_(build_elliptic_table(pkg, table_eps, 3.0 / (4.0 * (double)std::max<i64>(n_top, 1)))),
      h_i_half_(pkg.h_at_i_half()),
      n_top_(n_top) {}

i64 TraceComputer::required_discriminant_bound(double X, i64 n_top) {
    double t = 2.0 * std::sqrt((double)n_top) * std::cosh(X / 2) + 2;
    return (i64)(t * t) + 4 * n_top + 8;
}

Ball TraceComputer::hyperbolic_sum(i64 n) const {
    if (n == 0) throw std::invalid_argument("trace: n must be nonzero");
    i64 an = n < 0 ? -n : n;
    double X = pkg_.X;
    double thr =
        n > 0 ? 2.0 * std::sqrt((double)an) * std::cosh(X / 2) : 2.0 * std::sqrt((double)an) * std::sinh(X / 2);
    i64 tmax = (i64)std::floor(thr) + 1;
    Ball abs4n = Ball::exact(4 * an);
    Ball sum;
    for (i64 t = 0; t <= tmax; ++t) {
        i64 D = t * t - 4 * n;
        if (D <= 0 || is_square(D)) continue;
        Ball sq = sqrt(Ball::exact(D));
        Ball num = Ball::exact(t) + sq;
        Ball arg = log(num * num / abs4n);
        if (arg.lower_d() >= X) continue;  // outside supp g
        Ball term = c_coefficient(D, level_, classdata_) * pkg_.g_value(arg);
        sum += (t == 0) ? term : term.mul(2);
    }
    return sum;
}

Ball TraceComputer::elliptic_term(i64 n, i64 t) const {
    if (n <= 0 || t * t >= 4 * n) throw std::invalid_argument("elliptic term: need t^2 < 4n");
    i64 D = t * t - 4 * n;
    Ball x = Ball::exact(-D) / Ball::exact(4 * n);
    Ball f = table_.eval(x);
    return c_coefficient(D, level_, classdata_) * sqrt(x) * f / Ball::pi();
}

Ball TraceComputer::elliptic_sum(i64 n) const {
    if (n <= 0) return Ball();
    Ball sum;
    for (i64 t = 0; t * t < 4 * n; ++t) {
        Ball term = elliptic_term(n, t);
        sum += (t == 0) ? term : term.mul(2);
    }
    return sum;
}

Ball TraceComputer::parabolic_terms(i64 n) const {
    if (level_.primes.size() != 1) return Ball();  // Lambda(N) = 0 unless N is prime
    long p = level_.primes[0];
    Ball logN = log(Ball::exact(p));
    double X = pkg_.X;
    Ball first, second;
    for (auto [a, dd] : divisor_pairs(n)) {
        Ball arg = log(Ball::exact(a)) - log(Ball::exact(dd < 0 ? -dd : dd));
        if (a != dd) {
            i64 npart = n_inf_part(a - dd, level_);
            first += pkg_.g_value(arg) / Ball::exact(npart);
        }
        Ball npow = Ball::exact(1L);
        for (long r = 0;; ++r) {
            Ball sarg = arg - logN.mul(2 * r);
            if (sarg.upper_d() < -X) break;
            if (sarg.lower_d() <= X) second += pkg_.g_value(sarg) / npow;
            npow = npow.mul(p);
            if (r > 100000) throw std::logic_error("parabolic r-sum runaway");
        }
    }
    return logN * (first - second.mul(2));
}

Ball TraceComputer::identity_integral() const {
    if (identity_cache_) return *identity_cache_;
    // I = int_R g~'(u)/sinh(u/2) du = 2 (d/X) int_0^d G'(x)/sinh(s x/2) dx, s = X/d
    Ball half_s = pkg_.u_scale().mul_2exp(-1);
    int d = pkg_.d;
    double s_d = pkg_.X / pkg_.d;
    const double x0 = 0.25;

    // series part on [0, x0]: Phi(x) = G'(x)/sinh(s x/2). G'(0) = 0 is passed
    // analytically (g~' is odd), which makes the quotient a regular series.
    // Cauchy circle |x| = r_c, shrunk so that |s x / 2| <= 0.98 on it.
    long prec = precision::default_bits();
    double r_c = std::min(2.0, 1.96 / s_d);
    if (r_c <= 1.6 * x0) throw RigorError("identity-term series: X/d too large for the tail bound");
    int M = (int)std::ceil((double)prec * std::log(2.0) / std::log(r_c / x0)) + 8;
    Series gp = pkg_.deriv_eval.taylor(Ball::exact(0.0), M + 1);
    gp.c[0] = Ball();
    Series shifted(M);
    for (int k = 0; k <= M; ++k) shifted.c[k] = gp.c[k + 1];
    Series T(M);  // sinh(s x/2) = (s/2) x T(x)
    {
        Ball w2 = half_s * half_s;
        Ball term = Ball::exact(1L);
        T.c[0] = term;
        for (int i = 1; 2 * i <= M; ++i) {
            term = (term * w2).div((2 * i) * (2 * i + 1));
            T.c[2 * i] = term;
        }
    }
    Series phi = (shifted * series_recip(T));
    phi.scale(Ball::exact(1L) / half_s);
    Ball series_part;
    {
        Ball xp = Ball::exact(x0);
        Ball xpow = xp;
        for (int k = 0; k <= M; ++k) {
            series_part += phi.c[k] * xpow.div(k + 1);
            xpow = xpow * xp;
        }
        // Cauchy tail on |x| = r_c
        const auto& trip = pkg_.deriv_eval.polys[pkg_.deriv_eval.d];  // piece j = 0
        Ball rho = Ball::exact(r_c + 0.5);                            // |xi| <= r_c + 1/2
        Ball epir = exp(Ball::pi() * Ball::exact(r_c));
        Ball num_bound;
        {
            Ball acc0, accc, accs, pw = Ball::exact(1L);
            for (size_t k = 0; k < trip[0].size(); ++k) {
                acc0 += abs(trip[0][k]) * pw;
                accc += abs(trip[1][k]) * pw;
                accs += abs(trip[2][k]) * pw;
                pw *= rho;
            }
            num_bound = acc0 + (accc + accs) * epir;
        }
        // |sinh w| >= (5/6)|w| for |w| <= 1; on |x| = r_c, w = s x/2 has |w| <= 0.98
        Ball den_bound = (half_s * Ball::exact(r_c)).mul(5).div(6);
        Ball mphi = num_bound / den_bound;
        Ball ratio = Ball::exact(x0) / Ball::exact(r_c);
        Ball tail = mphi * pow_ui(ratio, (unsigned long)M + 1) * Ball::exact(x0 / (1 - x0 / r_c));
        series_part += Ball::from_midrad(0.0, tail.upper_d());
    }

    Integrand f;
    f.value = [&](const Ball& x) { return pkg_.deriv_eval.eval(x) / sinh(half_s * x); };
    f.taylor = [&](const Ball& c, int deg) {
        Series top = pkg_.deriv_eval.taylor(c, deg);
        Series bottom = series_sinh_linear(half_s, c, deg);
        return top * series_recip(bottom);
    };
    std::vector<double> breaks;
    for (int j = 1; j < d; ++j) breaks.push_back(j);
    double tol = std::ldexp(1.0, (int)-std::min<long>(prec - 8, 900));
    QuadResult q = integrate(f, x0, (double)d, breaks, tol);

    Ball I = (series_part + q.value) * pkg_.x_scale().mul_2exp(1);
    identity_cache_ = I;
    return I;
}

Ball TraceComputer::identity_term(i64 n) const {
    if (n <= 0 || !is_square(n)) return Ball();
    long prod = 1;
    for (long p : level_.primes) prod *= p - 1;
    Ball pref = Ball::exact(-prod).div(12 * isqrt(n));
    return pref * identity_integral();
}

Ball TraceComputer::trace(i64 n) const {
    i64 an = n < 0 ? -n : n;
    if (an == 0) throw std::invalid_argument("trace: n must be nonzero");
    if (std::__gcd((i64)level_.N, an) != 1) throw std::invalid_argument("trace: gcd(n, N) must be 1");
    if (an > n_top_) throw std::invalid_argument("trace: |n| exceeds the configured bound");
    Ball geom = hyperbolic_sum(n) + elliptic_sum(n) + parabolic_terms(n) + identity_term(n);
    Ball residual = h_i_half_.mul(level_.mu * sigma1(an)) / sqrt(Ball::exact(an));
    return geom - residual;
}

std::pair<Ball, Ball> TraceComputer::parity_traces(i64 n) const {
    if (n <= 0) throw std::invalid_argument("parity_traces: n must be positive");
    Ball plus = trace(n), minus = trace(-n);
    return {(plus + minus).mul_2exp(-1), (plus - minus).mul_2exp(-1)};
}

}  // namespace maass
