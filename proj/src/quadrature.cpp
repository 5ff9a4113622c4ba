#include "maass/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace maass {

namespace {

// P_n(x) and P_n'(x) by the three-term recurrence.
void legendre(int n, const Ball& x, Ball& p, Ball& dp) {
    Ball pm1 = Ball::exact(1L);
    Ball pk = x;
    for (int k = 1; k < n; ++k) {
        Ball pk1 = (x * pk).mul(2 * k + 1) - pm1.mul(k);
        pk1 = pk1.div(k + 1);
        pm1 = pk;
        pk = pk1;
    }
    p = pk;
    // P_n' = n (x P_n - P_{n-1}) / (x^2 - 1)
    dp = ((x * pk - pm1).mul(n)) / (x * x - Ball::exact(1L));
}

double legendre_d(int n, double x, double* dp) {
    double pm1 = 1.0, pk = x;
    for (int k = 1; k < n; ++k) {
        double pk1 = ((2 * k + 1) * x * pk - k * pm1) / (k + 1);
        pm1 = pk;
        pk = pk1;
    }
    if (dp) *dp = n * (x * pk - pm1) / (x * x - 1.0);
    return pk;
}

GaussLegendreRule build_rule(int n) {
    GaussLegendreRule rule;
    rule.n = n;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    long prec = precision::default_bits();
    mpfr_t x, p, pm1, dp, t;
    mpfr_init2(x, prec + 32);
    mpfr_init2(p, prec + 32);
    mpfr_init2(pm1, prec + 32);
    mpfr_init2(dp, prec + 32);
    mpfr_init2(t, prec + 32);
    for (int i = 1; 2 * i <= n + 1; ++i) {
        // double seed, then Newton in mpfr
        double seed = std::cos(M_PI * (i - 0.25) / (n + 0.5));
        {
            double d, v;
            for (int it = 0; it < 60; ++it) {
                v = legendre_d(n, seed, &d);
                double step = v / d;
                seed -= step;
                if (std::fabs(step) < 1e-15) break;
            }
        }
        mpfr_set_d(x, seed, MPFR_RNDN);
        int iters = (int)std::ceil(std::log2((double)prec)) + 3;
        for (int it = 0; it < iters; ++it) {
            // p, dp at x
            mpfr_set_ui(pm1, 1, MPFR_RNDN);
            mpfr_set(p, x, MPFR_RNDN);
            for (int k = 1; k < n; ++k) {
                mpfr_mul(t, x, p, MPFR_RNDN);
                mpfr_mul_ui(t, t, 2 * k + 1, MPFR_RNDN);
                mpfr_mul_ui(dp, pm1, k, MPFR_RNDN);
                mpfr_sub(t, t, dp, MPFR_RNDN);
                mpfr_div_ui(t, t, k + 1, MPFR_RNDN);
                mpfr_set(pm1, p, MPFR_RNDN);
                mpfr_set(p, t, MPFR_RNDN);
            }
            mpfr_mul(t, x, p, MPFR_RNDN);
            mpfr_sub(t, t, pm1, MPFR_RNDN);
            mpfr_mul_ui(t, t, n, MPFR_RNDN);
            mpfr_mul(dp, x, x, MPFR_RNDN);
            mpfr_sub_ui(dp, dp, 1, MPFR_RNDN);
            mpfr_div(dp, t, dp, MPFR_RNDN);  // dp = P_n'(x)
            mpfr_div(t, p, dp, MPFR_RNDN);
            mpfr_sub(x, x, t, MPFR_RNDN);
        }
        // certify: sign change of P_n across [x - delta, x + delta]
        Ball node;
        bool ok = false;
        for (int attempt = 0; attempt < 6 && !ok; ++attempt) {
            double delta = std::max(std::ldexp(1.0, (int)std::max(-prec + 6 + 8 * attempt, -1000L)), 1e-290);
            Ball mid;
            mpfr_set_prec(mid.mid_mut(), prec);
            mpfr_set(mid.mid_mut(), x, MPFR_RNDN);
            Ball lo = mid - Ball::exact(delta);
            Ball hi = mid + Ball::exact(delta);
            Ball plo, phi, d1, d2;
            legendre(n, lo, plo, d1);
            legendre(n, hi, phi, d2);
            if ((plo.is_positive() && phi.is_negative()) || (plo.is_negative() && phi.is_positive())) {
                node = mid + Ball::from_midrad(0.0, delta);
                ok = true;
            }
        }
        if (!ok) throw RigorError("Gauss-Legendre node certification failed");
        Ball p_at, dp_at;
        legendre(n, node, p_at, dp_at);
        Ball w = Ball::exact(2L) / ((Ball::exact(1L) - node * node) * dp_at * dp_at);
        int j = i - 1;
        rule.nodes[j] = -node;
        rule.weights[j] = w;
        rule.nodes[n - 1 - j] = node;
        rule.weights[n - 1 - j] = w;
        if (2 * i == n + 1) {  // middle node of odd rule is exactly 0
            rule.nodes[j] = Ball();
            legendre(n, Ball(), p_at, dp_at);
            rule.weights[j] = Ball::exact(2L) / (dp_at * dp_at);
        }
    }
    mpfr_clear(x);
    mpfr_clear(p);
    mpfr_clear(pm1);
    mpfr_clear(dp);
    mpfr_clear(t);
    // C_n = (n!)^4 / ((2n+1) ((2n)!)^2)
    Ball num = Ball::exact(1L), den = Ball::exact(1L);
    for (int k = 1; k <= n; ++k) num *= Ball::exact((long)k);
    num = pow_ui(num, 4);
    for (int k = 1; k <= 2 * n; ++k) den *= Ball::exact((long)k);
    den = den * den;
    den = den.mul(2 * n + 1);
    rule.error_const = num / den;
    return rule;
}

std::mutex g_rule_mutex;
std::map<std::pair<int, long>, GaussLegendreRule> g_rules;

}  // namespace

const GaussLegendreRule& GaussLegendreRule::get(int n) {
    std::lock_guard<std::mutex> lock(g_rule_mutex);
    auto key = std::make_pair(n, precision::default_bits());
    auto it = g_rules.find(key);
    if (it == g_rules.end()) it = g_rules.emplace(key, build_rule(n)).first;
    return it->second;
}

namespace {

Ball panel_sum(const Integrand& f, const GaussLegendreRule& rule, double a, double b) {
    // exact at working precision: doubles embed exactly, /2 is exact
    Ball mid = (Ball::exact(a) + Ball::exact(b)).mul_2exp(-1);
    Ball half = (Ball::exact(b) - Ball::exact(a)).mul_2exp(-1);
    Ball acc;
    for (int i = 0; i < rule.n; ++i) {
        Ball u = mid + half * rule.nodes[i];
        acc += rule.weights[i] * f.value(u);
    }
    return acc * half;
}

struct Panel {
    double a, b, tol;
    int depth;
};

}  // namespace

QuadResult integrate(const Integrand& f, double a, double b, const std::vector<double>& breakpoints, double tol,
                     const QuadOptions& opt) {
    if (!(b >= a)) throw std::invalid_argument("integrate: bad interval");
    if (a == b) return {Ball(), true};
    std::vector<double> cuts;
    cuts.push_back(a);
    for (double c : breakpoints)
        if (c > a && c < b) cuts.push_back(c);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());

    const GaussLegendreRule& rule = GaussLegendreRule::get(opt.order);
    const GaussLegendreRule& rule2 = GaussLegendreRule::get(2 * opt.order);
    QuadResult out;
    Ball total;
    double len = b - a;
    std::vector<Panel> stack;
    for (size_t i = 0; i + 1 < cuts.size(); ++i)
        stack.push_back({cuts[i], cuts[i + 1], tol * (cuts[i + 1] - cuts[i]) / len, 0});

    while (!stack.empty()) {
        Panel p = stack.back();
        stack.pop_back();
        bool accepted = false;
        if (f.taylor) {
            bool taylor_ok = true;
            Ball rem;
            try {
                Ball center = Ball::exact(p.a).hull(Ball::exact(p.b));
                Series s = f.taylor(center, 2 * opt.order);
                Ball t2n = abs(s.c[2 * opt.order]);
                Ball width = Ball::exact(p.b) - Ball::exact(p.a);
                rem = t2n * rule.error_const * pow_ui(width, 2 * opt.order + 1);
            } catch (const RigorError&) {
                taylor_ok = false;
            }
            if (taylor_ok && rem.upper_d() <= p.tol) {
                Ball v = panel_sum(f, rule, p.a, p.b);
                total += v + Ball::from_midrad(0.0, rem.upper_d());
                accepted = true;
            }
        } else {
            Ball v1 = panel_sum(f, rule, p.a, p.b);
            Ball v2 = panel_sum(f, rule2, p.a, p.b);
            double err = 10.0 * std::fabs((v1 - v2).mid_d()) + (v1 - v2).rad_d();
            if (err <= p.tol || p.depth >= opt.max_depth) {
                if (err > p.tol)
                    throw ToleranceError("quadrature (heuristic) tolerance unreachable", err);
                total += v2 + Ball::from_midrad(0.0, err);
                out.certified = false;
                accepted = true;
            }
        }
        if (!accepted) {
            if (p.depth >= opt.max_depth)
                throw ToleranceError("quadrature tolerance unreachable at this precision", total.rad_d());
            double m = (p.a + p.b) / 2;
            stack.push_back({p.a, m, p.tol / 2, p.depth + 1});
            stack.push_back({m, p.b, p.tol / 2, p.depth + 1});
        }
    }
    out.value = total;
    if (!f.taylor) out.certified = false;
    return out;
}

}  // namespace maass
