// Acceptance suite: runs every criterion at its stated tolerance and prints
// one pass/fail line each. Exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <random>

#include "hejhal_oracle.hpp"
#include "maass/pipeline.hpp"
#include "oracles.hpp"
#include "synthetic.hpp"

using namespace maass;

namespace {

int g_failures = 0;
std::chrono::steady_clock::time_point g_t0;

void report(int idx, bool pass, const std::string& detail) {
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - g_t0).count();
    std::printf("criterion %2d: %s  (%.1fs)  %s\n", idx, pass ? "PASS" : "FAIL", secs, detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
    g_t0 = std::chrono::steady_clock::now();
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

// ---- criterion 1 -----------------------------------------------------------
void criterion1() {
    OptimizedParams p = optimize_params(105, 2000, 1e9);
    bool pass = std::fabs(p.X - 5.51341) < 1e-4 && std::fabs(p.R_max - 21.38089) < 1e-4 && p.d == 13 &&
                std::fabs(p.twoB - 63.0) <= 1.0;
    report(1, pass, fmt("X=%.5f R_max=%.5f d=%d 2B=%.2f", p.X, p.R_max, p.d, p.twoB));
}

// ---- criterion 2 -----------------------------------------------------------
void criterion2() {
    int K = elliptic_table_degree(std::ldexp(1.0, -64));
    bool kpass = (K == 51) && K == (int)std::ceil(64.0 * std::log(2.0) / std::log(1.0 + std::sqrt(2.0)));
    precision::Scoped guard(192);
    TestFunctionPackage pkg = make_package(2.0, 5);
    EllipticTable tab = build_elliptic_table(pkg, std::ldexp(1.0, -64), 1e-6);
    // sample spacing follows c = 1 + sqrt 2
    double ratio = tab.xs[1].mid_d() / tab.xs[0].mid_d();
    bool cpass = std::fabs(1.0 / ratio - (1.0 + std::sqrt(2.0))) < 1e-12;
    Ball half_s = pkg.u_scale().mul_2exp(-1);
    std::mt19937_64 rng(42);
    int bad = 0;
    double worst = 0;
    for (int i = 0; i < 1000; ++i) {
        double x = std::exp(std::log(1e-6) * (double)(rng() % 1000000) / 1e6);
        if (x > 1) x = 1;
        Ball xv = Ball::exact(x);
        Ball tv = tab.eval(xv);
        Integrand f;
        f.value = [&](const Ball& u) {
            Ball sh = sinh(half_s * u);
            return pkg.eval.eval(u) * cosh(half_s * u) / (sh * sh + xv);
        };
        f.taylor = [&](const Ball& c, int deg) {
            Series den = series_sinh_linear(half_s, c, deg);
            den = den * den;
            den.c[0] += xv;
            return pkg.eval.taylor(c, deg) * series_cosh_linear(half_s, c, deg) * series_recip(den);
        };
        QuadResult q = integrate(f, 0.0, 5.0, {1, 2, 3, 4}, 1e-22);
        double diff = std::fabs((tv - q.value).mid_d());  // difference at working precision
        double allow = std::ldexp(1.0, -64) + tv.rad_d() + q.value.rad_d();
        worst = std::max(worst, diff - allow);
        if (!(diff <= allow)) ++bad;
    }
    report(2, kpass && cpass && bad == 0, fmt("K=%d, spacing 1+sqrt2 ok=%d, %d/1000 outside eps+radii", K, cpass, bad));
}

// ---- criterion 3 -----------------------------------------------------------
// independent per-d oracle: class number from the analytic class number
// formula with a character-sum L-value, unit from a fresh Pell solver
bool oracle_class_check(i64 d, const ClassRecord& rec, std::string* why) {
    auto [est, err] = oracles::l1_charsum(d, d > 0 ? 80 : 60);
    if (std::fabs(rec.L1.mid_d() - est) > err + rec.L1.rad_d()) {
        *why = fmt("L1 mismatch d=%ld cnf=%.9f est=%.9f err=%.1e", d, rec.L1.mid_d(), est, err);
        return false;
    }
    long h_analytic;
    if (d < 0) {
        int w = (d == -3) ? 6 : (d == -4) ? 4 : 2;
        h_analytic = std::lround(est * w * std::sqrt((double)-d) / (2 * M_PI));
    } else {
        h_analytic = std::lround(est * std::sqrt((double)d) / (2 * rec.reg.mid_d()));
    }
    if (h_analytic != rec.h) {
        *why = fmt("h mismatch d=%ld enum=%ld analytic=%ld", d, rec.h, h_analytic);
        return false;
    }
    return true;
}

void criterion3() {
    ClassDataStore store;
    store.ensure_range(10000, 10000);
    int bad = 0;
    long checked = 0;
    std::string why;
    for (i64 d = -10000; d <= 10000 && bad < 5; ++d) {
        if (d == 0 || d == 1 || !is_fundamental(d)) continue;
        if (!oracle_class_check(d, store.get(d), &why)) {
            std::printf("  %s\n", why.c_str());
            ++bad;
        }
        ++checked;
    }
    report(3, bad == 0, fmt("%ld fundamental discriminants, %d mismatches", checked, bad));
}

// ---- criterion 4 -----------------------------------------------------------
void criterion4() {
    precision::Scoped guard(192);
    // g2 vs numerical Fourier transform of h1^2 at 100 points
    PiecewiseExpPoly g2 = PiecewiseExpPoly::power_of_g1(2);
    auto ev = g2.compile();
    auto gl = [](const std::function<double(double)>& f, double a, double b, int per_unit) {
        static const double xs[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                                     -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                                     0.7966664774136267,  0.9602898564975363};
        static const double ws[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                                     0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                                     0.2223810344533745, 0.1012285362903763};
        int panels = (int)std::ceil((b - a) * per_unit);
        double h = (b - a) / panels, total = 0;
        for (int p = 0; p < panels; ++p) {
            double lo = a + p * h, acc = 0;
            for (int i = 0; i < 8; ++i) acc += ws[i] * f(lo + h * (xs[i] + 1) / 2);
            total += acc * h / 2;
        }
        return total;
    };
    std::mt19937_64 rng(7);
    int bad4 = 0;
    for (int i = 0; i < 100; ++i) {
        double x = -2.0 + 4.0 * (double)(rng() % 100000) / 100000.0;
        auto integrand = [&](double t) {
            double h = h1_double(t);
            return h * h * std::cos(t * x);
        };
        double ft = (gl(integrand, 0.0, 80.0, 4) + gl(integrand, 80.0, 12000.0, 1)) / M_PI;
        if (std::fabs(ev.eval(Ball::exact(x)).mid_d() - ft) > 1e-10) ++bad4;
    }
    // h_d(0) = 1 +- 1e-12, g_d >= 0, support [-d, d] for d <= 13
    bool hpass = true, gpass = true;
    for (int d = 1; d <= 13; ++d) {
        TestFunctionPackage pkg = make_package((double)d, d);  // X = d: lattice scale
        Ball h0 = pkg.h_eval_r(Ball());
        if (std::fabs(h0.mid_d() - 1.0) > 1e-12 || h0.rad_d() > 1e-12) hpass = false;
        for (int i = 0; i <= 40; ++i) {
            double x = -d - 0.25 + (2.0 * d + 0.5) * i / 40.0;
            Ball v = pkg.eval.eval(Ball::exact(x));
            if (std::fabs(x) >= d) {
                if (v.mid_d() != 0.0) gpass = false;
            } else if (v.upper_d() < -1e-20) {
                gpass = false;
            }
        }
    }
    report(4, bad4 == 0 && hpass && gpass,
           fmt("g2-vs-FT bad=%d/100, h_d(0) ok=%d, nonneg+support ok=%d", bad4, hpass, gpass));
}

// ---- criterion 5 -----------------------------------------------------------
// t(n, lambda H) via the symbolic g/4 - g'' route against a geometric side
// evaluated with a quadrature-defined transform of (1/4 + r^2) h(r)
void criterion5() {
    precision::Scoped guard(160);
    double X = 2.0;
    int dd = 5;
    TestFunctionPackage base = make_package(X, dd);
    TestFunctionPackage lam = apply_lambda_poly(base, {0, 1, 0});
    LevelContext lvl(5);
    ClassDataStore store;
    store.ensure_range(TraceComputer::required_discriminant_bound(X, 3), 20);
    TraceComputer tc(lam, lvl, store, 1e-24, 3);

    // quadrature-defined g~(u) and g~'(u) for the transformed test function
    auto gl = [](const std::function<double(double)>& f, double a, double b, int panels) {
        static const double xs[12] = {-0.9815606342467192, -0.9041172563704749, -0.7699026741943047,
                                      -0.5873179542866175, -0.3678314989981802, -0.1252334085114689,
                                      0.1252334085114689,  0.3678314989981802,  0.5873179542866175,
                                      0.7699026741943047,  0.9041172563704749,  0.9815606342467192};
        static const double ws[12] = {0.0471753363865118, 0.1069393259953184, 0.1600783285433462,
                                      0.2031674267230659, 0.2334925365383548, 0.2491470458134028,
                                      0.2491470458134028, 0.2334925365383548, 0.2031674267230659,
                                      0.1600783285433462, 0.1069393259953184, 0.0471753363865118};
        double h = (b - a) / panels, total = 0;
        for (int p = 0; p < panels; ++p) {
            double lo = a + p * h, acc = 0;
            for (int i = 0; i < 12; ++i) acc += ws[i] * f(lo + h * (xs[i] + 1) / 2);
            total += acc * h / 2;
        }
        return total;
    };
    auto hfun = [&](double r) { return std::pow(h1_double(X * r / dd), dd); };
    auto gq = [&](double u) {  // (1/pi) int (1/4 + r^2) h(r) cos(r u) dr
        if (std::fabs(u) >= X) return 0.0;
        auto f = [&](double r) { return (0.25 + r * r) * hfun(r) * std::cos(r * u); };
        return (gl(f, 0, 40, 160) + gl(f, 40, 400, 360)) / M_PI;
    };
    auto gqprime = [&](double u) {
        auto f = [&](double r) { return -(0.25 + r * r) * hfun(r) * r * std::sin(r * u); };
        return (gl(f, 0, 40, 160) + gl(f, 40, 400, 360)) / M_PI;
    };

    double worst = 0;
    for (i64 n = 1; n <= 3; ++n) {
        // hyperbolic + parabolic + identity with quadrature g
        double geo = 0;
        for (i64 t = 0;; ++t) {
            i64 D = t * t - 4 * n;
            if (D > 0 && !is_square(D)) {
                double arg = std::log(std::pow(t + std::sqrt((double)D), 2) / (4.0 * n));
                if (arg < X) {
                    double cn = c_coefficient(D, lvl, store).mid_d();
                    geo += (t ? 2 : 1) * cn * gq(arg);
                }
            }
            if (D > 0 && std::pow(t + std::sqrt((double)std::max<i64>(D, 1)), 2) / (4.0 * n) > std::exp(X) + 9)
                break;
        }
        // elliptic: f(x) with the quadrature g (substitute s = sinh(u/2))
        for (i64 t = 0; t * t < 4 * n; ++t) {
            i64 D = t * t - 4 * n;
            double x = -(double)D / (4.0 * n);
            auto f = [&](double u) { return gq(u) * std::cosh(u / 2) / (std::pow(std::sinh(u / 2), 2) + x); };
            double fx = gl(f, 0, X, (int)std::ceil(60 / std::sqrt(x)));
            double cn = c_coefficient(D, lvl, store).mid_d();
            geo += (t ? 2 : 1) * cn * std::sqrt(x) * fx / M_PI;
        }
        // parabolic (N = 5 prime)
        {
            double logN = std::log(5.0), first = 0, second = 0;
            for (auto [a, ddv] : divisor_pairs(n)) {
                double arg = std::log((double)a / std::fabs((double)ddv));
                if (a != ddv) first += gq(arg) / n_inf_part(a - ddv, lvl);
                double npow = 1;
                for (long r = 0;; ++r) {
                    double sarg = arg - 2 * r * logN;
                    if (sarg < -X) break;
                    second += gq(sarg) / npow;
                    npow *= 5;
                }
            }
            geo += logN * (first - 2 * second);
        }
        // identity (n = 1 only among 1..3); prefactor -(5-1)/12 = -1/3,
        // integral over the real line = 2 * (sliver + [delta, X])
        if (is_square(n)) {
            auto f = [&](double u) { return gqprime(u) / std::sinh(u / 2); };
            const double delta = 1e-6;
            double I = delta * (gqprime(delta / 2) / std::sinh(delta / 4)) + gl(f, delta, X, 700);
            geo += -(4.0 / 12.0) / std::sqrt((double)n) * 2 * I;
        }
        // residual: lambda at i/2 is 0, so the transformed h(i/2) = 0 (no term)
        double t_pkg = tc.trace(n).mid_d();
        double rad = tc.trace(n).rad_d();
        double diff = std::fabs(t_pkg - geo);
        worst = std::max(worst, diff - 1e-9 - rad);
    }
    report(5, worst <= 0, fmt("worst excess over 1e-9+radii: %.2e", worst));
}

// ---- criteria 6..9 share the desk-scale pipeline ---------------------------
struct DeskRun {
    RunConfig cfg;
    std::vector<VerifiedForm> forms;
    double oracle_R1 = 0;
    bool ran = false;
};

DeskRun g_desk;

void run_desk() {
    RunConfig cfg;
    cfg.level = 5;
    cfg.M = 40;
    cfg.D_max = 2e6;
    cfg.parity = +1;
    cfg.threads = 8;
    if (const char* env = std::getenv("MAASS_ACCEPT_CACHE"))
        cfg.cache_dir = env;
    else
        cfg.cache_dir = "acceptance_cache";
    Pipeline pipe(cfg);
    pipe.run_all();
    g_desk.cfg = pipe.config();
    g_desk.forms = pipe.load_forms();
    std::sort(g_desk.forms.begin(), g_desk.forms.end(),
              [](const VerifiedForm& a, const VerifiedForm& b) { return a.lambda_tilde < b.lambda_tilde; });
    auto oracle = hejhal::find_forms(5, +1, 3.9, 4.4, 0.02);
    if (!oracle.empty()) g_desk.oracle_R1 = oracle.front().R;
    g_desk.ran = true;
}

void criterion6() {
    run_desk();
    int eps_ok = 0;
    for (const auto& f : g_desk.forms)
        if (f.epsilon.upper_d() <= 1e-3) ++eps_ok;
    int complete_prefix = 0;
    for (size_t i = 0; i < g_desk.forms.size() && g_desk.forms[i].complete; ++i) ++complete_prefix;
    bool lowest_matches = false;
    double odiff = 1e9;
    if (!g_desk.forms.empty() && g_desk.oracle_R1 > 0) {
        double lam_oracle = 0.25 + g_desk.oracle_R1 * g_desk.oracle_R1;
        odiff = std::fabs(lam_oracle - g_desk.forms[0].lambda_tilde);
        lowest_matches = odiff <= g_desk.forms[0].epsilon.upper_d() + 1e-5;
    }
    bool pass = eps_ok >= 5 && complete_prefix >= 3 && lowest_matches;
    report(6, pass,
           fmt("intervals eps<=1e-3: %d, complete prefix: %d, |lambda1 - oracle| = %.2e (eps1 = %.2e)", eps_ok,
               complete_prefix, odiff, g_desk.forms.empty() ? 0.0 : g_desk.forms[0].epsilon.upper_d()));
}

void criterion7() {
    long viol = 0, checked = 0;
    for (const auto& f : g_desk.forms) {
        if (!f.complete || f.a.empty()) continue;
        for (auto& [m, am] : f.a) {
            if (m < 2) continue;
            for (auto& [n, an] : f.a) {
                if (n < m) continue;
                if (std::__gcd(m, n) != 1) continue;
                auto it = f.a.find(m * n);
                if (it == f.a.end()) continue;
                Ball lhs = am * an;
                ++checked;
                if (std::fabs(lhs.mid_d() - it->second.mid_d()) > lhs.rad_d() + it->second.rad_d()) ++viol;
            }
        }
    }
    report(7, viol == 0, fmt("%ld coprime pairs checked, %ld violations", checked, viol));
}

void criterion8() {
    // mass accounting: t_even(1) - sum_complete h must be nonnegative (within
    // radii) and explained by the uncertified candidates plus the remainder
    RunConfig cfg = g_desk.cfg;
    Pipeline pipe(cfg);
    Ball t1 = pipe.traces(0).get(1) + pipe.traces(0).get(-1);
    t1 = t1.mul_2exp(-1);
    const TestFunctionPackage& pkg = pipe.package();
    Ball certified_mass;
    Ball uncert_mass;
    double first_uncert = -1;
    for (const auto& f : g_desk.forms) {
        Ball h = pkg.h_eval_lambda(f.lambda);
        if (f.complete)
            certified_mass += h;
        else {
            uncert_mass += h;
            if (first_uncert < 0) first_uncert = f.lambda_tilde;
        }
    }
    Ball resid = t1 - certified_mass;
    double total_rad = resid.rad_d();
    bool nonneg = resid.upper_d() >= -total_rad;
    // upper accounting: residual <= mass at and above the first uncertified
    // interval: uncertified candidates + whatever remains beyond them
    Ball beyond = t1 - certified_mass - uncert_mass;
    bool bounded = resid.mid_d() <= uncert_mass.mid_d() + std::max(beyond.mid_d(), 0.0) + 10 * total_rad + 1e-12;
    report(8, nonneg && bounded,
           fmt("residual = %.3e (first uncertified at lambda=%.2f, uncert mass %.3e)", resid.mid_d(),
               first_uncert, uncert_mass.mid_d()));
}

void criterion9() {
    // synthetic planted-sign recovery (as in the unit suite) plus the desk form
    bool synth_ok = true;
    {
        using namespace synthetic;
        // build a level-5 even form with a_7 solved so the planted sum vanishes
        for (int sign5 : {+1, -1}) {
            VerifiedForm vf;
            vf.level = 5;
            vf.parity = +1;
            vf.lambda_tilde = 0.25 + 2.3 * 2.3;
            vf.lambda = Ball::exact(vf.lambda_tilde);
            std::mt19937_64 rng(811 + sign5);
            std::uniform_real_distribution<double> dist(-1.4, 1.4);
            std::map<i64, double> ap;
            for (i64 p : {2L, 3L, 7L}) ap[p] = dist(rng);
            // multiplicative closure over n <= 8 coprime to 5: 1,2,3,4,6,7,8
            std::map<i64, double> a;
            a[1] = 1;
            a[2] = ap[2];
            a[3] = ap[3];
            a[4] = ap[2] * ap[2] - 1;
            a[6] = ap[2] * ap[3];
            a[7] = ap[7];
            a[8] = ap[2] * a[4] - ap[2];
            BesselW W(Ball::exact(2.3));
            Ball sqN = sqrt(Ball::exact(5L));
            Ball sq2 = sqrt(Ball::exact(2L));
            int w = -sign5;
            auto term = [&](long n) {
                Ball y = Ball::pi().mul(2 * n) / sqN;
                if (w == -1) return W.eval(y);
                return W.eval(y * sq2) - W.eval(y / sq2);
            };
            Ball S;
            for (long n = 1; n <= 8; ++n) {
                if (n == 7 || n % 5 == 0) continue;
                double an = a.at(n);
                S += Ball::exact(an) / sqrt(Ball::exact(n)) * term(n);
            }
            Ball a7 = -(S * sqrt(Ball::exact(7L))) / term(7);
            for (long n = 1; n <= 8; ++n) {
                if (n % 5 == 0) continue;
                vf.a[n] = (n == 7) ? a7 : Ball::from_midrad(a.at(n), 1e-18);
            }
            SignDetection det = detect_signs(vf, 8);
            if (!det.result || det.result->signs.at(5) != sign5 || det.margin <= 0) synth_ok = false;
        }
    }
    // desk form: exactly one of the 2 hypotheses survives
    bool desk_ok = false;
    double margin = 0;
    for (const auto& f : g_desk.forms) {
        if (!f.complete || f.a.empty()) continue;
        SignDetection det = detect_signs(f, std::min<long>(30, g_desk.cfg.n_max));
        if (det.trials.size() == 2 && det.result && det.margin > 0) {
            desk_ok = true;
            margin = det.margin;
        }
        break;
    }
    report(9, synth_ok && desk_ok, fmt("synthetic ok=%d, desk unique survivor margin=%.2e", synth_ok, margin));
}

void criterion10() {
    double worst = 0;
    for (int i = 0; i <= 1000; ++i) {
        double x = -2.0 + 4.0 * i / 1000.0;
        double mu2 = sato_tate_density(2, x);
        double closed = 3.0 * std::sqrt(4 - x * x) / ((9 - 2 * x * x) * M_PI);
        worst = std::max(worst, std::fabs(mu2 - closed));
    }
    bool ints_ok = true;
    for (long p : {2L, 3L, 5L, 0L}) {
        auto f = [&](double phi) { return sato_tate_density(p, 2 * std::sin(phi)) * 2 * std::cos(phi); };
        double I = 0;
        int n = 40000;
        double h = M_PI / n;
        double a = -M_PI / 2;
        I = f(a) + f(a + n * h);
        for (int i = 1; i < n; ++i) I += f(a + i * h) * (i % 2 ? 4 : 2);
        I *= h / 3;
        if (std::fabs(I - 1.0) > 1e-9) ints_ok = false;
    }
    report(10, worst < 1e-12 && ints_ok, fmt("mu_2 worst dev %.2e, normalizations ok=%d", worst, ints_ok));
}

void criterion11() {
    // completeness detector on synthetic spectra
    precision::Scoped guard(128);
    TestFunctionPackage H = make_package(2.8, 6);
    TestFunctionPackage H1 = apply_lambda_poly(H, {0, 1, 0});
    TestFunctionPackage H2 = apply_lambda_poly(H, {0, 0, 1});
    synthetic::Spectrum spec = synthetic::make_spectrum(5, 8, 14 * 14, 2024);
    std::map<i64, Ball> t0, t1, t2;
    for (i64 n : trace_support(14, 14, 5)) {
        t0[n] = spec.parity_trace(n, +1, H);
        t1[n] = spec.parity_trace(n, +1, H1);
        t2[n] = spec.parity_trace(n, +1, H2);
    }
    QuadraticForm Q0 = assemble_quadratic_form(14, 5, [&](i64 n) { return t0.at(n); });
    QuadraticForm Q1 = assemble_quadratic_form(14, 5, [&](i64 n) { return t1.at(n); });
    QuadraticForm Q2 = assemble_quadratic_form(14, 5, [&](i64 n) { return t2.at(n); });
    auto cands = solve_pencil(Q0, Q1, 0.25 + 34 * 34, +1);
    std::vector<VerifiedForm> forms;
    for (auto& cd : cands) {
        VerifiedForm f;
        f.level = 5;
        f.lambda_tilde = cd.lambda_tilde;
        f.epsilon = rayleigh_epsilon(cd.c, cd.lambda_tilde, Q0, Q1, Q2);
        f.lambda = Ball::exact(cd.lambda_tilde) + Ball::from_midrad(0.0, f.epsilon.upper_d());
        f.c = cd.c;
        forms.push_back(std::move(f));
    }
    CompletenessResult full = completeness(forms, t0.at(1), H);
    bool full_ok = full.certified >= 3;
    // deltas match true gaps within radii (for certified forms)
    bool gaps_ok = true;
    for (const auto& f : forms) {
        if (!f.complete) continue;
        double true_gap = 1e300;
        for (const auto& pf : spec.forms) {
            double dd = std::fabs(pf.lambda - f.lambda_tilde);
            if (dd > f.epsilon.upper_d()) true_gap = std::min(true_gap, dd);
        }
        if (f.delta.mid_d() > true_gap + 1e-9) gaps_ok = false;
    }
    // omission detection: drop the second form
    std::vector<VerifiedForm> omitted;
    for (size_t i = 0; i < forms.size(); ++i)
        if (i != 1) omitted.push_back(forms[i]);
    for (auto& f : omitted) {
        f.complete = false;
        f.delta = Ball();
    }
    CompletenessResult res2 = completeness(omitted, t0.at(1), H);
    double hole = forms[1].lambda_tilde;
    bool detect_ok = true;
    for (const auto& f : omitted)
        if (f.lambda_tilde > hole && f.complete) detect_ok = false;
    Ball hole_mass = H.h_eval_lambda(Ball::exact(hole));
    if (!(res2.B_rem.upper_d() >= hole_mass.lower_d() - 1e-12)) detect_ok = false;
    report(11, full_ok && gaps_ok && detect_ok,
           fmt("full list certified=%d, gaps ok=%d, omission detected=%d", full.certified, gaps_ok, detect_ok));
}

}  // namespace

int main() {
    std::printf("acceptance suite\n");
    g_t0 = std::chrono::steady_clock::now();
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    criterion10();
    criterion11();
    std::printf("%d criterion(s) failed\n", g_failures);
    return g_failures;
}
