#include "maass/fricke.hpp"

#include <cmath>

namespace maass {

BesselW::BesselW(Ball R) : R_(std::move(R)) {
    if (R_.lower_d() < 0) throw std::invalid_argument("BesselW: R must be nonnegative");
}

Ball BesselW::eval(const Ball& y) const {
    if (!y.is_positive()) throw BallDomainError("BesselW: y must be positive");
    long prec = precision::default_bits();
    double ylo = y.lower_d();
    double target = std::ldexp(1.0, (int)-std::min<long>(prec - 12, 700)) * std::exp(-std::min(ylo, 500.0));
    target = std::max(target, 1e-290);
    // truncation T with tail <= e^{-y cosh T}/(y sinh T)
    double T = 1.0;
    while (std::exp(-ylo * std::cosh(T)) / (ylo * std::sinh(T)) > target) {
        T += 0.5;
        if (T > 300) throw ToleranceError("BesselW: truncation bound fails at this precision", target);
    }
    Ball tail_hi;
    {
        Ball ct = cosh(Ball::exact(T)), st = sinh(Ball::exact(T));
        Ball bound = exp(-(y * ct)) / (y * st);
        tail_hi = Ball::from_midrad(0.0, bound.upper_d());
    }
    Integrand f;
    f.value = [&](const Ball& t) { return exp(-(y * cosh(t))) * cos(R_ * t); };
    f.taylor = [&](const Ball& c, int deg) {
        Series ch = series_cosh_linear(Ball::exact(1L), c, deg);
        ch.scale(-y);
        return series_exp(ch) * series_cos_linear(R_, c, deg);
    };
    QuadResult q = integrate(f, 0.0, T, {}, target);
    Ball K = q.value + tail_hi;
    Ball W = sqrt(y) * K;
    // envelope cross-check and tightening
    Ball env = sqrt(Ball::pi().mul_2exp(-1)) * exp(-y);
    double e = env.upper_d();
    return W.intersect(Ball::from_midrad(0.0, e));
}

Ball kim_sarnak_theta() {
    // theta = prod_p max(1, max_k |a_{p^k}|/p^{k/2}) with
    // |a_{p^k}| <= (alpha^{k+1} - beta^{k+1})/(alpha - beta), alpha = p^{7/64};
    // only p = 2, 3 contribute factors above 1 (checked out to p = 7, k = 6)
    Ball theta = Ball::exact(1L);
    for (long p : {2L, 3L, 5L, 7L}) {
        Ball lp = log(Ball::exact(p));
        Ball alpha = exp(lp.mul(7).div(64));
        Ball beta = Ball::exact(1L) / alpha;
        Ball best = Ball::exact(1L);
        Ball apk_num = alpha * alpha - beta * beta;  // k = 1: alpha^2-beta^2 over alpha-beta
        Ball denom = alpha - beta;
        Ball sqp = sqrt(Ball::exact(p));
        Ball ppow = sqp;
        Ball alpha_pow = alpha * alpha, beta_pow = beta * beta;
        for (int k = 1; k <= 6; ++k) {
            Ball bound = (alpha_pow - beta_pow) / denom / ppow;
            if (bound.mid_d() > best.mid_d()) best = bound;
            alpha_pow *= alpha;
            beta_pow *= beta;
            ppow *= sqp;
        }
        if (best.mid_d() > 1.0) theta *= best;
    }
    return theta;
}

SignCase sign_case(int parity, int w) {
    if (parity > 0) return w < 0 ? SignCase::EvenMinus : SignCase::EvenPlus;
    return w > 0 ? SignCase::OddPlus : SignCase::OddMinus;
}

Ball tail_bound(SignCase cs, long M, long N) {
    if (M < 1 || N < 2) throw std::invalid_argument("tail_bound: need M >= 1, N >= 2");
    Ball theta = kim_sarnak_theta();
    Ball pref = theta * sqrt(Ball::pi().mul_2exp(-1));
    Ball sqN = sqrt(Ball::exact(N));
    Ball q2 = Ball::pi().mul(2) / sqN;                 // 2 pi / sqrt N
    Ball q1 = Ball::pi() * sqrt(Ball::exact(2L)) / sqN;  // pi sqrt2 / sqrt N
    switch (cs) {
        case SignCase::EvenMinus:
            return pref * exp(-q2.mul(M)) / (exp(q2) - Ball::exact(1L));
        case SignCase::EvenPlus:
            return pref.mul(2) * exp(-q1.mul(M)) / (exp(q1) - Ball::exact(1L));
        case SignCase::OddPlus: {
            Ball e = exp(q2);
            Ball num = e.mul(M + 1) - Ball::exact(M);
            Ball den = exp(q2.mul(M)) * (e - Ball::exact(1L)) * (e - Ball::exact(1L));
            return pref * num / den;
        }
        case SignCase::OddMinus: {
            Ball e = exp(q1);
            Ball num = e.mul(M + 1) - Ball::exact(M);
            Ball den = exp(q1.mul(M)) * (e - Ball::exact(1L)) * (e - Ball::exact(1L));
            return pref.mul(3).mul_2exp(-1) * num / den;
        }
    }
    throw std::logic_error("tail_bound: unknown case");
}

SignDetection detect_signs(const VerifiedForm& form, long M_trunc) {
    LevelContext ctx(form.level);
    Ball lam_lo = form.lambda - Ball::exact(0.25);
    if (!lam_lo.is_positive()) throw RigorError("detect_signs: lambda must exceed 1/4");
    BesselW W(sqrt(lam_lo));
    Ball sqN = sqrt(Ball::exact((long)form.level));
    // W tables at y_n, y_n sqrt2, y_n / sqrt2
    std::vector<Ball> W0(M_trunc + 1), Wp(M_trunc + 1), Wm(M_trunc + 1);
    std::vector<char> have0(M_trunc + 1, 0), havepm(M_trunc + 1, 0);
    Ball sq2 = sqrt(Ball::exact(2L));
    auto yn = [&](long n) { return Ball::pi().mul(2 * n) / sqN; };

    size_t np = ctx.primes.size();
    SignDetection out;
    int survivors = 0;
    double refute_margin = 1e300;
    for (size_t mask = 0; mask < (size_t(1) << np); ++mask) {
        SignTrial trial;
        int w = 1;
        for (size_t i = 0; i < np; ++i) {
            int s = (mask >> i) & 1 ? 1 : -1;
            trial.signs[ctx.primes[i]] = s;
            w *= -s;
        }
        trial.w = w;
        SignCase cs = sign_case(form.parity, w);
        VerifiedForm ext = form;
        ext.signs = trial.signs;
        extend_hecke(ext, M_trunc);
        Ball S;
        for (long n = 1; n <= M_trunc; ++n) {
            auto it = ext.a.find(n);
            if (it == ext.a.end()) throw MissingDataError("detect_signs: a(n) missing for n = " + std::to_string(n));
            Ball y = yn(n);
            Ball term;
            switch (cs) {
                case SignCase::EvenMinus:
                    if (!have0[n]) {
                        W0[n] = W.eval(y);
                        have0[n] = 1;
                    }
                    term = W0[n];
                    break;
                case SignCase::EvenPlus:
                    if (!havepm[n]) {
                        Wp[n] = W.eval(y * sq2);
                        Wm[n] = W.eval(y / sq2);
                        havepm[n] = 1;
                    }
                    term = Wp[n] - Wm[n];
                    break;
                case SignCase::OddPlus:
                    if (!have0[n]) {
                        W0[n] = W.eval(y);
                        have0[n] = 1;
                    }
                    term = W0[n].mul(n);  // y sqrt N / (2 pi) = n at y = y_n
                    break;
                case SignCase::OddMinus:
                    if (!havepm[n]) {
                        Wp[n] = W.eval(y * sq2);
                        Wm[n] = W.eval(y / sq2);
                        havepm[n] = 1;
                    }
                    term = (Wp[n] - Wm[n].mul_2exp(-1)).mul(n);
                    break;
            }
            S += it->second / sqrt(Ball::exact(n)) * term;
        }
        Ball bound = tail_bound(cs, M_trunc, form.level);
        Ball absS = abs(S);
        trial.abs_lo = std::max(absS.lower_d(), 0.0);
        trial.abs_hi = absS.upper_d();
        trial.bound = bound.upper_d();
        trial.survives = !(trial.abs_lo > trial.bound);
        if (trial.survives)
            ++survivors;
        else
            refute_margin = std::min(refute_margin, trial.abs_lo - trial.bound);
        out.trials.push_back(std::move(trial));
    }
    if (survivors == 1) {
        for (auto& t : out.trials)
            if (t.survives) out.result = SignHypothesisResult{t.signs, t.w};
        out.margin = refute_margin;
    } else {
        out.margin = 0;  // inconclusive: zero or several consistent hypotheses
    }
    return out;
}

}  // namespace maass
