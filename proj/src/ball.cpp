#include "maass/ball.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <vector>

namespace maass {

namespace precision {
namespace {
std::atomic<long> g_bits{128};
}
long default_bits() { return g_bits.load(std::memory_order_relaxed); }
void set_default_bits(long bits) {
    if (bits < 16) throw std::invalid_argument("precision must be at least 16 bits");
    g_bits.store(bits, std::memory_order_relaxed);
}
}  // namespace precision

namespace {

constexpr mpfr_prec_t kRadPrec = 32;

// Per-thread scratch so radius arithmetic does not allocate.
struct Scratch {
    mpfr_t a, b, c;
    Scratch() {
        mpfr_init2(a, kRadPrec);
        mpfr_init2(b, kRadPrec);
        mpfr_init2(c, kRadPrec);
    }
    ~Scratch() {
        mpfr_clear(a);
        mpfr_clear(b);
        mpfr_clear(c);
    }
};
Scratch& scratch() {
    thread_local Scratch s;
    return s;
}

// rad += 1/2 ulp(mid), rounded up. Called after an RNDN write to mid that
// reported inexactness.
void add_half_ulp(mpfr_t rad, const mpfr_t mid) {
    if (mpfr_zero_p(mid)) return;
    mpfr_exp_t e = mpfr_get_exp(mid);
    mpfr_prec_t p = mpfr_get_prec(mid);
    Scratch& s = scratch();
    mpfr_set_ui_2exp(s.a, 1, e - p - 1, MPFR_RNDU);
    mpfr_add(rad, rad, s.a, MPFR_RNDU);
}

// out := upper bound of |x| at radius precision.
void abs_upper(mpfr_t out, const mpfr_t x) {
    mpfr_set(out, x, MPFR_RNDA);
    mpfr_abs(out, out, MPFR_RNDU);
}

// out := lower bound of |x| at radius precision.
void abs_lower(mpfr_t out, const mpfr_t x) {
    mpfr_set(out, x, MPFR_RNDZ);
    mpfr_abs(out, out, MPFR_RNDZ);
}

}  // namespace

Ball::Ball() {
    mpfr_init2(mid_, precision::default_bits());
    mpfr_init2(rad_, kRadPrec);
    mpfr_set_zero(mid_, 1);
    mpfr_set_zero(rad_, 1);
}

Ball::Ball(const Ball& o) {
    mpfr_init2(mid_, mpfr_get_prec(o.mid_));
    mpfr_init2(rad_, kRadPrec);
    mpfr_set(mid_, o.mid_, MPFR_RNDN);
    mpfr_set(rad_, o.rad_, MPFR_RNDU);
}

Ball::Ball(Ball&& o) noexcept {
    mpfr_init2(mid_, MPFR_PREC_MIN);
    mpfr_init2(rad_, kRadPrec);
    mpfr_swap(mid_, o.mid_);
    mpfr_swap(rad_, o.rad_);
}

Ball& Ball::operator=(const Ball& o) {
    if (this != &o) {
        mpfr_set_prec(mid_, mpfr_get_prec(o.mid_));
        mpfr_set(mid_, o.mid_, MPFR_RNDN);
        mpfr_set(rad_, o.rad_, MPFR_RNDU);
    }
    return *this;
}

Ball& Ball::operator=(Ball&& o) noexcept {
    mpfr_swap(mid_, o.mid_);
    mpfr_swap(rad_, o.rad_);
    return *this;
}

Ball::~Ball() {
    mpfr_clear(mid_);
    mpfr_clear(rad_);
}

Ball Ball::exact(long v) {
    Ball r;
    int t = mpfr_set_si(r.mid_, v, MPFR_RNDN);
    r.absorb_round_error(t);
    return r;
}

Ball Ball::exact(double v) {
    if (!std::isfinite(v)) throw std::invalid_argument("Ball::exact: non-finite");
    Ball r;
    int t = mpfr_set_d(r.mid_, v, MPFR_RNDN);
    r.absorb_round_error(t);
    return r;
}

Ball Ball::from_midrad(double mid, double rad) {
    if (!(rad >= 0) || !std::isfinite(rad)) throw std::invalid_argument("Ball: bad radius");
    Ball r = exact(mid);
    Scratch& s = scratch();
    mpfr_set_d(s.a, rad, MPFR_RNDU);
    mpfr_add(r.rad_, r.rad_, s.a, MPFR_RNDU);
    return r;
}

Ball Ball::from_strings(const std::string& mid, const std::string& rad) {
    Ball r;
    char* end = nullptr;
    int inexact = mpfr_strtofr(r.mid_, mid.c_str(), &end, 10, MPFR_RNDN);
    if (end == mid.c_str() || *end != '\0')
        throw std::invalid_argument("Ball::from_strings: bad midpoint literal: " + mid);
    r.absorb_round_error(inexact);
    mpfr_t rr;
    mpfr_init2(rr, kRadPrec);
    // strings printed by rad_string() re-read exactly under RNDN; anything
    // inexact (foreign input) is bumped up one ulp to stay an upper bound
    inexact = mpfr_strtofr(rr, rad.c_str(), &end, 10, MPFR_RNDN);
    if (end == rad.c_str() || *end != '\0' || mpfr_sgn(rr) < 0) {
        mpfr_clear(rr);
        throw std::invalid_argument("Ball::from_strings: bad radius literal: " + rad);
    }
    if (inexact != 0) mpfr_nextabove(rr);
    mpfr_add(r.rad_, r.rad_, rr, MPFR_RNDU);
    mpfr_clear(rr);
    return r;
}

Ball Ball::zero_pm(const Ball& bound) {
    Ball r;
    Scratch& s = scratch();
    abs_upper(s.a, bound.mid_);
    mpfr_add(r.rad_, s.a, bound.rad_, MPFR_RNDU);
    return r;
}

Ball Ball::pi() {
    Ball r;
    int t = mpfr_const_pi(r.mid_, MPFR_RNDN);
    r.absorb_round_error(t);
    return r;
}

void Ball::absorb_round_error(int inexact) {
    if (inexact != 0) add_half_ulp(rad_, mid_);
}

Ball Ball::operator+(const Ball& b) const {
    Ball r;
    mpfr_set_prec(r.mid_, std::max(prec(), b.prec()));
    int t = mpfr_add(r.mid_, mid_, b.mid_, MPFR_RNDN);
    mpfr_add(r.rad_, rad_, b.rad_, MPFR_RNDU);
    r.absorb_round_error(t);
    return r;
}

Ball Ball::operator-(const Ball& b) const {
    Ball r;
    mpfr_set_prec(r.mid_, std::max(prec(), b.prec()));
    int t = mpfr_sub(r.mid_, mid_, b.mid_, MPFR_RNDN);
    mpfr_add(r.rad_, rad_, b.rad_, MPFR_RNDU);
    r.absorb_round_error(t);
    return r;
}

Ball Ball::operator*(const Ball& b) const {
    Ball r;
    mpfr_set_prec(r.mid_, std::max(prec(), b.prec()));
    int t = mpfr_mul(r.mid_, mid_, b.mid_, MPFR_RNDN);
    // rad = |am| rb + |bm| ra + ra rb
    Scratch& s = scratch();
    abs_upper(s.a, mid_);
    abs_upper(s.b, b.mid_);
    mpfr_mul(s.a, s.a, b.rad_, MPFR_RNDU);
    mpfr_mul(s.b, s.b, rad_, MPFR_RNDU);
    mpfr_add(s.a, s.a, s.b, MPFR_RNDU);
    mpfr_mul(s.b, rad_, b.rad_, MPFR_RNDU);
    mpfr_add(r.rad_, s.a, s.b, MPFR_RNDU);
    r.absorb_round_error(t);
    return r;
}

Ball Ball::operator/(const Ball& b) const {
    if (b.contains_zero()) throw BallDomainError("ball division by a ball containing zero");
    Ball r;
    mpfr_set_prec(r.mid_, std::max(prec(), b.prec()));
    int t = mpfr_div(r.mid_, mid_, b.mid_, MPFR_RNDN);
    // rad = (ra |bm| + rb |am|) / (blo |bm|), blo = lower bound of |b|
    Scratch& s = scratch();
    abs_upper(s.a, b.mid_);
    mpfr_mul(s.a, s.a, rad_, MPFR_RNDU);
    abs_upper(s.b, mid_);
    mpfr_mul(s.b, s.b, b.rad_, MPFR_RNDU);
    mpfr_add(s.a, s.a, s.b, MPFR_RNDU);  // numerator (upper)
    abs_lower(s.b, b.mid_);
    mpfr_sub(s.c, s.b, b.rad_, MPFR_RNDD);  // blo > 0 by the contains_zero check
    mpfr_mul(s.b, s.b, s.c, MPFR_RNDD);     // denominator (lower)
    mpfr_div(s.a, s.a, s.b, MPFR_RNDU);
    mpfr_set(r.rad_, s.a, MPFR_RNDU);
    r.absorb_round_error(t);
    return r;
}

Ball Ball::operator-() const {
    Ball r(*this);
    mpfr_neg(r.mid_, r.mid_, MPFR_RNDN);  // exact
    return r;
}

Ball& Ball::operator+=(const Ball& b) {
    int t = mpfr_add(mid_, mid_, b.mid_, MPFR_RNDN);
    mpfr_add(rad_, rad_, b.rad_, MPFR_RNDU);
    absorb_round_error(t);
    return *this;
}
Ball& Ball::operator-=(const Ball& b) {
    int t = mpfr_sub(mid_, mid_, b.mid_, MPFR_RNDN);
    mpfr_add(rad_, rad_, b.rad_, MPFR_RNDU);
    absorb_round_error(t);
    return *this;
}
Ball& Ball::operator*=(const Ball& b) { return *this = *this * b; }
Ball& Ball::operator/=(const Ball& b) { return *this = *this / b; }

Ball Ball::add(long v) const {
    Ball r(*this);
    int t = mpfr_add_si(r.mid_, r.mid_, v, MPFR_RNDN);
    r.absorb_round_error(t);
    return r;
}

Ball Ball::mul(long v) const {
    Ball r(*this);
    int t = mpfr_mul_si(r.mid_, r.mid_, v, MPFR_RNDN);
    Scratch& s = scratch();
    mpfr_set_si(s.a, v, MPFR_RNDA);
    mpfr_abs(s.a, s.a, MPFR_RNDU);
    mpfr_mul(r.rad_, rad_, s.a, MPFR_RNDU);
    r.absorb_round_error(t);
    return r;
}

Ball Ball::div(long v) const {
    if (v == 0) throw BallDomainError("ball division by zero integer");
    Ball r(*this);
    int t = mpfr_div_si(r.mid_, r.mid_, v, MPFR_RNDN);
    Scratch& s = scratch();
    mpfr_set_si(s.a, v, MPFR_RNDZ);
    mpfr_abs(s.a, s.a, MPFR_RNDZ);
    mpfr_div(r.rad_, rad_, s.a, MPFR_RNDU);
    r.absorb_round_error(t);
    return r;
}

Ball Ball::mul_2exp(long e) const {
    Ball r(*this);
    mpfr_mul_2si(r.mid_, r.mid_, e, MPFR_RNDN);  // exact
    mpfr_mul_2si(r.rad_, r.rad_, e, MPFR_RNDU);
    return r;
}

namespace {

// Enclosure of a monotone increasing function from endpoint evaluations.
template <typename F>
Ball monotone_enclosure(const Ball& x, F&& f) {
    Ball r;
    mpfr_set_prec(r.mid_mut(), x.prec());
    if (x.is_exact()) {
        int t = f(r.mid_mut(), x.mid(), MPFR_RNDN);
        r.absorb_round_error(t);
        return r;
    }
    mpfr_t lo, hi;
    mpfr_init2(lo, x.prec());
    mpfr_init2(hi, x.prec());
    mpfr_sub(lo, x.mid(), x.rad(), MPFR_RNDD);
    mpfr_add(hi, x.mid(), x.rad(), MPFR_RNDU);
    f(lo, lo, MPFR_RNDD);
    f(hi, hi, MPFR_RNDU);
    int t = mpfr_add(r.mid_mut(), lo, hi, MPFR_RNDN);
    mpfr_div_2ui(r.mid_mut(), r.mid_mut(), 1, MPFR_RNDN);
    mpfr_sub(hi, hi, lo, MPFR_RNDU);
    mpfr_div_2ui(hi, hi, 1, MPFR_RNDU);
    mpfr_set(r.rad_mut(), hi, MPFR_RNDU);
    r.absorb_round_error(t ? t : 1);  // re-center slop
    mpfr_clear(lo);
    mpfr_clear(hi);
    return r;
}

}  // namespace

Ball exp(const Ball& x) {
    return monotone_enclosure(x, [](mpfr_ptr o, mpfr_srcptr a, mpfr_rnd_t rnd) { return mpfr_exp(o, a, rnd); });
}

Ball log(const Ball& x) {
    if (!x.is_positive()) throw BallDomainError("log of a ball not strictly positive");
    return monotone_enclosure(x, [](mpfr_ptr o, mpfr_srcptr a, mpfr_rnd_t rnd) { return mpfr_log(o, a, rnd); });
}

Ball sqrt(const Ball& x) {
    if (x.is_exact() && mpfr_zero_p(x.mid())) return Ball();
    if (!x.is_positive()) throw BallDomainError("sqrt of a ball not strictly positive");
    return monotone_enclosure(x, [](mpfr_ptr o, mpfr_srcptr a, mpfr_rnd_t rnd) { return mpfr_sqrt(o, a, rnd); });
}

Ball sinh(const Ball& x) {
    return monotone_enclosure(x, [](mpfr_ptr o, mpfr_srcptr a, mpfr_rnd_t rnd) { return mpfr_sinh(o, a, rnd); });
}

Ball acosh(const Ball& x) {
    Ball shifted = x.add(-1);
    if (shifted.is_negative()) throw BallDomainError("acosh of a ball below 1");
    if (shifted.contains_zero()) {
        // range is [0, acosh(hi)]
        mpfr_t hi;
        mpfr_init2(hi, x.prec());
        mpfr_add(hi, x.mid(), x.rad(), MPFR_RNDU);
        if (mpfr_cmp_ui(hi, 1) < 0) mpfr_set_ui(hi, 1, MPFR_RNDN);
        mpfr_acosh(hi, hi, MPFR_RNDU);
        double h = mpfr_get_d(hi, MPFR_RNDU);
        mpfr_clear(hi);
        return Ball::from_midrad(h / 2, h / 2);
    }
    return monotone_enclosure(x, [](mpfr_ptr o, mpfr_srcptr a, mpfr_rnd_t rnd) { return mpfr_acosh(o, a, rnd); });
}

Ball atan(const Ball& x) {
    return monotone_enclosure(x, [](mpfr_ptr o, mpfr_srcptr a, mpfr_rnd_t rnd) { return mpfr_atan(o, a, rnd); });
}

Ball cosh(const Ball& x) {
    if (!x.contains_zero()) {
        return monotone_enclosure(abs(x),
                                  [](mpfr_ptr o, mpfr_srcptr a, mpfr_rnd_t rnd) { return mpfr_cosh(o, a, rnd); });
    }
    // range [1, cosh(max|x|)]
    mpfr_t hi, t;
    mpfr_init2(hi, x.prec());
    mpfr_init2(t, x.prec());
    mpfr_abs(t, x.mid(), MPFR_RNDU);
    mpfr_add(t, t, x.rad(), MPFR_RNDU);
    mpfr_cosh(hi, t, MPFR_RNDU);
    Ball r;
    mpfr_set_prec(r.mid_mut(), x.prec());
    int tt = mpfr_add_ui(r.mid_mut(), hi, 1, MPFR_RNDN);
    mpfr_div_2ui(r.mid_mut(), r.mid_mut(), 1, MPFR_RNDN);
    mpfr_sub_ui(hi, hi, 1, MPFR_RNDU);
    mpfr_div_2ui(hi, hi, 1, MPFR_RNDU);
    mpfr_set(r.rad_mut(), hi, MPFR_RNDU);
    r.absorb_round_error(tt ? tt : 1);
    mpfr_clear(hi);
    mpfr_clear(t);
    return r;
}

namespace {

// sin/cos. Exact argument: direct rounding. Small radius: Lipschitz-1 value
// at the midpoint. Wide interval: double-precision range analysis with the
// extremum window widened outward, endpoint values padded.
Ball trig_enclosure(const Ball& x, bool want_sin) {
    long p = x.prec();
    Ball r;
    if (x.is_exact()) {
        mpfr_set_prec(r.mid_mut(), p);
        int t = want_sin ? mpfr_sin(r.mid_mut(), x.mid(), MPFR_RNDN) : mpfr_cos(r.mid_mut(), x.mid(), MPFR_RNDN);
        r.absorb_round_error(t);
        return r;
    }
    Scratch& s = scratch();
    mpfr_set_d(s.a, 0.25, MPFR_RNDN);
    if (mpfr_cmp(x.rad(), s.a) <= 0) {
        mpfr_set_prec(r.mid_mut(), p);
        int t = want_sin ? mpfr_sin(r.mid_mut(), x.mid(), MPFR_RNDN) : mpfr_cos(r.mid_mut(), x.mid(), MPFR_RNDN);
        mpfr_set(r.rad_mut(), x.rad(), MPFR_RNDU);
        r.absorb_round_error(t ? t : 1);
        return r;
    }
    double lo = x.lower_d(), hi = x.upper_d();
    if (!(std::isfinite(lo) && std::isfinite(hi)) || hi - lo > 6.3 || std::fabs(lo) > 1e12 || std::fabs(hi) > 1e12)
        return Ball::from_midrad(0.0, 1.0);
    const double kPi = 3.14159265358979323846;
    double shift = want_sin ? kPi / 2 : 0.0;  // sin(x) = cos(x - pi/2)
    double clo = lo - shift, chi = hi - shift;
    double pad = 1e-9 * (1.0 + std::max(std::fabs(clo), std::fabs(chi)));
    double vlo = std::cos(clo), vhi = std::cos(chi);
    double fmin = std::min(vlo, vhi) - pad, fmax = std::max(vlo, vhi) + pad;
    long klo = (long)std::ceil(clo / kPi - 1e-9);
    long khi = (long)std::floor(chi / kPi + 1e-9);
    for (long k = klo; k <= khi; ++k) {
        if (((k % 2) + 2) % 2 == 0)
            fmax = 1.0;
        else
            fmin = -1.0;
        if (fmax == 1.0 && fmin == -1.0) break;
    }
    fmin = std::max(fmin, -1.0);
    fmax = std::min(fmax, 1.0);
    return Ball::from_midrad((fmin + fmax) / 2, (fmax - fmin) / 2 + pad);
}

}  // namespace

Ball cos(const Ball& x) { return trig_enclosure(x, false); }
Ball sin(const Ball& x) { return trig_enclosure(x, true); }

Ball abs(const Ball& x) {
    if (!x.contains_zero()) {
        Ball r(x);
        if (mpfr_sgn(x.mid()) < 0) mpfr_neg(r.mid_mut(), r.mid_mut(), MPFR_RNDN);
        return r;
    }
    if (x.is_exact() && mpfr_zero_p(x.mid())) return Ball();
    // [0, |mid| + rad], without a double round trip (values may exceed its range)
    Scratch& s = scratch();
    abs_upper(s.a, x.mid());
    mpfr_add(s.a, s.a, x.rad(), MPFR_RNDU);
    mpfr_mul_2si(s.a, s.a, -1, MPFR_RNDU);
    Ball r;
    mpfr_set(r.mid_mut(), s.a, MPFR_RNDN);
    mpfr_set(r.rad_mut(), s.a, MPFR_RNDU);
    return r;
}

Ball pow_ui(const Ball& x, unsigned long k) {
    if (k == 0) return Ball::exact(1L);
    Ball acc = x;
    if (k == 1) return acc;
    unsigned long bit = 1UL << (62 - __builtin_clzl(k));
    for (; bit; bit >>= 1) {
        acc = acc * acc;
        if (k & bit) acc = acc * x;
    }
    return acc;
}

Ball sinc(const Ball& x) {
    if (!x.contains_zero()) return sin(x) / x;
    Ball ax = abs(x);
    if (ax.upper_d() > 2.4) return Ball::from_midrad(0.0, 1.0);
    // alternating series: |sinc(x) - (1 - x^2/6)| <= x^4/120 for |x| <= 2.4
    Ball x2 = x * x;
    Ball r = Ball::exact(1L) - x2.div(6);
    double pad = (x2 * x2).div(120).upper_d();
    return r + Ball::from_midrad(0.0, pad);
}

namespace {
// [lo, hi] -> ball, rounding outward.
Ball from_endpoints(mpfr_srcptr lo, mpfr_srcptr hi, long p) {
    Ball r;
    mpfr_set_prec(r.mid_mut(), p);
    int t = mpfr_add(r.mid_mut(), lo, hi, MPFR_RNDN);
    mpfr_div_2ui(r.mid_mut(), r.mid_mut(), 1, MPFR_RNDN);
    mpfr_t w;
    mpfr_init2(w, kRadPrec);
    mpfr_sub(w, hi, lo, MPFR_RNDU);
    mpfr_div_2ui(w, w, 1, MPFR_RNDU);
    mpfr_set(r.rad_mut(), w, MPFR_RNDU);
    mpfr_clear(w);
    r.absorb_round_error(t ? t : 1);
    return r;
}
}  // namespace

Ball Ball::round_to(long bits) const {
    Ball r;
    mpfr_set_prec(r.mid_mut(), bits);
    int t = mpfr_set(r.mid_mut(), mid_, MPFR_RNDN);
    mpfr_set(r.rad_mut(), rad_, MPFR_RNDU);
    r.absorb_round_error(t);
    return r;
}

Ball Ball::hull(const Ball& b) const {
    long p = std::max(prec(), b.prec());
    mpfr_t lo1, hi1, lo2, hi2;
    mpfr_init2(lo1, p);
    mpfr_init2(hi1, p);
    mpfr_init2(lo2, p);
    mpfr_init2(hi2, p);
    mpfr_sub(lo1, mid_, rad_, MPFR_RNDD);
    mpfr_add(hi1, mid_, rad_, MPFR_RNDU);
    mpfr_sub(lo2, b.mid_, b.rad_, MPFR_RNDD);
    mpfr_add(hi2, b.mid_, b.rad_, MPFR_RNDU);
    if (mpfr_cmp(lo2, lo1) < 0) mpfr_set(lo1, lo2, MPFR_RNDD);
    if (mpfr_cmp(hi2, hi1) > 0) mpfr_set(hi1, hi2, MPFR_RNDU);
    Ball r = from_endpoints(lo1, hi1, p);
    mpfr_clear(lo1);
    mpfr_clear(hi1);
    mpfr_clear(lo2);
    mpfr_clear(hi2);
    return r;
}

Ball Ball::intersect(const Ball& b) const {
    long p = std::max(prec(), b.prec());
    mpfr_t lo1, hi1, lo2, hi2;
    mpfr_init2(lo1, p);
    mpfr_init2(hi1, p);
    mpfr_init2(lo2, p);
    mpfr_init2(hi2, p);
    mpfr_sub(lo1, mid_, rad_, MPFR_RNDD);
    mpfr_add(hi1, mid_, rad_, MPFR_RNDU);
    mpfr_sub(lo2, b.mid_, b.rad_, MPFR_RNDD);
    mpfr_add(hi2, b.mid_, b.rad_, MPFR_RNDU);
    if (mpfr_cmp(lo2, lo1) > 0) mpfr_set(lo1, lo2, MPFR_RNDD);
    if (mpfr_cmp(hi2, hi1) < 0) mpfr_set(hi1, hi2, MPFR_RNDU);
    bool empty = mpfr_cmp(lo1, hi1) > 0;
    Ball r;
    if (!empty) r = from_endpoints(lo1, hi1, p);
    mpfr_clear(lo1);
    mpfr_clear(hi1);
    mpfr_clear(lo2);
    mpfr_clear(hi2);
    if (empty) throw RigorError("intersection of disjoint balls (inconsistent enclosures)");
    return r;
}

bool Ball::contains_zero() const {
    if (mpfr_zero_p(mid_)) return true;
    Scratch& s = scratch();
    abs_lower(s.a, mid_);
    return mpfr_cmp(s.a, rad_) <= 0;
}

bool Ball::is_positive() const {
    if (mpfr_sgn(mid_) <= 0) return false;
    Scratch& s = scratch();
    mpfr_set(s.a, mid_, MPFR_RNDD);
    return mpfr_cmp(s.a, rad_) > 0;
}

bool Ball::is_negative() const { return (-*this).is_positive(); }

bool Ball::is_exact() const { return mpfr_zero_p(rad_); }

bool Ball::contains(const Ball& b) const {
    long p = std::max(prec(), b.prec());
    mpfr_t lo1, hi1, lo2, hi2;
    mpfr_init2(lo1, p);
    mpfr_init2(hi1, p);
    mpfr_init2(lo2, p);
    mpfr_init2(hi2, p);
    mpfr_sub(lo1, mid_, rad_, MPFR_RNDD);
    mpfr_add(hi1, mid_, rad_, MPFR_RNDU);
    mpfr_sub(lo2, b.mid_, b.rad_, MPFR_RNDD);
    mpfr_add(hi2, b.mid_, b.rad_, MPFR_RNDU);
    bool ok = mpfr_cmp(lo1, lo2) <= 0 && mpfr_cmp(hi2, hi1) <= 0;
    mpfr_clear(lo1);
    mpfr_clear(hi1);
    mpfr_clear(lo2);
    mpfr_clear(hi2);
    return ok;
}

bool Ball::contains(double x) const { return contains(Ball::exact(x)); }

double Ball::mid_d() const { return mpfr_get_d(mid_, MPFR_RNDN); }
double Ball::rad_d() const { return mpfr_get_d(rad_, MPFR_RNDU); }

double Ball::lower_d() const {
    mpfr_t t;
    mpfr_init2(t, prec());
    mpfr_sub(t, mid_, rad_, MPFR_RNDD);
    double v = mpfr_get_d(t, MPFR_RNDD);
    mpfr_clear(t);
    return v;
}

double Ball::upper_d() const {
    mpfr_t t;
    mpfr_init2(t, prec());
    mpfr_add(t, mid_, rad_, MPFR_RNDU);
    double v = mpfr_get_d(t, MPFR_RNDU);
    mpfr_clear(t);
    return v;
}

namespace {
// Exact decimal expansion of a binary float: m 2^k = (m 5^-k) 10^k for k < 0.
// Re-reading it is exact, so serialization round-trips without radius growth.
std::string mpfr_exact_decimal(mpfr_srcptr x) {
    if (mpfr_zero_p(x)) return "0";
    mpz_t z;
    mpz_init(z);
    mpfr_exp_t k = mpfr_get_z_2exp(z, x);
    std::string sign;
    if (mpz_sgn(z) < 0) {
        sign = "-";
        mpz_neg(z, z);
    }
    long shift10 = 0;
    if (k >= 0) {
        mpz_mul_2exp(z, z, k);
    } else {
        mpz_t five;
        mpz_init_set_ui(five, 5);
        mpz_pow_ui(five, five, (unsigned long)(-k));
        mpz_mul(z, z, five);
        mpz_clear(five);
        shift10 = k;
    }
    char* s = mpz_get_str(nullptr, 10, z);
    std::string digits(s);
    free(s);
    mpz_clear(z);
    long e10 = (long)digits.size() + shift10;
    size_t last = digits.find_last_not_of('0');
    digits = digits.substr(0, last + 1);
    return sign + "0." + digits + "e" + std::to_string(e10);
}
}  // namespace

std::string Ball::mid_string() const { return mpfr_exact_decimal(mid_); }
std::string Ball::rad_string() const { return mpfr_exact_decimal(rad_); }

std::string Ball::str(int digits) const {
    char buf[512];
    mpfr_snprintf(buf, sizeof buf, "%.*Rg", digits, mid_);
    std::string s(buf);
    mpfr_snprintf(buf, sizeof buf, "%.3Rg", rad_);
    return s + " +/- " + buf;
}

Ball operator+(long a, const Ball& b) { return b.add(a); }
Ball operator-(long a, const Ball& b) { return (-b).add(a); }
Ball operator*(long a, const Ball& b) { return b.mul(a); }

}  // namespace maass
