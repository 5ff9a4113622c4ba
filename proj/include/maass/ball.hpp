#pragma once

#include <gmp.h>
#include <mpfr.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace maass {

// Errors that signal loss of rigor rather than programming mistakes.
struct RigorError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct BallDomainError : RigorError {
    using RigorError::RigorError;
};
struct ToleranceError : RigorError {
    double achieved;
    ToleranceError(const std::string& msg, double ach) : RigorError(msg), achieved(ach) {}
};
struct MissingDataError : RigorError {
    using RigorError::RigorError;
};

// Run-wide working precision for ball midpoints, in bits. The pipeline sets
// this to at least 2B where B is the target precision from the optimizer.
namespace precision {
long default_bits();
void set_default_bits(long bits);

struct Scoped {
    long saved;
    explicit Scoped(long bits) : saved(default_bits()) { set_default_bits(bits); }
    ~Scoped() { set_default_bits(saved); }
};
}  // namespace precision

// A real number known to lie in [mid - rad, mid + rad]. Every operation
// returns a ball containing the exact image of its input balls; midpoint
// rounding errors are folded into the radius. Radii are kept in a low
// precision mpfr value and always rounded up.
class Ball {
  public:
    Ball();
    Ball(const Ball& o);
    Ball(Ball&& o) noexcept;
    Ball& operator=(const Ball& o);
    Ball& operator=(Ball&& o) noexcept;
    ~Ball();

    // Exact embeddings (rad = 0).
    static Ball exact(long v);
    static Ball exact(double v);
    static Ball from_midrad(double mid, double rad);
    // mid given as decimal string (as produced by mid_string()); rad likewise.
    static Ball from_strings(const std::string& mid, const std::string& rad);
    static Ball pi();
    static Ball zero() { return Ball(); }
    // zero-centered ball whose radius covers |bound| (no double round trip)
    static Ball zero_pm(const Ball& bound);

    Ball operator+(const Ball& b) const;
    Ball operator-(const Ball& b) const;
    Ball operator*(const Ball& b) const;
    Ball operator/(const Ball& b) const;  // throws BallDomainError if b contains 0
    Ball operator-() const;
    Ball& operator+=(const Ball& b);
    Ball& operator-=(const Ball& b);
    Ball& operator*=(const Ball& b);
    Ball& operator/=(const Ball& b);

    Ball add(long v) const;
    Ball mul(long v) const;
    Ball div(long v) const;
    Ball mul_2exp(long e) const;  // exact scaling by 2^e

    friend Ball exp(const Ball& x);
    friend Ball log(const Ball& x);    // throws unless x strictly positive
    friend Ball sqrt(const Ball& x);   // throws unless x strictly positive (exact 0 allowed)
    friend Ball cosh(const Ball& x);
    friend Ball sinh(const Ball& x);
    friend Ball cos(const Ball& x);
    friend Ball sin(const Ball& x);
    friend Ball acosh(const Ball& x);  // throws unless x >= 1
    friend Ball atan(const Ball& x);
    friend Ball abs(const Ball& x);
    friend Ball pow_ui(const Ball& x, unsigned long k);

    // Enclosure of sin(x)/x, valid also when x contains 0.
    friend Ball sinc(const Ball& x);

    // Re-round to a given midpoint precision (enclosure preserved).
    Ball round_to(long bits) const;

    // Smallest ball containing both inputs.
    Ball hull(const Ball& b) const;
    // Intersection; both must enclose the same exact value. Throws if disjoint.
    Ball intersect(const Ball& b) const;

    bool contains_zero() const;
    bool is_positive() const;  // rigorously > 0
    bool is_negative() const;
    bool is_exact() const;
    bool contains(const Ball& b) const;  // [b] subset of [this]
    bool contains(double x) const;

    double mid_d() const;
    double rad_d() const;  // rounded up; may be +inf if out of double range
    double lower_d() const;
    double upper_d() const;

    // Exact decimal representation of the midpoint / radius (round-trips).
    std::string mid_string() const;
    std::string rad_string() const;
    // Short human-readable "mid +/- rad" form.
    std::string str(int digits = 20) const;

    long prec() const { return mpfr_get_prec(mid_); }

    // Low-level access for the few routines that work on mpfr directly.
    mpfr_srcptr mid() const { return mid_; }
    mpfr_srcptr rad() const { return rad_; }
    mpfr_ptr mid_mut() { return mid_; }
    mpfr_ptr rad_mut() { return rad_; }
    // Fold the 1/2 ulp rounding error of an external RNDN write to mid into rad.
    void absorb_round_error(int inexact);

  private:
    mpfr_t mid_;
    mpfr_t rad_;
};

Ball operator+(long a, const Ball& b);
Ball operator-(long a, const Ball& b);
Ball operator*(long a, const Ball& b);

}  // namespace maass
