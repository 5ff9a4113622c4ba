#pragma once

#include <map>
#include <optional>

#include "maass/numtheory.hpp"
#include "maass/quadrature.hpp"
#include "maass/testfunc.hpp"

namespace maass {

// Taylor table for the elliptic-term integrals
//   f(x) = int_0^inf g~(u) cosh(u/2) / (sinh^2(u/2) + x) du,  x in (0, 1],
// sampled geometrically at x_j = c^{-j}, c = 1 + sqrt 2. Evaluation picks the
// nearest sample point in log scale and folds the analytic Taylor remainder
// into the radius.
struct EllipticTable {
    int K = 0;           // series degree
    double eps = 0;      // tolerance the degree was chosen for
    double x_min = 0;    // guaranteed coverage
    Ball M_g;            // bound for max |g~|
    Ball remainder_product;  // prod_{k=1}^{K+1} (2k-1)/(2k)
    std::vector<Ball> xs;                 // x_j
    std::vector<std::vector<Ball>> coeffs;  // [j][k] = f^(k)(x_j)/k!

    Ball eval(const Ball& x) const;  // throws if x below coverage
};

int elliptic_table_degree(double eps);  // K = ceil(log_c(1/eps))

EllipticTable build_elliptic_table(const TestFunctionPackage& pkg, double eps, double x_min,
                                   int gl_order = 9);

// One trace-formula evaluator for a fixed level and test-function package.
class TraceComputer {
  public:
    TraceComputer(const TestFunctionPackage& pkg, const LevelContext& level, const ClassDataStore& classdata,
                  double table_eps, i64 n_top);

    // geometric-side pieces, each a certified enclosure
    Ball hyperbolic_sum(i64 n) const;
    Ball elliptic_sum(i64 n) const;                 // 0 for n <= 0
    Ball elliptic_term(i64 n, i64 t) const;         // single t with t^2 < 4n
    Ball parabolic_terms(i64 n) const;
    Ball identity_term(i64 n) const;

    // t(n, H) = sum_j a_j(n) h(r_j): geometric side minus the residual term
    Ball trace(i64 n) const;
    // (even, odd) = ((t(n) + t(-n))/2, (t(n) - t(-n))/2), n > 0
    std::pair<Ball, Ball> parity_traces(i64 n) const;

    const EllipticTable& table() const { return table_; }
    const Ball& residual_h() const { return h_i_half_; }  // h(i/2)
    const TestFunctionPackage& package() const { return pkg_; }
    const LevelContext& level() const { return level_; }

    // largest |D| the class-data store must hold for traces up to n_top
    static i64 required_discriminant_bound(double X, i64 n_top);

  private:
    const TestFunctionPackage& pkg_;
    LevelContext level_;
    const ClassDataStore& classdata_;
    EllipticTable table_;
    Ball h_i_half_;
    i64 n_top_;

    Ball identity_integral() const;  // int g~'(u)/sinh(u/2) du over the real line
    mutable std::optional<Ball> identity_cache_;
};

// Resumable store of computed traces for one package.
struct TraceTable {
    long level = 0;
    double X = 0;
    int d = 0;
    std::string package_id;
    long prec = 0;
    std::map<i64, Ball> entries;

    const Ball& get(i64 n) const {
        auto it = entries.find(n);
        if (it == entries.end())
            throw MissingDataError("trace table missing entry n = " + std::to_string(n));
        return it->second;
    }
    bool has(i64 n) const { return entries.count(n) != 0; }
};

}  // namespace maass
