#pragma once

#include <functional>

#include "maass/testfunc.hpp"
#include "maass/traceformula.hpp"

namespace maass {

// Symmetric ball matrix of the quadratic form Q(c, H) over the admissible
// index set {m <= M : gcd(m, N) = 1}.
struct QuadraticForm {
    long level = 0;
    std::string package_id;
    std::vector<i64> indices;
    std::vector<std::vector<Ball>> entry;

    size_t dim() const { return indices.size(); }
    // c' A c for an exact coefficient vector
    Ball value(const std::vector<double>& c) const;
};

std::vector<i64> admissible_indices(i64 M, long level);
// all trace arguments n = m1 m2 / k^2 (and m n / k^2, n^2/k^2) needed for a
// dimension-M solve plus Hecke extraction to n_max
std::vector<i64> trace_support(i64 M, i64 n_max, long level);

QuadraticForm assemble_quadratic_form(i64 M, long level, const std::function<Ball(i64)>& trace,
                                      const std::string& package_id = "");

// Interval Cholesky: true for every symmetric matrix inside the ball matrix.
bool ball_cholesky_posdef(const std::vector<std::vector<Ball>>& A, size_t* fail_pivot = nullptr);

struct PencilNotPositive : RigorError {
    i64 suggested_M;
    explicit PencilNotPositive(i64 m)
        : RigorError("Q not certifiably positive definite; retry with M <= " + std::to_string(m)),
          suggested_M(m) {}
};

struct CandidateForm {
    double lambda_tilde = 0;
    std::vector<double> c;  // unit norm, admissible basis
    int parity = +1;
};

// Whiten with the midpoint Cholesky of Q, solve the symmetric eigenproblem.
// Candidates above lambda_max are discarded. `Q` must pass the ball Cholesky
// certificate or PencilNotPositive is thrown.
std::vector<CandidateForm> solve_pencil(const QuadraticForm& Q, const QuadraticForm& Qtilde, double lambda_max,
                                        int parity);

// eps_i = sqrt(Q(c, H (lambda - lt)^2) / Q(c, H)) assembled from the three
// trace tables by linearity.
Ball rayleigh_epsilon(const std::vector<double>& c, double lambda_tilde, const QuadraticForm& Q0,
                      const QuadraticForm& Q1, const QuadraticForm& Q2);

struct VerifiedForm {
    long level = 0;
    int parity = +1;
    double lambda_tilde = 0;
    Ball lambda;   // enclosure [lt - eps, lt + eps]
    Ball epsilon;
    Ball delta;    // 0 until completeness certifies
    bool complete = false;
    std::vector<double> c;
    std::map<i64, Ball> a;      // Hecke eigenvalues by n
    std::map<long, int> signs;  // p | N -> sign of a_p
    int fricke_w = 0;
    bool signs_rigorous = false;

    Ball R() const { return sqrt(lambda - Ball::exact(0.25)); }
};

struct CompletenessResult {
    Ball B_rem;
    double lambda_star = 0;
    int certified = 0;  // forms with delta > 0 (a prefix in practice)
};

// Mass accounting with the monotone test function H*: B_rem bounds the H*
// mass of any eigenvalue outside the accepted intervals. Sets delta/complete
// on the forms.
CompletenessResult completeness(std::vector<VerifiedForm>& forms, const Ball& t1_star,
                                const TestFunctionPackage& Hstar);

// A_i(n) = sum_m c(m) sum_{k | (m,n)} t(m n / k^2); Q(e_n, H) = sum_{k|n} t(n^2/k^2)
Ball hecke_A(const std::vector<double>& c, const std::vector<i64>& indices, i64 n, long level,
             const std::function<Ball(i64)>& trace);
Ball hecke_diag(i64 n, const std::function<Ball(i64)>& trace);

// fill form.a for all n <= n_max with gcd(n, N) = 1
void extract_hecke(VerifiedForm& form, const QuadraticForm& Q0, i64 n_max,
                   const std::function<Ball(i64)>& trace);

// extend to all n <= n_max using the Hecke relations and the ramified signs
void extend_hecke(VerifiedForm& form, i64 n_max);

}  // namespace maass
