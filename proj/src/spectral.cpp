#include "maass/spectral.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <set>

namespace maass {

Ball QuadraticForm::value(const std::vector<double>& c) const {
    if (c.size() != dim()) throw std::invalid_argument("quadratic form: dimension mismatch");
    Ball acc;
    for (size_t i = 0; i < dim(); ++i) {
        if (c[i] == 0) continue;
        Ball row;
        for (size_t j = 0; j < dim(); ++j) {
            if (c[j] == 0) continue;
            row += entry[i][j] * Ball::exact(c[j]);
        }
        acc += row * Ball::exact(c[i]);
    }
    return acc;
}

std::vector<i64> admissible_indices(i64 M, long level) {
    std::vector<i64> out;
    for (i64 m = 1; m <= M; ++m)
        if (std::__gcd(m, (i64)level) == 1) out.push_back(m);
    return out;
}

std::vector<i64> trace_support(i64 M, i64 n_max, long level) {
    std::set<i64> need;
    std::vector<i64> idx = admissible_indices(M, level);
    for (i64 m1 : idx)
        for (i64 m2 : idx)
            for (i64 k = 1; k * k <= m1 * m2; ++k)
                if (m1 % k == 0 && m2 % k == 0) need.insert(m1 * m2 / (k * k));
    for (i64 m : idx)
        for (i64 n = 1; n <= n_max; ++n) {
            if (std::__gcd(n, (i64)level) != 1) continue;
            for (i64 k = 1; k * k <= m * n; ++k)
                if (m % k == 0 && n % k == 0) need.insert(m * n / (k * k));
        }
    for (i64 n = 1; n <= n_max; ++n) {
        if (std::__gcd(n, (i64)level) != 1) continue;
        for (i64 k = 1; k <= n; ++k)
            if (n % k == 0) need.insert((n / k) * (n / k));
    }
    return std::vector<i64>(need.begin(), need.end());
}

QuadraticForm assemble_quadratic_form(i64 M, long level, const std::function<Ball(i64)>& trace,
                                      const std::string& package_id) {
    QuadraticForm q;
    q.level = level;
    q.package_id = package_id;
    q.indices = admissible_indices(M, level);
    size_t n = q.indices.size();
    q.entry.assign(n, std::vector<Ball>(n));
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i; j < n; ++j) {
            i64 m1 = q.indices[i], m2 = q.indices[j];
            Ball v;
            for (i64 k = 1; k * k <= m1 * m2; ++k)
                if (m1 % k == 0 && m2 % k == 0) v += trace(m1 * m2 / (k * k));
            q.entry[i][j] = v;
            if (j != i) q.entry[j][i] = v;
        }
    }
    return q;
}

bool ball_cholesky_posdef(const std::vector<std::vector<Ball>>& A, size_t* fail_pivot) {
    size_t n = A.size();
    std::vector<std::vector<Ball>> L(n, std::vector<Ball>(n));
    for (size_t j = 0; j < n; ++j) {
        Ball diag = A[j][j];
        for (size_t k = 0; k < j; ++k) diag -= L[j][k] * L[j][k];
        if (!diag.is_positive()) {
            if (fail_pivot) *fail_pivot = j;
            return false;
        }
        Ball root = sqrt(diag);
        L[j][j] = root;
        for (size_t i = j + 1; i < n; ++i) {
            Ball v = A[i][j];
            for (size_t k = 0; k < j; ++k) v -= L[i][k] * L[j][k];
            L[i][j] = v / root;
        }
    }
    return true;
}

std::vector<CandidateForm> solve_pencil(const QuadraticForm& Q, const QuadraticForm& Qtilde, double lambda_max,
                                        int parity) {
    size_t n = Q.dim();
    if (Qtilde.dim() != n) throw std::invalid_argument("pencil: dimension mismatch");
    size_t pivot = n;
    if (!ball_cholesky_posdef(Q.entry, &pivot)) throw PencilNotPositive(pivot > 1 ? Q.indices[pivot - 1] : 1);

    Eigen::MatrixXd A(n, n), B(n, n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            A(i, j) = Qtilde.entry[i][j].mid_d();
            B(i, j) = Q.entry[i][j].mid_d();
        }
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(A, B);
    if (solver.info() != Eigen::Success) throw RigorError("pencil: eigensolver failed");
    std::vector<CandidateForm> out;
    for (size_t i = 0; i < n; ++i) {
        double lt = solver.eigenvalues()(i);
        if (!(lt <= lambda_max)) continue;
        CandidateForm cf;
        cf.lambda_tilde = lt;
        cf.parity = parity;
        Eigen::VectorXd v = solver.eigenvectors().col(i);
        v.normalize();
        cf.c.assign(v.data(), v.data() + n);
        out.push_back(std::move(cf));
    }
    std::sort(out.begin(), out.end(),
              [](const CandidateForm& a, const CandidateForm& b) { return a.lambda_tilde < b.lambda_tilde; });
    return out;
}

Ball rayleigh_epsilon(const std::vector<double>& c, double lambda_tilde, const QuadraticForm& Q0,
                      const QuadraticForm& Q1, const QuadraticForm& Q2) {
    Ball lt = Ball::exact(lambda_tilde);
    Ball num = Q2.value(c) - (lt * Q1.value(c)).mul(2) + lt * lt * Q0.value(c);
    Ball den = Q0.value(c);
    if (!den.is_positive()) throw RigorError("rayleigh: Q(c, H) not certifiably positive");
    if (num.upper_d() < 0) throw RigorError("rayleigh: negative enclosed numerator (radius too large)");
    double hi = std::sqrt(num.upper_d() / den.lower_d());
    double lo = num.lower_d() <= 0 ? 0.0 : std::sqrt(num.lower_d() / den.upper_d());
    hi = std::nextafter(hi, INFINITY);
    return Ball::from_midrad((lo + hi) / 2, (hi - lo) / 2 + 1e-300);
}

CompletenessResult completeness(std::vector<VerifiedForm>& forms, const Ball& t1_star,
                                const TestFunctionPackage& Hstar) {
    std::sort(forms.begin(), forms.end(),
              [](const VerifiedForm& a, const VerifiedForm& b) { return a.lambda_tilde < b.lambda_tilde; });
    CompletenessResult res;
    Ball accounted;
    double covered_upper = -1e300;
    std::vector<Ball> h_at_upper(forms.size());
    for (size_t i = 0; i < forms.size(); ++i) {
        Ball upper_end = Ball::exact(forms[i].lambda_tilde) + forms[i].epsilon;
        h_at_upper[i] = Hstar.h_eval_lambda(upper_end);
        double lo_end = forms[i].lambda_tilde - forms[i].epsilon.upper_d();
        if (lo_end > covered_upper) accounted += h_at_upper[i];  // non-overlapping representative
        covered_upper = std::max(covered_upper, forms[i].lambda_tilde + forms[i].epsilon.upper_d());
    }
    res.B_rem = t1_star - accounted;
    double B_up = std::max(res.B_rem.upper_d(), 0.0);

    // lambda*: any eigenvalue outside the intervals has H*(lambda) <= B_up,
    // hence lambda >= lambda*; bisection keeps H*(lo) certifiably above B_up
    double lo = 0.2500001, hi;
    if (!(Hstar.h_eval_lambda(Ball::exact(lo)).lower_d() > B_up)) {
        res.lambda_star = 0.25;  // no isolation possible
    } else {
        // grow hi until H*(hi) < B_up or cap
        hi = 1.0;
        while (hi < 1e9 && Hstar.h_eval_lambda(Ball::exact(hi)).lower_d() > B_up) hi *= 2;
        for (int it = 0; it < 200; ++it) {
            double mid = (lo + hi) / 2;
            if (Hstar.h_eval_lambda(Ball::exact(mid)).lower_d() > B_up)
                lo = mid;
            else
                hi = mid;
            if (hi - lo < 1e-9 * (1 + lo)) break;
        }
        res.lambda_star = lo;
    }

    for (size_t i = 0; i < forms.size(); ++i) {
        VerifiedForm& f = forms[i];
        // no second eigenvalue may hide in this interval
        bool unique_here = res.B_rem.upper_d() < h_at_upper[i].lower_d();
        double delta = res.lambda_star - f.lambda_tilde;
        for (size_t j = 0; j < forms.size(); ++j) {
            if (j == i) continue;
            double dist = std::fabs(forms[j].lambda_tilde - f.lambda_tilde) - forms[j].epsilon.upper_d();
            delta = std::min(delta, dist);
        }
        if (unique_here && delta > 0 && f.epsilon.upper_d() < delta) {
            f.delta = Ball::exact(delta);
            f.complete = true;
            ++res.certified;
        } else {
            f.delta = Ball();
            f.complete = false;
        }
    }
    return res;
}

Ball hecke_A(const std::vector<double>& c, const std::vector<i64>& indices, i64 n, long level,
             const std::function<Ball(i64)>& trace) {
    (void)level;
    Ball acc;
    for (size_t i = 0; i < indices.size(); ++i) {
        if (c[i] == 0) continue;
        i64 m = indices[i];
        Ball inner;
        for (i64 k = 1; k * k <= m * n; ++k)
            if (m % k == 0 && n % k == 0) inner += trace(m * n / (k * k));
        acc += inner * Ball::exact(c[i]);
    }
    return acc;
}

Ball hecke_diag(i64 n, const std::function<Ball(i64)>& trace) {
    Ball acc;
    for (i64 k = 1; k <= n; ++k)
        if (n % k == 0) acc += trace((n / k) * (n / k));
    return acc;
}

namespace {
// upper bound of (eps/delta) sqrt(Q(c,H) Q(e_n,H)); the product can brush 0
double eta_bound(const Ball& eps_over_delta, const Ball& Qc, const Ball& Qen) {
    double prod = (abs(Qen) * Qc).upper_d();
    if (!(prod >= 0)) prod = 0;
    return eps_over_delta.upper_d() * std::sqrt(prod) * (1 + 1e-13);
}
}  // namespace

void extract_hecke(VerifiedForm& form, const QuadraticForm& Q0, i64 n_max,
                   const std::function<Ball(i64)>& trace) {
    if (!form.complete || !form.delta.is_positive())
        throw RigorError("hecke extraction requires a certified separation delta");
    Ball Qc = Q0.value(form.c);
    if (!Qc.is_positive()) throw RigorError("hecke extraction: Q(c, H) not positive");
    Ball eps_over_delta = form.epsilon / form.delta;
    Ball W = hecke_A(form.c, Q0.indices, 1, form.level, trace);
    W += Ball::from_midrad(0.0, eta_bound(eps_over_delta, Qc, hecke_diag(1, trace)));
    if (W.contains_zero()) throw RigorError("hecke extraction: W ball contains zero at this precision");
    form.a.clear();
    form.a[1] = Ball::exact(1L);  // normalization
    for (i64 n = 2; n <= n_max; ++n) {
        if (std::__gcd(n, (i64)form.level) != 1) continue;
        Ball A = hecke_A(form.c, Q0.indices, n, form.level, trace);
        A += Ball::from_midrad(0.0, eta_bound(eps_over_delta, Qc, hecke_diag(n, trace)));
        form.a[n] = A / W;
    }
}

void extend_hecke(VerifiedForm& form, i64 n_max) {
    LevelContext ctx(form.level);
    // ramified prime powers: a(p^k) = a(p)^k with a(p) = sign / sqrt p
    for (long p : ctx.primes) {
        auto it = form.signs.find(p);
        if (it == form.signs.end()) throw MissingDataError("extend_hecke: missing sign for p = " + std::to_string(p));
        Ball ap = Ball::exact((long)it->second) / sqrt(Ball::exact(p));
        form.a[p] = ap;
        Ball cur = ap;
        for (i64 q = (i64)p * p; q <= n_max; q *= p) {
            cur = cur * ap;
            form.a[q] = cur;
        }
    }
    // unramified prime powers via a(p^{k+1}) = a(p) a(p^k) - a(p^{k-1})
    for (i64 p = 2; p <= n_max; ++p) {
        if (!is_prime(p) || std::__gcd(p, (i64)form.level) != 1) continue;
        Ball am1 = Ball::exact(1L);
        auto it = form.a.find(p);
        if (it == form.a.end()) continue;  // beyond extraction range
        Ball a1 = it->second, cur = a1;
        for (i64 q = p * p; q <= n_max; q *= p) {
            Ball next = a1 * cur - am1;
            am1 = cur;
            cur = next;
            form.a[q] = cur;
        }
    }
    // multiplicative fill
    for (i64 n = 2; n <= n_max; ++n) {
        if (form.a.count(n)) continue;
        i64 rest = n;
        Ball v = Ball::exact(1L);
        bool ok = true;
        for (i64 p = 2; p * p <= rest && ok; ++p) {
            if (rest % p) continue;
            i64 q = 1;
            while (rest % p == 0) {
                rest /= p;
                q *= p;
            }
            auto it = form.a.find(q);
            if (it == form.a.end())
                ok = false;
            else
                v *= it->second;
        }
        if (ok && rest > 1) {
            auto it = form.a.find(rest);
            if (it == form.a.end())
                ok = false;
            else
                v *= it->second;
        }
        if (ok) form.a[n] = v;
    }
}

}  // namespace maass
