#include "maass/stats.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace maass {

double sato_tate_density(long p, double x) {
    if (!(std::fabs(x) <= 2.0)) throw std::domain_error("sato_tate_density: |x| must be <= 2");
    double mu = std::sqrt(std::max(1.0 - x * x / 4.0, 0.0)) / M_PI;
    if (p == 0) return mu;
    if (p < 2) throw std::invalid_argument("sato_tate_density: p must be a prime or 0 for infinity");
    double rp = std::sqrt((double)p);
    double fp = (p + 1) / ((rp + 1 / rp) * (rp + 1 / rp) - x * x);
    return mu * fp;
}

Histogram make_histogram(const std::vector<double>& values, int bins, double lo, double hi) {
    if (bins < 1 || !(hi > lo)) throw std::invalid_argument("histogram: bad binning");
    Histogram h;
    h.centers.resize(bins);
    h.counts.assign(bins, 0);
    double w = (hi - lo) / bins;
    for (int b = 0; b < bins; ++b) h.centers[b] = lo + (b + 0.5) * w;
    for (double v : values) {
        if (v < lo || v >= hi) continue;
        int b = std::min((int)((v - lo) / w), bins - 1);
        ++h.counts[b];
        ++h.total;
    }
    return h;
}

std::vector<double> collect_ap(const std::vector<VerifiedForm>& forms, long p, i64 limit) {
    std::vector<double> out;
    for (const auto& f : forms) {
        for (const auto& [n, v] : f.a) {
            if (n > limit) break;
            if (!is_prime(n)) continue;
            if (f.level % n == 0) continue;  // ramified primes are not Sato-Tate data
            if (p != 0 && n != p) continue;
            out.push_back(v.mid_d());
        }
    }
    return out;
}

std::string ramanujan_report_csv(const std::vector<VerifiedForm>& forms, i64 limit) {
    std::ostringstream out;
    out << "level,parity,lambda_tilde,worst_p,max_excess_mid,max_excess_rad,verdict\n";
    for (const auto& f : forms) {
        double worst = -1e300, worst_rad = 0;
        i64 worst_p = 0;
        bool any = false, fail = false;
        for (const auto& [n, v] : f.a) {
            if (n > limit) break;
            if (!is_prime(n) || f.level % n == 0) continue;
            any = true;
            Ball excess = abs(v) - Ball::exact(2L);
            if (excess.mid_d() > worst) {
                worst = excess.mid_d();
                worst_rad = excess.rad_d();
                worst_p = n;
            }
            if (excess.lower_d() > 0) fail = true;
        }
        const char* verdict = !any ? "nodata" : fail ? "fail" : (worst + worst_rad <= 0 ? "pass" : "undecided");
        out << f.level << ',' << (f.parity > 0 ? "even" : "odd") << ',' << f.lambda_tilde << ',' << worst_p << ','
            << worst << ',' << worst_rad << ',' << verdict << '\n';
    }
    return out.str();
}

std::string histogram_csv(const Histogram& h) {
    std::ostringstream out;
    out << "center,count\n";
    for (size_t i = 0; i < h.centers.size(); ++i) out << h.centers[i] << ',' << h.counts[i] << '\n';
    return out.str();
}

std::string density_curve_csv(long p, int samples) {
    std::ostringstream out;
    out << "x,density\n";
    for (int i = 0; i <= samples; ++i) {
        double x = -2.0 + 4.0 * i / samples;
        out << x << ',' << sato_tate_density(p, x) << '\n';
    }
    return out.str();
}

std::string spacing_report_csv(const std::vector<VerifiedForm>& forms) {
    std::vector<const VerifiedForm*> sorted;
    for (const auto& f : forms) sorted.push_back(&f);
    std::sort(sorted.begin(), sorted.end(),
              [](const VerifiedForm* a, const VerifiedForm* b) { return a->lambda_tilde < b->lambda_tilde; });
    std::ostringstream out;
    out << "lambda_lo,lambda_hi,gap,gap_certified_lower\n";
    for (size_t i = 0; i + 1 < sorted.size(); ++i) {
        double gap = sorted[i + 1]->lambda_tilde - sorted[i]->lambda_tilde;
        double cert = gap - sorted[i]->epsilon.upper_d() - sorted[i + 1]->epsilon.upper_d();
        out << sorted[i]->lambda_tilde << ',' << sorted[i + 1]->lambda_tilde << ',' << gap << ',' << cert << '\n';
    }
    return out.str();
}

}  // namespace maass
