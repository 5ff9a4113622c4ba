#pragma once

#include <string>
#include <vector>

#include "maass/spectral.hpp"

namespace maass {

// Sato-Tate density mu_p(x) = (1/pi) sqrt(1 - x^2/4) f_p(x) with
// f_p = (p+1)/((p^{1/2} + p^{-1/2})^2 - x^2); p = 0 means p = infinity (f = 1).
double sato_tate_density(long p, double x);  // throws for |x| > 2

struct Histogram {
    std::vector<double> centers;
    std::vector<long> counts;
    long total = 0;
};
Histogram make_histogram(const std::vector<double>& values, int bins, double lo = -2.0, double hi = 2.0);

// a(p) midpoints across forms; p = 0 collects every prime <= limit
std::vector<double> collect_ap(const std::vector<VerifiedForm>& forms, long p, i64 limit);

// verdict per form: max_p (|a(p)| - 2) with pass/fail/undecided
std::string ramanujan_report_csv(const std::vector<VerifiedForm>& forms, i64 limit);
std::string histogram_csv(const Histogram& h);
std::string density_curve_csv(long p, int samples);
std::string spacing_report_csv(const std::vector<VerifiedForm>& forms);

}  // namespace maass
