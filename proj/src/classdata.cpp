#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <unordered_set>

#include "maass/numtheory.hpp"

namespace maass {

namespace {

Ball ball_from_mpz(const mpz_class& z) {
    Ball r;
    int t = mpfr_set_z(r.mid_mut(), z.get_mpz_t(), MPFR_RNDN);
    r.absorb_round_error(t);
    return r;
}

void divisors_of(i64 m, std::vector<i64>& out) {
    out.clear();
    for (i64 a = 1; a * a <= m; ++a) {
        if (m % a == 0) {
            out.push_back(a);
            if (a != m / a) out.push_back(m / a);
        }
    }
}

// smallest-prime-factor sieve for the bulk build
struct SpfSieve {
    std::vector<int32_t> spf;
    explicit SpfSieve(i64 n) : spf(n + 1, 0) {
        for (i64 i = 2; i <= n; ++i) {
            if (spf[i] == 0)
                for (i64 j = i; j <= n; j += i)
                    if (spf[j] == 0) spf[j] = (int32_t)i;
        }
    }
    void divisors(i64 m, std::vector<i64>& out) const {
        out.clear();
        out.push_back(1);
        while (m > 1) {
            i64 p = spf[m], pk = 1;
            size_t base = out.size();
            while (m % p == 0) {
                m /= p;
                pk *= p;
                for (size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
            }
        }
    }
};

// Class number of an imaginary quadratic field: count reduced positive
// definite forms (a, b, c): b^2 - 4ac = d, -a < b <= a <= c, b >= 0 if a == c.
long h_negative(i64 d) {
    i64 ad = -d;
    long count = 0;
    for (i64 a = 1; 4 * a * a <= a * a + ad; ++a) {  // a <= sqrt(ad/3)
        for (i64 b = -(a - 1); b <= a; ++b) {
            i64 num = b * b + ad;
            if (num % (4 * a)) continue;
            i64 c = num / (4 * a);
            if (c < a) continue;
            if (a == c && b < 0) continue;
            i64 g = std::__gcd(std::__gcd(a, b < 0 ? -b : b), c);
            if (g == 1) ++count;
        }
    }
    return count;
}

// rho step on reduced indefinite forms; s = floor(sqrt(d))
inline void rho(i64 d, i64 s, i64& a, i64& b, i64& c) {
    i64 t = 2 * (c < 0 ? -c : c);
    i64 bp = s - (((s + b) % t) + t) % t;
    i64 cp = (bp * bp - d) / (4 * c);
    a = c;
    b = bp;
    c = cp;
}

// Narrow class number h+ = number of rho-cycles of reduced forms
// (0 < b < sqrt d, sqrt d - b < 2|a| < sqrt d + b).
long hplus_positive(i64 d, const SpfSieve* sieve = nullptr) {
    i64 s = isqrt(d);
    std::vector<std::pair<i64, i64>> forms;  // (a, b); c = (b^2 - d)/(4a)
    std::vector<i64> divs;
    for (i64 b = 2 - (d % 2); b * b < d; b += 2) {
        i64 m4 = d - b * b;
        if (m4 % 4) continue;
        m4 /= 4;
        if (sieve)
            sieve->divisors(m4, divs);
        else
            divisors_of(m4, divs);
        for (i64 a : divs) {
            i64 twoa = 2 * a;
            // sqrt(d) - b < 2a  <=>  (2a + b)^2 > d   (sqrt d irrational)
            if ((twoa + b) * (twoa + b) <= d) continue;
            // 2a < sqrt(d) + b  <=>  2a - b < sqrt(d)  <=>  (2a-b)^2 < d or 2a < b
            if (twoa - b >= 0 && (twoa - b) * (twoa - b) >= d) continue;
            forms.emplace_back(a, b);
            forms.emplace_back(-a, b);
        }
    }
    std::unordered_set<unsigned long long> visited;
    visited.reserve(forms.size() * 2);
    auto key = [](i64 a, i64 b) {
        return ((unsigned long long)(unsigned int)(int)a << 32) | (unsigned long long)(unsigned int)(int)b;
    };
    long cycles = 0;
    for (auto& f : forms) {
        if (visited.count(key(f.first, f.second))) continue;
        ++cycles;
        i64 a = f.first, b = f.second, c = (b * b - d) / (4 * a);
        while (!visited.count(key(a, b))) {
            visited.insert(key(a, b));
            rho(d, s, a, b, c);
        }
    }
    return cycles;
}

FundamentalUnit fundamental_unit_impl(i64 d) {
    // continued fraction of sqrt(m) with m = d or d/4, convergents in mpz
    i64 m = (d % 4 == 0) ? d / 4 : d;
    i64 a0 = isqrt(m);
    mpz_class pm2 = 1, pm1((long)a0), qm2 = 0, qm1 = 1;
    i64 P = a0, Q = m - a0 * a0;
    const i64 P1 = P, Q1 = Q;
    if (Q == 0) throw std::invalid_argument("fundamental_unit: square discriminant");
    while (true) {
        i64 ak = (P + a0) / Q;
        mpz_class pk = mpz_class((long)ak) * pm1 + pm2;
        mpz_class qk = mpz_class((long)ak) * qm1 + qm2;
        i64 Pn = ak * Q - P;
        i64 Qn = (m - Pn * Pn) / Q;
        if (Pn == P1 && Qn == Q1) {
            // state returned: (pm1, qm1) before this step is p_{l-1}/q_{l-1}
            mpz_class p = pm1, q = qm1;
            mpz_class nrm = p * p - mpz_class((long)m) * q * q;
            int norm;
            if (nrm == 1)
                norm = 1;
            else if (nrm == -1)
                norm = -1;
            else
                throw std::logic_error("pell: unexpected norm " + nrm.get_str());
            FundamentalUnit u;
            if (d % 4 == 0) {
                u.x = 2 * p;
                u.y = q;
                u.norm = norm;
            } else {
                u.x = 2 * p;
                u.y = 2 * q;
                u.norm = norm;
                if (((d % 8) + 8) % 8 == 5) {
                    // look for a half-integer unit eta = (x + y sqrt d)/2 with eta^3 = p + q sqrt d
                    mpz_class dz((long)d);
                    mpz_class twoq = 2 * q;
                    mpz_class t = twoq / dz;
                    mpz_class y0;
                    mpz_root(y0.get_mpz_t(), t.get_mpz_t(), 3);
                    for (mpz_class y = y0 - 2; y <= y0 + 2; ++y) {
                        if (y <= 0) continue;
                        for (int n = -1; n <= 1; n += 2) {
                            if (dz * y * y * y + 3 * n * y != twoq) continue;
                            mpz_class x2 = dz * y * y + 4 * n;
                            if (x2 <= 0 || !mpz_perfect_square_p(x2.get_mpz_t())) continue;
                            mpz_class x;
                            mpz_sqrt(x.get_mpz_t(), x2.get_mpz_t());
                            mpz_class pc = x * (x * x + 3 * dz * y * y);
                            mpz_class qc = y * (3 * x * x + dz * y * y);
                            if (pc == 8 * p && qc == 8 * q) {
                                u.x = x;
                                u.y = y;
                                u.norm = n;
                            }
                        }
                    }
                }
            }
            return u;
        }
        P = Pn;
        Q = Qn;
        pm2 = pm1;
        pm1 = pk;
        qm2 = qm1;
        qm1 = qk;
    }
}

}  // namespace

FundamentalUnit fundamental_unit(i64 d) {
    if (d <= 1 || !is_fundamental(d)) throw std::invalid_argument("fundamental_unit: d must be fundamental > 1");
    return fundamental_unit_impl(d);
}

namespace {
ClassRecord compute_record_impl(i64 d, const SpfSieve* sieve) {
    if (d == 1 || !is_fundamental(d)) throw std::invalid_argument("class record: d must be fundamental != 1");
    ClassRecord rec;
    rec.d = d;
    if (d < 0) {
        rec.h = h_negative(d);
        rec.w = (d == -3) ? 6 : (d == -4) ? 4 : 2;
        rec.L1 = (Ball::pi() * Ball::exact(2L)).mul(rec.h).div(rec.w) / sqrt(Ball::exact((long)-d));
    } else {
        FundamentalUnit u = fundamental_unit(d);
        rec.hplus = hplus_positive(d, sieve);
        rec.h = (u.norm == -1) ? rec.hplus : rec.hplus / 2;
        if (u.norm == 1 && rec.hplus % 2 != 0) throw std::logic_error("narrow class number parity violated");
        long base = precision::default_bits();
        long need = std::max<long>(base, (long)mpz_sizeinbase(u.x.get_mpz_t(), 2) + 64);
        Ball reg;
        {
            precision::Scoped guard(need);
            Ball val = (ball_from_mpz(u.x) + ball_from_mpz(u.y) * sqrt(Ball::exact((long)d))).mul_2exp(-1);
            reg = log(val);
        }
        rec.reg = reg.round_to(base);
        rec.L1 = rec.reg.mul(2 * rec.h) / sqrt(Ball::exact((long)d));
    }
    return rec;
}
}  // namespace

ClassRecord compute_class_record(i64 d) { return compute_record_impl(d, nullptr); }

const ClassRecord& ClassDataStore::get(i64 d) const {
    auto it = records_.find(d);
    if (it == records_.end())
        throw MissingDataError("class data missing for fundamental discriminant d = " + std::to_string(d));
    return it->second;
}

bool ClassDataStore::has(i64 d) const { return records_.count(d) != 0; }

void ClassDataStore::put(ClassRecord rec) { records_[rec.d] = std::move(rec); }

void ClassDataStore::ensure_range(i64 pos_max, i64 neg_max, bool verbose) {
    long done = 0;
    records_.reserve(records_.size() + pos_max / 2 + neg_max / 2);
    std::unique_ptr<SpfSieve> sieve;
    if (pos_max > 50000) sieve = std::make_unique<SpfSieve>(pos_max / 4 + 2);
    // squarefree-kernel sieve doubles as the fundamental-discriminant filter
    std::vector<char> nonsqfree;
    i64 lim = std::max(pos_max, neg_max);
    if (lim > 0) {
        nonsqfree.assign(lim + 1, 0);
        for (i64 p = 2; p * p <= lim; ++p)
            for (i64 j = p * p; j <= lim; j += p * p) nonsqfree[j] = 1;
    }
    auto fundamental_fast = [&](i64 d) {
        i64 a = d < 0 ? -d : d;
        i64 m = ((d % 4) + 4) % 4;
        if (m == 1) return !nonsqfree[a];
        if (m != 0) return false;
        i64 q = d / 4, aq = a / 4;
        i64 qm = ((q % 4) + 4) % 4;
        return (qm == 2 || qm == 3) && !nonsqfree[aq];
    };
    for (i64 d = 5; d <= pos_max; ++d) {
        if ((d % 4 != 0 && d % 4 != 1) || records_.count(d) || !fundamental_fast(d)) continue;
        records_.emplace(d, compute_record_impl(d, sieve.get()));
        if (verbose && ++done % 20000 == 0) std::fprintf(stderr, "classdata: up to d = %lld\n", d);
    }
    for (i64 d = -3; d >= -neg_max; --d) {
        i64 m = ((d % 4) + 4) % 4;
        if ((m != 0 && m != 1) || records_.count(d) || !fundamental_fast(d)) continue;
        records_.emplace(d, compute_record_impl(d, nullptr));
        if (verbose && ++done % 20000 == 0) std::fprintf(stderr, "classdata: down to d = %lld\n", d);
    }
}

void ClassDataStore::save_csv(const std::string& path) const {
    std::vector<i64> keys;
    keys.reserve(records_.size());
    for (auto& kv : records_) keys.push_back(kv.first);
    std::sort(keys.begin(), keys.end());
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "d,h,reg_mid,reg_rad,w,L1_mid,L1_rad\n";
    for (i64 d : keys) {
        const ClassRecord& r = records_.at(d);
        out << r.d << ',' << r.h << ',';
        if (r.d > 0)
            out << r.reg.mid_string() << ',' << r.reg.rad_string() << ',';
        else
            out << ",,";
        if (r.d < 0)
            out << r.w << ',';
        else
            out << ',';
        out << r.L1.mid_string() << ',' << r.L1.rad_string() << '\n';
    }
}

void ClassDataStore::load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MissingDataError("cannot open class data table " + path);
    std::string line;
    std::getline(in, line);
    if (line != "d,h,reg_mid,reg_rad,w,L1_mid,L1_rad")
        throw std::runtime_error("class data table has unexpected header: " + line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string f[7];
        for (int i = 0; i < 7; ++i) std::getline(ss, f[i], ',');
        ClassRecord rec;
        rec.d = std::stol(f[0]);
        rec.h = std::stol(f[1]);
        if (rec.d > 0) rec.reg = Ball::from_strings(f[2], f[3]);
        if (rec.d < 0) rec.w = std::stoi(f[4]);
        rec.L1 = Ball::from_strings(f[5], f[6]);
        records_[rec.d] = std::move(rec);
    }
}

}  // namespace maass
