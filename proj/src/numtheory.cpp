#include "maass/numtheory.hpp"

#include <algorithm>
#include <cmath>

namespace maass {

int kronecker(i64 a, i64 n) {
    // Cohen, Alg. 1.4.10
    static const int tab2[8] = {0, 1, 0, -1, 0, -1, 0, 1};  // (a/2) by a mod 8
    if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
    if ((a & 1) == 0 && (n & 1) == 0) return 0;
    int v = 0;
    while ((n & 1) == 0) {
        n >>= 1;
        ++v;
    }
    int k = (v & 1) ? tab2[((a % 8) + 8) % 8] : 1;
    if (n < 0) {
        n = -n;
        if (a < 0) k = -k;
    }
    // n odd positive from here on
    while (a != 0) {
        v = 0;
        while ((a & 1) == 0) {
            a >>= 1;
            ++v;
        }
        if (v & 1) k *= tab2[((n % 8) + 8) % 8];
        i64 aa = a < 0 ? -a : a;
        if ((aa & 2) && (n & 2)) k = -k;  // reciprocity
        if (a < 0 && (n & 2)) k = -k;     // (-1/n)
        a = n % aa;
        n = aa;
    }
    return n > 1 ? 0 : k;
}

i64 isqrt(i64 n) {
    if (n < 0) return -1;
    i64 r = (i64)std::sqrt((double)n);
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

bool is_square(i64 n) {
    if (n < 0) return false;
    i64 r = isqrt(n);
    return r * r == n;
}

bool is_prime(i64 n) {
    if (n < 2) return false;
    for (i64 p = 2; p * p <= n; ++p)
        if (n % p == 0) return n == p;
    return true;
}

bool is_fundamental(i64 d) {
    if (d == 1) return true;
    if (d == 0) return false;
    i64 m = ((d % 4) + 4) % 4;
    auto squarefree = [](i64 v) {
        v = v < 0 ? -v : v;
        for (i64 p = 2; p * p <= v; ++p)
            if (v % (p * p) == 0) return false;
        return true;
    };
    if (m == 1) return squarefree(d);
    if (m == 0) {
        i64 q = d / 4;
        i64 qm = ((q % 4) + 4) % 4;
        return (qm == 2 || qm == 3) && squarefree(q);
    }
    return false;
}

Discriminant decompose_discriminant(i64 D) {
    i64 m = ((D % 4) + 4) % 4;
    if (m != 0 && m != 1) throw std::invalid_argument("discriminant must be 0 or 1 mod 4");
    if (D >= 0 && is_square(D)) throw std::invalid_argument("discriminant must not be a square");
    // squarefree kernel: D = s * f^2
    i64 s = D < 0 ? -1 : 1;
    i64 v = D < 0 ? -D : D;
    i64 f = 1;
    for (i64 p = 2; p * p <= v; ++p) {
        while (v % (p * p) == 0) {
            v /= p * p;
            f *= p;
        }
    }
    s *= v;
    i64 sm = ((s % 4) + 4) % 4;
    Discriminant out;
    out.D = D;
    if (sm == 1) {
        out.d = s;
        out.l = f;
    } else {
        out.d = 4 * s;
        if (f % 2 != 0) throw std::logic_error("discriminant decomposition: parity");
        out.l = f / 2;
    }
    if (out.d * out.l * out.l != D) throw std::logic_error("discriminant decomposition failed");
    return out;
}

LevelContext::LevelContext(long level) : N(level) {
    if (level < 1) throw std::invalid_argument("level must be positive");
    long v = level;
    for (long p = 2; p * p <= v; ++p) {
        if (v % p == 0) {
            primes.push_back(p);
            v /= p;
            if (v % p == 0) throw std::invalid_argument("level must be squarefree");
        }
    }
    if (v > 1) primes.push_back(v);
    std::sort(primes.begin(), primes.end());
    mu = (primes.size() % 2 == 0) ? 1 : -1;
}

i64 sigma1(i64 n) {
    n = n < 0 ? -n : n;
    i64 s = 0;
    for (i64 a = 1; a * a <= n; ++a) {
        if (n % a == 0) {
            s += a;
            if (a != n / a) s += n / a;
        }
    }
    return s;
}

i64 n_inf_part(i64 m, const LevelContext& ctx) {
    m = m < 0 ? -m : m;
    i64 out = 1;
    for (long p : ctx.primes)
        while (m % p == 0) {
            m /= p;
            out *= p;
        }
    return out;
}

std::vector<std::pair<i64, i64>> divisor_pairs(i64 n) {
    std::vector<std::pair<i64, i64>> out;
    i64 an = n < 0 ? -n : n;
    for (i64 a = 1; a * a <= an; ++a) {
        if (an % a == 0) {
            out.emplace_back(a, n / a);
            if (a != an / a) out.emplace_back(an / a, n / (an / a));
        }
    }
    return out;
}

Ball c_coefficient(i64 D, const LevelContext& ctx, const ClassDataStore& store) {
    Discriminant dec = decompose_discriminant(D);
    i64 factor = 1;
    for (long p : ctx.primes) factor *= kronecker(dec.d, p) - 1;
    if (factor == 0) return Ball();
    // local factor at p | l, p coprime to N: 1 + (p - psi(p)) (p^k - 1)/(p - 1).
    // Primes shared with the level carry no local factor; the verbatim product
    // over all p | l breaks positivity of the spectral quadratic form and
    // disagrees with direct eigenvalue computations.
    i64 l = dec.l;
    for (i64 p = 2; p <= l; ++p) {
        if (l % p) continue;
        i64 pk = 1;
        while (l % p == 0) {
            l /= p;
            pk *= p;
        }
        if (ctx.N % p != 0) factor *= 1 + (p - kronecker(dec.d, p)) * ((pk - 1) / (p - 1));
    }
    const ClassRecord& rec = store.get(dec.d);
    return rec.L1.mul(factor).div(dec.l);
}

}  // namespace maass
