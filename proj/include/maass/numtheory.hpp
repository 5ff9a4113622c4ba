#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <memory>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "maass/ball.hpp"

namespace maass {

using i64 = long;  // 64-bit here; matches gmp and Ball::exact overloads

// Full Kronecker symbol (d/m).
int kronecker(i64 d, i64 m);

i64 isqrt(i64 n);
bool is_square(i64 n);
bool is_prime(i64 n);

// D = d * l^2 with d fundamental, l > 0.
struct Discriminant {
    i64 D;
    i64 d;
    i64 l;
};
// Requires D = 0 or 1 mod 4, D not a perfect square (throws otherwise).
Discriminant decompose_discriminant(i64 D);
bool is_fundamental(i64 d);

// Squarefree level with its factorization.
struct LevelContext {
    long N;
    std::vector<long> primes;
    int mu;  // (-1)^(number of primes)
    explicit LevelContext(long level);
};

i64 sigma1(i64 n);
// largest divisor of m composed of primes dividing N, i.e. (N^inf, m)
i64 n_inf_part(i64 m, const LevelContext& ctx);
// all (a, d) with a*d = n, a > 0 (d carries the sign of n)
std::vector<std::pair<i64, i64>> divisor_pairs(i64 n);

// One fundamental discriminant's class data.
struct ClassRecord {
    i64 d = 0;
    long h = 0;     // class number (wide)
    long hplus = 0; // narrow class number (number of reduced cycles), d > 0
    int w = 0;      // unit count for d < 0: 2, 4 (d = -4) or 6 (d = -3)
    Ball reg;       // log of the fundamental unit, d > 0
    Ball L1;        // L(1, psi_d) via the class number formula
};

// Fundamental unit (x + y sqrt(d))/2, x^2 - d y^2 = 4*norm.
struct FundamentalUnit {
    mpz_class x, y;
    int norm;  // +1 or -1
};
FundamentalUnit fundamental_unit(i64 d);  // d > 0 fundamental

// Direct per-discriminant computation (reduced-form enumeration for h,
// continued fractions for the regulator).
ClassRecord compute_class_record(i64 d);

// Cache of class records with CSV persistence. Fill it (ensure_range /
// load_csv) before concurrent reads; get() never computes.
class ClassDataStore {
  public:
    ClassDataStore() = default;

    const ClassRecord& get(i64 d) const;  // throws MissingDataError naming d
    bool has(i64 d) const;
    void put(ClassRecord rec);
    // compute all fundamental d with 0 < d <= pos_max or 0 > d >= -neg_max
    void ensure_range(i64 pos_max, i64 neg_max, bool verbose = false);
    void load_csv(const std::string& path);
    void save_csv(const std::string& path) const;
    size_t size() const { return records_.size(); }

  private:
    std::unordered_map<i64, ClassRecord> records_;
};

// c_N(D) = L(1,psi_d)/l * prod_{p|N}(psi_d(p)-1)
//        * prod_{p|l}[1 + (p - psi_d(p)) ((l,p^inf)-1)/(p-1)]
Ball c_coefficient(i64 D, const LevelContext& ctx, const ClassDataStore& store);

}  // namespace maass
