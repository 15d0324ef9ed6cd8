#pragma once

#include "sqflab/arith.hpp"
#include "sqflab/intpoly.hpp"

#include <cstdint>

namespace sqflab {

// Inclusive arithmetic-progression window: n in [lo, hi], n == a (mod q).
struct APWindow {
    uint64_t lo = 1;
    uint64_t hi = 1;
    uint64_t q = 1;
    uint64_t a = 0;

    APWindow() = default;
    APWindow(uint64_t lo_, uint64_t hi_, uint64_t q_, uint64_t a_);
    uint64_t length() const { return hi - lo + 1; }
};

// D == ceil(x^(9/10)), the default truncation policy.
uint64_t default_D(uint64_t x);

// Exact count of 1 <= n <= x with f(n) square-free. Uses the truncated-sieve
// identity (sum of k_D over the values, D past sqrt(max |f|)) whenever f is
// primitive and the required D is affordable; falls back to factoring each
// value otherwise.
uint64_t count_squarefree_values(const IntPoly& f, uint64_t x);

// k_D(n) = sum over d <= D with d^2 | n of mu(d). k_D(0) is the full mu sum
// up to D; negative n use |n|.
int64_t k_D(const mpz_class& n, uint64_t D);

// k_D(n) for every 1 <= n <= N in one sieve pass.
std::vector<int32_t> kD_table(uint64_t N, uint64_t D);

// Exact sum_{1 <= n <= x} k_D(f(n)) by exchanging summation: one residue
// class count per root of f mod d^2, never an evaluation of f. Requires
// primitive f.
mpz_class sum_kD_values(const IntPoly& f, uint64_t x, uint64_t D);

// Exact #{n in window : mu^2(n) = 1}.
uint64_t count_squarefree_ap(const APWindow& w);
// Same, against a prebuilt table covering [w.lo, w.hi].
uint64_t count_squarefree_ap(const APWindow& w, const SieveTable& table);

struct KDApSum {
    mpz_class sum;
    // Records whether every prime of the square-full part of gcd(a,q) is
    // below D^2 (hypothesis of the short-AP estimate); informational only.
    bool h2_primes_below_D2 = true;
};

// Exact sum of k_D(n) over the window via CRT residue-class counts.
KDApSum sum_kD_ap(const APWindow& w, uint64_t D);

// (q / |window|) * | count_squarefree_ap - sum_kD_ap |.
double residual_ap(const APWindow& w, uint64_t D);
double residual_ap(const APWindow& w, uint64_t D, const SieveTable& table);

} // namespace sqflab
