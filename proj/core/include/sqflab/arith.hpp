#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <memory>
#include <span>
#include <utility>
#include <vector>

namespace sqflab {

// A positive integer together with its complete prime factorization.
// Invariant: value == prod p^e and every listed p passes the deterministic
// primality check.
struct FactoredInt {
    mpz_class value;
    std::vector<std::pair<mpz_class, int>> factors; // sorted by prime

    bool is_squarefree() const;
    bool is_squarefull() const; // every exponent >= 2 (true for 1)
    mpz_class radical() const;
    std::vector<mpz_class> divisors() const; // sorted ascending
};

// Deterministic primality test: Miller-Rabin with the fixed witness set
// {2,3,...,41} (proven complete below 3.317e24); larger inputs fall back to
// all prime witnesses up to 2*ceil(ln n)^2.
bool is_prime(const mpz_class& n);
bool is_prime_u64(uint64_t n);

// Complete factorization of n >= 1: trial division by primes up to 1e6, then
// deterministic Brent-cycle splitting with the fixed polynomial schedule
// x^2 + c for c = 1, 2, 3, ... Throws std::domain_error for n < 1.
FactoredInt factor(const mpz_class& n);

// Shared table of all primes below 1e6 + 3, built once on first use. Callers
// that need primes up to some smaller bound iterate and stop early.
const std::vector<uint32_t>& small_primes();

// Table of mu and/or mu^2 over an interval [lo, hi].
//   - mobius_sieve fills both mu and the square-free bits (lo == 1);
//   - squarefree_sieve_interval fills only the bits.
// Invariants: sf bit is set iff no prime square divides n; when mu is present
// mu[n] in {-1,0,1} and mu(n)^2 == sf bit.
class SieveTable {
public:
    SieveTable() = default;
    // Assembles a table from raw parts (used by the sieves and by tests that
    // need to inject corrupted tables).
    SieveTable(uint64_t lo, uint64_t hi, std::vector<int8_t> mu, std::vector<uint64_t> sf_bits);
    // Zero-copy variant: `words` packed bits, bit i = mu^2(lo + i).
    SieveTable(uint64_t lo, uint64_t hi, std::vector<int8_t> mu,
               std::shared_ptr<const uint64_t[]> sf_words);

    uint64_t lo() const { return lo_; }
    uint64_t hi() const { return hi_; }
    bool has_mobius() const { return !mu_.empty(); }

    bool squarefree(uint64_t n) const; // n in [lo, hi]
    int mobius(uint64_t n) const;      // requires has_mobius()

    uint64_t squarefree_count() const;             // over the whole interval
    int64_t mertens(uint64_t n) const;             // sum of mu(1..n), requires lo == 1
    std::span<const uint64_t> bits() const { return {sf_.get(), words_}; }

    // Checks the cross-table invariants; returns the name of the first failed
    // one, or empty if consistent.
    std::string validate() const;

private:
    uint64_t lo_ = 1, hi_ = 0;
    std::vector<int8_t> mu_;
    std::shared_ptr<const uint64_t[]> sf_;
    size_t words_ = 0;
};

// mu(n) for 1 <= n <= N by a linear sieve.
SieveTable mobius_sieve(uint64_t N);

// mu^2(n) for lo <= n <= hi by marking multiples of p^2, p <= sqrt(hi),
// segment by segment. Memory O(hi-lo + sqrt(hi)). Segments are processed
// concurrently (threads == 0 means the global budget) with bit-identical
// results at any thread count.
SieveTable squarefree_sieve_interval(uint64_t lo, uint64_t hi,
                                     uint64_t segment = uint64_t{1} << 20,
                                     int threads = 0);

// Smallest-prime-factor table for 2..N (index 0,1 unused).
std::vector<uint32_t> spf_sieve(uint32_t N);

// mu^2(|n|); mu^2(0) == 0 by convention.
int mu_squared(const mpz_class& n);

// h = h1*h2 with h1 square-free, h2 square-full, gcd(h1,h2) = 1 (unique).
std::pair<mpz_class, mpz_class> squarefull_decompose(const mpz_class& h);

// Product of the distinct primes dividing n; rad(1) = 1.
mpz_class radical(const mpz_class& n);

// Exact value of sum_{d | q, d >= z} 1/d.
mpq_class divisor_tail_sum(const mpz_class& q, double z);

// Exact #{n in Z, |n| <= x1 : gcd(a*n + b, c) > x2}, computed from the
// divisors of c above x2 and residue-class counts (never by scanning n).
// Throws std::domain_error when a == 0 or c == 0.
mpz_class large_gcd_count(const mpz_class& a, const mpz_class& b, const mpz_class& c,
                          double x1, double x2);

} // namespace sqflab
