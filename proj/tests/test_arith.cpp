#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sqflab/arith.hpp"
#include "sqflab/rng.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

using namespace sqflab;

namespace {

// trial-division mu^2, the oracle for the sieves
int mu2_trial(uint64_t n) {
    for (uint64_t p = 2; p * p <= n; ++p)
        if (n % (p * p) == 0) return 0;
    return 1;
}

} // namespace

TEST_CASE("factorization examples") {
    CHECK(factor(1).factors.empty());
    FactoredInt f = factor(72);
    REQUIRE(f.factors.size() == 2);
    CHECK(f.factors[0] == std::pair<mpz_class, int>{2, 3});
    CHECK(f.factors[1] == std::pair<mpz_class, int>{3, 2});
    CHECK_THROWS_AS(factor(0), std::domain_error);
}

TEST_CASE("factorization reconstructs large values with prime parts") {
    // product-reconstruction oracle
    for (const char* s : {"1000000000000000009", "340282366920938463463374607431768211456",
                          "87178291199", "614889782588491410"}) {
        mpz_class n(s);
        FactoredInt f = factor(n);
        mpz_class prod = 1;
        for (const auto& [p, e] : f.factors) {
            CHECK(is_prime(p));
            for (int i = 0; i < e; ++i) prod *= p;
        }
        CHECK(prod == n);
    }
    // determinism
    FactoredInt a = factor(mpz_class("1000000016000000063"));
    FactoredInt b = factor(mpz_class("1000000016000000063"));
    CHECK(a.factors == b.factors);
}

TEST_CASE("deterministic primality") {
    CHECK(is_prime_u64(2));
    CHECK(is_prime_u64(1000003));
    CHECK_FALSE(is_prime_u64(1));
    CHECK_FALSE(is_prime_u64(3215031751ULL)); // strong pseudoprime to 2,3,5,7
    CHECK(is_prime(mpz_class("1000000000000000009")));
    CHECK_FALSE(is_prime(mpz_class("340282366920938463463374607431768211457")));
}

TEST_CASE("mobius sieve standard values") {
    SieveTable mt = mobius_sieve(100);
    const int expect[10] = {1, -1, -1, 0, -1, 1, -1, 0, 0, 1};
    for (int i = 0; i < 10; ++i) CHECK(mt.mobius(static_cast<uint64_t>(i + 1)) == expect[i]);
    CHECK(mt.mobius(30) == -1);
    CHECK(mt.mertens(10) == -1);
    CHECK(mt.validate().empty());
}

TEST_CASE("mobius sieve against trial division") {
    SieveTable mt = mobius_sieve(10000);
    uint64_t sum_sieve = mt.squarefree_count();
    uint64_t sum_trial = 0;
    for (uint64_t n = 1; n <= 10000; ++n) {
        sum_trial += static_cast<uint64_t>(mu2_trial(n));
        CHECK(mt.squarefree(n) == (mu2_trial(n) == 1));
        CHECK((mt.mobius(n) != 0) == mt.squarefree(n));
    }
    CHECK(sum_sieve == sum_trial);
}

TEST_CASE("interval sieve examples") {
    SieveTable t = squarefree_sieve_interval(1, 10);
    CHECK(t.squarefree_count() == 7);
    for (uint64_t n : {1, 2, 3, 5, 6, 7, 10}) CHECK(t.squarefree(n));
    for (uint64_t n : {4, 8, 9}) CHECK_FALSE(t.squarefree(n));
    CHECK(squarefree_sieve_interval(48, 50).squarefree_count() == 0);
}

TEST_CASE("interval sieve against the factorization oracle") {
    SieveTable t = squarefree_sieve_interval(1000000, 1001000);
    uint64_t oracle = 0;
    for (uint64_t n = 1000000; n <= 1001000; ++n)
        oracle += static_cast<uint64_t>(mu_squared(mpz_class(static_cast<unsigned long>(n))));
    CHECK(t.squarefree_count() == oracle);
}

TEST_CASE("interval sieve is segment- and thread-invariant") {
    SieveTable a = squarefree_sieve_interval(5000, 300000, uint64_t{1} << 20, 1);
    SieveTable b = squarefree_sieve_interval(5000, 300000, 4096, 4);
    REQUIRE(a.bits().size() == b.bits().size());
    CHECK(std::equal(a.bits().begin(), a.bits().end(), b.bits().begin()));
}

TEST_CASE("mu squared conventions") {
    CHECK(mu_squared(12) == 0);
    CHECK(mu_squared(-30) == 1);
    CHECK(mu_squared(0) == 0);
    CHECK(mu_squared(1) == 1);
}

TEST_CASE("squarefull decomposition examples and properties") {
    auto [a1, a2] = squarefull_decompose(12);
    CHECK(a1 == 3);
    CHECK(a2 == 4);
    auto [b1, b2] = squarefull_decompose(72);
    CHECK(b1 == 1);
    CHECK(b2 == 72);
    auto [c1, c2] = squarefull_decompose(30);
    CHECK(c1 == 30);
    CHECK(c2 == 1);

    for (uint64_t h = 1; h <= 100000; ++h) {
        auto [h1, h2] = squarefull_decompose(mpz_class(static_cast<unsigned long>(h)));
        CHECK(h1 * h2 == h);
        mpz_class g;
        mpz_gcd(g.get_mpz_t(), h1.get_mpz_t(), h2.get_mpz_t());
        if (g != 1 || mu_squared(h1) != 1 || !factor(h2).is_squarefull()) {
            CHECK(g == 1);
            CHECK(mu_squared(h1) == 1);
            CHECK(factor(h2).is_squarefull());
            break; // report the first failure only
        }
    }
}

TEST_CASE("radical") {
    CHECK(radical(72) == 6);
    CHECK(radical(1) == 1);
    CHECK(radical(343) == 7);
}

TEST_CASE("divisor tail sum") {
    CHECK(divisor_tail_sum(12, 3.0) == mpq_class(5, 6));
    CHECK(divisor_tail_sum(7, 8.0) == 0);
    CHECK(divisor_tail_sum(12, 1.0) == mpq_class(7, 3)); // sigma(q)/q
    // bound: sum <= tau(q)/z
    SeededRng rng(5);
    for (int i = 0; i < 300; ++i) {
        uint64_t q = 1 + rng.below(10000);
        double z = 1.0 + static_cast<double>(rng.below(1000)) / 7.0;
        mpq_class s = divisor_tail_sum(mpz_class(static_cast<unsigned long>(q)), z);
        auto tau = static_cast<double>(factor(q).divisors().size());
        CHECK(s.get_d() <= tau / z + 1e-12);
    }
}

TEST_CASE("large gcd count examples") {
    CHECK(large_gcd_count(1, 0, 12, 20, 3) == 15);
    CHECK(large_gcd_count(1, 0, 1, 100, 1) == 0);
    CHECK(large_gcd_count(2, 1, 4, 10, 2) == 0);
    CHECK_THROWS_AS(large_gcd_count(0, 1, 5, 10, 1), std::domain_error);
    CHECK_THROWS_AS(large_gcd_count(1, 1, 0, 10, 1), std::domain_error);
}

TEST_CASE("large gcd count against brute force") {
    SeededRng rng(17);
    for (int iter = 0; iter < 1500; ++iter) {
        int64_t a = 0, c = 0;
        while (a == 0) a = rng.in_range(-10, 10);
        while (c == 0) c = rng.in_range(-10, 10);
        int64_t b = rng.in_range(-10, 10);
        int64_t x1 = static_cast<int64_t>(1 + rng.below(20));
        double x2 = 1.0 + static_cast<double>(rng.below(5));
        int64_t brute = 0;
        for (int64_t n = -x1; n <= x1; ++n)
            if (std::gcd(a * n + b, c) > static_cast<int64_t>(x2)) ++brute;
        CHECK(large_gcd_count(mpz_class(static_cast<long>(a)), mpz_class(static_cast<long>(b)),
                              mpz_class(static_cast<long>(c)), static_cast<double>(x1),
                              x2) == brute);
    }
    // the mpz path must agree with the i64 path
    mpz_class giant("123456789012345678901234567890");
    CHECK(large_gcd_count(giant * 12 + 1, 0, 12, 20, 3) ==
          large_gcd_count((giant * 12 + 1) % 12, 0, 12, 20, 3));
}

TEST_CASE("square-free density window") {
    for (uint64_t N : {10000, 100000, 1000000}) {
        SieveTable t = squarefree_sieve_interval(1, N);
        double density = static_cast<double>(t.squarefree_count()) / static_cast<double>(N);
        double slack = 2.0 / std::sqrt(static_cast<double>(N));
        CHECK(density >= 6.0 / (std::numbers::pi * std::numbers::pi) - slack);
        CHECK(density <= 6.0 / (std::numbers::pi * std::numbers::pi) + slack);
    }
}

TEST_CASE("corrupted tables are caught by validation") {
    SieveTable good = mobius_sieve(500);
    REQUIRE(good.validate().empty());

    // flip one mobius value so mu^2 disagrees with the bit table
    std::vector<int8_t> mu(500);
    std::vector<uint64_t> bits((500 + 63) / 64, 0);
    for (uint64_t n = 1; n <= 500; ++n) {
        mu[n - 1] = static_cast<int8_t>(good.mobius(n));
        if (good.squarefree(n)) bits[(n - 1) >> 6] |= uint64_t{1} << ((n - 1) & 63);
    }
    mu[10 - 1] = 0; // mu(10) is actually 1
    SieveTable corrupted(1, 500, mu, bits);
    CHECK(corrupted.validate() == "mu-squared-vs-sf-bit");

    mu[10 - 1] = 5;
    SieveTable worse(1, 500, mu, bits);
    CHECK(worse.validate() == "mu-value-range");
}
