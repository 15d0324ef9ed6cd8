#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sqflab/arith.hpp"
#include "sqflab/intpoly.hpp"
#include "sqflab/rng.hpp"
#include "sqflab/roots.hpp"

#include <algorithm>

using namespace sqflab;

namespace {

// exhaustive root search mod m (the oracle)
std::vector<uint64_t> brute_roots(const IntPoly& f, uint64_t m) {
    std::vector<uint64_t> c(static_cast<size_t>(f.degree()) + 1);
    for (int k = 0; k <= f.degree(); ++k)
        c[static_cast<size_t>(k)] = mpz_fdiv_ui(f.coeff_for_power(k).get_mpz_t(), m);
    std::vector<uint64_t> out;
    for (uint64_t r = 0; r < m; ++r) {
        uint64_t acc = 0;
        for (size_t k = c.size(); k-- > 0;)
            acc = static_cast<uint64_t>(
                (static_cast<unsigned __int128>(acc) * r + c[k]) % m);
        if (acc == 0) out.push_back(r);
    }
    return out;
}

IntPoly random_primitive(SeededRng& rng, int max_deg, long bound) {
    for (;;) {
        int d = 1 + static_cast<int>(rng.below(static_cast<uint64_t>(max_deg)));
        std::vector<mpz_class> c;
        for (int i = 0; i <= d; ++i) c.emplace_back(rng.in_range(-bound, bound));
        if (c.front() == 0) continue;
        IntPoly f(c);
        if (f.content() == 1) return f;
    }
}

} // namespace

TEST_CASE("roots mod p examples") {
    IntPoly t2p1{1, 0, 1};
    CHECK(roots_mod_p(t2p1, 5).roots == std::vector<uint64_t>{2, 3});
    CHECK(roots_mod_p(IntPoly{1, 0}, 7).roots == std::vector<uint64_t>{0});
    CHECK(roots_mod_p(t2p1, 3).roots.empty());
    CHECK_THROWS_AS(roots_mod_p(t2p1, 6), std::domain_error);
}

TEST_CASE("roots mod p^2 examples") {
    IntPoly t2p1{1, 0, 1};
    CHECK(roots_mod_p2(t2p1, 5).roots == std::vector<uint64_t>{7, 18});
    CHECK(roots_mod_p2(t2p1, 2).roots.empty());
    CHECK(roots_mod_p2(IntPoly{1, 0, -1}, 2).roots == std::vector<uint64_t>{1, 3}); // singular
}

TEST_CASE("degenerate reduction is flagged") {
    IntPoly f{3, 6}; // 3t + 6, content 3
    ResidueSet rs = roots_mod_p(f, 3);
    CHECK(rs.all_residues);
    CHECK(rs.count() == 3);
    // one factor of 3 divides out: 3 | 3n+6 always, 9 | 3n+6 iff n == 1 mod 3
    ResidueSet rs2 = roots_mod_p2(f, 3);
    CHECK_FALSE(rs2.all_residues);
    CHECK(rs2.roots == std::vector<uint64_t>{1, 4, 7});
}

TEST_CASE("rho multiplicativity examples") {
    IntPoly t2p1{1, 0, 1};
    CHECK(rho(IntPoly{1, 0}, 1) == 1);
    CHECK(rho(IntPoly{1, 0}, 35) == 1);
    CHECK(rho(t2p1, 3) == 0);
    CHECK(rho(t2p1, 5) == 2);
    CHECK(rho(t2p1, 65) == 4);
    CHECK_THROWS_AS(rho(t2p1, 12), std::domain_error);      // not square-free
    CHECK_THROWS_AS(rho(IntPoly{2, 4}, 3), std::domain_error); // not primitive
}

TEST_CASE("roots mod d^2 by CRT") {
    IntPoly t2p1{1, 0, 1};
    CHECK(roots_mod_dsq(t2p1, 5).roots == std::vector<uint64_t>{7, 18});
    CHECK(roots_mod_dsq(IntPoly{1, 0}, 6).roots == std::vector<uint64_t>{0});
    CHECK(roots_mod_dsq(t2p1, 10).roots.empty()); // empty factor mod 4
    ResidueSet rs = roots_mod_dsq(t2p1, 65);
    CHECK(rs.modulus == 65 * 65);
    CHECK(rs.roots.size() == 4);
    for (uint64_t r : rs.roots) CHECK((r * r + 1) % (65 * 65) == 0);
}

TEST_CASE("lifting matches exhaustive search") {
    SeededRng rng(0xabcdef);
    const auto& primes = small_primes();
    for (int i = 0; i < 1000; ++i) {
        IntPoly f = random_primitive(rng, 4, 10);
        for (uint32_t p : primes) {
            if (p > 50) break;
            REQUIRE(roots_mod_p2(f, p).roots == brute_roots(f, uint64_t{p} * p));
        }
    }
}

TEST_CASE("nonsingular primes lift one to one") {
    SeededRng rng(0xfeed);
    for (int i = 0; i < 200; ++i) {
        IntPoly f = random_primitive(rng, 4, 10);
        mpz_class disc = discriminant(f);
        if (disc == 0) continue;
        for (uint32_t p : small_primes()) {
            if (p > 50) break;
            bool singular = mpz_divisible_ui_p(disc.get_mpz_t(), p) ||
                            mpz_divisible_ui_p(f.leading().get_mpz_t(), p);
            if (singular) continue;
            CHECK(roots_mod_p2(f, p).roots.size() == roots_mod_p(f, p).roots.size());
        }
    }
}

TEST_CASE("CRT cardinality is multiplicative") {
    SeededRng rng(0xc0de);
    for (int i = 0; i < 40; ++i) {
        IntPoly f = random_primitive(rng, 3, 8);
        for (uint64_t d : {6, 10, 15, 21, 30, 35, 42, 66, 70, 77, 78, 91}) {
            uint64_t expect = 1;
            uint64_t m = d;
            for (uint64_t p = 2; p <= m; ++p)
                if (m % p == 0) {
                    expect *= roots_mod_p2(f, p).count();
                    m /= p;
                }
            CHECK(roots_mod_dsq(f, d).count() == expect);
            CHECK(rho(f, d) == expect);
        }
    }
}

TEST_CASE("root count bounds") {
    SeededRng rng(0x5151);
    for (int i = 0; i < 150; ++i) {
        IntPoly f = random_primitive(rng, 4, 10);
        mpz_class disc = discriminant(f);
        if (disc == 0) continue;
        auto deg = static_cast<uint64_t>(f.degree());
        for (uint32_t p : small_primes()) {
            if (p > 50) break;
            uint64_t r = roots_mod_p2(f, p).count();
            CHECK(r <= deg * p);
            if (!mpz_divisible_ui_p(disc.get_mpz_t(), p) &&
                !mpz_divisible_ui_p(f.leading().get_mpz_t(), p))
                CHECK(r <= deg);
        }
    }
}

TEST_CASE("large prime paths agree with scanning") {
    SeededRng rng(0x1009);
    for (int i = 0; i < 30; ++i) {
        IntPoly f = random_primitive(rng, 4, 50);
        for (uint64_t p : {1009, 2003, 4001}) {
            auto split_path = roots_mod_p(f, p, 10).roots;   // forces the gcd/split route
            auto scan_path = roots_mod_p(f, p, 10000).roots; // forces the scan route
            CHECK(split_path == scan_path);
            CHECK(count_roots_mod_p(f, p) == scan_path.size());
        }
    }
}

TEST_CASE("large singular primes avoid enumeration in the count path") {
    // f = t^2 + p at p: the only root mod p is 0, f(0) = p, f'(0) = 0, and
    // p^2 does not divide p, so nothing lifts.
    uint64_t p = 100003;
    IntPoly f{1, 0, static_cast<long>(p)};
    CHECK(rho_p2(f, p) == 0);
    // small analogue cross-checked exhaustively
    IntPoly g{1, 0, 101};
    CHECK(roots_mod_p2(g, 101).roots == brute_roots(g, 101 * 101));

    // f = (t-1)^2 + p^2: every lift of the singular root survives
    mpz_class p2 = mpz_class(static_cast<unsigned long>(p)) * static_cast<unsigned long>(p);
    IntPoly h(std::vector<mpz_class>{1, -2, 1 + p2});
    CHECK(rho_p2(h, p) == p);
    IntPoly h_small{1, -2, 1 + 101 * 101};
    CHECK(roots_mod_p2(h_small, 101).roots == brute_roots(h_small, 101 * 101));
}

TEST_CASE("rho table caches entries with singular flags") {
    RhoTable table(IntPoly{1, 0, -1}); // disc 4
    const auto& e2 = table.get(2);
    CHECK(e2.singular);
    CHECK(e2.roots_p2 == std::vector<uint64_t>{1, 3});
    const auto& e5 = table.get(5);
    CHECK_FALSE(e5.singular);
    CHECK(e5.roots_p2.size() == e5.roots_p.size());
    CHECK_THROWS_AS(RhoTable(IntPoly{2, 4}), std::domain_error);
}
