#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sqflab/family.hpp"
#include "sqflab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

using namespace sqflab;

namespace {
FamilySpec quadratic_spec(uint64_t height, uint64_t seed) {
    FamilySpec spec;
    spec.base = IntPoly{1, 0, 0}; // t^2
    spec.varied = {1, 0};
    spec.height = height;
    spec.seed = seed;
    return spec;
}
} // namespace

TEST_CASE("enumeration of the small quadratic family") {
    auto all = enumerate_family(quadratic_spec(1, 0));
    CHECK(all.size() == 9); // leading 1 forces coprimality
    std::set<std::string> seen;
    for (const auto& f : all) {
        CHECK(f.degree() == 2);
        CHECK(f.leading() == 1);
        CHECK(f.content() == 1);
        seen.insert(f.to_string());
    }
    CHECK(seen.size() == 9);
    CHECK(seen.count("1,-1,1") == 1);
    CHECK(seen.count("1,0,0") == 1);
}

TEST_CASE("sampling is deterministic and stays inside the box") {
    FamilySpec spec = quadratic_spec(5, 123);
    auto s1 = sample_family(spec, 64);
    auto s2 = sample_family(spec, 64);
    CHECK(s1 == s2);
    for (const auto& f : s1) {
        CHECK(f.degree() == 2);
        CHECK(f.content() == 1);
        CHECK(abs(f.coeff_for_power(1)) <= 5);
        CHECK(abs(f.coeff_for_power(0)) <= 5);
    }
    spec.seed = 124;
    CHECK(sample_family(spec, 64) != s1);
}

TEST_CASE("unsatisfiable constraints exhaust the rejection budget") {
    FamilySpec spec;
    spec.base = IntPoly{4, 0}; // 4t, constant stays 0
    spec.varied = {1};         // leading in {3,4,5}: gcd(a1, 0) = a1 > 1
    spec.height = 1;
    spec.seed = 9;
    CHECK_THROWS_AS(sample_family(spec, 1), std::runtime_error);
}

TEST_CASE("hypothesis warning flag") {
    FamilySpec warn;
    warn.base = IntPoly{1, 0}; // g(0) == 0
    warn.varied = {1};
    warn.height = 2;
    CHECK(family_hypothesis_warning(warn));
    warn.varied = {0};
    CHECK_FALSE(family_hypothesis_warning(warn));
    CHECK_FALSE(family_hypothesis_warning(quadratic_spec(1, 0)));
}

TEST_CASE("single-polynomial moments") {
    auto rep = moments({IntPoly{1, 0}}, 100, {1.0, 0.0});
    REQUIRE(rep.rows.size() == 1);
    CHECK(rep.rows[0].count == 61);
    CHECK(rep.rows[0].residual == doctest::Approx(0.00207).epsilon(0.1));
    CHECK(rep.exceptional[0] == std::pair<double, uint64_t>{1.0, 0});
    CHECK(rep.exceptional[1] == std::pair<double, uint64_t>{0.0, 1});
}

TEST_CASE("moment report invariants") {
    auto fs = sample_family(quadratic_spec(50, 31), 40);
    auto rep = moments(fs, 400, {0.5, 0.2, 0.1, 0.05, 0.0});
    CHECK(rep.rows.size() == 40);
    CHECK(rep.squarefree_members + rep.non_squarefree_members == 40);
    // Jensen
    CHECK(rep.second_moment >= rep.first_moment * rep.first_moment - 1e-15);
    // exceptional counts are monotone nonincreasing in eta
    for (size_t i = 1; i < rep.exceptional.size(); ++i) {
        CHECK(rep.exceptional[i - 1].first > rep.exceptional[i].first);
        CHECK(rep.exceptional[i - 1].second <= rep.exceptional[i].second);
    }
    // rows sorted by coefficient vector, moments recomputable from rows
    double sum1 = 0.0;
    uint64_t nsf = 0;
    for (size_t i = 0; i < rep.rows.size(); ++i) {
        if (i) {
            const auto &a = rep.rows[i - 1].poly.coeffs(), &b = rep.rows[i].poly.coeffs();
            CHECK(std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end()) == false);
        }
        if (rep.rows[i].squarefree) {
            sum1 += rep.rows[i].residual;
            ++nsf;
        }
    }
    CHECK(nsf == rep.squarefree_members);
    if (nsf) CHECK(rep.first_moment == doctest::Approx(sum1 / static_cast<double>(nsf)));
    // non-square-free members carry counts but no density data
    for (const auto& row : rep.rows)
        if (!row.squarefree) CHECK(row.cf_mid == 0.0);
}

TEST_CASE("moments require primitive members") {
    CHECK_THROWS_AS(moments({IntPoly{2, 4}}, 10, {0.1}), std::domain_error);
}

TEST_CASE("report serialization is schedule independent") {
    auto fs = sample_family(quadratic_spec(100, 7), 16);
    int saved = thread_budget();
    set_thread_budget(1);
    std::string a = report_csv(moments(fs, 200, {0.1}));
    set_thread_budget(3);
    std::string b = report_csv(moments(fs, 200, {0.1}));
    set_thread_budget(saved);
    CHECK(a == b);
    CHECK(a.substr(0, 7) == "record,");
    CHECK(a.find("schema,,,,,,,,,1\n") != std::string::npos);
}

TEST_CASE("typicality census preconditions") {
    CHECK_THROWS_AS(typical_set_diagnostic(IntPoly{1, 0, 1}, 10, 2.0, 2), std::domain_error);
    CHECK_THROWS_AS(typical_set_diagnostic(IntPoly{1, 0, 1}, 10, 0.0, 2), std::domain_error);
    CHECK_THROWS_AS(typical_set_diagnostic(IntPoly{1, 0}, 10, 1.0, 2), std::domain_error);
}

TEST_CASE("typicality census against a direct scan") {
    IntPoly g{1, 0, 1};
    const uint64_t x = 100;
    TypicalSetCounts got = typical_set_diagnostic(g, x, 1.0, 2);
    CHECK(got.inside + got.outside == x * x);
    CHECK(got.epsilon == 0.01);

    // independent scan with the same thresholds spelled out
    double t_size = 10.0;                  // x^(1 - 1/2)
    double t_gcd = 10.0;                   // x^(1/2)
    double t_val = std::pow(100.0, 1.01);  // x^(kappa + eps)
    uint64_t inside = 0;
    for (uint64_t n1 = 1; n1 <= x; ++n1)
        for (uint64_t n2 = 1; n2 <= x; ++n2) {
            uint64_t diff = n1 > n2 ? n1 - n2 : n2 - n1;
            if (!(n1 > t_size && n2 > t_size && diff > t_size)) continue;
            if (!(std::gcd(n1, n2) < t_gcd)) continue;
            mpz_class val;
            mpz_ui_pow_ui(val.get_mpz_t(), n1, 2);
            mpz_class gn = g.eval(mpz_class(static_cast<unsigned long>(n1)));
            mpz_class gc;
            mpz_gcd(gc.get_mpz_t(), val.get_mpz_t(), gn.get_mpz_t());
            if (!(mpz_cmp_d(gc.get_mpz_t(), t_val) < 0)) continue;
            ++inside;
        }
    CHECK(got.inside == inside);
}

TEST_CASE("diagonal pairs are never typical") {
    TypicalSetCounts c = typical_set_diagnostic(IntPoly{1, 0, 1}, 30, 1.0, 2);
    // n1 == n2 fails the separation condition, so at least x pairs lie outside
    CHECK(c.outside >= 30);
}

TEST_CASE("battery inside the identity region is exactly zero") {
    BatteryResult b = corollary_hypothesis_battery(200, 10, 20, 99, 1, 30000);
    CHECK(b.rows.size() == 20);
    CHECK(b.max_residual == 0.0);
    CHECK(b.mean_residual == 0.0);
    for (const auto& row : b.rows) {
        CHECK(row.q >= 1);
        CHECK(row.q <= 10);
        CHECK(row.u >= 1);
        CHECK(row.u <= row.q);
        CHECK(row.gcd_uq == std::gcd(row.u, row.q));
        CHECK(row.lo >= 1);
        CHECK(row.hi <= 30000);
    }
}

TEST_CASE("battery is seed-deterministic and degenerates to plain windows at qmax 1") {
    BatteryResult a = corollary_hypothesis_battery(50, 1, 10, 4242, 1, 200000);
    BatteryResult b = corollary_hypothesis_battery(50, 1, 10, 4242, 1, 200000);
    for (size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(a.rows[i].q == 1);
        CHECK(a.rows[i].lo == b.rows[i].lo);
        CHECK(a.rows[i].hi == b.rows[i].hi);
        CHECK(a.rows[i].residual == b.rows[i].residual);
    }
}
