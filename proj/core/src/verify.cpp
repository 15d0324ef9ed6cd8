#include "sqflab/verify.hpp"

#include "sqflab/arith.hpp"
#include "sqflab/counting.hpp"
#include "sqflab/density.hpp"
#include "sqflab/family.hpp"
#include "sqflab/intpoly.hpp"
#include "sqflab/parallel.hpp"
#include "sqflab/rng.hpp"
#include "sqflab/roots.hpp"

#include <algorithm>
#include <chrono>
#include <thread>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <numeric>
#include <sstream>

namespace sqflab {

namespace {

using Clock = std::chrono::steady_clock;

struct Harness {
    std::vector<CheckResult> results;

    void run(const std::string& name, double budget,
             const std::function<bool(std::string&)>& body) {
        CheckResult r;
        r.name = name;
        r.budget_seconds = budget;
        auto t0 = Clock::now();
        try {
            r.pass = body(r.detail);
        } catch (const std::exception& e) {
            r.pass = false;
            r.detail = std::string("exception: ") + e.what();
        }
        r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
        if (budget > 0 && r.seconds >= budget) {
            r.pass = false;
            r.detail += (r.detail.empty() ? "" : "; ") + std::string("over time budget");
        }
        results.push_back(std::move(r));
    }
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

constexpr double kSixOverPiSq = 6.0 / (std::numbers::pi * std::numbers::pi);

IntPoly random_primitive_poly(SeededRng& rng, int max_deg, long coeff_bound,
                              bool require_squarefree_poly) {
    for (;;) {
        int deg = 1 + static_cast<int>(rng.below(static_cast<uint64_t>(max_deg)));
        std::vector<mpz_class> c;
        c.reserve(static_cast<size_t>(deg) + 1);
        for (int i = 0; i <= deg; ++i) c.emplace_back(rng.in_range(-coeff_bound, coeff_bound));
        if (c.front() == 0) continue;
        IntPoly f(std::move(c));
        if (f.content() != 1) continue;
        if (require_squarefree_poly && discriminant(f) == 0) continue;
        return f;
    }
}

// ---------------------------------------------------------------------------
// acceptance criteria

bool check_density(std::string& detail) {
    SieveTable big = squarefree_sieve_interval(1, 1000000);
    double density = static_cast<double>(big.squarefree_count()) / 1e6;
    bool density_ok = std::fabs(density - kSixOverPiSq) < 0.001;

    bool agree = true;
    for (uint64_t n = 1; n <= 100000 && agree; ++n)
        agree = (mu_squared(mpz_class(static_cast<unsigned long>(n))) ==
                 (big.squarefree(n) ? 1 : 0));

    detail = "density=" + fmt(density) + " vs 6/pi^2=" + fmt(kSixOverPiSq) +
             (agree ? "; factorization agrees on [1,1e5]" : "; factorization DISAGREES");
    return density_ok && agree;
}

bool check_kd_identity(std::string& detail) {
    const uint64_t N = 1000000, D = 1000;
    std::vector<int32_t> table = kD_table(N, D);
    SieveTable sf = squarefree_sieve_interval(1, N);
    for (uint64_t n = 1; n <= N; ++n)
        if (table[n] != (sf.squarefree(n) ? 1 : 0)) {
            detail = "k_D(" + std::to_string(n) + ") != mu^2";
            return false;
        }
    double worst = 0.0;
    for (uint64_t q = 1; q <= 100; ++q) {
        uint64_t residues[4] = {0, 1 % q, (q - 1) % q, 3 % q};
        for (uint64_t a : residues) {
            APWindow w(1, N, q, a);
            worst = std::max(worst, residual_ap(w, D, sf));
        }
    }
    detail = "identity holds on [1,1e6]; max residual over q<=100 = " + fmt(worst);
    return worst == 0.0;
}

bool check_rho_oracle(std::string& detail) {
    SeededRng rng(0x5eed0003);
    const auto& primes = small_primes();
    uint64_t polys = 1000, checked = 0;
    for (uint64_t i = 0; i < polys; ++i) {
        IntPoly f = random_primitive_poly(rng, 4, 50, false);
        for (uint32_t p : primes) {
            if (p > 100) break;
            ResidueSet got = roots_mod_p2(f, p);
            uint64_t m = uint64_t{p} * p;
            // brute force over all residues mod p^2
            std::vector<uint64_t> want;
            std::vector<uint64_t> c(static_cast<size_t>(f.degree()) + 1);
            for (int k = 0; k <= f.degree(); ++k)
                c[static_cast<size_t>(k)] =
                    mpz_fdiv_ui(f.coeff_for_power(k).get_mpz_t(), m);
            for (uint64_t r = 0; r < m; ++r) {
                uint64_t acc = 0;
                for (size_t k = c.size(); k-- > 0;) acc = (acc * r + c[k]) % m;
                if (acc == 0) want.push_back(r);
            }
            if (got.roots != want) {
                detail = "mismatch at f=" + f.to_string() + " p=" + std::to_string(p);
                return false;
            }
            ++checked;
        }
    }
    detail = std::to_string(polys) + " polynomials, " + std::to_string(checked) +
             " (f,p) pairs match exhaustive search";
    return true;
}

bool check_short_ap_main_term(std::string& detail) {
    const uint64_t N = 1000000;
    SieveTable sf = squarefree_sieve_interval(1, N);
    double worst_ratio = 0.0, worst_rel = 0.0;
    for (uint64_t q = 1; q <= 50; ++q) {
        for (uint64_t a = 0; a < q; ++a) {
            APWindow w(1, N, q, a);
            double cnt = static_cast<double>(count_squarefree_ap(w, sf));
            double main = ap_main_term(q, a, static_cast<double>(N));
            double h = static_cast<double>(a == 0 ? q : std::gcd(a, q));
            double allowed =
                10.0 * h * (std::sqrt(1e6 / static_cast<double>(q)) +
                            std::pow(static_cast<double>(q), 0.6));
            double err = std::fabs(cnt - main);
            worst_ratio = std::max(worst_ratio, err / allowed);
            if (main > 1e4) worst_rel = std::max(worst_rel, err / main);
            if (err > allowed) {
                detail = "q=" + std::to_string(q) + " a=" + std::to_string(a) +
                         " err=" + fmt(err) + " allowed=" + fmt(allowed);
                return false;
            }
            if (main > 1e4 && err / main >= 0.02) {
                detail = "relative error " + fmt(err / main) + " at q=" + std::to_string(q) +
                         " a=" + std::to_string(a);
                return false;
            }
        }
    }
    detail = "max err/bound=" + fmt(worst_ratio) + ", max rel err (main>1e4)=" + fmt(worst_rel);
    return true;
}

bool check_truncated_sum_density(std::string& detail) {
    SeededRng rng(0x5eed0005);
    const uint64_t x = 100000, D = 316;
    double allowed = 10.0 * (static_cast<double>(D) + static_cast<double>(x) / D);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        IntPoly f = random_primitive_poly(rng, 3, 100, true);
        mpz_class s = sum_kD_values(f, x, D);
        CertifiedValue cf = c_f_certified(f, 10000);
        double err = std::fabs(mpz_get_d(s.get_mpz_t()) - cf.midpoint() * static_cast<double>(x));
        worst = std::max(worst, err);
        if (err > allowed) {
            detail = "f=" + f.to_string() + " err=" + fmt(err) + " allowed=" + fmt(allowed);
            return false;
        }
    }
    detail = "20 polynomials, max |sum - c_f x| = " + fmt(worst) + " <= " + fmt(allowed);
    return true;
}

bool check_exchange_oracle(std::string& detail) {
    SeededRng rng(0x5eed0006);
    for (int i = 0; i < 100; ++i) {
        IntPoly f = random_primitive_poly(rng, 3, 10, false);
        uint64_t x = 1 + rng.below(500);
        uint64_t D = 1 + rng.below(20);
        mpz_class fast = sum_kD_values(f, x, D);
        mpz_class direct = 0;
        for (uint64_t n = 1; n <= x; ++n)
            direct += k_D(f.eval(mpz_class(static_cast<unsigned long>(n))), D);
        if (fast != direct) {
            detail = "f=" + f.to_string() + " x=" + std::to_string(x) +
                     " D=" + std::to_string(D);
            return false;
        }
    }
    detail = "100 random (f, x, D) cases match the direct double loop exactly";
    return true;
}

bool check_family_decay(std::string& detail) {
    FamilySpec spec;
    spec.base = IntPoly{1, 0, 0}; // t^2
    spec.varied = {1, 0};
    spec.height = 1000000;
    spec.seed = 42;
    std::vector<IntPoly> fs = sample_family(spec, 200);
    ExperimentReport early = moments(fs, 250, {0.05});
    ExperimentReport late = moments(fs, 2000, {0.05});
    uint64_t exceeding = late.exceptional.front().second;
    bool decay = late.first_moment < early.first_moment;
    detail = "mean residual " + fmt(early.first_moment) + " @x=250 -> " +
             fmt(late.first_moment) + " @x=2000; #{r>0.05}=" + std::to_string(exceeding);
    return decay && exceeding <= 20;
}

bool check_typical_scaling(std::string& detail) {
    IntPoly g{1, 0, 1};
    double lo = 1e300, hi = 0.0;
    for (uint64_t x : {100, 200, 400}) {
        TypicalSetCounts c = typical_set_diagnostic(g, x, 1.0, 2);
        double norm = static_cast<double>(c.outside) / std::pow(static_cast<double>(x), 1.5);
        lo = std::min(lo, norm);
        hi = std::max(hi, norm);
    }
    detail = "outside/x^1.5 in [" + fmt(lo) + ", " + fmt(hi) + "], ratio " + fmt(hi / lo);
    return hi / lo <= 3.0;
}

bool check_gcd_oracle(std::string& detail) {
    const int x1s[] = {1, 2, 3, 5, 10, 20, 50};
    const int x2s[] = {1, 2, 3, 5, 10};
    int64_t gval[101];
    uint64_t cases = 0;
    for (int a = -30; a <= 30; ++a) {
        if (a == 0) continue;
        for (int c = -30; c <= 30; ++c) {
            if (c == 0) continue;
            for (int b = -30; b <= 30; ++b) {
                for (int n = -50; n <= 50; ++n)
                    gval[n + 50] = std::gcd(static_cast<int64_t>(a) * n + b,
                                            static_cast<int64_t>(c));
                for (int x1 : x1s) {
                    for (int x2 : x2s) {
                        int64_t brute = 0;
                        for (int n = -x1; n <= x1; ++n)
                            if (gval[n + 50] > x2) ++brute;
                        mpz_class got = large_gcd_count(a, b, c, x1, x2);
                        ++cases;
                        if (got != brute) {
                            detail = "a=" + std::to_string(a) + " b=" + std::to_string(b) +
                                     " c=" + std::to_string(c) + " x1=" + std::to_string(x1) +
                                     " x2=" + std::to_string(x2);
                            return false;
                        }
                    }
                }
            }
        }
    }
    detail = std::to_string(cases) + " cases match brute force exactly";
    return true;
}

bool check_sieve_performance(std::string& detail) {
    auto timed = [](int threads) {
        auto t0 = Clock::now();
        SieveTable t = squarefree_sieve_interval(1, 100000000, uint64_t{1} << 20, threads);
        double s = std::chrono::duration<double>(Clock::now() - t0).count();
        return std::pair<double, SieveTable>(s, std::move(t));
    };
    auto same = [](const SieveTable& a, const SieveTable& b) {
        auto sa = a.bits(), sb = b.bits();
        return sa.size() == sb.size() && std::equal(sa.begin(), sa.end(), sb.begin());
    };
    double t1 = 1e300, t4 = 1e300;
    SieveTable ref = squarefree_sieve_interval(1, 100000000, uint64_t{1} << 20, 1); // warmup
    bool identical = true;
    for (int rep = 0; rep < 5; ++rep) {
        auto [s1, tab1] = timed(1);
        auto [s4, tab4] = timed(4);
        t1 = std::min(t1, s1);
        t4 = std::min(t4, s4);
        identical = identical && same(ref, tab1) && same(ref, tab4);
    }
    double speedup = t1 / t4;
    detail = "best of 5: 1 thread " + fmt(t1) + "s, 4 threads " + fmt(t4) + "s, speedup " +
             fmt(speedup) + (identical ? ", outputs byte-identical" : ", OUTPUT MISMATCH") +
             "; " + std::to_string(std::thread::hardware_concurrency()) + " hardware threads";
    return identical && t1 < 60.0 && speedup >= 2.0;
}

bool check_report_reproducibility(std::string& detail) {
    FamilySpec spec;
    spec.base = IntPoly{1, 0, 0};
    spec.varied = {1, 0};
    spec.height = 1000;
    spec.seed = 977;
    std::vector<IntPoly> fs = sample_family(spec, 24);

    int saved = thread_budget();
    set_thread_budget(1);
    std::string body1 = report_csv(moments(fs, 500, {0.1, 0.05}));
    set_thread_budget(2);
    std::string body2 = report_csv(moments(fs, 500, {0.1, 0.05}));
    set_thread_budget(4);
    std::string body3 = report_csv(moments(fs, 500, {0.1, 0.05}));
    set_thread_budget(saved);

    bool same = body1 == body2 && body2 == body3;
    detail = same ? "CSV bodies byte-identical at 1/2/4 threads"
                  : "CSV bodies differ across thread counts";
    return same;
}

// ---------------------------------------------------------------------------
// quick example-level checks

bool quick_intpoly(std::string& detail) {
    IntPoly t2p1{1, 0, 1};
    bool ok = t2p1.eval(3) == 10;
    ok &= IntPoly().eval(7) == 0;
    ok &= IntPoly{1000000000000L, 1}.eval(1000000) == mpz_class("1000000000000000001");
    ok &= t2p1.derivative() == IntPoly{2, 0};
    ok &= IntPoly{5}.derivative().is_zero();
    ok &= IntPoly{3, 0, -1}.derivative() == IntPoly{6, 0};
    ok &= IntPoly{2, 4, 6}.content() == 2;
    ok &= t2p1.content() == 1;
    ok &= IntPoly{-3, 0}.content() == 3;
    ok &= resultant(IntPoly{1, 0, -1}, IntPoly{1, -1}) == 0;
    ok &= resultant(IntPoly{1, 0}, IntPoly{1, -2}) == -2;
    ok &= resultant(t2p1, IntPoly{2, 0}) == 4;
    ok &= discriminant(t2p1) == -4;
    ok &= discriminant(IntPoly{1, 0, -1, 0}) == 4;
    ok &= discriminant(IntPoly{1, 0, 0}) == 0;
    ok &= is_squarefree_poly(t2p1);
    ok &= !is_squarefree_poly(IntPoly{1, 0, 0});
    ok &= !is_squarefree_poly(IntPoly{1, 0, -3, 2});
    detail = "evaluation, derivative, content, resultant, discriminant examples";
    return ok;
}

bool quick_arith(std::string& detail) {
    bool ok = factor(1).factors.empty();
    {
        FactoredInt f72 = factor(72);
        ok &= f72.factors.size() == 2 && f72.factors[0].first == 2 &&
              f72.factors[0].second == 3 && f72.factors[1].first == 3 &&
              f72.factors[1].second == 2;
        mpz_class big("1000000000000000009");
        FactoredInt fb = factor(big);
        mpz_class prod = 1;
        for (const auto& [p, e] : fb.factors) {
            ok &= is_prime(p);
            for (int i = 0; i < e; ++i) prod *= p;
        }
        ok &= prod == big;
    }
    {
        SieveTable mt = mobius_sieve(10000);
        const int expect[10] = {1, -1, -1, 0, -1, 1, -1, 0, 0, 1};
        for (int i = 0; i < 10; ++i) ok &= mt.mobius(static_cast<uint64_t>(i + 1)) == expect[i];
        ok &= mt.mobius(30) == -1;
        ok &= mt.validate().empty();
        uint64_t trial = 0;
        for (uint64_t n = 1; n <= 10000; ++n)
            trial += mu_squared(mpz_class(static_cast<unsigned long>(n)));
        ok &= mt.squarefree_count() == trial;
    }
    {
        SieveTable st = squarefree_sieve_interval(1, 10);
        ok &= st.squarefree_count() == 7;
        ok &= squarefree_sieve_interval(48, 50).squarefree_count() == 0;
        SieveTable seg = squarefree_sieve_interval(1000000, 1001000);
        uint64_t oracle = 0;
        for (uint64_t n = 1000000; n <= 1001000; ++n)
            oracle += mu_squared(mpz_class(static_cast<unsigned long>(n)));
        ok &= seg.squarefree_count() == oracle;
    }
    ok &= mu_squared(12) == 0 && mu_squared(-30) == 1 && mu_squared(0) == 0;
    {
        auto [h1, h2] = squarefull_decompose(12);
        ok &= h1 == 3 && h2 == 4;
        auto [g1, g2] = squarefull_decompose(72);
        ok &= g1 == 1 && g2 == 72;
        auto [k1, k2] = squarefull_decompose(30);
        ok &= k1 == 30 && k2 == 1;
    }
    ok &= radical(72) == 6 && radical(1) == 1 && radical(343) == 7;
    ok &= divisor_tail_sum(12, 3.0) == mpq_class(5, 6);
    ok &= divisor_tail_sum(7, 8.0) == 0;
    {
        mpq_class full = divisor_tail_sum(12, 1.0); // sigma(12)/12 = 28/12 = 7/3
        ok &= full == mpq_class(7, 3);
    }
    ok &= large_gcd_count(1, 0, 12, 20, 3) == 15;
    ok &= large_gcd_count(1, 0, 1, 100, 1) == 0;
    ok &= large_gcd_count(2, 1, 4, 10, 2) == 0;
    detail = "factorization, sieves, decomposition, divisor sums, gcd counts";
    return ok;
}

bool quick_roots(std::string& detail) {
    IntPoly t2p1{1, 0, 1};
    bool ok = roots_mod_p(t2p1, 5).roots == std::vector<uint64_t>({2, 3});
    ok &= roots_mod_p(IntPoly{1, 0}, 7).roots == std::vector<uint64_t>({0});
    ok &= roots_mod_p(t2p1, 3).roots.empty();
    ok &= roots_mod_p2(t2p1, 5).roots == std::vector<uint64_t>({7, 18});
    ok &= roots_mod_p2(t2p1, 2).roots.empty();
    ok &= roots_mod_p2(IntPoly{1, 0, -1}, 2).roots == std::vector<uint64_t>({1, 3});
    ok &= rho(IntPoly{1, 0}, 35) == 1;
    ok &= rho(t2p1, 3) == 0;
    ok &= rho(t2p1, 5) == 2;
    ok &= roots_mod_dsq(t2p1, 5).roots == std::vector<uint64_t>({7, 18});
    ok &= roots_mod_dsq(IntPoly{1, 0}, 6).roots == std::vector<uint64_t>({0});
    ok &= roots_mod_dsq(t2p1, 10).roots.empty();
    // large-prime path agrees with the scan path
    ok &= roots_mod_p(t2p1, 1009, 2000).roots == roots_mod_p(t2p1, 1009, 10).roots;
    detail = "root sets mod p, p^2, d^2 and multiplicative counts";
    return ok;
}

bool quick_density(std::string& detail) {
    IntPoly t{1, 0}, t2p1{1, 0, 1};
    bool ok = euler_factor(t, 3) == mpq_class(8, 9);
    ok &= euler_factor(t2p1, 2) == 1;
    ok &= euler_factor(t2p1, 5) == mpq_class(23, 25);
    CertifiedValue cf = c_f_certified(t, 100000);
    ok &= cf.lower <= kSixOverPiSq && kSixOverPiSq <= cf.upper;
    ok &= cf.width() <= 2e-5;
    bool threw = false;
    try {
        c_f_certified(IntPoly{2, 2}, 1000);
    } catch (const std::domain_error&) {
        threw = true;
    }
    ok &= threw;
    threw = false;
    try {
        c_f_certified(IntPoly{1, 0, 0}, 1000); // t^2, disc 0
    } catch (const std::domain_error&) {
        threw = true;
    }
    ok &= threw;
    ok &= std::fabs(ap_main_term(1, 0, 1000.0) - kSixOverPiSq * 1000.0) < 1e-9;
    ok &= std::fabs(ap_main_term(4, 2, 120.0) - kSixOverPiSq * 40.0) < 1e-9;
    ok &= ap_main_term(4, 0, 100.0) == 0.0;
    detail = "euler factors, certified c_f bracket, AP main term";
    return ok;
}

bool quick_counting(std::string& detail) {
    IntPoly t{1, 0}, t2p1{1, 0, 1};
    bool ok = count_squarefree_values(t, 10) == 7;
    ok &= count_squarefree_values(t2p1, 10) == 9;
    ok &= count_squarefree_values(IntPoly{4, 0, 0}, 20) == 0;
    ok &= k_D(12, 2) == 0;
    ok &= k_D(30, 5) == 1;
    ok &= k_D(0, 10) == -1;
    ok &= sum_kD_values(t, 100, 1) == 100;
    ok &= sum_kD_values(t, 100, 10) == 61;
    ok &= count_squarefree_ap(APWindow(1, 20, 4, 1)) == 4;
    ok &= count_squarefree_ap(APWindow(1, 10, 1, 0)) == 7;
    ok &= count_squarefree_ap(APWindow(1, 400, 4, 0)) == 0;
    ok &= sum_kD_ap(APWindow(1, 100, 1, 0), 10).sum == 61;
    {
        mpz_class direct = 0;
        for (uint64_t n = 2; n <= 200; n += 4)
            direct += k_D(mpz_class(static_cast<unsigned long>(n)), 14);
        ok &= sum_kD_ap(APWindow(1, 200, 4, 2), 14).sum == direct;
    }
    ok &= residual_ap(APWindow(1, 9000, 5, 2), 100) == 0.0;
    detail = "square-free counts, k_D, exchanged sums, AP windows, residuals";
    return ok;
}

bool quick_family(std::string& detail) {
    FamilySpec spec;
    spec.base = IntPoly{1, 0, 0};
    spec.varied = {0, 1};
    spec.height = 1;
    spec.seed = 7;
    bool ok = enumerate_family(spec).size() == 9;
    ok &= sample_family(spec, 50) == sample_family(spec, 50);
    FamilySpec warn;
    warn.base = IntPoly{1, 0};
    warn.varied = {1};
    warn.height = 2;
    ok &= family_hypothesis_warning(warn);
    auto rep = moments({IntPoly{1, 0}}, 100, {1.0, 0.0});
    ok &= rep.rows[0].count == 61;
    ok &= std::fabs(rep.rows[0].residual - 0.00207) < 2e-4;
    ok &= rep.exceptional[0].second == 0 && rep.exceptional[1].second == 1;
    ok &= rep.second_moment >= rep.first_moment * rep.first_moment;
    detail = "enumeration, determinism, hypothesis flag, single-poly moments";
    return ok;
}

} // namespace

std::vector<CheckResult> quick_checks() {
    Harness h;
    h.run("examples-intpoly", 0, quick_intpoly);
    h.run("examples-arith", 0, quick_arith);
    h.run("examples-roots", 0, quick_roots);
    h.run("examples-density", 0, quick_density);
    h.run("examples-counting", 0, quick_counting);
    h.run("examples-family", 0, quick_family);
    return h.results;
}

std::vector<CheckResult> acceptance_checks() {
    Harness h;
    h.run("squarefree-density", 10, check_density);
    h.run("truncated-sieve-identity", 30, check_kd_identity);
    h.run("root-lifting-oracle", 60, check_rho_oracle);
    h.run("short-ap-main-term", 120, check_short_ap_main_term);
    h.run("truncated-sum-density-error", 120, check_truncated_sum_density);
    h.run("exchange-of-summation-oracle", 10, check_exchange_oracle);
    h.run("family-residual-decay", 300, check_family_decay);
    h.run("typical-pair-scaling", 60, check_typical_scaling);
    h.run("gcd-count-oracle", 60, check_gcd_oracle);
    h.run("sieve-performance-floor", 300, check_sieve_performance);
    h.run("report-reproducibility", 60, check_report_reproducibility);
    return h.results;
}

int print_results(const std::vector<CheckResult>& results) {
    int failures = 0;
    for (const auto& r : results) {
        if (!r.pass) ++failures;
        std::printf("%s %s (%.2fs): %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(), r.seconds,
                    r.detail.c_str());
    }
    std::fflush(stdout);
    return failures;
}

} // namespace sqflab
