#include "sqflab/counting.hpp"

#include "sqflab/parallel.hpp"
#include "sqflab/roots.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace sqflab {

namespace {

using u128 = unsigned __int128;
using i128 = __int128;

// #{n in [lo, hi] : n == r (mod m)} for 0 <= r < m
uint64_t class_count(uint64_t lo, uint64_t hi, uint64_t m, uint64_t r) {
    auto fdiv = [](i128 a, i128 b) {
        i128 q = a / b, rem = a % b;
        return (rem != 0 && ((rem < 0) != (b < 0))) ? q - 1 : q;
    };
    i128 up = fdiv(static_cast<i128>(hi) - static_cast<i128>(r), static_cast<i128>(m));
    i128 dn = fdiv(static_cast<i128>(lo) - 1 - static_cast<i128>(r), static_cast<i128>(m));
    return static_cast<uint64_t>(up - dn);
}

// crude but safe bound for max |f(n)| over 1 <= n <= x
mpz_class value_bound(const IntPoly& f, uint64_t x) {
    mpz_class bound = 0;
    mpz_class xn = 1;
    mpz_class xz = static_cast<unsigned long>(x);
    for (int k = 0; k <= f.degree(); ++k) {
        bound += abs(f.coeff_for_power(k)) * xn;
        xn *= xz;
    }
    return bound;
}

// number of integer roots of f in [1, x]
uint64_t integer_roots_in_range(const IntPoly& f, uint64_t x) {
    if (f.is_zero()) return x;
    std::vector<mpz_class> c = f.coeffs();
    while (!c.empty() && c.back() == 0) c.pop_back(); // strip t^k: root 0 is outside [1,x]
    if (c.size() <= 1) return 0;                      // constant after stripping
    IntPoly g(c);
    mpz_class tail = abs(g.coeffs().back());
    uint64_t found = 0;
    for (const mpz_class& dv : factor(tail).divisors()) {
        if (mpz_cmp_ui(dv.get_mpz_t(), 1) < 0) continue;
        if (dv > mpz_class(static_cast<unsigned long>(x))) continue;
        if (g.eval(dv) == 0) ++found;
    }
    return found;
}

constexpr uint64_t kShortcutDLimit = 2000000;

} // namespace

APWindow::APWindow(uint64_t lo_, uint64_t hi_, uint64_t q_, uint64_t a_)
    : lo(lo_), hi(hi_), q(q_), a(a_) {
    if (lo < 1 || lo > hi) throw std::invalid_argument("APWindow: need 1 <= lo <= hi");
    if (q < 1 || a >= q) throw std::invalid_argument("APWindow: need q >= 1 and 0 <= a < q");
}

uint64_t default_D(uint64_t x) {
    if (x < 2) return 1;
    double v = std::pow(static_cast<double>(x), 0.9);
    return std::max<uint64_t>(1, static_cast<uint64_t>(std::ceil(v)));
}

int64_t k_D(const mpz_class& n, uint64_t D) {
    if (D < 1) throw std::invalid_argument("k_D: requires D >= 1");
    if (n == 0) return mobius_sieve(D).mertens(D);
    mpz_class m = abs(n);
    // square-free d with d^2 | m are exactly the square-free divisors of
    // prod_{e_p >= 2} p; enumerate those below D
    FactoredInt fm = factor(m);
    std::vector<uint64_t> base;
    for (const auto& [p, e] : fm.factors) {
        if (e < 2) continue;
        if (!mpz_fits_ulong_p(p.get_mpz_t())) continue; // p^2 > D^2 for any feasible D
        base.push_back(mpz_get_ui(p.get_mpz_t()));
    }
    int64_t sum = 0;
    size_t k = base.size();
    // depth-first over subsets with running product <= D
    struct Frame { size_t idx; uint64_t prod; int sign; };
    std::vector<Frame> stack{{0, 1, +1}};
    while (!stack.empty()) {
        auto [idx, prod, sign] = stack.back();
        stack.pop_back();
        if (idx == k) {
            sum += sign;
            continue;
        }
        stack.push_back({idx + 1, prod, sign}); // skip base[idx]
        if (base[idx] <= D / prod)
            stack.push_back({idx + 1, prod * base[idx], -sign});
    }
    return sum;
}

std::vector<int32_t> kD_table(uint64_t N, uint64_t D) {
    if (N < 1 || D < 1) throw std::invalid_argument("kD_table: N, D >= 1");
    std::vector<int32_t> table(N + 1, 0);
    uint64_t dmax = std::min<uint64_t>(D, static_cast<uint64_t>(std::sqrt(static_cast<double>(N))) + 1);
    SieveTable mt = mobius_sieve(std::max<uint64_t>(1, dmax));
    for (uint64_t d = 1; d <= dmax; ++d) {
        if (d * d > N) break;
        int mu = mt.mobius(d);
        if (mu == 0) continue;
        for (uint64_t m = d * d; m <= N; m += d * d)
            table[m] += mu;
    }
    return table;
}

mpz_class sum_kD_values(const IntPoly& f, uint64_t x, uint64_t D) {
    if (f.is_zero() || !f.is_primitive())
        throw std::domain_error("sum_kD_values: polynomial content must be 1");
    if (x < 1 || D < 1) throw std::invalid_argument("sum_kD_values: x, D >= 1");
    if (D >= (uint64_t{1} << 31)) throw std::invalid_argument("sum_kD_values: D too large");

    SieveTable mt = mobius_sieve(D);
    std::vector<uint32_t> spf = spf_sieve(static_cast<uint32_t>(D));
    RhoTable rho_cache(f);

    mpz_class total = 0;
    std::vector<uint64_t> crt_roots, next_roots;
    for (uint64_t d = 1; d <= D; ++d) {
        int mu = mt.mobius(d);
        if (mu == 0) continue;
        // assemble roots of f mod d^2 by CRT over the primes of d
        crt_roots.assign(1, 0);
        uint64_t modulus = 1;
        uint64_t rest = d;
        bool empty = false;
        while (rest > 1) {
            uint64_t p = spf[rest];
            rest /= p;
            const auto& entry = rho_cache.get(p);
            const auto& pr = entry.roots_p2;
            if (pr.empty()) { empty = true; break; }
            uint64_t pm = p * p;
            // r = r1 + m*((r2 - r1) * inv(m) mod pm)
            uint64_t minv = 1;
            {
                int64_t t = 0, newt = 1;
                int64_t r0 = static_cast<int64_t>(pm), r1 = static_cast<int64_t>(modulus % pm);
                while (r1 != 0) {
                    int64_t qq = r0 / r1;
                    t -= qq * newt; std::swap(t, newt);
                    r0 -= qq * r1; std::swap(r0, r1);
                }
                if (t < 0) t += static_cast<int64_t>(pm);
                minv = static_cast<uint64_t>(t);
            }
            next_roots.clear();
            next_roots.reserve(crt_roots.size() * pr.size());
            for (uint64_t r1 : crt_roots)
                for (uint64_t r2 : pr) {
                    uint64_t diff = (r2 + pm - r1 % pm) % pm;
                    uint64_t t = static_cast<uint64_t>((static_cast<u128>(diff) * minv) % pm);
                    next_roots.push_back(r1 + modulus * t);
                }
            crt_roots.swap(next_roots);
            modulus *= pm;
        }
        if (empty) continue;
        uint64_t dsq = d * d;
        uint64_t cnt = 0;
        for (uint64_t r : crt_roots) cnt += class_count(1, x, dsq, r);
        if (mu > 0)
            total += cnt;
        else
            total -= cnt;
    }
    return total;
}

uint64_t count_squarefree_values(const IntPoly& f, uint64_t x) {
    if (x < 1) return 0;
    if (f.is_zero()) return 0;

    bool primitive = f.content() == 1;
    mpz_class bound = value_bound(f, x);
    mpz_class droot;
    mpz_sqrt(droot.get_mpz_t(), bound.get_mpz_t());
    droot += 1;

    if (primitive && droot <= static_cast<unsigned long>(kShortcutDLimit) && f.degree() >= 1) {
        uint64_t D = mpz_get_ui(droot.get_mpz_t());
        mpz_class total = sum_kD_values(f, x, D);
        // values f(n) == 0 contribute the full mu sum to k_D but 0 to mu^2
        uint64_t zeros = integer_roots_in_range(f, x);
        if (zeros) total -= mpz_class(static_cast<long>(mobius_sieve(D).mertens(D))) *
                            static_cast<unsigned long>(zeros);
        return mpz_get_ui(total.get_mpz_t());
    }

    // direct path: factor every value
    std::vector<uint64_t> partial((x + 4095) / 4096, 0);
    for_chunks(1, x + 1, 4096, 0, [&](uint64_t c, uint64_t lo, uint64_t hi) {
        uint64_t cnt = 0;
        mpz_class v;
        for (uint64_t n = lo; n < hi; ++n) {
            v = f.eval(mpz_class(static_cast<unsigned long>(n)));
            cnt += mu_squared(v);
        }
        partial[c] = cnt;
    });
    return std::accumulate(partial.begin(), partial.end(), uint64_t{0});
}

uint64_t count_squarefree_ap(const APWindow& w, const SieveTable& table) {
    if (table.lo() > w.lo || table.hi() < w.hi)
        throw std::invalid_argument("count_squarefree_ap: table does not cover the window");
    uint64_t first = w.lo + ((w.a + w.q - w.lo % w.q) % w.q);
    uint64_t count = 0;
    for (uint64_t n = first; n <= w.hi; n += w.q)
        if (table.squarefree(n)) ++count;
    return count;
}

uint64_t count_squarefree_ap(const APWindow& w) {
    SieveTable table = squarefree_sieve_interval(w.lo, w.hi);
    return count_squarefree_ap(w, table);
}

KDApSum sum_kD_ap(const APWindow& w, uint64_t D) {
    if (D < 1 || D >= (uint64_t{1} << 31)) throw std::invalid_argument("sum_kD_ap: bad D");
    KDApSum out;

    // short-AP hypothesis bookkeeping: square-full part of gcd(a, q)
    uint64_t h = w.a == 0 ? w.q : std::gcd(w.a, w.q);
    auto [h1, h2] = squarefull_decompose(mpz_class(static_cast<unsigned long>(h)));
    mpz_class d2 = mpz_class(static_cast<unsigned long>(D)) * static_cast<unsigned long>(D);
    for (const auto& [p, e] : factor(h2).factors)
        if (p >= d2) out.h2_primes_below_D2 = false;

    SieveTable mt = mobius_sieve(D);
    mpz_class total = 0;
    for (uint64_t d = 1; d <= D; ++d) {
        int mu = mt.mobius(d);
        if (mu == 0) continue;
        uint64_t dsq = d * d;
        // n == 0 (mod d^2) and n == a (mod q)
        uint64_t g = std::gcd(dsq, w.q);
        if (w.a % g != 0) continue;
        u128 lcm = static_cast<u128>(dsq) / g * w.q;
        if (lcm > static_cast<u128>(~uint64_t{0}))
            continue; // no n below 2^64 anyway; windows are u64
        uint64_t L = static_cast<uint64_t>(lcm);
        // solve n = dsq * t with dsq * t == a (mod q): t == (a/g) * inv(dsq/g) (mod q/g)
        uint64_t qg = w.q / g;
        uint64_t r;
        if (qg == 1) {
            r = 0;
        } else {
            uint64_t dg = (dsq / g) % qg;
            int64_t t = 0, newt = 1;
            int64_t r0 = static_cast<int64_t>(qg), r1 = static_cast<int64_t>(dg);
            while (r1 != 0) {
                int64_t qq = r0 / r1;
                t -= qq * newt; std::swap(t, newt);
                r0 -= qq * r1; std::swap(r0, r1);
            }
            if (t < 0) t += static_cast<int64_t>(qg);
            uint64_t inv = static_cast<uint64_t>(t);
            uint64_t ag = (w.a / g) % qg;
            r = static_cast<uint64_t>((static_cast<u128>(ag) * inv) % qg);
        }
        // smallest solution n0 = dsq * r (mod L)
        uint64_t n0 = static_cast<uint64_t>((static_cast<u128>(dsq) * r) % L);
        uint64_t cnt = class_count(w.lo, w.hi, L, n0);
        if (mu > 0)
            total += cnt;
        else
            total -= cnt;
    }
    out.sum = total;
    return out;
}

double residual_ap(const APWindow& w, uint64_t D, const SieveTable& table) {
    uint64_t sf = count_squarefree_ap(w, table);
    KDApSum kd = sum_kD_ap(w, D);
    mpz_class diff = abs(mpz_class(kd.sum - static_cast<unsigned long>(sf)));
    double scale = static_cast<double>(w.q) / static_cast<double>(w.length());
    return scale * mpz_get_d(diff.get_mpz_t());
}

double residual_ap(const APWindow& w, uint64_t D) {
    SieveTable table = squarefree_sieve_interval(w.lo, w.hi);
    return residual_ap(w, D, table);
}

} // namespace sqflab
