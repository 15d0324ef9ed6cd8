#include "sqflab/density.hpp"

#include "sqflab/arith.hpp"
#include "sqflab/roots.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace sqflab {

namespace {

double mul_down(double a, double b) { return std::nextafter(a * b, 0.0); }
double mul_up(double a, double b) {
    double r = a * b;
    return r < 1.0 ? std::nextafter(r, 2.0) : r;
}

// rho_f(p^2) inside the truncated product: good primes (p !| disc*lc) have
// rho(p^2) == rho(p), which the gcd-degree count delivers without lifting.
uint64_t rho_for_product(const IntPoly& f, uint64_t p, const mpz_class& disc) {
    bool singular = mpz_divisible_ui_p(disc.get_mpz_t(), static_cast<unsigned long>(p)) ||
                    mpz_divisible_ui_p(f.leading().get_mpz_t(), static_cast<unsigned long>(p));
    if (!singular) return count_roots_mod_p(f, p);
    return roots_mod_p2(f, p).count();
}

} // namespace

mpq_class euler_factor(const IntPoly& f, uint64_t p) {
    if (f.is_zero() || !f.is_primitive())
        throw std::domain_error("euler_factor: requires primitive f");
    mpz_class pz = static_cast<unsigned long>(p);
    mpz_class p2 = pz * pz;
    mpz_class r = static_cast<unsigned long>(rho_p2(f, p));
    mpq_class out(p2 - r, p2);
    out.canonicalize();
    return out;
}

CertifiedValue c_f_certified(const IntPoly& f, uint64_t prime_cutoff, uint64_t exact_cutoff) {
    if (f.is_zero() || !f.is_primitive())
        throw std::domain_error("c_f_certified: requires a primitive polynomial");
    int d = f.degree();
    if (d < 1) throw std::domain_error("c_f_certified: requires degree >= 1");
    mpz_class disc = discriminant(f);
    if (disc == 0)
        throw std::domain_error("c_f_certified: polynomial not square-free, c_f undefined here");
    if (prime_cutoff < 3) throw std::invalid_argument("c_f_certified: cutoff too small");
    if (prime_cutoff > 1000003)
        throw std::invalid_argument("c_f_certified: cutoff beyond the prime table (1e6)");

    // Primes beyond the cutoff where rho_f(p^2) <= deg f can fail; their
    // Euler factors are folded in exactly below.
    mpz_class bad_product = abs(disc * f.leading());
    std::vector<mpz_class> bad_primes;
    for (const auto& [p, e] : factor(bad_product).factors) bad_primes.push_back(p);

    CertifiedValue out;
    out.prime_cutoff = prime_cutoff;
    out.bad_primes = bad_primes;

    // finite product over p <= cutoff: exact rationals first, then directed
    // rounding in double
    mpq_class exact(1);
    double lo = 1.0, up = 1.0;
    bool exact_phase = true;
    for (uint32_t p : small_primes()) {
        if (p > prime_cutoff) break;
        uint64_t r = rho_for_product(f, p, disc);
        if (exact_phase && p > exact_cutoff) {
            exact_phase = false;
            lo = mpq_get_d(exact.get_mpq_t()); // rounds toward zero: lower bound
            up = std::nextafter(lo, 2.0);
        }
        if (r == 0) continue;
        uint64_t p2 = uint64_t{p} * p;
        if (exact_phase) {
            mpq_class fac(mpz_class(static_cast<unsigned long>(p2 - r)),
                          mpz_class(static_cast<unsigned long>(p2)));
            fac.canonicalize();
            exact *= fac;
        } else {
            double fac = static_cast<double>(p2 - r) / static_cast<double>(p2);
            lo = mul_down(lo, std::nextafter(fac, 0.0));
            up = mul_up(up, std::nextafter(fac, 2.0));
        }
    }
    if (exact_phase) {
        lo = mpq_get_d(exact.get_mpq_t());
        up = std::nextafter(lo, 2.0);
    }

    // exact factors at bad primes beyond the cutoff; primes past 2^63 are
    // bracketed by [1 - d/p, 1] instead (their factor exceeds it)
    for (const mpz_class& p : bad_primes) {
        if (p <= static_cast<unsigned long>(prime_cutoff)) continue;
        if (mpz_fits_ulong_p(p.get_mpz_t()) && p < mpz_class("9223372036854775807")) {
            uint64_t pu = mpz_get_ui(p.get_mpz_t());
            uint64_t r = rho_p2(f, pu);
            if (r == 0) continue;
            // work in doubles with outward rounding; p can exceed 2^31 so
            // form the factor from p directly
            double pd = static_cast<double>(pu);
            double fac = 1.0 - static_cast<double>(r) / (pd * pd);
            if (fac <= 0.0) { lo = 0.0; continue; }
            lo = mul_down(lo, std::nextafter(fac, 0.0));
            up = mul_up(up, std::min(1.0, std::nextafter(fac, 2.0)));
        } else {
            double pd = mpz_get_d(p.get_mpz_t());
            double fac_lo = 1.0 - static_cast<double>(d) / pd;
            lo = mul_down(lo, std::nextafter(fac_lo, 0.0));
        }
    }

    // tail over good primes beyond the cutoff
    double tail_lo = 1.0 - static_cast<double>(d) / (static_cast<double>(prime_cutoff) - 1.0);
    if (tail_lo < 0.0) tail_lo = 0.0;
    lo = mul_down(lo, std::nextafter(tail_lo, 0.0));

    out.lower = std::max(0.0, lo);
    out.upper = std::min(1.0, up);
    if (out.lower > out.upper) out.lower = out.upper;
    return out;
}

double ap_main_term(uint64_t q, uint64_t a, double y) {
    if (q < 1) throw std::domain_error("ap_main_term: requires q >= 1");
    uint64_t h = a == 0 ? q : std::gcd(a, q);
    uint64_t qp = q / h;

    constexpr double six_over_pi2 = 6.0 / (std::numbers::pi * std::numbers::pi);
    double main = six_over_pi2 * y / static_cast<double>(q);

    FactoredInt fq = factor(mpz_class(static_cast<unsigned long>(q)));
    // mu^2(h): h | q, so check h against the primes of q
    for (const auto& [p, e] : fq.factors) {
        mpz_class psq = p * p;
        if (mpz_divisible_p(mpz_class(static_cast<unsigned long>(h)).get_mpz_t(),
                            psq.get_mpz_t()))
            return 0.0;
    }
    for (const auto& [p, e] : fq.factors) {
        double pd = mpz_get_d(p.get_mpz_t());
        if (qp % mpz_get_ui(p.get_mpz_t()) == 0) main /= 1.0 - 1.0 / pd;
        main /= 1.0 + 1.0 / pd;
    }
    return main;
}

} // namespace sqflab
