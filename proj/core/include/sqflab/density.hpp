#pragma once

#include "sqflab/intpoly.hpp"

#include <cstdint>
#include <vector>

namespace sqflab {

// Rigorous two-sided bracket for the density constant
//   c_f = prod_p (1 - rho_f(p^2)/p^2).
// The product over p <= prime_cutoff is evaluated (exact rationals up to the
// configurable switch point, directed-rounded doubles above); primes of
// disc(f)*lc(f) larger than the cutoff are folded in exactly and listed in
// bad_primes; the remaining tail is bracketed by
//   1 >= prod_{p > P} (1 - rho_f(p^2)/p^2) >= 1 - deg(f)/(P-1),
// which is valid because rho_f(p^2) <= deg(f) for every p beyond the bad set.
struct CertifiedValue {
    double lower = 0.0;
    double upper = 0.0;
    uint64_t prime_cutoff = 0;
    std::vector<mpz_class> bad_primes; // primes of disc(f)*lc(f) handled exactly

    double midpoint() const { return 0.5 * (lower + upper); }
    double width() const { return upper - lower; }
};

// Exact Euler factor 1 - rho_f(p^2)/p^2. Requires primitive f.
mpq_class euler_factor(const IntPoly& f, uint64_t p);

// Certified bracket around c_f. Requires f primitive and square-free as a
// polynomial (disc != 0); throws std::domain_error otherwise. `exact_cutoff`
// is the point where the finite product switches from exact rational to
// directed-rounded double accumulation.
CertifiedValue c_f_certified(const IntPoly& f, uint64_t prime_cutoff,
                             uint64_t exact_cutoff = 10000);

// Expected number of square-free integers in a length-y window of the
// progression a mod q:
//   (6/pi^2) mu^2(h) (y/q) prod_{p|q'}(1-1/p)^{-1} prod_{p|q}(1+1/p)^{-1}
// with h = gcd(a,q), q' = q/h. Returns 0 when h is not square-free.
double ap_main_term(uint64_t q, uint64_t a, double y);

} // namespace sqflab
