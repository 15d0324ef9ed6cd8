#pragma once

#include "sqflab/intpoly.hpp"

#include <cstdint>
#include <map>
#include <mutex>
#include <vector>

namespace sqflab {

// Solution set of f(n) == 0 (mod modulus). When f vanishes identically mod
// the modulus (possible only for non-primitive f), `all_residues` is set
// instead of materializing the full set.
struct ResidueSet {
    uint64_t modulus = 1;
    std::vector<uint64_t> roots; // sorted, each in [0, modulus)
    bool all_residues = false;   // "degenerate" case: f == 0 mod modulus

    uint64_t count() const { return all_residues ? modulus : roots.size(); }
};

// Roots of f mod p. Exhaustive scan below `scan_cutoff`; otherwise the
// distinct roots are read off gcd(f, t^p - t) over the p-element field and
// split by a deterministic schedule. Throws std::domain_error when p is not
// prime. If p divides every coefficient the full residue set is flagged.
ResidueSet roots_mod_p(const IntPoly& f, uint64_t p, uint64_t scan_cutoff = 1000);

// rho_f(p) without materializing the roots (degree of gcd(f, t^p - t)).
uint64_t count_roots_mod_p(const IntPoly& f, uint64_t p);

// Roots of f mod p^2. Each simple root mod p (f'(r) != 0 mod p) lifts to a
// unique root; at singular roots every one of the p lifts is tested.
ResidueSet roots_mod_p2(const IntPoly& f, uint64_t p, uint64_t scan_cutoff = 1000);

// rho_f(p^2) for primitive f; avoids materializing root sets at large
// singular primes. Throws std::domain_error if content(f) != 1.
uint64_t rho_p2(const IntPoly& f, uint64_t p);

// rho_f(d^2) for square-free d >= 1 by multiplicativity over the primes of d.
// Requires primitive f; throws std::domain_error when mu^2(d) == 0.
uint64_t rho(const IntPoly& f, uint64_t d);

// All residues mod d^2 where f vanishes, assembled by Chinese remaindering
// the per-prime sets. Same preconditions as rho.
ResidueSet roots_mod_dsq(const IntPoly& f, uint64_t d);

// Per-prime root cache for one polynomial: roots mod p and mod p^2 plus the
// singular flag (p | disc(f) or p | leading coefficient). Lazily filled,
// safe for concurrent use, contents independent of call order.
class RhoTable {
public:
    struct Entry {
        std::vector<uint64_t> roots_p;
        std::vector<uint64_t> roots_p2; // residues mod p^2
        bool singular = false;
    };

    explicit RhoTable(IntPoly f);

    const IntPoly& poly() const { return poly_; }
    const mpz_class& disc() const { return disc_; }

    const Entry& get(uint64_t p); // p must be prime

private:
    IntPoly poly_;
    mpz_class disc_;
    std::map<uint64_t, Entry> entries_;
    std::mutex mu_;
};

} // namespace sqflab
