#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace sqflab {

// Univariate integer polynomial with arbitrary-precision coefficients.
//
// Coefficients are stored highest degree first, so {1,0,1} is t^2 + 1; every
// text representation ("1,0,1") uses the same order. The zero polynomial is
// the empty coefficient list and reports degree -1. All operations are pure
// and safe for unrestricted concurrent use.
class IntPoly {
public:
    IntPoly() = default; // zero polynomial

    // Trims leading zero coefficients, so IntPoly({0,0,3}) is the constant 3.
    explicit IntPoly(std::vector<mpz_class> coeffs_high_first);
    IntPoly(std::initializer_list<long> coeffs_high_first);

    // Parses "c0,c1,...,cd" (highest degree first). Throws std::invalid_argument
    // on malformed input.
    static IntPoly from_string(std::string_view text);

    bool is_zero() const { return coeffs_.empty(); }
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }

    // Highest degree first; empty for the zero polynomial.
    const std::vector<mpz_class>& coeffs() const { return coeffs_; }
    const mpz_class& leading() const;

    // Coefficient of t^k (zero when k exceeds the degree or k < 0).
    const mpz_class& coeff_for_power(int k) const;

    mpz_class height() const; // max |c_i|, 0 for the zero polynomial

    std::string to_string() const;

    bool operator==(const IntPoly&) const = default;

    mpz_class eval(const mpz_class& n) const;
    IntPoly derivative() const;

    // gcd of all coefficients (positive). Throws std::domain_error on the zero
    // polynomial ("undefined content").
    mpz_class content() const;
    bool is_primitive() const { return content() == 1; }

private:
    std::vector<mpz_class> coeffs_;
};

// Resultant under the Sylvester-determinant convention: Res(f,g) is the
// determinant of the (deg f + deg g) square Sylvester matrix whose first
// deg g rows carry the coefficients of f. Computed by a subresultant
// pseudo-remainder sequence in exact integer arithmetic.
// Throws std::domain_error if either polynomial is zero.
mpz_class resultant(const IntPoly& f, const IntPoly& g);

// Discriminant: (-1)^{n(n-1)/2} Res(f, f') / lc(f) with n = deg f >= 1.
// The division is always exact. Throws std::domain_error for constants.
mpz_class discriminant(const IntPoly& f);

// True iff the discriminant is nonzero (f has no repeated complex root).
bool is_squarefree_poly(const IntPoly& f);

} // namespace sqflab
