#include "sqflab/intpoly.hpp"

#include <cctype>
#include <stdexcept>
#include <utility>

namespace sqflab {

namespace {
const mpz_class kZero = 0;

void trim_leading_zeros(std::vector<mpz_class>& c) {
    size_t i = 0;
    while (i < c.size() && c[i] == 0) ++i;
    if (i) c.erase(c.begin(), c.begin() + static_cast<long>(i));
}
} // namespace

IntPoly::IntPoly(std::vector<mpz_class> coeffs_high_first)
    : coeffs_(std::move(coeffs_high_first)) {
    trim_leading_zeros(coeffs_);
}

IntPoly::IntPoly(std::initializer_list<long> coeffs_high_first) {
    coeffs_.reserve(coeffs_high_first.size());
    for (long c : coeffs_high_first) coeffs_.emplace_back(c);
    trim_leading_zeros(coeffs_);
}

IntPoly IntPoly::from_string(std::string_view text) {
    std::vector<mpz_class> coeffs;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t comma = text.find(',', pos);
        std::string_view tok = text.substr(pos, comma == std::string_view::npos
                                                    ? std::string_view::npos
                                                    : comma - pos);
        size_t b = 0, e = tok.size();
        while (b < e && std::isspace(static_cast<unsigned char>(tok[b]))) ++b;
        while (e > b && std::isspace(static_cast<unsigned char>(tok[e - 1]))) --e;
        std::string digits(tok.substr(b, e - b));
        mpz_class v;
        if (digits.empty() || mpz_set_str(v.get_mpz_t(), digits.c_str(), 10) != 0)
            throw std::invalid_argument("IntPoly: bad coefficient '" + digits + "'");
        coeffs.push_back(std::move(v));
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return IntPoly(std::move(coeffs));
}

const mpz_class& IntPoly::leading() const {
    if (is_zero()) throw std::domain_error("IntPoly: zero polynomial has no leading coefficient");
    return coeffs_.front();
}

const mpz_class& IntPoly::coeff_for_power(int k) const {
    if (k < 0 || k > degree()) return kZero;
    return coeffs_[static_cast<size_t>(degree() - k)];
}

mpz_class IntPoly::height() const {
    mpz_class h = 0;
    for (const auto& c : coeffs_) {
        mpz_class a = abs(c);
        if (a > h) h = a;
    }
    return h;
}

std::string IntPoly::to_string() const {
    if (is_zero()) return "0";
    std::string out;
    for (size_t i = 0; i < coeffs_.size(); ++i) {
        if (i) out += ',';
        out += coeffs_[i].get_str();
    }
    return out;
}

mpz_class IntPoly::eval(const mpz_class& n) const {
    mpz_class acc = 0;
    for (const auto& c : coeffs_) {
        acc *= n;
        acc += c;
    }
    return acc;
}

IntPoly IntPoly::derivative() const {
    int d = degree();
    if (d <= 0) return IntPoly();
    std::vector<mpz_class> out(static_cast<size_t>(d));
    for (int k = d; k >= 1; --k)
        out[static_cast<size_t>(d - k)] = coeffs_[static_cast<size_t>(d - k)] * k;
    return IntPoly(std::move(out));
}

mpz_class IntPoly::content() const {
    if (is_zero()) throw std::domain_error("IntPoly: undefined content of the zero polynomial");
    mpz_class g = 0;
    for (const auto& c : coeffs_) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
        if (g == 1) break;
    }
    return g;
}

namespace {

using Coeffs = std::vector<mpz_class>; // highest degree first, no leading zeros

int deg(const Coeffs& a) { return static_cast<int>(a.size()) - 1; }

// Pseudo-remainder: returns R with lc(B)^(deg A - deg B + 1) * A = Q*B + R,
// deg R < deg B. Requires deg A >= deg B >= 0.
Coeffs prem(Coeffs A, const Coeffs& B) {
    const mpz_class& lb = B.front();
    int e = deg(A) - deg(B) + 1;
    while (!A.empty() && deg(A) >= deg(B)) {
        int shift = deg(A) - deg(B);
        mpz_class la = A.front();
        // A <- lb*A - la * t^shift * B ; leading term cancels
        for (auto& c : A) c *= lb;
        for (size_t i = 0; i < B.size(); ++i)
            A[i] -= la * B[i];
        A.erase(A.begin());
        trim_leading_zeros(A);
        --e;
    }
    if (e > 0) {
        mpz_class scale;
        mpz_pow_ui(scale.get_mpz_t(), lb.get_mpz_t(), static_cast<unsigned long>(e));
        for (auto& c : A) c *= scale;
    }
    return A;
}

void divide_exact(Coeffs& a, const mpz_class& d) {
    for (auto& c : a) {
        mpz_class q, r;
        mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), c.get_mpz_t(), d.get_mpz_t());
        if (r != 0) throw std::logic_error("resultant: inexact division in PRS");
        c = std::move(q);
    }
}

mpz_class pow_mpz(const mpz_class& b, unsigned long e) {
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
    return r;
}

} // namespace

mpz_class resultant(const IntPoly& f, const IntPoly& g) {
    if (f.is_zero() || g.is_zero())
        throw std::domain_error("resultant: defined for nonzero polynomials only");

    Coeffs A = f.coeffs();
    Coeffs B = g.coeffs();
    mpz_class s = 1;
    if (deg(A) < deg(B)) {
        std::swap(A, B);
        if ((deg(A) & 1) && (deg(B) & 1)) s = -1;
    }
    if (deg(B) == 0) return s * pow_mpz(B.front(), static_cast<unsigned long>(deg(A)));

    mpz_class gg = 1, h = 1;
    for (;;) {
        int da = deg(A), db = deg(B);
        int delta = da - db;
        if ((da & 1) && (db & 1)) s = -s;
        Coeffs R = prem(A, B);
        A = std::move(B);
        if (R.empty()) return 0; // common factor of positive degree
        divide_exact(R, gg * pow_mpz(h, static_cast<unsigned long>(delta)));
        B = std::move(R);
        gg = A.front();
        if (delta == 1) {
            h = gg;
        } else if (delta > 1) {
            mpz_class num = pow_mpz(gg, static_cast<unsigned long>(delta));
            mpz_class den = pow_mpz(h, static_cast<unsigned long>(delta - 1));
            mpz_class q, r;
            mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
            if (r != 0) throw std::logic_error("resultant: inexact h update");
            h = std::move(q);
        }
        if (deg(B) == 0) {
            int dap = deg(A);
            mpz_class num = pow_mpz(B.front(), static_cast<unsigned long>(dap));
            if (dap > 1) {
                mpz_class den = pow_mpz(h, static_cast<unsigned long>(dap - 1));
                mpz_class q, r;
                mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
                if (r != 0) throw std::logic_error("resultant: inexact final division");
                num = std::move(q);
            }
            return s * num;
        }
    }
}

mpz_class discriminant(const IntPoly& f) {
    int n = f.degree();
    if (n < 1) throw std::domain_error("discriminant: requires degree >= 1");
    mpz_class r = resultant(f, f.derivative());
    mpz_class q, rem;
    mpz_tdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), r.get_mpz_t(), f.leading().get_mpz_t());
    if (rem != 0) throw std::logic_error("discriminant: resultant not divisible by leading coefficient");
    bool negate = ((static_cast<long>(n) * (n - 1)) / 2) & 1;
    return negate ? mpz_class(-q) : q;
}

bool is_squarefree_poly(const IntPoly& f) { return discriminant(f) != 0; }

} // namespace sqflab
