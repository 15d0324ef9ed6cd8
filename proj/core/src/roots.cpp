#include "sqflab/roots.hpp"

#include "sqflab/arith.hpp"

#include <algorithm>
#include <stdexcept>

namespace sqflab {

namespace {

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m) {
    return static_cast<uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

uint64_t powmod(uint64_t b, uint64_t e, uint64_t m) {
    uint64_t r = 1 % m;
    b %= m;
    while (e) {
        if (e & 1) r = mulmod(r, b, m);
        b = mulmod(b, b, m);
        e >>= 1;
    }
    return r;
}

uint64_t inv_mod(uint64_t a, uint64_t p) { return powmod(a % p, p - 2, p); } // p prime, p !| a

// inverse mod arbitrary m, gcd(a, m) == 1
uint64_t inv_general(uint64_t a, uint64_t m) {
    int64_t t = 0, newt = 1;
    int64_t r = static_cast<int64_t>(m), newr = static_cast<int64_t>(a % m);
    while (newr != 0) {
        int64_t q = r / newr;
        t -= q * newt; std::swap(t, newt);
        r -= q * newr; std::swap(r, newr);
    }
    if (t < 0) t += static_cast<int64_t>(m);
    return static_cast<uint64_t>(t);
}

// dense polynomial over F_p, lowest degree first, no high zero coefficients
using FpPoly = std::vector<uint64_t>;

void fp_trim(FpPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

int fp_deg(const FpPoly& a) { return static_cast<int>(a.size()) - 1; }

FpPoly reduce_mod(const IntPoly& f, uint64_t m) {
    FpPoly out;
    int d = f.degree();
    out.resize(static_cast<size_t>(d + 1));
    for (int k = 0; k <= d; ++k)
        out[static_cast<size_t>(k)] =
            mpz_fdiv_ui(f.coeff_for_power(k).get_mpz_t(), static_cast<unsigned long>(m));
    fp_trim(out);
    return out;
}

uint64_t fp_eval(const FpPoly& a, uint64_t x, uint64_t m) {
    uint64_t acc = 0;
    for (size_t i = a.size(); i-- > 0;) acc = (mulmod(acc, x, m) + a[i]) % m;
    return acc;
}

void fp_make_monic(FpPoly& a, uint64_t p) {
    if (a.empty()) return;
    uint64_t lc = a.back();
    if (lc == 1) return;
    uint64_t s = inv_mod(lc, p);
    for (auto& c : a) c = mulmod(c, s, p);
}

// remainder of a modulo monic b
FpPoly fp_rem(FpPoly a, const FpPoly& b, uint64_t p) {
    while (fp_deg(a) >= fp_deg(b)) {
        uint64_t c = a.back();
        size_t shift = a.size() - b.size();
        if (c) {
            for (size_t i = 0; i + 1 < b.size(); ++i) {
                uint64_t t = mulmod(c, b[i], p);
                uint64_t& slot = a[i + shift];
                slot = (slot + p - t) % p;
            }
        }
        a.pop_back();
        fp_trim(a);
    }
    return a;
}

FpPoly fp_mul(const FpPoly& a, const FpPoly& b, uint64_t p) {
    if (a.empty() || b.empty()) return {};
    FpPoly out(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (!a[i]) continue;
        for (size_t j = 0; j < b.size(); ++j)
            out[i + j] = (out[i + j] + mulmod(a[i], b[j], p)) % p;
    }
    fp_trim(out);
    return out;
}

FpPoly fp_mulmod(const FpPoly& a, const FpPoly& b, const FpPoly& f, uint64_t p) {
    return fp_rem(fp_mul(a, b, p), f, p);
}

// base^e mod monic f
FpPoly fp_powmod(FpPoly base, uint64_t e, const FpPoly& f, uint64_t p) {
    FpPoly r{1};
    base = fp_rem(std::move(base), f, p);
    while (e) {
        if (e & 1) r = fp_mulmod(r, base, f, p);
        base = fp_mulmod(base, base, f, p);
        e >>= 1;
    }
    return r;
}

FpPoly fp_gcd(FpPoly a, FpPoly b, uint64_t p) {
    while (!b.empty()) {
        fp_make_monic(b, p);
        FpPoly r = fp_rem(std::move(a), b, p);
        a = std::move(b);
        b = std::move(r);
    }
    fp_make_monic(a, p);
    return a;
}

// product of the distinct linear factors of fbar: gcd(fbar, t^p - t)
FpPoly linear_part(const FpPoly& fbar, uint64_t p) {
    FpPoly t{0, 1};
    FpPoly tp = fp_powmod(t, p, fbar, p);
    // tp - t
    if (tp.size() < 2) tp.resize(2, 0);
    tp[1] = (tp[1] + p - 1) % p;
    fp_trim(tp);
    return fp_gcd(fbar, std::move(tp), p);
}

// Splits g (a monic product of distinct linear factors) into roots.
// Deterministic shift schedule s = 0,1,2,...: gcd(g, (t+s)^((p-1)/2) - 1)
// peels off the roots r with r+s a nonzero square mod p.
void split_roots(const FpPoly& g, uint64_t p, std::vector<uint64_t>& out) {
    int d = fp_deg(g);
    if (d <= 0) return;
    if (d == 1) {
        out.push_back((p - g[0] % p) % p);
        return;
    }
    for (uint64_t s = 0;; ++s) {
        FpPoly shifted{s % p, 1};
        FpPoly h = fp_powmod(shifted, (p - 1) / 2, g, p);
        if (h.empty()) h = {0};
        h[0] = (h[0] + p - 1) % p; // h = (t+s)^((p-1)/2) - 1
        fp_trim(h);
        FpPoly d1 = fp_gcd(g, h, p);
        int dd = fp_deg(d1);
        if (dd <= 0 || dd >= d) continue;
        // divide g by d1 via repeated subtraction (both monic): g = d1 * q
        // compute q = g / d1 by synthetic division
        FpPoly q;
        {
            FpPoly rem = g;
            q.assign(g.size() - d1.size() + 1, 0);
            while (fp_deg(rem) >= fp_deg(d1)) {
                uint64_t c = rem.back();
                size_t shift = rem.size() - d1.size();
                q[shift] = c;
                for (size_t i = 0; i + 1 < d1.size(); ++i) {
                    uint64_t t = mulmod(c, d1[i], p);
                    rem[i + shift] = (rem[i + shift] + p - t) % p;
                }
                rem.pop_back();
                fp_trim(rem);
            }
        }
        fp_trim(q);
        split_roots(d1, p, out);
        split_roots(q, p, out);
        return;
    }
}

constexpr uint64_t kSingularExhaustiveCutoff = 100000;
constexpr uint64_t kDegenerateEnumerationCap = uint64_t{1} << 20;

} // namespace

ResidueSet roots_mod_p(const IntPoly& f, uint64_t p, uint64_t scan_cutoff) {
    if (!is_prime_u64(p)) throw std::domain_error("roots_mod_p: p must be prime");
    ResidueSet out;
    out.modulus = p;
    if (f.is_zero()) {
        out.all_residues = true;
        return out;
    }
    FpPoly fbar = reduce_mod(f, p);
    if (fbar.empty()) {
        out.all_residues = true;
        return out;
    }
    if (p <= scan_cutoff) {
        for (uint64_t r = 0; r < p; ++r)
            if (fp_eval(fbar, r, p) == 0) out.roots.push_back(r);
        return out;
    }
    fp_make_monic(fbar, p);
    FpPoly g = linear_part(fbar, p);
    split_roots(g, p, out.roots);
    std::sort(out.roots.begin(), out.roots.end());
    return out;
}

uint64_t count_roots_mod_p(const IntPoly& f, uint64_t p) {
    if (!is_prime_u64(p)) throw std::domain_error("count_roots_mod_p: p must be prime");
    if (f.is_zero()) return p;
    FpPoly fbar = reduce_mod(f, p);
    if (fbar.empty()) return p;
    if (p <= 1000) {
        uint64_t c = 0;
        for (uint64_t r = 0; r < p; ++r)
            if (fp_eval(fbar, r, p) == 0) ++c;
        return c;
    }
    if (fp_deg(fbar) == 1) return 1;
    if (fp_deg(fbar) == 2) {
        // Euler criterion on the reduced discriminant (p odd, p !| lc)
        uint64_t a = fbar[2], b = fbar[1], c = fbar[0];
        uint64_t disc = (mulmod(b, b, p) + p - mulmod(4 % p, mulmod(a, c, p), p)) % p;
        if (disc == 0) return 1;
        return powmod(disc, (p - 1) / 2, p) == 1 ? 2 : 0;
    }
    fp_make_monic(fbar, p);
    return static_cast<uint64_t>(fp_deg(linear_part(fbar, p)));
}

ResidueSet roots_mod_p2(const IntPoly& f, uint64_t p, uint64_t scan_cutoff) {
    if (!is_prime_u64(p)) throw std::domain_error("roots_mod_p2: p must be prime");
    if (p >= (uint64_t{1} << 31)) throw std::domain_error("roots_mod_p2: p^2 exceeds 64 bits");
    uint64_t m = p * p;
    ResidueSet out;
    out.modulus = m;

    if (f.is_zero()) {
        out.all_residues = true;
        return out;
    }
    mpz_class cont = f.content();
    if (mpz_divisible_ui_p(cont.get_mpz_t(), static_cast<unsigned long>(p))) {
        // f == 0 mod p: divide one factor of p out and solve mod p
        mpz_class p2 = mpz_class(static_cast<unsigned long>(p)) * static_cast<unsigned long>(p);
        if (mpz_divisible_p(cont.get_mpz_t(), p2.get_mpz_t())) {
            out.all_residues = true;
            return out;
        }
        std::vector<mpz_class> reduced = f.coeffs();
        for (auto& c : reduced) mpz_divexact_ui(c.get_mpz_t(), c.get_mpz_t(), p);
        ResidueSet base = roots_mod_p(IntPoly(reduced), p, scan_cutoff);
        if (base.all_residues) { // cannot happen: a second factor of p was excluded
            out.all_residues = true;
            return out;
        }
        if (!base.roots.empty() && p > kDegenerateEnumerationCap)
            throw std::domain_error("roots_mod_p2: degenerate residue set too large to enumerate");
        for (uint64_t r : base.roots)
            for (uint64_t k = 0; k < p; ++k) out.roots.push_back(r + k * p);
        std::sort(out.roots.begin(), out.roots.end());
        return out;
    }

    ResidueSet base = roots_mod_p(f, p, scan_cutoff);
    FpPoly f2 = reduce_mod(f, m);
    FpPoly fd = reduce_mod(f.derivative(), p);
    for (uint64_t r : base.roots) {
        uint64_t fr = fp_eval(f2, r, m); // f(r) mod p^2, divisible by p
        uint64_t dr = fp_eval(fd, r, p);
        if (dr != 0) {
            uint64_t k = mulmod((p - (fr / p) % p) % p, inv_mod(dr, p), p);
            out.roots.push_back(r + k * p);
        } else if (p <= kSingularExhaustiveCutoff) {
            for (uint64_t k = 0; k < p; ++k) {
                uint64_t cand = r + k * p;
                if (fp_eval(f2, cand, m) == 0) out.roots.push_back(cand);
            }
        } else {
            // f(r + kp) == f(r) (mod p^2) when f'(r) == 0 (mod p): all p lifts
            // are roots iff p^2 | f(r), none otherwise.
            if (fr == 0) {
                if (p > kDegenerateEnumerationCap)
                    throw std::domain_error("roots_mod_p2: singular residue set too large to enumerate");
                for (uint64_t k = 0; k < p; ++k) out.roots.push_back(r + k * p);
            }
        }
    }
    std::sort(out.roots.begin(), out.roots.end());
    return out;
}

uint64_t rho_p2(const IntPoly& f, uint64_t p) {
    if (f.is_zero() || !f.is_primitive())
        throw std::domain_error("rho_p2: requires primitive f");
    if (!is_prime_u64(p)) throw std::domain_error("rho_p2: p must be prime");
    if (p >= (uint64_t{1} << 31)) {
        // count without ever forming p^2: every root mod p is inspected via
        // the mod-p^2 linearization, using mpz evaluation
        ResidueSet base = roots_mod_p(f, p);
        mpz_class pz = static_cast<unsigned long>(p);
        mpz_class p2 = pz * pz;
        IntPoly deriv = f.derivative();
        uint64_t count = 0;
        for (uint64_t r : base.roots) {
            mpz_class fr = f.eval(mpz_class(static_cast<unsigned long>(r))) % p2;
            mpz_class dr = deriv.eval(mpz_class(static_cast<unsigned long>(r))) % pz;
            if (dr != 0)
                count += 1;
            else if (fr == 0)
                count += p;
        }
        return count;
    }
    // fast path: a prime not dividing disc(f)*lc(f) has rho(p^2) == rho(p)
    // (every root mod p is simple and lifts uniquely); callers on bulk prime
    // ranges use count_roots_mod_p via this route.
    ResidueSet lifted = roots_mod_p2(f, p);
    return lifted.count();
}

namespace {
// distinct prime factors of square-free d; throws if d is not square-free
std::vector<uint64_t> squarefree_prime_parts(uint64_t d, const char* who) {
    std::vector<uint64_t> parts;
    for (const auto& [p, e] : factor(mpz_class(static_cast<unsigned long>(d))).factors) {
        if (e > 1) throw std::domain_error(std::string(who) + ": d must be square-free");
        parts.push_back(mpz_get_ui(p.get_mpz_t()));
    }
    return parts;
}
} // namespace

uint64_t rho(const IntPoly& f, uint64_t d) {
    if (f.is_zero() || !f.is_primitive())
        throw std::domain_error("rho: requires primitive f");
    if (d < 1) throw std::domain_error("rho: requires d >= 1");
    if (d == 1) return 1;
    uint64_t result = 1;
    for (uint64_t p : squarefree_prime_parts(d, "rho")) {
        result *= rho_p2(f, p);
        if (result == 0) return 0;
    }
    return result;
}

ResidueSet roots_mod_dsq(const IntPoly& f, uint64_t d) {
    if (f.is_zero() || !f.is_primitive())
        throw std::domain_error("roots_mod_dsq: requires primitive f");
    if (d < 1) throw std::domain_error("roots_mod_dsq: requires d >= 1");
    if (d >= (uint64_t{1} << 31)) throw std::domain_error("roots_mod_dsq: d^2 exceeds 64 bits");

    ResidueSet acc;
    acc.modulus = 1;
    acc.roots = {0};
    for (uint64_t p : squarefree_prime_parts(d, "roots_mod_dsq")) {
        ResidueSet part = roots_mod_p2(f, p);
        uint64_t pm = part.modulus;
        if (part.roots.empty()) {
            acc.roots.clear();
            acc.modulus *= pm;
            continue;
        }
        std::vector<uint64_t> merged;
        merged.reserve(acc.roots.size() * part.roots.size());
        uint64_t m1 = acc.modulus;
        uint64_t inv_m1 = inv_general(m1 % pm, pm);
        for (uint64_t r1 : acc.roots)
            for (uint64_t r2 : part.roots) {
                uint64_t t = mulmod((r2 + pm - r1 % pm) % pm, inv_m1, pm);
                merged.push_back(r1 + m1 * t);
            }
        acc.roots = std::move(merged);
        acc.modulus = m1 * pm;
    }
    acc.modulus = d * d;
    std::sort(acc.roots.begin(), acc.roots.end());
    return acc;
}

RhoTable::RhoTable(IntPoly f) : poly_(std::move(f)) {
    if (poly_.is_zero() || !poly_.is_primitive())
        throw std::domain_error("RhoTable: requires primitive f");
    disc_ = poly_.degree() >= 1 ? discriminant(poly_) : mpz_class(0);
}

const RhoTable::Entry& RhoTable::get(uint64_t p) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = entries_.find(p);
    if (it != entries_.end()) return it->second;
    Entry e;
    e.singular = disc_ == 0 ||
                 mpz_divisible_ui_p(disc_.get_mpz_t(), static_cast<unsigned long>(p)) ||
                 mpz_divisible_ui_p(poly_.leading().get_mpz_t(), static_cast<unsigned long>(p));
    e.roots_p = roots_mod_p(poly_, p).roots;
    e.roots_p2 = roots_mod_p2(poly_, p).roots;
    return entries_.emplace(p, std::move(e)).first->second;
}

} // namespace sqflab
