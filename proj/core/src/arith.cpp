#include "sqflab/arith.hpp"

#include "sqflab/parallel.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>

namespace sqflab {

namespace {

constexpr uint32_t kSmallPrimeLimit = 1000003;

uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m) {
    return static_cast<uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

uint64_t powmod_u64(uint64_t b, uint64_t e, uint64_t m) {
    uint64_t r = 1 % m;
    b %= m;
    while (e) {
        if (e & 1) r = mulmod_u64(r, b, m);
        b = mulmod_u64(b, b, m);
        e >>= 1;
    }
    return r;
}

uint64_t isqrt_u64(uint64_t n) {
    if (n == 0) return 0;
    uint64_t r = static_cast<uint64_t>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r > n / r) --r;
    while ((r + 1) <= n / (r + 1)) ++r;
    return r;
}

} // namespace

const std::vector<uint32_t>& small_primes() {
    static const std::vector<uint32_t> table = [] {
        std::vector<bool> comp(kSmallPrimeLimit + 1, false);
        std::vector<uint32_t> primes;
        for (uint32_t i = 2; i <= kSmallPrimeLimit; ++i) {
            if (comp[i]) continue;
            primes.push_back(i);
            for (uint64_t j = uint64_t{i} * i; j <= kSmallPrimeLimit; j += i)
                comp[static_cast<size_t>(j)] = true;
        }
        return primes;
    }();
    return table;
}

bool is_prime_u64(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    uint64_t d = n - 1;
    int s = std::countr_zero(d);
    d >>= s;
    for (uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        uint64_t x = powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) { witness = false; break; }
        }
        if (witness) return false;
    }
    return true;
}

namespace {

bool miller_rabin_mpz(const mpz_class& n, const mpz_class& base) {
    mpz_class d = n - 1;
    unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
    mpz_tdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), s);
    mpz_class x;
    mpz_powm(x.get_mpz_t(), base.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
    if (x == 1 || x == n - 1) return true;
    for (unsigned long i = 1; i < s; ++i) {
        x = (x * x) % n;
        if (x == n - 1) return true;
    }
    return false;
}

// First 13 primes are proven complete witnesses below 3.317e24.
const mpz_class kWitness13Bound("3317044064679887385961981");

} // namespace

bool is_prime(const mpz_class& n) {
    if (n < 2) return false;
    if (mpz_fits_ulong_p(n.get_mpz_t())) return is_prime_u64(mpz_get_ui(n.get_mpz_t()));
    static const int witnesses13[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};
    for (int w : witnesses13)
        if (mpz_divisible_ui_p(n.get_mpz_t(), static_cast<unsigned long>(w))) return false;
    if (n < kWitness13Bound) {
        for (int w : witnesses13)
            if (!miller_rabin_mpz(n, w)) return false;
        return true;
    }
    // documented extension: all prime witnesses up to 2*ceil(ln n)^2
    double ln_n = static_cast<double>(mpz_sizeinbase(n.get_mpz_t(), 2)) * 0.6931471805599453;
    uint64_t bound = 2 * static_cast<uint64_t>(std::ceil(ln_n) * std::ceil(ln_n));
    for (uint32_t p : small_primes()) {
        if (p > bound) break;
        if (!miller_rabin_mpz(n, p)) return false;
    }
    return true;
}

namespace {

// Brent's cycle-finding stage with the fixed schedule x^2 + c, c = 1, 2, ...
// n must be odd, composite, and free of factors below the trial bound.
mpz_class brent_factor(const mpz_class& n) {
    for (unsigned long c = 1;; ++c) {
        mpz_class y = 2, q = 1, g = 1, x, ys;
        uint64_t r = 1;
        const uint64_t m = 128;
        while (g == 1) {
            x = y;
            for (uint64_t i = 0; i < r; ++i) y = (y * y + c) % n;
            uint64_t k = 0;
            while (k < r && g == 1) {
                ys = y;
                uint64_t steps = std::min(m, r - k);
                for (uint64_t i = 0; i < steps; ++i) {
                    y = (y * y + c) % n;
                    mpz_class diff = abs(x - y);
                    q = (q * diff) % n;
                }
                mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
                k += steps;
            }
            r *= 2;
        }
        if (g == n) {
            // backtrack one step at a time
            g = 1;
            while (g == 1) {
                ys = (ys * ys + c) % n;
                mpz_class diff = abs(x - ys);
                mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
            }
        }
        if (g != n) return g;
        // cycle degenerated for this c; try the next polynomial
    }
}

void factor_rec(const mpz_class& n, std::map<mpz_class, int>& out) {
    if (n == 1) return;
    if (is_prime(n)) {
        out[n] += 1;
        return;
    }
    mpz_class d = brent_factor(n);
    factor_rec(d, out);
    factor_rec(mpz_class(n / d), out);
}

} // namespace

FactoredInt factor(const mpz_class& n) {
    if (n < 1) throw std::domain_error("factor: requires n >= 1");
    FactoredInt out;
    out.value = n;
    std::map<mpz_class, int> acc;

    if (mpz_fits_ulong_p(n.get_mpz_t())) {
        uint64_t m = mpz_get_ui(n.get_mpz_t());
        for (uint32_t p : small_primes()) {
            if (uint64_t{p} * p > m) break;
            if (m % p == 0) {
                int e = 0;
                do { m /= p; ++e; } while (m % p == 0);
                acc[mpz_class(static_cast<unsigned long>(p))] = e;
            }
        }
        if (m > 1) {
            if (is_prime_u64(m))
                acc[mpz_class(static_cast<unsigned long>(m))] += 1;
            else
                factor_rec(mpz_class(static_cast<unsigned long>(m)), acc);
        }
    } else {
        mpz_class m = n;
        for (uint32_t p : small_primes()) {
            if (mpz_cmp_ui(m.get_mpz_t(), static_cast<unsigned long>(p) * p) < 0) break;
            if (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
                int e = 0;
                do {
                    mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
                    ++e;
                } while (mpz_divisible_ui_p(m.get_mpz_t(), p));
                acc[mpz_class(static_cast<unsigned long>(p))] = e;
            }
            if (m == 1) break;
        }
        if (m > 1) {
            if (is_prime(m))
                acc[m] += 1;
            else
                factor_rec(m, acc);
        }
    }
    out.factors.assign(acc.begin(), acc.end());
    return out;
}

bool FactoredInt::is_squarefree() const {
    for (const auto& [p, e] : factors)
        if (e > 1) return false;
    return true;
}

bool FactoredInt::is_squarefull() const {
    for (const auto& [p, e] : factors)
        if (e < 2) return false;
    return true;
}

mpz_class FactoredInt::radical() const {
    mpz_class r = 1;
    for (const auto& [p, e] : factors) r *= p;
    return r;
}

std::vector<mpz_class> FactoredInt::divisors() const {
    std::vector<mpz_class> divs{1};
    for (const auto& [p, e] : factors) {
        size_t base = divs.size();
        mpz_class pk = 1;
        for (int i = 1; i <= e; ++i) {
            pk *= p;
            for (size_t j = 0; j < base; ++j) divs.push_back(divs[j] * pk);
        }
    }
    std::sort(divs.begin(), divs.end());
    return divs;
}

// ---------------------------------------------------------------------------
// SieveTable

SieveTable::SieveTable(uint64_t lo, uint64_t hi, std::vector<int8_t> mu,
                       std::vector<uint64_t> sf_bits)
    : lo_(lo), hi_(hi), mu_(std::move(mu)), words_(sf_bits.size()) {
    if (lo_ < 1 || lo_ > hi_) throw std::invalid_argument("SieveTable: bad interval");
    uint64_t len = hi_ - lo_ + 1;
    if (sf_bits.size() != (len + 63) / 64) throw std::invalid_argument("SieveTable: bit table size");
    if (!mu_.empty() && (mu_.size() != len || lo_ != 1))
        throw std::invalid_argument("SieveTable: mu table requires lo == 1 and full length");
    std::shared_ptr<uint64_t[]> buf(new uint64_t[words_]);
    std::copy(sf_bits.begin(), sf_bits.end(), buf.get());
    sf_ = std::move(buf);
}

SieveTable::SieveTable(uint64_t lo, uint64_t hi, std::vector<int8_t> mu,
                       std::shared_ptr<const uint64_t[]> sf_words)
    : lo_(lo), hi_(hi), mu_(std::move(mu)), sf_(std::move(sf_words)) {
    if (lo_ < 1 || lo_ > hi_) throw std::invalid_argument("SieveTable: bad interval");
    uint64_t len = hi_ - lo_ + 1;
    words_ = (len + 63) / 64;
    if (!mu_.empty() && (mu_.size() != len || lo_ != 1))
        throw std::invalid_argument("SieveTable: mu table requires lo == 1 and full length");
}

bool SieveTable::squarefree(uint64_t n) const {
    if (n < lo_ || n > hi_) throw std::out_of_range("SieveTable: n outside interval");
    uint64_t i = n - lo_;
    return (sf_[i >> 6] >> (i & 63)) & 1;
}

int SieveTable::mobius(uint64_t n) const {
    if (mu_.empty()) throw std::logic_error("SieveTable: no mobius values in this table");
    if (n < lo_ || n > hi_) throw std::out_of_range("SieveTable: n outside interval");
    return mu_[n - lo_];
}

uint64_t SieveTable::squarefree_count() const {
    uint64_t c = 0;
    for (size_t i = 0; i < words_; ++i) c += static_cast<uint64_t>(std::popcount(sf_[i]));
    return c;
}

int64_t SieveTable::mertens(uint64_t n) const {
    if (mu_.empty() || lo_ != 1) throw std::logic_error("SieveTable: mertens requires a mobius table");
    if (n > hi_) throw std::out_of_range("SieveTable: n outside interval");
    int64_t s = 0;
    for (uint64_t i = 0; i < n; ++i) s += mu_[i];
    return s;
}

std::string SieveTable::validate() const {
    if (!mu_.empty()) {
        for (uint64_t n = lo_; n <= hi_; ++n) {
            int m = mu_[n - lo_];
            if (m < -1 || m > 1) return "mu-value-range";
            if ((m != 0) != squarefree(n)) return "mu-squared-vs-sf-bit";
        }
    }
    // spot-check the bit table against trial division
    uint64_t len = hi_ - lo_ + 1;
    uint64_t step = std::max<uint64_t>(1, len / 512);
    for (uint64_t n = lo_; n <= hi_; n += step) {
        bool sf = true;
        for (uint32_t p : small_primes()) {
            uint64_t pp = uint64_t{p} * p;
            if (pp > n) break;
            if (n % pp == 0) { sf = false; break; }
        }
        if (sf != squarefree(n)) return "sf-bit-vs-trial-division";
    }
    return {};
}

SieveTable mobius_sieve(uint64_t N) {
    if (N < 1) throw std::invalid_argument("mobius_sieve: N >= 1");
    std::vector<int8_t> mu(N + 1, 0); // index shifted by lo=1 below
    std::vector<bool> comp(N + 1, false);
    std::vector<uint32_t> primes;
    mu[1] = 1;
    for (uint64_t i = 2; i <= N; ++i) {
        if (!comp[i]) {
            primes.push_back(static_cast<uint32_t>(i));
            mu[i] = -1;
        }
        for (uint32_t p : primes) {
            uint64_t ip = i * p;
            if (ip > N) break;
            comp[ip] = true;
            if (i % p == 0) {
                mu[ip] = 0;
                break;
            }
            mu[ip] = -mu[i];
        }
    }
    uint64_t len = N;
    std::vector<int8_t> mu_table(mu.begin() + 1, mu.end());
    std::vector<uint64_t> bits((len + 63) / 64, 0);
    for (uint64_t n = 1; n <= N; ++n)
        if (mu[n] != 0) bits[(n - 1) >> 6] |= uint64_t{1} << ((n - 1) & 63);
    return SieveTable(1, N, std::move(mu_table), std::move(bits));
}

SieveTable squarefree_sieve_interval(uint64_t lo, uint64_t hi, uint64_t segment, int threads) {
    if (lo < 1 || lo > hi) throw std::invalid_argument("squarefree_sieve_interval: need 1 <= lo <= hi");
    uint64_t root = isqrt_u64(hi);
    if (root > kSmallPrimeLimit)
        throw std::invalid_argument("squarefree_sieve_interval: hi beyond the 1e12 prime-table cap");

    uint64_t len = hi - lo + 1;
    size_t words = (len + 63) / 64;
    // left uninitialized on purpose: each chunk first-touches its own words
    std::shared_ptr<uint64_t[]> bits(new uint64_t[words]);
    uint64_t* raw = bits.get();

    const auto& primes = small_primes();
    segment = std::max<uint64_t>(64, segment & ~uint64_t{63});

    for_chunks(0, len, segment, threads, [&](uint64_t, uint64_t b, uint64_t e) {
        std::fill(raw + b / 64, raw + (e + 63) / 64, ~uint64_t{0});
        uint64_t seg_lo = lo + b, seg_hi = lo + e - 1;
        for (uint32_t p : primes) {
            if (p > root) break;
            uint64_t q = uint64_t{p} * p;
            if (q > seg_hi) break;
            uint64_t m = ((seg_lo + q - 1) / q) * q;
            for (; m <= seg_hi; m += q) {
                uint64_t i = m - lo;
                raw[i >> 6] &= ~(uint64_t{1} << (i & 63));
            }
        }
    });
    // clear slack bits past hi so popcounts are exact
    if (len & 63) raw[words - 1] &= (uint64_t{1} << (len & 63)) - 1;
    return SieveTable(lo, hi, {}, std::move(bits));
}

std::vector<uint32_t> spf_sieve(uint32_t N) {
    std::vector<uint32_t> spf(static_cast<size_t>(N) + 1, 0);
    for (uint64_t i = 2; i <= N; ++i) {
        if (spf[i]) continue;
        for (uint64_t j = i; j <= N; j += i)
            if (!spf[j]) spf[j] = static_cast<uint32_t>(i);
    }
    return spf;
}

int mu_squared(const mpz_class& n) {
    if (n == 0) return 0;
    mpz_class m = abs(n);
    if (m == 1) return 1;
    return factor(m).is_squarefree() ? 1 : 0;
}

std::pair<mpz_class, mpz_class> squarefull_decompose(const mpz_class& h) {
    if (h < 1) throw std::domain_error("squarefull_decompose: requires h >= 1");
    FactoredInt f = factor(h);
    mpz_class h1 = 1, h2 = 1;
    for (const auto& [p, e] : f.factors) {
        if (e == 1) {
            h1 *= p;
        } else {
            mpz_class pe;
            mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(e));
            h2 *= pe;
        }
    }
    return {h1, h2};
}

mpz_class radical(const mpz_class& n) {
    if (n < 1) throw std::domain_error("radical: requires n >= 1");
    return factor(n).radical();
}

mpq_class divisor_tail_sum(const mpz_class& q, double z) {
    if (q < 1) throw std::domain_error("divisor_tail_sum: requires q >= 1");
    mpq_class sum = 0;
    for (const mpz_class& d : factor(q).divisors()) {
        if (mpz_cmp_d(d.get_mpz_t(), z) < 0) continue;
        sum += mpq_class(mpz_class(1), d); // 1/d is already canonical

    }
    return sum;
}

// ---------------------------------------------------------------------------
// large_gcd_count

namespace {

// count of n in [-X1, X1] with n == r (mod m), exact i64 arithmetic
int64_t class_count_i64(int64_t X1, int64_t r, int64_t m) {
    auto fdiv = [](int64_t a, int64_t b) {
        int64_t q = a / b, rem = a % b;
        return (rem != 0 && ((rem < 0) != (b < 0))) ? q - 1 : q;
    };
    return fdiv(X1 - r, m) - fdiv(-X1 - 1 - r, m);
}

int64_t egcd_i64(int64_t a, int64_t b, int64_t& x, int64_t& y) {
    if (b == 0) { x = (a >= 0) ? 1 : -1; y = 0; return a >= 0 ? a : -a; }
    int64_t x1, y1;
    int64_t g = egcd_i64(b, a % b, x1, y1);
    x = y1;
    y = x1 - (a / b) * y1;
    return g;
}

struct DivisorMu {
    int64_t d;
    int mu; // 0 when d is not square-free
};

// divisors of C (> 0, fits i64) with their mobius values
std::vector<DivisorMu> divisors_with_mu_i64(int64_t C) {
    std::vector<std::pair<int64_t, int>> pf;
    int64_t m = C;
    for (int64_t p = 2; p * p <= m; p += (p == 2 ? 1 : 2)) {
        if (m % p) continue;
        int e = 0;
        while (m % p == 0) { m /= p; ++e; }
        pf.push_back({p, e});
    }
    if (m > 1) pf.push_back({m, 1});
    std::vector<DivisorMu> divs{{1, 1}};
    for (auto [p, e] : pf) {
        size_t base = divs.size();
        int64_t pk = 1;
        for (int i = 1; i <= e; ++i) {
            pk *= p;
            for (size_t j = 0; j < base; ++j)
                divs.push_back({divs[j].d * pk, i == 1 ? -divs[j].mu : 0});
        }
    }
    std::sort(divs.begin(), divs.end(), [](const DivisorMu& a, const DivisorMu& b) { return a.d < b.d; });
    return divs;
}

int64_t large_gcd_count_i64(int64_t a, int64_t b, int64_t c, double x1, double x2) {
    int64_t X1 = static_cast<int64_t>(std::floor(x1));
    int64_t C = c < 0 ? -c : c;
    auto divs = divisors_with_mu_i64(C);

    // weight w(e) = sum over d | e, d > x2 of mu(e/d); answer = sum w(e)*M(e)
    int64_t total = 0;
    for (const auto& [e, mu_e] : divs) {
        (void)mu_e;
        int w = 0;
        for (const auto& [d, mu_d] : divs) {
            if (d > e) break;
            if (e % d) continue;
            if (static_cast<double>(d) <= x2) continue;
            int64_t quot = e / d;
            for (const auto& dm : divs)
                if (dm.d == quot) { w += dm.mu; break; }
        }
        if (w == 0) continue;
        // M(e) = #{|n| <= X1 : a n == -b (mod e)}
        int64_t am = ((a % e) + e) % e;
        int64_t g = std::gcd(am == 0 ? e : am, e);
        if ((((-b) % g) + g) % g != 0) continue;
        int64_t m = e / g;
        int64_t count;
        if (m == 1) {
            count = 2 * X1 + 1;
        } else {
            int64_t a2 = (am / g) % m;
            int64_t t = (((-b / g) % m) + m) % m;
            int64_t x, y;
            egcd_i64(a2, m, x, y);
            int64_t inv = ((x % m) + m) % m;
            int64_t r = static_cast<int64_t>(mulmod_u64(static_cast<uint64_t>(t),
                                                        static_cast<uint64_t>(inv),
                                                        static_cast<uint64_t>(m)));
            count = class_count_i64(X1, r, m);
        }
        total += w * count;
    }
    return total;
}

mpz_class large_gcd_count_mpz(const mpz_class& a, const mpz_class& b, const mpz_class& c,
                              double x1, double x2) {
    mpz_class X1;
    mpz_set_d(X1.get_mpz_t(), std::floor(x1));
    mpz_class C = abs(c);
    auto divs = factor(C).divisors();
    std::map<mpz_class, int> mu_of;
    for (const auto& d : divs) {
        FactoredInt fd = factor(d);
        mu_of[d] = fd.is_squarefree() ? ((fd.factors.size() % 2) ? -1 : 1) : 0;
    }
    mpz_class total = 0;
    for (const auto& e : divs) {
        int w = 0;
        for (const auto& d : divs) {
            if (d > e || !mpz_divisible_p(e.get_mpz_t(), d.get_mpz_t())) continue;
            if (mpz_cmp_d(d.get_mpz_t(), x2) <= 0) continue;
            w += mu_of[mpz_class(e / d)];
        }
        if (w == 0) continue;
        mpz_class g, am = a % e;
        if (am < 0) am += e;
        if (am == 0) am = e;
        mpz_gcd(g.get_mpz_t(), am.get_mpz_t(), e.get_mpz_t());
        if (!mpz_divisible_p(b.get_mpz_t(), g.get_mpz_t())) continue;
        mpz_class m = e / g;
        mpz_class count;
        if (m == 1) {
            count = 2 * X1 + 1;
        } else {
            mpz_class a2 = (am / g) % m;
            mpz_class t = (-b / g) % m;
            if (t < 0) t += m;
            mpz_class inv;
            mpz_invert(inv.get_mpz_t(), a2.get_mpz_t(), m.get_mpz_t());
            mpz_class r = (t * inv) % m;
            mpz_class hi_q, lo_q;
            mpz_class num1 = X1 - r, num2 = -X1 - 1 - r;
            mpz_fdiv_q(hi_q.get_mpz_t(), num1.get_mpz_t(), m.get_mpz_t());
            mpz_fdiv_q(lo_q.get_mpz_t(), num2.get_mpz_t(), m.get_mpz_t());
            count = hi_q - lo_q;
        }
        total += w * count;
    }
    return total;
}

} // namespace

mpz_class large_gcd_count(const mpz_class& a, const mpz_class& b, const mpz_class& c,
                          double x1, double x2) {
    if (a == 0 || c == 0)
        throw std::domain_error("large_gcd_count: requires a != 0 and c != 0");
    if (mpz_fits_slong_p(a.get_mpz_t()) && mpz_fits_slong_p(b.get_mpz_t()) &&
        mpz_fits_slong_p(c.get_mpz_t()) && std::abs(x1) < 9e15) {
        return large_gcd_count_i64(mpz_get_si(a.get_mpz_t()), mpz_get_si(b.get_mpz_t()),
                                   mpz_get_si(c.get_mpz_t()), x1, x2);
    }
    return large_gcd_count_mpz(a, b, c, x1, x2);
}

} // namespace sqflab
