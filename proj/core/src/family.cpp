#include "sqflab/family.hpp"

#include "sqflab/counting.hpp"
#include "sqflab/density.hpp"
#include "sqflab/parallel.hpp"
#include "sqflab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

namespace sqflab {

namespace {

std::vector<int> checked_indices(const FamilySpec& spec) {
    if (spec.base.is_zero()) throw std::invalid_argument("family: base polynomial is zero");
    std::vector<int> idx = spec.varied;
    std::sort(idx.begin(), idx.end(), std::greater<>());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    if (idx.empty()) throw std::invalid_argument("family: no varied coefficients");
    for (int i : idx)
        if (i < 0 || i > spec.base.degree())
            throw std::invalid_argument("family: varied index outside [0, deg]");
    return idx;
}

// coefficient vector of the base, highest degree first
std::vector<mpz_class> base_vector(const FamilySpec& spec) { return spec.base.coeffs(); }

bool acceptable_member(const std::vector<mpz_class>& coeffs) {
    if (coeffs.front() == 0) return false; // degree must not drop
    mpz_class g = 0;
    for (const auto& c : coeffs) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
        if (g == 1) return true;
    }
    return g == 1;
}

bool poly_vector_less(const IntPoly& a, const IntPoly& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    const auto& ca = a.coeffs();
    const auto& cb = b.coeffs();
    for (size_t i = 0; i < ca.size(); ++i) {
        int c = cmp(ca[i], cb[i]);
        if (c) return c < 0;
    }
    return false;
}

} // namespace

bool family_hypothesis_warning(const FamilySpec& spec) {
    bool varies_constant = false;
    for (int i : spec.varied)
        if (i == 0) varies_constant = true;
    return spec.base.coeff_for_power(0) == 0 && !varies_constant;
}

std::vector<IntPoly> sample_family(const FamilySpec& spec, uint64_t count) {
    if (spec.height < 1) throw std::invalid_argument("sample_family: height >= 1");
    if (count < 1) throw std::invalid_argument("sample_family: count >= 1");
    std::vector<int> idx = checked_indices(spec);
    std::vector<mpz_class> base = base_vector(spec);
    int deg = spec.base.degree();

    SeededRng rng(spec.seed);
    std::vector<IntPoly> out;
    out.reserve(count);
    const uint64_t budget_per_sample = 100000;
    int64_t H = static_cast<int64_t>(spec.height);
    while (out.size() < count) {
        bool accepted = false;
        for (uint64_t attempt = 0; attempt < budget_per_sample; ++attempt) {
            std::vector<mpz_class> c = base;
            for (int i : idx) // decreasing exponent order
                c[static_cast<size_t>(deg - i)] += rng.in_range(-H, H);
            if (!acceptable_member(c)) continue;
            out.emplace_back(std::move(c));
            accepted = true;
            break;
        }
        if (!accepted)
            throw std::runtime_error("sample_family: rejection budget exhausted (empty family?)");
    }
    return out;
}

std::vector<IntPoly> enumerate_family(const FamilySpec& spec) {
    if (spec.height < 1) throw std::invalid_argument("enumerate_family: height >= 1");
    std::vector<int> idx = checked_indices(spec);
    uint64_t side = 2 * spec.height + 1;
    double total = std::pow(static_cast<double>(side), static_cast<double>(idx.size()));
    if (total > 1e7)
        throw std::invalid_argument("enumerate_family: family too large to enumerate; sample instead");

    std::vector<mpz_class> base = base_vector(spec);
    int deg = spec.base.degree();
    std::vector<int64_t> offset(idx.size(), -static_cast<int64_t>(spec.height));
    std::vector<IntPoly> out;
    for (;;) {
        std::vector<mpz_class> c = base;
        for (size_t j = 0; j < idx.size(); ++j)
            c[static_cast<size_t>(deg - idx[j])] += offset[j];
        if (acceptable_member(c)) out.emplace_back(std::move(c));
        // odometer: last index fastest
        size_t j = idx.size();
        while (j-- > 0) {
            if (offset[j] < static_cast<int64_t>(spec.height)) {
                ++offset[j];
                break;
            }
            offset[j] = -static_cast<int64_t>(spec.height);
            if (j == 0) return out;
        }
    }
}

ExperimentReport moments(const std::vector<IntPoly>& fs, uint64_t x,
                         const std::vector<double>& eta_grid) {
    if (x < 1) throw std::invalid_argument("moments: x >= 1");
    for (const auto& f : fs)
        if (f.is_zero() || !f.is_primitive())
            throw std::domain_error("moments: every member must be primitive");

    ExperimentReport rep;
    rep.x = x;
    rep.rows.resize(fs.size());

    for_chunks(0, fs.size(), 1, 0, [&](uint64_t, uint64_t b, uint64_t) {
        const IntPoly& f = fs[b];
        PolyMomentRow row;
        row.poly = f;
        row.count = count_squarefree_values(f, x);
        row.squarefree = f.degree() >= 1 && is_squarefree_poly(f);
        if (row.squarefree) {
            CertifiedValue cf = c_f_certified(f, 10000);
            row.cf_lo = cf.lower;
            row.cf_hi = cf.upper;
            row.cf_mid = cf.midpoint();
            row.residual = std::fabs(static_cast<double>(row.count) / static_cast<double>(x) -
                                     row.cf_mid);
        }
        rep.rows[b] = std::move(row);
    });

    std::sort(rep.rows.begin(), rep.rows.end(),
              [](const PolyMomentRow& a, const PolyMomentRow& b) {
                  return poly_vector_less(a.poly, b.poly);
              });

    double sum1 = 0.0, sum2 = 0.0;
    for (const auto& row : rep.rows) {
        if (!row.squarefree) {
            ++rep.non_squarefree_members;
            continue;
        }
        ++rep.squarefree_members;
        sum1 += row.residual;
        sum2 += row.residual * row.residual;
    }
    if (rep.squarefree_members) {
        sum1 /= static_cast<double>(rep.squarefree_members);
        sum2 /= static_cast<double>(rep.squarefree_members);
    }
    rep.first_moment = sum1;
    rep.second_moment = sum2;

    for (double eta : eta_grid) {
        uint64_t cnt = 0;
        for (const auto& row : rep.rows)
            if (row.squarefree && row.residual > eta) ++cnt;
        rep.exceptional.emplace_back(eta, cnt);
    }
    return rep;
}

namespace {
std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}
} // namespace

std::string report_csv(const ExperimentReport& rep) {
    std::string out = "record,coeffs,squarefree,count,cf_lo,cf_mid,cf_hi,residual,eta,value\n";
    out += "schema,,,,,,,,," + std::to_string(rep.schema_version) + "\n";
    out += "x,,,,,,,,," + std::to_string(rep.x) + "\n";
    for (const auto& row : rep.rows) {
        out += "poly,\"" + row.poly.to_string() + "\",";
        out += row.squarefree ? "1," : "0,";
        out += std::to_string(row.count) + ",";
        if (row.squarefree) {
            out += fmt_double(row.cf_lo) + "," + fmt_double(row.cf_mid) + "," +
                   fmt_double(row.cf_hi) + "," + fmt_double(row.residual) + ",,\n";
        } else {
            out += ",,,,,\n";
        }
    }
    out += "squarefree_members,,,,,,,,," + std::to_string(rep.squarefree_members) + "\n";
    out += "non_squarefree_members,,,,,,,,," + std::to_string(rep.non_squarefree_members) + "\n";
    out += "first_moment,,,,,,,,," + fmt_double(rep.first_moment) + "\n";
    out += "second_moment,,,,,,,,," + fmt_double(rep.second_moment) + "\n";
    for (const auto& [eta, cnt] : rep.exceptional)
        out += "exceptional,,,,,,,," + fmt_double(eta) + "," + std::to_string(cnt) + "\n";
    return out;
}

TypicalSetCounts typical_set_diagnostic(const IntPoly& g, uint64_t x, double kappa, int d) {
    if (!(kappa > 0.0) || !(kappa < static_cast<double>(d)))
        throw std::domain_error("typical_set_diagnostic: requires 0 < kappa < d");
    if (g.coeff_for_power(0) == 0)
        throw std::domain_error("typical_set_diagnostic: requires g(0) != 0");
    if (x < 1) throw std::invalid_argument("typical_set_diagnostic: x >= 1");

    TypicalSetCounts out;
    double dx = static_cast<double>(x);
    double t_size = std::pow(dx, 1.0 - kappa / d);
    double t_gcd = std::pow(dx, kappa / d);
    double t_val = std::pow(dx, kappa + out.epsilon);

    // per-n1 data: size condition and the gcd(n1^d, g(n1)) condition
    std::vector<uint8_t> big(x + 1, 0), val_ok(x + 1, 0);
    for (uint64_t n = 1; n <= x; ++n) {
        big[n] = static_cast<double>(n) > t_size;
        mpz_class nd;
        mpz_ui_pow_ui(nd.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(d));
        mpz_class gn = g.eval(mpz_class(static_cast<unsigned long>(n)));
        mpz_class gc;
        mpz_gcd(gc.get_mpz_t(), nd.get_mpz_t(), gn.get_mpz_t());
        val_ok[n] = mpz_cmp_d(gc.get_mpz_t(), t_val) < 0;
    }

    uint64_t inside = 0;
    for (uint64_t n1 = 1; n1 <= x; ++n1) {
        if (!big[n1] || !val_ok[n1]) continue;
        for (uint64_t n2 = 1; n2 <= x; ++n2) {
            if (!big[n2]) continue;
            uint64_t diff = n1 > n2 ? n1 - n2 : n2 - n1;
            if (!(static_cast<double>(diff) > t_size)) continue;
            if (!(static_cast<double>(std::gcd(n1, n2)) < t_gcd)) continue;
            ++inside;
        }
    }
    out.inside = inside;
    out.outside = x * x - inside;
    return out;
}

BatteryResult corollary_hypothesis_battery(uint64_t D, uint64_t q_max, uint64_t windows,
                                           uint64_t seed, uint64_t lo, uint64_t hi) {
    if (D < 1 || q_max < 1 || windows < 1) throw std::invalid_argument("battery: bad parameters");
    if (lo < 1 || lo > hi) throw std::invalid_argument("battery: need 1 <= lo <= hi");

    BatteryResult out;
    out.D = D;
    SeededRng rng(seed);
    uint64_t range = hi - lo + 1;
    uint64_t len_min = std::max<uint64_t>(100, range / 100);
    uint64_t len_max = std::max(len_min, range / 10);
    len_min = std::min(len_min, range);
    len_max = std::min(len_max, range);

    double sum = 0.0;
    for (uint64_t i = 0; i < windows; ++i) {
        BatteryRow row;
        row.q = 1 + rng.below(q_max);
        row.u = 1 + rng.below(row.q);
        row.gcd_uq = std::gcd(row.u, row.q);
        uint64_t len = len_min + rng.below(len_max - len_min + 1);
        row.lo = lo + rng.below(range - len + 1);
        row.hi = row.lo + len - 1;
        APWindow w(row.lo, row.hi, row.q, row.u % row.q);
        row.residual = residual_ap(w, D);
        sum += row.residual;
        out.max_residual = std::max(out.max_residual, row.residual);
        out.rows.push_back(row);
    }
    out.mean_residual = sum / static_cast<double>(windows);
    return out;
}

} // namespace sqflab
