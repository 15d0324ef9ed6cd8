#pragma once

#include "sqflab/intpoly.hpp"

#include <cstdint>
#include <vector>

namespace sqflab {

// Perturbation family around a base polynomial g: members agree with g except
// at the coefficients of t^i for i in `varied`, where they range over
// [c_i - height, c_i + height]; members must have coprime coefficients and
// keep the degree of g.
struct FamilySpec {
    IntPoly base;
    std::vector<int> varied; // exponents of t, each in [0, deg(base)]
    uint64_t height = 1;
    uint64_t seed = 0;
};

// True when the classical hypothesis g(0) != 0 fails and the constant
// coefficient is not perturbed (members then share the root n = 0).
bool family_hypothesis_warning(const FamilySpec& spec);

// `count` members drawn uniformly with rejection, deterministic for a given
// seed. Draws fill the varied coefficients in decreasing exponent order.
// Throws std::runtime_error if the rejection budget is exhausted.
std::vector<IntPoly> sample_family(const FamilySpec& spec, uint64_t count);

// Every member, odometer order over the varied offsets (decreasing exponent
// fastest last). Guarded against family sizes above 1e7.
std::vector<IntPoly> enumerate_family(const FamilySpec& spec);

struct PolyMomentRow {
    IntPoly poly;
    uint64_t count = 0;    // #{n <= x : f(n) square-free}
    bool squarefree = true; // disc(f) != 0
    double cf_lo = 0.0, cf_mid = 0.0, cf_hi = 0.0;
    double residual = 0.0; // |count/x - cf_mid| (square-free members only)
};

struct ExperimentReport {
    uint64_t schema_version = 1;
    uint64_t x = 0;
    std::vector<PolyMomentRow> rows; // sorted by coefficient vector
    uint64_t squarefree_members = 0;
    uint64_t non_squarefree_members = 0; // reported with counts only
    double first_moment = 0.0;  // mean residual over square-free members
    double second_moment = 0.0; // mean squared residual
    std::vector<std::pair<double, uint64_t>> exceptional; // eta -> #{residual > eta}
};

// Per-polynomial square-free counts against the certified density midpoint
// (cutoff 1e4, discriminant primes folded in exactly), residuals, first and
// second moments, and exceptional counts for each eta. Members with zero
// discriminant land in a separate bucket with their count only.
ExperimentReport moments(const std::vector<IntPoly>& fs, uint64_t x,
                         const std::vector<double>& eta_grid);

// Canonical CSV body for a report: one `poly` row per member (sorted), then
// moment and exceptional rows. Byte-identical for identical inputs at any
// thread count; the CLI prepends its manifest header to this body.
std::string report_csv(const ExperimentReport& rep);

struct TypicalSetCounts {
    uint64_t inside = 0;
    uint64_t outside = 0;
    double epsilon = 0.01; // fixed offset used in the gcd(n1^d, g(n1)) bound
};

// Exact census of pairs (n1, n2) in [1,x]^2 against the three typicality
// conditions (size/separation, pair gcd, gcd of n1^d with g(n1)).
// Requires 0 < kappa < d and g(0) != 0.
TypicalSetCounts typical_set_diagnostic(const IntPoly& g, uint64_t x, double kappa, int d);

struct BatteryRow {
    uint64_t q = 1;
    uint64_t u = 0; // residue as drawn, in [1, q]
    uint64_t gcd_uq = 1;
    uint64_t lo = 1, hi = 1;
    double residual = 0.0;
};

struct BatteryResult {
    uint64_t D = 1;
    std::vector<BatteryRow> rows;
    double max_residual = 0.0;
    double mean_residual = 0.0;
};

// Seeded sweep of residual_ap over random (q, u, window) triples with
// q <= q_max and windows inside [lo, hi]. Window lengths are drawn from
// [max(100, R/100), max(.., R/10)] with R = hi - lo + 1.
BatteryResult corollary_hypothesis_battery(uint64_t D, uint64_t q_max, uint64_t windows,
                                           uint64_t seed, uint64_t lo, uint64_t hi);

} // namespace sqflab
