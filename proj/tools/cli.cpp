#include "cli.hpp"

#include "sqflab/arith.hpp"
#include "sqflab/counting.hpp"
#include "sqflab/density.hpp"
#include "sqflab/family.hpp"
#include "sqflab/intpoly.hpp"
#include "sqflab/parallel.hpp"
#include "sqflab/roots.hpp"
#include "sqflab/verify.hpp"
#include "sqflab/version.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

namespace sqflab::cli {

namespace {

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

uint64_t fnv1a64(const std::string& s) {
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string hex64(uint64_t v) {
    char buf[19];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string csv_cell(const std::string& v) {
    if (v.find_first_of(",\"") == std::string::npos) return v;
    std::string out = "\"";
    for (char c : v) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

// splits one CSV line of our own output format (quotes only, no newlines)
std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    bool quoted = false;
    for (size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            cells.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    cells.push_back(cur);
    return cells;
}

struct Result {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    std::string to_csv() const {
        std::string body;
        for (size_t i = 0; i < columns.size(); ++i) {
            if (i) body += ',';
            body += csv_cell(columns[i]);
        }
        body += '\n';
        for (const auto& row : rows) {
            for (size_t i = 0; i < row.size(); ++i) {
                if (i) body += ',';
                body += csv_cell(row[i]);
            }
            body += '\n';
        }
        return body;
    }

    static Result from_csv(const std::string& body) {
        Result r;
        std::istringstream in(body);
        std::string line;
        if (std::getline(in, line)) r.columns = split_csv_line(line);
        while (std::getline(in, line))
            if (!line.empty()) r.rows.push_back(split_csv_line(line));
        return r;
    }
};

struct Invocation {
    std::string subcommand;
    std::map<std::string, std::string> args; // canonicalized
    bool has_seed = false;
    uint64_t seed = 0;
    Result result;
    std::string csv_body; // when set, emitted verbatim instead of result.to_csv()
    std::string plain;    // non-tabular output (verify)
};

std::string canonical_args(const Invocation& inv) {
    std::string s;
    for (const auto& [k, v] : inv.args) {
        if (!s.empty()) s += ' ';
        s += "--" + k + "=" + v;
    }
    return s;
}

void emit(const Invocation& inv, bool json, std::ostream& out) {
    std::string body = !inv.plain.empty()
                           ? inv.plain
                           : (!inv.csv_body.empty() ? inv.csv_body : inv.result.to_csv());
    std::string in_sum = hex64(fnv1a64(inv.subcommand + "\n" + canonical_args(inv)));
    std::string out_sum = hex64(fnv1a64(body));
    if (json) {
        nlohmann::json j;
        j["manifest"] = {{"tool", "sqflab"},
                         {"version", SQFLAB_VERSION},
                         {"subcommand", inv.subcommand},
                         {"args", inv.args},
                         {"input_checksum", "fnv1a64:" + in_sum},
                         {"output_checksum", "fnv1a64:" + out_sum}};
        if (inv.has_seed) j["manifest"]["seed"] = inv.seed;
        if (!inv.plain.empty()) {
            j["text"] = inv.plain;
        } else {
            Result r = !inv.csv_body.empty() ? Result::from_csv(inv.csv_body) : inv.result;
            j["columns"] = r.columns;
            nlohmann::json rows = nlohmann::json::array();
            for (const auto& row : r.rows) {
                nlohmann::json obj;
                for (size_t i = 0; i < r.columns.size() && i < row.size(); ++i)
                    obj[r.columns[i]] = row[i];
                rows.push_back(std::move(obj));
            }
            j["rows"] = std::move(rows);
        }
        out << j.dump(2) << "\n";
        return;
    }
    out << "# sqflab " << SQFLAB_VERSION << "\n";
    out << "# subcommand: " << inv.subcommand << "\n";
    out << "# args: " << canonical_args(inv) << "\n";
    if (inv.has_seed) out << "# seed: " << inv.seed << "\n";
    out << "# input-checksum: fnv1a64:" << in_sum << "\n";
    out << "# output-checksum: fnv1a64:" << out_sum << "\n";
    out << body;
}

std::string join_u64(const std::vector<uint64_t>& v) {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) s += ';';
        s += std::to_string(v[i]);
    }
    return s;
}

} // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"square-free polynomial value laboratory"};
    app.require_subcommand(1);

    bool json = false;
    std::string out_path;
    int threads = 0;
    app.add_flag("--json", json, "emit JSON instead of CSV");
    app.add_option("--out", out_path, "write output to a file instead of stdout");
    app.add_option("--threads", threads, "worker threads (default: all; SQFLAB_THREADS honored)");

    Invocation inv;
    std::function<void()> run; // heavy work deferred until after parsing

    // --- rho ---------------------------------------------------------------
    std::string rho_poly;
    uint64_t rho_prime = 0;
    auto* c_rho = app.add_subcommand("rho", "roots of f mod p^2 and their count");
    c_rho->add_option("--poly", rho_poly, "coefficients, highest degree first")->required();
    c_rho->add_option("--prime", rho_prime, "prime p")->required();
    c_rho->callback([&] { run = [&] {
        inv.subcommand = "rho";
        inv.args = {{"poly", rho_poly}, {"prime", std::to_string(rho_prime)}};
        IntPoly f = IntPoly::from_string(rho_poly);
        ResidueSet rs = roots_mod_p2(f, rho_prime);
        inv.result.columns = {"poly", "prime", "rho", "roots"};
        inv.result.rows = {{f.to_string(), std::to_string(rho_prime),
                            std::to_string(rs.count()),
                            rs.all_residues ? "all" : join_u64(rs.roots)}};
    }; });

    // --- cf ----------------------------------------------------------------
    std::string cf_poly;
    uint64_t cf_cutoff = 0, cf_exact = 10000;
    auto* c_cf = app.add_subcommand("cf", "certified bracket for the square-free density constant");
    c_cf->add_option("--poly", cf_poly)->required();
    c_cf->add_option("--cutoff", cf_cutoff, "prime cutoff P")->required();
    c_cf->add_option("--exact-cutoff", cf_exact, "switch point from rational to directed rounding");
    c_cf->callback([&] { run = [&] {
        inv.subcommand = "cf";
        inv.args = {{"poly", cf_poly},
                    {"cutoff", std::to_string(cf_cutoff)},
                    {"exact-cutoff", std::to_string(cf_exact)}};
        IntPoly f = IntPoly::from_string(cf_poly);
        CertifiedValue cv = c_f_certified(f, cf_cutoff, cf_exact);
        std::string bad;
        for (size_t i = 0; i < cv.bad_primes.size(); ++i) {
            if (i) bad += ';';
            bad += cv.bad_primes[i].get_str();
        }
        inv.result.columns = {"poly", "cutoff", "lower", "upper", "bad_primes"};
        inv.result.rows = {{f.to_string(), std::to_string(cf_cutoff), fmt_double(cv.lower),
                            fmt_double(cv.upper), bad}};
    }; });

    // --- count ---------------------------------------------------------------
    std::string cnt_poly;
    uint64_t cnt_x = 0;
    auto* c_cnt = app.add_subcommand("count", "exact count of n <= x with f(n) square-free");
    c_cnt->add_option("--poly", cnt_poly)->required();
    c_cnt->add_option("--x", cnt_x)->required();
    c_cnt->callback([&] { run = [&] {
        inv.subcommand = "count";
        inv.args = {{"poly", cnt_poly}, {"x", std::to_string(cnt_x)}};
        IntPoly f = IntPoly::from_string(cnt_poly);
        uint64_t c = count_squarefree_values(f, cnt_x);
        inv.result.columns = {"poly", "x", "count"};
        inv.result.rows = {{f.to_string(), std::to_string(cnt_x), std::to_string(c)}};
    }; });

    // --- kd-sum -------------------------------------------------------------
    std::string kd_poly;
    uint64_t kd_x = 0, kd_D = 0;
    auto* c_kd = app.add_subcommand("kd-sum", "exact truncated-sieve sum over polynomial values");
    c_kd->add_option("--poly", kd_poly)->required();
    c_kd->add_option("--x", kd_x)->required();
    c_kd->add_option("--bigd", kd_D, "truncation D (default: ceil(x^0.9))");
    c_kd->callback([&] { run = [&] {
        uint64_t D = kd_D ? kd_D : default_D(kd_x);
        inv.subcommand = "kd-sum";
        inv.args = {{"poly", kd_poly}, {"x", std::to_string(kd_x)}, {"bigd", std::to_string(D)}};
        IntPoly f = IntPoly::from_string(kd_poly);
        mpz_class s = sum_kD_values(f, kd_x, D);
        inv.result.columns = {"poly", "x", "bigd", "sum"};
        inv.result.rows = {{f.to_string(), std::to_string(kd_x), std::to_string(D), s.get_str()}};
    }; });

    // --- ap-count -------------------------------------------------------------
    uint64_t ap_lo = 0, ap_hi = 0, ap_q = 1, ap_a = 0, ap_D = 0;
    auto* c_ap = app.add_subcommand("ap-count", "square-free count in an arithmetic progression window");
    c_ap->add_option("--lo", ap_lo)->required();
    c_ap->add_option("--hi", ap_hi)->required();
    c_ap->add_option("--q", ap_q)->required();
    c_ap->add_option("--a", ap_a)->required();
    c_ap->add_option("--bigd", ap_D, "also report the truncated-sieve sum at this D");
    c_ap->callback([&] { run = [&] {
        inv.subcommand = "ap-count";
        inv.args = {{"lo", std::to_string(ap_lo)},
                    {"hi", std::to_string(ap_hi)},
                    {"q", std::to_string(ap_q)},
                    {"a", std::to_string(ap_a)}};
        APWindow w(ap_lo, ap_hi, ap_q, ap_a);
        uint64_t c = count_squarefree_ap(w);
        if (ap_D) {
            inv.args["bigd"] = std::to_string(ap_D);
            KDApSum kd = sum_kD_ap(w, ap_D);
            inv.result.columns = {"lo", "hi", "q", "a", "count", "bigd", "kd_sum", "h2_below_D2"};
            inv.result.rows = {{std::to_string(ap_lo), std::to_string(ap_hi), std::to_string(ap_q),
                                std::to_string(ap_a), std::to_string(c), std::to_string(ap_D),
                                kd.sum.get_str(), kd.h2_primes_below_D2 ? "1" : "0"}};
        } else {
            inv.result.columns = {"lo", "hi", "q", "a", "count"};
            inv.result.rows = {{std::to_string(ap_lo), std::to_string(ap_hi), std::to_string(ap_q),
                                std::to_string(ap_a), std::to_string(c)}};
        }
    }; });

    // --- residual -------------------------------------------------------------
    uint64_t rs_lo = 0, rs_hi = 0, rs_q = 1, rs_a = 0, rs_D = 0;
    auto* c_rs = app.add_subcommand("residual", "normalized gap between mu^2 and k_D counts on a window");
    c_rs->add_option("--lo", rs_lo)->required();
    c_rs->add_option("--hi", rs_hi)->required();
    c_rs->add_option("--q", rs_q)->required();
    c_rs->add_option("--a", rs_a)->required();
    c_rs->add_option("--bigd", rs_D)->required();
    c_rs->callback([&] { run = [&] {
        inv.subcommand = "residual";
        inv.args = {{"lo", std::to_string(rs_lo)},
                    {"hi", std::to_string(rs_hi)},
                    {"q", std::to_string(rs_q)},
                    {"a", std::to_string(rs_a)},
                    {"bigd", std::to_string(rs_D)}};
        APWindow w(rs_lo, rs_hi, rs_q, rs_a);
        SieveTable tab = squarefree_sieve_interval(w.lo, w.hi);
        uint64_t sf = count_squarefree_ap(w, tab);
        KDApSum kd = sum_kD_ap(w, rs_D);
        double res = residual_ap(w, rs_D, tab);
        inv.result.columns = {"lo", "hi", "q", "a", "bigd", "sf_count", "kd_sum", "residual"};
        inv.result.rows = {{std::to_string(rs_lo), std::to_string(rs_hi), std::to_string(rs_q),
                            std::to_string(rs_a), std::to_string(rs_D), std::to_string(sf),
                            kd.sum.get_str(), fmt_double(res)}};
    }; });

    // --- family-moments ---------------------------------------------------------
    std::string fm_base, fm_vary, fm_eta = "0.05";
    uint64_t fm_height = 0, fm_samples = 0, fm_x = 0, fm_seed = 0;
    bool fm_enumerate = false;
    auto* c_fm = app.add_subcommand("family-moments",
                                    "square-free counts, residuals and moments over a coefficient family");
    c_fm->add_option("--base", fm_base, "base polynomial g")->required();
    c_fm->add_option("--vary", fm_vary, "comma-separated exponents to perturb")->required();
    c_fm->add_option("--height", fm_height)->required();
    c_fm->add_option("--samples", fm_samples, "sample count (ignored with --enumerate)");
    c_fm->add_option("--x", fm_x)->required();
    c_fm->add_option("--eta", fm_eta, "comma-separated exceptional thresholds");
    c_fm->add_option("--seed", fm_seed);
    c_fm->add_flag("--enumerate", fm_enumerate, "enumerate the whole family instead of sampling");
    c_fm->callback([&] { run = [&] {
        inv.subcommand = "family-moments";
        inv.has_seed = true;
        inv.seed = fm_seed;
        inv.args = {{"base", fm_base},       {"vary", fm_vary},
                    {"height", std::to_string(fm_height)}, {"samples", std::to_string(fm_samples)},
                    {"x", std::to_string(fm_x)},           {"eta", fm_eta},
                    {"seed", std::to_string(fm_seed)},
                    {"enumerate", fm_enumerate ? "1" : "0"}};
        FamilySpec spec;
        spec.base = IntPoly::from_string(fm_base);
        for (const auto& tok : split_csv_line(fm_vary))
            spec.varied.push_back(std::stoi(tok));
        spec.height = fm_height;
        spec.seed = fm_seed;
        if (family_hypothesis_warning(spec))
            err << "warning: base has g(0) == 0 and the constant coefficient is not varied\n";
        std::vector<IntPoly> fs;
        if (fm_enumerate) {
            fs = enumerate_family(spec);
        } else {
            if (!fm_samples) throw CLI::ValidationError("--samples required unless --enumerate");
            fs = sample_family(spec, fm_samples);
        }
        std::vector<double> etas;
        for (const auto& tok : split_csv_line(fm_eta)) etas.push_back(std::stod(tok));
        inv.csv_body = report_csv(moments(fs, fm_x, etas));
    }; });

    // --- diagnose-m ---------------------------------------------------------
    std::string dm_base;
    uint64_t dm_x = 0;
    double dm_kappa = 0.0;
    int dm_d = 0;
    auto* c_dm = app.add_subcommand("diagnose-m", "typical-pair census for the averaging argument");
    c_dm->add_option("--base", dm_base)->required();
    c_dm->add_option("--x", dm_x)->required();
    c_dm->add_option("--kappa", dm_kappa)->required();
    c_dm->add_option("--d", dm_d, "degree parameter (default: deg of base)");
    c_dm->callback([&] { run = [&] {
        IntPoly g = IntPoly::from_string(dm_base);
        int d = dm_d ? dm_d : g.degree();
        inv.subcommand = "diagnose-m";
        inv.args = {{"base", dm_base},
                    {"x", std::to_string(dm_x)},
                    {"kappa", fmt_double(dm_kappa)},
                    {"d", std::to_string(d)}};
        TypicalSetCounts t = typical_set_diagnostic(g, dm_x, dm_kappa, d);
        inv.result.columns = {"base", "x", "kappa", "d", "epsilon", "inside", "outside"};
        inv.result.rows = {{g.to_string(), std::to_string(dm_x), fmt_double(dm_kappa),
                            std::to_string(d), fmt_double(t.epsilon), std::to_string(t.inside),
                            std::to_string(t.outside)}};
    }; });

    // --- hypothesis-battery ----------------------------------------------------
    uint64_t hb_qmax = 0, hb_windows = 0, hb_D = 0, hb_seed = 0, hb_lo = 0, hb_hi = 0;
    auto* c_hb = app.add_subcommand("hypothesis-battery",
                                    "seeded residual sweep over random progression windows");
    c_hb->add_option("--qmax", hb_qmax)->required();
    c_hb->add_option("--windows", hb_windows)->required();
    c_hb->add_option("--bigd", hb_D)->required();
    c_hb->add_option("--seed", hb_seed)->required();
    c_hb->add_option("--lo", hb_lo, "window range start (default 1)");
    c_hb->add_option("--hi", hb_hi, "window range end (default 100*D^2)");
    c_hb->callback([&] { run = [&] {
        uint64_t lo = hb_lo ? hb_lo : 1;
        uint64_t hi = hb_hi ? hb_hi : 100 * hb_D * hb_D;
        inv.subcommand = "hypothesis-battery";
        inv.has_seed = true;
        inv.seed = hb_seed;
        inv.args = {{"qmax", std::to_string(hb_qmax)}, {"windows", std::to_string(hb_windows)},
                    {"bigd", std::to_string(hb_D)},    {"seed", std::to_string(hb_seed)},
                    {"lo", std::to_string(lo)},        {"hi", std::to_string(hi)}};
        BatteryResult b = corollary_hypothesis_battery(hb_D, hb_qmax, hb_windows, hb_seed, lo, hi);
        inv.result.columns = {"record", "q", "u", "gcd_uq", "lo", "hi", "residual", "value"};
        for (const auto& row : b.rows)
            inv.result.rows.push_back({"window", std::to_string(row.q), std::to_string(row.u),
                                       std::to_string(row.gcd_uq), std::to_string(row.lo),
                                       std::to_string(row.hi), fmt_double(row.residual), ""});
        inv.result.rows.push_back({"max", "", "", "", "", "", "", fmt_double(b.max_residual)});
        inv.result.rows.push_back({"mean", "", "", "", "", "", "", fmt_double(b.mean_residual)});
    }; });

    // --- verify ----------------------------------------------------------------
    std::string vf_level = "quick";
    auto* c_vf = app.add_subcommand("verify", "run the example checks (quick) or the full acceptance battery");
    c_vf->add_option("level", vf_level)->check(CLI::IsMember({"quick", "full"}));
    int verify_failures = 0;
    c_vf->callback([&] { run = [&] {
        inv.subcommand = "verify";
        inv.args = {{"level", vf_level}};
        auto results = quick_checks();
        if (vf_level == "full") {
            auto acc = acceptance_checks();
            results.insert(results.end(), acc.begin(), acc.end());
        }
        std::string text;
        for (const auto& r : results) {
            if (!r.pass) ++verify_failures;
            char line[512];
            std::snprintf(line, sizeof(line), "%s %s (%.2fs): %s\n", r.pass ? "PASS" : "FAIL",
                          r.name.c_str(), r.seconds, r.detail.c_str());
            text += line;
        }
        text += (verify_failures ? "FAILURES: " + std::to_string(verify_failures) + "\n"
                                 : "ALL CHECKS PASSED\n");
        inv.plain = text;
    }; });

    // let trailing global flags (--json, --out, --threads) reach the parent
    for (CLI::App* sub : app.get_subcommands([](const CLI::App*) { return true; }))
        sub->fallthrough();

    std::vector<std::string> argv_rev(args.rbegin(), args.rend());
    try {
        app.parse(argv_rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help() << "\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    }

    if (threads > 0) set_thread_budget(threads);

    try {
        if (run) run();
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }

    if (!out_path.empty()) {
        std::ofstream file(out_path);
        if (!file) {
            err << "error: cannot open " << out_path << "\n";
            return 1;
        }
        emit(inv, json, file);
    } else {
        emit(inv, json, out);
    }
    return verify_failures ? 1 : 0;
}

} // namespace sqflab::cli
