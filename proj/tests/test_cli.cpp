#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cli.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

using sqflab::cli::dispatch;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = dispatch(args, out, err);
    return {code, out.str(), err.str()};
}

// body = output without the '#' manifest header lines
std::string body_of(const std::string& text) {
    std::istringstream in(text);
    std::string line, body;
    while (std::getline(in, line))
        if (line.empty() || line[0] != '#') body += line + "\n";
    return body;
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    bool quoted = false;
    for (size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') { cur += '"'; ++i; }
                else quoted = false;
            } else cur += c;
        } else if (c == '"') quoted = true;
        else if (c == ',') { cells.push_back(cur); cur.clear(); }
        else cur += c;
    }
    cells.push_back(cur);
    return cells;
}

} // namespace

TEST_CASE("rho subcommand emits the root set") {
    Run r = run({"rho", "--poly", "1,0,1", "--prime", "5"});
    CHECK(r.code == 0);
    CHECK(r.out.find("poly,prime,rho,roots") != std::string::npos);
    CHECK(r.out.find("\"1,0,1\",5,2,7;18") != std::string::npos);
    CHECK(r.out.find("# subcommand: rho") != std::string::npos);
}

TEST_CASE("count and cf subcommands") {
    Run c = run({"count", "--poly", "1,0", "--x", "10"});
    CHECK(c.code == 0);
    CHECK(c.out.find("\"1,0\",10,7") != std::string::npos);

    Run f = run({"cf", "--poly", "1,0", "--cutoff", "100000"});
    CHECK(f.code == 0);
    std::istringstream in(body_of(f.out));
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    auto cells = split_line(row);
    REQUIRE(cells.size() == 5);
    double lo = std::stod(cells[2]), hi = std::stod(cells[3]);
    CHECK(lo <= 0.607927);
    CHECK(0.607927 <= hi);
    CHECK(hi - lo <= 2e-5);
}

TEST_CASE("exit codes") {
    CHECK(run({"count", "--poly", "1,0"}).code == 2);          // missing flag
    CHECK(run({"count", "--nope", "3"}).code == 2);            // unknown flag
    CHECK(run({"bogus"}).code == 2);                           // unknown subcommand
    CHECK(run({"cf", "--poly", "2,2", "--cutoff", "100"}).code == 1);   // domain error
    CHECK(run({"cf", "--poly", "1,0,0", "--cutoff", "100"}).code == 1); // not square-free
    Run bad = run({"count", "--poly", "1,zz", "--x", "5"});
    CHECK(bad.code == 2); // malformed polynomial text
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("manifest checksum matches the body") {
    Run r = run({"ap-count", "--lo", "1", "--hi", "100", "--q", "4", "--a", "1"});
    REQUIRE(r.code == 0);
    std::string body = body_of(r.out);
    auto fnv = [](const std::string& s) {
        uint64_t h = 1469598103934665603ULL;
        for (unsigned char c : s) { h ^= c; h *= 1099511628211ULL; }
        char buf[19];
        std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
        return std::string(buf);
    };
    CHECK(r.out.find("# output-checksum: fnv1a64:" + fnv(body)) != std::string::npos);
}

TEST_CASE("identical manifests give identical bodies across thread counts") {
    std::vector<std::string> args = {"family-moments", "--base", "1,0,0", "--vary", "1,0",
                                     "--height", "500",  "--samples", "12", "--x", "300",
                                     "--eta", "0.1,0.05", "--seed", "42"};
    Run a = run(args);
    std::vector<std::string> args1 = args;
    args1.push_back("--threads");
    args1.push_back("1");
    Run b = run(args1);
    std::vector<std::string> args2 = args;
    args2.push_back("--threads");
    args2.push_back("2");
    Run c = run(args2);
    REQUIRE(a.code == 0);
    CHECK(body_of(a.out) == body_of(b.out));
    CHECK(body_of(b.out) == body_of(c.out));
}

TEST_CASE("json and csv carry the same fields") {
    for (auto args : std::vector<std::vector<std::string>>{
             {"count", "--poly", "1,0,1", "--x", "50"},
             {"rho", "--poly", "1,0,1", "--prime", "13"},
             {"residual", "--lo", "1", "--hi", "5000", "--q", "3", "--a", "1", "--bigd", "80"},
             {"hypothesis-battery", "--qmax", "5", "--windows", "4", "--bigd", "100", "--seed",
              "7"},
             {"family-moments", "--base", "1,0,0", "--vary", "0,1", "--height", "1", "--x",
              "60", "--enumerate", "--seed", "1"}}) {
        Run csv = run(args);
        auto jargs = args;
        jargs.push_back("--json");
        Run js = run(jargs);
        REQUIRE(csv.code == 0);
        REQUIRE(js.code == 0);

        nlohmann::json j = nlohmann::json::parse(js.out);
        std::istringstream in(body_of(csv.out));
        std::string line;
        REQUIRE(std::getline(in, line));
        auto columns = split_line(line);
        REQUIRE(j["columns"].get<std::vector<std::string>>() == columns);
        size_t row_idx = 0;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            auto cells = split_line(line);
            REQUIRE(row_idx < j["rows"].size());
            for (size_t i = 0; i < columns.size(); ++i)
                CHECK(j["rows"][row_idx][columns[i]].get<std::string>() == cells[i]);
            ++row_idx;
        }
        CHECK(row_idx == j["rows"].size());
    }
}

TEST_CASE("output lands in a file with --out") {
    std::string path = "cli_out_test.csv";
    Run r = run({"count", "--poly", "1,0", "--x", "10", "--out", path});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream file(path);
    REQUIRE(file.good());
    std::stringstream ss;
    ss << file.rdbuf();
    CHECK(ss.str().find("\"1,0\",10,7") != std::string::npos);
    file.close();
    std::remove(path.c_str());
}

TEST_CASE("family-moments warns when the classical hypothesis fails") {
    Run r = run({"family-moments", "--base", "1,0", "--vary", "1", "--height", "2", "--samples",
                 "4", "--x", "50", "--seed", "3"});
    CHECK(r.code == 0);
    CHECK(r.err.find("g(0) == 0") != std::string::npos);
}

TEST_CASE("battery honors explicit window ranges") {
    Run r = run({"hypothesis-battery", "--qmax", "3", "--windows", "5", "--bigd", "200",
                 "--seed", "11", "--lo", "1", "--hi", "30000"});
    REQUIRE(r.code == 0);
    // identity region: every residual row ends in 0
    std::istringstream in(body_of(r.out));
    std::string line;
    std::getline(in, line); // header
    int windows = 0;
    while (std::getline(in, line)) {
        auto cells = split_line(line);
        if (cells[0] == "window") {
            CHECK(std::stod(cells[6]) == 0.0);
            ++windows;
        }
    }
    CHECK(windows == 5);
}
