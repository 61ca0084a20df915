#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "domclique/analytic.hpp"
#include "domclique/cli.hpp"
#include "domclique/errors.hpp"
#include "domclique/rng.hpp"

using namespace domclique;
using namespace domclique::cli;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result invoke(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> v;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) v.push_back(line);
    return v;
}

std::vector<std::string> cells(const std::string& row) {
    std::vector<std::string> v;
    std::string cell;
    std::istringstream in(row);
    while (std::getline(in, cell, ',')) v.push_back(cell);
    if (!row.empty() && row.back() == ',') v.push_back("");
    return v;
}

// Column index by header name.
std::size_t col(const std::string& name) {
    const auto head = cells(kCsvHeader);
    for (std::size_t i = 0; i < head.size(); ++i)
        if (head[i] == name) return i;
    FAIL("no column " << name);
    return 0;
}

double num(const std::string& row, const std::string& name) { return std::stod(cells(row)[col(name)]); }
std::string field(const std::string& row, const std::string& name) { return cells(row)[col(name)]; }

class ScopedEnv {
public:
    ScopedEnv(const char* name, const char* value) : name_(name) {
        if (const char* old = std::getenv(name)) old_ = old;
        if (value) {
            setenv(name, value, 1);
        } else {
            unsetenv(name);
        }
    }
    ~ScopedEnv() {
        if (old_.empty()) {
            unsetenv(name_);
        } else {
            setenv(name_, old_.c_str(), 1);
        }
    }

private:
    const char* name_;
    std::string old_;
};

}  // namespace

TEST_CASE("CSV header is exactly the documented column list") {
    CHECK(std::string(kCsvHeader) ==
          "command,quantity,n,p,r,r_real,rho,analytic_value,empirical_point,ci_low,ci_high,abs_gap,rel_gap,"
          "trials,excluded_trials,seed,label");
    for (const auto& args : std::vector<std::vector<std::string>>{
             {"figure", "alpha"},
             {"analytic", "--n", "100", "--p", "0.45", "--critical"},
             {"exact", "--n", "4", "--r", "2", "--p", "0.5"},
             {"simulate", "--n", "6", "--p", "0.5", "--r", "2", "--trials", "10"}}) {
        const auto r = invoke(args);
        REQUIRE(r.code == kOk);
        CHECK(lines(r.out).front() == kCsvHeader);
        for (const auto& row : lines(r.out)) CHECK(cells(row).size() == cells(kCsvHeader).size());
        CHECK(r.out.find('\r') == std::string::npos);
    }
}

TEST_CASE("format_double round-trips") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(-2.5e-300) == "-2.5e-300");
    SplitMix64 rng(3);
    for (int i = 0; i < 2000; ++i) {
        const double v = std::ldexp(rng.next_unit(), static_cast<int>(rng.next() % 200) - 100);
        CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
    }
    SweepRecord rec;
    rec.command = "analytic";
    rec.quantity = "alpha";
    rec.p = 0.5;
    rec.analytic_value = 1.0;
    CHECK(to_csv_row(rec) == "analytic,alpha,,0.5,,,,1,,,,,,,,,");
}

TEST_CASE("parse_n_range") {
    CHECK(parse_n_range("1:5:1") == std::vector<std::uint64_t>{1, 2, 3, 4, 5});
    CHECK(parse_n_range("10:30:7") == std::vector<std::uint64_t>{10, 17, 24});
    CHECK(parse_n_range("100:10000:10:geom") == std::vector<std::uint64_t>{100, 1000, 10000});
    CHECK(parse_n_range("1000:1000000:10:geom").size() == 4);
    CHECK(parse_n_range("2:10:1.5:geom") == std::vector<std::uint64_t>{2, 3, 5, 7});
    CHECK(parse_n_range("7:7:1") == std::vector<std::uint64_t>{7});
    CHECK_THROWS_AS(parse_n_range("5:1:1"), DomainError);
    CHECK_THROWS_AS(parse_n_range("1:5:0"), DomainError);
    CHECK_THROWS_AS(parse_n_range("1:10:1:geom"), DomainError);
    CHECK_THROWS_AS(parse_n_range("a:b:c"), DomainError);
    CHECK_THROWS_AS(parse_n_range("1:5"), DomainError);
    CHECK_THROWS_AS(parse_n_range("1:5:1:lin"), DomainError);
}

TEST_CASE("figure alpha: 99 rows of (p, alpha(p))") {
    const auto r = invoke({"figure", "alpha"});
    REQUIRE(r.code == kOk);
    const auto rows = lines(r.out);
    REQUIRE(rows.size() == 100);
    for (std::size_t k = 1; k < rows.size(); ++k) {
        const double p = num(rows[k], "p");
        CHECK(p == doctest::Approx(static_cast<double>(k) / 100.0).epsilon(1e-12));
        CHECK(num(rows[k], "analytic_value") == analytic::alpha(p));
        CHECK(field(rows[k], "quantity") == "alpha");
    }
}

TEST_CASE("figure ratio: three curves over a geometric n grid at p = 0.45") {
    const auto r = invoke({"figure", "ratio"});
    REQUIRE(r.code == kOk);
    const auto rows = lines(r.out);
    REQUIRE(rows.size() == 1 + 3 * 6);
    std::vector<double> top, mid, bottom;
    for (std::size_t k = 1; k < rows.size(); ++k) {
        CHECK(num(rows[k], "p") == 0.45);
        const auto label = field(rows[k], "label");
        const double v = num(rows[k], "analytic_value");
        if (label == "rho=1.9") top.push_back(v);
        else if (label == "rho=hat") mid.push_back(v);
        else if (label == "rho=1.05") bottom.push_back(v);
        else FAIL("unexpected label " << label);
    }
    REQUIRE(top.size() == 6);
    REQUIRE(mid.size() == 6);
    REQUIRE(bottom.size() == 6);
    for (std::size_t i = 0; i < 6; ++i) {
        CHECK(top[i] > mid[i]);
        CHECK(mid[i] > bottom[i]);
    }
    CHECK(num(rows[1], "n") == 100);
    CHECK(num(rows[6], "n") == 10000000);
}

TEST_CASE("analytic phase rows") {
    auto r = invoke({"analytic", "--n", "1000", "--p", "0.6", "--r", "5", "--quantity", "phase"});
    REQUIRE(r.code == kOk);
    auto rows = lines(r.out);
    REQUIRE(rows.size() == 2);
    CHECK(field(rows[1], "label") == "AlmostSurelyDominating");

    r = invoke({"analytic", "--n", "1000", "--p", "0.45", "--rho", "1.5", "--quantity", "phase"});
    REQUIRE(r.code == kOk);
    rows = lines(r.out);
    CHECK(field(rows[1], "label") == "Critical:Dominating");
    CHECK(num(rows[1], "analytic_value") == doctest::Approx(1.3356612173694814).epsilon(1e-12));
}

TEST_CASE("analytic critical selector emits rounded and unrounded sizes") {
    const auto r = invoke({"analytic", "--n", "1000000", "--p", "0.45", "--critical", "--quantity", "ratio"});
    REQUIRE(r.code == kOk);
    const auto rows = lines(r.out);
    REQUIRE(rows.size() == 2);
    CHECK(num(rows[1], "r_real") == doctest::Approx(23.109159420548612).epsilon(1e-12));
    CHECK(field(rows[1], "r") == "23");
    CHECK(num(rows[1], "analytic_value") ==
          doctest::Approx(analytic::ratio_analytic(1000000, 23.109159420548612, 0.45)).epsilon(1e-12));
}

TEST_CASE("analytic offsets") {
    auto r = invoke({"analytic", "--n", "10000", "--p", "0.45", "--critical", "--delta", "-5", "--quantity",
                     "offset_asymptote"});
    REQUIRE(r.code == kOk);
    CHECK(num(lines(r.out)[1], "analytic_value") ==
          doctest::Approx(analytic::ratio_offset_asymptote(0.45, 5, analytic::OffsetKind::MinusDelta)));
    r = invoke({"analytic", "--n", "10000", "--p", "0.45", "--critical", "--lambda", "0", "--quantity",
                "offset_asymptote"});
    REQUIRE(r.code == kOk);
    CHECK(num(lines(r.out)[1], "analytic_value") == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("exact: oracle and closed form agree") {
    auto r = invoke({"exact", "--n", "4", "--r", "2", "--p", "0.5"});
    REQUIRE(r.code == kOk);
    auto rows = lines(r.out);
    REQUIRE(rows.size() >= 2);
    CHECK(field(rows[1], "quantity") == "expected_dominating");
    CHECK(num(rows[1], "empirical_point") == 0.75);
    CHECK(num(rows[1], "analytic_value") == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(num(rows[1], "abs_gap") <= 1e-12);
    CHECK(field(rows[1], "label") == "match");

    r = invoke({"exact", "--n", "5", "--r", "1", "--p", "0.3"});
    REQUIRE(r.code == kOk);
    rows = lines(r.out);
    CHECK(num(rows[1], "empirical_point") == 0.0);
    CHECK(num(rows[1], "analytic_value") == 0.0);

    r = invoke({"exact", "--n", "6", "--r", "3", "--p", "0.45"});
    REQUIRE(r.code == kOk);
    rows = lines(r.out);
    CHECK(num(rows[1], "rel_gap") <= 1e-9);
}

TEST_CASE("exact: tolerance rule behind the mismatch exit code") {
    CHECK(oracle_matches(1.0, 1.0 + 5e-10));
    CHECK_FALSE(oracle_matches(1.0, 1.0 + 5e-9));
    CHECK(oracle_matches(0.0, 1e-13));
    CHECK_FALSE(oracle_matches(0.0, 1e-11));
    CHECK_FALSE(oracle_matches(1e-11, 0.0));
    CHECK(kOracleMismatch == 3);
}

TEST_CASE("exact: n above the exhaustive ceiling is a capacity error") {
    const auto r = invoke({"exact", "--n", "7", "--r", "2", "--p", "0.5"});
    CHECK(r.code == kCapacityError);
    CHECK(r.out.empty());
    // A range crossing the ceiling writes nothing either.
    const auto rr = invoke({"exact", "--n-range", "5:7:1", "--r", "2", "--p", "0.5"});
    CHECK(rr.code == kCapacityError);
    CHECK(rr.out.empty());
}

TEST_CASE("invalid flag combinations exit 2 with one diagnostic line and no CSV") {
    const std::vector<std::vector<std::string>> bad{
        {"analytic", "--n", "100", "--p", "0.5", "--r", "3", "--critical"},
        {"analytic", "--n", "100", "--p", "0.5", "--r", "3", "--rho", "1.5"},
        {"simulate", "--n", "10", "--p", "0.5"},
        {"analytic", "--n", "100", "--p", "0.45", "--r", "3", "--delta", "1"},
        {"analytic", "--n", "100", "--p", "0.45", "--critical", "--delta", "1", "--lambda", "1"},
        {"analytic", "--n", "100", "--n-range", "1:5:1", "--p", "0.5", "--r", "2"},
        {"analytic", "--n", "100", "--p", "0.5", "--p-list", "0.2,0.3", "--r", "2"},
        {"analytic", "--n", "100", "--p", "1.5", "--r", "2"},
        {"analytic", "--n-range", "10:5:1", "--p", "0.5", "--r", "2"},
        {"simulate", "--n", "10", "--p", "0.5", "--r", "11", "--trials", "5"},
        {"simulate", "--n-range", "4:6:1", "--p", "0.5", "--r", "2", "--trials", "5"},
        {"simulate", "--n", "10", "--p", "0.5", "--r", "2", "--trials", "0"},
        {"analytic", "--n", "100", "--p", "0.5", "--rho", "3"},
        {"analytic", "--n", "100", "--p", "0.5", "--r", "3", "--bogus"},
        {"exact", "--n", "4", "--p", "0.5", "--critical"},
        {"figure", "beta"},
        {},
    };
    for (const auto& args : bad) {
        std::string joined;
        for (const auto& a : args) joined += a + " ";
        INFO(joined);
        const auto r = invoke(args);
        CHECK(r.code == kDomainError);
        CHECK(r.out.empty());
        CHECK(lines(r.err).size() == 1);
    }
}

TEST_CASE("analytic quantity failing its domain is an error only when requested") {
    // critical_r is undefined at p = 0.6; the default set skips it.
    auto r = invoke({"analytic", "--n", "100", "--p", "0.6", "--r", "3"});
    CHECK(r.code == kOk);
    CHECK(r.out.find(",critical_r,") == std::string::npos);
    r = invoke({"analytic", "--n", "100", "--p", "0.6", "--r", "3", "--quantity", "critical_r"});
    CHECK(r.code == kDomainError);
    CHECK(r.out.empty());
}

TEST_CASE("simulate n=4, p=0.5, r=2 is within 3 SE of 0.75") {
    const auto r =
        invoke({"simulate", "--n", "4", "--p", "0.5", "--r", "2", "--trials", "1000000", "--seed", "7"});
    REQUIRE(r.code == kOk);
    const auto rows = lines(r.out);
    REQUIRE(rows.size() == 4);
    CHECK(field(rows[1], "quantity") == "mean_dominating");
    const double point = num(rows[1], "empirical_point");
    const double se = (num(rows[1], "ci_high") - num(rows[1], "ci_low")) / (2 * 1.959963984540054);
    CHECK(std::abs(point - 0.75) <= 3 * se);
    CHECK(field(rows[1], "seed") == "7");
    CHECK(field(rows[1], "trials") == "1000000");
    CHECK(field(rows[2], "quantity") == "existence_probability");
    CHECK(field(rows[3], "quantity") == "mean_ratio");
    CHECK(std::stoull(field(rows[3], "excluded_trials")) > 0);
}

TEST_CASE("sweep over the critical band reports ratio estimates next to the analytic value") {
    const auto r = invoke({"sweep", "--n-range", "50:400:2:geom", "--p", "0.45", "--critical", "--trials", "20",
                           "--seed", "3"});
    REQUIRE(r.code == kOk);
    const auto rows = lines(r.out);
    REQUIRE(rows.size() == 1 + 4 * 3);
    std::vector<std::string> ns;
    for (std::size_t k = 1; k < rows.size(); ++k) {
        if (field(rows[k], "quantity") != "mean_ratio") continue;
        ns.push_back(field(rows[k], "n"));
        const double real = num(rows[k], "r_real");
        CHECK(std::stoull(field(rows[k], "r")) == static_cast<std::uint64_t>(std::llround(real)));
        CHECK(num(rows[k], "analytic_value") ==
              doctest::Approx(analytic::ratio_analytic(std::stoull(ns.back()), real, 0.45)).epsilon(1e-12));
        CHECK_FALSE(field(rows[k], "empirical_point").empty());
    }
    CHECK(ns == std::vector<std::string>{"50", "100", "200", "400"});
    // Progress goes to standard error only.
    CHECK(lines(r.err).size() == 4);
    CHECK(r.out.find('[') == std::string::npos);
}

TEST_CASE("sweep output is byte-identical across worker counts and repeated runs") {
    const std::vector<std::string> base{"sweep", "--n-range", "8:32:8", "--p-list", "0.3,0.5", "--r", "3",
                                        "--trials", "300", "--seed", "11"};
    auto with_workers = [&](const char* w) {
        auto a = base;
        a.push_back("--workers");
        a.push_back(w);
        return invoke(a);
    };
    const auto one = with_workers("1");
    REQUIRE(one.code == kOk);
    CHECK(with_workers("8").out == one.out);
    CHECK(with_workers("3").out == one.out);
    CHECK(invoke(base).out == one.out);
}

TEST_CASE("worker-count environment variable") {
    const std::vector<std::string> args{"simulate", "--n", "12", "--p", "0.5", "--r", "3", "--trials", "200"};
    const auto plain = invoke(args);
    {
        ScopedEnv env(kWorkersEnv, "4");
        const auto r = invoke(args);
        CHECK(r.code == kOk);
        CHECK(r.out == plain.out);
    }
    {
        ScopedEnv env(kWorkersEnv, "zero");
        const auto r = invoke(args);
        CHECK(r.code == kDomainError);
        CHECK(r.out.empty());
    }
    {
        // An explicit flag wins over the environment.
        ScopedEnv env(kWorkersEnv, "zero");
        auto a = args;
        a.push_back("--workers");
        a.push_back("2");
        CHECK(invoke(a).out == plain.out);
    }
}

TEST_CASE("--out writes the CSV to a file") {
    const auto path = std::filesystem::temp_directory_path() / "domclique_cli_out_test.csv";
    std::filesystem::remove(path);
    const auto r = invoke({"figure", "alpha", "--out", path.string()});
    REQUIRE(r.code == kOk);
    CHECK(r.out.empty());
    std::ifstream in(path);
    std::stringstream buf;
    buf << in.rdbuf();
    CHECK(buf.str() == invoke({"figure", "alpha"}).out);
    std::filesystem::remove(path);
}
