#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace domclique::cli {

enum ExitCode : int {
    kOk = 0,
    kDomainError = 2,
    kOracleMismatch = 3,
    kCapacityError = 4,
};

// Column order of every CSV the harness writes.
inline constexpr const char* kCsvHeader =
    "command,quantity,n,p,r,r_real,rho,analytic_value,empirical_point,ci_low,ci_high,"
    "abs_gap,rel_gap,trials,excluded_trials,seed,label";

// One CSV row. Unset fields are written as empty cells.
struct SweepRecord {
    std::string command;
    std::string quantity;
    std::optional<std::uint64_t> n;
    std::optional<double> p;
    std::optional<std::uint64_t> r;
    std::optional<double> r_real;
    std::optional<double> rho;
    std::optional<double> analytic_value;
    std::optional<double> empirical_point;
    std::optional<double> ci_low;
    std::optional<double> ci_high;
    std::optional<double> abs_gap;
    std::optional<double> rel_gap;
    std::optional<std::uint64_t> trials;
    std::optional<std::uint64_t> excluded_trials;
    std::optional<std::uint64_t> seed;
    std::string label;
};

// Shortest decimal that parses back to the same double.
std::string format_double(double v);
std::string to_csv_row(const SweepRecord& rec);

// "a:b:step" (arithmetic) or "a:b:factor:geom" (geometric, rounded to the
// nearest integer, duplicates dropped). Throws DomainError.
std::vector<std::uint64_t> parse_n_range(const std::string& spec);

// Tolerance of the exact command: relative gap at most 1e-9, or absolute
// gap at most 1e-12 when either side is zero.
inline constexpr double kOracleRelTol = 1e-9;
inline constexpr double kOracleAbsTol = 1e-12;
bool oracle_matches(double oracle, double analytic_value);

// Name of the environment variable that sets the default worker count.
inline constexpr const char* kWorkersEnv = "DOMCLIQUE_WORKERS";

// Runs the command line (args excludes the program name). CSV goes to `out`
// (or the --out file), diagnostics and progress to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace domclique::cli
