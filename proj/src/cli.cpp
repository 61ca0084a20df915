#include "domclique/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <variant>

#include "domclique/analytic.hpp"
#include "domclique/errors.hpp"
#include "domclique/exact_count.hpp"
#include "domclique/montecarlo.hpp"

namespace domclique::cli {

std::string format_double(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc{}) return "nan";
    return {buf, end};
}

namespace {

template <typename T>
void cell(std::ostringstream& os, const std::optional<T>& v) {
    os << ',';
    if (!v) return;
    if constexpr (std::is_floating_point_v<T>) {
        os << format_double(*v);
    } else {
        os << *v;
    }
}

}  // namespace

std::string to_csv_row(const SweepRecord& rec) {
    std::ostringstream os;
    os << rec.command << ',' << rec.quantity;
    cell(os, rec.n);
    cell(os, rec.p);
    cell(os, rec.r);
    cell(os, rec.r_real);
    cell(os, rec.rho);
    cell(os, rec.analytic_value);
    cell(os, rec.empirical_point);
    cell(os, rec.ci_low);
    cell(os, rec.ci_high);
    cell(os, rec.abs_gap);
    cell(os, rec.rel_gap);
    cell(os, rec.trials);
    cell(os, rec.excluded_trials);
    cell(os, rec.seed);
    os << ',' << rec.label;
    return os.str();
}

std::vector<std::uint64_t> parse_n_range(const std::string& spec) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
    const bool geom = parts.size() == 4 && parts[3] == "geom";
    if (parts.size() != 3 && !geom) throw DomainError("--n-range: expected a:b:step or a:b:factor:geom");
    double a = 0, b = 0, step = 0;
    try {
        a = std::stod(parts[0]);
        b = std::stod(parts[1]);
        step = std::stod(parts[2]);
    } catch (const std::exception&) {
        throw DomainError("--n-range: malformed number in '" + spec + "'");
    }
    if (!(a >= 1 && b >= a)) throw DomainError("--n-range: requires 1 <= a <= b");
    std::vector<std::uint64_t> ns;
    if (geom) {
        if (!(step > 1.0)) throw DomainError("--n-range: geometric factor must exceed 1");
        // Index-based so rounding does not drift over many steps.
        for (int k = 0;; ++k) {
            const double v = a * std::pow(step, k);
            if (v > b * (1.0 + 1e-12)) break;
            const auto n = static_cast<std::uint64_t>(std::llround(v));
            if (ns.empty() || ns.back() != n) ns.push_back(n);
        }
    } else {
        if (!(step >= 1.0) || step != std::floor(step)) throw DomainError("--n-range: step must be a positive integer");
        if (a != std::floor(a) || b != std::floor(b)) throw DomainError("--n-range: endpoints must be integers");
        for (auto n = static_cast<std::uint64_t>(a); n <= static_cast<std::uint64_t>(b);
             n += static_cast<std::uint64_t>(step)) {
            ns.push_back(n);
        }
    }
    return ns;
}

bool oracle_matches(double oracle, double analytic_value) {
    const double gap = std::abs(oracle - analytic_value);
    if (analytic_value == 0.0 || oracle == 0.0) return gap <= kOracleAbsTol;
    return gap <= kOracleRelTol * std::abs(analytic_value);
}

namespace {

struct Options {
    std::optional<std::uint64_t> n;
    std::string n_range;
    std::optional<double> p;
    std::vector<double> p_list;
    std::optional<std::int64_t> r;
    std::string rho;  // number or "hat"
    bool critical = false;
    std::optional<double> delta;
    std::optional<double> lambda;
    std::uint64_t trials = 100000;
    std::uint64_t seed = 1;
    std::string out;
    std::optional<unsigned> workers;
    std::vector<std::string> quantities;
    std::string figure;
};

struct RSel {
    std::uint64_t r;
};
struct RhoSel {
    std::optional<double> rho;  // nullopt means rho_hat
};
struct CriticalSel {};
using Selector = std::variant<RSel, RhoSel, CriticalSel>;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

void add_grid_options(CLI::App* app, Options& o) {
    app->add_option("--n", o.n, "Number of nodes");
    app->add_option("--n-range", o.n_range, "Node-count range a:b:step or a:b:factor:geom");
    app->add_option("--p", o.p, "Edge probability");
    app->add_option("--p-list", o.p_list, "Comma-separated edge probabilities")->delimiter(',');
    app->add_option("--out", o.out, "Write CSV to this file instead of standard output");
}

void add_selector_options(CLI::App* app, Options& o) {
    app->add_option("--r", o.r, "Clique size");
    app->add_option("--rho", o.rho, "Clique size as rho * log_b n; 'hat' for 1/alpha(p)");
    app->add_flag("--critical", o.critical, "Clique size log_{1/(1-p)} n");
    app->add_option("--delta", o.delta, "Signed offset added to the critical clique size");
    app->add_option("--lambda", o.lambda, "Constant offset added to the critical clique size");
}

void add_simulation_options(CLI::App* app, Options& o) {
    app->add_option("--trials", o.trials, "Monte Carlo trials per grid point");
    app->add_option("--seed", o.seed, "Master seed");
    app->add_option("--workers", o.workers, "Worker threads");
}

std::vector<std::uint64_t> n_grid(const Options& o) {
    if (o.n && !o.n_range.empty()) throw UsageError("give only one of --n and --n-range");
    if (o.n) return {*o.n};
    if (!o.n_range.empty()) return parse_n_range(o.n_range);
    throw UsageError("missing --n or --n-range");
}

std::vector<double> p_grid(const Options& o) {
    if (o.p && !o.p_list.empty()) throw UsageError("give only one of --p and --p-list");
    if (o.p) return {*o.p};
    if (!o.p_list.empty()) return o.p_list;
    throw UsageError("missing --p or --p-list");
}

Selector selector(const Options& o) {
    const int count = (o.r ? 1 : 0) + (o.rho.empty() ? 0 : 1) + (o.critical ? 1 : 0);
    if (count != 1) throw UsageError("give exactly one of --r, --rho, --critical");
    if ((o.delta || o.lambda) && !o.critical) throw UsageError("--delta and --lambda require --critical");
    if (o.delta && o.lambda) throw UsageError("give only one of --delta and --lambda");
    if (o.r) {
        if (*o.r < 1) throw DomainError("--r must be at least 1");
        return RSel{static_cast<std::uint64_t>(*o.r)};
    }
    if (o.critical) return CriticalSel{};
    if (o.rho == "hat") return RhoSel{std::nullopt};
    try {
        std::size_t used = 0;
        const double v = std::stod(o.rho, &used);
        if (used != o.rho.size()) throw std::invalid_argument("trailing");
        return RhoSel{v};
    } catch (const std::exception&) {
        throw DomainError("--rho: expected a number or 'hat'");
    }
}

unsigned worker_count(const Options& o) {
    if (o.workers) return std::max(1U, *o.workers);
    if (const char* env = std::getenv(kWorkersEnv)) {
        try {
            const long v = std::stol(env);
            if (v >= 1) return static_cast<unsigned>(v);
        } catch (const std::exception&) {
        }
        throw UsageError(std::string(kWorkersEnv) + " must be a positive integer");
    }
    return 1;
}

void check_p_open(double p) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("--p: " + format_double(p) + " is not in (0,1)");
}

// Continuous clique size and the integer size used for counting.
struct CliqueSize {
    double r_real;
    std::uint64_t r;
    std::optional<double> rho;
};

CliqueSize resolve_size(const Selector& sel, const Options& o, std::uint64_t n, double p) {
    const double log_b_n = std::log(static_cast<double>(n)) / -std::log(p);
    if (const auto* rs = std::get_if<RSel>(&sel)) {
        if (rs->r > n) throw DomainError("--r: " + std::to_string(rs->r) + " exceeds n=" + std::to_string(n));
        return {static_cast<double>(rs->r), rs->r, std::nullopt};
    }
    double r_real = 0.0;
    std::optional<double> rho;
    if (const auto* hs = std::get_if<RhoSel>(&sel)) {
        rho = hs->rho ? *hs->rho : 1.0 / analytic::alpha(p);
        r_real = analytic::r_from_rho(n, *rho, p);
    } else {
        r_real = analytic::critical_r(n, p);
        if (o.delta) r_real += *o.delta;
        if (o.lambda) r_real += *o.lambda;
        rho = r_real / log_b_n;
    }
    const auto rounded = std::llround(r_real);
    if (rounded < 1 || static_cast<std::uint64_t>(rounded) > n) {
        throw DomainError("clique size " + format_double(r_real) + " is outside [1, n] at n=" + std::to_string(n));
    }
    return {r_real, static_cast<std::uint64_t>(rounded), rho};
}

struct Output {
    std::vector<SweepRecord> rows;
};

void emit(const Output& o, const std::string& path, std::ostream& out) {
    std::ostringstream buf;
    buf << kCsvHeader << '\n';
    for (const auto& row : o.rows) buf << to_csv_row(row) << '\n';
    if (path.empty()) {
        out << buf.str();
        out.flush();
        return;
    }
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw UsageError("cannot open --out file '" + path + "'");
    file << buf.str();
}

SweepRecord base(const char* command, const char* quantity, std::uint64_t n, double p) {
    SweepRecord rec;
    rec.command = command;
    rec.quantity = quantity;
    rec.n = n;
    rec.p = p;
    return rec;
}

// ---- analytic --------------------------------------------------------------

const std::vector<std::string> kAnalyticQuantities = {
    "alpha",      "epsilon_hat",          "beta",  "rho_hat",           "phase",
    "r0",         "r1",                   "critical_r", "expected_dominating", "ln_expected_dominating",
    "expected_maximal", "ln_expected_maximal", "ratio", "offset_asymptote", "variance_bound"};

Output cmd_analytic(const Options& o) {
    const auto ns = n_grid(o);
    const auto ps = p_grid(o);
    const auto sel = selector(o);
    const bool explicit_set = !o.quantities.empty();
    const auto& quantities = explicit_set ? o.quantities : kAnalyticQuantities;
    for (const auto& q : quantities) {
        if (std::find(kAnalyticQuantities.begin(), kAnalyticQuantities.end(), q) == kAnalyticQuantities.end()) {
            throw UsageError("--quantity: unknown quantity '" + q + "'");
        }
    }
    Output out;
    for (std::uint64_t n : ns) {
        for (double p : ps) {
            check_p_open(p);
            const auto size = resolve_size(sel, o, n, p);
            const auto ctx = analytic::AnalyticContext::make(p);
            for (const auto& q : quantities) {
                SweepRecord rec = base("analytic", q.c_str(), n, p);
                rec.r = size.r;
                rec.r_real = size.r_real;
                rec.rho = size.rho;
                try {
                    if (q == "alpha") {
                        rec.analytic_value = ctx.alpha;
                    } else if (q == "epsilon_hat") {
                        rec.analytic_value = ctx.epsilon_hat;
                    } else if (q == "beta") {
                        rec.analytic_value = ctx.beta;
                    } else if (q == "rho_hat") {
                        rec.analytic_value = ctx.rho_hat;
                    } else if (q == "phase") {
                        const auto cls = analytic::classify_phase(p, 1.0);
                        rec.label = std::string(analytic::to_string(cls.phase));
                        if (cls.rho_hat) {
                            rec.analytic_value = *cls.rho_hat;
                            const double rho = size.r_real / (std::log(static_cast<double>(n)) / -std::log(p));
                            if (rho >= 1.0 && rho <= 2.0) {
                                rec.label += ":" + std::string(analytic::to_string(*analytic::classify_phase(p, rho).side));
                            }
                        }
                    } else if (q == "r0") {
                        rec.analytic_value = analytic::r0(n, p);
                    } else if (q == "r1") {
                        rec.analytic_value = analytic::r1(n, p);
                    } else if (q == "critical_r") {
                        rec.analytic_value = analytic::critical_r(n, p);
                    } else if (q == "expected_dominating") {
                        rec.analytic_value = analytic::expected_dominating_cliques(n, size.r, p);
                    } else if (q == "ln_expected_dominating") {
                        rec.analytic_value = analytic::expected_dominating_cliques_log(n, size.r, p);
                    } else if (q == "expected_maximal") {
                        rec.analytic_value = analytic::expected_maximal_cliques(n, size.r, p);
                    } else if (q == "ln_expected_maximal") {
                        rec.analytic_value = analytic::expected_maximal_cliques_log(n, size.r, p);
                    } else if (q == "ratio") {
                        rec.analytic_value = analytic::ratio_analytic(n, size.r_real, p);
                    } else if (q == "offset_asymptote") {
                        if (!o.delta && !o.lambda) {
                            if (explicit_set) throw DomainError("offset_asymptote needs --delta or --lambda");
                            continue;
                        }
                        if (o.lambda) {
                            rec.analytic_value =
                                analytic::ratio_offset_asymptote(p, *o.lambda, analytic::OffsetKind::ConstantLambda);
                            rec.label = "lambda";
                        } else if (*o.delta >= 0.0) {
                            rec.analytic_value =
                                analytic::ratio_offset_asymptote(p, *o.delta, analytic::OffsetKind::PlusDelta);
                            rec.label = "plus_delta";
                        } else {
                            rec.analytic_value =
                                analytic::ratio_offset_asymptote(p, -*o.delta, analytic::OffsetKind::MinusDelta);
                            rec.label = "minus_delta";
                        }
                    } else if (q == "variance_bound") {
                        rec.analytic_value = analytic::variance_bound_factor(n, p);
                    }
                } catch (const DomainError&) {
                    // Quantities outside their domain at this grid point are
                    // skipped unless the caller asked for them by name.
                    if (explicit_set) throw;
                    continue;
                }
                out.rows.push_back(std::move(rec));
            }
        }
    }
    return out;
}

// ---- figure ----------------------------------------------------------------

Output cmd_figure(const Options& o) {
    Output out;
    if (o.figure == "alpha") {
        std::vector<double> ps = o.p_list;
        if (o.p) ps = {*o.p};
        if (ps.empty()) {
            for (int k = 1; k <= 99; ++k) ps.push_back(k / 100.0);
        }
        for (double p : ps) {
            check_p_open(p);
            SweepRecord rec;
            rec.command = "figure";
            rec.quantity = "alpha";
            rec.p = p;
            rec.analytic_value = analytic::alpha(p);
            out.rows.push_back(std::move(rec));
        }
        return out;
    }
    if (o.figure == "ratio") {
        const double p = o.p.value_or(0.45);
        check_p_open(p);
        const auto ns = o.n ? std::vector<std::uint64_t>{*o.n}
                            : parse_n_range(o.n_range.empty() ? "100:10000000:10:geom" : o.n_range);
        struct Curve {
            double rho;
            std::string label;
        };
        const std::vector<Curve> curves = {
            {1.9, "rho=1.9"}, {1.0 / analytic::alpha(p), "rho=hat"}, {1.05, "rho=1.05"}};
        for (const auto& c : curves) {
            for (std::uint64_t n : ns) {
                SweepRecord rec = base("figure", "ratio", n, p);
                rec.rho = c.rho;
                rec.r_real = analytic::r_from_rho(n, c.rho, p);
                rec.analytic_value = analytic::ratio_analytic(n, *rec.r_real, p);
                rec.label = c.label;
                out.rows.push_back(std::move(rec));
            }
        }
        return out;
    }
    throw UsageError("figure: expected 'alpha' or 'ratio'");
}

// ---- exact -----------------------------------------------------------------

Output cmd_exact(const Options& o, bool& mismatch) {
    const auto ns = n_grid(o);
    const auto ps = p_grid(o);
    if (!o.r) throw UsageError("exact: requires --r");
    if (!o.rho.empty() || o.critical || o.delta || o.lambda) throw UsageError("exact: only --r selects the clique size");
    const auto sel = selector(o);
    const std::uint64_t r = std::get<RSel>(sel).r;
    Output out;
    for (std::uint64_t n : ns) {
        if (n > kMaxExhaustiveNodes) {
            throw CapacityError("exact: n=" + std::to_string(n) + " exceeds exhaustive ceiling " +
                                std::to_string(kMaxExhaustiveNodes));
        }
        if (r > n) throw DomainError("--r: " + std::to_string(r) + " exceeds n=" + std::to_string(n));
        for (double p : ps) {
            check_p_open(p);
            auto row = [&](const char* quantity, double oracle, double value) {
                SweepRecord rec = base("exact", quantity, n, p);
                rec.r = r;
                rec.r_real = static_cast<double>(r);
                rec.analytic_value = value;
                rec.empirical_point = oracle;
                rec.abs_gap = std::abs(oracle - value);
                rec.rel_gap = value != 0.0 ? *rec.abs_gap / std::abs(value) : *rec.abs_gap;
                const bool ok = oracle_matches(oracle, value);
                rec.label = ok ? "match" : "mismatch";
                if (!ok) mismatch = true;
                out.rows.push_back(std::move(rec));
            };
            row("expected_dominating", exhaustive_expectation_Xr(n, r, p), analytic::expected_dominating_cliques(n, r, p));
            row("expected_maximal", exhaustive_expectation_Yr(n, r, p), analytic::expected_maximal_cliques(n, r, p));
            if (r >= 2 && 2 * r <= n) {
                SweepRecord rec = base("exact", "second_moment", n, p);
                rec.r = r;
                rec.r_real = static_cast<double>(r);
                const double oracle = exhaustive_second_moment_Xr(n, r, p);
                const double bound = std::exp(analytic::second_moment_upper_log(n, r, p));
                rec.empirical_point = oracle;
                rec.analytic_value = bound;
                rec.abs_gap = bound - oracle;
                rec.label = oracle <= bound ? "bound_holds" : "bound_violated";
                out.rows.push_back(std::move(rec));
            }
        }
    }
    return out;
}

// ---- simulate / sweep ------------------------------------------------------

Output simulate_grid(const Options& o, const char* command, bool progress, std::ostream& err) {
    const auto ns = n_grid(o);
    const auto ps = p_grid(o);
    const auto sel = selector(o);
    if (o.trials < 1) throw DomainError("--trials must be at least 1");
    const unsigned workers = worker_count(o);
    Output out;
    const std::size_t total = ns.size() * ps.size();
    std::size_t done = 0;
    for (std::uint64_t n : ns) {
        if (n > Graph::kDefaultMaxNodes) {
            throw CapacityError("--n: " + std::to_string(n) + " exceeds graph capacity " +
                                std::to_string(Graph::kDefaultMaxNodes));
        }
        for (double p : ps) {
            check_p_open(p);
            const auto size = resolve_size(sel, o, n, p);
            const auto agg = montecarlo::run_trials(n, p, size.r, o.trials, o.seed, workers);
            auto fill = [&](const char* quantity) {
                SweepRecord rec = base(command, quantity, n, p);
                rec.r = size.r;
                rec.r_real = size.r_real;
                rec.rho = size.rho;
                rec.trials = agg.trials;
                rec.seed = o.seed;
                return rec;
            };

            SweepRecord mean = fill("mean_dominating");
            const auto mx = montecarlo::estimate_mean_dominating(agg);
            mean.analytic_value = analytic::expected_dominating_cliques(n, size.r, p);
            mean.empirical_point = mx.point;
            mean.ci_low = mx.ci_low;
            mean.ci_high = mx.ci_high;
            mean.abs_gap = std::abs(mx.point - *mean.analytic_value);
            mean.label = std::string(montecarlo::to_string(mx.method));
            out.rows.push_back(std::move(mean));

            SweepRecord exist = fill("existence_probability");
            const auto ex = montecarlo::estimate_existence_probability(agg);
            exist.empirical_point = ex.point;
            exist.ci_low = ex.ci_low;
            exist.ci_high = ex.ci_high;
            exist.label = std::string(montecarlo::to_string(ex.method));
            out.rows.push_back(std::move(exist));

            SweepRecord ratio = fill("mean_ratio");
            ratio.analytic_value = analytic::ratio_analytic(n, std::max(1.0, size.r_real), p);
            ratio.excluded_trials = agg.excluded_trials();
            if (agg.ratio_trials > 0) {
                const auto rt = montecarlo::estimate_mean_ratio(agg);
                ratio.empirical_point = rt.point;
                ratio.ci_low = rt.ci_low;
                ratio.ci_high = rt.ci_high;
                ratio.abs_gap = std::abs(rt.point - *ratio.analytic_value);
                ratio.label = std::string(montecarlo::to_string(rt.method));
            } else {
                ratio.label = "undefined";
            }
            out.rows.push_back(std::move(ratio));

            ++done;
            if (progress) {
                err << "[" << done << "/" << total << "] n=" << n << " p=" << format_double(p) << " r=" << size.r
                    << " done\n";
            }
        }
    }
    return out;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Dominating cliques in G(n,p): analytic values, exact oracles and Monte Carlo sweeps", "domclique"};
    app.require_subcommand(1);
    Options o;

    auto* analytic_cmd = app.add_subcommand("analytic", "Evaluate closed-form quantities on a grid");
    add_grid_options(analytic_cmd, o);
    add_selector_options(analytic_cmd, o);
    analytic_cmd->add_option("--quantity", o.quantities, "Quantity to emit (repeatable; default all)");

    auto* exact_cmd = app.add_subcommand("exact", "Compare exhaustive oracles with the closed forms (n <= 6)");
    add_grid_options(exact_cmd, o);
    add_selector_options(exact_cmd, o);

    auto* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo estimates at one (n, p) point");
    add_grid_options(simulate_cmd, o);
    add_selector_options(simulate_cmd, o);
    add_simulation_options(simulate_cmd, o);

    auto* sweep_cmd = app.add_subcommand("sweep", "Monte Carlo estimates over an (n, p) grid");
    add_grid_options(sweep_cmd, o);
    add_selector_options(sweep_cmd, o);
    add_simulation_options(sweep_cmd, o);

    auto* figure_cmd = app.add_subcommand("figure", "Emit figure data: 'alpha' or 'ratio'");
    figure_cmd->add_option("name", o.figure, "alpha | ratio")->required();
    add_grid_options(figure_cmd, o);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "domclique: " << e.what() << '\n';
        return kDomainError;
    }

    try {
        Output result;
        bool mismatch = false;
        if (analytic_cmd->parsed()) {
            result = cmd_analytic(o);
        } else if (exact_cmd->parsed()) {
            result = cmd_exact(o, mismatch);
        } else if (simulate_cmd->parsed()) {
            if (!o.n_range.empty() || o.p_list.size() > 1) throw UsageError("simulate: takes a single --n and --p");
            result = simulate_grid(o, "simulate", false, err);
        } else if (sweep_cmd->parsed()) {
            result = simulate_grid(o, "sweep", true, err);
        } else {
            result = cmd_figure(o);
        }
        emit(result, o.out, out);
        return mismatch ? kOracleMismatch : kOk;
    } catch (const CapacityError& e) {
        err << "domclique: capacity error: " << e.what() << '\n';
        return kCapacityError;
    } catch (const DomainError& e) {
        err << "domclique: domain error: " << e.what() << '\n';
        return kDomainError;
    } catch (const UsageError& e) {
        err << "domclique: " << e.what() << '\n';
        return kDomainError;
    } catch (const UndefinedEstimateError& e) {
        err << "domclique: " << e.what() << '\n';
        return kDomainError;
    }
}

}  // namespace domclique::cli
