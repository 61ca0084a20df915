#include "domclique/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "domclique/errors.hpp"

namespace domclique::analytic {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_open_p(double p, const char* op) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError(std::string(op) + ": p must lie in (0,1)");
}

double lnp(double p) { return std::log(p); }
double lnq(double p) { return std::log1p(-p); }

double choose2(double r) { return r * (r - 1.0) / 2.0; }

// ln(1 - p^r - (1-p)^r) for integer r >= 2; -inf for r = 1.
double log_dominating_bracket(std::uint64_t r, double p) {
    if (r == 1) return -kInf;
    const auto rr = static_cast<double>(r);
    const double s = std::exp(rr * lnp(p)) + std::exp(rr * lnq(p));
    return std::log1p(-s);
}

// log1p(-x) + x without cancellation for small x.
double log1p_minus_plus(double x) {
    if (x < 1e-3) {
        // -sum_{k>=2} x^k / k
        double term = x * x;
        double sum = 0.0;
        for (int k = 2; k < 40; ++k) {
            const double add = term / k;
            sum += add;
            if (add < 1e-20 * sum) break;
            term *= x;
        }
        return -sum;
    }
    return std::log1p(-x) + x;
}

// Sum of exp(terms) taken largest first; returns the natural log of the sum.
double log_sum_exp_desc(std::vector<double> terms) {
    std::sort(terms.begin(), terms.end(), std::greater<>());
    if (terms.empty() || terms.front() == -kInf) return -kInf;
    const double top = terms.front();
    double acc = 0.0;
    for (double t : terms) acc += std::exp(t - top);
    return top + std::log(acc);
}

// ln [C(r,j) C(n-r,r-j) / C(n,r)] for j = 0..r, with 2r <= n. Uses prefix
// sums so each ratio of falling factorials is assembled from log1p terms.
std::vector<double> log_overlap_weights(std::uint64_t n, std::uint64_t r) {
    const auto nn = static_cast<double>(n);
    const auto rr = static_cast<double>(r);
    // lfact[i] = ln i!, i <= r
    std::vector<double> lfact(r + 1, 0.0);
    for (std::uint64_t i = 1; i <= r; ++i) lfact[i] = lfact[i - 1] + std::log(static_cast<double>(i));
    // shrink[m] = sum_{i<m} ln((n-r-i)/(n-i))
    std::vector<double> shrink(r + 1, 0.0);
    for (std::uint64_t i = 0; i < r; ++i) {
        shrink[i + 1] = shrink[i] + std::log1p(-rr / (nn - static_cast<double>(i)));
    }
    // head[m] = sum_{i<m} ln(n-i)
    std::vector<double> head(r + 1, 0.0);
    for (std::uint64_t i = 0; i < r; ++i) head[i + 1] = head[i] + std::log(nn - static_cast<double>(i));

    std::vector<double> out(r + 1);
    for (std::uint64_t j = 0; j <= r; ++j) {
        const std::uint64_t m = r - j;
        // ln C(n-r,m) - ln C(n,r)
        //   = sum_{i<m} ln((n-r-i)/(n-i)) - sum_{m<=i<r} ln(n-i) + ln r! - ln m!
        const double ratio = shrink[m] - (head[r] - head[m]) + lfact[r] - lfact[m];
        const double choose_rj = lfact[r] - lfact[j] - lfact[m];
        out[j] = choose_rj + ratio;
    }
    return out;
}

void require_overlap_domain(std::uint64_t n, std::uint64_t r, const char* op) {
    if (r < 1 || 2 * r > n) throw DomainError(std::string(op) + ": requires 1 <= r <= n/2");
}

}  // namespace

AnalyticContext AnalyticContext::make(double p) {
    require_open_p(p, "AnalyticContext");
    AnalyticContext c{};
    c.p = p;
    c.b = 1.0 / p;
    c.alpha = lnq(p) / lnp(p);
    c.beta = std::min(2.0 / 3.0, 2.0 * c.alpha);
    c.nu = std::min(1.0, c.alpha);
    c.epsilon_hat = 2.0 - lnp(p) / lnq(p);
    c.rho_hat = 1.0 / c.alpha;
    return c;
}

double alpha(double p) {
    require_open_p(p, "alpha");
    return lnq(p) / lnp(p);
}

double epsilon_hat(double p) {
    require_open_p(p, "epsilon_hat");
    return 2.0 - lnp(p) / lnq(p);
}

namespace {

struct LogWindow {
    double lb;   // ln b
    double lbn;  // log_b n
};

LogWindow window_logs(std::uint64_t n, double p, const char* op) {
    require_open_p(p, op);
    if (n < 3) throw DomainError(std::string(op) + ": n must be at least 3");
    const double lb = -lnp(p);
    const double lbn = std::log(static_cast<double>(n)) / lb;
    if (!(lbn > 1.0)) throw DomainError(std::string(op) + ": log_b n must exceed 1");
    return {lb, lbn};
}

}  // namespace

double r0(std::uint64_t n, double p) {
    const auto [lb, L] = window_logs(n, p, "r0");
    return L - 2.0 * std::log(L) / lb + std::log(2.0) / lb + std::log(1.0 / lb) / lb;
}

double r1(std::uint64_t n, double p) {
    const auto [lb, L] = window_logs(n, p, "r1");
    return 2.0 * L - 2.0 * std::log(L) / lb + 2.0 / lb + 1.0 - 2.0 * std::log(2.0) / lb;
}

double log_binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) throw DomainError("log_binomial: k exceeds n");
    k = std::min(k, n - k);
    if (k <= 256) {
        double s = 0.0;
        const auto nn = static_cast<double>(n);
        for (std::uint64_t i = 0; i < k; ++i) {
            s += std::log((nn - static_cast<double>(i)) / static_cast<double>(i + 1));
        }
        return s;
    }
    return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
           std::lgamma(static_cast<double>(n - k) + 1.0);
}

double expected_dominating_cliques_log(std::uint64_t n, std::uint64_t r, double p) {
    require_open_p(p, "expected_dominating_cliques");
    if (r < 1 || r > n) throw DomainError("expected_dominating_cliques: requires 1 <= r <= n");
    const auto rr = static_cast<double>(r);
    double value = log_binomial(n, r) + choose2(rr) * lnp(p);
    if (n > r) {
        const double bracket = log_dominating_bracket(r, p);
        if (bracket == -kInf) return -kInf;
        value += static_cast<double>(n - r) * bracket;
    }
    return value;
}

double expected_dominating_cliques(std::uint64_t n, std::uint64_t r, double p) {
    return std::exp(expected_dominating_cliques_log(n, r, p));
}

double expected_maximal_cliques_log(std::uint64_t n, std::uint64_t r, double p) {
    require_open_p(p, "expected_maximal_cliques");
    if (r < 1 || r > n) throw DomainError("expected_maximal_cliques: requires 1 <= r <= n");
    const auto rr = static_cast<double>(r);
    double value = log_binomial(n, r) + choose2(rr) * lnp(p);
    if (n > r) value += static_cast<double>(n - r) * std::log1p(-std::exp(rr * lnp(p)));
    return value;
}

double expected_maximal_cliques(std::uint64_t n, std::uint64_t r, double p) {
    return std::exp(expected_maximal_cliques_log(n, r, p));
}

double ratio_analytic(std::uint64_t n, double r, double p) {
    require_open_p(p, "ratio_analytic");
    if (!(r >= 1.0)) throw DomainError("ratio_analytic: r must be at least 1");
    if (n == 0) throw DomainError("ratio_analytic: n must be positive");
    const double log_exponent = std::log(static_cast<double>(n)) + r * lnq(p) - std::log1p(-std::exp(r * lnp(p)));
    return std::exp(-std::exp(log_exponent));
}

double r_from_rho(std::uint64_t n, double rho, double p) {
    require_open_p(p, "r_from_rho");
    if (!(rho >= 1.0 && rho <= 2.0)) throw DomainError("r_from_rho: rho must lie in [1,2]");
    if (n < 2) throw DomainError("r_from_rho: n must be at least 2");
    return rho * std::log(static_cast<double>(n)) / -lnp(p);
}

PhaseClass classify_phase(double p, double rho) {
    require_open_p(p, "classify_phase");
    if (!(rho >= 1.0 && rho <= 2.0)) throw DomainError("classify_phase: rho must lie in [1,2]");
    if (p > kUpperThreshold) return {Phase::AlmostSurelyDominating, std::nullopt, std::nullopt};
    if (p <= kLowerThreshold) return {Phase::AlmostSurelyNotDominating, std::nullopt, std::nullopt};
    const double rho_hat = 1.0 / alpha(p);
    CriticalSide side = CriticalSide::Threshold;
    if (rho > rho_hat) side = CriticalSide::Dominating;
    if (rho < rho_hat) side = CriticalSide::NotDominating;
    return {Phase::Critical, rho_hat, side};
}

std::string_view to_string(Phase phase) {
    switch (phase) {
    case Phase::AlmostSurelyDominating: return "AlmostSurelyDominating";
    case Phase::AlmostSurelyNotDominating: return "AlmostSurelyNotDominating";
    case Phase::Critical: return "Critical";
    }
    return "?";
}

std::string_view to_string(CriticalSide side) {
    switch (side) {
    case CriticalSide::Dominating: return "Dominating";
    case CriticalSide::NotDominating: return "NotDominating";
    case CriticalSide::Threshold: return "Threshold";
    }
    return "?";
}

double critical_r(std::uint64_t n, double p) {
    require_open_p(p, "critical_r");
    if (!(p > kLowerThreshold && p <= kUpperThreshold)) {
        throw DomainError("critical_r: p must lie in the critical band ((3-sqrt5)/2, 1/2]");
    }
    if (n < 2) throw DomainError("critical_r: n must be at least 2");
    return std::log(static_cast<double>(n)) / -lnq(p);
}

double ratio_offset_asymptote(double p, double offset, OffsetKind kind) {
    require_open_p(p, "ratio_offset_asymptote");
    switch (kind) {
    case OffsetKind::PlusDelta:
        if (!(offset >= 0.0)) throw DomainError("ratio_offset_asymptote: delta must be nonnegative");
        return std::exp(-std::exp(offset * lnq(p)));
    case OffsetKind::MinusDelta:
        if (!(offset >= 0.0)) throw DomainError("ratio_offset_asymptote: delta must be nonnegative");
        return std::exp(-std::exp(-offset * lnq(p)));
    case OffsetKind::ConstantLambda:
        return std::exp(-std::exp(offset * lnq(p)));
    }
    throw DomainError("ratio_offset_asymptote: unknown offset kind");
}

double variance_bound_factor(std::uint64_t n, double p) {
    const auto ctx = AnalyticContext::make(p);
    if (n < 3) throw DomainError("variance_bound_factor: n must be at least 3");
    const double ln_n = std::log(static_cast<double>(n));
    return std::pow(ln_n, 3.0) * std::exp(-ctx.beta * ln_n);
}

double concentration_window(std::uint64_t n, double p) {
    const auto ctx = AnalyticContext::make(p);
    if (n < 2) throw DomainError("concentration_window: n must be at least 2");
    const double ln_n = std::log(static_cast<double>(n));
    return std::pow(ln_n, 3.0) * std::exp(-0.5 * ctx.beta * ln_n);
}

double q_factor(std::uint64_t n, std::uint64_t r, std::uint64_t j, double p) {
    require_open_p(p, "q_factor");
    if (r < 2 || r > n) throw DomainError("q_factor: requires 2 <= r <= n");
    if (j > r) throw DomainError("q_factor: requires j <= r");
    if (j == r) return 1.0;
    const double bracket = log_dominating_bracket(r, p);
    if (!(bracket > -kInf)) throw DomainError("q_factor: bracket is not positive");
    return std::exp(-2.0 * static_cast<double>(r - j) * bracket);
}

double s_sum(std::uint64_t n, std::uint64_t r, std::uint64_t c, std::uint64_t d, double p) {
    require_open_p(p, "s_sum");
    require_overlap_domain(n, r, "s_sum");
    if (c > d || d > r) throw DomainError("s_sum: requires c <= d <= r");
    const auto weights = log_overlap_weights(n, r);
    const double lb = -lnp(p);
    std::vector<double> terms;
    terms.reserve(d - c + 1);
    for (std::uint64_t j = c; j <= d; ++j) terms.push_back(weights[j] + choose2(static_cast<double>(j)) * lb);
    return std::exp(log_sum_exp_desc(std::move(terms)));
}

double second_moment_upper_log(std::uint64_t n, std::uint64_t r, double p) {
    require_open_p(p, "second_moment_upper");
    if (r < 2) throw DomainError("second_moment_upper: requires r >= 2");
    require_overlap_domain(n, r, "second_moment_upper");
    const auto weights = log_overlap_weights(n, r);
    const double lb = -lnp(p);
    const double bracket = log_dominating_bracket(r, p);
    std::vector<double> terms;
    terms.reserve(r + 1);
    for (std::uint64_t j = 0; j <= r; ++j) {
        const double log_q = -2.0 * static_cast<double>(r - j) * bracket;
        terms.push_back(weights[j] + choose2(static_cast<double>(j)) * lb + log_q);
    }
    return 2.0 * expected_dominating_cliques_log(n, r, p) + log_sum_exp_desc(std::move(terms));
}

double stirling_clique_term_log(std::uint64_t n, double r, double p) {
    require_open_p(p, "stirling_clique_term");
    if (!(r >= 1.0 && r <= static_cast<double>(n))) throw DomainError("stirling_clique_term: requires 1 <= r <= n");
    return r * (std::log(static_cast<double>(n)) + 1.0 + 0.5 * (r - 1.0) * lnp(p) - std::log(r));
}

double claim1_error(std::uint64_t n, double k, double p) {
    require_open_p(p, "claim1_error");
    if (!(k > 0.0)) throw DomainError("claim1_error: k must be positive");
    const double x = std::exp(k * lnp(p));
    const double nn = static_cast<double>(n);
    // (1-x)^n = exp(-n x) * exp(n (log1p(-x) + x))
    return std::exp(-nn * x) * std::expm1(nn * log1p_minus_plus(x));
}

double chebyshev_tail_bound(double variance, double t) {
    if (!(t > 0.0)) throw DomainError("chebyshev_tail_bound: t must be positive");
    if (variance < 0.0) throw DomainError("chebyshev_tail_bound: variance must be nonnegative");
    return std::min(1.0, variance / (t * t));
}

}  // namespace domclique::analytic
