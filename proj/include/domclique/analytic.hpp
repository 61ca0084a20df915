#pragma once

// Closed-form and asymptotic quantities for dominating cliques in G(n,p).
//
// Everything is evaluated in natural-log space: binomials via sums of logs
// (or lgamma for large arguments), brackets of the form 1 - x via log1p, so
// that n up to 1e8 and clique sizes near 2 log_b n stay finite. Throughout,
// b = 1/p and q = 1 - p.

#include <cstdint>
#include <optional>
#include <string_view>

namespace domclique::analytic {

// (3 - sqrt 5)/2: the point where (1-p)^2 = p and alpha(p) = 1/2.
inline constexpr double kLowerThreshold = 0.38196601125010515;
inline constexpr double kUpperThreshold = 0.5;

// Per-p constants. Construction throws DomainError unless 0 < p < 1.
struct AnalyticContext {
    double p;
    double b;            // 1/p
    double alpha;        // -log_b(1-p) = ln(1-p)/ln p
    double beta;         // min{2/3, 2 alpha}
    double nu;           // min{1, alpha}
    double epsilon_hat;  // 2 - ln p / ln(1-p)
    double rho_hat;      // 1/alpha

    static AnalyticContext make(double p);
};

// ln(1-p)/ln(p), the exponent that turns powers of p into powers of 1-p:
// (1-p)^r = p^(r alpha).
double alpha(double p);
double epsilon_hat(double p);

// Lower and upper ends of the clique-number window. Require n >= 3 and
// log_b n > 1.
double r0(std::uint64_t n, double p);
double r1(std::uint64_t n, double p);

// ln C(n, k) for k <= n.
double log_binomial(std::uint64_t n, std::uint64_t k);

// ln E(X_r) = ln C(n,r) + C(r,2) ln p + (n-r) ln(1 - p^r - (1-p)^r).
// For r = 1 < n the bracket is exactly zero and the result is -infinity.
double expected_dominating_cliques_log(std::uint64_t n, std::uint64_t r, double p);
double expected_dominating_cliques(std::uint64_t n, std::uint64_t r, double p);

// ln E(Y_r) with bracket (1 - p^r); exact for every n.
double expected_maximal_cliques_log(std::uint64_t n, std::uint64_t r, double p);
double expected_maximal_cliques(std::uint64_t n, std::uint64_t r, double p);

// Leading term of X_r/Y_r, exp(-n (1-p)^r / (1 - p^r)), for real r >= 1.
double ratio_analytic(std::uint64_t n, double r, double p);

// rho log_b n, rho in [1,2].
double r_from_rho(std::uint64_t n, double rho, double p);

enum class Phase { AlmostSurelyDominating, AlmostSurelyNotDominating, Critical };

// Where a given rho sits relative to rho_hat inside the critical band.
enum class CriticalSide { Dominating, NotDominating, Threshold };

struct PhaseClass {
    Phase phase;
    std::optional<double> rho_hat;      // set iff phase == Critical
    std::optional<CriticalSide> side;  // set iff phase == Critical
};

// p > 1/2 dominating; p <= (3-sqrt5)/2 not dominating; otherwise critical at
// rho_hat = 1/alpha(p). Requires 0 < p < 1, 1 <= rho <= 2.
PhaseClass classify_phase(double p, double rho);

std::string_view to_string(Phase phase);
std::string_view to_string(CriticalSide side);

// log_{1/(1-p)} n = rho_hat log_b n. Only defined inside the critical band
// (3-sqrt5)/2 < p <= 1/2.
double critical_r(std::uint64_t n, double p);

enum class OffsetKind { PlusDelta, MinusDelta, ConstantLambda };

// Limit of X_r/Y_r when r is shifted from critical_r by an offset:
// exp(-(1-p)^offset), exp(-(1-p)^-offset) and exp(-(1-p)^lambda).
double ratio_offset_asymptote(double p, double offset, OffsetKind kind);

// (ln n)^3 / n^beta, the shape of the Var(X_r)/E(X_r)^2 bound. n >= 3.
double variance_bound_factor(std::uint64_t n, double p);

// Relative half-width (ln n)^3 n^(-beta/2) of the concentration window.
double concentration_window(std::uint64_t n, double p);

// (1 - p^r - (1-p)^r)^(2j - 2r). Requires 2 <= r <= n, j <= r.
double q_factor(std::uint64_t n, std::uint64_t r, std::uint64_t j, double p);

// sum_{j=c}^{d} C(r,j) C(n-r,r-j) b^C(j,2) / C(n,r).
// Requires c <= d <= r and 2r <= n.
double s_sum(std::uint64_t n, std::uint64_t r, std::uint64_t c, std::uint64_t d, double p);

// ln of E(X_r)^2 * sum_j C(r,j) C(n-r,r-j) p^-C(j,2) Q(p,r,j) / C(n,r).
// Requires 2 <= r and 2r <= n.
double second_moment_upper_log(std::uint64_t n, std::uint64_t r, double p);

// r ln(n e p^((r-1)/2) / r), the Stirling form of ln[C(n,r) p^C(r,2)].
double stirling_clique_term_log(std::uint64_t n, double r, double p);

// (1-p^k)^n - exp(-n p^k), evaluated without cancellation. Requires k > 0.
double claim1_error(std::uint64_t n, double k, double p);

// Chebyshev: Pr[|X - E X| >= t] <= Var(X)/t^2 (capped at 1). t > 0.
double chebyshev_tail_bound(double variance, double t);

}  // namespace domclique::analytic
