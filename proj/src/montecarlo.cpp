#include "domclique/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

#include "domclique/analytic.hpp"
#include "domclique/errors.hpp"
#include "domclique/rng.hpp"

namespace domclique::montecarlo {

namespace {

constexpr double kZ95 = 1.959963984540054;

// round(2^32 x / y) for 0 <= x <= y, y > 0.
std::uint64_t ratio_fixed(std::uint64_t x, std::uint64_t y) {
    const UInt128 num = (static_cast<UInt128>(x) << (kRatioFractionBits + 1)) + y;
    return static_cast<std::uint64_t>(num / (static_cast<UInt128>(y) * 2));
}

double to_double(UInt128 v) { return static_cast<double>(v); }

void check_spec(std::size_t n, double p, std::size_t r, std::uint64_t trials) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("run_trials: p must lie in [0,1]");
    if (r < 1 || r > n) throw DomainError("run_trials: requires 1 <= r <= n");
    if (trials < 1) throw DomainError("run_trials: trials must be at least 1");
    if (n > Graph::kDefaultMaxNodes) {
        throw CapacityError("run_trials: n=" + std::to_string(n) + " exceeds graph capacity");
    }
}

// Splits [0, trials) into contiguous blocks, one per worker, folds each block
// in index order and merges the blocks in index order.
template <typename Acc, typename Fold>
Acc reduce_trials(std::uint64_t trials, unsigned workers, Acc init, Fold fold) {
    workers = std::max(1U, workers);
    if (workers > trials) workers = static_cast<unsigned>(trials);
    std::vector<Acc> parts(workers, init);
    auto block = [&](unsigned w) {
        const std::uint64_t first = trials * w / workers;
        const std::uint64_t last = trials * (w + 1) / workers;
        fold(first, last, parts[w]);
    };
    if (workers == 1) {
        block(0);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(block, w);
    }
    Acc total = init;
    for (const auto& part : parts) total.merge(part);
    return total;
}

}  // namespace

void TrialAggregate::add(const CliqueSizeCounts& counts) {
    const std::uint64_t x = counts.dominating;
    const std::uint64_t y = counts.maximal;
    ++trials;
    sum_x += x;
    sum_x_sq += static_cast<UInt128>(x) * x;
    sum_y += y;
    if (x >= 1) ++exists_count;
    if (y >= 1) {
        ++ratio_trials;
        const std::uint64_t q = ratio_fixed(x, y);
        ratio_sum_fixed += q;
        ratio_sq_sum_fixed += static_cast<UInt128>(q) * q;
    }
    x_min = std::min(x_min, x);
    x_max = std::max(x_max, x);
}

TrialAggregate& TrialAggregate::merge(const TrialAggregate& other) {
    trials += other.trials;
    sum_x += other.sum_x;
    sum_x_sq += other.sum_x_sq;
    sum_y += other.sum_y;
    exists_count += other.exists_count;
    ratio_trials += other.ratio_trials;
    ratio_sum_fixed += other.ratio_sum_fixed;
    ratio_sq_sum_fixed += other.ratio_sq_sum_fixed;
    x_min = std::min(x_min, other.x_min);
    x_max = std::max(x_max, other.x_max);
    return *this;
}

TrialAggregate merge(TrialAggregate a, const TrialAggregate& b) {
    a.merge(b);
    return a;
}

double TrialAggregate::mean_x() const {
    return trials ? static_cast<double>(sum_x) / static_cast<double>(trials) : 0.0;
}

double TrialAggregate::sum_x_sq_value() const { return to_double(sum_x_sq); }

double TrialAggregate::ratio_sum() const { return std::ldexp(to_double(ratio_sum_fixed), -kRatioFractionBits); }

Graph trial_graph(const TrialSpec& spec, std::uint64_t index) {
    return sample_gnp({spec.n, spec.p, derive_seed(spec.master_seed, index)});
}

TrialAggregate run_trial_range(const TrialSpec& spec, std::uint64_t first, std::uint64_t last) {
    TrialAggregate agg;
    for (std::uint64_t i = first; i < last; ++i) agg.add(count_r_cliques(trial_graph(spec, i), spec.r));
    return agg;
}

TrialAggregate run_trials(std::size_t n, double p, std::size_t r, std::uint64_t trials, std::uint64_t master_seed,
                          unsigned workers) {
    check_spec(n, p, r, trials);
    const TrialSpec spec{n, p, r, master_seed};
    return reduce_trials(trials, workers, TrialAggregate{},
                         [&](std::uint64_t first, std::uint64_t last, TrialAggregate& acc) {
                             acc.merge(run_trial_range(spec, first, last));
                         });
}

std::string_view to_string(IntervalMethod method) {
    switch (method) {
    case IntervalMethod::Wilson95: return "wilson95";
    case IntervalMethod::Normal95: return "normal95";
    }
    return "?";
}

EstimateWithCI estimate_existence_probability(const TrialAggregate& agg) {
    if (agg.trials == 0) throw UndefinedEstimateError("existence probability: no trials");
    const auto t = static_cast<double>(agg.trials);
    const double phat = static_cast<double>(agg.exists_count) / t;
    const double z2 = kZ95 * kZ95;
    const double denom = 1.0 + z2 / t;
    const double centre = (phat + z2 / (2.0 * t)) / denom;
    const double half = kZ95 * std::sqrt(phat * (1.0 - phat) / t + z2 / (4.0 * t * t)) / denom;
    EstimateWithCI e{phat, std::max(0.0, centre - half), std::min(1.0, centre + half), IntervalMethod::Wilson95};
    // Pin the endpoints the interval must contain exactly.
    if (agg.exists_count == 0) e.ci_low = 0.0;
    if (agg.exists_count == agg.trials) e.ci_high = 1.0;
    e.ci_low = std::min(e.ci_low, phat);
    e.ci_high = std::max(e.ci_high, phat);
    return e;
}

EstimateWithCI estimate_mean_ratio(const TrialAggregate& agg) {
    if (agg.ratio_trials == 0) throw UndefinedEstimateError("mean ratio: no trial had a maximal r-clique");
    const auto m = static_cast<double>(agg.ratio_trials);
    const double scale = std::ldexp(1.0, -kRatioFractionBits);
    const double mean = to_double(agg.ratio_sum_fixed) * scale / m;
    const double mean_sq = to_double(agg.ratio_sq_sum_fixed) * scale * scale / m;
    const double var = m > 1 ? std::max(0.0, (mean_sq - mean * mean) * m / (m - 1.0)) : 0.0;
    const double half = kZ95 * std::sqrt(var / m);
    return {mean, std::max(0.0, mean - half), std::min(1.0, mean + half), IntervalMethod::Normal95};
}

double standard_error_x(const TrialAggregate& agg) {
    if (agg.trials < 2) return 0.0;
    const auto t = static_cast<double>(agg.trials);
    const double mean = agg.mean_x();
    const double var = std::max(0.0, (agg.sum_x_sq_value() - t * mean * mean) / (t - 1.0));
    return std::sqrt(var / t);
}

EstimateWithCI estimate_mean_dominating(const TrialAggregate& agg) {
    if (agg.trials == 0) throw UndefinedEstimateError("mean X_r: no trials");
    const double mean = agg.mean_x();
    const double half = kZ95 * standard_error_x(agg);
    return {mean, std::max(0.0, mean - half), mean + half, IntervalMethod::Normal95};
}

namespace {

struct WithinCount {
    std::uint64_t trials = 0;
    std::uint64_t within = 0;
    void merge(const WithinCount& o) {
        trials += o.trials;
        within += o.within;
    }
};

}  // namespace

ConcentrationReport concentration_check(std::size_t n, double p, std::size_t r, std::uint64_t trials,
                                        std::uint64_t seed, unsigned workers) {
    check_spec(n, p, r, trials);
    if (!(p > 0.0 && p < 1.0)) throw DomainError("concentration_check: p must lie in (0,1)");
    if (n < 2) throw DomainError("concentration_check: n must be at least 2");
    ConcentrationReport report;
    report.expected = analytic::expected_dominating_cliques(n, r, p);
    report.multiplier = analytic::concentration_window(n, p);
    report.half_width = report.expected * report.multiplier;
    const TrialSpec spec{n, p, r, seed};
    const auto counted = reduce_trials(trials, workers, WithinCount{},
                                       [&](std::uint64_t first, std::uint64_t last, WithinCount& acc) {
                                           for (std::uint64_t i = first; i < last; ++i) {
                                               const auto x = static_cast<double>(
                                                   count_r_cliques(trial_graph(spec, i), r).dominating);
                                               ++acc.trials;
                                               if (std::abs(x - report.expected) <= report.half_width) ++acc.within;
                                           }
                                       });
    report.trials = counted.trials;
    report.within = counted.within;
    return report;
}

namespace {

struct MonotonicityAcc {
    std::uint64_t trials = 0;
    std::uint64_t fixed_violations = 0;
    std::uint64_t any_violations = 0;
    std::vector<std::uint64_t> fixed_exists;
    std::vector<std::uint64_t> any_exists;

    void merge(const MonotonicityAcc& o) {
        trials += o.trials;
        fixed_violations += o.fixed_violations;
        any_violations += o.any_violations;
        for (std::size_t k = 0; k < fixed_exists.size(); ++k) {
            fixed_exists[k] += o.fixed_exists[k];
            any_exists[k] += o.any_exists[k];
        }
    }
};

bool has_dominating_clique(const Graph& g) {
    for (const auto& c : enumerate_maximal_cliques(g).by_size)
        if (c.dominating > 0) return true;
    return false;
}

}  // namespace

MonotonicityReport coupled_monotonicity(std::size_t n, std::size_t r, std::span<const double> ps,
                                        std::uint64_t trials, std::uint64_t seed, unsigned workers) {
    if (ps.empty()) throw DomainError("coupled_monotonicity: empty p list");
    for (std::size_t k = 0; k < ps.size(); ++k) {
        check_spec(n, ps[k], r, trials);
        if (k > 0 && !(ps[k] > ps[k - 1])) throw DomainError("coupled_monotonicity: p list must be increasing");
    }
    MonotonicityAcc init;
    init.fixed_exists.assign(ps.size(), 0);
    init.any_exists.assign(ps.size(), 0);
    const auto acc = reduce_trials(trials, workers, init,
                                   [&](std::uint64_t first, std::uint64_t last, MonotonicityAcc& a) {
                                       for (std::uint64_t i = first; i < last; ++i) {
                                           const std::uint64_t s = derive_seed(seed, i);
                                           bool fixed_seen = false, any_seen = false;
                                           bool fixed_broken = false, any_broken = false;
                                           for (std::size_t k = 0; k < ps.size(); ++k) {
                                               const Graph g = sample_gnp({n, ps[k], s});
                                               const bool fixed = count_r_cliques(g, r).dominating > 0;
                                               const bool any = has_dominating_clique(g);
                                               if (fixed) ++a.fixed_exists[k];
                                               if (any) ++a.any_exists[k];
                                               fixed_broken = fixed_broken || (fixed_seen && !fixed);
                                               any_broken = any_broken || (any_seen && !any);
                                               fixed_seen = fixed_seen || fixed;
                                               any_seen = any_seen || any;
                                           }
                                           ++a.trials;
                                           if (fixed_broken) ++a.fixed_violations;
                                           if (any_broken) ++a.any_violations;
                                       }
                                   });
    return {acc.trials, acc.fixed_violations, acc.any_violations, acc.fixed_exists, acc.any_exists};
}

}  // namespace domclique::montecarlo
