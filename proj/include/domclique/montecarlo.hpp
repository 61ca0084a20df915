#pragma once

// Deterministic Monte Carlo over G(n,p).
//
// Trial i of a run with master seed s samples its graph from
// sample_gnp({n, p, derive_seed(s, i)}), so a trial's outcome depends only on
// (n, p, r, s, i). Workers take contiguous blocks of trial indices; each block
// accumulates in index order and blocks are merged in index order. Every
// accumulated quantity is an integer (ratios are stored in 2^-32 fixed point),
// so the merged aggregate is the same for any partition.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "domclique/exact_count.hpp"

namespace domclique::montecarlo {

__extension__ using UInt128 = unsigned __int128;

inline constexpr int kRatioFractionBits = 32;

struct TrialAggregate {
    std::uint64_t trials = 0;
    std::uint64_t sum_x = 0;
    UInt128 sum_x_sq = 0;
    std::uint64_t sum_y = 0;
    std::uint64_t exists_count = 0;  // trials with X_r >= 1
    std::uint64_t ratio_trials = 0;  // trials with Y_r >= 1
    UInt128 ratio_sum_fixed = 0;     // sum of round(2^32 X/Y)
    UInt128 ratio_sq_sum_fixed = 0;  // sum of round(2^32 X/Y)^2
    std::uint64_t x_min = UINT64_MAX;
    std::uint64_t x_max = 0;

    void add(const CliqueSizeCounts& counts);
    TrialAggregate& merge(const TrialAggregate& other);

    std::uint64_t excluded_trials() const { return trials - ratio_trials; }
    double mean_x() const;
    double sum_x_sq_value() const;
    double ratio_sum() const;

    friend bool operator==(const TrialAggregate&, const TrialAggregate&) = default;
};

TrialAggregate merge(TrialAggregate a, const TrialAggregate& b);

struct TrialSpec {
    std::size_t n = 0;
    double p = 0.0;
    std::size_t r = 1;
    std::uint64_t master_seed = 0;
};

// Graph of trial `index`.
Graph trial_graph(const TrialSpec& spec, std::uint64_t index);

// Trials [first, last) accumulated in index order on the calling thread.
TrialAggregate run_trial_range(const TrialSpec& spec, std::uint64_t first, std::uint64_t last);

// Requires 1 <= r <= n and trials >= 1. workers == 0 means one worker.
TrialAggregate run_trials(std::size_t n, double p, std::size_t r, std::uint64_t trials, std::uint64_t master_seed,
                          unsigned workers = 1);

enum class IntervalMethod { Wilson95, Normal95 };

std::string_view to_string(IntervalMethod method);

struct EstimateWithCI {
    double point = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    IntervalMethod method = IntervalMethod::Normal95;
};

// exists_count/trials with a 95% Wilson score interval.
EstimateWithCI estimate_existence_probability(const TrialAggregate& agg);

// Mean of X_r/Y_r over trials with Y_r > 0, normal 95% interval clipped to
// [0,1]. Throws UndefinedEstimateError when no trial had Y_r > 0.
EstimateWithCI estimate_mean_ratio(const TrialAggregate& agg);

// Mean of X_r with normal 95% interval; also exposes the standard error.
EstimateWithCI estimate_mean_dominating(const TrialAggregate& agg);
double standard_error_x(const TrialAggregate& agg);

struct ConcentrationReport {
    std::uint64_t trials = 0;
    std::uint64_t within = 0;  // trials with |X_r - E X_r| <= half_width
    double expected = 0.0;     // E(X_r)
    double multiplier = 0.0;   // (ln n)^3 n^(-beta/2)
    double half_width = 0.0;   // expected * multiplier
    double fraction() const { return trials ? static_cast<double>(within) / static_cast<double>(trials) : 0.0; }

    friend bool operator==(const ConcentrationReport&, const ConcentrationReport&) = default;
};

ConcentrationReport concentration_check(std::size_t n, double p, std::size_t r, std::uint64_t trials,
                                        std::uint64_t seed, unsigned workers = 1);

// Coupled existence check across a list of p values: within a trial every p
// thresholds the same uniforms, so the graphs are nested.
struct MonotonicityReport {
    std::uint64_t trials = 0;
    // Trials where an r-node dominating clique exists at some p but not at a
    // larger p in the list.
    std::uint64_t fixed_size_violations = 0;
    // Same, for "some dominating clique of any size exists".
    std::uint64_t any_size_violations = 0;
    std::vector<std::uint64_t> fixed_size_exists;  // per p
    std::vector<std::uint64_t> any_size_exists;    // per p

    friend bool operator==(const MonotonicityReport&, const MonotonicityReport&) = default;
};

// ps must be strictly increasing.
MonotonicityReport coupled_monotonicity(std::size_t n, std::size_t r, std::span<const double> ps,
                                        std::uint64_t trials, std::uint64_t seed, unsigned workers = 1);

}  // namespace domclique::montecarlo
