#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "domclique/graph.hpp"

namespace domclique {

struct CliqueSizeCounts {
    std::uint64_t maximal = 0;     // Y_r(G)
    std::uint64_t dominating = 0;  // X_r(G)

    friend bool operator==(const CliqueSizeCounts&, const CliqueSizeCounts&) = default;
};

// Realised clique statistics of one graph, indexed by clique size 0..n.
struct CliqueCounts {
    std::vector<CliqueSizeCounts> by_size;

    std::uint64_t maximal(std::size_t r) const { return r < by_size.size() ? by_size[r].maximal : 0; }
    std::uint64_t dominating(std::size_t r) const { return r < by_size.size() ? by_size[r].dominating : 0; }
    std::uint64_t total_maximal() const;
};

// Every node outside s has a neighbour in s.
bool is_dominating(const Graph& g, const NodeSet& s);

// s is complete and no outside node is adjacent to all of s.
bool is_maximal_clique(const Graph& g, const NodeSet& s);

// Maximal and dominating r-cliques in one pass. An r-set S is counted as
// dominating iff it is complete and every outside node has between 1 and r-1
// neighbours in S, which is the same as maximal-clique-and-dominating-set.
// Requires 1 <= r <= n.
CliqueSizeCounts count_r_cliques(const Graph& g, std::size_t r);

std::uint64_t count_dominating_r_cliques(const Graph& g, std::size_t r);
std::uint64_t count_maximal_r_cliques(const Graph& g, std::size_t r);

// Bron-Kerbosch with Tomita pivoting over bit-vector candidate sets.
CliqueCounts enumerate_maximal_cliques(const Graph& g);

// Size of the largest clique (branch and bound with greedy colouring).
// Requires n >= 1.
std::size_t clique_number(const Graph& g);

inline constexpr std::size_t kMaxExhaustiveNodes = 6;

// Exact moments over all 2^C(n,2) labelled graphs weighted by Pr[G]. The sum
// runs in increasing edge-mask order. Require 1 <= r <= n <= 6, 0 < p < 1.
double exhaustive_expectation_Xr(std::size_t n, std::size_t r, double p);
double exhaustive_expectation_Yr(std::size_t n, std::size_t r, double p);
double exhaustive_second_moment_Xr(std::size_t n, std::size_t r, double p);

}  // namespace domclique
