#pragma once

// Test-only reference implementations. They use plain adjacency lookups and
// the textbook definitions, sharing no code with the library's bit-vector
// search.

#include <cmath>
#include <cstdint>
#include <vector>

#include "domclique/graph.hpp"

namespace oracle {

struct SizeCounts {
    std::uint64_t maximal = 0;
    std::uint64_t dominating = 0;
};

// Every subset of the node set, tested with the definitions: complete, no
// outside node adjacent to every member (maximal), every outside node has a
// member neighbour (dominating).
inline std::vector<SizeCounts> brute_force_counts(const domclique::Graph& g) {
    const std::size_t n = g.node_count();
    std::vector<SizeCounts> out(n + 1);
    for (std::uint64_t s = 1; s < (std::uint64_t{1} << n); ++s) {
        std::vector<std::size_t> members;
        for (std::size_t v = 0; v < n; ++v)
            if ((s >> v) & 1U) members.push_back(v);
        bool complete = true;
        for (std::size_t a = 0; a < members.size() && complete; ++a)
            for (std::size_t b = a + 1; b < members.size() && complete; ++b)
                complete = g.adjacent(members[a], members[b]);
        if (!complete) continue;
        bool maximal = true, dominating = true;
        for (std::size_t u = 0; u < n; ++u) {
            if ((s >> u) & 1U) continue;
            std::size_t hits = 0;
            for (auto m : members) hits += g.adjacent(u, m) ? 1 : 0;
            if (hits == members.size()) maximal = false;
            if (hits == 0) dominating = false;
        }
        if (maximal) {
            ++out[members.size()].maximal;
            if (dominating) ++out[members.size()].dominating;
        }
    }
    return out;
}

inline double probability(const domclique::Graph& g, double p) {
    const double m = static_cast<double>(g.edge_count());
    const double pairs = static_cast<double>(g.node_count() * (g.node_count() - 1) / 2);
    return std::pow(p, m) * std::pow(1.0 - p, pairs - m);
}

inline double binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0.0;
    double c = 1.0;
    for (std::uint64_t i = 0; i < k; ++i) c = c * static_cast<double>(n - i) / static_cast<double>(i + 1);
    return c;
}

}  // namespace oracle
