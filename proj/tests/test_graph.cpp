#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "domclique/errors.hpp"
#include "domclique/graph.hpp"
#include "domclique/rng.hpp"
#include "oracles.hpp"

using namespace domclique;

namespace {

bool well_formed(const Graph& g) {
    for (std::size_t i = 0; i < g.node_count(); ++i) {
        if (g.adjacent(i, i)) return false;
        for (std::size_t j = 0; j < g.node_count(); ++j)
            if (g.adjacent(i, j) != g.adjacent(j, i)) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("NodeSet keeps its cached size in step with the bits") {
    NodeSet s(130, {0, 64, 129});
    CHECK(s.size() == 3);
    s.insert(64);
    CHECK(s.size() == 3);
    s.erase(0);
    CHECK(s.size() == 2);
    CHECK(s.contains(129));
    CHECK_FALSE(s.contains(0));
    CHECK(s.members() == std::vector<std::size_t>{64, 129});
    CHECK(NodeSet::all(70).size() == 70);
    CHECK_THROWS_AS(s.insert(130), DomainError);
}

TEST_CASE("sample_gnp: p = 0 and p = 1 force the edge set") {
    const Graph empty = sample_gnp({5, 0.0, 123});
    CHECK(empty.node_count() == 5);
    CHECK(empty.edge_count() == 0);

    const Graph full = sample_gnp({5, 1.0, 99});
    CHECK(full == Graph::complete(5));
}

TEST_CASE("sample_gnp is a pure function of (n, p, seed)") {
    const Graph a = sample_gnp({100, 0.5, 42});
    const Graph b = sample_gnp({100, 0.5, 42});
    CHECK(a == b);
    const Graph c = sample_gnp({100, 0.5, 43});
    CHECK_FALSE(a == c);
}

TEST_CASE("sample_gnp draws one uniform per pair in row-major order") {
    // Reproduce the documented procedure by hand.
    const std::size_t n = 9;
    const double p = 0.37;
    SplitMix64 rng(2024);
    Graph expected(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (rng.next_unit() < p) expected.add_edge(i, j);
    CHECK(sample_gnp({n, p, 2024}) == expected);
}

TEST_CASE("sample_gnp with a shared seed nests edge sets as p grows") {
    const Graph lo = sample_gnp({40, 0.3, 7});
    const Graph hi = sample_gnp({40, 0.6, 7});
    for (std::size_t i = 0; i < 40; ++i)
        for (std::size_t j = i + 1; j < 40; ++j)
            if (lo.adjacent(i, j)) CHECK(hi.adjacent(i, j));
}

TEST_CASE("sampled graphs are symmetric with no self-loops") {
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        const double p = 0.1 + 0.8 * static_cast<double>(seed % 9) / 8.0;
        const Graph g = sample_gnp({static_cast<std::size_t>(3 + seed % 70), p, seed});
        REQUIRE(well_formed(g));
    }
}

TEST_CASE("edge density of G(2000,p) is within 4 standard deviations of p") {
    for (double p : {0.1, 0.5, 0.9}) {
        const Graph g = sample_gnp({2000, p, 11});
        const double pairs = static_cast<double>(pair_count(2000));
        const double density = static_cast<double>(g.edge_count()) / pairs;
        const double sd = std::sqrt(p * (1 - p) / pairs);
        CHECK(std::abs(density - p) <= 4 * sd);
    }
}

TEST_CASE("sample_gnp rejects bad parameters") {
    CHECK_THROWS_AS(sample_gnp({10, 1.5, 1}), DomainError);
    CHECK_THROWS_AS(sample_gnp({10, -0.1, 1}), DomainError);
    CHECK_THROWS_AS(sample_gnp({Graph::kDefaultMaxNodes + 1, 0.5, 1}), CapacityError);
    CHECK_THROWS_AS(sample_gnp({20, 0.5, 1, 10}), CapacityError);
}

TEST_CASE("graph_probability_log") {
    CHECK(graph_probability_log(Graph(2), 0.5) == doctest::Approx(std::log(0.5)).epsilon(1e-15));
    CHECK(graph_probability_log(Graph::complete(3), 0.5) == doctest::Approx(3 * std::log(0.5)).epsilon(1e-15));
    CHECK(graph_probability_log(Graph::path(3), 0.25) ==
          doctest::Approx(2 * std::log(0.25) + std::log(0.75)).epsilon(1e-15));
    CHECK_THROWS_AS(graph_probability_log(Graph(3), 0.0), DomainError);
    CHECK_THROWS_AS(graph_probability_log(Graph(3), 1.0), DomainError);
}

TEST_CASE("all_graphs enumerates every labelled graph once") {
    CHECK(AllGraphs(2).size() == 2);
    CHECK(AllGraphs(3).size() == 8);
    CHECK(AllGraphs(4).size() == 64);
    for (std::size_t n = 0; n <= 5; ++n) {
        std::set<std::uint64_t> seen;
        std::uint64_t count = 0;
        for (const Graph& g : AllGraphs(n)) {
            REQUIRE(well_formed(g));
            seen.insert(edge_mask(g));
            ++count;
        }
        CHECK(count == (std::uint64_t{1} << pair_count(n)));
        CHECK(seen.size() == count);
    }
    CHECK_THROWS_AS(AllGraphs(8), CapacityError);
}

TEST_CASE("probabilities over all_graphs sum to one") {
    for (std::size_t n = 1; n <= 5; ++n) {
        for (double p : {0.3, 0.5, 0.7}) {
            double total = 0.0;
            for (const Graph& g : AllGraphs(n)) total += std::exp(graph_probability_log(g, p));
            CHECK(std::abs(total - 1.0) <= 1e-12);
        }
    }
}

TEST_CASE("edge mask bit k is the k-th row-major pair") {
    // pairs of 4 nodes: (0,1) (0,2) (0,3) (1,2) (1,3) (2,3)
    const Graph g = graph_from_edge_mask(4, 0b100001);
    CHECK(g.adjacent(0, 1));
    CHECK(g.adjacent(2, 3));
    CHECK(g.edge_count() == 2);
}

TEST_CASE("edge list dump reads back to the same graph") {
    const Graph g = sample_gnp({30, 0.4, 5});
    std::stringstream ss;
    write_edge_list(ss, g);
    std::string header;
    std::getline(ss, header);
    CHECK(header == "30 " + std::to_string(g.edge_count()));
    ss.seekg(0);
    CHECK(read_edge_list(ss) == g);

    std::stringstream bad("3 2\n0 1\n");
    CHECK_THROWS_AS(read_edge_list(bad), DomainError);
}

TEST_CASE("add_edge rejects loops and out-of-range endpoints") {
    Graph g(3);
    CHECK_THROWS_AS(g.add_edge(1, 1), DomainError);
    CHECK_THROWS_AS(g.add_edge(0, 3), DomainError);
}
