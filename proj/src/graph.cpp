#include "domclique/graph.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "domclique/errors.hpp"
#include "domclique/rng.hpp"

namespace domclique {

NodeSet::NodeSet(std::size_t universe) : universe_(universe), words_(words_for(universe), 0) {}

NodeSet::NodeSet(std::size_t universe, std::initializer_list<std::size_t> members) : NodeSet(universe) {
    for (auto v : members) insert(v);
}

NodeSet NodeSet::all(std::size_t universe) {
    NodeSet s(universe);
    for (std::size_t v = 0; v < universe; ++v) s.insert(v);
    return s;
}

NodeSet NodeSet::from_words(std::size_t universe, std::span<const Word> words) {
    if (words.size() != words_for(universe)) throw DomainError("NodeSet: word count does not match universe");
    NodeSet s(universe);
    s.words_.assign(words.begin(), words.end());
    if (universe % kWordBits != 0 && !s.words_.empty()) {
        s.words_.back() &= (Word{1} << (universe % kWordBits)) - 1;
    }
    s.size_ = bits::popcount(s.words_);
    return s;
}

bool NodeSet::contains(std::size_t v) const {
    return v < universe_ && bits::test(words_, v);
}

void NodeSet::insert(std::size_t v) {
    if (v >= universe_) throw DomainError("NodeSet: node " + std::to_string(v) + " outside universe");
    Word& w = words_[v / kWordBits];
    const Word bit = Word{1} << (v % kWordBits);
    if (!(w & bit)) {
        w |= bit;
        ++size_;
    }
}

void NodeSet::erase(std::size_t v) {
    if (v >= universe_) return;
    Word& w = words_[v / kWordBits];
    const Word bit = Word{1} << (v % kWordBits);
    if (w & bit) {
        w &= ~bit;
        --size_;
    }
}

std::vector<std::size_t> NodeSet::members() const {
    std::vector<std::size_t> out;
    out.reserve(size_);
    for (std::size_t v = 0; v < universe_; ++v)
        if (bits::test(words_, v)) out.push_back(v);
    return out;
}

Graph::Graph(std::size_t n, std::size_t max_nodes) : n_(n), words_(words_for(n)) {
    if (n > max_nodes) {
        throw CapacityError("graph: " + std::to_string(n) + " nodes exceeds capacity " + std::to_string(max_nodes));
    }
    bits_.assign(n_ * words_, 0);
}

Graph Graph::complete(std::size_t n) {
    Graph g(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) g.add_edge(i, j);
    return g;
}

Graph Graph::path(std::size_t n) {
    Graph g(n);
    for (std::size_t i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
    return g;
}

Graph Graph::cycle(std::size_t n) {
    Graph g = path(n);
    if (n >= 3) g.add_edge(n - 1, 0);
    return g;
}

Graph Graph::from_edges(std::size_t n, std::initializer_list<std::pair<std::size_t, std::size_t>> edges) {
    Graph g(n);
    for (auto [i, j] : edges) g.add_edge(i, j);
    return g;
}

void Graph::add_edge(std::size_t i, std::size_t j) {
    if (i >= n_ || j >= n_) throw DomainError("graph: edge endpoint out of range");
    if (i == j) throw DomainError("graph: self-loops are not allowed");
    bits_[i * words_ + j / kWordBits] |= Word{1} << (j % kWordBits);
    bits_[j * words_ + i / kWordBits] |= Word{1} << (i % kWordBits);
}

bool Graph::adjacent(std::size_t i, std::size_t j) const {
    return bits::test(row(i), j);
}

std::size_t Graph::degree(std::size_t i) const noexcept {
    return bits::popcount(row(i));
}

std::size_t Graph::edge_count() const noexcept {
    return bits::popcount(bits_) / 2;
}

Graph sample_gnp(const GnpParams& params) {
    if (!(params.p >= 0.0 && params.p <= 1.0)) throw DomainError("sample_gnp: p must lie in [0,1]");
    Graph g(params.n, params.max_nodes);
    SplitMix64 rng(params.seed);
    for (std::size_t i = 0; i < params.n; ++i) {
        for (std::size_t j = i + 1; j < params.n; ++j) {
            if (rng.next_unit() < params.p) g.add_edge(i, j);
        }
    }
    return g;
}

double graph_probability_log(const Graph& g, double p) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("graph_probability_log: p must lie in (0,1)");
    const auto present = static_cast<double>(g.edge_count());
    const auto absent = static_cast<double>(pair_count(g.node_count())) - present;
    return present * std::log(p) + absent * std::log1p(-p);
}

Graph graph_from_edge_mask(std::size_t n, std::uint64_t mask) {
    if (pair_count(n) > 64) throw CapacityError("graph_from_edge_mask: more than 64 node pairs");
    Graph g(n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j, ++k) {
            if ((mask >> k) & 1U) g.add_edge(i, j);
        }
    }
    return g;
}

std::uint64_t edge_mask(const Graph& g) {
    const std::size_t n = g.node_count();
    if (pair_count(n) > 64) throw CapacityError("edge_mask: more than 64 node pairs");
    std::uint64_t mask = 0;
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j, ++k) {
            if (g.adjacent(i, j)) mask |= std::uint64_t{1} << k;
        }
    }
    return mask;
}

AllGraphs::AllGraphs(std::size_t n) : n_(n) {
    if (n > kMaxEnumerableNodes) {
        throw CapacityError("all_graphs: n=" + std::to_string(n) + " exceeds " + std::to_string(kMaxEnumerableNodes));
    }
    count_ = std::uint64_t{1} << pair_count(n);
}

void write_edge_list(std::ostream& out, const Graph& g) {
    const std::size_t n = g.node_count();
    out << n << ' ' << g.edge_count() << '\n';
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (g.adjacent(i, j)) out << i << ' ' << j << '\n';
}

Graph read_edge_list(std::istream& in) {
    std::size_t n = 0, m = 0;
    if (!(in >> n >> m)) throw DomainError("read_edge_list: missing header");
    Graph g(n);
    for (std::size_t e = 0; e < m; ++e) {
        std::size_t i = 0, j = 0;
        if (!(in >> i >> j)) throw DomainError("read_edge_list: truncated edge list");
        g.add_edge(i, j);
    }
    return g;
}

}  // namespace domclique
