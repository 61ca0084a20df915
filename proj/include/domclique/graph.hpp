#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <iterator>
#include <span>
#include <utility>
#include <vector>

namespace domclique {

using Word = std::uint64_t;
inline constexpr std::size_t kWordBits = 64;

constexpr std::size_t words_for(std::size_t bits) noexcept {
    return (bits + kWordBits - 1) / kWordBits;
}

// Subset of {0..universe-1} as a bit-vector with a cached cardinality.
class NodeSet {
public:
    NodeSet() = default;
    explicit NodeSet(std::size_t universe);
    NodeSet(std::size_t universe, std::initializer_list<std::size_t> members);

    static NodeSet all(std::size_t universe);
    static NodeSet from_words(std::size_t universe, std::span<const Word> words);

    std::size_t universe() const noexcept { return universe_; }
    std::size_t size() const noexcept { return size_; }
    bool empty() const noexcept { return size_ == 0; }

    bool contains(std::size_t v) const;
    void insert(std::size_t v);
    void erase(std::size_t v);

    std::span<const Word> words() const noexcept { return words_; }
    std::vector<std::size_t> members() const;

    friend bool operator==(const NodeSet&, const NodeSet&) = default;

private:
    std::size_t universe_ = 0;
    std::vector<Word> words_;
    std::size_t size_ = 0;
};

// Undirected simple graph on nodes {0..n-1}. Row i of the adjacency matrix is
// the neighbourhood of i as a bit-vector; rows are symmetric and have a clear
// diagonal. Mutation is only through add_edge, so a const Graph can be shared
// freely between threads.
class Graph {
public:
    static constexpr std::size_t kDefaultMaxNodes = 8192;

    Graph() = default;
    // Throws CapacityError when n > max_nodes.
    explicit Graph(std::size_t n, std::size_t max_nodes = kDefaultMaxNodes);

    static Graph complete(std::size_t n);
    static Graph path(std::size_t n);
    static Graph cycle(std::size_t n);
    static Graph from_edges(std::size_t n,
                            std::initializer_list<std::pair<std::size_t, std::size_t>> edges);

    std::size_t node_count() const noexcept { return n_; }
    std::size_t word_count() const noexcept { return words_; }

    void add_edge(std::size_t i, std::size_t j);
    bool adjacent(std::size_t i, std::size_t j) const;

    std::span<const Word> row(std::size_t i) const noexcept {
        return {bits_.data() + i * words_, words_};
    }

    std::size_t degree(std::size_t i) const noexcept;
    std::size_t edge_count() const noexcept;

    friend bool operator==(const Graph&, const Graph&) = default;

private:
    std::size_t n_ = 0;
    std::size_t words_ = 0;
    std::vector<Word> bits_;
};

struct GnpParams {
    std::size_t n = 0;
    double p = 0.0;
    std::uint64_t seed = 0;
    std::size_t max_nodes = Graph::kDefaultMaxNodes;
};

// Draws one 53-bit uniform u per potential edge from SplitMix64(seed), visiting
// pairs (i,j), i<j, in row-major order (i ascending, then j ascending); the
// edge is present iff u < p. Two calls with the same (n, seed) and p1 <= p2
// therefore give nested edge sets.
// Throws DomainError for p outside [0,1], CapacityError for n > max_nodes.
Graph sample_gnp(const GnpParams& params);

// ln Pr[G] = |E| ln p + (C(n,2) - |E|) ln(1-p). Requires 0 < p < 1.
double graph_probability_log(const Graph& g, double p);

constexpr std::size_t pair_count(std::size_t n) noexcept { return n * (n - 1) / 2; }

// Bit k of `mask` is the k-th pair in row-major (i<j) order.
Graph graph_from_edge_mask(std::size_t n, std::uint64_t mask);
std::uint64_t edge_mask(const Graph& g);

inline constexpr std::size_t kMaxEnumerableNodes = 7;

// Every labelled graph on n nodes, in increasing edge-mask order 0..2^C(n,2)-1.
class AllGraphs {
public:
    // Throws CapacityError when n > kMaxEnumerableNodes.
    explicit AllGraphs(std::size_t n);

    class iterator {
    public:
        using iterator_category = std::input_iterator_tag;
        using value_type = Graph;
        using difference_type = std::ptrdiff_t;

        iterator() = default;
        iterator(std::size_t n, std::uint64_t mask) : n_(n), mask_(mask) {}

        Graph operator*() const { return graph_from_edge_mask(n_, mask_); }
        iterator& operator++() {
            ++mask_;
            return *this;
        }
        iterator operator++(int) {
            auto copy = *this;
            ++mask_;
            return copy;
        }
        std::uint64_t mask() const noexcept { return mask_; }
        friend bool operator==(const iterator& a, const iterator& b) {
            return a.mask_ == b.mask_;
        }

    private:
        std::size_t n_ = 0;
        std::uint64_t mask_ = 0;
    };

    iterator begin() const { return {n_, 0}; }
    iterator end() const { return {n_, count_}; }
    std::uint64_t size() const noexcept { return count_; }

private:
    std::size_t n_;
    std::uint64_t count_;
};

// Debug dump: "n m" then m lines "i j" with i<j, ascending.
void write_edge_list(std::ostream& out, const Graph& g);
Graph read_edge_list(std::istream& in);

namespace bits {

inline std::size_t popcount(std::span<const Word> w) noexcept {
    std::size_t c = 0;
    for (Word x : w) c += static_cast<std::size_t>(std::popcount(x));
    return c;
}

inline std::size_t popcount_and(std::span<const Word> a, std::span<const Word> b) noexcept {
    std::size_t c = 0;
    for (std::size_t i = 0; i < a.size(); ++i) c += static_cast<std::size_t>(std::popcount(a[i] & b[i]));
    return c;
}

inline bool any(std::span<const Word> w) noexcept {
    for (Word x : w)
        if (x) return true;
    return false;
}

inline bool test(std::span<const Word> w, std::size_t v) noexcept {
    return (w[v / kWordBits] >> (v % kWordBits)) & 1U;
}

}  // namespace bits

}  // namespace domclique
