#include "domclique/exact_count.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <string>

#include "domclique/errors.hpp"

namespace domclique {

namespace {

void check_subset(const Graph& g, const NodeSet& s, const char* op) {
    if (s.universe() != g.node_count()) {
        throw DomainError(std::string(op) + ": node set universe does not match graph");
    }
}

void check_size(const Graph& g, std::size_t r, const char* op) {
    if (r < 1 || r > g.node_count()) {
        throw DomainError(std::string(op) + ": r must satisfy 1 <= r <= n");
    }
}

// Clear the padding bits above n in the last word.
void mask_tail(std::span<Word> w, std::size_t n) {
    if (n % kWordBits != 0 && !w.empty()) w.back() &= (Word{1} << (n % kWordBits)) - 1;
}

template <typename F>
void for_each_bit(std::span<const Word> w, F&& f) {
    for (std::size_t k = 0; k < w.size(); ++k) {
        Word x = w[k];
        while (x) {
            const auto b = static_cast<std::size_t>(std::countr_zero(x));
            f(k * kWordBits + b);
            x &= x - 1;
        }
    }
}

bool intersects(std::span<const Word> a, std::span<const Word> b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] & b[i]) return true;
    return false;
}

// Bron-Kerbosch with pivoting. With target > 0 only cliques of exactly that
// size are reported and the recursion never goes deeper than target.
// Each recursion level owns three bit-vectors (P, X, U) in a flat buffer;
// U is the union of closed neighbourhoods of R, so R dominates iff U is full.
class MaximalCliqueSearch {
public:
    MaximalCliqueSearch(const Graph& g, std::size_t target)
        : g_(g), n_(g.node_count()), words_(g.word_count()), target_(target) {
        counts_.by_size.assign(n_ + 1, {});
        branches_.resize(n_ + 1);
        colours_.resize(n_ + 1);
    }

    CliqueCounts run() {
        if (n_ == 0) return counts_;
        auto root = level(0);
        auto P = root.subspan(0, words_);
        std::fill(P.begin(), P.end(), ~Word{0});
        mask_tail(P, n_);
        auto X = root.subspan(words_, words_);
        std::fill(X.begin(), X.end(), 0);
        auto U = root.subspan(2 * words_, words_);
        std::fill(U.begin(), U.end(), 0);
        expand(0, n_);
        return counts_;
    }

private:
    std::span<Word> level(std::size_t depth) {
        const std::size_t need = (depth + 1) * 3 * words_;
        if (buffer_.size() < need) buffer_.resize(need);
        return {buffer_.data() + depth * 3 * words_, 3 * words_};
    }

    bool full(std::span<const Word> u) const { return bits::popcount(u) == n_; }

    void report(std::size_t size, std::span<const Word> U) {
        auto& c = counts_.by_size[size];
        ++c.maximal;
        if (full(U)) ++c.dominating;
    }

    // Greedy sequential colouring of P. Fills `order` with the nodes of P
    // sorted by colour and `colour` with each one's colour (1-based).
    void colour_order(std::span<const Word> P, std::vector<std::size_t>& order, std::vector<std::size_t>& colour) {
        scratch_.assign(P.begin(), P.end());
        pool_.resize(words_);
        std::size_t c = 0;
        while (bits::any(scratch_)) {
            ++c;
            pool_ = scratch_;
            for (std::size_t k = 0; k < words_; ++k) {
                while (pool_[k]) {
                    const std::size_t v = k * kWordBits + static_cast<std::size_t>(std::countr_zero(pool_[k]));
                    const Word bit = Word{1} << (v % kWordBits);
                    scratch_[k] &= ~bit;
                    pool_[k] &= ~bit;
                    auto row = g_.row(v);
                    for (std::size_t j = k; j < words_; ++j) pool_[j] &= ~row[j];
                    order.push_back(v);
                    colour.push_back(c);
                }
            }
        }
    }

    // Some excluded node is adjacent to every candidate, so every clique
    // grown from here can be extended by it.
    bool excluded_covers(std::span<const Word> P, std::span<const Word> X) const {
        bool covered = false;
        for_each_bit(X, [&](std::size_t x) {
            if (covered) return;
            auto row = g_.row(x);
            for (std::size_t k = 0; k < words_; ++k)
                if (P[k] & ~row[k]) return;
            covered = true;
        });
        return covered;
    }

    // A maximal clique R+S with S a t-subset of P needs every other node of
    // P+X to miss some member of S, so the t largest non-degrees within P+X
    // must add up to at least |P+X| - t.
    bool coverable(std::span<const Word> P, std::span<const Word> X, std::size_t p_size, std::size_t t) {
        const std::size_t m = p_size + bits::popcount(X);
        nondeg_.clear();
        for_each_bit(P, [&](std::size_t v) {
            auto row = g_.row(v);
            nondeg_.push_back(m - 1 - bits::popcount_and(P, row) - bits::popcount_and(X, row));
        });
        if (t < nondeg_.size()) {
            std::nth_element(nondeg_.begin(), nondeg_.begin() + static_cast<std::ptrdiff_t>(t), nondeg_.end(),
                             std::greater<>());
            nondeg_.resize(t);
        }
        std::size_t reach = 0;
        for (std::size_t d : nondeg_) reach += d;
        return reach + t >= m;
    }

    std::size_t choose_pivot(std::span<const Word> P, std::span<const Word> X) const {
        std::size_t best = n_;
        std::size_t best_score = 0;
        auto consider = [&](std::size_t u) {
            const std::size_t score = bits::popcount_and(P, g_.row(u));
            if (best == n_ || score > best_score) {
                best = u;
                best_score = score;
            }
        };
        for_each_bit(P, consider);
        for_each_bit(X, consider);
        return best;
    }

    void expand(std::size_t depth, std::size_t p_size) {
        // Buffers may move when deeper levels grow the pool, so take spans
        // from the level index after every recursive call.
        auto cur = level(depth);
        auto P = cur.subspan(0, words_);
        auto X = cur.subspan(words_, words_);
        auto U = cur.subspan(2 * words_, words_);

        if (p_size == 0) {
            if (depth > 0 && (target_ == 0 || depth == target_) && !bits::any(X)) report(depth, U);
            return;
        }
        if (target_ != 0) {
            if (depth >= target_) return;
            if (depth + p_size < target_) return;
        }
        if (excluded_covers(P, X)) return;
        if (target_ != 0 && target_ - depth >= 2 && target_ - depth <= 3 && !coverable(P, X, p_size, target_ - depth)) return;

        // Fixed size: branch in decreasing colour order and stop once the
        // colours left cannot complete the clique. Without a size target,
        // branch on the nodes outside the pivot's neighbourhood.
        auto& branch = branches_[depth];
        auto& colour = colours_[depth];
        branch.clear();
        colour.clear();
        if (target_ != 0) {
            colour_order(P, branch, colour);
            std::reverse(branch.begin(), branch.end());
            std::reverse(colour.begin(), colour.end());
        } else {
            const std::size_t pivot = choose_pivot(P, X);
            auto prow = g_.row(pivot);
            for (std::size_t k = 0; k < words_; ++k) {
                Word x = P[k] & ~prow[k];
                while (x) {
                    branch.push_back(k * kWordBits + static_cast<std::size_t>(std::countr_zero(x)));
                    x &= x - 1;
                }
            }
        }

        const bool last_level = target_ != 0 && depth + 1 == target_;
        for (std::size_t idx = 0; idx < branch.size(); ++idx) {
            const std::size_t v = branch[idx];
            if (target_ != 0 && (depth + p_size < target_ || depth + colour[idx] < target_)) break;
            cur = level(depth);
            P = cur.subspan(0, words_);
            X = cur.subspan(words_, words_);
            U = cur.subspan(2 * words_, words_);
            auto vrow = g_.row(v);

            if (last_level) {
                // R+v has size target: maximal iff no candidate or excluded
                // node is adjacent to v.
                if (!intersects(P, vrow) && !intersects(X, vrow)) {
                    auto& c = counts_.by_size[depth + 1];
                    ++c.maximal;
                    std::size_t covered = 0;
                    for (std::size_t k = 0; k < words_; ++k) {
                        Word u = U[k] | vrow[k];
                        if (k == v / kWordBits) u |= Word{1} << (v % kWordBits);
                        covered += static_cast<std::size_t>(std::popcount(u));
                    }
                    if (covered == n_) ++c.dominating;
                }
            } else {
                auto next = level(depth + 1);
                cur = level(depth);
                P = cur.subspan(0, words_);
                X = cur.subspan(words_, words_);
                U = cur.subspan(2 * words_, words_);
                auto nP = next.subspan(0, words_);
                auto nX = next.subspan(words_, words_);
                auto nU = next.subspan(2 * words_, words_);
                std::size_t np = 0;
                for (std::size_t k = 0; k < words_; ++k) {
                    nP[k] = P[k] & vrow[k];
                    nX[k] = X[k] & vrow[k];
                    nU[k] = U[k] | vrow[k];
                    np += static_cast<std::size_t>(std::popcount(nP[k]));
                }
                nU[v / kWordBits] |= Word{1} << (v % kWordBits);
                expand(depth + 1, np);
                cur = level(depth);
                P = cur.subspan(0, words_);
                X = cur.subspan(words_, words_);
            }
            P[v / kWordBits] &= ~(Word{1} << (v % kWordBits));
            X[v / kWordBits] |= Word{1} << (v % kWordBits);
            --p_size;
        }
    }

    const Graph& g_;
    std::size_t n_;
    std::size_t words_;
    std::size_t target_;
    std::vector<Word> buffer_;
    std::vector<std::vector<std::size_t>> branches_;  // per depth
    std::vector<std::vector<std::size_t>> colours_;   // per depth
    std::vector<std::size_t> nondeg_;
    std::vector<Word> scratch_;
    std::vector<Word> pool_;
    CliqueCounts counts_;
};

// Maximum clique by branch and bound; the bound is the number of colours in a
// greedy sequential colouring of the candidate set. Nodes are renumbered in
// smallest-last order and a greedy clique seeds the bound. Once a candidate
// set fits in half the words of the current adjacency matrix, the search
// continues on the induced subgraph renumbered densely.
class MaximumCliqueSearch {
public:
    explicit MaximumCliqueSearch(const Graph& g) : n_(g.node_count()) {
        std::vector<std::size_t> order(n_);
        std::vector<std::size_t> deg(n_);
        std::vector<bool> gone(n_, false);
        for (std::size_t i = 0; i < n_; ++i) deg[i] = g.degree(i);
        for (std::size_t slot = n_; slot-- > 0;) {
            std::size_t pick = n_;
            for (std::size_t v = 0; v < n_; ++v)
                if (!gone[v] && (pick == n_ || deg[v] < deg[pick])) pick = v;
            order[slot] = pick;
            gone[pick] = true;
            for_each_bit(g.row(pick), [&](std::size_t u) {
                if (!gone[u]) --deg[u];
            });
        }
        std::vector<std::size_t> pos(n_);
        for (std::size_t i = 0; i < n_; ++i) pos[order[i]] = i;
        root_.words = g.word_count();
        root_.rows.assign(n_ * root_.words, 0);
        for (std::size_t i = 0; i < n_; ++i) {
            for_each_bit(g.row(i), [&](std::size_t j) { root_.set(pos[i], pos[j]); });
        }
    }

    std::size_t run() {
        if (n_ == 0) return 0;
        best_ = greedy_clique();
        levels_.resize(n_ + 2);
        position_.resize(n_);
        for (auto& lv : levels_) {
            lv.P.resize(root_.words);
            lv.uncoloured.resize(root_.words);
            lv.pool.resize(root_.words);
        }
        std::fill(levels_[0].P.begin(), levels_[0].P.end(), ~Word{0});
        mask_tail(levels_[0].P, n_);
        search(root_, 0);
        return best_;
    }

private:
    struct Adjacency {
        std::size_t words = 0;
        std::vector<Word> rows;
        const Word* row(std::size_t v) const { return rows.data() + v * words; }
        void set(std::size_t u, std::size_t v) { rows[u * words + v / kWordBits] |= Word{1} << (v % kWordBits); }
    };

    struct Level {
        std::vector<Word> P;
        std::vector<Word> uncoloured;
        std::vector<Word> pool;
        std::vector<std::size_t> order;
        std::vector<std::size_t> colour;
        std::vector<std::size_t> members;
        Adjacency sub;
    };

    // Repeatedly add the candidate with the most candidate neighbours.
    std::size_t greedy_clique() const {
        const std::size_t w = root_.words;
        std::vector<Word> P(w, ~Word{0});
        mask_tail(P, n_);
        std::size_t size = 0;
        while (bits::any(P)) {
            std::size_t best_v = n_, best_deg = 0;
            for_each_bit(P, [&](std::size_t v) {
                const std::size_t d = bits::popcount_and(P, {root_.row(v), w});
                if (best_v == n_ || d > best_deg) {
                    best_v = v;
                    best_deg = d;
                }
            });
            const Word* r = root_.row(best_v);
            for (std::size_t k = 0; k < w; ++k) P[k] &= r[k];
            ++size;
        }
        return size;
    }

    // Colour P greedily; only nodes whose colour could still beat the best
    // clique are listed, in colour order.
    void colour_order(const Adjacency& adj, Level& lv, std::size_t size) {
        const std::size_t w = adj.words;
        lv.order.clear();
        lv.colour.clear();
        std::copy_n(lv.P.data(), w, lv.uncoloured.data());
        const std::size_t min_useful = best_ >= size ? best_ - size + 1 : 1;
        std::size_t c = 0;
        for (std::size_t left = bits::popcount({lv.P.data(), w}); left > 0;) {
            ++c;
            std::copy_n(lv.uncoloured.data(), w, lv.pool.data());
            for (std::size_t k = 0; k < w; ++k) {
                while (lv.pool[k]) {
                    const std::size_t v = k * kWordBits + static_cast<std::size_t>(std::countr_zero(lv.pool[k]));
                    const Word bit = Word{1} << (v % kWordBits);
                    lv.uncoloured[k] &= ~bit;
                    lv.pool[k] &= ~bit;
                    --left;
                    const Word* r = adj.row(v);
                    for (std::size_t m = k; m < w; ++m) lv.pool[m] &= ~r[m];
                    if (c >= min_useful) {
                        lv.order.push_back(v);
                        lv.colour.push_back(c);
                    }
                }
            }
        }
    }

    // Induced subgraph on the nodes of `set`, renumbered 0..count-1.
    void compact(const Adjacency& adj, const Word* set, std::size_t count, Level& lv) {
        lv.members.clear();
        for_each_bit(std::span<const Word>(set, adj.words), [&](std::size_t v) {
            position_[v] = lv.members.size();
            lv.members.push_back(v);
        });
        auto& sub = lv.sub;
        sub.words = words_for(count);
        sub.rows.assign(count * sub.words, 0);
        for (std::size_t i = 0; i < count; ++i) {
            const Word* r = adj.row(lv.members[i]);
            Word* out = sub.rows.data() + i * sub.words;
            for (std::size_t k = 0; k < adj.words; ++k) {
                Word x = r[k] & set[k];
                while (x) {
                    const std::size_t j = position_[k * kWordBits + static_cast<std::size_t>(std::countr_zero(x))];
                    out[j / kWordBits] |= Word{1} << (j % kWordBits);
                    x &= x - 1;
                }
            }
        }
    }

    void search(const Adjacency& adj, std::size_t size) {
        Level& lv = levels_[size];
        colour_order(adj, lv, size);
        Level& next = levels_[size + 1];
        const std::size_t w = adj.words;
        for (std::size_t i = lv.order.size(); i-- > 0;) {
            if (size + lv.colour[i] <= best_) return;
            const std::size_t v = lv.order[i];
            const Word* r = adj.row(v);
            std::size_t count = 0;
            for (std::size_t k = 0; k < w; ++k) {
                next.P[k] = lv.P[k] & r[k];
                count += static_cast<std::size_t>(std::popcount(next.P[k]));
            }
            if (count == 0) {
                if (size + 1 > best_) best_ = size + 1;
            } else if (size + 1 + count > best_) {
                if (w > 4 && words_for(count) * 2 <= w) {
                    compact(adj, next.P.data(), count, next);
                    std::fill_n(next.P.data(), next.sub.words, Word{0});
                    for (std::size_t k = 0; k < count; ++k) next.P[k / kWordBits] |= Word{1} << (k % kWordBits);
                    search(next.sub, size + 1);
                } else {
                    search(adj, size + 1);
                }
            }
            lv.P[v / kWordBits] &= ~(Word{1} << (v % kWordBits));
        }
    }

    std::size_t n_;
    std::vector<std::size_t> position_;  // scratch for compact()
    Adjacency root_;
    std::vector<Level> levels_;
    std::size_t best_ = 0;
};

template <typename Stat>
double exhaustive_sum(std::size_t n, std::size_t r, double p, const char* op, Stat&& stat) {
    if (n > kMaxExhaustiveNodes) {
        throw CapacityError(std::string(op) + ": n=" + std::to_string(n) + " exceeds exhaustive ceiling " +
                            std::to_string(kMaxExhaustiveNodes));
    }
    if (r < 1 || r > n) throw DomainError(std::string(op) + ": r must satisfy 1 <= r <= n");
    if (!(p > 0.0 && p < 1.0)) throw DomainError(std::string(op) + ": p must lie in (0,1)");

    const std::size_t pairs = pair_count(n);
    std::vector<double> weight(pairs + 1);
    for (std::size_t m = 0; m <= pairs; ++m) {
        weight[m] = std::pow(p, static_cast<double>(m)) * std::pow(1.0 - p, static_cast<double>(pairs - m));
    }
    double total = 0.0;
    const AllGraphs graphs(n);
    for (auto it = graphs.begin(); it != graphs.end(); ++it) {
        const auto m = static_cast<std::size_t>(std::popcount(it.mask()));
        const double value = stat(count_r_cliques(*it, r));
        if (value != 0.0) total += weight[m] * value;
    }
    return total;
}

}  // namespace

std::uint64_t CliqueCounts::total_maximal() const {
    std::uint64_t t = 0;
    for (const auto& c : by_size) t += c.maximal;
    return t;
}

bool is_dominating(const Graph& g, const NodeSet& s) {
    check_subset(g, s, "is_dominating");
    for (std::size_t u = 0; u < g.node_count(); ++u) {
        if (s.contains(u)) continue;
        if (!intersects(g.row(u), s.words())) return false;
    }
    return true;
}

bool is_maximal_clique(const Graph& g, const NodeSet& s) {
    check_subset(g, s, "is_maximal_clique");
    if (s.empty()) return false;
    const std::size_t k = s.size();
    for (std::size_t u = 0; u < g.node_count(); ++u) {
        const std::size_t inside = bits::popcount_and(g.row(u), s.words());
        if (s.contains(u)) {
            if (inside != k - 1) return false;
        } else if (inside == k) {
            return false;
        }
    }
    return true;
}

CliqueSizeCounts count_r_cliques(const Graph& g, std::size_t r) {
    check_size(g, r, "count_r_cliques");
    return MaximalCliqueSearch(g, r).run().by_size[r];
}

std::uint64_t count_dominating_r_cliques(const Graph& g, std::size_t r) {
    return count_r_cliques(g, r).dominating;
}

std::uint64_t count_maximal_r_cliques(const Graph& g, std::size_t r) {
    return count_r_cliques(g, r).maximal;
}

CliqueCounts enumerate_maximal_cliques(const Graph& g) {
    return MaximalCliqueSearch(g, 0).run();
}

std::size_t clique_number(const Graph& g) {
    if (g.node_count() == 0) throw DomainError("clique_number: graph has no nodes");
    return MaximumCliqueSearch(g).run();
}

double exhaustive_expectation_Xr(std::size_t n, std::size_t r, double p) {
    return exhaustive_sum(n, r, p, "exhaustive_expectation_Xr",
                          [](const CliqueSizeCounts& c) { return static_cast<double>(c.dominating); });
}

double exhaustive_expectation_Yr(std::size_t n, std::size_t r, double p) {
    return exhaustive_sum(n, r, p, "exhaustive_expectation_Yr",
                          [](const CliqueSizeCounts& c) { return static_cast<double>(c.maximal); });
}

double exhaustive_second_moment_Xr(std::size_t n, std::size_t r, double p) {
    return exhaustive_sum(n, r, p, "exhaustive_second_moment_Xr", [](const CliqueSizeCounts& c) {
        const auto x = static_cast<double>(c.dominating);
        return x * x;
    });
}

}  // namespace domclique
