#include "hypchrom/chromatic.hpp"

#include <algorithm>
#include <bit>
#include <string>

namespace hypchrom {

AdjacencyGraph AdjacencyGraph::from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
    if (n < 0) throw std::invalid_argument("negative vertex count");
    AdjacencyGraph g;
    g.n = n;
    g.neighbors.resize(static_cast<std::size_t>(n));
    for (auto [u, v] : edges) {
        if (u < 0 || v < 0 || u >= n || v >= n)
            throw std::invalid_argument("edge {" + std::to_string(u) + "," + std::to_string(v) + "} out of range");
        if (u == v) throw std::invalid_argument("self-loop at vertex " + std::to_string(u));
        g.neighbors[static_cast<std::size_t>(u)].push_back(v);
        g.neighbors[static_cast<std::size_t>(v)].push_back(u);
    }
    for (auto& nb : g.neighbors) {
        std::sort(nb.begin(), nb.end());
        nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    }
    return g;
}

AdjacencyGraph AdjacencyGraph::prefix(int m) const {
    m = std::clamp(m, 0, n);
    AdjacencyGraph g;
    g.n = m;
    g.neighbors.resize(static_cast<std::size_t>(m));
    for (int v = 0; v < m; ++v) {
        const auto& nb = neighbors[static_cast<std::size_t>(v)];
        auto end = std::lower_bound(nb.begin(), nb.end(), m);
        g.neighbors[static_cast<std::size_t>(v)].assign(nb.begin(), end);
    }
    return g;
}

long AdjacencyGraph::edge_count() const {
    long twice = 0;
    for (const auto& nb : neighbors) twice += static_cast<long>(nb.size());
    return twice / 2;
}

ColorSearchState::ColorSearchState(const AdjacencyGraph& g, int k) : g_(&g), k_(k) {
    if (k < 1 || k > kMaxColors) throw std::invalid_argument("k must lie in [1, 32], got " + std::to_string(k));
    const std::uint32_t all = k == 32 ? ~std::uint32_t{0} : ((std::uint32_t{1} << k) - 1);
    colors_.assign(static_cast<std::size_t>(g.n), kUncolored);
    feasible_.assign(static_cast<std::size_t>(g.n), all);
}

bool ColorSearchState::assign_propagate(int v, int color) {
    if (v < 0 || v >= g_->n) throw std::logic_error("assign_propagate: vertex out of range");
    if (is_colored(v)) throw std::logic_error("assign_propagate: vertex " + std::to_string(v) + " already colored");
    if (color < 0 || color >= k_ || !(feasible(v) >> color & 1u))
        throw std::logic_error("assign_propagate: color " + std::to_string(color) + " not feasible at vertex " +
                               std::to_string(v));
    queue_.clear();
    queue_.push_back(v);
    for (std::size_t head = 0; head < queue_.size(); ++head) {
        const int u = queue_[head];
        const auto uz = static_cast<std::size_t>(u);
        if (colors_[uz] != kUncolored) continue;
        const int c = head == 0 ? color : std::countr_zero(feasible_[uz]);
        if (head > 0) ++forced_;
        trail_.push_back({u, feasible_[uz], true});
        colors_[uz] = c;
        const std::uint32_t bit = std::uint32_t{1} << c;
        for (int w : g_->neighbors[uz]) {
            const auto wz = static_cast<std::size_t>(w);
            if (colors_[wz] != kUncolored) {
                if (colors_[wz] == c) return false;
                continue;
            }
            if (!(feasible_[wz] & bit)) continue;
            trail_.push_back({w, feasible_[wz], false});
            feasible_[wz] &= ~bit;
            if (feasible_[wz] == 0) return false;
            if (std::has_single_bit(feasible_[wz])) queue_.push_back(w);
        }
    }
    return true;
}

void ColorSearchState::rollback(Mark m) {
    while (trail_.size() > m) {
        const TrailEntry& e = trail_.back();
        const auto vz = static_cast<std::size_t>(e.vertex);
        if (e.colored) colors_[vz] = kUncolored;
        feasible_[vz] = e.old_mask;
        trail_.pop_back();
    }
}

std::vector<int> greedy_clique(const AdjacencyGraph& g, int limit) {
    std::vector<int> clique;
    for (int v = 0; v < g.n && static_cast<int>(clique.size()) < limit; ++v) {
        const auto& nb = g.neighbors[static_cast<std::size_t>(v)];
        if (std::all_of(clique.begin(), clique.end(),
                        [&](int u) { return std::binary_search(nb.begin(), nb.end(), u); }))
            clique.push_back(v);
    }
    return clique;
}

std::optional<Coloring> greedy_dsatur(const AdjacencyGraph& g, int k) {
    if (k < 1 || k > kMaxColors) throw std::invalid_argument("k must lie in [1, 32], got " + std::to_string(k));
    const auto n = static_cast<std::size_t>(g.n);
    Coloring col(n, kUncolored);
    std::vector<std::uint32_t> used(n, 0);  // colors present among colored neighbors
    for (std::size_t step = 0; step < n; ++step) {
        // Highest saturation, then degree, then lowest index.
        std::size_t best = n;
        int best_sat = -1;
        for (std::size_t v = 0; v < n; ++v) {
            if (col[v] != kUncolored) continue;
            const int sat = std::popcount(used[v]);
            if (sat > best_sat || (sat == best_sat && g.neighbors[v].size() > g.neighbors[best].size())) {
                best = v;
                best_sat = sat;
            }
        }
        const std::uint32_t free = ~used[best] & (k == 32 ? ~std::uint32_t{0} : (std::uint32_t{1} << k) - 1);
        if (free == 0) return std::nullopt;
        const int c = std::countr_zero(free);
        col[best] = c;
        for (int w : g.neighbors[best]) used[static_cast<std::size_t>(w)] |= std::uint32_t{1} << c;
    }
    return col;
}

bool verify_coloring(const AdjacencyGraph& g, const Coloring& coloring, int k) {
    if (static_cast<int>(coloring.size()) != g.n) return false;
    for (int v = 0; v < g.n; ++v) {
        const int c = coloring[static_cast<std::size_t>(v)];
        if (c < 0 || (k > 0 && c >= k)) return false;
        for (int u : g.neighbors[static_cast<std::size_t>(v)])
            if (coloring[static_cast<std::size_t>(u)] == c) return false;
    }
    return true;
}

SearchResult search_k_coloring(const AdjacencyGraph& g, int k, const SearchOptions& opt) {
    using clock = std::chrono::steady_clock;
    const auto start = clock::now();
    ColorSearchState state(g, k);
    SearchResult out;
    auto finish = [&](Verdict v) {
        out.verdict = v;
        out.stats.forced_assignments = state.forced_assignments();
        out.stats.elapsed = clock::now() - start;
        if (v == Verdict::Colorable) {
            if (!verify_coloring(g, state.colors(), k))
                throw std::logic_error("search produced an improper coloring");
            out.coloring = state.colors();
        }
        return out;
    };

    if (opt.greedy_probe) {
        if (auto col = greedy_dsatur(g, k)) {
            if (!verify_coloring(g, *col, k)) throw std::logic_error("greedy probe produced an improper coloring");
            out.verdict = Verdict::Colorable;
            out.coloring = std::move(col);
            out.stats.greedy_witness = true;
            out.stats.elapsed = clock::now() - start;
            return out;
        }
    }

    if (opt.symmetry_break) {
        const auto clique = greedy_clique(g, k);
        for (std::size_t i = 0; i < clique.size(); ++i) {
            const int v = clique[i];
            const int c = static_cast<int>(i);
            if (state.is_colored(v)) {
                if (state.color(v) != c) return finish(Verdict::NotColorable);
                continue;
            }
            if (!(state.feasible(v) >> c & 1u) || !state.assign_propagate(v, c)) return finish(Verdict::NotColorable);
        }
    }

    struct Frame {
        int v;
        std::uint32_t remaining;
        ColorSearchState::Mark mark;
    };
    std::vector<Frame> stack;
    auto next_uncolored = [&](int v) {
        while (v < g.n && state.is_colored(v)) ++v;
        return v;
    };

    int v = next_uncolored(0);
    for (;;) {
        if (v == g.n) {
            out.stats.max_depth = std::max(out.stats.max_depth, g.n);
            return finish(Verdict::Colorable);
        }
        ++out.stats.nodes_visited;
        out.stats.max_depth = std::max(out.stats.max_depth, v + 1);
        if (opt.time_limit.count() > 0 && (out.stats.nodes_visited & 1023) == 0 &&
            clock::now() - start > opt.time_limit)
            return finish(Verdict::Aborted);
        stack.push_back({v, state.feasible(v), state.mark()});

        bool descended = false;
        while (!stack.empty()) {
            Frame& f = stack.back();
            state.rollback(f.mark);
            if (f.remaining == 0) {
                stack.pop_back();
                continue;
            }
            const int c = std::countr_zero(f.remaining);
            f.remaining &= f.remaining - 1;
            if (state.assign_propagate(f.v, c)) {
                v = next_uncolored(f.v + 1);
                descended = true;
                break;
            }
        }
        if (!descended) return finish(Verdict::NotColorable);
    }
}

ChromaticResult chromatic_number(const AdjacencyGraph& g, int upper_bound, const SearchOptions& opt) {
    if (upper_bound < 1) throw std::invalid_argument("upper_bound must be at least 1");
    ChromaticResult out;
    if (g.n == 0) {
        out.value = 0;
        return out;
    }
    for (int k = 1; k <= std::min(upper_bound, kMaxColors); ++k) {
        SearchResult r = search_k_coloring(g, k, opt);
        out.per_k.push_back(r.stats);
        if (r.verdict == Verdict::Aborted) return out;
        if (r.verdict == Verdict::Colorable) {
            out.value = k;
            out.coloring = std::move(*r.coloring);
            return out;
        }
    }
    return out;
}

PrefixResult minimal_non_colorable_prefix(const AdjacencyGraph& g, int k, const SearchOptions& opt) {
    PrefixResult out;
    auto run = [&](int m) {
        ++out.searches;
        SearchResult r = search_k_coloring(g.prefix(m), k, opt);
        if (r.verdict == Verdict::Aborted)
            throw std::runtime_error("search aborted on the " + std::to_string(m) + "-vertex prefix");
        return r;
    };
    SearchResult top = run(g.n);
    if (top.verdict == Verdict::Colorable)
        throw std::invalid_argument("graph is " + std::to_string(k) + "-colorable");
    // lo is colorable, hi is not.
    int lo = 0;
    int hi = g.n;
    SearchResult hi_result = std::move(top);
    SearchResult lo_result;
    lo_result.coloring = Coloring{};
    while (hi - lo > 1) {
        const int mid = lo + (hi - lo) / 2;
        SearchResult r = run(mid);
        if (r.verdict == Verdict::Colorable) {
            lo = mid;
            lo_result = std::move(r);
        } else {
            hi = mid;
            hi_result = std::move(r);
        }
    }
    out.prefix = hi;
    out.witness = *lo_result.coloring;
    out.witness_stats = lo_result.stats;
    out.unsat_stats = hi_result.stats;
    return out;
}

}  // namespace hypchrom
