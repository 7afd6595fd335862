#pragma once

// k-colorability by backtracking over a fixed vertex order with unit
// propagation of forced colors.

#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace hypchrom {

struct AdjacencyGraph {
    int n = 0;
    std::vector<std::vector<int>> neighbors;  // sorted, symmetric, no self-loops

    /// 0-based edges; duplicates are merged. Throws std::invalid_argument on
    /// self-loops or out-of-range endpoints.
    static AdjacencyGraph from_edges(int n, const std::vector<std::pair<int, int>>& edges);
    /// Subgraph induced by vertices 0..m-1.
    AdjacencyGraph prefix(int m) const;
    long edge_count() const;
};

constexpr int kUncolored = -1;
constexpr int kMaxColors = 32;

using Coloring = std::vector<int>;  // colors 0..k-1

struct SearchStats {
    int max_depth = 0;
    long nodes_visited = 0;
    long forced_assignments = 0;
    std::chrono::duration<double> elapsed{0};
    bool greedy_witness = false;  // answered by the greedy probe, no search ran
};

class ColorSearchState {
public:
    /// Throws std::invalid_argument unless 1 <= k <= kMaxColors.
    ColorSearchState(const AdjacencyGraph& g, int k);

    /// Colors v and propagates singleton feasible sets. Returns false on a
    /// conflict; the trail still allows rollback to any earlier mark. Throws
    /// std::logic_error if v is colored or color is not feasible.
    bool assign_propagate(int v, int color);

    using Mark = std::size_t;
    Mark mark() const { return trail_.size(); }
    void rollback(Mark m);

    int k() const { return k_; }
    int color(int v) const { return colors_[static_cast<std::size_t>(v)]; }
    std::uint32_t feasible(int v) const { return feasible_[static_cast<std::size_t>(v)]; }
    bool is_colored(int v) const { return color(v) != kUncolored; }
    const Coloring& colors() const { return colors_; }
    long forced_assignments() const { return forced_; }

    friend bool operator==(const ColorSearchState& a, const ColorSearchState& b) {
        return a.k_ == b.k_ && a.colors_ == b.colors_ && a.feasible_ == b.feasible_;
    }

private:
    struct TrailEntry {
        int vertex;
        std::uint32_t old_mask;
        bool colored;  // the entry records a color assignment, not a mask change
    };

    const AdjacencyGraph* g_;
    int k_;
    Coloring colors_;
    std::vector<std::uint32_t> feasible_;
    std::vector<TrailEntry> trail_;
    std::vector<int> queue_;
    long forced_ = 0;
};

struct SearchOptions {
    /// Pre-color a greedy clique grown from vertex 0.
    bool symmetry_break = true;
    /// Try one greedy DSATUR pass before searching. It can only answer
    /// Colorable; the static search still decides every UNSAT case.
    bool greedy_probe = true;
    /// Zero means unlimited.
    std::chrono::duration<double> time_limit{0};
};

enum class Verdict { Colorable, NotColorable, Aborted };

struct SearchResult {
    Verdict verdict = Verdict::Aborted;
    std::optional<Coloring> coloring;  // verified
    SearchStats stats;
};

/// Throws std::invalid_argument unless 1 <= k <= kMaxColors.
SearchResult search_k_coloring(const AdjacencyGraph& g, int k, const SearchOptions& opt = {});

struct ChromaticResult {
    std::optional<int> value;  // empty if chi > upper_bound
    Coloring coloring;
    std::vector<SearchStats> per_k;
};

ChromaticResult chromatic_number(const AdjacencyGraph& g, int upper_bound, const SearchOptions& opt = {});

struct PrefixResult {
    int prefix = 0;             // smallest non-k-colorable prefix
    Coloring witness;           // k-coloring of the prefix - 1 vertices
    SearchStats unsat_stats;    // search on the minimal prefix
    SearchStats witness_stats;  // search on the prefix - 1 vertices
    int searches = 0;
};

/// Binary search using monotonicity of non-colorability. Throws
/// std::invalid_argument if g itself is k-colorable.
PrefixResult minimal_non_colorable_prefix(const AdjacencyGraph& g, int k = 4, const SearchOptions& opt = {});
inline PrefixResult minimal_non4_prefix(const AdjacencyGraph& g, const SearchOptions& opt = {}) {
    return minimal_non_colorable_prefix(g, 4, opt);
}

/// Independent checker: total coloring, colors in [0, k) when k > 0, no
/// monochromatic edge.
bool verify_coloring(const AdjacencyGraph& g, const Coloring& coloring, int k = 0);

/// Greedy DSATUR coloring with at most k colors, or nothing if it gets stuck.
std::optional<Coloring> greedy_dsatur(const AdjacencyGraph& g, int k);

/// Greedy clique: vertex 0, then each later vertex adjacent to all chosen.
std::vector<int> greedy_clique(const AdjacencyGraph& g, int limit);

}  // namespace hypchrom
