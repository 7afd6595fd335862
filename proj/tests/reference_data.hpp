#pragma once

// Reference coordinates for the first two growth phases, written as integer
// octuples with a common divisor. Two published rows have unbalanced
// brackets (A26 ends "-14/58", A42 ends "-2/2"); the divisor is taken to
// apply to the whole octuple, which the claimed neighbor sets confirm.

#include <array>
#include <utility>
#include <vector>

#include "hypchrom/hypgeom.hpp"

namespace refdata {

struct RefPoint {
    int label;
    std::array<long, 8> octuple;
    long divisor;
    std::vector<int> neighbors;  // 1-based, among the previous graph

    hypchrom::ModulePoint point() const {
        std::array<hypchrom::Rational, 8> e;
        for (std::size_t i = 0; i < 8; ++i) {
            e[i] = hypchrom::Rational(octuple[i], divisor);
            e[i].canonicalize();
        }
        return hypchrom::ModulePoint(e);
    }
};

inline const std::vector<RefPoint>& phase1() {
    static const std::vector<RefPoint> rows{
        {10, {0, 0, 1, 0, 0, 0, 0, -1}, 1, {1, 2}},
        {11, {0, 2, 0, -1, 0, 0, 2, 0}, 1, {1, 3}},
        {12, {16, 4, -6, -1, -16, 8, 0, 0}, 2, {1, 5}},
        {13, {-16, 4, 2, 1, 48, -24, -8, 4}, 2, {1, 6}},
        {14, {-96, 64, 36, -1, 592, -8, -164, -18}, 58, {2, 7}},
        {15, {64, 112, 34, -9, 240, 72, -148, -12}, 58, {2, 8}},
        {16, {8, 12, -4, -3, -16, 0, 8, 2}, 2, {3, 4}},
        {17, {16, 4, -8, 1, -16, 8, 8, -2}, 2, {3, 5}},
        {18, {16, 8, -10, -1, -16, -8, 12, 4}, 2, {3, 9}},
        {19, {-104, -8, 126, 11, 16, 144, 52, -24}, 58, {3, 9}},
        {20, {-100, 28, 52, 5, 176, -156, -8, 26}, 29, {4, 6}},
        {21, {12, 10, -7, -3, 0, -4, 2, 1}, 1, {4, 7}},
        {22, {-8, 0, 6, 1, 16, 0, -4, 0}, 2, {4, 7}},
        {23, {32, 28, -16, -9, 16, 8, -8, -2}, 2, {4, 8}},
        {24, {64, -12, -16, -1, -144, 88, 24, -10}, 2, {5, 7}},
        {25, {12, 8, -6, -2, 0, 4, 0, -2}, 1, {5, 8}},
        {26, {80, 24, 28, 25, 48, 200, -76, -14}, 58, {5, 8}},
        {27, {-96, 6, 65, -1, 128, -8, 10, 11}, 29, {6, 9}},
        {28, {12, 8, -5, -3, -16, -4, 8, 3}, 1, {7, 9}},
    };
    return rows;
}

inline const std::vector<RefPoint>& phase2() {
    static const std::vector<RefPoint> rows{
        {29, {-16, -8, 12, 3, 16, 8, -12, -2}, 2, {2, 10, 25}},
        {30, {-4, 2, 4, -1, 0, -4, 2, 0}, 1, {2, 12, 15}},
        {31, {112, 82, -48, -17, -48, -8, 26, 10}, 19, {3, 17, 23, 25}},
        {32, {40, 108, 10, -21, -48, -160, 64, 48}, 38, {4, 12, 21}},
        {33, {8, 116, 60, 19, 16, -96, 120, 38}, 82, {4, 17, 22, 26}},
        {34, {8, 12, -6, -1, 16, -16, 0, 4}, 2, {4, 23, 24}},
        {35, {116, 70, -47, -21, -48, 68, 26, -9}, 19, {5, 17, 18, 28}},
        {36, {0, 2, -1, 0, 16, 0, -6, 1}, 1, {6, 11, 27}},
        {37, {-12, -8, 8, 2, 0, 4, 0, 0}, 1, {6, 13, 18}},
        {38, {56, 60, -24, -18, 128, 72, -44, -14}, 19, {7, 11, 21}},
        {39, {8, 12, -4, -3, 16, 0, 0, -2}, 2, {7, 16, 28}},
        {40, {224, 132, -42, -1, 208, 392, -80, -80}, 82, {7, 17, 19, 22}},
        {41, {16, 6, -11, 1, 0, 0, 2, -1}, 1, {15, 21, 23}},
        {42, {16, 8, -12, 1, -16, -8, 20, -2}, 2, {21, 27, 28}},
    };
    return rows;
}

inline const std::vector<std::pair<int, int>>& phase1_accidental() {
    static const std::vector<std::pair<int, int>> e{{11, 18}, {11, 21}, {12, 21}, {12, 25}, {17, 19}, {17, 26}};
    return e;
}

inline const std::vector<std::pair<int, int>>& phase2_accidental() {
    static const std::vector<std::pair<int, int>> e{{30, 32}, {33, 34}, {36, 38}, {39, 40}};
    return e;
}

/// Orders and sizes of the graphs after each phase.
inline const std::vector<std::pair<int, int>>& growth() {
    static const std::vector<std::pair<int, int>> s{{28, 61},   {42, 111},   {68, 201},  {119, 385},
                                                   {226, 786}, {455, 1679}, {762, 2983}};
    return s;
}

/// The 28-vertex graph assembled from the seed and the phase-1 rows, with
/// all distance-d pairs as edges.
inline hypchrom::Graph reference_g28() {
    hypchrom::Graph g = hypchrom::build_g9();
    for (const auto& r : phase1()) {
        g.vertices.push_back(r.point());
        g.provenance.push_back({1, r.neighbors[0], r.neighbors[1], '.'});
    }
    std::vector<hypchrom::ExactVertex> ex;
    for (const auto& v : g.vertices) ex.emplace_back(v);
    g.edges.clear();
    for (int i = 0; i < g.order(); ++i)
        for (int j = i + 1; j < g.order(); ++j)
            if (hypchrom::is_unit_edge(ex[static_cast<std::size_t>(i)], ex[static_cast<std::size_t>(j)]))
                g.edges.emplace_back(i, j);
    return g;
}

}  // namespace refdata
