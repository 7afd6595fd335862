#pragma once

// Growing a distance-d graph: new vertices are intersection points of the
// hyperbolic circles of radius d around pairs of existing vertices.

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hypchrom/hypgeom.hpp"

namespace hypchrom {

class IdenticalCircles : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The Euclidean circle {M : f(M, C) = f}. In module coordinates
/// (X, Y) = (x/R, y/(R s)) it reads
///   X^2 + (1-c^2) Y^2 - 2 a X - 2 (1-c^2) b Y + e = 0
/// where `center` holds (a, b).
struct EuclideanCircleRec {
    ModulePoint center;
    FieldElement offset;     // e
    FieldElement radius_sq;  // Euclidean radius squared
};

EuclideanCircleRec circle_of(const ModulePoint& C);

struct CandidatePoint {
    std::optional<ModulePoint> exact;  // empty when not representable in module form
    NumericPoint numeric;
    std::pair<int, int> source{-1, -1};  // 0-based vertex pair
    char branch = '-';                   // '-' is the lexicographically smaller (x, y) point
    int neighbor_count = 0;
    std::vector<int> neighbors;  // 0-based, sorted
};

struct IntersectConfig {
    SqrtConfig sqrt;
    /// Width of the enclosures attached to non-module candidates.
    unsigned enclosure_bits = 256;
};

/// Zero, one (tangency) or two intersection points, '-' branch first.
/// Throws IdenticalCircles when the circles coincide.
std::vector<CandidatePoint> intersect_circles(const EuclideanCircleRec& c1, const EuclideanCircleRec& c2,
                                              const IntersectConfig& cfg = {});

/// Integer-relation search for module coordinates of a numerically given
/// point, denominators bounded by denom_bound. The result is verified against
/// the enclosure. Throws std::invalid_argument if the enclosure is wider than
/// 2^-96.
std::optional<ModulePoint> reconstruct_module_point(const NumericPoint& np, long denom_bound);

struct AugmentConfig {
    long denom_bound = 10000;  // largest accepted octuple denominator
    IntersectConfig intersect;
    /// Relative tolerance of the double-precision neighbor prefilter.
    double numeric_tolerance = 1e-7;
    std::function<void(const std::string&)> progress;
};

struct PhaseReport {
    int phase = 0;
    int min_neighbors = 0;
    long pairs = 0;
    long numeric_candidates = 0;   // intersection points found in double precision
    long below_threshold = 0;      // too few neighbors (numeric or exact)
    long exact_checked = 0;        // candidates certified in exact arithmetic
    long non_module = 0;           // no module form, rejected
    long reconstructed = 0;        // non-module by sqrt test but recovered by integer relation
    long over_denom_bound = 0;     // module form exists but a denominator exceeds denom_bound
    long existing = 0;             // coincide with an existing vertex
    long duplicates = 0;
    long prefilter_mismatches = 0; // numeric and exact neighbor sets disagreed
    int kept = 0;
    int order = 0;
    int size = 0;
    std::vector<std::pair<int, int>> accidental_edges;  // 1-based
    double seconds = 0;

    std::string to_string() const;
};

struct PhaseResult {
    Graph graph;
    PhaseReport report;
};

/// Adds every point at distance d from at least min_neighbors vertices of g
/// that admits module form. Throws std::invalid_argument if min_neighbors < 2
/// and IntegrityError if a kept candidate fails certification.
PhaseResult phase_augment(const Graph& g, int min_neighbors, const AugmentConfig& cfg = {}, int phase = 1);

/// Seven phases reproducing G28, G42, G68, G119, G226, G455, G762.
std::vector<int> default_schedule();

struct PipelineResult {
    std::vector<Graph> graphs;  // graphs[0] is the input
    std::vector<PhaseReport> reports;
};

PipelineResult grow_pipeline(const Graph& g0, const std::vector<int>& schedule, const AugmentConfig& cfg = {});

}  // namespace hypchrom
