#pragma once

// Points of the Poincare disk whose coordinates lie in the module
//   x = R (m c^3 + n c^2 + p c + q),   y = R s (u c^3 + v c^2 + w c + z)
// with s = sqrt(1 - c^2), R = sqrt(2c - 1), and exact distance-d checks.

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hypchrom/numfield.hpp"

namespace hypchrom {

class IntegrityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Octuple [m, n, p, q, u, v, w, z].
class ModulePoint {
public:
    ModulePoint() = default;
    explicit ModulePoint(std::array<Rational, 8> entries);
    /// From the two field factors X = x/R and Y = y/(R s).
    static ModulePoint from_factors(const FieldElement& x_factor, const FieldElement& y_factor);
    /// Parses eight "num/den" strings.
    static ModulePoint parse(const std::array<std::string, 8>& entries);

    const std::array<Rational, 8>& entries() const { return e_; }
    const Rational& operator[](int i) const { return e_[static_cast<size_t>(i)]; }

    /// x / R = m c^3 + n c^2 + p c + q
    FieldElement x_factor() const { return {e_[3], e_[2], e_[1], e_[0]}; }
    /// y / (R s) = u c^3 + v c^2 + w c + z
    FieldElement y_factor() const { return {e_[7], e_[6], e_[5], e_[4]}; }

    /// x^2 + y^2 = (2c-1) (X^2 + (1-c^2) Y^2)
    FieldElement norm_sq() const;
    /// 1 - x^2 - y^2
    FieldElement conformal_factor() const;
    bool inside_disk() const;

    /// Eight space-separated "num/den" strings, m..z order.
    std::string to_string() const;

    friend bool operator==(const ModulePoint& a, const ModulePoint& b) { return a.e_ == b.e_; }
    friend bool operator!=(const ModulePoint& a, const ModulePoint& b) { return !(a == b); }

private:
    std::array<Rational, 8> e_{};
};

/// The designated constants c, s^2, R^2, f and d.
struct Params {
    FieldElement c_elem;
    FieldElement s_sq;   // 1 - c^2
    FieldElement R_sq;   // 2c - 1
    FieldElement f_elem; // (2c - 1) / (1 - c)
    double d_numeric = 0;
};

const Params& params();

/// Rigorous enclosure of a point's Euclidean coordinates.
struct NumericPoint {
    RatInterval x;
    RatInterval y;

    static NumericPoint around(double x, double y, double radius);
    double x_mid() const { return x.mid_double(); }
    double y_mid() const { return y.mid_double(); }
    /// Half of the larger coordinate width.
    double error_radius() const;
    bool inside_disk() const;
};

/// 2 |P - Q|^2 / ((1 - |P|^2)(1 - |Q|^2)); cosh(dist) = 1 + f.
FieldElement f_of(const ModulePoint& P, const ModulePoint& Q);
/// f_of(P, Q) == f exactly.
bool is_unit_edge(const ModulePoint& P, const ModulePoint& Q);

/// Enclosure with both coordinate widths <= max_width.
NumericPoint point_coords_numeric(const ModulePoint& P, const Rational& max_width = Rational(1, 1000000000000L));

/// Where a vertex came from. Seed vertices have phase 0 and no source pair.
struct Provenance {
    int phase = 0;
    int source_a = 0;  // 1-based, 0 for seed vertices
    int source_b = 0;
    char branch = '.';  // '-', '+' or '.'
    friend bool operator==(const Provenance&, const Provenance&) = default;
};

/// Vertex list in construction order plus certified edges (0-based, u < v,
/// sorted).
struct Graph {
    std::vector<ModulePoint> vertices;
    std::vector<std::pair<int, int>> edges;
    std::vector<Provenance> provenance;

    int order() const { return static_cast<int>(vertices.size()); }
    int size() const { return static_cast<int>(edges.size()); }
    /// Sorts and deduplicates the edge list.
    void normalize_edges();
};

/// The nine seed vertices and 17 edges. Every pair is checked exactly; a
/// mismatch throws IntegrityError.
Graph build_g9();

/// The 1-based edge list of the seed graph.
const std::vector<std::pair<int, int>>& g9_edge_list();

enum class NonEdgeCheck {
    None,              // recorded edges only
    Exact,             // every unrecorded pair evaluated exactly
    NumericPrefilter,  // unrecorded pairs evaluated exactly only when f is within 1e-6 numerically
};

/// Checks every recorded edge exactly, vertex disk membership, and non-edges
/// per mode. Returns a description of the first violation, empty if none.
std::string certify(const Graph& g, NonEdgeCheck mode);

/// A8 at distance d from A2, A4, A5 and A9 from A3, A6, A7.
bool verify_condition1(const Graph& g);

struct Vec2 {
    double x = 0;
    double y = 0;
};

/// Double-precision hyperbolic Moser spindle for an arbitrary distance d.
struct SpindleEmbedding {
    double R = 0;
    double cos_alpha = 0;
    double cos_beta = 0;
    std::array<Vec2, 7> points{};
    std::vector<std::pair<int, int>> edges;  // 0-based
    std::array<NumericPoint, 7> numeric() const;
};

/// Throws std::invalid_argument for d <= 0.
SpindleEmbedding spindle_numeric(double d);

/// f computed in double precision.
double f_numeric(Vec2 a, Vec2 b);

/// Fast non-rigorous double coordinates.
Vec2 approx_coords(const ModulePoint& P);

/// Precomputed field data of a vertex for repeated exact edge checks.
struct ExactVertex {
    FieldElement x_factor;
    FieldElement y_factor;
    FieldElement f_times_conformal;  // f (1 - |P|^2)
    FieldElement conformal;          // 1 - |P|^2

    explicit ExactVertex(const ModulePoint& P);
};

/// Equivalent to is_unit_edge on the underlying points.
bool is_unit_edge(const ExactVertex& a, const ExactVertex& b);

}  // namespace hypchrom
