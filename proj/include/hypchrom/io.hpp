#pragma once

// Bundle files, DIMACS edge lists and SVG figures.

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "hypchrom/chromatic.hpp"
#include "hypchrom/hypgeom.hpp"

namespace hypchrom {

/// Malformed input, with the 1-based line it was found on (0 if none).
class FormatError : public std::runtime_error {
public:
    FormatError(int line, const std::string& what);
    int line() const { return line_; }

private:
    int line_;
};

constexpr int kBundleVersion = 1;

/// Line-oriented text:
///   hypchrom-bundle 1
///   minpoly 16 8 -12 -2 1
///   distance arccosh(1+(2c-1)/(1-c)) 1.3750335089...
///   vertices N
///   v i m n p q u v w z phase a b branch     (N lines, i = 1..N)
///   edges M
///   e i j                                    (M lines, i < j)
std::string format_bundle(const Graph& g);

struct BundleReadOptions {
    bool verify = true;
    NonEdgeCheck non_edges = NonEdgeCheck::None;
};

/// Throws FormatError for malformed text and IntegrityError when
/// certification fails.
Graph parse_bundle(const std::string& text, const BundleReadOptions& opt = {});

void write_bundle(const Graph& g, const std::filesystem::path& path);
Graph read_bundle(const std::filesystem::path& path, const BundleReadOptions& opt = {});

AdjacencyGraph to_adjacency(const Graph& g);

/// "p edge n m" then "e u v" lines, 1-based, u < v.
std::string format_dimacs(const AdjacencyGraph& g);
void emit_dimacs(const AdjacencyGraph& g, const std::filesystem::path& path);
/// Accepts "c" comment lines and either edge orientation.
AdjacencyGraph parse_dimacs(const std::string& text);
AdjacencyGraph read_dimacs(const std::filesystem::path& path);

enum class EdgeStyle { Geodesic, Chord, None };

struct SvgOptions {
    EdgeStyle edges = EdgeStyle::Geodesic;
    double size = 800;           // pixels, square canvas
    double vertex_radius = 3;
    /// Vertices with index below this are drawn in the seed color.
    int highlight_below = 9;
};

struct SvgSummary {
    int vertices = 0;
    int edges = 0;
    /// Largest certified upper bound on x^2 + y^2 over all vertices.
    double max_norm_sq = 0;
    bool all_inside = true;
};

/// Vertex positions come from point_coords_numeric.
std::string format_svg(const Graph& g, const SvgOptions& opt = {}, SvgSummary* summary = nullptr);
SvgSummary emit_svg(const Graph& g, const std::filesystem::path& path, const SvgOptions& opt = {});

/// Writes to a temporary file in the same directory and renames it over
/// path. Throws std::runtime_error on I/O failure.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

}  // namespace hypchrom
