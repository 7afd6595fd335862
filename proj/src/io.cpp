#include "hypchrom/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <vector>

#include <unistd.h>

namespace hypchrom {

FormatError::FormatError(int line, const std::string& what)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

namespace {

constexpr const char* kMagic = "hypchrom-bundle";
constexpr const char* kDistanceTag = "arccosh(1+(2c-1)/(1-c))";

std::vector<std::string> tokens(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> out;
    for (std::string t; in >> t;) out.push_back(t);
    return out;
}

// Non-blank, non-comment lines with their 1-based numbers.
std::vector<std::pair<int, std::vector<std::string>>> content_lines(const std::string& text) {
    std::vector<std::pair<int, std::vector<std::string>>> out;
    std::istringstream in(text);
    int no = 0;
    for (std::string line; std::getline(in, line);) {
        ++no;
        auto t = tokens(line);
        if (t.empty() || t[0][0] == '#') continue;
        out.emplace_back(no, std::move(t));
    }
    return out;
}

long parse_int(const std::string& s, int line, const char* what) {
    try {
        std::size_t used = 0;
        long v = std::stol(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw FormatError(line, std::string("malformed ") + what + " '" + s + "'");
    }
}

}  // namespace

std::string format_bundle(const Graph& g) {
    std::ostringstream out;
    out << kMagic << ' ' << kBundleVersion << '\n';
    out << "minpoly";
    const auto& poly = minimal_polynomial();
    for (int k = 4; k >= 0; --k) out << ' ' << poly[static_cast<std::size_t>(k)];
    out << '\n';
    out << "distance " << kDistanceTag << ' ' << std::setprecision(17) << params().d_numeric << '\n';
    out << "vertices " << g.order() << '\n';
    for (int i = 0; i < g.order(); ++i) {
        const auto iz = static_cast<std::size_t>(i);
        const Provenance pv = iz < g.provenance.size() ? g.provenance[iz] : Provenance{};
        out << "v " << i + 1 << ' ' << g.vertices[iz].to_string() << ' ' << pv.phase << ' ' << pv.source_a << ' '
            << pv.source_b << ' ' << pv.branch << '\n';
    }
    out << "edges " << g.size() << '\n';
    for (auto [u, v] : g.edges) out << "e " << std::min(u, v) + 1 << ' ' << std::max(u, v) + 1 << '\n';
    return out.str();
}

Graph parse_bundle(const std::string& text, const BundleReadOptions& opt) {
    auto lines = content_lines(text);
    std::size_t at = 0;
    auto next = [&](const char* expect) -> const std::pair<int, std::vector<std::string>>& {
        if (at >= lines.size()) throw FormatError(0, std::string("unexpected end of bundle, expected '") + expect + "'");
        const auto& l = lines[at++];
        if (l.second[0] != expect)
            throw FormatError(l.first, std::string("expected '") + expect + "', found '" + l.second[0] + "'");
        return l;
    };

    const auto& head = next(kMagic);
    if (head.second.size() != 2 || parse_int(head.second[1], head.first, "version") != kBundleVersion)
        throw FormatError(head.first, "unsupported bundle version");

    const auto& mp = next("minpoly");
    if (mp.second.size() != 6) throw FormatError(mp.first, "minpoly needs five coefficients");
    const auto& poly = minimal_polynomial();
    for (int k = 0; k < 5; ++k)
        if (parse_int(mp.second[static_cast<std::size_t>(k + 1)], mp.first, "coefficient") !=
            poly[static_cast<std::size_t>(4 - k)])
            throw FormatError(mp.first, "bundle uses a different minimal polynomial");

    const auto& dist = next("distance");
    if (dist.second.size() < 2 || dist.second[1] != kDistanceTag)
        throw FormatError(dist.first, "unknown distance tag");

    const auto& vh = next("vertices");
    if (vh.second.size() != 2) throw FormatError(vh.first, "malformed vertex count");
    const long n = parse_int(vh.second[1], vh.first, "vertex count");
    if (n < 0) throw FormatError(vh.first, "negative vertex count");

    Graph g;
    g.vertices.reserve(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) {
        const auto& l = next("v");
        const auto& t = l.second;
        if (t.size() != 14) throw FormatError(l.first, "vertex record needs 13 fields");
        const long idx = parse_int(t[1], l.first, "vertex index");
        if (idx != i + 1) {
            if (idx >= 1 && idx <= i) throw FormatError(l.first, "duplicate vertex index " + t[1]);
            throw FormatError(l.first, "vertex index " + t[1] + " out of sequence, expected " + std::to_string(i + 1));
        }
        std::array<std::string, 8> entries;
        for (std::size_t k = 0; k < 8; ++k) entries[k] = t[k + 2];
        try {
            g.vertices.push_back(ModulePoint::parse(entries));
        } catch (const std::invalid_argument& e) {
            throw FormatError(l.first, e.what());
        }
        Provenance pv;
        pv.phase = static_cast<int>(parse_int(t[10], l.first, "phase"));
        pv.source_a = static_cast<int>(parse_int(t[11], l.first, "source index"));
        pv.source_b = static_cast<int>(parse_int(t[12], l.first, "source index"));
        if (t[13].size() != 1 || std::string("-+.").find(t[13][0]) == std::string::npos)
            throw FormatError(l.first, "branch must be '-', '+' or '.'");
        pv.branch = t[13][0];
        g.provenance.push_back(pv);
    }

    const auto& eh = next("edges");
    if (eh.second.size() != 2) throw FormatError(eh.first, "malformed edge count");
    const long m = parse_int(eh.second[1], eh.first, "edge count");
    if (m < 0) throw FormatError(eh.first, "negative edge count");
    std::set<std::pair<int, int>> seen;
    for (long i = 0; i < m; ++i) {
        const auto& l = next("e");
        if (l.second.size() != 3) throw FormatError(l.first, "edge record needs two indices");
        const long a = parse_int(l.second[1], l.first, "edge endpoint");
        const long b = parse_int(l.second[2], l.first, "edge endpoint");
        if (a < 1 || b < 1 || a > n || b > n) throw FormatError(l.first, "edge references a missing vertex");
        if (a == b) throw FormatError(l.first, "self-loop at vertex " + std::to_string(a));
        std::pair<int, int> key{static_cast<int>(std::min(a, b)) - 1, static_cast<int>(std::max(a, b)) - 1};
        if (!seen.insert(key).second)
            throw FormatError(l.first, "edge {" + std::to_string(key.first + 1) + "," + std::to_string(key.second + 1) +
                                           "} listed twice");
        g.edges.push_back(key);
    }
    if (at != lines.size()) throw FormatError(lines[at].first, "trailing content after the edge list");
    g.normalize_edges();

    if (opt.verify)
        if (auto err = certify(g, opt.non_edges); !err.empty()) throw IntegrityError("certification failed: " + err);
    return g;
}

void write_bundle(const Graph& g, const std::filesystem::path& path) { write_file_atomic(path, format_bundle(g)); }

Graph read_bundle(const std::filesystem::path& path, const BundleReadOptions& opt) {
    return parse_bundle(read_file(path), opt);
}

AdjacencyGraph to_adjacency(const Graph& g) { return AdjacencyGraph::from_edges(g.order(), g.edges); }

std::string format_dimacs(const AdjacencyGraph& g) {
    std::ostringstream out;
    out << "p edge " << g.n << ' ' << g.edge_count() << '\n';
    for (int u = 0; u < g.n; ++u)
        for (int v : g.neighbors[static_cast<std::size_t>(u)])
            if (u < v) out << "e " << u + 1 << ' ' << v + 1 << '\n';
    return out.str();
}

void emit_dimacs(const AdjacencyGraph& g, const std::filesystem::path& path) {
    write_file_atomic(path, format_dimacs(g));
}

AdjacencyGraph parse_dimacs(const std::string& text) {
    long n = -1;
    long declared = 0;
    std::vector<std::pair<int, int>> edges;
    std::istringstream in(text);
    int no = 0;
    for (std::string line; std::getline(in, line);) {
        ++no;
        auto t = tokens(line);
        if (t.empty() || t[0] == "c") continue;
        if (t[0] == "p") {
            if (n >= 0) throw FormatError(no, "second problem line");
            if (t.size() != 4 || (t[1] != "edge" && t[1] != "col")) throw FormatError(no, "expected 'p edge n m'");
            n = parse_int(t[2], no, "vertex count");
            declared = parse_int(t[3], no, "edge count");
            if (n < 0 || declared < 0) throw FormatError(no, "negative count");
        } else if (t[0] == "e") {
            if (n < 0) throw FormatError(no, "edge before the problem line");
            if (t.size() != 3) throw FormatError(no, "edge line needs two endpoints");
            const long a = parse_int(t[1], no, "endpoint");
            const long b = parse_int(t[2], no, "endpoint");
            if (a < 1 || b < 1 || a > n || b > n) throw FormatError(no, "endpoint out of range");
            if (a == b) throw FormatError(no, "self-loop");
            edges.emplace_back(static_cast<int>(a - 1), static_cast<int>(b - 1));
        } else {
            throw FormatError(no, "unknown line type '" + t[0] + "'");
        }
    }
    if (n < 0) throw FormatError(0, "missing problem line");
    AdjacencyGraph g = AdjacencyGraph::from_edges(static_cast<int>(n), edges);
    if (g.edge_count() != declared)
        throw FormatError(0, "header declares " + std::to_string(declared) + " edges, found " +
                                 std::to_string(g.edge_count()) + " distinct");
    return g;
}

AdjacencyGraph read_dimacs(const std::filesystem::path& path) { return parse_dimacs(read_file(path)); }

namespace {

struct Screen {
    double x;
    double y;
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

// Circle through a, b, c; false if (nearly) collinear.
bool circumcircle(Screen a, Screen b, Screen c, Screen& center, double& radius) {
    const double d = 2 * (a.x * (b.y - c.y) + b.x * (c.y - a.y) + c.x * (a.y - b.y));
    if (std::abs(d) < 1e-12) return false;
    const double a2 = a.x * a.x + a.y * a.y;
    const double b2 = b.x * b.x + b.y * b.y;
    const double c2 = c.x * c.x + c.y * c.y;
    center = {(a2 * (b.y - c.y) + b2 * (c.y - a.y) + c2 * (a.y - b.y)) / d,
              (a2 * (c.x - b.x) + b2 * (a.x - c.x) + c2 * (b.x - a.x)) / d};
    radius = std::hypot(a.x - center.x, a.y - center.y);
    return true;
}

}  // namespace

std::string format_svg(const Graph& g, const SvgOptions& opt, SvgSummary* summary) {
    SvgSummary sum;
    const double half = opt.size / 2;
    const double scale = half * 0.95;
    std::vector<Vec2> disk(static_cast<std::size_t>(g.order()));
    for (int i = 0; i < g.order(); ++i) {
        const NumericPoint np = point_coords_numeric(g.vertices[static_cast<std::size_t>(i)], Rational(1, 1000000000L));
        const RatInterval n2 = np.x * np.x + np.y * np.y;
        sum.max_norm_sq = std::max(sum.max_norm_sq, n2.hi.get_d());
        if (!(n2.hi < 1)) sum.all_inside = false;
        disk[static_cast<std::size_t>(i)] = {np.x_mid(), np.y_mid()};
    }
    auto to_screen = [&](Vec2 p) { return Screen{half + scale * p.x, half - scale * p.y}; };

    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << fmt(opt.size) << "\" height=\""
        << fmt(opt.size) << "\" viewBox=\"0 0 " << fmt(opt.size) << ' ' << fmt(opt.size) << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<circle id=\"boundary\" cx=\"" << fmt(half) << "\" cy=\"" << fmt(half) << "\" r=\"" << fmt(scale)
        << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\" stroke-dasharray=\"6,4\"/>\n";

    if (opt.edges != EdgeStyle::None && !g.edges.empty()) {
        out << "<g id=\"edges\" fill=\"none\" stroke=\"#333333\" stroke-width=\"0.6\">\n";
        for (auto [u, v] : g.edges) {
            const Vec2 p = disk[static_cast<std::size_t>(u)];
            const Vec2 q = disk[static_cast<std::size_t>(v)];
            const Screen a = to_screen(p);
            const Screen b = to_screen(q);
            Screen center{};
            double radius = 0;
            bool arc = false;
            if (opt.edges == EdgeStyle::Geodesic) {
                // The geodesic lies on the circle through p, q and the inverse of p.
                const Vec2 base = (p.x * p.x + p.y * p.y) > (q.x * q.x + q.y * q.y) ? p : q;
                const double r2 = base.x * base.x + base.y * base.y;
                if (r2 > 1e-18) {
                    const Screen inv = to_screen({base.x / r2, base.y / r2});
                    arc = circumcircle(a, b, inv, center, radius) && radius < 1e6 * opt.size;
                }
            }
            if (arc) {
                const double cross = (a.x - center.x) * (b.y - center.y) - (a.y - center.y) * (b.x - center.x);
                out << "<path d=\"M " << fmt(a.x) << ' ' << fmt(a.y) << " A " << fmt(radius) << ' ' << fmt(radius)
                    << " 0 0 " << (cross > 0 ? 1 : 0) << ' ' << fmt(b.x) << ' ' << fmt(b.y) << "\"/>\n";
            } else {
                out << "<line x1=\"" << fmt(a.x) << "\" y1=\"" << fmt(a.y) << "\" x2=\"" << fmt(b.x) << "\" y2=\""
                    << fmt(b.y) << "\"/>\n";
            }
            ++sum.edges;
        }
        out << "</g>\n";
    }

    out << "<g id=\"vertices\" stroke=\"black\" stroke-width=\"0.5\">\n";
    for (int i = 0; i < g.order(); ++i) {
        const Screen s = to_screen(disk[static_cast<std::size_t>(i)]);
        const char* color = i < opt.highlight_below ? "#ffdd55" : "#dd3333";
        out << "<circle cx=\"" << fmt(s.x) << "\" cy=\"" << fmt(s.y) << "\" r=\"" << fmt(opt.vertex_radius)
            << "\" fill=\"" << color << "\"><title>A" << i + 1 << "</title></circle>\n";
        ++sum.vertices;
    }
    out << "</g>\n</svg>\n";
    if (summary) *summary = sum;
    return out.str();
}

SvgSummary emit_svg(const Graph& g, const std::filesystem::path& path, const SvgOptions& opt) {
    SvgSummary sum;
    write_file_atomic(path, format_svg(g, opt, &sum));
    return sum;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw std::runtime_error("write to " + tmp.string() + " failed");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw std::runtime_error("cannot rename onto " + path.string() + ": " + ec.message());
    }
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace hypchrom
