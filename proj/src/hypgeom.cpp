#include "hypchrom/hypgeom.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace hypchrom {

ModulePoint::ModulePoint(std::array<Rational, 8> entries) : e_(std::move(entries)) {
    for (auto& q : e_) q.canonicalize();
}

ModulePoint ModulePoint::from_factors(const FieldElement& x_factor, const FieldElement& y_factor) {
    return ModulePoint({x_factor[3], x_factor[2], x_factor[1], x_factor[0], y_factor[3], y_factor[2], y_factor[1],
                        y_factor[0]});
}

ModulePoint ModulePoint::parse(const std::array<std::string, 8>& entries) {
    std::array<Rational, 8> e;
    for (size_t i = 0; i < 8; ++i) e[i] = parse_rational(entries[i]);
    return ModulePoint(std::move(e));
}

FieldElement ModulePoint::norm_sq() const {
    const Params& p = params();
    FieldElement X = x_factor();
    FieldElement Y = y_factor();
    return p.R_sq * (X * X + p.s_sq * Y * Y);
}

FieldElement ModulePoint::conformal_factor() const { return FieldElement::one() - norm_sq(); }

bool ModulePoint::inside_disk() const { return sign(conformal_factor()) > 0; }

std::string ModulePoint::to_string() const {
    std::string out;
    for (size_t i = 0; i < 8; ++i) {
        if (i) out += ' ';
        out += format_rational(e_[i]);
    }
    return out;
}

const Params& params() {
    static const Params p = [] {
        Params r;
        r.c_elem = FieldElement::generator();
        r.s_sq = FieldElement::one() - r.c_elem * r.c_elem;
        r.R_sq = FieldElement(2) * r.c_elem - FieldElement::one();
        r.f_elem = r.R_sq / (FieldElement::one() - r.c_elem);
        RatInterval cosh_d = to_interval(FieldElement::one() + r.f_elem, Rational(1, 1L << 60));
        r.d_numeric = std::acosh(cosh_d.mid_double());
        return r;
    }();
    return p;
}

NumericPoint NumericPoint::around(double x, double y, double radius) {
    Rational rx(x), ry(y), rr(radius);
    return {RatInterval(rx - rr, rx + rr), RatInterval(ry - rr, ry + rr)};
}

double NumericPoint::error_radius() const {
    Rational w = std::max(x.width(), y.width());
    return Rational(w / 2).get_d();
}

bool NumericPoint::inside_disk() const {
    RatInterval n = x * x + y * y;
    return n.hi < 1;
}

FieldElement f_of(const ModulePoint& P, const ModulePoint& Q) {
    const Params& p = params();
    FieldElement dx = P.x_factor() - Q.x_factor();
    FieldElement dy = P.y_factor() - Q.y_factor();
    FieldElement num = FieldElement(2) * p.R_sq * (dx * dx + p.s_sq * dy * dy);
    if (num.is_zero()) return num;
    return num / (P.conformal_factor() * Q.conformal_factor());
}

bool is_unit_edge(const ModulePoint& P, const ModulePoint& Q) { return is_unit_edge(ExactVertex(P), ExactVertex(Q)); }

ExactVertex::ExactVertex(const ModulePoint& P)
    : x_factor(P.x_factor()), y_factor(P.y_factor()), conformal(P.conformal_factor()) {
    f_times_conformal = params().f_elem * conformal;
}

bool is_unit_edge(const ExactVertex& a, const ExactVertex& b) {
    const Params& p = params();
    FieldElement dx = a.x_factor - b.x_factor;
    FieldElement dy = a.y_factor - b.y_factor;
    if (dx.is_zero() && dy.is_zero()) return false;
    FieldElement lhs = FieldElement(2) * p.R_sq * (dx * dx + p.s_sq * dy * dy);
    return lhs == a.f_times_conformal * b.conformal;
}

NumericPoint point_coords_numeric(const ModulePoint& P, const Rational& max_width) {
    if (max_width <= 0) throw std::invalid_argument("max_width must be positive");
    const Params& p = params();
    FieldElement X = P.x_factor();
    FieldElement Y = P.y_factor();
    Rational inv = 1 / max_width;
    unsigned bits = static_cast<unsigned>(mpz_sizeinbase(inv.get_num().get_mpz_t(), 2)) + 8;
    for (;; bits += 32) {
        Rational w(1);
        mpq_div_2exp(w.get_mpq_t(), w.get_mpq_t(), bits);
        RatInterval Rint = sqrt(to_interval(p.R_sq, w), bits);
        RatInterval sint = sqrt(to_interval(p.s_sq, w), bits);
        NumericPoint out{Rint * to_interval(X, w), Rint * sint * to_interval(Y, w)};
        if (out.x.width() <= max_width && out.y.width() <= max_width) return out;
    }
}

void Graph::normalize_edges() {
    for (auto& [u, v] : edges)
        if (u > v) std::swap(u, v);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
}

namespace {

std::array<Rational, 8> octuple(std::initializer_list<Rational> xs) {
    std::array<Rational, 8> e;
    std::copy(xs.begin(), xs.end(), e.begin());
    return e;
}

}  // namespace

const std::vector<std::pair<int, int>>& g9_edge_list() {
    static const std::vector<std::pair<int, int>> edges{{1, 2}, {1, 3}, {1, 5}, {1, 6}, {2, 3}, {2, 4},
                                                        {2, 8}, {3, 4}, {3, 9}, {4, 7}, {4, 8}, {5, 6},
                                                        {5, 7}, {5, 8}, {6, 7}, {6, 9}, {7, 9}};
    return edges;
}

Graph build_g9() {
    const Rational h(3, 2);
    Graph g;
    g.vertices = {
        ModulePoint(octuple({0, 0, 0, 0, 0, 0, 0, 0})),
        ModulePoint(octuple({0, 0, 0, 1, 0, 0, 0, 0})),
        ModulePoint(octuple({0, 0, 1, 0, 0, 0, 0, 1})),
        ModulePoint(octuple({-8, -4, 6, h, -8, -4, 6, 1})),
        ModulePoint(octuple({-4, 4, 2, -1, 16, -4, -4, 0})),
        ModulePoint(octuple({4, -4, 0, 1, -16, 12, 4, -2})),
        ModulePoint(octuple({0, 0, 0, 1, 16, 8, -8, -2})),
        ModulePoint(octuple({0, -2, 2, 1, 0, 8, -2, -2})),
        ModulePoint(octuple({-8, -2, 4, h, 8, -4, 0, 1})),
    };
    g.provenance.assign(9, Provenance{});
    for (auto [u, v] : g9_edge_list()) g.edges.emplace_back(u - 1, v - 1);
    g.normalize_edges();
    if (auto err = certify(g, NonEdgeCheck::Exact); !err.empty()) throw IntegrityError("seed graph: " + err);
    return g;
}

std::string certify(const Graph& g, NonEdgeCheck mode) {
    const int n = g.order();
    std::vector<ExactVertex> exact;
    exact.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        const ModulePoint& P = g.vertices[static_cast<size_t>(i)];
        if (!P.inside_disk()) return "vertex " + std::to_string(i + 1) + " is not inside the unit disk";
        exact.emplace_back(P);
    }
    std::set<std::pair<int, int>> recorded;
    for (auto [u, v] : g.edges) {
        std::string name = "{" + std::to_string(u + 1) + "," + std::to_string(v + 1) + "}";
        if (u < 0 || v < 0 || u >= n || v >= n) return "edge " + name + " references a missing vertex";
        if (u == v) return "edge " + name + " is a self-loop";
        if (!recorded.emplace(std::min(u, v), std::max(u, v)).second) return "edge " + name + " is duplicated";
        if (!is_unit_edge(exact[static_cast<size_t>(u)], exact[static_cast<size_t>(v)]))
            return "edge " + name + " is not at distance d";
    }
    if (mode == NonEdgeCheck::None) return {};

    std::vector<Vec2> approx;
    const double f = params().f_elem.approx();
    if (mode == NonEdgeCheck::NumericPrefilter)
        for (const auto& P : g.vertices) approx.push_back(approx_coords(P));
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (recorded.count({i, j})) continue;
            if (mode == NonEdgeCheck::NumericPrefilter &&
                std::abs(f_numeric(approx[static_cast<size_t>(i)], approx[static_cast<size_t>(j)]) - f) > 1e-6 * f)
                continue;
            if (is_unit_edge(exact[static_cast<size_t>(i)], exact[static_cast<size_t>(j)]))
                return "pair {" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                       "} is at distance d but not recorded";
        }
    }
    return {};
}

bool verify_condition1(const Graph& g) {
    if (g.order() < 9) return false;
    static const std::array<std::pair<int, int>, 6> checks{
        {{2, 8}, {4, 8}, {5, 8}, {3, 9}, {6, 9}, {7, 9}}};
    return std::all_of(checks.begin(), checks.end(), [&](auto pr) {
        return is_unit_edge(g.vertices[static_cast<size_t>(pr.first - 1)],
                            g.vertices[static_cast<size_t>(pr.second - 1)]);
    });
}

double f_numeric(Vec2 a, Vec2 b) {
    double dx = a.x - b.x;
    double dy = a.y - b.y;
    return 2 * (dx * dx + dy * dy) / ((1 - a.x * a.x - a.y * a.y) * (1 - b.x * b.x - b.y * b.y));
}

Vec2 approx_coords(const ModulePoint& P) {
    static const double R = std::sqrt(params().R_sq.approx());
    static const double s = std::sqrt(params().s_sq.approx());
    return {R * P.x_factor().approx(), R * s * P.y_factor().approx()};
}

SpindleEmbedding spindle_numeric(double d) {
    if (!(d > 0)) throw std::invalid_argument("spindle distance must be positive");
    SpindleEmbedding sp;
    const double R = std::tanh(d / 2);
    const double ca = (1 + R * R) / 2;
    const double sa = std::sqrt(1 - ca * ca);
    const double cb = 1 - (1 - ca) / (8 * ca * ca * (1 + ca));
    const double alpha = std::acos(ca);
    const double beta = std::acos(cb);
    sp.R = R;
    sp.cos_alpha = ca;
    sp.cos_beta = cb;
    sp.points[0] = {0, 0};
    sp.points[1] = {R, 0};
    sp.points[2] = {R * ca, R * sa};
    sp.points[3] = {R * (1 + ca) / (2 * ca), R * sa / (2 * ca)};
    sp.points[4] = {R * std::cos(beta), R * std::sin(beta)};
    sp.points[5] = {R * std::cos(alpha + beta), R * std::sin(alpha + beta)};
    sp.points[6] = {R * (std::cos(beta) + std::cos(alpha + beta)) / (2 * ca),
                    R * (std::sin(beta) + std::sin(alpha + beta)) / (2 * ca)};
    sp.edges = {{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 3}, {0, 4}, {0, 5}, {4, 5}, {4, 6}, {5, 6}, {3, 6}};
    return sp;
}

std::array<NumericPoint, 7> SpindleEmbedding::numeric() const {
    std::array<NumericPoint, 7> out;
    for (size_t i = 0; i < 7; ++i) out[i] = NumericPoint::around(points[i].x, points[i].y, 1e-14);
    return out;
}

}  // namespace hypchrom
