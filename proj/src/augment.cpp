#include "hypchrom/augment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <sstream>
#include <unordered_map>

#include "bigfloat.hpp"

namespace hypchrom {

EuclideanCircleRec circle_of(const ModulePoint& C) {
    const Params& p = params();
    FieldElement K = C.conformal_factor();
    FieldElement fK = p.f_elem * K;
    FieldElement inv = (FieldElement(2) + fK).inverse();
    FieldElement a = FieldElement(2) * C.x_factor() * inv;
    FieldElement b = FieldElement(2) * C.y_factor() * inv;
    FieldElement e = (FieldElement(2) * C.norm_sq() - fK) * inv / p.R_sq;
    FieldElement r2 = p.R_sq * (a * a + p.s_sq * b * b - e);
    return {ModulePoint::from_factors(a, b), e, r2};
}

namespace {

struct Quadratic {
    // Points are X = x0 + x1 * t, Y = y0 + y1 * t with t = +-sqrt(disc).
    FieldElement x0, x1, y0, y1, disc;
};

NumericPoint enclose(const FieldElement& X, const FieldElement& Y, unsigned bits) {
    Rational w(1);
    mpq_div_2exp(w.get_mpq_t(), w.get_mpq_t(), bits);
    return point_coords_numeric(ModulePoint::from_factors(X, Y), w);
}

NumericPoint enclose_irrational(const Quadratic& q, int root_sign, unsigned bits) {
    const Params& p = params();
    Rational w(1);
    mpq_div_2exp(w.get_mpq_t(), w.get_mpq_t(), bits + 32);
    RatInterval t = sqrt(to_interval(q.disc, w), bits + 32);
    if (root_sign < 0) t = -t;
    RatInterval X = to_interval(q.x0, w) + to_interval(q.x1, w) * t;
    RatInterval Y = to_interval(q.y0, w) + to_interval(q.y1, w) * t;
    RatInterval R = sqrt(to_interval(p.R_sq, w), bits + 32);
    RatInterval s = sqrt(to_interval(p.s_sq, w), bits + 32);
    return {R * X, R * s * Y};
}

// sign of (x_+ - x_-), then of (y_+ - y_-), for t_+ = sqrt(disc) > 0
bool plus_is_smaller(const Quadratic& q) {
    int sx = sign(q.x1);
    if (sx != 0) return sx < 0;
    return sign(q.y1) < 0;
}

}  // namespace

std::vector<CandidatePoint> intersect_circles(const EuclideanCircleRec& c1, const EuclideanCircleRec& c2,
                                              const IntersectConfig& cfg) {
    const Params& p = params();
    const FieldElement a1 = c1.center.x_factor();
    const FieldElement b1 = c1.center.y_factor();
    const FieldElement a2 = c2.center.x_factor();
    const FieldElement b2 = c2.center.y_factor();

    // Radical line: alpha X + beta Y = gamma
    FieldElement alpha = FieldElement(2) * (a1 - a2);
    FieldElement beta = FieldElement(2) * p.s_sq * (b1 - b2);
    FieldElement gamma = c1.offset - c2.offset;
    if (alpha.is_zero() && beta.is_zero()) {
        if (gamma.is_zero()) throw IdenticalCircles("intersect_circles: identical circles");
        return {};
    }

    Quadratic q;
    if (!alpha.is_zero()) {
        FieldElement A = beta * beta + p.s_sq * alpha * alpha;
        FieldElement B = FieldElement(2) * beta * (a1 * alpha - gamma) - FieldElement(2) * p.s_sq * b1 * alpha * alpha;
        FieldElement C = gamma * gamma - FieldElement(2) * a1 * alpha * gamma + c1.offset * alpha * alpha;
        FieldElement inv2A = (FieldElement(2) * A).inverse();
        FieldElement inv_alpha = alpha.inverse();
        q.disc = B * B - FieldElement(4) * A * C;
        q.y0 = -B * inv2A;
        q.y1 = inv2A;
        q.x0 = (gamma - beta * q.y0) * inv_alpha;
        q.x1 = -beta * q.y1 * inv_alpha;
    } else {
        FieldElement Y = gamma / beta;
        FieldElement rest = p.s_sq * Y * Y - FieldElement(2) * p.s_sq * b1 * Y + c1.offset;
        q.disc = a1 * a1 - rest;
        q.x0 = a1;
        q.x1 = FieldElement::one();
        q.y0 = Y;
        q.y1 = FieldElement::zero();
    }

    const int ds = sign(q.disc);
    if (ds < 0) return {};

    std::vector<CandidatePoint> out;
    if (ds == 0) {
        CandidatePoint cp;
        cp.exact = ModulePoint::from_factors(q.x0, q.y0);
        cp.numeric = enclose(q.x0, q.y0, cfg.enclosure_bits);
        out.push_back(std::move(cp));
        return out;
    }

    const bool swap_order = plus_is_smaller(q);
    auto root = sqrt(q.disc, cfg.sqrt);
    for (int root_sign : {-1, +1}) {
        CandidatePoint cp;
        if (root) {
            FieldElement t = root_sign > 0 ? *root : -*root;
            FieldElement X = q.x0 + q.x1 * t;
            FieldElement Y = q.y0 + q.y1 * t;
            cp.exact = ModulePoint::from_factors(X, Y);
            cp.numeric = enclose(X, Y, cfg.enclosure_bits);
        } else {
            cp.numeric = enclose_irrational(q, root_sign, cfg.enclosure_bits);
        }
        cp.branch = ((root_sign > 0) != swap_order) ? '+' : '-';
        out.push_back(std::move(cp));
    }
    if (out[0].branch == '+') std::swap(out[0], out[1]);
    return out;
}

// ---------------------------------------------------------------------------
// Integer relations

namespace {

using detail::BigFloat;

// LLL with exact integer basis and floating Gram-Schmidt recomputed on swaps.
void lll_reduce(std::vector<std::vector<Integer>>& basis, mpfr_prec_t prec) {
    const size_t n = basis.size();
    const size_t dim = basis.front().size();
    std::vector<std::vector<BigFloat>> mu(n, std::vector<BigFloat>(n, BigFloat(prec)));
    std::vector<BigFloat> norms(n, BigFloat(prec));

    auto gram_schmidt = [&] {
        std::vector<std::vector<BigFloat>> star(n, std::vector<BigFloat>(dim, BigFloat(prec)));
        for (size_t i = 0; i < n; ++i) {
            for (size_t d = 0; d < dim; ++d) star[i][d] = BigFloat(prec, basis[i][d]);
            for (size_t j = 0; j < i; ++j) {
                BigFloat dot(prec, 0L);
                for (size_t d = 0; d < dim; ++d) dot += BigFloat(prec, basis[i][d]) * star[j][d];
                mu[i][j] = norms[j].is_zero() ? BigFloat(prec, 0L) : dot / norms[j];
                for (size_t d = 0; d < dim; ++d) star[i][d] -= mu[i][j] * star[j][d];
            }
            BigFloat nn(prec, 0L);
            for (size_t d = 0; d < dim; ++d) nn += star[i][d] * star[i][d];
            norms[i] = nn;
        }
    };

    gram_schmidt();
    const BigFloat delta(prec, Rational(99, 100));
    size_t k = 1;
    for (int guard = 0; k < n && guard < 200000; ++guard) {
        for (size_t jj = k; jj-- > 0;) {
            Integer r = mu[k][jj].round();
            if (r == 0) continue;
            for (size_t d = 0; d < dim; ++d) basis[k][d] -= r * basis[jj][d];
            BigFloat rf(prec, r);
            for (size_t l = 0; l < jj; ++l) mu[k][l] -= rf * mu[jj][l];
            mu[k][jj] -= rf;
        }
        BigFloat lhs = norms[k];
        BigFloat rhs = (delta - mu[k][k - 1] * mu[k][k - 1]) * norms[k - 1];
        if (!(lhs < rhs)) {
            ++k;
        } else {
            std::swap(basis[k], basis[k - 1]);
            gram_schmidt();
            k = std::max<size_t>(k - 1, 1);
        }
    }
}

// Finds q0..q3 with value = q0 + q1 c + q2 c^2 + q3 c^3.
std::optional<FieldElement> find_field_element(const BigFloat& value, const std::array<BigFloat, 4>& powers,
                                               unsigned scale_bits, long denom_bound) {
    const mpfr_prec_t prec = value.prec();
    std::vector<BigFloat> v{powers[0], powers[1], powers[2], powers[3], -value};
    std::vector<std::vector<Integer>> basis(5, std::vector<Integer>(6, 0));
    BigFloat scale(prec, 1L);
    mpfr_mul_2ui(scale.get(), scale.get(), scale_bits, MPFR_RNDN);
    for (size_t i = 0; i < 5; ++i) {
        basis[i][i] = 1;
        basis[i][5] = (v[i] * scale).round();
    }
    lll_reduce(basis, prec);
    const Integer coef_bound = Integer(denom_bound) * 1000;
    for (const auto& b : basis) {
        const Integer& den = b[4];
        if (den == 0 || abs(den) > Integer(denom_bound)) continue;
        bool small = true;
        for (size_t k = 0; k < 4; ++k) small = small && abs(b[k]) <= coef_bound;
        if (!small) continue;
        FieldElement q(Rational(b[0], den), Rational(b[1], den), Rational(b[2], den), Rational(b[3], den));
        return q;
    }
    return std::nullopt;
}

}  // namespace

std::optional<ModulePoint> reconstruct_module_point(const NumericPoint& np, long denom_bound) {
    const Rational width = std::max(np.x.width(), np.y.width());
    long scale_bits = 0;
    if (width == 0) {
        scale_bits = 256;
    } else {
        Rational inv = 1 / width;
        mpz_class fl = inv.get_num() / inv.get_den();
        scale_bits = static_cast<long>(mpz_sizeinbase(fl.get_mpz_t(), 2)) - 16;
    }
    if (scale_bits < 80) throw std::invalid_argument("reconstruct_module_point: enclosure too wide");
    scale_bits = std::min<long>(scale_bits, 400);

    const mpfr_prec_t prec = static_cast<mpfr_prec_t>(2 * scale_bits + 128);
    const RootInterval root = root_interval(static_cast<unsigned>(prec + 16));
    const BigFloat c(prec, (root.lo + root.hi) / 2);
    std::array<BigFloat, 4> powers{BigFloat(prec, 1L), c, c * c, c * c * c};
    const BigFloat R = (c + c - BigFloat(prec, 1L)).sqrt();
    const BigFloat s = (BigFloat(prec, 1L) - c * c).sqrt();
    const BigFloat X = BigFloat(prec, np.x.mid()) / R;
    const BigFloat Y = BigFloat(prec, np.y.mid()) / (R * s);

    auto xf = find_field_element(X, powers, static_cast<unsigned>(scale_bits), denom_bound);
    if (!xf) return std::nullopt;
    auto yf = find_field_element(Y, powers, static_cast<unsigned>(scale_bits), denom_bound);
    if (!yf) return std::nullopt;
    ModulePoint candidate = ModulePoint::from_factors(*xf, *yf);
    if (!candidate.inside_disk()) return std::nullopt;
    Rational check_w = width == 0 ? Rational(1, 1) : width;
    if (width == 0) mpq_div_2exp(check_w.get_mpq_t(), check_w.get_mpq_t(), 256);
    NumericPoint back = point_coords_numeric(candidate, check_w);
    if (!back.x.overlaps(np.x) || !back.y.overlaps(np.y)) return std::nullopt;
    return candidate;
}

// ---------------------------------------------------------------------------
// Augmentation phases

std::string PhaseReport::to_string() const {
    std::ostringstream os;
    os << "phase " << phase << " (min neighbors " << min_neighbors << "): pairs " << pairs
       << ", numeric candidates " << numeric_candidates << ", below threshold " << below_threshold
       << ", exact checked " << exact_checked << ", non-module " << non_module << ", reconstructed "
       << reconstructed << ", over denominator bound " << over_denom_bound << ", existing " << existing << ", duplicates " << duplicates
       << ", prefilter mismatches " << prefilter_mismatches << ", kept " << kept << " -> order " << order
       << ", size " << size << ", accidental edges " << accidental_edges.size() << "; " << seconds << " s";
    if (!accidental_edges.empty()) {
        os << "\n  accidental:";
        for (auto [u, v] : accidental_edges) os << " {" << u << "," << v << "}";
    }
    return os.str();
}

namespace {

struct NumCircle {
    Vec2 center;
    double r2 = 0;
};

NumCircle numeric_circle(Vec2 v, double f) {
    double n2 = v.x * v.x + v.y * v.y;
    double fK = f * (1 - n2);
    double denom = 2 + fK;
    Vec2 c{2 * v.x / denom, 2 * v.y / denom};
    return {c, c.x * c.x + c.y * c.y - (2 * n2 - fK) / denom};
}

// Intersection points of two circles in double precision. Near-tangent pairs
// report both (nearly equal) points; the exact stage decides.
int numeric_intersections(const NumCircle& a, const NumCircle& b, Vec2 out[2]) {
    double dx = b.center.x - a.center.x;
    double dy = b.center.y - a.center.y;
    double d2 = dx * dx + dy * dy;
    if (d2 == 0) return 0;
    double d = std::sqrt(d2);
    double ra = std::sqrt(a.r2);
    double rb = std::sqrt(b.r2);
    const double slack = 1e-9;
    if (d > ra + rb + slack || d < std::abs(ra - rb) - slack) return 0;
    double along = (a.r2 - b.r2 + d2) / (2 * d);
    double h2 = a.r2 - along * along;
    double h = h2 > 0 ? std::sqrt(h2) : 0;
    Vec2 base{a.center.x + along * dx / d, a.center.y + along * dy / d};
    out[0] = {base.x - h * dy / d, base.y + h * dx / d};
    out[1] = {base.x + h * dy / d, base.y - h * dx / d};
    return 2;
}

struct Pending {
    int i = 0;
    int j = 0;
    Vec2 point;
};

struct Kept {
    CandidatePoint cand;
    int rank = 0;  // 0 for '-', 1 for '+'
};

double dist2(Vec2 a, Vec2 b) {
    return (a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y);
}

}  // namespace

std::vector<int> default_schedule() { return {2, 3, 3, 3, 3, 3, 3}; }

PhaseResult phase_augment(const Graph& g, int min_neighbors, const AugmentConfig& cfg, int phase) {
    if (min_neighbors < 2) throw std::invalid_argument("phase_augment: min_neighbors must be at least 2");
    const auto t0 = std::chrono::steady_clock::now();
    PhaseResult res;
    res.graph = g;
    PhaseReport& rep = res.report;
    rep.phase = phase;
    rep.min_neighbors = min_neighbors;

    const int n = g.order();
    const double f = params().f_elem.approx();
    const double tol = cfg.numeric_tolerance * f;

    std::vector<Vec2> approx;
    std::vector<NumCircle> circles;
    approx.reserve(static_cast<size_t>(n));
    for (const auto& P : g.vertices) {
        approx.push_back(approx_coords(P));
        circles.push_back(numeric_circle(approx.back(), f));
    }

    auto numeric_neighbors = [&](Vec2 pt, std::vector<int>& nbrs) {
        nbrs.clear();
        for (int v = 0; v < n; ++v)
            if (std::abs(f_numeric(pt, approx[static_cast<size_t>(v)]) - f) <= tol) nbrs.push_back(v);
    };

    // Double-precision sweep over all pairs. A candidate is handled only by
    // the pair of its two lowest-indexed neighbors.
    std::vector<Pending> pending;
    std::vector<int> nbrs;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            ++rep.pairs;
            Vec2 pts[2];
            int cnt = numeric_intersections(circles[static_cast<size_t>(i)], circles[static_cast<size_t>(j)], pts);
            if (cnt == 2 && dist2(pts[0], pts[1]) < 1e-20) cnt = 1;
            for (int t = 0; t < cnt; ++t) {
                ++rep.numeric_candidates;
                numeric_neighbors(pts[t], nbrs);
                if (static_cast<int>(nbrs.size()) < min_neighbors) {
                    ++rep.below_threshold;
                    continue;
                }
                if (nbrs[0] != i || nbrs[1] != j) {
                    ++rep.duplicates;
                    continue;
                }
                pending.push_back({i, j, pts[t]});
            }
        }
    }
    if (cfg.progress)
        cfg.progress("phase " + std::to_string(phase) + ": " + std::to_string(pending.size()) +
                     " candidates to certify");

    std::unordered_map<std::string, int> known;
    for (int v = 0; v < n; ++v) known.emplace(g.vertices[static_cast<size_t>(v)].to_string(), v);
    std::vector<std::optional<ExactVertex>> exact(static_cast<size_t>(n));
    auto exact_vertex = [&](int v) -> const ExactVertex& {
        auto& slot = exact[static_cast<size_t>(v)];
        if (!slot) slot.emplace(g.vertices[static_cast<size_t>(v)]);
        return *slot;
    };
    std::map<int, EuclideanCircleRec> exact_circles;
    auto exact_circle = [&](int v) -> const EuclideanCircleRec& {
        auto it = exact_circles.find(v);
        if (it == exact_circles.end()) it = exact_circles.emplace(v, circle_of(g.vertices[static_cast<size_t>(v)])).first;
        return it->second;
    };

    std::map<std::pair<int, int>, std::vector<CandidatePoint>> pair_cache;
    auto pair_intersections = [&](int i, int j) -> std::vector<CandidatePoint>& {
        auto key = std::make_pair(i, j);
        auto it = pair_cache.find(key);
        if (it == pair_cache.end())
            it = pair_cache.emplace(key, intersect_circles(exact_circle(i), exact_circle(j), cfg.intersect)).first;
        return it->second;
    };

    std::unordered_map<std::string, size_t> kept_index;
    std::vector<Kept> kept;
    for (const Pending& pd : pending) {
        ++rep.exact_checked;
        auto& cands = pair_intersections(pd.i, pd.j);
        if (cands.empty()) {
            ++rep.below_threshold;
            continue;
        }
        const CandidatePoint* best = &cands[0];
        for (const auto& c : cands)
            if (dist2({c.numeric.x_mid(), c.numeric.y_mid()}, pd.point) <
                dist2({best->numeric.x_mid(), best->numeric.y_mid()}, pd.point))
                best = &c;
        CandidatePoint cand = *best;
        cand.source = {pd.i, pd.j};
        if (!cand.exact) {
            ++rep.non_module;
            auto rec = reconstruct_module_point(cand.numeric, cfg.denom_bound);
            if (!rec) continue;
            ++rep.reconstructed;
            cand.exact = rec;
        }
        bool small = true;
        for (int e = 0; e < 8; ++e) small = small && abs((*cand.exact)[e].get_den()) <= cfg.denom_bound;
        if (!small) {
            ++rep.over_denom_bound;
            continue;
        }
        const std::string key = cand.exact->to_string();
        if (known.count(key)) {
            ++rep.existing;
            continue;
        }
        if (kept_index.count(key)) {
            ++rep.duplicates;
            continue;
        }
        ExactVertex ev(*cand.exact);
        Vec2 pt = approx_coords(*cand.exact);
        numeric_neighbors(pt, nbrs);
        cand.neighbors.clear();
        for (int v : nbrs)
            if (is_unit_edge(ev, exact_vertex(v))) cand.neighbors.push_back(v);
        if (cand.neighbors.size() != nbrs.size()) ++rep.prefilter_mismatches;
        cand.neighbor_count = static_cast<int>(cand.neighbors.size());
        if (cand.neighbor_count < min_neighbors) {
            ++rep.below_threshold;
            continue;
        }
        if (!is_unit_edge(ev, exact_vertex(pd.i)) || !is_unit_edge(ev, exact_vertex(pd.j)))
            throw IntegrityError("candidate from pair {" + std::to_string(pd.i + 1) + "," + std::to_string(pd.j + 1) +
                                 "} is not at distance d from its sources");
        if (cand.neighbors[0] != pd.i || cand.neighbors[1] != pd.j) {
            // Numeric neighbor set was off; re-derive the branch label on the canonical pair.
            ++rep.prefilter_mismatches;
            cand.source = {cand.neighbors[0], cand.neighbors[1]};
            for (const auto& c : pair_intersections(cand.source.first, cand.source.second))
                if (c.exact && *c.exact == *cand.exact) cand.branch = c.branch;
        }
        if (!cand.exact->inside_disk()) throw IntegrityError("kept candidate outside the unit disk");
        kept_index.emplace(key, kept.size());
        kept.push_back({std::move(cand), 0});
    }

    for (auto& k : kept) k.rank = k.cand.branch == '+' ? 1 : 0;
    std::sort(kept.begin(), kept.end(), [](const Kept& a, const Kept& b) {
        if (a.cand.source != b.cand.source) return a.cand.source < b.cand.source;
        return a.rank < b.rank;
    });

    Graph& out = res.graph;
    std::vector<ExactVertex> new_exact;
    std::vector<Vec2> new_approx;
    for (const auto& k : kept) {
        const int idx = out.order();
        out.vertices.push_back(*k.cand.exact);
        out.provenance.push_back({phase, k.cand.source.first + 1, k.cand.source.second + 1, k.cand.branch});
        for (int v : k.cand.neighbors) out.edges.emplace_back(v, idx);
        new_exact.emplace_back(*k.cand.exact);
        new_approx.push_back(approx_coords(*k.cand.exact));
    }
    for (size_t a = 0; a < kept.size(); ++a) {
        for (size_t b = a + 1; b < kept.size(); ++b) {
            if (std::abs(f_numeric(new_approx[a], new_approx[b]) - f) > tol) continue;
            if (!is_unit_edge(new_exact[a], new_exact[b])) continue;
            const int u = n + static_cast<int>(a);
            const int v = n + static_cast<int>(b);
            out.edges.emplace_back(u, v);
            rep.accidental_edges.emplace_back(u + 1, v + 1);
        }
    }
    out.normalize_edges();
    rep.kept = static_cast<int>(kept.size());
    rep.order = out.order();
    rep.size = out.size();
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

PipelineResult grow_pipeline(const Graph& g0, const std::vector<int>& schedule, const AugmentConfig& cfg) {
    PipelineResult res;
    res.graphs.push_back(g0);
    int phase = 0;
    for (int min_neighbors : schedule) {
        ++phase;
        PhaseResult pr = phase_augment(res.graphs.back(), min_neighbors, cfg, phase);
        if (cfg.progress) cfg.progress(pr.report.to_string());
        res.graphs.push_back(std::move(pr.graph));
        res.reports.push_back(std::move(pr.report));
    }
    return res;
}

}  // namespace hypchrom
