// Command-line front end: build, grow, certify, color and export d-distance
// graphs in the hyperbolic plane.
//
// Exit codes: 0 verdict obtained, 1 integrity failure (bad input, failed
// certification), 2 usage error, 3 search stopped by --time-limit.

#include <chrono>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "hypchrom/augment.hpp"
#include "hypchrom/chromatic.hpp"
#include "hypchrom/io.hpp"

using namespace hypchrom;
namespace fs = std::filesystem;

namespace {

constexpr int kExitIntegrity = 1;
constexpr int kExitUsage = 2;
constexpr int kExitAborted = 3;

bool looks_like_bundle(const std::string& text) { return text.rfind("hypchrom-bundle", 0) == 0; }

Graph load_graph(const fs::path& path, bool verify) {
    BundleReadOptions opt;
    opt.verify = verify;
    return read_bundle(path, opt);
}

AdjacencyGraph load_adjacency(const fs::path& path, bool verify) {
    std::string text = read_file(path);
    if (looks_like_bundle(text)) {
        BundleReadOptions opt;
        opt.verify = verify;
        return to_adjacency(parse_bundle(text, opt));
    }
    return parse_dimacs(text);
}

NonEdgeCheck parse_non_edges(const std::string& s) {
    if (s == "none") return NonEdgeCheck::None;
    if (s == "exact") return NonEdgeCheck::Exact;
    if (s == "prefilter") return NonEdgeCheck::NumericPrefilter;
    throw CLI::ValidationError("--non-edges", "expected none, exact or prefilter");
}

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Colorable: return "colorable";
        case Verdict::NotColorable: return "not-colorable";
        case Verdict::Aborted: return "aborted";
    }
    return "?";
}

void print_stats(const SearchStats& s) {
    std::cout << "max_depth " << s.max_depth << "\nnodes " << s.nodes_visited << "\nforced " << s.forced_assignments
              << "\nseconds " << s.elapsed.count() << "\ngreedy_witness " << (s.greedy_witness ? "yes" : "no") << '\n';
}

void print_coloring(const Coloring& c) {
    std::cout << "coloring";
    for (int x : c) std::cout << ' ' << x + 1;
    std::cout << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact d-distance graphs in the hyperbolic plane and their colorings"};
    app.require_subcommand(1);

    // Shared configuration: flags > environment > defaults.
    AugmentConfig aug;
    long sqrt_bits = aug.intersect.sqrt.precision_bits;
    long sqrt_denom = aug.intersect.sqrt.denom_bound;
    double time_limit = 0;
    bool no_verify = false;

    auto add_verify_flag = [&](CLI::App* sub) {
        sub->add_flag("--no-verify", no_verify, "Skip exact re-certification when reading a bundle");
    };

    // build-g9
    auto* build = app.add_subcommand("build-g9", "Write the certified seed graph");
    std::string build_out = "g9.bundle";
    build->add_option("-o,--out", build_out, "Output bundle")->capture_default_str();

    // augment
    auto* augment = app.add_subcommand("augment", "Grow a graph by circle intersections");
    std::string aug_in;
    std::string aug_out = "graph.bundle";
    std::string aug_dir;
    int phases = static_cast<int>(default_schedule().size());
    int min_neighbors = 0;
    augment->add_option("-i,--in", aug_in, "Input bundle (default: the seed graph)");
    augment->add_option("-o,--out", aug_out, "Final bundle")->capture_default_str();
    augment->add_option("--out-dir", aug_dir, "Also write phase-K.bundle and phase-K.txt per phase");
    augment->add_option("--phases", phases, "Number of phases")->check(CLI::Range(0, 32))->capture_default_str();
    augment->add_option("--min-neighbors", min_neighbors,
                        "Neighbor threshold for every phase (default: 2 for the first phase, then 3)")
        ->check(CLI::Range(2, 1000));
    augment->add_option("--denom-bound", aug.denom_bound, "Largest accepted octuple denominator")
        ->envname("HYPCHROM_DENOM_BOUND")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    augment->add_option("--sqrt-bits", sqrt_bits, "Working precision of the field square root")
        ->envname("HYPCHROM_SQRT_BITS")
        ->check(CLI::Range(64, 1 << 16))
        ->capture_default_str();
    augment->add_option("--sqrt-denom-bound", sqrt_denom, "Denominator bound for square-root coefficients")
        ->envname("HYPCHROM_SQRT_DENOM_BOUND")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    augment->add_option("--tolerance", aug.numeric_tolerance, "Relative tolerance of the numeric prefilter")
        ->envname("HYPCHROM_TOLERANCE")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    add_verify_flag(augment);

    // certify
    auto* cert = app.add_subcommand("certify", "Re-check every edge of a bundle exactly");
    std::string cert_in;
    std::string non_edges = "none";
    cert->add_option("file", cert_in, "Bundle")->required();
    cert->add_option("--non-edges", non_edges, "none, exact or prefilter")->capture_default_str();

    // color
    auto* color = app.add_subcommand("color", "Search for a k-coloring");
    std::string color_in;
    int k = 4;
    int prefix = 0;
    bool symmetry_break = true;
    bool greedy_probe = true;
    color->add_option("file", color_in, "Bundle or DIMACS file")->required();
    color->add_option("-k,--k", k, "Number of colors")->check(CLI::Range(1, kMaxColors))->capture_default_str();
    color->add_option("--prefix", prefix, "Use only the first N vertices")->check(CLI::NonNegativeNumber);
    color->add_flag("--symmetry-break,!--no-symmetry-break", symmetry_break, "Pre-color a greedy clique")
        ->capture_default_str();
    color->add_flag("--greedy,!--no-greedy", greedy_probe, "Try a greedy DSATUR pass first")
        ->capture_default_str();
    color->add_option("--time-limit", time_limit, "Seconds, 0 for none")
        ->envname("HYPCHROM_TIME_LIMIT")
        ->check(CLI::NonNegativeNumber);
    add_verify_flag(color);

    // prefix-search
    auto* pre = app.add_subcommand("prefix-search", "Smallest vertex prefix that is not k-colorable");
    std::string pre_in;
    pre->add_option("file", pre_in, "Bundle or DIMACS file")->required();
    pre->add_option("-k,--k", k, "Number of colors")->check(CLI::Range(1, kMaxColors))->capture_default_str();
    pre->add_flag("--symmetry-break,!--no-symmetry-break", symmetry_break, "Pre-color a greedy clique")
        ->capture_default_str();
    pre->add_flag("--greedy,!--no-greedy", greedy_probe, "Try a greedy DSATUR pass first")
        ->capture_default_str();
    add_verify_flag(pre);

    // export
    auto* exp = app.add_subcommand("export", "Convert a bundle to DIMACS, SVG or a fresh bundle");
    std::string exp_in;
    std::string dimacs_out;
    std::string svg_out;
    std::string bundle_out;
    std::string edge_style = "geodesic";
    double svg_size = 800;
    exp->add_option("file", exp_in, "Bundle")->required();
    exp->add_option("--dimacs", dimacs_out, "DIMACS output path");
    exp->add_option("--svg", svg_out, "SVG output path");
    exp->add_option("--bundle", bundle_out, "Bundle output path");
    exp->add_option("--edges", edge_style, "SVG edges: geodesic, chord or none")
        ->check(CLI::IsMember({"geodesic", "chord", "none"}))
        ->capture_default_str();
    exp->add_option("--size", svg_size, "SVG canvas size in pixels")->check(CLI::PositiveNumber)->capture_default_str();
    add_verify_flag(exp);

    // stats
    auto* stats = app.add_subcommand("stats", "Order, size, degrees and provenance summary");
    std::string stats_in;
    stats->add_option("file", stats_in, "Bundle")->required();
    add_verify_flag(stats);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    try {
        if (*build) {
            Graph g = build_g9();
            write_bundle(g, build_out);
            std::cout << "order " << g.order() << "\nsize " << g.size() << "\ncondition1 "
                      << (verify_condition1(g) ? "holds" : "fails") << "\nwrote " << build_out << '\n';
            return 0;
        }

        if (*augment) {
            aug.intersect.sqrt.precision_bits = static_cast<unsigned>(sqrt_bits);
            aug.intersect.sqrt.denom_bound = sqrt_denom;
            aug.progress = [](const std::string& s) { std::cerr << s << '\n'; };
            Graph g = aug_in.empty() ? build_g9() : load_graph(aug_in, !no_verify);
            std::vector<int> schedule;
            for (int i = 0; i < phases; ++i) {
                if (min_neighbors > 0)
                    schedule.push_back(min_neighbors);
                else
                    schedule.push_back(aug_in.empty() && i == 0 ? 2 : 3);
            }
            PipelineResult res = grow_pipeline(g, schedule, aug);
            for (std::size_t i = 0; i < res.reports.size(); ++i) {
                std::cout << res.reports[i].to_string() << '\n';
                if (!aug_dir.empty()) {
                    fs::create_directories(aug_dir);
                    const std::string stem = (fs::path(aug_dir) / ("phase-" + std::to_string(i + 1))).string();
                    write_bundle(res.graphs[i + 1], stem + ".bundle");
                    write_file_atomic(stem + ".txt", res.reports[i].to_string() + '\n');
                }
            }
            write_bundle(res.graphs.back(), aug_out);
            std::cout << "wrote " << aug_out << '\n';
            return 0;
        }

        if (*cert) {
            const NonEdgeCheck mode = parse_non_edges(non_edges);
            BundleReadOptions opt;
            opt.verify = false;
            Graph g = read_bundle(cert_in, opt);
            const auto t0 = std::chrono::steady_clock::now();
            const std::string err = certify(g, mode);
            const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
            std::cout << "order " << g.order() << "\nsize " << g.size() << "\nseconds " << dt.count() << '\n';
            if (!err.empty()) {
                std::cout << "certified no\nerror " << err << '\n';
                return kExitIntegrity;
            }
            std::cout << "certified yes\n";
            return 0;
        }

        if (*color) {
            AdjacencyGraph g = load_adjacency(color_in, !no_verify);
            if (prefix > 0) g = g.prefix(prefix);
            SearchOptions opt;
            opt.symmetry_break = symmetry_break;
            opt.greedy_probe = greedy_probe;
            opt.time_limit = std::chrono::duration<double>(time_limit);
            SearchResult r = search_k_coloring(g, k, opt);
            std::cout << "vertices " << g.n << "\nedges " << g.edge_count() << "\nk " << k << "\nverdict "
                      << verdict_name(r.verdict) << '\n';
            print_stats(r.stats);
            if (r.coloring) {
                if (!verify_coloring(g, *r.coloring, k)) {
                    std::cout << "witness invalid\n";
                    return kExitIntegrity;
                }
                print_coloring(*r.coloring);
            }
            return r.verdict == Verdict::Aborted ? kExitAborted : 0;
        }

        if (*pre) {
            AdjacencyGraph g = load_adjacency(pre_in, !no_verify);
            SearchOptions opt;
            opt.symmetry_break = symmetry_break;
            opt.greedy_probe = greedy_probe;
            PrefixResult r;
            try {
                r = minimal_non_colorable_prefix(g, k, opt);
            } catch (const std::invalid_argument&) {
                std::cout << "vertices " << g.n << "\nk " << k << "\nminimal_prefix none (graph is colorable)\n";
                return 0;
            }
            std::cout << "vertices " << g.n << "\nk " << k << "\nminimal_prefix " << r.prefix << "\nsearches "
                      << r.searches << "\nunsat_seconds " << r.unsat_stats.elapsed.count() << "\nunsat_max_depth "
                      << r.unsat_stats.max_depth << "\nwitness_seconds " << r.witness_stats.elapsed.count() << '\n';
            if (!verify_coloring(g.prefix(r.prefix - 1), r.witness, k)) {
                std::cout << "witness invalid\n";
                return kExitIntegrity;
            }
            return 0;
        }

        if (*exp) {
            if (dimacs_out.empty() && svg_out.empty() && bundle_out.empty())
                throw CLI::ValidationError("export", "give at least one of --dimacs, --svg, --bundle");
            Graph g = load_graph(exp_in, !no_verify);
            if (!dimacs_out.empty()) {
                emit_dimacs(to_adjacency(g), dimacs_out);
                std::cout << "wrote " << dimacs_out << '\n';
            }
            if (!svg_out.empty()) {
                SvgOptions opt;
                opt.size = svg_size;
                opt.edges = edge_style == "chord" ? EdgeStyle::Chord
                            : edge_style == "none" ? EdgeStyle::None
                                                   : EdgeStyle::Geodesic;
                SvgSummary s = emit_svg(g, svg_out, opt);
                std::cout << "wrote " << svg_out << " (" << s.vertices << " vertices, " << s.edges
                          << " edges, max |P|^2 " << s.max_norm_sq << ")\n";
                if (!s.all_inside) return kExitIntegrity;
            }
            if (!bundle_out.empty()) {
                write_bundle(g, bundle_out);
                std::cout << "wrote " << bundle_out << '\n';
            }
            return 0;
        }

        if (*stats) {
            Graph g = load_graph(stats_in, !no_verify);
            AdjacencyGraph a = to_adjacency(g);
            std::size_t min_deg = a.n ? a.neighbors[0].size() : 0;
            std::size_t max_deg = 0;
            for (const auto& nb : a.neighbors) {
                min_deg = std::min(min_deg, nb.size());
                max_deg = std::max(max_deg, nb.size());
            }
            Integer max_den = 1;
            for (const auto& v : g.vertices)
                for (const auto& q : v.entries()) max_den = std::max<Integer>(max_den, q.get_den());
            int max_phase = 0;
            for (const auto& pv : g.provenance) max_phase = std::max(max_phase, pv.phase);
            std::cout << "order " << g.order() << "\nsize " << g.size() << "\nmin_degree " << min_deg
                      << "\nmax_degree " << max_deg << "\nmax_denominator " << max_den.get_str() << "\nphases "
                      << max_phase << '\n';
            for (int p = 0; p <= max_phase; ++p) {
                int count = 0;
                for (const auto& pv : g.provenance) count += pv.phase == p;
                std::cout << "phase_" << p << "_vertices " << count << '\n';
            }
            return 0;
        }
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const FormatError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIntegrity;
    } catch (const IntegrityError& e) {
        std::cerr << "integrity failure: " << e.what() << '\n';
        return kExitIntegrity;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIntegrity;
    }
    return kExitUsage;
}
