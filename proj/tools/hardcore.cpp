// Command-line front end: ratio evaluation, zero hunting, region verdicts,
// Moebius classification, fast implementation, and rendering.  All numeric
// output is exact strings where the value is exact, decimal with an explicit
// precision field otherwise.  Exit codes: 0 ok, 2 parse error, 3 domain
// precondition, 4 search failed, 5 internal contract violation.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "hardcore/catalog.hpp"
#include "hardcore/cayley.hpp"
#include "hardcore/exact.hpp"
#include "hardcore/fast_impl.hpp"
#include "hardcore/graph.hpp"
#include "hardcore/moebius.hpp"
#include "hardcore/regions.hpp"

using namespace hardcore;
using nlohmann::json;

namespace {

struct GlobalOpts {
    std::uint64_t seed = 0;
    int threads = 1;
    std::string manifest_path;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DomainError("cannot write " + path);
    out << data;
}

struct ManifestScope {
    const GlobalOpts& opts;
    json manifest;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    ManifestScope(const GlobalOpts& g, const std::string& command) : opts(g) {
        manifest["command"] = command;
        manifest["seed"] = g.seed;
        manifest["threads"] = g.threads;
        manifest["version"] = "1.0";
        manifest["outputs"] = json::array();
        manifest["flags"] = json::object();
    }
    void flag(const std::string& k, const std::string& v) { manifest["flags"][k] = v; }
    void output(const std::string& path) { manifest["outputs"].push_back(path); }
    ~ManifestScope() {
        if (opts.manifest_path.empty()) return;
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - start)
                      .count();
        manifest["elapsed_ms"] = ms;
        std::ofstream out(opts.manifest_path);
        out << manifest.dump(2) << "\n";
    }
};

json verdict_json(const char* region, const RegionVerdict& v) {
    json j;
    j["region"] = region;
    j["status"] = to_string(v.status);
    j["margin"] = to_decimal_string(v.margin, 20);
    if (v.witness)
        j["witness"] = {{"re", to_decimal_string(v.witness->re, 30)},
                        {"im", to_decimal_string(v.witness->im, 30)},
                        {"precision_bits", kMPBits}};
    return j;
}

int run(int argc, char** argv) {
    CLI::App app{"hard-core independence polynomial toolkit"};
    app.require_subcommand(1);
    GlobalOpts g;
    app.add_option("--seed", g.seed, "deterministic seed recorded in the manifest");
    app.add_option("--threads", g.threads, "worker threads for rendering");
    app.add_option("--manifest", g.manifest_path, "write a run manifest JSON here");

    // ratio
    auto* c_ratio = app.add_subcommand("ratio", "exact Z^in/Z^out of a rooted graph");
    std::string ratio_graph, ratio_lambda;
    c_ratio->add_option("--graph", ratio_graph, "graph JSON file")->required();
    c_ratio->add_option("--lambda", ratio_lambda, "Gaussian rational")->required();

    // zeros
    auto* c_zeros = app.add_subcommand("zeros", "smallest G_Delta^1 tree killed by lambda");
    std::string zeros_lambda;
    int zeros_delta = 3, zeros_maxv = 12;
    c_zeros->add_option("--lambda", zeros_lambda)->required();
    c_zeros->add_option("--delta", zeros_delta);
    c_zeros->add_option("--max-vertices", zeros_maxv);

    // classify
    auto* c_classify = app.add_subcommand("classify", "Moebius class of f_lambda");
    std::string classify_lambda, classify_matrix;
    c_classify->add_option("--lambda", classify_lambda, "classify f_lambda");
    c_classify->add_option("--matrix", classify_matrix, "classify an explicit matrix \"a b c d\"");

    // regions
    auto* c_regions = app.add_subcommand("regions", "region verdicts for lambda");
    std::string regions_lambda;
    int regions_delta = 3;
    c_regions->add_option("--lambda", regions_lambda)->required();
    c_regions->add_option("--delta", regions_delta);

    // implement
    auto* c_impl = app.add_subcommand("implement", "fast implementation of a target ratio");
    std::string impl_lambda0, impl_target, impl_eps, impl_cert;
    int impl_delta = 3, impl_catalog = 17;
    c_impl->add_option("--lambda0", impl_lambda0)->required();
    c_impl->add_option("--delta", impl_delta);
    c_impl->add_option("--target", impl_target)->required();
    c_impl->add_option("--eps", impl_eps)->required();
    c_impl->add_option("--catalog-size", impl_catalog, "catalog max vertices");
    c_impl->add_option("--certificate", impl_cert, "write the implementer certificate here");

    // render-activity
    auto* c_act = app.add_subcommand("render-activity", "spherical-derivative activity field");
    int act_d = 2, act_depth = 120, act_w = 512, act_h = 512;
    std::string act_rect = "-5,-5,5,5", act_px = "512x512", act_out;
    double act_threshold = 1e-3;
    c_act->add_option("--d", act_d, "down-degree");
    c_act->add_option("--depth", act_depth);
    c_act->add_option("--rect", act_rect, "x0,y0,x1,y1");
    c_act->add_option("--px", act_px, "WxH");
    c_act->add_option("--threshold", act_threshold);
    c_act->add_option("--out", act_out, "PGM path")->required();

    // render-cardioid
    auto* c_card = app.add_subcommand("render-cardioid", "boundary polyline of Lambda_Delta");
    int card_delta = 3, card_samples = 4096;
    std::string card_out;
    c_card->add_option("--delta", card_delta);
    c_card->add_option("--samples", card_samples);
    c_card->add_option("--out", card_out, "CSV path")->required();

    // cayley-zeros
    auto* c_cz = app.add_subcommand("cayley-zeros", "zeros of Z_{T_n} for the Cayley tree");
    int cz_d = 2, cz_n = 1, cz_precision = 12;
    std::string cz_out;
    c_cz->add_option("--d", cz_d);
    c_cz->add_option("--n", cz_n);
    c_cz->add_option("--precision", cz_precision);
    c_cz->add_option("--out", cz_out, "CSV path")->required();

    CLI11_PARSE(app, argc, argv);

    if (c_ratio->parsed()) {
        ManifestScope m(g, "ratio");
        RootedGraph graph = graph_from_json(read_file(ratio_graph));
        GaussianRational lambda = parse_gaussian(ratio_lambda);
        PartitionPair p = graph.is_tree() ? tree_partition(graph, lambda)
                                          : brute_force_partition(graph, lambda);
        json out;
        out["z_in"] = to_string(p.z_in);
        out["z_out"] = to_string(p.z_out);
        out["ratio"] = to_string(ratio_of(p));
        std::cout << out.dump() << "\n";
        return 0;
    }
    if (c_zeros->parsed()) {
        ManifestScope m(g, "zeros");
        GaussianRational lambda = parse_gaussian(zeros_lambda);
        auto t = find_minimal_zero_tree(lambda, zeros_delta, zeros_maxv);
        json out;
        out["lambda"] = to_string(lambda);
        out["found"] = t.has_value();
        if (t) {
            out["tree"] = json::parse(graph_to_json(*t));
            out["vertices"] = t->vertex_count;
        }
        std::cout << out.dump() << "\n";
        return 0;
    }
    if (c_classify->parsed()) {
        ManifestScope m(g, "classify");
        MoebiusQ mat = classify_matrix.empty() ? f_lambda(parse_gaussian(classify_lambda))
                                               : moebius_from_string(classify_matrix);
        json out;
        out["matrix"] = to_string(mat);
        out["tr_squared"] = to_string(tr_squared(mat));
        out["class"] = to_string(classify(mat).kind);
        FixedPoints fp = fixed_points(mat);
        out["fixed_points"] = {{"exact", fp.exact},
                               {"precision_bits", fp.precision_bits},
                               {"p1", fp.exact ? to_string(fp.p1) : to_decimal_string(fp.approx1.re, 30) + "+" + to_decimal_string(fp.approx1.im, 30) + "i"},
                               {"tag1", to_string(fp.tag1)},
                               {"p2", fp.exact ? to_string(fp.p2) : to_decimal_string(fp.approx2.re, 30) + "+" + to_decimal_string(fp.approx2.im, 30) + "i"},
                               {"tag2", to_string(fp.tag2)}};
        std::cout << out.dump() << "\n";
        return 0;
    }
    if (c_regions->parsed()) {
        ManifestScope m(g, "regions");
        GaussianRational lambda = parse_gaussian(regions_lambda);
        std::cout << verdict_json("shearer", shearer_contains(lambda, regions_delta)).dump() << "\n";
        std::cout << verdict_json("cardioid", cardioid_contains(lambda, regions_delta)).dump() << "\n";
        json extras;
        extras["region"] = "exceptional-candidates";
        bool member = false;
        for (const auto& cand : exceptional_candidates(regions_delta))
            if (cand == lambda) { member = true; break; }
        extras["status"] = member ? "inside" : "outside";
        std::cout << extras.dump() << "\n";
        json ls;
        ls["lambda_star"] = to_string(lambda_star(regions_delta));
        ls["shearer_radius"] = to_string(shearer_radius(regions_delta));
        std::cout << ls.dump() << "\n";
        return 0;
    }
    if (c_impl->parsed()) {
        ManifestScope m(g, "implement");
        GaussianRational lambda0 = parse_gaussian(impl_lambda0);
        GaussianRational target = parse_gaussian(impl_target);
        Rational eps = rational_from_string(impl_eps);
        auto t0 = std::chrono::steady_clock::now();
        TreeCatalog catalog = enumerate_catalog(impl_delta, lambda0, impl_catalog);
        SearchParams params;
        params.catalog_vertices = impl_catalog;
        params.seed = g.seed;
        FastImplementer imp = search_fast_implementer(lambda0, impl_delta, catalog, params);
        auto t1 = std::chrono::steady_clock::now();
        ImplementationPlan plan = run_fast_implementation(imp, target, eps);
        EmittedTree emitted = emit_tree(plan, imp);
        auto t2 = std::chrono::steady_clock::now();

        if (!impl_cert.empty()) {
            write_file(impl_cert, implementer_to_json(imp));
            m.output(impl_cert);
        }
        json out;
        out["lambda0"] = to_string(lambda0);
        out["target"] = to_string(target);
        out["eps"] = to_string(eps);
        json labels = json::array();
        for (const auto& l : plan.labels) {
            switch (l.kind) {
                case PlanLabel::Kind::Lambda0: labels.push_back("lambda0"); break;
                case PlanLabel::Kind::Chi: labels.push_back("chi"); break;
                case PlanLabel::Kind::Mu: labels.push_back("mu" + std::to_string(l.pair)); break;
            }
        }
        out["plan"] = std::move(labels);
        out["K"] = plan.length();
        out["stages"] = {{"close", plan.k_close}, {"walk", plan.k_walk}, {"spiral", plan.k_spiral}};
        out["z_in"] = to_string(emitted.pair.z_in);
        out["z_out"] = to_string(emitted.pair.z_out);
        out["replay_value"] = to_string(plan.replay_value);
        out["replay_error_squared"] = to_string(plan.replay_error2);
        out["tree_vertices"] = emitted.tree.vertex_count;
        out["tree"] = json::parse(graph_to_json(emitted.tree));
        out["pairs"] = imp.pairs.size();
        out["timings_ms"] = {
            {"search", std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count()},
            {"pipeline", std::chrono::duration_cast<std::chrono::milliseconds>(t2 - t1).count()}};
        std::cout << out.dump() << "\n";
        return 0;
    }
    if (c_act->parsed()) {
        ManifestScope m(g, "render-activity");
        double x0, y0, x1, y1;
        if (std::sscanf(act_rect.c_str(), "%lf,%lf,%lf,%lf", &x0, &y0, &x1, &y1) != 4)
            throw ParseError("bad --rect, expected x0,y0,x1,y1");
        if (std::sscanf(act_px.c_str(), "%dx%d", &act_w, &act_h) != 2)
            throw ParseError("bad --px, expected WxH");
        ActivityField f =
            spherical_derivative_field(x0, y0, x1, y1, act_w, act_h, act_d, act_depth, g.threads);
        write_file(act_out, field_to_pgm(f, act_threshold));
        m.output(act_out);
        json out;
        out["out"] = act_out;
        out["px"] = {act_w, act_h};
        std::cout << out.dump() << "\n";
        return 0;
    }
    if (c_card->parsed()) {
        ManifestScope m(g, "render-cardioid");
        write_file(card_out, cardioid_boundary_csv(card_delta, card_samples));
        m.output(card_out);
        std::cout << json{{"out", card_out}}.dump() << "\n";
        return 0;
    }
    if (c_cz->parsed()) {
        ManifestScope m(g, "cayley-zeros");
        auto zeros = cayley_zeros(cz_d, cz_n, cz_precision);
        std::ostringstream csv;
        csv << "n,re,im,residual\n";
        for (const auto& z : zeros)
            csv << cz_n << "," << to_decimal_string(z.z.re, 25) << ","
                << to_decimal_string(z.z.im, 25) << "," << to_decimal_string(z.residual_bound, 6)
                << "\n";
        write_file(cz_out, csv.str());
        m.output(cz_out);
        std::cout << json{{"out", cz_out}, {"count", zeros.size()}}.dump() << "\n";
        return 0;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const SearchFailed& e) {
        std::cerr << "search failed: " << e.what() << "\n";
        return 4;
    } catch (const InternalError& e) {
        std::cerr << "internal error (lemma contract violation, please report): " << e.what() << "\n";
        return 5;
    } catch (const DomainError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
