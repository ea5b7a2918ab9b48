#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <set>

#include "hardcore/catalog.hpp"
#include "hardcore/graph.hpp"
#include "hardcore/regions.hpp"

using namespace hardcore;

namespace {

std::mt19937_64 rng(424243);

Rational rand_rational(int num_range = 20, int den_range = 9) {
    std::uniform_int_distribution<long> num(-num_range, num_range);
    std::uniform_int_distribution<long> den(1, den_range);
    return make_rational(Integer(num(rng)), Integer(den(rng)));
}

GaussianRational rand_gaussian() { return {rand_rational(), rand_rational()}; }

// random rooted tree on n vertices (random parent attachment), degree-capped
RootedGraph rand_tree(int n, int delta) {
    for (;;) {
        RootedGraph g;
        g.vertex_count = n;
        g.delta = delta;
        std::vector<int> deg(n, 0);
        bool ok = true;
        for (int v = 1; v < n; ++v) {
            std::uniform_int_distribution<int> pick(0, v - 1);
            int p = pick(rng);
            if (deg[p] + 1 > delta) { ok = false; break; }
            ++deg[p];
            ++deg[v];
            g.edges.push_back({p, v});
        }
        if (!ok) continue;
        std::uniform_int_distribution<int> pick_root(0, n - 1);
        g.root = pick_root(rng);
        std::sort(g.edges.begin(), g.edges.end());
        return g;
    }
}

GaussianRational eval_ratio_finite(const RootedGraph& g, const GaussianRational& lam) {
    RatioValue r = ratio(g, lam);
    REQUIRE(r.is_finite());
    return r.value;
}

} // namespace

TEST_CASE("brute force partition on the named small graphs") {
    GaussianRational lam = rand_gaussian();
    RootedGraph k1 = single_vertex(3);
    PartitionPair p = brute_force_partition(k1, lam);
    CHECK(p.z_in == lam);
    CHECK(p.z_out == GaussianRational(1));

    RootedGraph edge = path_graph(2, 3);
    p = brute_force_partition(edge, lam);
    CHECK(p.z_in == lam);
    CHECK(p.z_out == GaussianRational(1) + lam);
    CHECK(p.z() == GaussianRational(1) + GaussianRational(2) * lam);

    RootedGraph p3 = path_graph(3, 3);
    p = brute_force_partition(p3, lam);
    CHECK(p.z() == GaussianRational(1) + GaussianRational(3) * lam + lam * lam);

    RootedGraph big;
    big.vertex_count = 25;
    big.delta = 24;
    big.root = 0;
    CHECK_THROWS_AS(brute_force_partition(big, lam), OracleLimit);
}

TEST_CASE("tree_partition equals brute force on random trees") {
    for (int trial = 0; trial < 300; ++trial) {
        std::uniform_int_distribution<int> size(1, 12);
        RootedGraph t = rand_tree(size(rng), 12);
        GaussianRational lam = rand_gaussian();
        PartitionPair a = tree_partition(t, lam);
        PartitionPair b = brute_force_partition(t, lam);
        CHECK(a.z_in == b.z_in);
        CHECK(a.z_out == b.z_out);
    }
    RootedGraph cycle;
    cycle.vertex_count = 3;
    cycle.edges = {{0, 1}, {0, 2}, {1, 2}};
    cycle.root = 0;
    cycle.delta = 2;
    CHECK_THROWS_AS(tree_partition(cycle, GaussianRational(1)), NotATree);
}

TEST_CASE("ratio examples") {
    GaussianRational lam = rand_gaussian();
    CHECK(eval_ratio_finite(single_vertex(3), lam) == lam);
    if (!(GaussianRational(1) + lam).is_zero())
        CHECK(eval_ratio_finite(path_graph(2, 3), lam) == lam / (GaussianRational(1) + lam));
    GaussianRational mhalf(make_rational(-1, 2), Rational(0));
    CHECK(eval_ratio_finite(path_graph(2, 2), mhalf) == GaussianRational(-1, 0));
    CHECK(brute_force_partition(path_graph(2, 2), mhalf).z().is_zero());
    PartitionPair both_zero{GaussianRational(0), GaussianRational(0)};
    CHECK(ratio_of(both_zero).kind == RatioValue::Kind::Indeterminate);
    PartitionPair inf_pair{GaussianRational(2), GaussianRational(0)};
    CHECK(ratio_of(inf_pair).kind == RatioValue::Kind::Infinite);
}

TEST_CASE("implement_on_path") {
    // n copies of K1 make the path P_n with ratio f_lambda^n(0)
    GaussianRational lam = rand_gaussian();
    if (lam.is_zero()) lam = GaussianRational(make_rational(1, 2), make_rational(1, 3));
    for (int n = 1; n <= 6; ++n) {
        std::vector<RootedGraph> blocks(n, single_vertex(3));
        RootedGraph path = implement_on_path(blocks);
        CHECK(path.vertex_count == n);
        CHECK(path.is_tree());
        SpherePoint v{GaussianRational(0)};
        MoebiusQ f = f_lambda(lam);
        for (int k = 0; k < n; ++k) v = apply(f, v);
        RatioValue r = ratio(path, lam);
        if (v.is_finite()) {
            REQUIRE(r.is_finite());
            CHECK(r.value == v.v);
        } else {
            CHECK(r.kind == RatioValue::Kind::Infinite);
        }
    }
    // one block: the block itself
    RootedGraph b = rand_tree(5, 6);
    RootedGraph same = implement_on_path({b});
    CHECK(same.vertex_count == b.vertex_count);
    CHECK(same.root == b.root);
    // two K1 blocks at lambda = 1: ratio 1/2
    RootedGraph p2 = implement_on_path({single_vertex(3), single_vertex(3)});
    CHECK(eval_ratio_finite(p2, GaussianRational(1)) ==
          GaussianRational(make_rational(1, 2), Rational(0)));
    // degree violation: interior block with root degree Delta-1
    RootedGraph star = path_graph(3, 3);
    star.root = 1; // middle vertex, degree 2 = Delta - 1 > Delta - 2
    CHECK_THROWS_AS(implement_on_path({single_vertex(3), star, single_vertex(3)}), DegreeBound);
}

TEST_CASE("implement_copies ratio law") {
    GaussianRational lam = rand_gaussian();
    // h = K1 leaves the ratio unchanged
    RootedGraph g = rand_tree(5, 5);
    RootedGraph gk = implement_copies(g, single_vertex(5));
    CHECK(eval_ratio_finite(gk, lam) == eval_ratio_finite(g, lam));
    // g = K1 gives h itself
    RootedGraph h = rand_tree(4, 5);
    RootedGraph kh = implement_copies(single_vertex(5), h);
    CHECK(eval_ratio_finite(kh, lam) == eval_ratio_finite(h, lam));
    // P2 in P2 with Delta = 3: R(result) = R_{P2}(R_{P2}(lambda))
    RootedGraph p2 = path_graph(2, 3);
    RootedGraph glued = implement_copies(p2, p2);
    CHECK(glued.vertex_count == 4);
    GaussianRational inner = eval_ratio_finite(p2, lam);
    CHECK(eval_ratio_finite(glued, lam) == eval_ratio_finite(p2, inner));
    // degree bound: middle-rooted P3 implemented in middle-rooted P3 (2+2 > 3)
    RootedGraph p3mid = path_graph(3, 3);
    p3mid.root = 1;
    CHECK_THROWS_AS(implement_copies(p3mid, p3mid), DegreeBound);
}

TEST_CASE("merge_roots ratio law") {
    GaussianRational lam = rand_gaussian();
    if (lam.is_zero()) lam = GaussianRational(2);
    RootedGraph merged = merge_roots(single_vertex(2), single_vertex(2));
    CHECK(merged.vertex_count == 1);
    CHECK(eval_ratio_finite(merged, lam) == lam);
    // merge of two P2's is the 2-star; ratio lambda/(1+lambda)^2
    RootedGraph star2 = merge_roots(path_graph(2, 3), path_graph(2, 3));
    CHECK(star2.vertex_count == 3);
    GaussianRational den = (GaussianRational(1) + lam) * (GaussianRational(1) + lam);
    if (!den.is_zero()) CHECK(eval_ratio_finite(star2, lam) == lam / den);
    CHECK(eval_ratio_finite(star2, GaussianRational(2)) ==
          GaussianRational(make_rational(2, 9), Rational(0)));
    RootedGraph p3mid2 = path_graph(3, 2);
    p3mid2.root = 1; // degree 2; merging adds 1 more
    CHECK_THROWS_AS(merge_roots(p3mid2, path_graph(2, 2)), DegreeBound);
}

TEST_CASE("gluing laws, randomized exact identities") {
    int done = 0;
    while (done < 200) {
        std::uniform_int_distribution<int> size(1, 6);
        RootedGraph g = rand_tree(size(rng), 8), h = rand_tree(size(rng), 8);
        GaussianRational lam = rand_gaussian();
        if (lam.is_zero()) continue;
        RatioValue rh = ratio(h, lam);
        if (!rh.is_finite()) continue;
        RootedGraph gh;
        try {
            gh = implement_copies(g, h);
        } catch (const DegreeBound&) {
            continue;
        }
        RatioValue lhs = ratio(gh, lam);
        RatioValue rhs = ratio(g, rh.value);
        if (!lhs.is_finite() || !rhs.is_finite()) continue;
        CHECK(lhs.value == rhs.value);
        RootedGraph m;
        try {
            m = merge_roots(g, h);
        } catch (const DegreeBound&) {
            continue;
        }
        RatioValue rg = ratio(g, lam), rm = ratio(m, lam);
        if (!rg.is_finite() || !rm.is_finite()) continue;
        CHECK(rm.value * lam == rg.value * rh.value);
        ++done;
    }
}

TEST_CASE("rooted tree enumeration counts") {
    // unbounded-degree rooted trees up to isomorphism, sizes 1..10
    TreeEnumerator shapes(10);
    const int expected[] = {1, 1, 2, 4, 9, 20, 48, 115, 286, 719};
    for (int n = 1; n <= 10; ++n)
        CHECK(static_cast<int>(shapes.shapes_of_size(n).size()) == expected[n - 1]);
    for (int n = 1; n <= 7; ++n)
        for (int id : shapes.shapes_of_size(n)) {
            RootedGraph t = shapes.to_graph(id, 10);
            CHECK(t.vertex_count == n);
            CHECK(t.is_tree());
        }
    // AHU strings are pairwise distinct per size
    for (int n = 1; n <= 9; ++n) {
        std::set<std::string> keys;
        for (int id : shapes.shapes_of_size(n)) keys.insert(shapes.ahu(id));
        CHECK(keys.size() == shapes.shapes_of_size(n).size());
    }
}

TEST_CASE("catalog enumeration") {
    GaussianRational lam0(Rational(0), Rational(3));
    TreeCatalog c1 = enumerate_catalog(3, lam0, 1);
    REQUIRE(c1.entries.size() == 1);
    CHECK(c1.entries[0].vertices == 1);
    CHECK(c1.entries[0].ratio.is_finite());
    CHECK(c1.entries[0].ratio.value == lam0);

    TreeCatalog c2 = enumerate_catalog(3, lam0, 2);
    REQUIRE(c2.entries.size() == 2);
    CHECK(c2.entries[1].vertices == 2);
    CHECK(c2.entries[1].ratio.value == lam0 / (GaussianRational(1) + lam0));

    // at least max_vertices entries when the path ratios are pairwise distinct
    TreeCatalog c8 = enumerate_catalog(3, lam0, 8);
    CHECK(static_cast<int>(c8.entries.size()) >= 8);
    // deduplicated by exact ratio value
    std::set<std::string> seen;
    for (const auto& e : c8.entries) CHECK(seen.insert(to_string(e.ratio)).second);
    // every entry's pair matches tree_partition of the materialized tree
    for (const auto& e : c8.entries) {
        RootedGraph t = c8.tree_of(e);
        CHECK(t.root_degree() <= 1);
        PartitionPair p = tree_partition(t, lam0);
        CHECK(p.z_in == e.pair.z_in);
        CHECK(p.z_out == e.pair.z_out);
    }
}

TEST_CASE("find_minimal_zero_tree") {
    GaussianRational mhalf(make_rational(-1, 2), Rational(0));
    auto t = find_minimal_zero_tree(mhalf, 2, 10);
    REQUIRE(t.has_value());
    CHECK(t->vertex_count == 2);
    CHECK(brute_force_partition(*t, mhalf).z().is_zero());
    // lambda = 1: Z counts independent sets, positive
    CHECK(!find_minimal_zero_tree(GaussianRational(1), 3, 9).has_value());
    // lambda inside the Shearer disk: no zero tree
    GaussianRational small(make_rational(1, 10), make_rational(1, 20));
    CHECK(shearer_contains(small, 3).status == RegionStatus::Inside);
    CHECK(!find_minimal_zero_tree(small, 3, 9).has_value());
    // lambda = -1: K1 dies
    auto k1 = find_minimal_zero_tree(GaussianRational(-1, 0), 3, 5);
    REQUIRE(k1.has_value());
    CHECK(k1->vertex_count == 1);
    CHECK_THROWS_AS(find_minimal_zero_tree(GaussianRational(0), 3, 5), DomainError);
}

TEST_CASE("zero ratio witnesses satisfy the equivalence lemma") {
    for (const char* s : {"-1/2", "-1", "-1/3"}) {
        GaussianRational lam = parse_gaussian(s);
        auto t = find_minimal_zero_tree(lam, 3, 10);
        REQUIRE(t.has_value());
        PartitionPair p = tree_partition(*t, lam);
        CHECK(p.z().is_zero());
        RatioValue r = ratio_of(p);
        REQUIRE(r.is_finite());
        CHECK(r.value == GaussianRational(-1, 0));
    }
}

TEST_CASE("Shearer passivity bound on random trees") {
    int done = 0;
    while (done < 200) {
        std::uniform_int_distribution<int> dd(2, 5), size(1, 10);
        int delta = dd(rng);
        RootedGraph t = rand_tree(size(rng), delta);
        Rational R = shearer_radius(delta);
        GaussianRational lam(rand_rational(8, 9) * R / 10, rand_rational(8, 9) * R / 10);
        if (cmp(lam.norm2(), R * R) >= 0) continue;
        RatioValue r = ratio(t, lam);
        REQUIRE(r.is_finite());
        Rational bound = make_rational(1, delta - 1);
        CHECK(r.value.norm2() < bound * bound);
        if (t.root_degree() <= delta - 1) {
            Rational b2 = make_rational(1, delta);
            CHECK(r.value.norm2() < b2 * b2);
        }
        ++done;
    }
}

TEST_CASE("graph json and dot") {
    RootedGraph g = rand_tree(7, 6);
    RootedGraph back = graph_from_json(graph_to_json(g));
    CHECK(back.vertex_count == g.vertex_count);
    CHECK(back.edges == g.edges);
    CHECK(back.root == g.root);
    CHECK(back.delta == g.delta);
    CHECK_THROWS_AS(graph_from_json("{"), ParseError);
    CHECK_THROWS_AS(graph_from_json("{\"vertices\":2,\"edges\":[[0,0]],\"root\":0,\"delta\":3}"),
                    ConstructionError);
    CHECK_THROWS_AS(
        graph_from_json("{\"vertices\":3,\"edges\":[[0,1],[0,2],[1,2]],\"root\":0,\"delta\":1}"),
        DegreeBound);
    std::string dot = graph_to_dot(g);
    CHECK(dot.find("graph G {") == 0);
}
