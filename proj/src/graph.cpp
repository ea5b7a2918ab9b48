#include "hardcore/graph.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "json.hpp"

namespace hardcore {

void RootedGraph::validate() const {
    if (vertex_count <= 0) throw ConstructionError("graph needs at least one vertex");
    if (root < 0 || root >= vertex_count) throw ConstructionError("root out of range");
    if (delta < 0) throw ConstructionError("negative degree bound");
    std::vector<std::pair<int, int>> sorted = edges;
    for (auto& [u, v] : sorted) {
        if (u == v) throw ConstructionError("self-loop");
        if (u < 0 || v < 0 || u >= vertex_count || v >= vertex_count)
            throw ConstructionError("edge endpoint out of range");
        if (u > v) std::swap(u, v);
    }
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw ConstructionError("duplicate edge");
    for (int d : degrees())
        if (d > delta) throw DegreeBound("vertex degree exceeds Delta");
}

std::vector<int> RootedGraph::degrees() const {
    std::vector<int> deg(vertex_count, 0);
    for (auto& [u, v] : edges) { ++deg[u]; ++deg[v]; }
    return deg;
}

int RootedGraph::root_degree() const { return degrees()[root]; }

bool RootedGraph::is_tree() const {
    if (static_cast<int>(edges.size()) != vertex_count - 1) return false;
    std::vector<std::vector<int>> adj(vertex_count);
    for (auto& [u, v] : edges) { adj[u].push_back(v); adj[v].push_back(u); }
    std::vector<char> seen(vertex_count, 0);
    std::vector<int> stack{root};
    seen[root] = 1;
    int visited = 0;
    while (!stack.empty()) {
        int x = stack.back();
        stack.pop_back();
        ++visited;
        for (int y : adj[x])
            if (!seen[y]) { seen[y] = 1; stack.push_back(y); }
    }
    return visited == vertex_count;
}

RootedGraph single_vertex(int delta) { return {1, {}, 0, delta}; }

RootedGraph path_graph(int n, int delta) {
    RootedGraph g;
    g.vertex_count = n;
    g.delta = delta;
    for (int i = 0; i + 1 < n; ++i) g.edges.push_back({i, i + 1});
    g.root = n - 1;
    g.validate();
    return g;
}

std::string graph_to_json(const RootedGraph& g) {
    nlohmann::json j;
    j["vertices"] = g.vertex_count;
    j["edges"] = nlohmann::json::array();
    for (auto& [u, v] : g.edges) j["edges"].push_back({u, v});
    j["root"] = g.root;
    j["delta"] = g.delta;
    return j.dump();
}

RootedGraph graph_from_json(const std::string& json) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad graph JSON: ") + e.what());
    }
    RootedGraph g;
    try {
        g.vertex_count = j.at("vertices").get<int>();
        for (auto& e : j.at("edges")) {
            if (!e.is_array() || e.size() != 2) throw ParseError("edge must be a pair");
            g.edges.push_back({e[0].get<int>(), e[1].get<int>()});
        }
        g.root = j.at("root").get<int>();
        g.delta = j.at("delta").get<int>();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad graph JSON: ") + e.what());
    }
    for (auto& [u, v] : g.edges)
        if (u > v) std::swap(u, v);
    std::sort(g.edges.begin(), g.edges.end());
    g.validate();
    return g;
}

std::string graph_to_dot(const RootedGraph& g) {
    std::ostringstream out;
    out << "graph G {\n";
    out << "  " << g.root << " [shape=doublecircle];\n";
    for (int v = 0; v < g.vertex_count; ++v)
        if (v != g.root) out << "  " << v << ";\n";
    for (auto& [u, v] : g.edges) out << "  " << u << " -- " << v << ";\n";
    out << "}\n";
    return out.str();
}

std::string to_string(const RatioValue& r) {
    switch (r.kind) {
        case RatioValue::Kind::Finite: return to_string(r.value);
        case RatioValue::Kind::Infinite: return "inf";
        case RatioValue::Kind::Indeterminate: return "indeterminate";
    }
    return "?";
}

RatioValue ratio_of(const PartitionPair& p) {
    if (p.z_out.is_zero() && p.z_in.is_zero()) return RatioValue::indeterminate();
    if (p.z_out.is_zero()) return RatioValue::inf();
    return RatioValue::finite(p.z_in / p.z_out);
}

IndependentSetCounts independent_set_counts(const RootedGraph& g) {
    g.validate();
    const int n = g.vertex_count;
    if (n > 24) throw OracleLimit("brute force limited to 24 vertices");
    std::vector<std::uint32_t> adj(n, 0);
    for (auto& [u, v] : g.edges) {
        adj[u] |= 1u << v;
        adj[v] |= 1u << u;
    }
    const std::uint32_t total = 1u << n;
    std::vector<char> indep(total, 0);
    IndependentSetCounts counts;
    counts.in_counts.assign(n + 1, 0);
    counts.out_counts.assign(n + 1, 0);
    indep[0] = 1;
    counts.out_counts[0] = 1;
    for (std::uint32_t s = 1; s < total; ++s) {
        int low = __builtin_ctz(s);
        std::uint32_t rest = s & (s - 1);
        indep[s] = indep[rest] && (adj[low] & s) == 0;
        if (indep[s]) {
            int size = __builtin_popcount(s);
            if (s >> g.root & 1) ++counts.in_counts[size];
            else ++counts.out_counts[size];
        }
    }
    return counts;
}

PartitionPair evaluate_counts(const IndependentSetCounts& c, const GaussianRational& lambda) {
    PartitionPair out;
    out.z_in = GaussianRational(0);
    out.z_out = GaussianRational(0);
    GaussianRational pw(1);
    for (size_t k = 0; k < c.in_counts.size(); ++k) {
        if (c.in_counts[k]) out.z_in = out.z_in + GaussianRational(static_cast<long>(c.in_counts[k])) * pw;
        if (c.out_counts[k]) out.z_out = out.z_out + GaussianRational(static_cast<long>(c.out_counts[k])) * pw;
        pw = pw * lambda;
    }
    return out;
}

PartitionPair brute_force_partition(const RootedGraph& g, const GaussianRational& lambda) {
    return evaluate_counts(independent_set_counts(g), lambda);
}

PartitionPair tree_partition(const RootedGraph& g, const GaussianRational& lambda) {
    g.validate();
    if (!g.is_tree()) throw NotATree("tree_partition requires a tree");
    const int n = g.vertex_count;
    std::vector<std::vector<int>> adj(n);
    for (auto& [u, v] : g.edges) { adj[u].push_back(v); adj[v].push_back(u); }
    // iterative post-order from the root
    std::vector<int> order, parent(n, -1), stack{g.root};
    parent[g.root] = g.root;
    while (!stack.empty()) {
        int x = stack.back();
        stack.pop_back();
        order.push_back(x);
        for (int y : adj[x])
            if (parent[y] < 0) { parent[y] = x; stack.push_back(y); }
    }
    std::vector<PartitionPair> val(n);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        int x = *it;
        GaussianRational in = lambda, out(1);
        for (int y : adj[x]) {
            if (y == parent[x] && x != g.root) continue;
            if (parent[y] != x) continue;
            in = in * val[y].z_out;
            out = out * (val[y].z_in + val[y].z_out);
        }
        val[x] = {in, out};
    }
    return val[g.root];
}

RatioValue ratio(const RootedGraph& g, const GaussianRational& lambda) {
    PartitionPair p = g.is_tree() ? tree_partition(g, lambda) : brute_force_partition(g, lambda);
    return ratio_of(p);
}

namespace {

// Append `block` shifted by `offset` into out, returning the new root index.
int append_block(RootedGraph& out, const RootedGraph& block, int offset) {
    for (auto& [u, v] : block.edges) out.edges.push_back({u + offset, v + offset});
    return block.root + offset;
}

} // namespace

RootedGraph implement_on_path(const std::vector<RootedGraph>& blocks) {
    if (blocks.empty()) throw ConstructionError("implement_on_path needs at least one block");
    const int n = static_cast<int>(blocks.size());
    const int delta = blocks.front().delta;
    for (const auto& b : blocks) {
        b.validate();
        if (b.delta != delta) throw ConstructionError("blocks disagree on Delta");
    }
    for (int i = 0; i < n; ++i) {
        int extra = (n == 1) ? 0 : ((i == 0 || i == n - 1) ? 1 : 2);
        if (blocks[i].root_degree() + extra > delta)
            throw DegreeBound("block root degree breaks the path gluing bound");
    }
    RootedGraph out;
    out.delta = delta;
    out.vertex_count = 0;
    std::vector<int> roots;
    for (const auto& b : blocks) {
        roots.push_back(append_block(out, b, out.vertex_count));
        out.vertex_count += b.vertex_count;
    }
    for (int i = 0; i + 1 < n; ++i) {
        int u = roots[i], v = roots[i + 1];
        out.edges.push_back({std::min(u, v), std::max(u, v)});
    }
    out.root = roots.back();
    std::sort(out.edges.begin(), out.edges.end());
    out.validate();
    return out;
}

RootedGraph implement_copies(const RootedGraph& g, const RootedGraph& h) {
    g.validate();
    h.validate();
    if (g.delta != h.delta) throw ConstructionError("graphs disagree on Delta");
    auto gdeg = g.degrees();
    int hroot_deg = h.root_degree();
    for (int v = 0; v < g.vertex_count; ++v)
        if (gdeg[v] + hroot_deg > g.delta)
            throw DegreeBound("identified vertex degree breaks Delta");
    RootedGraph out;
    out.delta = g.delta;
    out.vertex_count = g.vertex_count * h.vertex_count;
    auto root_of_copy = [&](int i) { return i * h.vertex_count + h.root; };
    for (int i = 0; i < g.vertex_count; ++i)
        append_block(out, h, i * h.vertex_count);
    for (auto& [u, v] : g.edges) {
        int a = root_of_copy(u), b = root_of_copy(v);
        out.edges.push_back({std::min(a, b), std::max(a, b)});
    }
    out.root = root_of_copy(g.root);
    std::sort(out.edges.begin(), out.edges.end());
    out.validate();
    return out;
}

RootedGraph merge_roots(const RootedGraph& g1, const RootedGraph& g2) {
    g1.validate();
    g2.validate();
    if (g1.delta != g2.delta) throw ConstructionError("graphs disagree on Delta");
    if (g1.root_degree() + g2.root_degree() > g1.delta)
        throw DegreeBound("merged root degree breaks Delta");
    // g2's root is mapped onto g1's root; other g2 vertices are appended.
    RootedGraph out;
    out.delta = g1.delta;
    out.vertex_count = g1.vertex_count + g2.vertex_count - 1;
    out.edges = g1.edges;
    auto map2 = [&](int v) {
        if (v == g2.root) return g1.root;
        return g1.vertex_count + (v < g2.root ? v : v - 1);
    };
    for (auto& [u, v] : g2.edges) {
        int a = map2(u), b = map2(v);
        out.edges.push_back({std::min(a, b), std::max(a, b)});
    }
    out.root = g1.root;
    std::sort(out.edges.begin(), out.edges.end());
    out.validate();
    return out;
}

} // namespace hardcore
