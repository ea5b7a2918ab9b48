#pragma once

// Rooted graphs of bounded degree, exact partition functions split at the
// root (Z^in, Z^out), occupation ratios, and the gluing calculus (blocks on
// a path, copy implementation, root merging).

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hardcore/exact.hpp"
#include "hardcore/moebius.hpp"

namespace hardcore {

struct RootedGraph {
    int vertex_count = 0;
    std::vector<std::pair<int, int>> edges; // normalized u < v, sorted
    int root = 0;
    int delta = 2; // max-degree bound Delta

    void validate() const; // throws on loops, duplicate edges, degree > delta
    std::vector<int> degrees() const;
    int root_degree() const;
    bool is_tree() const; // connected and |E| = |V|-1
};

RootedGraph single_vertex(int delta);
RootedGraph path_graph(int n, int delta); // rooted at endpoint n-1

// JSON wire format: {"vertices":N,"edges":[[u,v],...],"root":r,"delta":D}.
std::string graph_to_json(const RootedGraph& g);
RootedGraph graph_from_json(const std::string& json);
std::string graph_to_dot(const RootedGraph& g);

struct PartitionPair {
    GaussianRational z_in, z_out;
    GaussianRational z() const { return z_in + z_out; }
};

struct RatioValue {
    enum class Kind { Finite, Infinite, Indeterminate } kind;
    GaussianRational value; // valid when Finite

    static RatioValue finite(GaussianRational v) { return {Kind::Finite, std::move(v)}; }
    static RatioValue inf() { return {Kind::Infinite, {}}; }
    static RatioValue indeterminate() { return {Kind::Indeterminate, {}}; }
    bool is_finite() const { return kind == Kind::Finite; }
};

std::string to_string(const RatioValue& r);
RatioValue ratio_of(const PartitionPair& p);

// Exact sums over all independent sets, split by root membership.
// Enumeration guard: vertex_count <= 24.
PartitionPair brute_force_partition(const RootedGraph& g, const GaussianRational& lambda);

// Independent-set counts by (|I|, root membership); lambda-independent part
// of the brute-force oracle.  counts_in[k] = #independent sets of size k
// containing the root.
struct IndependentSetCounts {
    std::vector<std::uint64_t> in_counts, out_counts;
};
IndependentSetCounts independent_set_counts(const RootedGraph& g);
PartitionPair evaluate_counts(const IndependentSetCounts& c, const GaussianRational& lambda);

// Tree recursion on partition pairs: z_in = lambda * prod z_out(child),
// z_out = prod (z_in + z_out)(child).  Exactly equals the brute force.
PartitionPair tree_partition(const RootedGraph& g, const GaussianRational& lambda);

// Projective ratio Z^in/Z^out; Indeterminate iff both vanish.
RatioValue ratio(const RootedGraph& g, const GaussianRational& lambda);

// Implement blocks along a path P_n (root of block i identified with vertex i),
// rooted at the last block's root.  Degree bookkeeping: interior roots need
// deg <= Delta-2, end roots deg <= Delta-1.
RootedGraph implement_on_path(const std::vector<RootedGraph>& blocks);

// Implement a copy of (h, v) at every vertex of g; ratio composition law
// R_{g~}(lambda) = R_g(R_h(lambda)).
RootedGraph implement_copies(const RootedGraph& g, const RootedGraph& h);

// Identify the two roots.
RootedGraph merge_roots(const RootedGraph& g1, const RootedGraph& g2);

} // namespace hardcore
