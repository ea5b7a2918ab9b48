#pragma once

// Canonical enumeration of rooted trees up to isomorphism (AHU-style shape
// table with memoized partition pairs) and the ratio catalog over G_Delta^1.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hardcore/graph.hpp"

namespace hardcore {

// Shape table for rooted trees where every node has at most
// `child_limit` children.  Shape 0 is the single vertex; children lists are
// id-non-increasing, which makes each isomorphism class appear exactly once.
class TreeEnumerator {
  public:
    explicit TreeEnumerator(int child_limit);

    // All shape ids with exactly `size` vertices (generation order, stable).
    const std::vector<int>& shapes_of_size(int size);

    int shape_size(int id) const { return size_[id]; }
    const std::vector<int>& shape_children(int id) const { return children_[id]; }
    const std::string& ahu(int id);

    // The shape as a standalone rooted tree (DFS vertex numbering, root 0).
    RootedGraph to_graph(int id, int delta) const;
    // Stem variant: fresh root attached to the shape's root (root degree 1).
    RootedGraph to_graph_with_stem(int id, int delta) const;

    // Memoized exact partition pair of the shape at a fixed lambda; the
    // cache is tied to the lambda of the first call.
    const PartitionPair& pair_at(int id, const GaussianRational& lambda);

    int child_limit() const { return child_limit_; }

  private:
    void extend_to(int size);

    int child_limit_;
    std::vector<std::vector<int>> children_;
    std::vector<int> size_;
    std::vector<std::string> ahu_;
    std::vector<std::vector<int>> by_size_; // by_size_[s] = ids of size s
    std::vector<PartitionPair> pair_cache_;
    std::optional<GaussianRational> pair_lambda_;
};

// One catalog entry: a rooted tree in G_Delta^1 with its exact ratio and
// partition pair at lambda0.  shape == -1 encodes K1; otherwise the tree is
// a fresh root with the shape attached underneath.
struct CatalogEntry {
    int shape = -1;
    int vertices = 1;
    RatioValue ratio;
    PartitionPair pair;
};

struct TreeCatalog {
    GaussianRational lambda0;
    int delta = 3;
    int max_vertices = 1;
    std::shared_ptr<TreeEnumerator> shapes;
    std::vector<CatalogEntry> entries; // deduplicated by ratio value, canonical order

    RootedGraph tree_of(const CatalogEntry& e) const;
};

// All rooted trees in G_Delta^1 with at most max_vertices vertices, exact
// ratios at lambda0, deduplicated by ratio value, deterministic order
// (vertex count, then canonical shape order).
TreeCatalog enumerate_catalog(int delta, const GaussianRational& lambda0, int max_vertices);

// Smallest tree (vertex count, then canonical order) in G_Delta^1 with
// Z_T(lambda) = 0 witnessed at a leaf root with ratio -1.
std::optional<RootedGraph> find_minimal_zero_tree(const GaussianRational& lambda, int delta,
                                                  int max_vertices);

} // namespace hardcore
