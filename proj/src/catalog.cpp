#include "hardcore/catalog.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

namespace hardcore {

TreeEnumerator::TreeEnumerator(int child_limit) : child_limit_(child_limit) {
    children_.push_back({});
    size_.push_back(1);
    ahu_.push_back("()");
    by_size_.assign(2, {});
    by_size_[1] = {0};
}

void TreeEnumerator::extend_to(int size) {
    while (static_cast<int>(by_size_.size()) <= size) {
        int s = static_cast<int>(by_size_.size());
        std::vector<int> found;
        // children multisets: id-non-increasing, total size s-1, count <= limit
        std::vector<int> current;
        auto emit = [&]() {
            children_.push_back(current);
            size_.push_back(s);
            found.push_back(static_cast<int>(children_.size()) - 1);
        };
        // recursive multiset generation
        auto rec = [&](auto&& self, int remaining, int max_id) -> void {
            if (remaining == 0) {
                emit();
                return;
            }
            if (static_cast<int>(current.size()) >= child_limit_) return;
            for (int c = max_id; c >= 0; --c) {
                if (size_[c] > remaining) continue;
                current.push_back(c);
                self(self, remaining - size_[c], c);
                current.pop_back();
            }
        };
        if (s >= 2) {
            // candidate children have size <= s-1, i.e. id < first id of size s
            int max_id = static_cast<int>(children_.size()) - 1;
            rec(rec, s - 1, max_id);
        }
        by_size_.push_back(found);
    }
}

const std::vector<int>& TreeEnumerator::shapes_of_size(int size) {
    if (size < 1) throw DomainError("tree size must be positive");
    extend_to(size);
    return by_size_[size];
}

const std::string& TreeEnumerator::ahu(int id) {
    while (ahu_.size() < children_.size()) {
        size_t i = ahu_.size();
        std::string s = "(";
        for (int c : children_[i]) s += ahu_[c];
        s += ")";
        ahu_.push_back(std::move(s));
    }
    return ahu_[id];
}

RootedGraph TreeEnumerator::to_graph(int id, int delta) const {
    RootedGraph g;
    g.delta = delta;
    g.root = 0;
    g.vertex_count = 0;
    auto rec = [&](auto&& self, int shape) -> int {
        int me = g.vertex_count++;
        for (int c : children_[shape]) {
            int child = self(self, c);
            g.edges.push_back({me, child});
        }
        return me;
    };
    rec(rec, id);
    for (auto& [u, v] : g.edges)
        if (u > v) std::swap(u, v);
    std::sort(g.edges.begin(), g.edges.end());
    g.validate();
    return g;
}

RootedGraph TreeEnumerator::to_graph_with_stem(int id, int delta) const {
    RootedGraph g = to_graph(id, delta);
    // relabel: new root becomes vertex 0, shape shifts by one
    for (auto& [u, v] : g.edges) { ++u; ++v; }
    g.edges.push_back({0, 1});
    ++g.vertex_count;
    g.root = 0;
    std::sort(g.edges.begin(), g.edges.end());
    g.validate();
    return g;
}

const PartitionPair& TreeEnumerator::pair_at(int id, const GaussianRational& lambda) {
    if (pair_lambda_ && !(*pair_lambda_ == lambda))
        throw DomainError("pair cache bound to a different lambda");
    pair_lambda_ = lambda;
    while (pair_cache_.size() < children_.size()) {
        size_t i = pair_cache_.size();
        GaussianRational in = lambda, out(1);
        for (int c : children_[i]) {
            in = in * pair_cache_[c].z_out;
            out = out * (pair_cache_[c].z_in + pair_cache_[c].z_out);
        }
        pair_cache_.push_back({in, out});
    }
    return pair_cache_[id];
}

RootedGraph TreeCatalog::tree_of(const CatalogEntry& e) const {
    if (e.shape < 0) return single_vertex(delta);
    return shapes->to_graph_with_stem(e.shape, delta);
}

TreeCatalog enumerate_catalog(int delta, const GaussianRational& lambda0, int max_vertices) {
    if (delta < 3) throw DomainError("catalog enumeration needs Delta >= 3");
    if (max_vertices < 1) throw DomainError("max_vertices must be positive");
    TreeCatalog cat;
    cat.lambda0 = lambda0;
    cat.delta = delta;
    cat.max_vertices = max_vertices;
    cat.shapes = std::make_shared<TreeEnumerator>(delta - 1);
    std::unordered_set<std::string> seen;

    auto push = [&](CatalogEntry e) {
        std::string key = to_string(e.ratio);
        if (e.ratio.kind == RatioValue::Kind::Indeterminate) return;
        if (!seen.insert(key).second) return;
        cat.entries.push_back(std::move(e));
    };

    CatalogEntry k1;
    k1.shape = -1;
    k1.vertices = 1;
    k1.pair = {lambda0, GaussianRational(1)};
    k1.ratio = ratio_of(k1.pair);
    push(std::move(k1));

    for (int s = 1; s + 1 <= max_vertices; ++s) {
        for (int id : cat.shapes->shapes_of_size(s)) {
            const PartitionPair& sub = cat.shapes->pair_at(id, lambda0);
            CatalogEntry e;
            e.shape = id;
            e.vertices = s + 1;
            e.pair = {lambda0 * sub.z_out, sub.z_in + sub.z_out};
            e.ratio = ratio_of(e.pair);
            push(std::move(e));
        }
    }
    return cat;
}

std::optional<RootedGraph> find_minimal_zero_tree(const GaussianRational& lambda, int delta,
                                                  int max_vertices) {
    if (lambda.is_zero()) throw DomainError("zero-tree search needs lambda != 0");
    if (delta < 2) throw DomainError("Delta must be at least 2");
    TreeEnumerator shapes(delta - 1);
    if (lambda == GaussianRational(-1, 0)) return single_vertex(delta); // Z_{K1} = 1 + lambda
    for (int s = 1; s + 1 <= max_vertices; ++s) {
        for (int id : shapes.shapes_of_size(s)) {
            const PartitionPair& sub = shapes.pair_at(id, lambda);
            GaussianRational z_in = lambda * sub.z_out;
            GaussianRational z_out = sub.z_in + sub.z_out;
            if ((z_in + z_out).is_zero() && !z_out.is_zero())
                return shapes.to_graph_with_stem(id, delta);
        }
    }
    return std::nullopt;
}

} // namespace hardcore
