#include "pottsflow/graph.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "pottsflow/error.hpp"

namespace pottsflow {

namespace {

class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

    std::size_t find(std::size_t v) {
        while (parent_[v] != v) {
            parent_[v] = parent_[parent_[v]];
            v = parent_[v];
        }
        return v;
    }

    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent_[std::max(a, b)] = std::min(a, b);
    }

private:
    std::vector<std::size_t> parent_;
};

}  // namespace

OrientedMultigraph OrientedMultigraph::from_edge_list(
    std::size_t n, const std::vector<std::pair<VertexId, VertexId>>& pairs) {
    OrientedMultigraph g;
    g.vertex_live_.assign(n, true);
    g.live_vertices_ = n;
    g.edges_.reserve(pairs.size());
    for (const auto& [tail, head] : pairs) {
        if (tail >= n || head >= n) {
            std::ostringstream msg;
            msg << "edge (" << tail << ", " << head << ") references a vertex >= " << n;
            throw InvalidArgument(msg.str());
        }
        g.edges_.push_back({tail, head});
    }
    g.edge_live_.assign(g.edges_.size(), true);
    g.live_edges_ = g.edges_.size();
    g.rebuild_incidence();
    return g;
}

void OrientedMultigraph::rebuild_incidence() {
    incidence_.assign(vertex_live_.size(), {});
    for (EdgeId e = 0; e < edges_.size(); ++e) {
        if (!edge_live_[e]) continue;
        const Edge& ed = edges_[e];
        incidence_[ed.tail].push_back(e);
        if (!ed.is_loop()) incidence_[ed.head].push_back(e);
    }
}

std::vector<EdgeId> OrientedMultigraph::live_edges() const {
    std::vector<EdgeId> out;
    out.reserve(live_edges_);
    for (EdgeId e = 0; e < edges_.size(); ++e)
        if (edge_live_[e]) out.push_back(e);
    return out;
}

std::vector<VertexId> OrientedMultigraph::live_vertices() const {
    std::vector<VertexId> out;
    out.reserve(live_vertices_);
    for (VertexId v = 0; v < vertex_live_.size(); ++v)
        if (vertex_live_[v]) out.push_back(v);
    return out;
}

OrientedMultigraph OrientedMultigraph::contract(EdgeId e) const {
    if (!edge_live(e)) throw InvalidArgument("contract: edge " + std::to_string(e) + " is not live");
    if (is_loop(e)) throw InvalidArgument("contract: edge " + std::to_string(e) + " is a loop");
    OrientedMultigraph g = *this;
    const VertexId keep = edges_[e].tail;
    const VertexId gone = edges_[e].head;
    g.edge_live_[e] = false;
    --g.live_edges_;
    for (EdgeId f = 0; f < g.edges_.size(); ++f) {
        if (!g.edge_live_[f]) continue;
        if (g.edges_[f].tail == gone) g.edges_[f].tail = keep;
        if (g.edges_[f].head == gone) g.edges_[f].head = keep;
    }
    g.vertex_live_[gone] = false;
    --g.live_vertices_;
    g.rebuild_incidence();
    return g;
}

OrientedMultigraph OrientedMultigraph::delete_edge(EdgeId e) const {
    if (!edge_live(e)) throw InvalidArgument("delete: edge " + std::to_string(e) + " is not live");
    OrientedMultigraph g = *this;
    g.edge_live_[e] = false;
    --g.live_edges_;
    g.rebuild_incidence();
    return g;
}

EdgeSubset EdgeSubset::all(const OrientedMultigraph& g) {
    EdgeSubset s(g.edge_capacity());
    for (EdgeId e : g.live_edges()) s.insert(e);
    return s;
}

EdgeSubset EdgeSubset::of(const OrientedMultigraph& g, const std::vector<EdgeId>& ids) {
    EdgeSubset s(g.edge_capacity());
    for (EdgeId e : ids) {
        if (!g.edge_live(e)) throw InvalidArgument("edge subset: edge " + std::to_string(e) + " is not live");
        s.insert(e);
    }
    return s;
}

void EdgeSubset::insert(EdgeId e) {
    if (member_.at(e) == 0) {
        member_[e] = 1;
        ++size_;
    }
}

void EdgeSubset::erase(EdgeId e) {
    if (member_.at(e) != 0) {
        member_[e] = 0;
        --size_;
    }
}

std::vector<EdgeId> EdgeSubset::ids() const {
    std::vector<EdgeId> out;
    out.reserve(size_);
    for (EdgeId e = 0; e < member_.size(); ++e)
        if (member_[e]) out.push_back(e);
    return out;
}

std::size_t components(const OrientedMultigraph& g) { return components(g, EdgeSubset::all(g)); }

std::size_t components(const OrientedMultigraph& g, const EdgeSubset& f) {
    DisjointSets sets(g.vertex_capacity());
    for (EdgeId e = 0; e < g.edge_capacity(); ++e) {
        if (!g.edge_live(e) || !f.contains(e)) continue;
        sets.unite(g.edge(e).tail, g.edge(e).head);
    }
    std::size_t count = 0;
    for (VertexId v = 0; v < g.vertex_capacity(); ++v)
        if (g.vertex_live(v) && sets.find(v) == v) ++count;
    return count;
}

std::vector<std::uint32_t> component_labels(const OrientedMultigraph& g, const EdgeSubset& f) {
    DisjointSets sets(g.vertex_capacity());
    for (EdgeId e = 0; e < g.edge_capacity(); ++e) {
        if (!g.edge_live(e) || !f.contains(e)) continue;
        sets.unite(g.edge(e).tail, g.edge(e).head);
    }
    std::vector<std::uint32_t> label(g.vertex_capacity(), kNoLabel);
    std::uint32_t next = 0;
    for (VertexId v = 0; v < g.vertex_capacity(); ++v) {
        if (!g.vertex_live(v)) continue;
        const std::size_t root = sets.find(v);
        // The root is the smallest vertex of its set, so it is labelled first.
        if (root == v) label[v] = next++;
        else label[v] = label[root];
    }
    return label;
}

SpanningForest spanning_forest(const OrientedMultigraph& g) {
    return spanning_forest(g, EdgeSubset::all(g));
}

SpanningForest spanning_forest(const OrientedMultigraph& g, const EdgeSubset& f) {
    const std::size_t n = g.vertex_capacity();
    SpanningForest forest;
    forest.tree_edge.assign(g.edge_capacity(), false);
    forest.parent_edge.assign(n, SpanningForest::kNoEdge);
    forest.parent.assign(n, 0);
    forest.depth.assign(n, 0);
    forest.preorder.reserve(g.vertex_count());

    std::vector<bool> seen(n, false);
    // Explicit stack of (vertex, next incidence position).
    std::vector<std::pair<VertexId, std::size_t>> stack;
    for (VertexId root = 0; root < n; ++root) {
        if (!g.vertex_live(root) || seen[root]) continue;
        ++forest.component_count;
        seen[root] = true;
        forest.parent[root] = root;
        forest.preorder.push_back(root);
        stack.emplace_back(root, 0);
        while (!stack.empty()) {
            auto& [v, pos] = stack.back();
            const auto& inc = g.incident(v);
            bool descended = false;
            while (pos < inc.size()) {
                const EdgeId e = inc[pos++];
                if (!f.contains(e)) continue;
                const Edge& ed = g.edge(e);
                const VertexId w = ed.tail == v ? ed.head : ed.tail;
                if (seen[w]) continue;
                seen[w] = true;
                forest.tree_edge[e] = true;
                forest.parent_edge[w] = e;
                forest.parent[w] = v;
                forest.depth[w] = forest.depth[v] + 1;
                forest.preorder.push_back(w);
                stack.emplace_back(w, 0);
                descended = true;
                break;
            }
            if (!descended) stack.pop_back();
        }
    }
    return forest;
}

std::size_t cycle_rank(const OrientedMultigraph& g) {
    return g.edge_count() + components(g) - g.vertex_count();
}

OrientedMultigraph read_graph(std::istream& in) {
    std::size_t n = 0;
    std::size_t m = 0;
    if (!(in >> n >> m)) throw IoError("graph: expected header \"n m\"");
    std::vector<std::pair<VertexId, VertexId>> pairs;
    pairs.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        long long t = 0;
        long long h = 0;
        if (!(in >> t >> h)) throw IoError("graph: expected " + std::to_string(m) + " edge lines");
        if (t < 0 || h < 0) throw InvalidArgument("graph: negative vertex id");
        pairs.emplace_back(static_cast<VertexId>(t), static_cast<VertexId>(h));
    }
    return OrientedMultigraph::from_edge_list(n, pairs);
}

void write_graph(std::ostream& out, const OrientedMultigraph& g) {
    out << g.vertex_capacity() << ' ' << g.edge_count() << '\n';
    for (EdgeId e : g.live_edges()) out << g.edge(e).tail << ' ' << g.edge(e).head << '\n';
}

}  // namespace pottsflow
