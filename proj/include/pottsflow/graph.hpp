#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace pottsflow {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;

struct Edge {
    VertexId tail;
    VertexId head;

    bool is_loop() const noexcept { return tail == head; }
};

/// Oriented multigraph with loops and parallel edges.
///
/// Vertex and edge ids are stable: deleting or contracting an edge tombstones it
/// (and, for contraction, the absorbed endpoint) without reindexing anything else.
/// Values are immutable; delete_edge and contract return new graphs.
class OrientedMultigraph {
public:
    OrientedMultigraph() = default;

    /// Builds a graph on n vertices with edges oriented tail->head in the given
    /// order. Throws InvalidArgument on an out-of-range vertex id.
    static OrientedMultigraph from_edge_list(std::size_t n,
                                             const std::vector<std::pair<VertexId, VertexId>>& pairs);

    std::size_t vertex_capacity() const noexcept { return vertex_live_.size(); }
    std::size_t edge_capacity() const noexcept { return edges_.size(); }
    std::size_t vertex_count() const noexcept { return live_vertices_; }
    std::size_t edge_count() const noexcept { return live_edges_; }

    bool vertex_live(VertexId v) const { return v < vertex_live_.size() && vertex_live_[v]; }
    bool edge_live(EdgeId e) const { return e < edge_live_.size() && edge_live_[e]; }
    const Edge& edge(EdgeId e) const { return edges_.at(e); }
    bool is_loop(EdgeId e) const { return edges_.at(e).is_loop(); }

    /// Live edge ids incident to v in increasing id order; a loop appears once.
    const std::vector<EdgeId>& incident(VertexId v) const { return incidence_.at(v); }

    std::vector<EdgeId> live_edges() const;
    std::vector<VertexId> live_vertices() const;

    /// G/e: the head of e is merged into its tail. Throws InvalidArgument when e is
    /// dead or a loop.
    OrientedMultigraph contract(EdgeId e) const;

    /// G minus e. Throws InvalidArgument when e is dead.
    OrientedMultigraph delete_edge(EdgeId e) const;

private:
    void rebuild_incidence();

    std::vector<Edge> edges_;
    std::vector<bool> edge_live_;
    std::vector<bool> vertex_live_;
    std::vector<std::vector<EdgeId>> incidence_;
    std::size_t live_vertices_ = 0;
    std::size_t live_edges_ = 0;
};

/// Membership over the edge ids of one graph.
class EdgeSubset {
public:
    EdgeSubset() = default;
    explicit EdgeSubset(std::size_t edge_capacity) : member_(edge_capacity, 0) {}

    static EdgeSubset none(const OrientedMultigraph& g) { return EdgeSubset(g.edge_capacity()); }
    static EdgeSubset all(const OrientedMultigraph& g);
    /// Throws InvalidArgument when any id is dead in g.
    static EdgeSubset of(const OrientedMultigraph& g, const std::vector<EdgeId>& ids);

    bool contains(EdgeId e) const { return e < member_.size() && member_[e] != 0; }
    void insert(EdgeId e);
    void erase(EdgeId e);
    std::size_t size() const noexcept { return size_; }
    std::size_t capacity() const noexcept { return member_.size(); }
    std::vector<EdgeId> ids() const;

    bool operator==(const EdgeSubset&) const = default;

private:
    std::vector<std::uint8_t> member_;
    std::size_t size_ = 0;
};

/// Number of connected components c(G) over live vertices and live edges.
std::size_t components(const OrientedMultigraph& g);
/// c(F): components of (V, F), every live vertex counted.
std::size_t components(const OrientedMultigraph& g, const EdgeSubset& f);

/// Component label per vertex over (V, F): labels are 0..c(F)-1, numbered in
/// order of each component's smallest vertex id. Dead vertices get kNoLabel.
std::vector<std::uint32_t> component_labels(const OrientedMultigraph& g, const EdgeSubset& f);
inline constexpr std::uint32_t kNoLabel = static_cast<std::uint32_t>(-1);

/// Spanning forest of (V, F) by DFS that visits vertices in id order and scans
/// incident edges in id order.
struct SpanningForest {
    std::vector<bool> tree_edge;          // indexed by edge id
    std::vector<EdgeId> parent_edge;      // per vertex; kNoEdge at roots and dead vertices
    std::vector<VertexId> parent;         // per vertex
    std::vector<std::uint32_t> depth;     // per vertex
    std::vector<VertexId> preorder;       // live vertices in discovery order
    std::size_t component_count = 0;

    static constexpr EdgeId kNoEdge = static_cast<EdgeId>(-1);
};

SpanningForest spanning_forest(const OrientedMultigraph& g);
SpanningForest spanning_forest(const OrientedMultigraph& g, const EdgeSubset& f);

/// |E| - |V| + c(G): dimension of the flow space.
std::size_t cycle_rank(const OrientedMultigraph& g);

/// Text format: "n m" then m lines "tail head", 0-based.
OrientedMultigraph read_graph(std::istream& in);
void write_graph(std::ostream& out, const OrientedMultigraph& g);

}  // namespace pottsflow
