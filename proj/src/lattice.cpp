#include "pottsflow/lattice.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <regex>
#include <utility>
#include <vector>

#include "pottsflow/error.hpp"

namespace pottsflow {

namespace {

/// Collects vertices and edges, then turns vertex rings into signed cycles.
class RingBuilder {
public:
    explicit RingBuilder(std::size_t n) : n_(n) {}

    void add_edge(VertexId tail, VertexId head) {
        lookup_[key(tail, head)] = static_cast<EdgeId>(pairs_.size());
        pairs_.emplace_back(tail, head);
    }

    /// Adds a vertex ring; consecutive vertices must be joined by an added edge.
    void add_ring(const std::vector<VertexId>& ring) {
        std::vector<SignedEdge> entries;
        entries.reserve(ring.size());
        for (std::size_t i = 0; i < ring.size(); ++i) {
            const VertexId a = ring[i];
            const VertexId b = ring[(i + 1) % ring.size()];
            const EdgeId e = lookup_.at(key(a, b));
            entries.push_back({e, static_cast<std::int8_t>(pairs_[e].first == a ? 1 : -1)});
        }
        rings_.emplace_back(std::move(entries));
    }

    Lattice finish(const GenParams& family) {
        Lattice out;
        out.graph = OrientedMultigraph::from_edge_list(n_, pairs_);
        out.gens = EvenGenSet(out.graph.edge_capacity(), std::move(rings_));
        out.gens.set_family_bound(family);
        return out;
    }

private:
    static std::pair<VertexId, VertexId> key(VertexId a, VertexId b) { return {std::min(a, b), std::max(a, b)}; }

    std::size_t n_;
    std::vector<std::pair<VertexId, VertexId>> pairs_;
    std::map<std::pair<VertexId, VertexId>, EdgeId> lookup_;
    std::vector<SignedEvenSet> rings_;
};

void require_at_least(std::size_t value, std::size_t min, const char* what) {
    if (value < min)
        throw InvalidArgument(std::string(what) + " dimensions must be at least " + std::to_string(min));
}

}  // namespace

Lattice grid_faces(std::size_t w, std::size_t h) {
    require_at_least(std::min(w, h), 2, "grid");
    auto id = [w](std::size_t x, std::size_t y) { return static_cast<VertexId>(y * w + x); };
    RingBuilder b(w * h);
    for (std::size_t y = 0; y < h; ++y)
        for (std::size_t x = 0; x + 1 < w; ++x) b.add_edge(id(x, y), id(x + 1, y));
    for (std::size_t y = 0; y + 1 < h; ++y)
        for (std::size_t x = 0; x < w; ++x) b.add_edge(id(x, y), id(x, y + 1));
    for (std::size_t y = 0; y + 1 < h; ++y)
        for (std::size_t x = 0; x + 1 < w; ++x)
            b.add_ring({id(x, y), id(x + 1, y), id(x + 1, y + 1), id(x, y + 1)});
    return b.finish({4, 1, 4, 2});
}

Lattice cube_squares(std::size_t w, std::size_t h, std::size_t depth) {
    require_at_least(std::min({w, h, depth}), 2, "grid3");
    const std::array<std::size_t, 3> dims{w, h, depth};
    auto id = [&](std::array<std::size_t, 3> p) {
        return static_cast<VertexId>((p[2] * h + p[1]) * w + p[0]);
    };
    auto for_each_point = [&](auto&& fn) {
        for (std::size_t z = 0; z < depth; ++z)
            for (std::size_t y = 0; y < h; ++y)
                for (std::size_t x = 0; x < w; ++x) fn(std::array<std::size_t, 3>{x, y, z});
    };
    RingBuilder b(w * h * depth);
    for (std::size_t axis = 0; axis < 3; ++axis) {
        for_each_point([&](std::array<std::size_t, 3> p) {
            if (p[axis] + 1 >= dims[axis]) return;
            auto q = p;
            ++q[axis];
            b.add_edge(id(p), id(q));
        });
    }
    for (auto [a, c] : {std::pair<std::size_t, std::size_t>{0, 1}, {0, 2}, {1, 2}}) {
        for_each_point([&](std::array<std::size_t, 3> p) {
            if (p[a] + 1 >= dims[a] || p[c] + 1 >= dims[c]) return;
            auto pa = p;
            ++pa[a];
            auto pac = pa;
            ++pac[c];
            auto pc = p;
            ++pc[c];
            b.add_ring({id(p), id(pa), id(pac), id(pc)});
        });
    }
    return b.finish({12, 1, 4, 4});
}

Lattice tri_faces(std::size_t w, std::size_t h) {
    require_at_least(std::min(w, h), 2, "tri");
    auto id = [w](std::size_t x, std::size_t y) { return static_cast<VertexId>(y * w + x); };
    RingBuilder b(w * h);
    for (std::size_t y = 0; y < h; ++y)
        for (std::size_t x = 0; x + 1 < w; ++x) b.add_edge(id(x, y), id(x + 1, y));
    for (std::size_t y = 0; y + 1 < h; ++y)
        for (std::size_t x = 0; x < w; ++x) b.add_edge(id(x, y), id(x, y + 1));
    for (std::size_t y = 0; y + 1 < h; ++y)
        for (std::size_t x = 0; x + 1 < w; ++x) b.add_edge(id(x, y), id(x + 1, y + 1));
    for (std::size_t y = 0; y + 1 < h; ++y) {
        for (std::size_t x = 0; x + 1 < w; ++x) {
            b.add_ring({id(x, y), id(x + 1, y), id(x + 1, y + 1)});
            b.add_ring({id(x, y), id(x + 1, y + 1), id(x, y + 1)});
        }
    }
    return b.finish({3, 1, 3, 2});
}

Lattice hex_faces(std::size_t w, std::size_t h) {
    require_at_least(std::min(w, h), 1, "hex");
    // Hexagon (i, j) is the brick spanning columns x0..x0+2 of rows j, j+1 with
    // x0 = 2i + (j mod 2); neighbouring rows are offset by one column.
    using Point = std::pair<std::size_t, std::size_t>;  // (y, x) so map order is row-major
    std::vector<std::array<Point, 6>> hexes;
    std::map<Point, VertexId> vertex;
    for (std::size_t j = 0; j < h; ++j) {
        for (std::size_t i = 0; i < w; ++i) {
            const std::size_t x0 = 2 * i + (j % 2);
            hexes.push_back({Point{j, x0}, Point{j, x0 + 1}, Point{j, x0 + 2}, Point{j + 1, x0 + 2},
                             Point{j + 1, x0 + 1}, Point{j + 1, x0}});
            for (const Point& p : hexes.back()) vertex.emplace(p, 0);
        }
    }
    VertexId next = 0;
    for (auto& [p, v] : vertex) v = next++;

    std::vector<std::pair<VertexId, VertexId>> edges;
    for (const auto& hex : hexes) {
        for (std::size_t k = 0; k < 6; ++k) {
            const VertexId a = vertex.at(hex[k]);
            const VertexId c = vertex.at(hex[(k + 1) % 6]);
            edges.emplace_back(std::min(a, c), std::max(a, c));
        }
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    RingBuilder b(vertex.size());
    for (auto [t, hd] : edges) b.add_edge(t, hd);
    for (const auto& hex : hexes) {
        std::vector<VertexId> ring;
        for (const Point& p : hex) ring.push_back(vertex.at(p));
        b.add_ring(ring);
    }
    return b.finish({6, 1, 6, 2});
}

bool is_lattice_spec(const std::string& spec) {
    static const std::regex pattern(R"((grid|tri|hex):\d+x\d+|grid3:\d+x\d+x\d+)");
    return std::regex_match(spec, pattern);
}

Lattice lattice_from_spec(const std::string& spec) {
    static const std::regex two(R"((grid|tri|hex):(\d+)x(\d+))");
    static const std::regex three(R"(grid3:(\d+)x(\d+)x(\d+))");
    std::smatch m;
    if (std::regex_match(spec, m, three))
        return cube_squares(std::stoul(m[1]), std::stoul(m[2]), std::stoul(m[3]));
    if (std::regex_match(spec, m, two)) {
        const std::size_t w = std::stoul(m[2]);
        const std::size_t h = std::stoul(m[3]);
        if (m[1] == "grid") return grid_faces(w, h);
        if (m[1] == "tri") return tri_faces(w, h);
        return hex_faces(w, h);
    }
    throw InvalidArgument("unrecognised lattice \"" + spec + "\"; expected grid:WxH, grid3:WxHxD, tri:WxH or hex:WxH");
}

}  // namespace pottsflow
