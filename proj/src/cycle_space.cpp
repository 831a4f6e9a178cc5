#include "pottsflow/cycle_space.hpp"

#include <algorithm>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <string>

#include "pottsflow/error.hpp"

namespace pottsflow {

SignedEvenSet::SignedEvenSet(std::vector<SignedEdge> entries) : entries_(std::move(entries)) {
    std::sort(entries_.begin(), entries_.end(),
              [](const SignedEdge& a, const SignedEdge& b) { return a.edge < b.edge; });
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (entries_[i].sign != 1 && entries_[i].sign != -1)
            throw InvalidArgument("signed even set: sign must be +1 or -1");
        if (i > 0 && entries_[i].edge == entries_[i - 1].edge)
            throw InvalidArgument("signed even set: edge " + std::to_string(entries_[i].edge) +
                                  " repeated");
    }
}

int SignedEvenSet::sign_of(EdgeId e) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), e,
                               [](const SignedEdge& a, EdgeId id) { return a.edge < id; });
    return (it != entries_.end() && it->edge == e) ? it->sign : 0;
}

SignedEvenSet SignedEvenSet::without(EdgeId e) const {
    SignedEvenSet out;
    out.entries_.reserve(entries_.size());
    for (const auto& se : entries_)
        if (se.edge != e) out.entries_.push_back(se);
    return out;
}

bool is_integer_flow(const SignedEvenSet& c, const OrientedMultigraph& g) {
    std::vector<long long> net(g.vertex_capacity(), 0);
    for (const auto& [e, sign] : c.entries()) {
        if (!g.edge_live(e)) return false;
        const Edge& ed = g.edge(e);
        net[ed.head] += sign;
        net[ed.tail] -= sign;
    }
    return std::all_of(net.begin(), net.end(), [](long long v) { return v == 0; });
}

bool has_even_support(const SignedEvenSet& c, const OrientedMultigraph& g) {
    std::vector<std::size_t> degree(g.vertex_capacity(), 0);
    for (const auto& se : c.entries()) {
        if (!g.edge_live(se.edge)) return false;
        const Edge& ed = g.edge(se.edge);
        ++degree[ed.tail];
        ++degree[ed.head];
    }
    return std::all_of(degree.begin(), degree.end(), [](std::size_t d) { return d % 2 == 0; });
}

GenParams compute_params(std::span<const SignedEvenSet> generators, std::size_t edge_capacity) {
    GenParams p;
    std::vector<std::vector<std::uint32_t>> covers(edge_capacity);
    for (std::uint32_t i = 0; i < generators.size(); ++i) {
        p.ell = std::max(p.ell, generators[i].size());
        for (const auto& se : generators[i].entries()) covers.at(se.edge).push_back(i);
    }
    for (const auto& c : covers) p.s = std::max(p.s, c.size());

    // Per generator, count shared edges with every other generator through the index.
    std::vector<std::size_t> shared(generators.size(), 0);
    std::vector<std::uint32_t> touched;
    for (std::uint32_t i = 0; i < generators.size(); ++i) {
        touched.clear();
        for (const auto& se : generators[i].entries()) {
            for (std::uint32_t j : covers[se.edge]) {
                if (j == i) continue;
                if (shared[j]++ == 0) touched.push_back(j);
            }
        }
        p.d = std::max(p.d, touched.size());
        for (std::uint32_t j : touched) {
            p.iota = std::max(p.iota, shared[j]);
            shared[j] = 0;
        }
    }
    return p;
}

EvenGenSet::EvenGenSet(std::size_t edge_capacity, std::vector<SignedEvenSet> generators)
    : generators_(std::move(generators)), covers_(edge_capacity) {
    for (std::uint32_t i = 0; i < generators_.size(); ++i) {
        for (const auto& se : generators_[i].entries()) {
            if (se.edge >= edge_capacity)
                throw InvalidArgument("generator references edge " + std::to_string(se.edge) +
                                      " beyond the graph");
            covers_[se.edge].push_back(i);
        }
    }
    params_ = compute_params(generators_, edge_capacity);
}

GenParams EvenGenSet::bound_params() const {
    if (family_bound_) return *family_bound_;
    GenParams b = params_;
    b.d = std::max<std::size_t>(b.d, 2);
    b.iota = std::max<std::size_t>(b.iota, 1);
    b.ell = std::max<std::size_t>(b.ell, 3);
    b.s = std::max<std::size_t>(b.s, 2);
    return b;
}

namespace {

std::vector<std::pair<EdgeId, std::int8_t>> tree_path_up(const SpanningForest& forest,
                                                          const OrientedMultigraph& g, VertexId from,
                                                          VertexId to_ancestor) {
    // Edges traversed walking from `from` up to `to_ancestor`, with the sign of the
    // traversal direction relative to each edge's orientation.
    std::vector<std::pair<EdgeId, std::int8_t>> out;
    VertexId v = from;
    while (v != to_ancestor) {
        const EdgeId pe = forest.parent_edge[v];
        const VertexId up = forest.parent[v];
        out.emplace_back(pe, g.edge(pe).tail == v ? std::int8_t{1} : std::int8_t{-1});
        v = up;
    }
    return out;
}

}  // namespace

EvenGenSet fundamental_cycles(const OrientedMultigraph& g) {
    const SpanningForest forest = spanning_forest(g);
    std::vector<SignedEvenSet> cycles;
    for (EdgeId e : g.live_edges()) {
        if (forest.tree_edge[e]) continue;
        const Edge& ed = g.edge(e);
        std::vector<SignedEdge> entries{{e, 1}};
        if (!ed.is_loop()) {
            // Close the cycle: head -> ... -> lca -> ... -> tail.
            VertexId a = ed.head;
            VertexId b = ed.tail;
            while (forest.depth[a] > forest.depth[b]) a = forest.parent[a];
            while (forest.depth[b] > forest.depth[a]) b = forest.parent[b];
            while (a != b) {
                a = forest.parent[a];
                b = forest.parent[b];
            }
            const VertexId lca = a;
            for (auto [pe, sign] : tree_path_up(forest, g, ed.head, lca)) entries.push_back({pe, sign});
            for (auto [pe, sign] : tree_path_up(forest, g, ed.tail, lca))
                entries.push_back({pe, static_cast<std::int8_t>(-sign)});
        }
        cycles.emplace_back(std::move(entries));
    }
    return EvenGenSet(g.edge_capacity(), std::move(cycles));
}

namespace {

long long checked_sub_mul(long long a, long long factor, long long b) {
    long long prod = 0;
    long long out = 0;
    if (__builtin_mul_overflow(factor, b, &prod) || __builtin_sub_overflow(a, prod, &out))
        throw TooLarge("verify_generates: integer elimination overflowed 64 bits");
    return out;
}

/// Row echelon form over Z of a dense integer matrix; pivot columns strictly increase.
struct IntegerEchelon {
    std::vector<std::size_t> pivot_cols;
    std::vector<std::vector<long long>> pivot_rows;

    explicit IntegerEchelon(std::vector<std::vector<long long>> rows, std::size_t cols) {
        std::vector<std::size_t> active(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) active[i] = i;
        for (std::size_t col = 0; col < cols && !active.empty(); ++col) {
            while (true) {
                std::size_t best = rows.size();
                std::size_t nonzero = 0;
                for (std::size_t i : active) {
                    if (rows[i][col] == 0) continue;
                    ++nonzero;
                    if (best == rows.size() || std::llabs(rows[i][col]) < std::llabs(rows[best][col]))
                        best = i;
                }
                if (nonzero == 0) break;
                if (nonzero == 1) {
                    pivot_cols.push_back(col);
                    pivot_rows.push_back(std::move(rows[best]));
                    active.erase(std::find(active.begin(), active.end(), best));
                    break;
                }
                const long long pv = rows[best][col];
                for (std::size_t i : active) {
                    if (i == best || rows[i][col] == 0) continue;
                    const long long factor = rows[i][col] / pv;
                    for (std::size_t c = col; c < cols; ++c)
                        rows[i][c] = checked_sub_mul(rows[i][c], factor, rows[best][c]);
                }
            }
        }
    }

    bool contains(std::vector<long long> v) const {
        std::size_t k = 0;
        for (std::size_t col = 0; col < v.size(); ++col) {
            if (k < pivot_cols.size() && pivot_cols[k] == col) {
                const auto& row = pivot_rows[k];
                if (v[col] % row[col] != 0) return false;
                const long long factor = v[col] / row[col];
                for (std::size_t c = col; c < v.size(); ++c) v[c] = checked_sub_mul(v[c], factor, row[c]);
                ++k;
            } else if (v[col] != 0) {
                return false;
            }
        }
        return true;
    }
};

}  // namespace

bool verify_generates(const EvenGenSet& set, const OrientedMultigraph& g) {
    for (std::size_t i = 0; i < set.size(); ++i) {
        if (!is_integer_flow(set[i], g) || !has_even_support(set[i], g))
            throw InvalidGenerator("generator " + std::to_string(i) +
                                   " is not an even integer flow on the graph");
    }
    const std::vector<EdgeId> live = g.live_edges();
    std::vector<std::size_t> column(g.edge_capacity(), 0);
    for (std::size_t c = 0; c < live.size(); ++c) column[live[c]] = c;
    if (set.size() * live.size() > 50'000'000)
        throw TooLarge("verify_generates: generator matrix too large for dense elimination");

    auto to_dense = [&](const SignedEvenSet& c) {
        std::vector<long long> v(live.size(), 0);
        for (const auto& se : c.entries()) v[column[se.edge]] = se.sign;
        return v;
    };
    std::vector<std::vector<long long>> rows;
    rows.reserve(set.size());
    for (const auto& c : set.generators()) rows.push_back(to_dense(c));
    const IntegerEchelon echelon(std::move(rows), live.size());

    const EvenGenSet basis = fundamental_cycles(g);
    return std::all_of(basis.generators().begin(), basis.generators().end(),
                       [&](const SignedEvenSet& c) { return echelon.contains(to_dense(c)); });
}

EvenGenSet contract_set(const EvenGenSet& set, const OrientedMultigraph& g, EdgeId e) {
    if (!g.edge_live(e)) throw InvalidArgument("contract_set: edge " + std::to_string(e) + " is not live");
    if (g.is_loop(e)) throw InvalidArgument("contract_set: edge " + std::to_string(e) + " is a loop");
    std::vector<SignedEvenSet> out;
    out.reserve(set.size());
    for (const auto& c : set.generators()) out.push_back(c.without(e));
    EvenGenSet contracted(set.edge_capacity(), std::move(out));
    if (set.family_bound()) contracted.set_family_bound(*set.family_bound());
    return contracted;
}

EvenGenSet read_gens(std::istream& in, const OrientedMultigraph& g) {
    std::size_t r = 0;
    if (!(in >> r)) throw IoError("generators: expected count line \"r\"");
    std::vector<SignedEvenSet> gens;
    gens.reserve(r);
    for (std::size_t i = 0; i < r; ++i) {
        std::size_t k = 0;
        if (!(in >> k)) throw IoError("generators: expected " + std::to_string(r) + " generator lines");
        std::vector<SignedEdge> entries;
        entries.reserve(k);
        for (std::size_t j = 0; j < k; ++j) {
            long long e = 0;
            std::string sign;
            if (!(in >> e >> sign)) throw IoError("generators: truncated generator " + std::to_string(i));
            if (e < 0 || !g.edge_live(static_cast<EdgeId>(e)))
                throw InvalidArgument("generators: edge " + std::to_string(e) + " is not an edge of the graph");
            if (sign != "+" && sign != "-") throw IoError("generators: sign must be + or -, got " + sign);
            entries.push_back({static_cast<EdgeId>(e), static_cast<std::int8_t>(sign == "+" ? 1 : -1)});
        }
        SignedEvenSet c(std::move(entries));
        if (!is_integer_flow(c, g) || !has_even_support(c, g))
            throw InvalidGenerator("generators: line " + std::to_string(i) + " is not an even integer flow");
        gens.push_back(std::move(c));
    }
    return EvenGenSet(g.edge_capacity(), std::move(gens));
}

void write_gens(std::ostream& out, const EvenGenSet& set) {
    out << set.size() << '\n';
    for (const auto& c : set.generators()) {
        out << c.size();
        for (const auto& se : c.entries()) out << ' ' << se.edge << ' ' << (se.sign > 0 ? '+' : '-');
        out << '\n';
    }
}

}  // namespace pottsflow
