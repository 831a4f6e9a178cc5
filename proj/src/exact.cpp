#include "pottsflow/exact.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "pottsflow/flow_chain.hpp"

namespace pottsflow {

namespace {

constexpr std::size_t kMaxSubsetEdges = 24;

std::uint64_t checked_power(std::uint64_t base, std::size_t exp, std::size_t limit, const char* what) {
    std::uint64_t out = 1;
    for (std::size_t i = 0; i < exp; ++i) {
        if (out > limit / base) throw TooLarge(std::string(what) + ": more than " + std::to_string(limit) + " states");
        out *= base;
    }
    return out;
}

std::vector<EdgeId> require_small_edge_set(const OrientedMultigraph& g, const char* what) {
    std::vector<EdgeId> live = g.live_edges();
    if (live.size() > kMaxSubsetEdges)
        throw TooLarge(std::string(what) + ": " + std::to_string(live.size()) + " edges exceed the limit of " +
                       std::to_string(kMaxSubsetEdges));
    return live;
}

// Calls visit(F) for every subset of the live edges.
template <class Visit>
void for_each_subset(const OrientedMultigraph& g, const std::vector<EdgeId>& live, Visit&& visit) {
    const std::uint64_t total = std::uint64_t{1} << live.size();
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        EdgeSubset f(g.edge_capacity());
        for (std::size_t i = 0; i < live.size(); ++i)
            if ((mask >> i) & 1U) f.insert(live[i]);
        visit(f);
    }
}

// Calls visit(sigma) for every colouring of the live vertices with 1..q.
template <class Visit>
void for_each_colouring(const OrientedMultigraph& g, Residue q, Visit&& visit) {
    const std::vector<VertexId> live = g.live_vertices();
    checked_power(q, live.size(), kEnumerationLimit, "colourings");
    PottsConfig sigma{q, std::vector<std::uint32_t>(g.vertex_capacity(), 0)};
    for (VertexId v : live) sigma.spins[v] = 1;
    while (true) {
        visit(sigma);
        std::size_t i = 0;
        for (; i < live.size(); ++i) {
            std::uint32_t& s = sigma.spins[live[i]];
            if (s < q) {
                ++s;
                break;
            }
            s = 1;
        }
        if (i == live.size()) return;
    }
}

std::size_t monochromatic_edges(const OrientedMultigraph& g, const PottsConfig& sigma) {
    std::size_t m = 0;
    for (EdgeId e : g.live_edges()) {
        const Edge& ed = g.edge(e);
        m += sigma.spins[ed.tail] == sigma.spins[ed.head];
    }
    return m;
}

template <class State>
void normalise(Weighted<State>& states) {
    long double total = 0.0L;
    for (const auto& entry : states) total += entry.second;
    for (auto& entry : states) entry.second /= total;
}

long double relative_error(long double a, long double b) {
    const long double scale = std::max(std::fabs(a), std::fabs(b));
    return scale == 0.0L ? 0.0L : std::fabs(a - b) / scale;
}

}  // namespace

StateKey flow_key(const FlowState& f) {
    return StateKey(f.values().begin(), f.values().end());
}

StateKey subset_key(const EdgeSubset& f) {
    StateKey key(f.capacity(), 0);
    for (EdgeId e = 0; e < f.capacity(); ++e) key[e] = f.contains(e);
    return key;
}

StateKey joint_key(const JointState& st) {
    StateKey key = flow_key(st.flow);
    const StateKey edges = subset_key(st.edges);
    key.insert(key.end(), edges.begin(), edges.end());
    return key;
}

StateKey potts_key(const PottsConfig& sigma) { return sigma.spins; }

long double total_variation(const Distribution& a, const Distribution& b) {
    long double sum = 0.0L;
    for (const auto& [k, p] : a) {
        auto it = b.find(k);
        sum += std::fabs(p - (it == b.end() ? 0.0L : it->second));
    }
    for (const auto& [k, p] : b)
        if (!a.contains(k)) sum += p;
    return sum / 2.0L;
}

long double max_abs_difference(const Distribution& a, const Distribution& b) {
    long double worst = 0.0L;
    for (const auto& [k, p] : a) {
        auto it = b.find(k);
        worst = std::max(worst, std::fabs(p - (it == b.end() ? 0.0L : it->second)));
    }
    for (const auto& [k, p] : b)
        if (!a.contains(k)) worst = std::max(worst, p);
    return worst;
}

void for_each_flow(const OrientedMultigraph& g, const EdgeSubset& f_edges, Residue q,
                   const std::function<void(const FlowState&)>& visit, std::size_t limit) {
    const SpanningForest forest = spanning_forest(g, f_edges);
    std::vector<EdgeId> free_edges;
    for (EdgeId e = 0; e < g.edge_capacity(); ++e)
        if (g.edge_live(e) && f_edges.contains(e) && !forest.tree_edge[e]) free_edges.push_back(e);
    checked_power(q, free_edges.size(), limit, "for_each_flow");

    std::vector<Residue> digits(free_edges.size(), 0);
    FlowState f(g.edge_capacity(), q);
    while (true) {
        for (std::size_t i = 0; i < free_edges.size(); ++i) f.set(free_edges[i], digits[i]);
        complete_over_forest(g, f_edges, forest, f);
        visit(f);
        std::size_t i = 0;
        for (; i < digits.size(); ++i) {
            if (++digits[i] < q) break;
            digits[i] = 0;
        }
        if (i == digits.size()) return;
    }
}

std::uint64_t count_flows_bruteforce(const OrientedMultigraph& g, const EdgeSubset& f_edges, Residue q) {
    std::vector<EdgeId> edges;
    for (EdgeId e = 0; e < g.edge_capacity(); ++e)
        if (g.edge_live(e) && f_edges.contains(e)) edges.push_back(e);

    // A vertex is checked once the last F-edge touching it has a value.
    std::vector<std::vector<VertexId>> completes_at(edges.size());
    std::vector<std::size_t> last(g.vertex_capacity(), 0);
    std::vector<bool> touched(g.vertex_capacity(), false);
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const Edge& ed = g.edge(edges[i]);
        last[ed.tail] = last[ed.head] = i;
        touched[ed.tail] = touched[ed.head] = true;
    }
    for (VertexId v = 0; v < g.vertex_capacity(); ++v)
        if (touched[v]) completes_at[last[v]].push_back(v);

    std::vector<std::int64_t> excess(g.vertex_capacity(), 0);  // inflow minus outflow
    std::vector<Residue> value(edges.size(), 0);
    std::uint64_t count = 0;
    std::size_t depth = 0;
    bool descending = true;
    // Iterative depth-first search over labellings; value[depth] is the label
    // currently applied at position depth.
    while (true) {
        if (depth == edges.size()) {
            ++count;
            descending = false;
            if (depth == 0) return count;
            --depth;
        }
        const Edge& ed = g.edge(edges[depth]);
        if (descending) {
            value[depth] = 0;
        } else {
            excess[ed.head] -= value[depth];
            excess[ed.tail] += value[depth];
            if (++value[depth] == q) {
                if (depth == 0) return count;
                --depth;
                continue;
            }
        }
        excess[ed.head] += value[depth];
        excess[ed.tail] -= value[depth];
        bool balanced = true;
        for (VertexId v : completes_at[depth])
            if (((excess[v] % static_cast<std::int64_t>(q)) + q) % q != 0) balanced = false;
        if (balanced) {
            ++depth;
            descending = true;
        } else {
            descending = false;
        }
    }
}

long double exact_z_flow(const OrientedMultigraph& g, Residue q, long double x) {
    long double z = 0.0L;
    for_each_flow(g, EdgeSubset::all(g), q,
                  [&](const FlowState& f) { z += std::pow(x, static_cast<long double>(f.support_size())); });
    return z;
}

long double exact_z_potts(const OrientedMultigraph& g, Residue q, long double w) {
    long double z = 0.0L;
    for_each_colouring(g, q, [&](const PottsConfig& sigma) {
        z += std::pow(w, static_cast<long double>(monochromatic_edges(g, sigma)));
    });
    return z;
}

long double exact_z_rc(const OrientedMultigraph& g, Residue q, long double y) {
    const std::vector<EdgeId> live = require_small_edge_set(g, "exact_z_rc");
    long double z = 0.0L;
    for_each_subset(g, live, [&](const EdgeSubset& f) {
        z += std::pow(static_cast<long double>(q), static_cast<long double>(components(g, f))) *
             std::pow(y, static_cast<long double>(f.size()));
    });
    return z;
}

Weighted<FlowState> weighted_flows(const OrientedMultigraph& g, Residue q, double x) {
    Weighted<FlowState> out;
    for_each_flow(g, EdgeSubset::all(g), q, [&](const FlowState& f) {
        out.emplace_back(f, std::pow(static_cast<long double>(x), static_cast<long double>(f.support_size())));
    });
    normalise(out);
    return out;
}

Weighted<JointState> weighted_joint_states(const OrientedMultigraph& g, Residue q, double x) {
    const std::vector<EdgeId> live = require_small_edge_set(g, "weighted_joint_states");
    const long double lx = x;
    Weighted<JointState> out;
    for_each_subset(g, live, [&](const EdgeSubset& f_edges) {
        const long double weight = std::pow(lx, static_cast<long double>(f_edges.size())) *
                                   std::pow(1.0L - lx, static_cast<long double>(live.size() - f_edges.size()));
        for_each_flow(g, f_edges, q, [&](const FlowState& f) { out.emplace_back(JointState{f, f_edges}, weight); });
    });
    normalise(out);
    return out;
}

Weighted<EdgeSubset> weighted_subsets(const OrientedMultigraph& g, Residue q, double y) {
    const std::vector<EdgeId> live = require_small_edge_set(g, "weighted_subsets");
    Weighted<EdgeSubset> out;
    for_each_subset(g, live, [&](const EdgeSubset& f) {
        out.emplace_back(f, std::pow(static_cast<long double>(q), static_cast<long double>(components(g, f))) *
                                std::pow(static_cast<long double>(y), static_cast<long double>(f.size())));
    });
    normalise(out);
    return out;
}

Weighted<PottsConfig> weighted_colourings(const OrientedMultigraph& g, Residue q, double w) {
    Weighted<PottsConfig> out;
    for_each_colouring(g, q, [&](const PottsConfig& sigma) {
        out.emplace_back(sigma, std::pow(static_cast<long double>(w),
                                         static_cast<long double>(monochromatic_edges(g, sigma))));
    });
    normalise(out);
    return out;
}

IdentityReport identity_suite(const OrientedMultigraph& g, Residue q, double x, long double tolerance,
                              std::size_t max_subset_edges) {
    if (q < 2) throw InvalidArgument("identity_suite: q must be at least 2");
    if (!(x > 0.0 && x < 1.0)) throw InvalidArgument("identity_suite: x must lie in (0, 1)");
    IdentityReport rep;
    const long double lx = x;
    const long double scale = std::pow(1.0L - lx, static_cast<long double>(g.edge_count()));
    rep.flow_side = std::pow(static_cast<long double>(q), static_cast<long double>(g.vertex_count())) *
                    exact_z_flow(g, q, lx);
    rep.potts_side = scale * exact_z_potts(g, q, (1.0L + (q - 1.0L) * lx) / (1.0L - lx));
    rep.rc_side = scale * exact_z_rc(g, q, q * lx / (1.0L - lx));
    rep.potts_rel_error = relative_error(rep.flow_side, rep.potts_side);
    rep.rc_rel_error = relative_error(rep.flow_side, rep.rc_side);
    std::ostringstream witness;
    if (rep.potts_rel_error > tolerance) {
        witness << "flow/Potts identity off by relative " << static_cast<double>(rep.potts_rel_error);
    } else if (rep.rc_rel_error > tolerance) {
        witness << "flow/random-cluster identity off by relative " << static_cast<double>(rep.rc_rel_error);
    }

    const std::vector<EdgeId> live = g.live_edges();
    if (live.size() <= max_subset_edges) {
        for_each_subset(g, live, [&](const EdgeSubset& f) {
            ++rep.subsets_checked;
            const std::size_t dim = f.size() + components(g, f) - g.vertex_count();
            std::uint64_t expected = 1;
            for (std::size_t i = 0; i < dim; ++i) expected *= q;
            const std::uint64_t got = count_flows_bruteforce(g, f, q);
            if (got != expected) {
                if (rep.flow_count_failures == 0 && witness.str().empty()) {
                    witness << "subset {";
                    for (EdgeId e : f.ids()) witness << ' ' << e;
                    witness << " } has " << got << " flows, expected " << expected;
                }
                ++rep.flow_count_failures;
            }
        });
    }
    rep.witness = witness.str();
    rep.ok = rep.witness.empty();
    return rep;
}

long double SparseChain::entry(std::size_t i, std::size_t j) const {
    const auto& row = rows.at(i);
    auto it = std::lower_bound(row.begin(), row.end(), j,
                               [](const std::pair<std::size_t, long double>& a, std::size_t b) { return a.first < b; });
    return it != row.end() && it->first == j ? it->second : 0.0L;
}

SparseChain flow_chain_matrix(const OrientedMultigraph& g, const EvenGenSet& gens, Residue q, double x) {
    FlowChain chain(gens, x, q);
    return assemble_chain(zero_flow(g, q), flow_key,
                          [&](FlowState& f, BranchEnumerator& src) { chain.step(f, src); });
}

SparseChain joint_chain_matrix(const OrientedMultigraph& g, const EvenGenSet& gens, Residue q, double x,
                               double p) {
    JointChain chain(g, gens, x, q, p);
    return assemble_chain(initial_joint_state(g, q), joint_key,
                          [&](JointState& st, BranchEnumerator& src) { chain.step(st, src); });
}

std::vector<long double> align(const SparseChain& chain, const Distribution& target, long double* unreached) {
    std::vector<long double> pi(chain.size(), 0.0L);
    long double missing = 0.0L;
    for (const auto& [k, p] : target) {
        auto it = chain.index.find(k);
        if (it == chain.index.end()) {
            missing += p;
        } else {
            pi[it->second] = p;
        }
    }
    if (unreached) *unreached = missing;
    return pi;
}

long double max_row_sum_error(const SparseChain& chain) {
    long double worst = 0.0L;
    for (const auto& row : chain.rows) {
        long double sum = 0.0L;
        for (const auto& entry : row) sum += entry.second;
        worst = std::max(worst, std::fabs(sum - 1.0L));
    }
    return worst;
}

long double detailed_balance_error(const SparseChain& chain, std::span<const long double> pi) {
    long double worst = 0.0L;
    for (std::size_t i = 0; i < chain.size(); ++i) {
        for (const auto& [j, pij] : chain.rows[i]) {
            worst = std::max(worst, std::fabs(pi[i] * pij - pi[j] * chain.entry(j, i)));
        }
    }
    return worst;
}

long double fixed_point_residual(const SparseChain& chain, std::span<const long double> pi) {
    std::vector<long double> next(chain.size(), 0.0L);
    for (std::size_t i = 0; i < chain.size(); ++i)
        for (const auto& [j, pij] : chain.rows[i]) next[j] += pi[i] * pij;
    long double sum = 0.0L;
    for (std::size_t i = 0; i < chain.size(); ++i) sum += std::fabs(next[i] - pi[i]);
    return sum;
}

std::vector<long double> exact_tv_decay(const SparseChain& chain, const Distribution& target,
                                        std::size_t t_max) {
    long double unreached = 0.0L;
    const std::vector<long double> pi = align(chain, target, &unreached);
    std::vector<long double> mu(chain.size(), 0.0L);
    mu[chain.start] = 1.0L;
    std::vector<long double> out;
    out.reserve(t_max + 1);
    for (std::size_t t = 0;; ++t) {
        long double sum = unreached;
        for (std::size_t i = 0; i < chain.size(); ++i) sum += std::fabs(mu[i] - pi[i]);
        out.push_back(sum / 2.0L);
        if (t == t_max) break;
        std::vector<long double> next(chain.size(), 0.0L);
        for (std::size_t i = 0; i < chain.size(); ++i) {
            if (mu[i] == 0.0L) continue;
            for (const auto& [j, pij] : chain.rows[i]) next[j] += mu[i] * pij;
        }
        mu.swap(next);
    }
    return out;
}

SumOfMinimaResult sum_of_minima_check(double x, std::size_t iota, std::span<const long long> a,
                            std::span<const long long> b) {
    if (!(x > 0.0 && x < 1.0)) throw InvalidArgument("sum_of_minima_check: x must lie in (0, 1)");
    if (a.empty() || a.size() != b.size())
        throw InvalidArgument("sum_of_minima_check: sequences must be nonempty and of equal length");
    const long long sum_a = std::accumulate(a.begin(), a.end(), 0LL);
    const long long sum_b = std::accumulate(b.begin(), b.end(), 0LL);
    if (sum_a != sum_b) throw InvalidArgument("sum_of_minima_check: sequences must have equal sums");
    long long l1 = 0;
    for (std::size_t i = 0; i < a.size(); ++i) l1 += std::llabs(a[i] - b[i]);
    if (l1 > 2 * static_cast<long long>(iota))
        throw InvalidArgument("sum_of_minima_check: sequences differ by more than 2 iota in l1");

    const long double lx = x;
    auto probabilities = [&](std::span<const long long> seq) {
        const long long top = *std::max_element(seq.begin(), seq.end());
        std::vector<long double> p(seq.size());
        long double total = 0.0L;
        for (std::size_t i = 0; i < seq.size(); ++i) {
            p[i] = std::pow(lx, static_cast<long double>(top - seq[i]));
            total += p[i];
        }
        for (long double& v : p) v /= total;
        return p;
    };
    const std::vector<long double> pa = probabilities(a);
    const std::vector<long double> pb = probabilities(b);
    SumOfMinimaResult out;
    for (std::size_t i = 0; i < a.size(); ++i) out.sum_of_minima += std::min(pa[i], pb[i]);
    const long double xi = std::pow(lx, static_cast<long double>(iota));
    out.bound = 1.0L - (1.0L - xi) / (1.0L + xi);
    out.ok = out.sum_of_minima >= out.bound - 1e-12L;
    return out;
}

SumOfMinimaSweep sum_of_minima_sweep(std::size_t max_length, long long max_entry, std::size_t max_iota,
                           std::span<const double> xs, long double tolerance) {
    SumOfMinimaSweep out;
    out.min_slack = 1.0L;
    for (std::size_t len = 2; len <= max_length; ++len) {
        // All sequences of this length with entries in [0, max_entry].
        std::vector<std::vector<long long>> seqs{{}};
        for (std::size_t i = 0; i < len; ++i) {
            std::vector<std::vector<long long>> longer;
            for (const auto& s : seqs)
                for (long long v = 0; v <= max_entry; ++v) {
                    longer.push_back(s);
                    longer.back().push_back(v);
                }
            seqs.swap(longer);
        }
        for (const auto& a : seqs) {
            const long long sum_a = std::accumulate(a.begin(), a.end(), 0LL);
            for (const auto& b : seqs) {
                if (std::accumulate(b.begin(), b.end(), 0LL) != sum_a) continue;
                long long l1 = 0;
                for (std::size_t i = 0; i < len; ++i) l1 += std::llabs(a[i] - b[i]);
                for (std::size_t iota = std::max<std::size_t>(1, static_cast<std::size_t>((l1 + 1) / 2));
                     iota <= max_iota; ++iota) {
                    for (double x : xs) {
                        const SumOfMinimaResult r = sum_of_minima_check(x, iota, a, b);
                        ++out.cases;
                        out.min_slack = std::min(out.min_slack, r.sum_of_minima - r.bound);
                        if (r.sum_of_minima < r.bound - tolerance) ++out.failures;
                    }
                }
            }
        }
    }
    for (std::size_t iota = 1; iota <= max_iota; ++iota) {
        const std::vector<long long> a{static_cast<long long>(iota), 0};
        const std::vector<long long> b{0, static_cast<long long>(iota)};
        for (double x : xs) {
            const SumOfMinimaResult r = sum_of_minima_check(x, iota, a, b);
            out.equality_max_error = std::max(out.equality_max_error, std::fabs(r.sum_of_minima - r.bound));
        }
    }
    out.ok = out.failures == 0 && out.equality_max_error <= tolerance;
    return out;
}

}  // namespace pottsflow
