#include "pottsflow/diagnostics.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <ostream>
#include <set>
#include <string>

#include "pottsflow/error.hpp"
#include "pottsflow/flow_chain.hpp"
#include "pottsflow/joint_chain.hpp"

namespace pottsflow {

namespace {

constexpr std::size_t kDualityStateLimit = 10'000;

OrientedMultigraph plain_grid(std::size_t L) {
    std::vector<std::pair<VertexId, VertexId>> pairs;
    auto id = [L](std::size_t x, std::size_t y) { return static_cast<VertexId>(y * L + x); };
    for (std::size_t y = 0; y < L; ++y)
        for (std::size_t x = 0; x + 1 < L; ++x) pairs.emplace_back(id(x, y), id(x + 1, y));
    for (std::size_t y = 0; y + 1 < L; ++y)
        for (std::size_t x = 0; x < L; ++x) pairs.emplace_back(id(x, y), id(x, y + 1));
    return OrientedMultigraph::from_edge_list(L * L, pairs);
}

// Merges two sorted sparse rows and returns the largest entrywise difference.
long double row_difference(const std::vector<std::pair<std::size_t, long double>>& a,
                           const std::vector<std::pair<std::size_t, long double>>& b) {
    long double worst = 0.0L;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
            worst = std::max(worst, std::fabs(a[i++].second));
        } else if (i == a.size() || b[j].first < a[i].first) {
            worst = std::max(worst, std::fabs(b[j++].second));
        } else {
            worst = std::max(worst, std::fabs(a[i++].second - b[j++].second));
        }
    }
    return worst;
}

}  // namespace

DualityMap::DualityMap(std::size_t L, Residue q)
    : L_(L), q_(q) {
    if (L < 1) throw InvalidArgument("duality: L must be at least 1");
    if (q < 2) throw InvalidArgument("duality: q must be at least 2");
    potts_graph_ = plain_grid(L);
    flow_lattice_ = grid_faces(L + 1, L + 1);
    ghosts_.assign(L * L, 0);
    for (VertexId v = 0; v < L * L; ++v) {
        std::size_t degree = 0;
        for (EdgeId e : potts_graph_.incident(v)) degree += !potts_graph_.is_loop(e);
        ghosts_[v] = static_cast<std::uint32_t>(4 - degree);
    }
}

FlowState DualityMap::phi(const PottsConfig& sigma) const {
    FlowState f = zero_flow(flow_lattice_.graph, q_);
    for (std::size_t i = 0; i < L_ * L_; ++i) f.add_multiple(sigma.spins[i] % q_, flow_lattice_.gens[i]);
    return f;
}

DualityReport verify_duality(std::size_t L, Residue q, double x, long double tolerance) {
    if (!(x > 0.0 && x < 1.0)) throw InvalidArgument("duality: x must lie in (0, 1)");
    std::size_t states = 1;
    for (std::size_t i = 0; i < L * L; ++i) {
        states *= q;
        if (states > kDualityStateLimit)
            throw TooLarge("duality: q^{L^2} exceeds " + std::to_string(kDualityStateLimit) + " states");
    }
    const DualityMap map(L, q);
    DualityReport rep;
    rep.L = L;
    rep.q = q;
    rep.x = x;

    const PottsConfig start{q, std::vector<std::uint32_t>(L * L, q)};
    const SparseChain potts = assemble_chain(
        start, potts_key,
        [&](PottsConfig& sigma, BranchEnumerator& src) {
            potts_glauber_step(sigma, map.potts_graph(), x, src, map.ghosts());
        },
        kDualityStateLimit);
    const SparseChain flows = flow_chain_matrix(map.flow_lattice().graph, map.flow_lattice().gens, q, x);
    rep.potts_states = potts.size();
    rep.flow_states = flows.size();

    // Image of every Potts state in the flow chain's numbering.
    std::vector<std::size_t> image(potts.size());
    std::set<StateKey> seen;
    bool injective = true;
    bool all_flows = true;
    for (std::size_t i = 0; i < potts.size(); ++i) {
        const PottsConfig sigma{q, potts.states[i]};
        const FlowState f = map.phi(sigma);
        all_flows = all_flows && is_flow(f, map.flow_lattice().graph);
        StateKey key = flow_key(f);
        auto it = flows.index.find(key);
        if (it == flows.index.end()) {
            injective = false;
            continue;
        }
        image[i] = it->second;
        injective = seen.insert(std::move(key)).second && injective;
    }
    rep.bijective = injective && all_flows && potts.size() == states && flows.size() == states;

    if (rep.bijective) {
        for (std::size_t i = 0; i < potts.size(); ++i) {
            std::vector<std::pair<std::size_t, long double>> mapped;
            mapped.reserve(potts.rows[i].size());
            for (const auto& [j, p] : potts.rows[i]) mapped.emplace_back(image[j], p);
            std::sort(mapped.begin(), mapped.end());
            rep.max_entry_difference =
                std::max(rep.max_entry_difference, row_difference(mapped, flows.rows[image[i]]));
        }
    }
    rep.ok = rep.bijective && rep.max_entry_difference <= tolerance;
    return rep;
}

std::vector<TvPoint> tv_curve(const OrientedMultigraph& g, const EvenGenSet& gens, Residue q,
                              const TvCurveSpec& spec) {
    if (spec.xs.empty()) throw InvalidArgument("tv_curve: no x values");
    std::vector<TvPoint> out;
    for (double x : spec.xs) {
        SparseChain chain;
        Distribution target;
        if (spec.chain == ChainKind::Flow) {
            chain = flow_chain_matrix(g, gens, q, x);
            target = to_distribution(weighted_flows(g, q, x), flow_key);
        } else {
            double p = 0.0;
            if (spec.p) {
                p = *spec.p;
            } else {
                const GenParams bp = gens.bound_params();
                p = compute_p(x, q, bp.ell, bp.s, g.edge_count(), gens.size()).p;
            }
            chain = joint_chain_matrix(g, gens, q, x, p);
            target = to_distribution(weighted_joint_states(g, q, x), joint_key);
        }
        const std::vector<long double> tv = exact_tv_decay(chain, target, spec.t_max);
        for (std::size_t t = 0; t < tv.size(); ++t) out.push_back({t, x, tv[t]});
    }
    return out;
}

void write_tv_csv(std::ostream& out, const std::vector<TvPoint>& points) {
    auto shortest = [](double v) {
        std::array<char, 32> buf{};
        const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
        return std::string(buf.data(), res.ptr);
    };
    out << "t,x,tv\n";
    for (const TvPoint& pt : points)
        out << pt.t << ',' << shortest(pt.x) << ',' << shortest(static_cast<double>(pt.tv)) << '\n';
}

}  // namespace pottsflow
