#pragma once

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "pottsflow/couplings.hpp"
#include "pottsflow/cycle_space.hpp"
#include "pottsflow/exact.hpp"
#include "pottsflow/flow.hpp"
#include "pottsflow/graph.hpp"
#include "pottsflow/lattice.hpp"
#include "pottsflow/rng.hpp"

namespace pottsflow {

/// Heat-bath update of one uniformly chosen live vertex v: colour c is drawn with
/// probability proportional to x^{dis(c)}, where dis(c) counts non-loop edges at v
/// whose other end is not coloured c, plus ghost[v] fixed boundary neighbours of
/// colour q when c != q. This is Glauber dynamics for the Potts model at w = 1/x.
/// `ghosts` may be empty (no boundary).
template <RandomSource R>
void potts_glauber_step(PottsConfig& sigma, const OrientedMultigraph& g, double x, R& rng,
                        std::span<const std::uint32_t> ghosts = {}) {
    const std::vector<VertexId> live = g.live_vertices();
    const VertexId v = live[rng.uniform_index(live.size())];
    const Residue q = sigma.q;
    std::vector<std::size_t> agree(q, 0);
    std::size_t degree = 0;
    for (EdgeId e : g.incident(v)) {
        if (g.is_loop(e)) continue;
        const Edge& ed = g.edge(e);
        ++degree;
        ++agree[sigma.spins[ed.tail == v ? ed.head : ed.tail] - 1];
    }
    const std::size_t ghost = ghosts.empty() ? 0 : ghosts[v];
    std::vector<double> weights(q);
    for (Residue c = 0; c < q; ++c) {
        const std::size_t dis = degree - agree[c] + (c + 1 == q ? 0 : ghost);
        weights[c] = std::pow(x, static_cast<double>(dis));
    }
    sigma.spins[v] = 1 + static_cast<std::uint32_t>(rng.discrete(weights));
}

/// Correspondence between q-colourings of the L x L grid H and Z_q-flows on the
/// (L+1) x (L+1) grid G with its face generating set: face i of G (row-major)
/// is dual to vertex i of H, and phi(sigma) = sum_i (sigma(v_i) mod q) C_i.
class DualityMap {
public:
    /// Throws InvalidArgument when L < 1 or q < 2.
    DualityMap(std::size_t L, Residue q);

    std::size_t L() const noexcept { return L_; }
    Residue q() const noexcept { return q_; }
    const OrientedMultigraph& potts_graph() const noexcept { return potts_graph_; }
    const Lattice& flow_lattice() const noexcept { return flow_lattice_; }
    /// Boundary neighbours 4 - deg_H(v): the faces of G sharing an edge with the outer face.
    const std::vector<std::uint32_t>& ghosts() const noexcept { return ghosts_; }

    FlowState phi(const PottsConfig& sigma) const;

private:
    std::size_t L_;
    Residue q_;
    OrientedMultigraph potts_graph_;
    Lattice flow_lattice_;
    std::vector<std::uint32_t> ghosts_;
};

struct DualityReport {
    std::size_t L = 0;
    Residue q = 0;
    double x = 0.0;
    std::size_t potts_states = 0;
    std::size_t flow_states = 0;
    bool bijective = false;
    long double max_entry_difference = 0.0L;
    bool ok = false;
};

/// Builds the exact Glauber matrix on H and the exact flow-chain matrix on G and
/// compares them entrywise under phi. Throws TooLarge when q^{L^2} > 10^4.
DualityReport verify_duality(std::size_t L, Residue q, double x, long double tolerance = 1e-12L);

enum class ChainKind { Flow, Joint };

struct TvCurveSpec {
    ChainKind chain = ChainKind::Flow;
    std::vector<double> xs;
    std::size_t t_max = 50;
    /// Joint chain only; defaults to the balancing p of the generating set.
    std::optional<double> p;
};

struct TvPoint {
    std::size_t t = 0;
    double x = 0.0;
    long double tv = 0.0L;
};

/// Exact TV(mu_t, mu) for t = 0..t_max at every x, from the chain's start state.
std::vector<TvPoint> tv_curve(const OrientedMultigraph& g, const EvenGenSet& gens, Residue q,
                              const TvCurveSpec& spec);

/// CSV with header "t,x,tv".
void write_tv_csv(std::ostream& out, const std::vector<TvPoint>& points);

}  // namespace pottsflow
