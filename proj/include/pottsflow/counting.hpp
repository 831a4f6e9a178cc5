#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pottsflow/cycle_space.hpp"
#include "pottsflow/flow.hpp"
#include "pottsflow/graph.hpp"

namespace pottsflow {

enum class SamplerKind { Flow, Joint };

struct EstimateConfig {
    double epsilon = 0.1;
    SamplerKind sampler = SamplerKind::Flow;
    /// Flows drawn per contraction ratio; default ceil(48 t / epsilon^2).
    std::optional<std::size_t> samples_per_ratio;
    /// Total-variation budget of each sample; default epsilon / (16 t).
    std::optional<double> delta_per_sample;
    std::uint64_t seed = 0;
    /// Independent estimates combined by their median.
    std::size_t median_of = 1;
    std::size_t threads = 1;
};

struct RatioEstimate {
    EdgeId edge = 0;
    double y = 1.0;                  // mean of Y_j = 1/x - (1-x)/x X_j
    std::size_t samples = 0;
    std::size_t zero_on_edge = 0;    // sum of X_j
    std::uint64_t steps_per_sample = 0;
};

struct EstimateReport {
    double zeta = 1.0;
    double log_zeta = 0.0;
    std::vector<EdgeId> contraction_sequence;
    std::size_t loops = 0;                       // |E| - |V| + c(G)
    std::vector<RatioEstimate> ratios;           // of the first replicate
    std::vector<double> replicate_zetas;
    std::size_t samples_per_ratio = 0;
    double delta_per_sample = 0.0;
    std::uint64_t total_steps = 0;
    double wall_seconds = 0.0;
};

/// Lowest live non-loop edge first, contracting as we go, until every component is
/// a single vertex. Length |V| - c(G); |E| - |V| + c(G) loops remain.
std::vector<EdgeId> contraction_sequence(const OrientedMultigraph& g);

std::size_t default_samples_per_ratio(std::size_t t, double epsilon);
double default_delta_per_sample(std::size_t t, double epsilon);

/// Sampling plan for one ratio Z(G/e)/Z(G).
struct RatioPlan {
    SamplerKind sampler = SamplerKind::Flow;
    std::size_t samples = 1;
    double delta = 0.01;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;   // distinguishes ratios and replicates
    std::size_t threads = 1;
};

/// Estimates Z(G/e)/Z(G) from `plan.samples` independent delta-approximate flow
/// samples on g. Requires e a live non-loop edge and x in [1/3, 1). Throws
/// OutOfRange when the sampler's mixing bound does not apply at x.
RatioEstimate estimate_ratio(const OrientedMultigraph& g, const EvenGenSet& gens, EdgeId e,
                             Residue q, double x, const RatioPlan& plan);

/// Randomised approximation of Z_flow(G; q, x) by telescoping contraction ratios:
///     zeta = (1 + (q-1)x)^{|E|-|V|+c(G)} / prod_i Y^i.
EstimateReport estimate_z_flow(const OrientedMultigraph& g, const EvenGenSet& gens, Residue q,
                               double x, const EstimateConfig& cfg);

/// Z_Potts(G; q, w) = q^{|V|} (1-x)^{-|E|} Z_flow(G; q, x) with x = (w-1)/(w+q-1).
EstimateReport estimate_z_potts(const OrientedMultigraph& g, const EvenGenSet& gens, Residue q,
                                double w, const EstimateConfig& cfg);

}  // namespace pottsflow
