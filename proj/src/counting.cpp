#include "pottsflow/counting.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <sstream>
#include <thread>

#include "pottsflow/couplings.hpp"
#include "pottsflow/error.hpp"
#include "pottsflow/flow_chain.hpp"
#include "pottsflow/joint_chain.hpp"

namespace pottsflow {

namespace {

// Samples are grouped in fixed blocks, one RNG stream per block, so the result
// does not depend on the thread count.
constexpr std::size_t kBlockSize = 256;

void require_estimator_range(double x) {
    if (!(x >= 1.0 / 3.0 && x < 1.0)) {
        std::ostringstream msg;
        msg << "x = " << x << " outside [1/3, 1) required by the contraction-ratio estimator";
        throw OutOfRange(msg.str(), 1.0 / 3.0);
    }
}

struct PerSampleSteps {
    std::uint64_t steps = 0;
    double p = 0.0;
};

PerSampleSteps plan_steps(const OrientedMultigraph& g, const EvenGenSet& gens, Residue q, double x,
                          SamplerKind sampler, double delta) {
    if (gens.empty()) return {};
    const GenParams bp = gens.bound_params();
    PerSampleSteps out;
    MixingBound bound;
    if (sampler == SamplerKind::Flow) {
        bound = flow_mixing_time_bound(gens.size(), x, bp.d, bp.iota, delta);
    } else {
        bound = joint_mixing_time_bound(g.edge_count(), gens.size(), x, q, bp.ell, bp.s, delta);
    }
    if (!bound.in_range) {
        std::ostringstream msg;
        msg << "x = " << x << " is not above the " << (sampler == SamplerKind::Flow ? "flow" : "joint")
            << "-chain threshold " << bound.threshold;
        throw OutOfRange(msg.str(), bound.threshold);
    }
    out.steps = bound.steps;
    if (sampler == SamplerKind::Joint) out.p = compute_p(x, q, bp.ell, bp.s, g.edge_count(), gens.size()).p;
    return out;
}

}  // namespace

std::vector<EdgeId> contraction_sequence(const OrientedMultigraph& g) {
    std::vector<EdgeId> seq;
    OrientedMultigraph cur = g;
    for (EdgeId e = 0; e < cur.edge_capacity(); ++e) {
        // Contracting e only turns edges into loops, so a single pass in id order
        // finds the lowest live non-loop edge at every stage.
        if (!cur.edge_live(e) || cur.is_loop(e)) continue;
        seq.push_back(e);
        cur = cur.contract(e);
    }
    return seq;
}

std::size_t default_samples_per_ratio(std::size_t t, double epsilon) {
    return static_cast<std::size_t>(std::ceil(48.0 * static_cast<double>(t) / (epsilon * epsilon)));
}

double default_delta_per_sample(std::size_t t, double epsilon) {
    return epsilon / (16.0 * static_cast<double>(std::max<std::size_t>(t, 1)));
}

RatioEstimate estimate_ratio(const OrientedMultigraph& g, const EvenGenSet& gens, EdgeId e,
                             Residue q, double x, const RatioPlan& plan) {
    if (!g.edge_live(e) || g.is_loop(e))
        throw InvalidArgument("estimate_ratio: edge " + std::to_string(e) + " must be a live non-loop edge");
    require_estimator_range(x);
    if (plan.samples == 0) throw InvalidArgument("estimate_ratio: need at least one sample");

    const PerSampleSteps steps = plan_steps(g, gens, q, x, plan.sampler, plan.delta);
    const std::size_t blocks = (plan.samples + kBlockSize - 1) / kBlockSize;
    std::vector<std::size_t> zero_counts(blocks, 0);

    auto run_block = [&](std::size_t block) {
        Rng rng = Rng::stream(plan.seed, StreamPurpose::Estimator, plan.stream, block);
        const std::size_t begin = block * kBlockSize;
        const std::size_t end = std::min(plan.samples, begin + kBlockSize);
        std::size_t zeros = 0;
        if (gens.empty()) {
            zeros = end - begin;  // the zero flow is the only flow
        } else if (plan.sampler == SamplerKind::Flow) {
            FlowChain chain(gens, x, q);
            for (std::size_t j = begin; j < end; ++j) {
                FlowState f = zero_flow(g, q);
                chain.run(f, steps.steps, rng);
                zeros += !f.in_support(e);
            }
        } else {
            JointChain chain(g, gens, x, q, steps.p);
            for (std::size_t j = begin; j < end; ++j) {
                JointState st = initial_joint_state(g, q);
                chain.run(st, steps.steps, rng);
                zeros += !st.flow.in_support(e);
            }
        }
        zero_counts[block] = zeros;
    };

    const std::size_t threads = std::clamp<std::size_t>(plan.threads, 1, blocks);
    if (threads == 1) {
        for (std::size_t b = 0; b < blocks; ++b) run_block(b);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (std::size_t i = 0; i < threads; ++i) {
            pool.emplace_back([&] {
                for (std::size_t b = next++; b < blocks; b = next++) run_block(b);
            });
        }
        for (auto& th : pool) th.join();
    }

    RatioEstimate out;
    out.edge = e;
    out.samples = plan.samples;
    out.steps_per_sample = steps.steps;
    for (std::size_t z : zero_counts) out.zero_on_edge += z;
    const double zero_fraction = static_cast<double>(out.zero_on_edge) / static_cast<double>(plan.samples);
    out.y = 1.0 / x - (1.0 - x) / x * zero_fraction;
    return out;
}

EstimateReport estimate_z_flow(const OrientedMultigraph& g, const EvenGenSet& gens, Residue q,
                               double x, const EstimateConfig& cfg) {
    const auto started = std::chrono::steady_clock::now();
    if (q < 2) throw InvalidArgument("q must be at least 2");
    if (!(cfg.epsilon > 0.0 && cfg.epsilon < 1.0)) throw InvalidArgument("epsilon must lie in (0, 1)");
    if (cfg.median_of == 0) throw InvalidArgument("median_of must be positive");
    require_estimator_range(x);

    EstimateReport report;
    report.contraction_sequence = contraction_sequence(g);
    report.loops = cycle_rank(g);
    const std::size_t t = report.contraction_sequence.size();
    report.samples_per_ratio = cfg.samples_per_ratio.value_or(default_samples_per_ratio(t, cfg.epsilon));
    report.delta_per_sample = cfg.delta_per_sample.value_or(default_delta_per_sample(t, cfg.epsilon));
    if (!(report.delta_per_sample > 0.0 && report.delta_per_sample < 1.0))
        throw InvalidArgument("delta per sample must lie in (0, 1)");

    // Fail before any sampling when the chain cannot be run at x on G itself;
    // contraction never increases the generating-set parameters.
    if (t > 0) plan_steps(g, gens, q, x, cfg.sampler, report.delta_per_sample);

    std::vector<OrientedMultigraph> graphs{g};
    std::vector<EvenGenSet> sets{gens};
    for (EdgeId e : report.contraction_sequence) {
        sets.push_back(contract_set(sets.back(), graphs.back(), e));
        graphs.push_back(graphs.back().contract(e));
    }

    const double log_top = static_cast<double>(report.loops) * std::log1p((q - 1.0) * x);
    for (std::size_t k = 0; k < cfg.median_of; ++k) {
        double log_product = 0.0;
        std::vector<RatioEstimate> ratios;
        for (std::size_t i = 0; i < t; ++i) {
            RatioPlan plan;
            plan.sampler = cfg.sampler;
            plan.samples = report.samples_per_ratio;
            plan.delta = report.delta_per_sample;
            plan.seed = cfg.seed;
            plan.stream = k * t + i;
            plan.threads = cfg.threads;
            RatioEstimate est = estimate_ratio(graphs[i], sets[i], report.contraction_sequence[i], q, x, plan);
            log_product += std::log(est.y);
            report.total_steps += est.steps_per_sample * est.samples;
            ratios.push_back(est);
        }
        report.replicate_zetas.push_back(std::exp(log_top - log_product));
        if (k == 0) report.ratios = std::move(ratios);
    }
    std::vector<double> sorted = report.replicate_zetas;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    report.zeta = n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
    report.log_zeta = std::log(report.zeta);
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return report;
}

EstimateReport estimate_z_potts(const OrientedMultigraph& g, const EvenGenSet& gens, Residue q,
                                double w, const EstimateConfig& cfg) {
    if (!(w > 1.0)) {
        std::ostringstream msg;
        msg << "w = " << w << " maps to x = 0; the estimator needs x >= 1/3, i.e. w >= " << (q + 2.0) / 2.0;
        throw OutOfRange(msg.str(), 1.0 / 3.0);
    }
    const double x = param_map::flow_from_potts(w, q);
    EstimateReport report = estimate_z_flow(g, gens, q, x, cfg);
    const double log_factor = static_cast<double>(g.vertex_count()) * std::log(static_cast<double>(q)) -
                              static_cast<double>(g.edge_count()) * std::log1p(-x);
    for (double& z : report.replicate_zetas) z *= std::exp(log_factor);
    report.log_zeta += log_factor;
    report.zeta = std::exp(report.log_zeta);
    return report;
}

}  // namespace pottsflow
