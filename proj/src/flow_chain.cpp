#include "pottsflow/flow_chain.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pottsflow/error.hpp"

namespace pottsflow {

MixingBound flow_mixing_time_bound(std::size_t r, double x, std::size_t d, std::size_t iota,
                                   double delta) {
    if (d < 2 || iota < 1) throw InvalidArgument("flow mixing bound needs d >= 2 and iota >= 1");
    if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("delta must lie in (0, 1)");
    if (r < 1) throw InvalidArgument("generating set is empty");
    MixingBound b;
    const double di = static_cast<double>(d);
    const double ii = static_cast<double>(iota);
    b.threshold = 1.0 - 2.0 / ((di + 1.0) * ii);
    b.xi = x - b.threshold;
    if (!(b.xi > 0.0) || !(x < 1.0)) return b;
    const double rr = static_cast<double>(r);
    b.in_range = true;
    b.real_bound = 4.0 * rr / (di * ii) * std::log(rr / delta) / b.xi;
    b.steps = static_cast<std::uint64_t>(std::ceil(b.real_bound));
    return b;
}

void heat_bath_distribution(std::span<const std::size_t> zero_counts, double x,
                            std::span<double> probabilities) {
    const std::size_t a_max = *std::max_element(zero_counts.begin(), zero_counts.end());
    double total = 0.0;
    for (std::size_t t = 0; t < zero_counts.size(); ++t) {
        probabilities[t] = std::pow(x, static_cast<double>(a_max - zero_counts[t]));
        total += probabilities[t];
    }
    for (double& p : probabilities) p /= total;
}

FlowChain::FlowChain(const EvenGenSet& gens, double x, Residue q)
    : gens_(&gens), x_(x), q_(q), counts_(q, 0), weights_(q, 0.0) {
    if (!(x > 0.0 && x < 1.0)) throw InvalidArgument("flow chain: x must lie in (0, 1)");
    if (q < 2) throw InvalidArgument("flow chain: q must be at least 2");
    if (gens.empty()) throw InvalidArgument("flow chain: generating set is empty");
    const std::size_t ell = gens.params().ell;
    powers_.resize(ell + 1);
    powers_[0] = 1.0;
    for (std::size_t k = 1; k <= ell; ++k) powers_[k] = powers_[k - 1] * x;
}

FlowSample sample_flow(const EvenGenSet& gens, double x, Residue q, std::size_t d, std::size_t iota,
                       double delta, Rng& rng, std::optional<std::uint64_t> steps_override) {
    FlowSample out{FlowState(gens.edge_capacity(), q),
                   flow_mixing_time_bound(gens.size(), x, d, iota, delta), 0};
    if (!out.bound.in_range && !steps_override) {
        std::ostringstream msg;
        msg << "x = " << x << " is not above the flow-chain threshold 1 - 2/((d+1) iota) = "
            << out.bound.threshold << " for d = " << d << ", iota = " << iota;
        throw OutOfRange(msg.str(), out.bound.threshold);
    }
    out.steps = steps_override ? *steps_override : out.bound.steps;
    FlowChain chain(gens, x, q);
    chain.run(out.flow, out.steps, rng);
    return out;
}

}  // namespace pottsflow
