#include "pottsflow/joint_chain.hpp"

#include <cmath>
#include <sstream>

#include "pottsflow/error.hpp"

namespace pottsflow {

JointState initial_joint_state(const OrientedMultigraph& g, Residue q) {
    return {zero_flow(g, q), EdgeSubset::all(g)};
}

bool support_within(const JointState& st) {
    for (EdgeId e = 0; e < st.flow.edge_capacity(); ++e)
        if (st.flow.in_support(e) && !st.edges.contains(e)) return false;
    return true;
}

namespace {

double joint_threshold(Residue q, std::size_t ell, std::size_t s) {
    const double qd = static_cast<double>(q);
    return 1.0 - qd / ((qd - 1.0) * static_cast<double>(ell) * static_cast<double>(s));
}

}  // namespace

JointParameters compute_p(double x, Residue q, std::size_t ell, std::size_t s, std::size_t m,
                          std::size_t r) {
    if (q < 2 || ell == 0 || s == 0 || m == 0 || r == 0)
        throw InvalidArgument("compute_p: q >= 2 and positive ell, s, m, r required");
    JointParameters out;
    out.threshold = joint_threshold(q, ell, s);
    if (!(x > out.threshold) || !(x < 1.0)) {
        std::ostringstream msg;
        msg << "x = " << x << " is not above the joint-chain threshold 1 - q/((q-1) ell s) = "
            << out.threshold;
        throw OutOfRange(msg.str(), out.threshold);
    }
    const double qd = q;
    const double rd = static_cast<double>(r);
    const double md = static_cast<double>(m);
    const double sd = static_cast<double>(s);
    const double ld = static_cast<double>(ell);
    const double slack = qd * rd * ld * (1.0 - x);
    const double denom = qd * rd + (qd - 1.0) * sd * md + qd * md + slack;
    out.p = (qd * rd + slack) / denom;
    out.alpha = (qd - (qd - 1.0) * ld * sd * (1.0 - x)) / denom;
    return out;
}

MixingBound joint_mixing_time_bound(std::size_t m, std::size_t r, double x, Residue q,
                                    std::size_t ell, std::size_t s, double delta) {
    if (ell < 3 || q < 2 || s < 2) throw InvalidArgument("joint mixing bound needs ell >= 3, q >= 2, s >= 2");
    if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("delta must lie in (0, 1)");
    MixingBound b;
    b.threshold = joint_threshold(q, ell, s);
    b.xi = x - b.threshold;
    if (!(b.xi > 0.0) || !(x < 1.0)) return b;
    const double md = static_cast<double>(m);
    const double rd = static_cast<double>(r);
    b.in_range = true;
    b.real_bound = 2.0 * (md + rd) / static_cast<double>(ell) * std::log((2.0 * md + rd) / delta) / b.xi;
    b.steps = static_cast<std::uint64_t>(std::ceil(b.real_bound));
    return b;
}

JointChain::JointChain(const OrientedMultigraph& g, const EvenGenSet& gens, double x, Residue q,
                       double p)
    : gens_(&gens), edges_(g.live_edges()), x_(x), q_(q), p_(p) {
    if (!(x > 0.0 && x < 1.0)) throw InvalidArgument("joint chain: x must lie in (0, 1)");
    if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("joint chain: p must lie in (0, 1)");
    if (q < 2) throw InvalidArgument("joint chain: q must be at least 2");
    if (edges_.empty() || gens.empty()) throw InvalidArgument("joint chain: needs edges and generators");
}

JointSample sample_joint(const OrientedMultigraph& g, const EvenGenSet& gens, double x, Residue q,
                         std::size_t ell, std::size_t s, double delta, Rng& rng,
                         std::optional<std::uint64_t> steps_override) {
    JointSample out{initial_joint_state(g, q), {}, {}, 0};
    out.bound = joint_mixing_time_bound(g.edge_count(), gens.size(), x, q, ell, s, delta);
    if (!out.bound.in_range && !steps_override) {
        std::ostringstream msg;
        msg << "x = " << x << " is not above the joint-chain threshold 1 - q/((q-1) ell s) = "
            << out.bound.threshold << " for ell = " << ell << ", s = " << s;
        throw OutOfRange(msg.str(), out.bound.threshold);
    }
    out.params = compute_p(x, q, ell, s, g.edge_count(), gens.size());
    out.steps = steps_override ? *steps_override : out.bound.steps;
    JointChain chain(g, gens, x, q, out.params.p);
    chain.run(out.state, out.steps, rng);
    return out;
}

}  // namespace pottsflow
