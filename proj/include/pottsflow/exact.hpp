#pragma once

// Brute-force ground truth on small instances: exact partition functions and
// measures, exact transition matrices assembled from the samplers' own step code,
// exact total-variation decay, and the sum-of-minima inequality used in the
// flow-chain coupling.

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pottsflow/couplings.hpp"
#include "pottsflow/error.hpp"
#include "pottsflow/flow.hpp"
#include "pottsflow/graph.hpp"
#include "pottsflow/joint_chain.hpp"

namespace pottsflow {

/// RandomSource that walks every outcome of a randomised procedure.
///
/// Each run replays a prefix of recorded choices and takes option 0 at every new
/// choice point; advance() moves to the next unexplored path. The procedure must
/// make the same choices (with the same arities) whenever it sees the same
/// earlier outcomes.
class BranchEnumerator {
public:
    std::size_t uniform_index(std::size_t n) {
        const std::size_t c = choose(n);
        prob_ /= static_cast<long double>(n);
        return c;
    }

    /// Option 0 is "true".
    bool bernoulli(double p) {
        const std::size_t c = choose(2);
        prob_ *= c == 0 ? static_cast<long double>(p) : 1.0L - static_cast<long double>(p);
        return c == 0;
    }

    std::size_t discrete(std::span<const double> weights) {
        long double total = 0.0L;
        for (double w : weights) total += w;
        const std::size_t c = choose(weights.size());
        prob_ *= static_cast<long double>(weights[c]) / total;
        return c;
    }

    long double probability() const noexcept { return prob_; }

    /// Calls visit(result, probability) for every outcome of run(source) with
    /// positive probability.
    template <class Run, class Visit>
    static void for_each_outcome(Run&& run, Visit&& visit) {
        BranchEnumerator src;
        do {
            src.depth_ = 0;
            src.prob_ = 1.0L;
            auto result = run(src);
            if (src.prob_ > 0.0L) visit(result, src.prob_);
        } while (src.advance());
    }

private:
    std::size_t choose(std::size_t arity) {
        if (depth_ == path_.size()) {
            path_.push_back(0);
            arity_.push_back(arity);
        }
        return path_[depth_++];
    }

    bool advance() {
        path_.resize(depth_);
        arity_.resize(depth_);
        while (!path_.empty() && path_.back() + 1 == arity_.back()) {
            path_.pop_back();
            arity_.pop_back();
        }
        if (path_.empty()) return false;
        ++path_.back();
        return true;
    }

    std::vector<std::size_t> path_;
    std::vector<std::size_t> arity_;
    std::size_t depth_ = 0;
    long double prob_ = 1.0L;
};

static_assert(RandomSource<BranchEnumerator>);

using StateKey = std::vector<std::uint32_t>;
using Distribution = std::map<StateKey, long double>;

template <class State>
using Weighted = std::vector<std::pair<State, long double>>;

StateKey flow_key(const FlowState& f);
StateKey subset_key(const EdgeSubset& f);
StateKey joint_key(const JointState& st);
StateKey potts_key(const PottsConfig& sigma);

long double total_variation(const Distribution& a, const Distribution& b);
long double max_abs_difference(const Distribution& a, const Distribution& b);

template <class State, class KeyFn>
Distribution to_distribution(const Weighted<State>& states, KeyFn key) {
    Distribution out;
    for (const auto& [s, p] : states) out[key(s)] += p;
    return out;
}

/// Law of run(state, source) when state is drawn from `input`, computed by
/// enumerating every outcome of the procedure's randomness.
template <class State, class Run, class KeyFn>
Distribution pushforward(const Weighted<State>& input, Run run, KeyFn key) {
    Distribution out;
    for (const auto& [s, p] : input) {
        BranchEnumerator::for_each_outcome([&](BranchEnumerator& src) { return run(s, src); },
                                           [&](const auto& result, long double q) { out[key(result)] += p * q; });
    }
    return out;
}

/// Default cap on the number of enumerated states.
inline constexpr std::size_t kEnumerationLimit = 1'000'000;

/// Visits every flow supported within F, parameterised by free values on the
/// non-forest edges of F. Throws TooLarge when q^{|F|-|V|+c(F)} exceeds `limit`.
void for_each_flow(const OrientedMultigraph& g, const EdgeSubset& f_edges, Residue q,
                   const std::function<void(const FlowState&)>& visit,
                   std::size_t limit = kEnumerationLimit);

/// Counts the flows supported within F by backtracking over all edge labellings of
/// F with a conservation check at each completed vertex. Independent of spanning
/// forests; exponential in |F|.
std::uint64_t count_flows_bruteforce(const OrientedMultigraph& g, const EdgeSubset& f_edges, Residue q);

long double exact_z_flow(const OrientedMultigraph& g, Residue q, long double x);
long double exact_z_potts(const OrientedMultigraph& g, Residue q, long double w);
long double exact_z_rc(const OrientedMultigraph& g, Residue q, long double y);

/// mu_flow(f) = x^{|supp f|} / Z_flow.
Weighted<FlowState> weighted_flows(const OrientedMultigraph& g, Residue q, double x);
/// mu_flow-RC(f, F) = x^{|F|} (1-x)^{|E \ F|} / Z_flow over pairs with supp f in F.
Weighted<JointState> weighted_joint_states(const OrientedMultigraph& g, Residue q, double x);
/// mu_RC(F) = q^{c(F)} y^{|F|} / Z_RC.
Weighted<EdgeSubset> weighted_subsets(const OrientedMultigraph& g, Residue q, double y);
/// mu_Potts(sigma) = w^{m(sigma)} / Z_Potts, m counting monochromatic edges (loops included).
Weighted<PottsConfig> weighted_colourings(const OrientedMultigraph& g, Residue q, double w);

struct IdentityReport {
    long double flow_side = 0.0L;    // q^{|V|} Z_flow(x)
    long double potts_side = 0.0L;   // (1-x)^{|E|} Z_Potts((1+(q-1)x)/(1-x))
    long double rc_side = 0.0L;      // (1-x)^{|E|} Z_RC(qx/(1-x))
    long double potts_rel_error = 0.0L;
    long double rc_rel_error = 0.0L;
    std::size_t subsets_checked = 0;
    std::size_t flow_count_failures = 0;
    std::string witness;             // first violated identity, empty when ok
    bool ok = true;
};

/// Checks the flow/Potts/random-cluster partition-function identities at x within
/// `tolerance` relative error, and |flows within F| = q^{|F|-|V|+c(F)} exactly for
/// every F when |E| <= max_subset_edges.
IdentityReport identity_suite(const OrientedMultigraph& g, Residue q, double x,
                              long double tolerance = 1e-9L, std::size_t max_subset_edges = 12);

/// Transition matrix over the states reachable from a start state, assembled by
/// enumerating every outcome of a step function. Rows are sorted by column.
struct SparseChain {
    std::vector<StateKey> states;
    std::map<StateKey, std::size_t> index;
    std::vector<std::vector<std::pair<std::size_t, long double>>> rows;
    std::size_t start = 0;

    std::size_t size() const noexcept { return states.size(); }
    long double entry(std::size_t i, std::size_t j) const;
};

inline constexpr std::size_t kChainStateLimit = 200'000;

template <class State, class KeyFn, class StepFn>
SparseChain assemble_chain(const State& start, KeyFn key, StepFn step,
                           std::size_t max_states = kChainStateLimit) {
    SparseChain chain;
    std::vector<State> seen_states{start};
    chain.states.push_back(key(start));
    chain.index.emplace(chain.states.back(), 0);
    for (std::size_t i = 0; i < seen_states.size(); ++i) {
        std::map<std::size_t, long double> row;
        const State current = seen_states[i];
        BranchEnumerator::for_each_outcome(
            [&](BranchEnumerator& src) {
                State next = current;
                step(next, src);
                return next;
            },
            [&](const State& next, long double p) {
                StateKey k = key(next);
                auto [it, inserted] = chain.index.emplace(k, chain.states.size());
                if (inserted) {
                    if (chain.states.size() >= max_states)
                        throw TooLarge("assemble_chain: more than " + std::to_string(max_states) + " states");
                    chain.states.push_back(std::move(k));
                    seen_states.push_back(next);
                }
                row[it->second] += p;
            });
        chain.rows.emplace_back(row.begin(), row.end());
    }
    return chain;
}

/// Exact flow chain on gens from `start` (zero flow by default).
SparseChain flow_chain_matrix(const OrientedMultigraph& g, const EvenGenSet& gens, Residue q, double x);
/// Exact joint chain from (0, E) with flow-move probability p.
SparseChain joint_chain_matrix(const OrientedMultigraph& g, const EvenGenSet& gens, Residue q, double x,
                               double p);

/// Target probabilities in chain order; mass of target states the chain never
/// reaches is returned in `unreached`.
std::vector<long double> align(const SparseChain& chain, const Distribution& target,
                               long double* unreached = nullptr);

long double max_row_sum_error(const SparseChain& chain);
/// max over i, j of |pi_i P_ij - pi_j P_ji|.
long double detailed_balance_error(const SparseChain& chain, std::span<const long double> pi);
/// || pi P - pi ||_1.
long double fixed_point_residual(const SparseChain& chain, std::span<const long double> pi);

/// TV(mu_t, pi) for t = 0..t_max where mu_0 is the point mass at the chain's start.
std::vector<long double> exact_tv_decay(const SparseChain& chain, const Distribution& target,
                                        std::size_t t_max);

struct SumOfMinimaResult {
    long double sum_of_minima = 0.0L;
    long double bound = 0.0L;  // 1 - (1 - x^iota)/(1 + x^iota)
    bool ok = false;
};

/// S = sum_i min( x^{-a_i}/sum_j x^{-a_j}, x^{-b_i}/sum_j x^{-b_j} ) against its
/// lower bound. Throws InvalidArgument unless sum a = sum b, sum |a_i - b_i| <= 2 iota,
/// both sequences have the same nonzero length and 0 < x < 1.
SumOfMinimaResult sum_of_minima_check(double x, std::size_t iota, std::span<const long long> a,
                            std::span<const long long> b);

struct SumOfMinimaSweep {
    std::size_t cases = 0;
    std::size_t failures = 0;
    long double min_slack = 0.0L;          // min of S - bound over all cases
    long double equality_max_error = 0.0L; // max |S - bound| at a = (iota, 0), b = (0, iota)
    bool ok = false;
};

/// sum_of_minima_check over every pair of sequences of length 2..max_length with entries
/// in [0, max_entry] meeting the constraints, every iota in 1..max_iota and every x
/// in `xs`, plus the two-entry equality case for every (iota, x).
SumOfMinimaSweep sum_of_minima_sweep(std::size_t max_length, long long max_entry, std::size_t max_iota,
                           std::span<const double> xs, long double tolerance = 1e-12L);

}  // namespace pottsflow
