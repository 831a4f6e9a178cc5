#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "pottsflow/graph.hpp"

namespace pottsflow {

/// One coordinate of a signed indicator vector.
struct SignedEdge {
    EdgeId edge;
    std::int8_t sign;  // +1 or -1

    bool operator==(const SignedEdge&) const = default;
};

/// Signed indicator vector chi_C of an even subgraph C, sorted by edge id.
class SignedEvenSet {
public:
    SignedEvenSet() = default;
    /// Sorts the entries; throws InvalidArgument on repeated edges or a sign not in {-1, +1}.
    explicit SignedEvenSet(std::vector<SignedEdge> entries);

    std::span<const SignedEdge> entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }
    int sign_of(EdgeId e) const;  // 0 when e is not in the support

    /// Drops coordinate e (C/e). No-op when e is not in the support.
    SignedEvenSet without(EdgeId e) const;

    bool operator==(const SignedEvenSet&) const = default;

private:
    std::vector<SignedEdge> entries_;
};

/// True when chi_C, read as an integer edge function on g, conserves at every live
/// vertex and touches only live edges.
bool is_integer_flow(const SignedEvenSet& c, const OrientedMultigraph& g);
/// True when every live vertex has even degree in the support (a loop counts twice).
bool has_even_support(const SignedEvenSet& c, const OrientedMultigraph& g);

/// Overlap parameters of a generating set.
struct GenParams {
    std::size_t d = 0;      // max number of other generators sharing an edge with one generator
    std::size_t iota = 0;   // max pairwise edge intersection
    std::size_t ell = 0;    // max generator size
    std::size_t s = 0;      // max number of generators covering one edge

    bool operator==(const GenParams&) const = default;
};

/// Even generating set with cached parameters and an edge -> generator index.
///
/// With a single generator (no pairs) d and iota are 0. A family bound may be
/// attached by lattice constructors: parameter values valid for every member of
/// the lattice family, which are what the mixing-time formulas consume.
class EvenGenSet {
public:
    EvenGenSet() = default;
    EvenGenSet(std::size_t edge_capacity, std::vector<SignedEvenSet> generators);

    std::size_t size() const noexcept { return generators_.size(); }
    bool empty() const noexcept { return generators_.empty(); }
    const SignedEvenSet& operator[](std::size_t i) const { return generators_.at(i); }
    const std::vector<SignedEvenSet>& generators() const noexcept { return generators_; }
    std::size_t edge_capacity() const noexcept { return covers_.size(); }

    /// Generator ids whose support contains e.
    std::span<const std::uint32_t> covering(EdgeId e) const { return covers_.at(e); }

    const GenParams& params() const noexcept { return params_; }

    const std::optional<GenParams>& family_bound() const noexcept { return family_bound_; }
    void set_family_bound(const GenParams& bound) { family_bound_ = bound; }

    /// Parameters to feed into mixing-time bounds: the family bound when present,
    /// otherwise the computed parameters raised to the minimum values the bounds
    /// accept (d >= 2, iota >= 1, ell >= 3, s >= 2).
    GenParams bound_params() const;

private:
    std::vector<SignedEvenSet> generators_;
    std::vector<std::vector<std::uint32_t>> covers_;
    GenParams params_;
    std::optional<GenParams> family_bound_;
};

/// Recomputes (d, iota, ell, s) from scratch.
GenParams compute_params(std::span<const SignedEvenSet> generators, std::size_t edge_capacity);

/// One signed cycle per non-forest live edge of the DFS spanning forest. A basis of
/// the integer flow space of any graph.
EvenGenSet fundamental_cycles(const OrientedMultigraph& g);

/// Whether every fundamental cycle of g lies in the integer span of the generators,
/// which makes the set generate the Z_q-flows for every q. Throws InvalidGenerator
/// when a generator is not an integer flow with even support on g.
bool verify_generates(const EvenGenSet& set, const OrientedMultigraph& g);

/// Each generator C replaced by C/e. Throws InvalidArgument when e is dead or a loop in g.
EvenGenSet contract_set(const EvenGenSet& set, const OrientedMultigraph& g, EdgeId e);

/// Text format: "r" then one line per generator "k  e1 s1 ... ek sk" with s in {+,-}.
EvenGenSet read_gens(std::istream& in, const OrientedMultigraph& g);
void write_gens(std::ostream& out, const EvenGenSet& set);

}  // namespace pottsflow
