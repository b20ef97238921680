#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "xorsat/gf2.hpp"
#include "xorsat/instance.hpp"
#include "xorsat/stripping.hpp"

namespace xorsat {

/// Degree-2 vertices v_0..v_t threaded through distinct edges e_0..e_t,
/// v_i lying in e_i and e_{i+1 mod t+1} and in no other edge.
struct FlippableCycle {
    std::vector<Vertex> vertices;
    std::vector<EdgeId> edges;
};

struct FlippableReport {
    std::vector<FlippableCycle> cycles;
    std::vector<Vertex> on_cycle_vertices;  // ascending
    bool disjoint = true;                   // no vertex on two cycles
    std::size_t total_mass = 0;             // |on_cycle_vertices|
    bool truncated = false;                 // enumeration stopped at the cap
    bool exhaustive = true;                 // cycles lists every flippable cycle
};

/// Vertices on at least one flippable cycle. Works on the auxiliary
/// multigraph (nodes = edges, one link per degree-2 vertex joining its two
/// edges); a link is on a cycle iff it is not a bridge. Degree-2 vertices
/// whose two incidences are in the same edge are ignored. O(n + m).
std::vector<Vertex> flippable_vertices(const Hypergraph& h);

/// All flippable cycles by exhaustive simple-cycle search; for small inputs.
FlippableReport enumerate_flippable_cycles(const Hypergraph& h, std::size_t cap);

/// Linear-time variant: cycles come from the biconnected blocks of the
/// auxiliary multigraph. When every non-bridge block is a single cycle the
/// report is exhaustive; otherwise disjoint is false and cycles is empty.
FlippableReport flippable_structure(const Hypergraph& h);

/// Subhypergraph induced by the core edges of pt; edge ids of the result
/// index into pt.core_edges.
Hypergraph core_subhypergraph(const Hypergraph& h, const ParallelTrace& pt);

/// Flippable cycles of the core-induced subhypergraph, reported in the edge
/// ids of h. Degrees are counted inside the core.
FlippableReport core_flippable(const Hypergraph& h, const ParallelTrace& pt, std::size_t cap);
FlippableReport core_flippable_structure(const Hypergraph& h, const ParallelTrace& pt);

enum class EnumerationMode { Elimination, BruteForce };

/// Every solution, sorted lexicographically. Elimination mode requires
/// 2^nullity <= limit; brute force requires n <= 25. Throws
/// std::length_error("too many solutions") otherwise.
std::vector<BitVec> enumerate_solutions(const XorsatInstance& inst, std::size_t limit,
                                        EnumerationMode mode = EnumerationMode::Elimination);

struct ClusterGeometry {
    std::vector<BitVec> solutions;
    std::vector<std::uint32_t> partition;  // cluster id per solution, by first appearance
    std::size_t cluster_count = 0;
    std::vector<std::size_t> cluster_sizes;
    std::size_t f_within = 0;                 // least f with every cluster f-connected
    std::optional<std::size_t> g_between;     // least distance across clusters
    std::optional<std::size_t> free_count;    // log2 of the common cluster size
};

/// Groups solutions agreeing on core vertices outside core cycles, then
/// measures connectivity of the solution graph G(solutions, f).
ClusterGeometry partition_clusters(std::vector<BitVec> solutions, std::span<const Vertex> core_vertices,
                                   std::span<const Vertex> core_cycle_vertices);

/// Components of G(solutions, f): solutions adjacent when at Hamming
/// distance at most f.
class ConnectivityProfile {
public:
    ConnectivityProfile(std::span<const BitVec> solutions, std::size_t f);

    std::size_t component_count() const { return count_; }
    std::uint32_t component_of(std::size_t i) const { return comp_[i]; }
    bool f_connected(std::span<const std::size_t> set) const;
    bool f_separated(std::span<const std::size_t> a, std::span<const std::size_t> b) const;

private:
    std::vector<std::uint32_t> comp_;
    std::size_t count_ = 0;
};

ConnectivityProfile connectivity_profile(std::span<const BitVec> solutions, std::size_t f);

}  // namespace xorsat
