#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "xorsat/instance.hpp"

namespace xorsat {

/// Result of the parallel k-stripping process: round i removes every vertex
/// of degree < k at once together with its incident edges.
struct ParallelTrace {
    unsigned k = 0;
    std::vector<std::vector<Vertex>> levels;  // levels[i-1] = S_i, ascending
    std::vector<std::uint32_t> level_of;      // i for v in S_i, 0 for core
    std::vector<Vertex> core_vertices;
    std::vector<EdgeId> core_edges;
    std::uint32_t i_max = 0;

    bool in_core(Vertex v) const { return level_of[v] == 0; }
};

ParallelTrace parallel_strip(const Hypergraph& h, unsigned k);

/// Simple digraph in CSR form, both directions. Arcs are deduplicated.
class Digraph {
public:
    Digraph() = default;
    Digraph(Vertex n, std::vector<std::pair<Vertex, Vertex>> arcs);

    Vertex num_nodes() const { return n_; }
    std::size_t num_arcs() const { return out_targets_.size(); }
    std::span<const Vertex> out(Vertex v) const {
        return {out_targets_.data() + out_off_[v], out_off_[v + 1] - out_off_[v]};
    }
    std::span<const Vertex> in(Vertex v) const {
        return {in_sources_.data() + in_off_[v], in_off_[v + 1] - in_off_[v]};
    }
    std::uint32_t in_degree(Vertex v) const { return in_off_[v + 1] - in_off_[v]; }
    std::uint32_t out_degree(Vertex v) const { return out_off_[v + 1] - out_off_[v]; }
    bool has_arc(Vertex from, Vertex to) const;
    std::vector<std::pair<Vertex, Vertex>> arcs() const;

private:
    Vertex n_ = 0;
    std::vector<std::uint32_t> out_off_{0}, in_off_{0};
    std::vector<Vertex> out_targets_, in_sources_;
};

/// One SLOW-STRIP step: edge removed on behalf of the vertex at the front.
struct EdgeRemoval {
    EdgeId edge;
    Vertex owner;
};

inline constexpr std::uint64_t kNever = std::numeric_limits<std::uint64_t>::max();

/// The stripping sequence produced by SLOW-STRIP with its digraph.
///
/// Steps count edge removals. front_step[v] is the number of removals done
/// when v reached the front of the queue (0 for the initial front), and
/// removal_step[v] the count when v was deleted. Both are kNever for core
/// vertices. t_of_level[i-1] = t(i), the front arrival of the first member
/// of S_i.
struct StripTrace {
    unsigned k = 0;
    std::vector<Vertex> psi;
    std::vector<std::uint32_t> psi_position;  // index into psi, or UINT32_MAX for core
    std::vector<std::uint32_t> level_of;      // parallel level, 0 for core
    std::vector<std::uint64_t> t_of_level;
    std::vector<std::uint64_t> front_step;
    std::vector<std::uint64_t> removal_step;
    std::vector<EdgeRemoval> removals;
    std::vector<std::uint32_t> owned_offsets;  // CSR over removals by owner
    std::vector<EdgeId> owned_edges;
    Digraph digraph;
    std::vector<Vertex> free_vertices;         // non-core, in-degree 0, ascending
    std::vector<std::uint8_t> core;            // 1 for core vertices

    Vertex num_vertices() const { return static_cast<Vertex>(level_of.size()); }
    bool in_core(Vertex v) const { return core[v] != 0; }
    bool is_free(Vertex v) const { return !in_core(v) && digraph.in_degree(v) == 0; }
    /// Node set of D(Psi): non-core vertices plus core vertices with an arc.
    bool in_digraph(Vertex v) const {
        return v < num_vertices() && (!in_core(v) || digraph.out_degree(v) > 0);
    }
    std::span<const EdgeId> edges_owned_by(Vertex v) const {
        return {owned_edges.data() + owned_offsets[v], owned_offsets[v + 1] - owned_offsets[v]};
    }
    std::uint32_t num_levels() const { return static_cast<std::uint32_t>(t_of_level.size()); }
};

/// FIFO SLOW-STRIP. Initial queue holds all light vertices ascending; a
/// removal that lightens several vertices enqueues them ascending; the front
/// vertex gives up its lowest-indexed remaining edge.
StripTrace slow_strip(const Hypergraph& h, unsigned k);

/// t(i) for each level, after checking both traces describe the same
/// stripping of one hypergraph. Throws std::invalid_argument otherwise.
std::vector<std::uint64_t> level_markers(const ParallelTrace& pt, const StripTrace& st);

std::vector<Vertex> reach_forward(const StripTrace& st, Vertex v);
/// T(w): vertices that can reach w.
std::vector<Vertex> reach_backward(const StripTrace& st, Vertex w);
/// T(w, u) = T(w) intersected with the forward closure of u.
std::vector<Vertex> restrict_reach(const StripTrace& st, Vertex w, Vertex u);

struct LastFree {
    std::uint32_t i_star;
    Vertex u_star;
};

/// Highest level holding a free vertex, and its lowest-indexed free member.
LastFree last_free(const StripTrace& st);

/// Reusable BFS scratch for many reachability queries on one digraph.
class ReachCounter {
public:
    explicit ReachCounter(const Digraph& g);
    std::size_t forward_size(Vertex v);
    /// Forward closure of v listed in BFS order (v first).
    std::span<const Vertex> forward(Vertex v);
    std::span<const Vertex> backward(Vertex v);

private:
    template <bool Forward>
    void bfs(Vertex v);

    const Digraph* g_;
    std::vector<std::uint32_t> stamp_;
    std::uint32_t epoch_ = 0;
    std::vector<Vertex> order_;
};

/// Replays psi against h and returns true when every vertex has degree < k
/// at its deletion (only edges owned by earlier-or-same vertices removed).
bool psi_replay_valid(const Hypergraph& h, const StripTrace& st);

}  // namespace xorsat
