#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "xorsat/geometry.hpp"
#include "xorsat/gf2.hpp"
#include "xorsat/instance.hpp"
#include "xorsat/stripping.hpp"

namespace xorsat {

/// Free variables of a cluster and the affine maps expressing every other
/// variable through them: x_v = z_v + sum of x_u over u in chi(v).
///
/// Non-core vertices are settled in reverse stripping order from the
/// equation removed on their behalf. Each core flippable cycle contributes
/// its minimum vertex as a free variable; flipping it flips the whole cycle.
/// Other core vertices are constant (chi empty).
struct FreeStructure {
    Vertex n = 0;
    std::vector<Vertex> free;            // ascending
    std::vector<std::uint8_t> is_free;
    std::vector<Vertex> elimination_order;
    std::vector<Vertex> rep_of;          // designated cycle vertex, or kNone
    std::vector<std::vector<Vertex>> cycles;
    std::vector<std::uint32_t> position;  // stripping position, UINT32_MAX for core

    /// x_v in terms of the other slots of its owned equation (CSR).
    std::vector<std::uint32_t> dep_offsets;
    std::vector<Vertex> deps;
    std::vector<EdgeId> owned;           // owned equation, or kNoEdge
    std::vector<std::uint32_t> dependent_offsets;
    std::vector<Vertex> dependents;

    /// Filled only when requested at construction.
    std::vector<std::vector<Vertex>> chi;  // sorted
    std::vector<std::uint8_t> z;           // empty without sigma

    static constexpr Vertex kNone = UINT32_MAX;
    static constexpr EdgeId kNoEdge = UINT32_MAX;

    std::span<const Vertex> deps_of(Vertex v) const {
        return {deps.data() + dep_offsets[v], dep_offsets[v + 1] - dep_offsets[v]};
    }
    std::span<const Vertex> dependents_of(Vertex v) const {
        return {dependents.data() + dependent_offsets[v], dependent_offsets[v + 1] - dependent_offsets[v]};
    }
    bool in_core(Vertex v) const { return position[v] == UINT32_MAX; }
};

class FreeStructureError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct FreeStructureOptions {
    bool compute_chi = true;
};

/// Requires k = 2, no vertex repeated inside one equation, pairwise disjoint
/// core cycles, and sigma (when given) satisfying every core equation.
FreeStructure free_structure(const XorsatInstance& inst, const StripTrace& st,
                             std::span<const FlippableCycle> cycles, const std::optional<BitVec>& sigma,
                             FreeStructureOptions opts = {});

/// Lexicographically least solution of the equations that survive stripping,
/// zero off the core; nullopt when those equations are inconsistent.
std::optional<BitVec> reference_core_assignment(const XorsatInstance& inst, const StripTrace& st);

/// {v : u in chi(v)}, sorted. Computed by propagating a flip of u, so it
/// does not need chi to be stored.
std::vector<Vertex> chi_inverse(const FreeStructure& fs, Vertex u);

/// chi(v) for every v of a set closed under deps (for instance T(w)).
/// Result is aligned with the input order.
std::vector<std::vector<Vertex>> chi_on_closed(const FreeStructure& fs, std::span<const Vertex> closed);

BitVec flip_free(const BitVec& solution, const FreeStructure& fs, Vertex u);

/// Extends a core assignment through the stripping order. free_choice is
/// read at non-core free vertices only; both vectors have length n.
BitVec extend_core_solution(const XorsatInstance& inst, const BitVec& sigma, const StripTrace& st,
                            const BitVec& free_choice);

/// Every solution of the cluster of sigma: all assignments to the free
/// variables pushed through the affine maps. Sorted lexicographically.
std::vector<BitVec> cluster_solutions(const FreeStructure& fs, std::size_t limit);

}  // namespace xorsat
