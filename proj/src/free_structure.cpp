#include "xorsat/free_structure.hpp"

#include <algorithm>
#include <numeric>

namespace xorsat {

namespace {

std::vector<Vertex> sym_diff(const std::vector<Vertex>& a, const std::vector<Vertex>& b) {
    std::vector<Vertex> out;
    std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

std::vector<std::uint8_t> core_edge_mask(const XorsatInstance& inst, const StripTrace& st) {
    std::vector<std::uint8_t> core(inst.num_equations(), 1);
    for (const auto& rm : st.removals) core[rm.edge] = 0;
    return core;
}

bool equation_holds(const XorsatInstance& inst, EdgeId e, const BitVec& x) {
    bool parity = inst.rhs[e] != 0;
    for (Vertex v : inst.graph.edge(e)) parity ^= x.get(v);
    return !parity;
}

// Processing order for a propagation: core first, then descending stripping position.
void order_for_propagation(const FreeStructure& fs, std::vector<Vertex>& vs) {
    std::sort(vs.begin(), vs.end(), [&](Vertex a, Vertex b) {
        if (fs.position[a] != fs.position[b]) return fs.position[a] > fs.position[b];
        return a < b;
    });
}

}  // namespace

FreeStructure free_structure(const XorsatInstance& inst, const StripTrace& st,
                             std::span<const FlippableCycle> cycles, const std::optional<BitVec>& sigma,
                             FreeStructureOptions opts) {
    if (st.k != 2) throw FreeStructureError("free structure needs the 2-stripping trace");
    const Vertex n = inst.num_vars();
    if (st.num_vertices() != n) throw FreeStructureError("trace does not match instance");
    for (EdgeId e = 0; e < inst.num_equations(); ++e) {
        auto ed = inst.graph.edge(e);
        std::vector<Vertex> s(ed.begin(), ed.end());
        std::sort(s.begin(), s.end());
        if (std::adjacent_find(s.begin(), s.end()) != s.end())
            throw FreeStructureError("variable repeated inside equation " + std::to_string(e));
    }

    FreeStructure fs;
    fs.n = n;
    fs.is_free.assign(n, 0);
    fs.rep_of.assign(n, FreeStructure::kNone);
    fs.owned.assign(n, FreeStructure::kNoEdge);
    fs.position = st.psi_position;

    // cycles: ascending by minimum vertex, designated vertex = minimum
    std::vector<std::vector<Vertex>> sorted_cycles;
    for (const auto& c : cycles) {
        std::vector<Vertex> vs = c.vertices;
        std::sort(vs.begin(), vs.end());
        for (Vertex v : vs) {
            if (v >= n || !st.in_core(v)) throw FreeStructureError("cycle vertex outside the core");
        }
        sorted_cycles.push_back(std::move(vs));
    }
    std::sort(sorted_cycles.begin(), sorted_cycles.end());
    for (const auto& vs : sorted_cycles) {
        for (Vertex v : vs) {
            if (fs.rep_of[v] != FreeStructure::kNone)
                throw FreeStructureError("overlapping core flippable cycles at vertex " + std::to_string(v));
            fs.rep_of[v] = vs.front();
        }
        fs.elimination_order.insert(fs.elimination_order.end(), vs.begin(), vs.end());
    }
    fs.cycles = std::move(sorted_cycles);

    if (sigma) {
        if (sigma->size() != n) throw FreeStructureError("sigma has wrong length");
        const auto core_eq = core_edge_mask(inst, st);
        for (EdgeId e = 0; e < inst.num_equations(); ++e)
            if (core_eq[e] && !equation_holds(inst, e, *sigma))
                throw FreeStructureError("sigma violates core equation " + std::to_string(e));
    }

    for (Vertex v = 0; v < n; ++v) {
        auto own = st.edges_owned_by(v);
        if (own.size() > 1) throw FreeStructureError("vertex owns several equations");
        if (!own.empty()) fs.owned[v] = own[0];
    }
    fs.dep_offsets.assign(static_cast<std::size_t>(n) + 1, 0);
    for (Vertex v = 0; v < n; ++v) {
        fs.dep_offsets[v + 1] = fs.dep_offsets[v];
        if (fs.owned[v] != FreeStructure::kNoEdge) fs.dep_offsets[v + 1] += inst.arity() - 1;
    }
    fs.deps.resize(fs.dep_offsets[n]);
    fs.dependent_offsets.assign(static_cast<std::size_t>(n) + 1, 0);
    for (Vertex v = 0; v < n; ++v) {
        if (fs.owned[v] == FreeStructure::kNoEdge) continue;
        std::uint32_t at = fs.dep_offsets[v];
        for (Vertex w : inst.graph.edge(fs.owned[v])) {
            if (w == v) continue;
            fs.deps[at++] = w;
            ++fs.dependent_offsets[w + 1];
        }
    }
    std::partial_sum(fs.dependent_offsets.begin(), fs.dependent_offsets.end(), fs.dependent_offsets.begin());
    fs.dependents.resize(fs.deps.size());
    {
        std::vector<std::uint32_t> fill(fs.dependent_offsets.begin(), fs.dependent_offsets.end() - 1);
        for (Vertex v = 0; v < n; ++v)
            for (Vertex w : fs.deps_of(v)) fs.dependents[fill[w]++] = v;
    }

    for (Vertex v = 0; v < n; ++v) {
        if (st.in_core(v)) {
            if (fs.rep_of[v] == v) fs.is_free[v] = 1;
        } else if (fs.owned[v] == FreeStructure::kNoEdge) {
            fs.is_free[v] = 1;
        }
        if (fs.is_free[v]) fs.free.push_back(v);
    }
    for (auto it = st.psi.rbegin(); it != st.psi.rend(); ++it) fs.elimination_order.push_back(*it);

    if (opts.compute_chi) {
        fs.chi.assign(n, {});
        for (Vertex v = 0; v < n; ++v)
            if (st.in_core(v) && fs.rep_of[v] != FreeStructure::kNone) fs.chi[v] = {fs.rep_of[v]};
        for (auto it = st.psi.rbegin(); it != st.psi.rend(); ++it) {
            const Vertex v = *it;
            if (fs.is_free[v]) {
                fs.chi[v] = {v};
                continue;
            }
            std::vector<Vertex> acc;
            for (Vertex w : fs.deps_of(v)) acc = sym_diff(acc, fs.chi[w]);
            fs.chi[v] = std::move(acc);
        }
    }

    if (sigma) {
        fs.z.assign(n, 0);
        for (Vertex v = 0; v < n; ++v) {
            if (!st.in_core(v)) continue;
            fs.z[v] = sigma->get(v);
            if (fs.rep_of[v] != FreeStructure::kNone) fs.z[v] ^= sigma->get(fs.rep_of[v]);
        }
        for (auto it = st.psi.rbegin(); it != st.psi.rend(); ++it) {
            const Vertex v = *it;
            if (fs.is_free[v]) continue;
            std::uint8_t b = inst.rhs[fs.owned[v]] & 1u;
            for (Vertex w : fs.deps_of(v)) b ^= fs.z[w];
            fs.z[v] = b;
        }
    }
    return fs;
}

std::optional<BitVec> reference_core_assignment(const XorsatInstance& inst, const StripTrace& st) {
    const auto core_eq = core_edge_mask(inst, st);
    std::vector<EdgeId> eqs;
    for (EdgeId e = 0; e < inst.num_equations(); ++e)
        if (core_eq[e]) eqs.push_back(e);
    const Elimination el = eliminate(Gf2System::from_equations(inst, eqs));
    return el.witness;
}

std::vector<Vertex> chi_inverse(const FreeStructure& fs, Vertex u) {
    if (u >= fs.n || !fs.is_free[u]) throw FreeStructureError("not a free variable: " + std::to_string(u));
    std::vector<Vertex> seeds;
    if (fs.in_core(u)) {
        for (const auto& c : fs.cycles)
            if (c.front() == u) seeds = c;
    } else {
        seeds = {u};
    }

    std::vector<std::uint8_t> seen(fs.n, 0), flipped(fs.n, 0);
    std::vector<Vertex> reach = seeds;
    for (Vertex s : seeds) seen[s] = 1;
    for (std::size_t i = 0; i < reach.size(); ++i)
        for (Vertex v : fs.dependents_of(reach[i]))
            if (!seen[v]) {
                seen[v] = 1;
                reach.push_back(v);
            }
    for (Vertex s : seeds) flipped[s] = 1;
    order_for_propagation(fs, reach);
    std::vector<Vertex> out;
    for (Vertex v : reach) {
        if (!flipped[v]) {
            std::uint8_t b = 0;
            for (Vertex w : fs.deps_of(v)) b ^= flipped[w];
            flipped[v] = b;
        }
        if (flipped[v]) out.push_back(v);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::vector<Vertex>> chi_on_closed(const FreeStructure& fs, std::span<const Vertex> closed) {
    std::vector<Vertex> order(closed.begin(), closed.end());
    order_for_propagation(fs, order);
    std::vector<std::uint32_t> slot(fs.n, UINT32_MAX);
    for (std::uint32_t i = 0; i < closed.size(); ++i) slot[closed[i]] = i;
    std::vector<std::vector<Vertex>> out(closed.size());
    for (Vertex v : order) {
        auto& cv = out[slot[v]];
        if (fs.is_free[v] && !fs.in_core(v)) {
            cv = {v};
        } else if (fs.in_core(v)) {
            if (fs.rep_of[v] != FreeStructure::kNone) cv = {fs.rep_of[v]};
        } else {
            for (Vertex w : fs.deps_of(v)) {
                if (slot[w] == UINT32_MAX) throw std::invalid_argument("vertex set not closed");
                cv = sym_diff(cv, out[slot[w]]);
            }
        }
    }
    return out;
}

BitVec flip_free(const BitVec& solution, const FreeStructure& fs, Vertex u) {
    BitVec out = solution;
    for (Vertex v : chi_inverse(fs, u)) out.flip(v);
    return out;
}

BitVec extend_core_solution(const XorsatInstance& inst, const BitVec& sigma, const StripTrace& st,
                            const BitVec& free_choice) {
    const Vertex n = inst.num_vars();
    if (sigma.size() != n || free_choice.size() != n) throw std::invalid_argument("assignment has wrong length");
    const auto core_eq = core_edge_mask(inst, st);
    for (EdgeId e = 0; e < inst.num_equations(); ++e)
        if (core_eq[e] && !equation_holds(inst, e, sigma))
            throw std::invalid_argument("sigma violates core equation " + std::to_string(e));

    BitVec x(n);
    for (Vertex v = 0; v < n; ++v)
        if (st.in_core(v)) x.set(v, sigma.get(v));
    for (auto it = st.psi.rbegin(); it != st.psi.rend(); ++it) {
        const Vertex v = *it;
        auto own = st.edges_owned_by(v);
        if (own.empty()) {
            x.set(v, free_choice.get(v));
            continue;
        }
        // other copies of v in the equation cancel in pairs
        bool b = inst.rhs[own[0]] != 0;
        unsigned mult = 0;
        for (Vertex w : inst.graph.edge(own[0])) {
            if (w == v) ++mult;
            else b ^= x.get(w);
        }
        if (mult % 2 == 0) throw std::invalid_argument("owned equation does not determine its vertex");
        x.set(v, b);
    }
    return x;
}

std::vector<BitVec> cluster_solutions(const FreeStructure& fs, std::size_t limit) {
    if (fs.chi.empty() || fs.z.empty()) throw std::invalid_argument("free structure lacks chi or z");
    const std::size_t f = fs.free.size();
    if (f >= 63 || (std::size_t{1} << f) > limit) throw std::length_error("too many solutions");
    std::vector<std::uint32_t> index(fs.n, UINT32_MAX);
    for (std::uint32_t i = 0; i < f; ++i) index[fs.free[i]] = i;
    std::vector<BitVec> out;
    for (std::size_t mask = 0; mask < (std::size_t{1} << f); ++mask) {
        BitVec x(fs.n);
        for (Vertex v = 0; v < fs.n; ++v) {
            bool b = fs.z[v] != 0;
            for (Vertex u : fs.chi[v]) b ^= (mask >> index[u]) & 1u;
            x.set(v, b);
        }
        out.push_back(std::move(x));
    }
    std::sort(out.begin(), out.end(), BitVec::lex_less);
    return out;
}

}  // namespace xorsat
