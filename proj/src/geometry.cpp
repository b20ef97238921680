#include "xorsat/geometry.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

namespace xorsat {

namespace {

// Auxiliary multigraph: node = hyperedge, link = degree-2 vertex.
struct AuxGraph {
    struct Link {
        EdgeId a, b;
        Vertex label;
    };
    std::vector<Link> links;
    std::vector<std::uint32_t> off;
    std::vector<std::uint32_t> adj;  // link ids

    explicit AuxGraph(const Hypergraph& h) {
        const EdgeId m = h.num_edges();
        for (Vertex v = 0; v < h.num_vertices(); ++v) {
            if (h.degree(v) != 2) continue;
            auto inc = h.incident(v);
            if (inc[0] == inc[1]) continue;  // both copies in one edge
            links.push_back({inc[0], inc[1], v});
        }
        off.assign(static_cast<std::size_t>(m) + 1, 0);
        for (const auto& l : links) {
            ++off[l.a + 1];
            ++off[l.b + 1];
        }
        std::partial_sum(off.begin(), off.end(), off.begin());
        adj.resize(links.size() * 2);
        std::vector<std::uint32_t> fill(off.begin(), off.end() - 1);
        for (std::uint32_t i = 0; i < links.size(); ++i) {
            adj[fill[links[i].a]++] = i;
            adj[fill[links[i].b]++] = i;
        }
    }

    std::uint32_t num_nodes() const { return static_cast<std::uint32_t>(off.size() - 1); }
    EdgeId other(std::uint32_t link, EdgeId node) const {
        return links[link].a == node ? links[link].b : links[link].a;
    }
};

// Iterative low-link DFS. Marks bridges and collects biconnected blocks
// (as link-id lists) when blocks is non-null.
void lowlink(const AuxGraph& g, std::vector<std::uint8_t>& bridge, std::vector<std::vector<std::uint32_t>>* blocks) {
    const std::uint32_t n = g.num_nodes();
    constexpr std::uint32_t kUnseen = UINT32_MAX;
    std::vector<std::uint32_t> disc(n, kUnseen), low(n, 0), next_adj(n, 0);
    bridge.assign(g.links.size(), 0);
    struct Frame {
        std::uint32_t node;
        std::uint32_t parent_link;
    };
    std::vector<Frame> stack;
    std::vector<std::uint32_t> link_stack;
    std::uint32_t clock = 0;

    for (std::uint32_t root = 0; root < n; ++root) {
        if (disc[root] != kUnseen) continue;
        disc[root] = low[root] = clock++;
        next_adj[root] = g.off[root];
        stack.push_back({root, UINT32_MAX});
        while (!stack.empty()) {
            Frame& f = stack.back();
            const std::uint32_t u = f.node;
            if (next_adj[u] < g.off[u + 1]) {
                const std::uint32_t l = g.adj[next_adj[u]++];
                if (l == f.parent_link) continue;
                const std::uint32_t w = g.other(l, u);
                if (disc[w] == kUnseen) {
                    disc[w] = low[w] = clock++;
                    next_adj[w] = g.off[w];
                    if (blocks) link_stack.push_back(l);
                    stack.push_back({w, l});
                } else if (disc[w] < disc[u]) {
                    low[u] = std::min(low[u], disc[w]);
                    if (blocks) link_stack.push_back(l);
                }
                continue;
            }
            const std::uint32_t pl = f.parent_link;
            stack.pop_back();
            if (stack.empty()) break;
            const std::uint32_t p = stack.back().node;
            low[p] = std::min(low[p], low[u]);
            if (low[u] > disc[p]) bridge[pl] = 1;
            if (blocks && low[u] >= disc[p]) {
                std::vector<std::uint32_t> block;
                for (;;) {
                    const std::uint32_t top = link_stack.back();
                    link_stack.pop_back();
                    block.push_back(top);
                    if (top == pl) break;
                }
                blocks->push_back(std::move(block));
            }
        }
    }
}

FlippableReport finish_report(std::vector<FlippableCycle> cycles) {
    FlippableReport rep;
    std::vector<Vertex> all;
    for (const auto& c : cycles) all.insert(all.end(), c.vertices.begin(), c.vertices.end());
    std::sort(all.begin(), all.end());
    rep.disjoint = std::adjacent_find(all.begin(), all.end()) == all.end();
    all.erase(std::unique(all.begin(), all.end()), all.end());
    rep.on_cycle_vertices = std::move(all);
    rep.total_mass = rep.on_cycle_vertices.size();
    rep.cycles = std::move(cycles);
    return rep;
}

// Orders a cycle block as e_0, v_0, e_1, v_1, ... starting from its lowest edge.
FlippableCycle walk_cycle(const AuxGraph& g, const std::vector<std::uint32_t>& block) {
    std::map<EdgeId, std::vector<std::uint32_t>> at;
    for (auto l : block) {
        at[g.links[l].a].push_back(l);
        at[g.links[l].b].push_back(l);
    }
    FlippableCycle c;
    const EdgeId start = at.begin()->first;
    auto& first_links = at.begin()->second;
    std::uint32_t link = g.links[first_links[0]].label < g.links[first_links[1]].label ? first_links[0] : first_links[1];
    EdgeId node = start;
    for (std::size_t i = 0; i < block.size(); ++i) {
        c.edges.push_back(node);
        c.vertices.push_back(g.links[link].label);
        node = g.other(link, node);
        const auto& here = at[node];
        link = here[0] == link ? here[1] : here[0];
    }
    return c;
}

FlippableReport remap_edges(FlippableReport rep, const std::vector<EdgeId>& edge_map) {
    for (auto& c : rep.cycles)
        for (auto& e : c.edges) e = edge_map[e];
    return rep;
}

}  // namespace

std::vector<Vertex> flippable_vertices(const Hypergraph& h) {
    AuxGraph g(h);
    std::vector<std::uint8_t> bridge;
    lowlink(g, bridge, nullptr);
    std::vector<Vertex> out;
    for (std::size_t i = 0; i < g.links.size(); ++i)
        if (!bridge[i]) out.push_back(g.links[i].label);
    std::sort(out.begin(), out.end());
    return out;
}

FlippableReport enumerate_flippable_cycles(const Hypergraph& h, std::size_t cap) {
    AuxGraph g(h);
    std::set<std::vector<std::uint32_t>> seen;
    std::vector<FlippableCycle> cycles;
    bool truncated = false;

    const std::uint32_t n = g.num_nodes();
    std::vector<std::uint8_t> on_path(n, 0), link_used(g.links.size(), 0);
    std::vector<std::uint32_t> path_nodes, path_links;

    // Cycles through start s whose other nodes all exceed s.
    auto search = [&](auto&& self, std::uint32_t s, std::uint32_t u) -> void {
        if (truncated) return;
        for (std::uint32_t i = g.off[u]; i < g.off[u + 1]; ++i) {
            const std::uint32_t l = g.adj[i];
            if (link_used[l]) continue;
            const std::uint32_t w = g.other(l, u);
            if (w == s && !path_links.empty()) {
                std::vector<std::uint32_t> key = path_links;
                key.push_back(l);
                std::sort(key.begin(), key.end());
                if (seen.insert(key).second) {
                    if (cycles.size() == cap) {
                        truncated = true;
                        return;
                    }
                    FlippableCycle c;
                    c.edges = path_nodes;
                    for (auto pl : path_links) c.vertices.push_back(g.links[pl].label);
                    c.vertices.push_back(g.links[l].label);
                    cycles.push_back(std::move(c));
                }
                continue;
            }
            if (w <= s || on_path[w]) continue;
            on_path[w] = 1;
            link_used[l] = 1;
            path_nodes.push_back(w);
            path_links.push_back(l);
            self(self, s, w);
            path_nodes.pop_back();
            path_links.pop_back();
            link_used[l] = 0;
            on_path[w] = 0;
            if (truncated) return;
        }
    };
    for (std::uint32_t s = 0; s < n && !truncated; ++s) {
        path_nodes.assign(1, s);
        path_links.clear();
        on_path[s] = 1;
        search(search, s, s);
        on_path[s] = 0;
    }

    FlippableReport rep = finish_report(std::move(cycles));
    rep.truncated = truncated;
    rep.exhaustive = !truncated;
    return rep;
}

FlippableReport flippable_structure(const Hypergraph& h) {
    AuxGraph g(h);
    std::vector<std::uint8_t> bridge;
    std::vector<std::vector<std::uint32_t>> blocks;
    lowlink(g, bridge, &blocks);

    std::vector<FlippableCycle> cycles;
    bool simple_blocks = true;
    for (const auto& block : blocks) {
        if (block.size() < 2) continue;
        std::vector<EdgeId> nodes;
        for (auto l : block) {
            nodes.push_back(g.links[l].a);
            nodes.push_back(g.links[l].b);
        }
        std::sort(nodes.begin(), nodes.end());
        nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
        if (nodes.size() == block.size()) cycles.push_back(walk_cycle(g, block));
        else simple_blocks = false;
    }
    std::sort(cycles.begin(), cycles.end(), [](const auto& a, const auto& b) { return a.edges[0] < b.edges[0]; });

    FlippableReport rep;
    if (simple_blocks) {
        rep = finish_report(std::move(cycles));
    } else {
        rep.disjoint = false;
        rep.exhaustive = false;
    }
    rep.on_cycle_vertices.clear();
    for (std::size_t i = 0; i < g.links.size(); ++i)
        if (!bridge[i]) rep.on_cycle_vertices.push_back(g.links[i].label);
    std::sort(rep.on_cycle_vertices.begin(), rep.on_cycle_vertices.end());
    rep.total_mass = rep.on_cycle_vertices.size();
    return rep;
}

Hypergraph core_subhypergraph(const Hypergraph& h, const ParallelTrace& pt) {
    return h.with_edges(pt.core_edges);
}

FlippableReport core_flippable(const Hypergraph& h, const ParallelTrace& pt, std::size_t cap) {
    return remap_edges(enumerate_flippable_cycles(core_subhypergraph(h, pt), cap), pt.core_edges);
}

FlippableReport core_flippable_structure(const Hypergraph& h, const ParallelTrace& pt) {
    return remap_edges(flippable_structure(core_subhypergraph(h, pt)), pt.core_edges);
}

std::vector<BitVec> enumerate_solutions(const XorsatInstance& inst, std::size_t limit, EnumerationMode mode) {
    const std::size_t n = inst.num_vars();
    std::vector<BitVec> out;
    if (mode == EnumerationMode::Elimination) {
        const Elimination el = eliminate(Gf2System::from_instance(inst));
        if (!el.satisfiable()) return out;
        if (el.nullity >= 63 || (std::size_t{1} << el.nullity) > limit) throw std::length_error("too many solutions");
        const std::size_t count = std::size_t{1} << el.nullity;
        out.reserve(count);
        BitVec x = *el.witness;
        out.push_back(x);
        for (std::size_t i = 1; i < count; ++i) {
            x ^= el.nullspace[static_cast<std::size_t>(std::countr_zero(i))];  // Gray code step
            out.push_back(x);
        }
        std::sort(out.begin(), out.end(), BitVec::lex_less);
        return out;
    }

    if (n > 25) throw std::length_error("too many solutions");
    std::vector<std::uint32_t> masks;
    masks.reserve(inst.num_equations());
    for (EdgeId e = 0; e < inst.num_equations(); ++e) {
        std::uint32_t mask = 0;
        for (Vertex v : inst.graph.edge(e)) mask ^= std::uint32_t{1} << (n - 1 - v);
        masks.push_back(mask);
    }
    const std::uint32_t total = std::uint32_t{1} << n;
    for (std::uint32_t code = 0; code < total; ++code) {
        bool ok = true;
        for (EdgeId e = 0; e < masks.size() && ok; ++e)
            ok = static_cast<bool>(std::popcount(code & masks[e]) & 1) == (inst.rhs[e] != 0);
        if (!ok) continue;
        if (out.size() == limit) throw std::length_error("too many solutions");
        BitVec x(n);
        for (std::size_t i = 0; i < n; ++i)
            if ((code >> (n - 1 - i)) & 1u) x.set(i);
        out.push_back(std::move(x));
    }
    return out;
}

namespace {

struct DisjointSets {
    std::vector<std::uint32_t> parent;
    explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0u); }
    std::uint32_t find(std::uint32_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    bool unite(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[std::max(a, b)] = std::min(a, b);
        return true;
    }
};

struct WeightedLink {
    std::size_t weight;
    std::uint32_t a, b;
};

// Prim on the complete Hamming graph; O(N^2) time, O(N) memory.
std::vector<WeightedLink> hamming_mst(std::span<const BitVec> sols) {
    const std::size_t n = sols.size();
    std::vector<WeightedLink> tree;
    if (n < 2) return tree;
    std::vector<std::size_t> best(n, SIZE_MAX);
    std::vector<std::uint32_t> from(n, 0);
    std::vector<std::uint8_t> in_tree(n, 0);
    std::uint32_t cur = 0;
    in_tree[0] = 1;
    for (std::size_t added = 1; added < n; ++added) {
        std::uint32_t pick = UINT32_MAX;
        for (std::uint32_t j = 0; j < n; ++j) {
            if (in_tree[j]) continue;
            const std::size_t d = BitVec::hamming(sols[cur], sols[j]);
            if (d < best[j]) {
                best[j] = d;
                from[j] = cur;
            }
            if (pick == UINT32_MAX || best[j] < best[pick]) pick = j;
        }
        in_tree[pick] = 1;
        tree.push_back({best[pick], from[pick], pick});
        cur = pick;
    }
    return tree;
}

}  // namespace

ClusterGeometry partition_clusters(std::vector<BitVec> solutions, std::span<const Vertex> core_vertices,
                                   std::span<const Vertex> core_cycle_vertices) {
    ClusterGeometry geo;
    geo.solutions = std::move(solutions);
    const auto& sols = geo.solutions;
    const std::size_t count = sols.size();
    if (count == 0) return geo;

    const std::size_t nbits = sols[0].size();
    BitVec mask(nbits);
    for (Vertex v : core_vertices) mask.set(v);
    for (Vertex v : core_cycle_vertices) mask.set(v, false);

    std::map<std::vector<std::uint64_t>, std::uint32_t> ids;
    geo.partition.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        std::vector<std::uint64_t> key(sols[i].words().begin(), sols[i].words().end());
        for (std::size_t w = 0; w < key.size(); ++w) key[w] &= mask.words()[w];
        auto [it, fresh] = ids.emplace(std::move(key), static_cast<std::uint32_t>(ids.size()));
        geo.partition[i] = it->second;
        if (fresh) geo.cluster_sizes.push_back(0);
        ++geo.cluster_sizes[it->second];
    }
    geo.cluster_count = ids.size();

    const std::size_t size0 = geo.cluster_sizes[0];
    if (std::all_of(geo.cluster_sizes.begin(), geo.cluster_sizes.end(), [&](auto s) { return s == size0; }) &&
        std::has_single_bit(size0))
        geo.free_count = static_cast<std::size_t>(std::countr_zero(size0));

    // Components of G(solutions, f) are those of the MST links of weight <= f.
    auto tree = hamming_mst(sols);
    std::sort(tree.begin(), tree.end(), [](auto& x, auto& y) { return x.weight < y.weight; });
    DisjointSets ds(count);
    auto clusters_connected = [&] {
        std::vector<std::uint32_t> root(geo.cluster_count, UINT32_MAX);
        for (std::uint32_t i = 0; i < count; ++i) {
            const auto r = ds.find(i);
            auto& slot = root[geo.partition[i]];
            if (slot == UINT32_MAX) slot = r;
            else if (slot != r) return false;
        }
        return true;
    };
    geo.f_within = 0;
    std::size_t i = 0;
    while (!clusters_connected()) {
        const std::size_t w = tree[i].weight;
        while (i < tree.size() && tree[i].weight == w) {
            ds.unite(tree[i].a, tree[i].b);
            ++i;
        }
        geo.f_within = w;
    }

    if (geo.cluster_count > 1) {
        std::size_t best = SIZE_MAX;
        for (std::size_t a = 0; a < count && best > 1; ++a)
            for (std::size_t b = a + 1; b < count; ++b)
                if (geo.partition[a] != geo.partition[b]) best = std::min(best, BitVec::hamming(sols[a], sols[b]));
        geo.g_between = best;
    }
    return geo;
}

ConnectivityProfile::ConnectivityProfile(std::span<const BitVec> solutions, std::size_t f) {
    const std::size_t n = solutions.size();
    DisjointSets ds(n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            if (BitVec::hamming(solutions[a], solutions[b]) <= f) ds.unite(static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b));
    std::map<std::uint32_t, std::uint32_t> relabel;
    comp_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto [it, _] = relabel.emplace(ds.find(static_cast<std::uint32_t>(i)), static_cast<std::uint32_t>(relabel.size()));
        comp_[i] = it->second;
    }
    count_ = relabel.size();
}

bool ConnectivityProfile::f_connected(std::span<const std::size_t> set) const {
    return std::all_of(set.begin(), set.end(), [&](std::size_t i) { return comp_[i] == comp_[set.front()]; });
}

bool ConnectivityProfile::f_separated(std::span<const std::size_t> a, std::span<const std::size_t> b) const {
    for (auto i : a)
        for (auto j : b)
            if (comp_[i] == comp_[j]) return false;
    return true;
}

ConnectivityProfile connectivity_profile(std::span<const BitVec> solutions, std::size_t f) {
    return ConnectivityProfile(solutions, f);
}

}  // namespace xorsat
