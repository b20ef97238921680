#include "xorsat/stripping.hpp"

#include <algorithm>
#include <stdexcept>

namespace xorsat {

namespace {

void check_k(unsigned k) {
    if (k < 2) throw std::invalid_argument("stripping needs k >= 2");
}

}  // namespace

ParallelTrace parallel_strip(const Hypergraph& h, unsigned k) {
    check_k(k);
    const Vertex n = h.num_vertices();
    ParallelTrace pt;
    pt.k = k;
    pt.level_of.assign(n, 0);

    std::vector<std::uint32_t> deg(n);
    std::vector<std::uint8_t> edge_alive(h.num_edges(), 1);
    std::vector<std::uint8_t> flagged(n, 0);
    std::vector<Vertex> current;
    for (Vertex v = 0; v < n; ++v) {
        deg[v] = h.degree(v);
        if (deg[v] < k) {
            current.push_back(v);
            flagged[v] = 1;
        }
    }

    std::uint32_t level = 0;
    while (!current.empty()) {
        ++level;
        for (Vertex v : current) pt.level_of[v] = level;
        std::vector<Vertex> next;
        for (Vertex v : current) {
            for (EdgeId e : h.incident(v)) {
                if (!edge_alive[e]) continue;
                edge_alive[e] = 0;
                for (Vertex w : h.edge(e)) {
                    --deg[w];
                    if (!flagged[w] && deg[w] < k) {
                        flagged[w] = 1;
                        next.push_back(w);
                    }
                }
            }
        }
        std::sort(next.begin(), next.end());
        pt.levels.push_back(std::move(current));
        current = std::move(next);
    }
    pt.i_max = level;
    for (Vertex v = 0; v < n; ++v)
        if (pt.level_of[v] == 0) pt.core_vertices.push_back(v);
    for (EdgeId e = 0; e < h.num_edges(); ++e)
        if (edge_alive[e]) pt.core_edges.push_back(e);
    return pt;
}

Digraph::Digraph(Vertex n, std::vector<std::pair<Vertex, Vertex>> arcs) : n_(n) {
    std::sort(arcs.begin(), arcs.end());
    arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());
    out_off_.assign(static_cast<std::size_t>(n) + 1, 0);
    in_off_.assign(static_cast<std::size_t>(n) + 1, 0);
    for (auto [a, b] : arcs) {
        if (a >= n || b >= n) throw std::invalid_argument("digraph: arc endpoint out of range");
        ++out_off_[a + 1];
        ++in_off_[b + 1];
    }
    for (Vertex v = 0; v < n; ++v) {
        out_off_[v + 1] += out_off_[v];
        in_off_[v + 1] += in_off_[v];
    }
    out_targets_.resize(arcs.size());
    in_sources_.resize(arcs.size());
    std::vector<std::uint32_t> fill_out(out_off_.begin(), out_off_.end() - 1);
    std::vector<std::uint32_t> fill_in(in_off_.begin(), in_off_.end() - 1);
    // arcs are sorted by (from, to), so both adjacency lists come out sorted
    for (auto [a, b] : arcs) out_targets_[fill_out[a]++] = b;
    std::sort(arcs.begin(), arcs.end(), [](auto& x, auto& y) {
        return std::pair(x.second, x.first) < std::pair(y.second, y.first);
    });
    for (auto [a, b] : arcs) in_sources_[fill_in[b]++] = a;
}

bool Digraph::has_arc(Vertex from, Vertex to) const {
    auto o = out(from);
    return std::binary_search(o.begin(), o.end(), to);
}

std::vector<std::pair<Vertex, Vertex>> Digraph::arcs() const {
    std::vector<std::pair<Vertex, Vertex>> out_arcs;
    out_arcs.reserve(num_arcs());
    for (Vertex v = 0; v < n_; ++v)
        for (Vertex w : out(v)) out_arcs.emplace_back(v, w);
    return out_arcs;
}

StripTrace slow_strip(const Hypergraph& h, unsigned k) {
    check_k(k);
    const Vertex n = h.num_vertices();
    StripTrace st;
    st.k = k;
    st.level_of.assign(n, 0);
    st.front_step.assign(n, kNever);
    st.removal_step.assign(n, kNever);
    st.psi_position.assign(n, UINT32_MAX);
    st.core.assign(n, 1);

    std::vector<std::uint32_t> deg(n);
    std::vector<std::uint8_t> edge_alive(h.num_edges(), 1);
    std::vector<std::uint8_t> queued(n, 0);
    std::vector<std::uint32_t> cursor(n, 0);  // first possibly-live incidence
    std::vector<Vertex> queue;
    queue.reserve(n);
    for (Vertex v = 0; v < n; ++v) {
        deg[v] = h.degree(v);
        if (deg[v] < k) {
            queue.push_back(v);
            queued[v] = 1;
            st.level_of[v] = 1;
        }
    }

    std::vector<std::pair<Vertex, Vertex>> arcs;
    std::vector<Vertex> lightened;
    std::uint64_t steps = 0;
    std::size_t head = 0;
    auto arrive = [&] {
        if (head < queue.size() && st.front_step[queue[head]] == kNever) st.front_step[queue[head]] = steps;
    };

    arrive();
    for (;;) {
        while (head < queue.size() && deg[queue[head]] == 0) {
            const Vertex v = queue[head++];
            st.removal_step[v] = steps;
            st.psi_position[v] = static_cast<std::uint32_t>(st.psi.size());
            st.psi.push_back(v);
            st.core[v] = 0;
            arrive();
        }
        if (head == queue.size()) break;

        const Vertex v = queue[head];
        auto inc = h.incident(v);
        while (!edge_alive[inc[cursor[v]]]) ++cursor[v];
        const EdgeId e = inc[cursor[v]];
        edge_alive[e] = 0;
        ++steps;
        st.removals.push_back({e, v});

        lightened.clear();
        for (Vertex w : h.edge(e)) {
            if (w != v) arcs.emplace_back(w, v);
            --deg[w];
            if (!queued[w] && deg[w] < k) {
                queued[w] = 1;
                st.level_of[w] = st.level_of[v] + 1;
                lightened.push_back(w);
            }
        }
        std::sort(lightened.begin(), lightened.end());
        queue.insert(queue.end(), lightened.begin(), lightened.end());
    }

    for (Vertex v = 0; v < n; ++v)
        if (st.core[v]) st.level_of[v] = 0;
    // queue order is level order, so the first member of each level seen is
    // the first of S_i to reach the front
    for (Vertex v : queue) {
        const std::uint32_t lvl = st.level_of[v];
        if (lvl > st.t_of_level.size()) st.t_of_level.push_back(st.front_step[v]);
    }

    st.owned_offsets.assign(static_cast<std::size_t>(n) + 1, 0);
    for (const auto& rm : st.removals) ++st.owned_offsets[rm.owner + 1];
    for (Vertex v = 0; v < n; ++v) st.owned_offsets[v + 1] += st.owned_offsets[v];
    st.owned_edges.resize(st.removals.size());
    {
        std::vector<std::uint32_t> fill(st.owned_offsets.begin(), st.owned_offsets.end() - 1);
        for (const auto& rm : st.removals) st.owned_edges[fill[rm.owner]++] = rm.edge;
    }

    st.digraph = Digraph(n, std::move(arcs));
    for (Vertex v = 0; v < n; ++v)
        if (!st.core[v] && st.digraph.in_degree(v) == 0) st.free_vertices.push_back(v);
    return st;
}

std::vector<std::uint64_t> level_markers(const ParallelTrace& pt, const StripTrace& st) {
    if (pt.k != st.k || pt.level_of.size() != st.level_of.size())
        throw std::invalid_argument("inconsistent traces: different inputs");
    if (pt.level_of != st.level_of) throw std::invalid_argument("inconsistent traces: levels disagree");
    if (st.t_of_level.size() != pt.i_max) throw std::invalid_argument("inconsistent traces: level count");
    return st.t_of_level;
}

namespace {

void require_node(const StripTrace& st, Vertex v) {
    if (!st.in_digraph(v)) throw std::invalid_argument("vertex not in D(Psi)");
}

template <bool Forward>
std::vector<Vertex> closure(const StripTrace& st, Vertex v) {
    require_node(st, v);
    ReachCounter rc(st.digraph);
    auto span = Forward ? rc.forward(v) : rc.backward(v);
    std::vector<Vertex> out(span.begin(), span.end());
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

std::vector<Vertex> reach_forward(const StripTrace& st, Vertex v) { return closure<true>(st, v); }

std::vector<Vertex> reach_backward(const StripTrace& st, Vertex w) { return closure<false>(st, w); }

std::vector<Vertex> restrict_reach(const StripTrace& st, Vertex w, Vertex u) {
    require_node(st, u);
    const auto tw = reach_backward(st, w);
    const auto ru = reach_forward(st, u);
    std::vector<Vertex> out;
    std::set_intersection(tw.begin(), tw.end(), ru.begin(), ru.end(), std::back_inserter(out));
    return out;
}

LastFree last_free(const StripTrace& st) {
    if (st.free_vertices.empty()) throw std::runtime_error("no free vertices");
    LastFree best{0, 0};
    for (Vertex v : st.free_vertices) {
        if (st.level_of[v] > best.i_star) best = {st.level_of[v], v};
    }
    return best;
}

ReachCounter::ReachCounter(const Digraph& g) : g_(&g), stamp_(g.num_nodes(), 0) { order_.reserve(64); }

template <bool Forward>
void ReachCounter::bfs(Vertex v) {
    if (++epoch_ == 0) {
        std::fill(stamp_.begin(), stamp_.end(), 0);
        epoch_ = 1;
    }
    order_.clear();
    order_.push_back(v);
    stamp_[v] = epoch_;
    for (std::size_t i = 0; i < order_.size(); ++i) {
        const auto next = Forward ? g_->out(order_[i]) : g_->in(order_[i]);
        for (Vertex w : next) {
            if (stamp_[w] != epoch_) {
                stamp_[w] = epoch_;
                order_.push_back(w);
            }
        }
    }
}

std::size_t ReachCounter::forward_size(Vertex v) {
    bfs<true>(v);
    return order_.size();
}

std::span<const Vertex> ReachCounter::forward(Vertex v) {
    bfs<true>(v);
    return order_;
}

std::span<const Vertex> ReachCounter::backward(Vertex v) {
    bfs<false>(v);
    return order_;
}

bool psi_replay_valid(const Hypergraph& h, const StripTrace& st) {
    std::vector<std::uint8_t> edge_alive(h.num_edges(), 1);
    std::vector<std::uint8_t> deleted(h.num_vertices(), 0);
    for (Vertex v : st.psi) {
        if (deleted[v]) return false;
        std::uint32_t live = 0;
        for (EdgeId e : h.incident(v)) live += edge_alive[e];
        if (live >= st.k) return false;
        for (EdgeId e : h.incident(v)) edge_alive[e] = 0;
        deleted[v] = 1;
    }
    return true;
}

}  // namespace xorsat
