#pragma once

// Slow, independent reference implementations used to check the library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "xorsat/instance.hpp"

namespace oracle {

using Edges = std::vector<std::vector<std::uint32_t>>;

inline Edges edges_of(const xorsat::Hypergraph& h) {
    Edges out;
    for (xorsat::EdgeId e = 0; e < h.num_edges(); ++e) {
        auto ed = h.edge(e);
        out.emplace_back(ed.begin(), ed.end());
    }
    return out;
}

inline xorsat::Hypergraph make_graph(std::uint32_t n, const Edges& edges) {
    std::vector<xorsat::Vertex> slots;
    unsigned r = edges.empty() ? 3 : static_cast<unsigned>(edges[0].size());
    for (const auto& e : edges) slots.insert(slots.end(), e.begin(), e.end());
    return xorsat::Hypergraph(n, r, slots);
}

inline xorsat::XorsatInstance make_instance(std::uint32_t n, const Edges& edges, std::vector<std::uint8_t> rhs) {
    xorsat::XorsatInstance inst;
    inst.graph = make_graph(n, edges);
    inst.rhs = std::move(rhs);
    inst.model = xorsat::is_simple(inst.graph) ? xorsat::Model::UniformSimple : xorsat::Model::ApConfig;
    return inst;
}

/// All satisfying assignments as '0'/'1' strings (x0 first), sorted.
inline std::vector<std::string> brute_force_solutions(const xorsat::XorsatInstance& inst) {
    const std::uint32_t n = inst.num_vars();
    const auto edges = edges_of(inst.graph);
    std::vector<std::string> out;
    std::string x(n, '0');
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << n); ++code) {
        for (std::uint32_t i = 0; i < n; ++i) x[i] = ((code >> i) & 1u) ? '1' : '0';
        bool ok = true;
        for (std::size_t e = 0; e < edges.size() && ok; ++e) {
            int parity = inst.rhs[e];
            for (auto v : edges[e]) parity ^= x[v] - '0';
            ok = parity == 0;
        }
        if (ok) out.push_back(x);
    }
    std::sort(out.begin(), out.end());
    return out;
}

struct NaiveRank {
    std::size_t rank = 0;
    bool consistent = true;
};

/// Row reduction over int rows, one variable at a time from column 0.
inline NaiveRank naive_eliminate(std::vector<std::vector<int>> rows, std::vector<int> rhs, std::size_t n) {
    NaiveRank out;
    std::size_t r = 0;
    for (std::size_t col = 0; col < n && r < rows.size(); ++col) {
        std::size_t p = r;
        while (p < rows.size() && rows[p][col] == 0) ++p;
        if (p == rows.size()) continue;
        std::swap(rows[p], rows[r]);
        std::swap(rhs[p], rhs[r]);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == r || rows[i][col] == 0) continue;
            for (std::size_t j = 0; j < n; ++j) rows[i][j] ^= rows[r][j];
            rhs[i] ^= rhs[r];
        }
        ++r;
    }
    out.rank = r;
    for (std::size_t i = r; i < rows.size(); ++i)
        if (rhs[i]) out.consistent = false;
    return out;
}

/// Poisson upper tail by plain series.
inline double tail(unsigned t, double lambda) {
    double term = std::exp(-lambda), below = 0;
    for (unsigned j = 0; j < t; ++j) {
        below += term;
        term *= lambda / (j + 1);
    }
    return 1.0 - below;
}

inline double h(double mu, unsigned r, unsigned k) { return mu / std::pow(tail(k - 1, mu), r - 1); }

struct Critical {
    double c = 0;
    double mu = 0;
};

/// Grid scan of h on (0, 10], then bisection on the sign of a central
/// difference around the best grid point.
inline Critical grid_critical(unsigned r, unsigned k) {
    double best_mu = 0, best = INFINITY;
    for (int i = 1; i <= 100000; ++i) {
        const double mu = i * 1e-4;
        const double v = h(mu, r, k);
        if (v < best) {
            best = v;
            best_mu = mu;
        }
    }
    auto slope = [&](double mu) {
        const double d = 1e-6 * mu;
        return h(mu + d, r, k) - h(mu - d, r, k);
    };
    double lo = best_mu - 2e-4, hi = best_mu + 2e-4;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (slope(mid) < 0) lo = mid;
        else hi = mid;
    }
    const double mu = 0.5 * (lo + hi);
    return {h(mu, r, k) / r, mu};
}

/// Core by repeated scans deleting one light vertex at a time.
inline std::vector<std::uint32_t> naive_core(std::uint32_t n, const Edges& edges, unsigned k) {
    std::vector<int> alive_v(n, 1), alive_e(edges.size(), 1);
    for (bool changed = true; changed;) {
        changed = false;
        for (std::uint32_t v = 0; v < n; ++v) {
            if (!alive_v[v]) continue;
            unsigned deg = 0;
            for (std::size_t e = 0; e < edges.size(); ++e)
                if (alive_e[e])
                    for (auto w : edges[e]) deg += w == v;
            if (deg >= k) continue;
            alive_v[v] = 0;
            for (std::size_t e = 0; e < edges.size(); ++e)
                if (alive_e[e] && std::count(edges[e].begin(), edges[e].end(), v)) alive_e[e] = 0;
            changed = true;
        }
    }
    std::vector<std::uint32_t> core;
    for (std::uint32_t v = 0; v < n; ++v)
        if (alive_v[v]) core.push_back(v);
    return core;
}

/// Reflexive transitive closure from v over an arc list.
inline std::set<std::uint32_t> closure(const std::vector<std::pair<std::uint32_t, std::uint32_t>>& arcs,
                                       std::uint32_t v) {
    std::set<std::uint32_t> seen{v};
    for (bool grew = true; grew;) {
        grew = false;
        for (auto [a, b] : arcs)
            if (seen.count(a) && !seen.count(b)) grew = seen.insert(b).second;
    }
    return seen;
}

/// Vertices on some flippable cycle: v of degree 2 in two distinct edges
/// e, f such that e and f stay connected through other degree-2 links.
inline std::set<std::uint32_t> flippable_by_connectivity(std::uint32_t n, const Edges& edges) {
    struct Link {
        std::size_t a, b;
        std::uint32_t v;
    };
    std::vector<Link> links;
    for (std::uint32_t v = 0; v < n; ++v) {
        std::vector<std::size_t> inc;
        for (std::size_t e = 0; e < edges.size(); ++e)
            for (auto w : edges[e])
                if (w == v) inc.push_back(e);
        if (inc.size() == 2 && inc[0] != inc[1]) links.push_back({inc[0], inc[1], v});
    }
    std::set<std::uint32_t> out;
    for (std::size_t skip = 0; skip < links.size(); ++skip) {
        std::set<std::size_t> seen{links[skip].a};
        for (bool grew = true; grew;) {
            grew = false;
            for (std::size_t i = 0; i < links.size(); ++i) {
                if (i == skip) continue;
                if (seen.count(links[i].a) && !seen.count(links[i].b)) grew = seen.insert(links[i].b).second;
                if (seen.count(links[i].b) && !seen.count(links[i].a)) grew = seen.insert(links[i].a).second;
            }
        }
        if (seen.count(links[skip].b)) out.insert(links[skip].v);
    }
    return out;
}

/// Clusters built from the definition: full solutions grouped by the class
/// of their core restriction under the span of the cycle indicator vectors.
inline std::set<std::set<std::string>> structural_clusters(const std::vector<std::string>& solutions,
                                                           const std::vector<std::uint32_t>& core,
                                                           const std::vector<std::vector<std::uint32_t>>& cycles) {
    auto project = [&](const std::string& s) {
        std::string p;
        for (auto v : core) p += s[v];
        return p;
    };
    std::map<std::uint32_t, std::size_t> pos;
    for (std::size_t i = 0; i < core.size(); ++i) pos[core[i]] = i;

    std::map<std::string, std::size_t> class_of;
    std::size_t next = 0;
    for (const auto& s : solutions) {
        const std::string p = project(s);
        if (class_of.count(p)) continue;
        // flood the cycle-flip orbit of p
        std::vector<std::string> stack{p};
        class_of[p] = next;
        while (!stack.empty()) {
            std::string q = stack.back();
            stack.pop_back();
            for (const auto& c : cycles) {
                std::string f = q;
                for (auto v : c) f[pos[v]] = f[pos[v]] == '0' ? '1' : '0';
                if (!class_of.count(f)) {
                    class_of[f] = next;
                    stack.push_back(f);
                }
            }
        }
        ++next;
    }
    std::map<std::size_t, std::set<std::string>> groups;
    for (const auto& s : solutions) groups[class_of[project(s)]].insert(s);
    std::set<std::set<std::string>> out;
    for (auto& [id, g] : groups) out.insert(g);
    return out;
}

}  // namespace oracle
