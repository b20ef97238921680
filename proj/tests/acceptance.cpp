// Acceptance suite: one PASS/FAIL line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "xorsat/experiment.hpp"
#include "xorsat/free_structure.hpp"
#include "xorsat/geometry.hpp"
#include "xorsat/numerics.hpp"
#include "xorsat/rng.hpp"
#include "xorsat/stripping.hpp"

using namespace xorsat;

namespace {

int failures = 0;
std::map<int, std::string> lines;

void report(int id, bool ok, const std::string& detail) {
    lines[id] = std::string(ok ? "PASS" : "FAIL") + " criterion " + std::to_string(id) + ": " + detail;
    std::fprintf(stderr, "done %d\n", id);
    failures += !ok;
}

void info(const std::string& line) {
    std::printf("INFO %s\n", line.c_str());
    std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// Set per oracle instance; read by criteria 8 and 9.
bool chi_inverse_in_reach_everywhere = true;
bool cycle_flip_closure_everywhere = true;

void criterion1() {
    bool ok = true;
    std::string detail;
    for (unsigned r : {3u, 4u}) {
        const auto cp = critical_point(r, 2);
        const auto g = oracle::grid_critical(r, 2);
        const double dc = std::abs(cp.c_crit - g.c), dmu = std::abs(cp.mu_crit - g.mu);
        const double res = std::abs(criticality_residual(cp.mu_crit, r, 2));
        const double q2 = std::abs(q2_ratio_prediction(r, cp.c_crit) - 1);
        ok &= dc < 1e-8 && dmu < 1e-8 && res < 1e-9 && q2 < 1e-8;
        detail += fmt("r=%u c=%.12f mu=%.12f |dc|=%.1e |dmu|=%.1e residual=%.1e |q2-1|=%.1e; ", r, cp.c_crit,
                      cp.mu_crit, dc, dmu, res, q2);
    }
    report(1, ok, detail);
}

struct OracleCase {
    XorsatInstance inst;
    std::string name;
};

std::vector<OracleCase> oracle_cases() {
    std::vector<OracleCase> cases;
    const oracle::Edges gadget = {{0, 1, 2}, {2, 3, 4}, {4, 5, 0}, {1, 3, 5}};
    cases.push_back({oracle::make_instance(3, {{0, 1, 2}}, {0}), "single equation"});
    cases.push_back({oracle::make_instance(5, {{0, 1, 2}, {2, 3, 4}}, {1, 0}), "two edges"});
    cases.push_back({oracle::make_instance(6, gadget, {0, 0, 0, 0}), "gadget"});
    cases.push_back({oracle::make_instance(4, {{0, 1, 2}, {0, 1, 3}}, {1, 0}), "two-cycle"});
    {
        oracle::Edges tail = gadget;
        tail.push_back({0, 6, 7});
        tail.push_back({7, 8, 9});
        cases.push_back({oracle::make_instance(10, tail, {1, 1, 0, 0, 1, 0}), "gadget with tail"});
    }
    {
        // a 2-cycle core with a tree hanging off it
        oracle::Edges e = {{0, 1, 2}, {0, 1, 3}, {2, 4, 5}, {3, 6, 7}, {5, 8, 9}};
        cases.push_back({oracle::make_instance(10, e, {0, 1, 1, 0, 1}), "cycle with trees"});
    }
    Rng rng(2024);
    for (int i = 0; i < 500; ++i) {
        const Vertex n = 3 + static_cast<Vertex>(rng.below(12));
        const auto cap = static_cast<std::uint32_t>(std::min<std::uint64_t>(14, binomial_saturating(n, 3)));
        const auto m = 1 + static_cast<std::uint32_t>(rng.below(cap));
        auto inst = gen_uniform(n, m, 3, derive_seed(2024, i));
        if (i % 2) {
            BitVec planted(n);
            for (Vertex v = 0; v < n; ++v) planted.set(v, rng.bit());
            for (EdgeId e = 0; e < m; ++e) {
                bool p = false;
                for (Vertex v : inst.graph.edge(e)) p ^= planted.get(v);
                inst.rhs[e] = p;
            }
        }
        cases.push_back({inst, "random " + std::to_string(i)});
    }
    return cases;
}

void criterion2() {
    const auto t0 = std::chrono::steady_clock::now();
    std::size_t total = 0, sat = 0, structured = 0, overlapping = 0;
    std::string first_failure;
    auto fail = [&](const std::string& name, const std::string& what) {
        if (first_failure.empty()) first_failure = name + ": " + what;
    };
    for (const auto& [inst, name] : oracle_cases()) {
        ++total;
        const Vertex n = inst.num_vars();
        const auto brute = oracle::brute_force_solutions(inst);
        const auto sols = enumerate_solutions(inst, std::size_t{1} << n);
        std::vector<std::string> as;
        for (const auto& x : sols) as.push_back(x.to_string());
        if (as != brute) fail(name, "enumeration mismatch");
        if (sols.empty()) continue;
        ++sat;

        const auto pt = parallel_strip(inst.graph, 2);
        const auto st = slow_strip(inst.graph, 2);
        const auto flips = core_flippable(inst.graph, pt, 100000);
        if (flips.truncated) fail(name, "cycle enumeration truncated");

        // flipping a core cycle preserves the core equations; flipping a
        // cycle of the whole hypergraph preserves every equation
        XorsatInstance core_inst;
        core_inst.graph = core_subhypergraph(inst.graph, pt);
        for (EdgeId e : pt.core_edges) core_inst.rhs.push_back(inst.rhs[e]);
        const auto whole = enumerate_flippable_cycles(inst.graph, 100000);
        for (const auto& x : sols) {
            for (const auto& c : flips.cycles) {
                BitVec y = x;
                for (Vertex v : c.vertices) y.flip(v);
                if (!satisfies(core_inst, y)) cycle_flip_closure_everywhere = false;
            }
            for (const auto& c : whole.cycles) {
                BitVec y = x;
                for (Vertex v : c.vertices) y.flip(v);
                if (!satisfies(inst, y)) cycle_flip_closure_everywhere = false;
            }
        }

        const auto geo = partition_clusters(sols, pt.core_vertices, flips.on_cycle_vertices);
        std::vector<std::vector<std::uint32_t>> cyc;
        for (const auto& c : flips.cycles) cyc.push_back(c.vertices);
        const auto expect = oracle::structural_clusters(brute, pt.core_vertices, cyc);
        std::map<std::uint32_t, std::set<std::string>> got_map;
        for (std::size_t i = 0; i < sols.size(); ++i) got_map[geo.partition[i]].insert(as[i]);
        std::set<std::set<std::string>> got;
        for (auto& [id, g] : got_map) got.insert(g);
        if (got != expect) fail(name, "cluster partition mismatch");

        if (!flips.disjoint) {
            ++overlapping;
            continue;
        }
        ++structured;
        const auto sigma = reference_core_assignment(inst, st);
        if (!sigma) {
            fail(name, "core unsatisfiable on a satisfiable instance");
            continue;
        }
        const auto fs = free_structure(inst, st, flips.cycles, sigma);
        const std::size_t size = std::size_t{1} << fs.free.size();
        for (auto s : geo.cluster_sizes)
            if (s != size) fail(name, "cluster size is not 2^|F|");

        const auto cluster = cluster_solutions(fs, 1u << 20);
        for (const auto& x : cluster) {
            if (!satisfies(inst, x)) fail(name, "affine map gives a non-solution");
            for (Vertex v = 0; v < n; ++v) {
                bool val = fs.z[v];
                for (Vertex u : fs.chi[v]) val ^= x.get(u);
                if (val != x.get(v)) fail(name, "affine map residual");
            }
        }
        std::set<std::string> ref;
        for (const auto& x : cluster) ref.insert(x.to_string());
        if (!expect.count(ref)) fail(name, "reference cluster differs from the structural one");

        for (Vertex u : fs.free) {
            const auto inv = chi_inverse(fs, u);
            if (!fs.in_core(u)) {
                const auto reach = reach_forward(st, u);
                if (!std::includes(reach.begin(), reach.end(), inv.begin(), inv.end()))
                    chi_inverse_in_reach_everywhere = false;
            }
            for (const auto& x : sols) {
                const BitVec y = flip_free(x, fs, u);
                if (!satisfies(inst, y)) fail(name, "flip leaves the solution set");
                std::vector<Vertex> support;
                for (Vertex v = 0; v < n; ++v)
                    if (x.get(v) != y.get(v)) support.push_back(v);
                if (support != inv) fail(name, "flip support differs from chi inverse");
            }
        }
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool ok = first_failure.empty() && secs < 60;
    report(2, ok,
           fmt("%zu instances (%zu satisfiable, %zu with free structure, %zu with overlapping core cycles) in %.1fs%s",
               total, sat, structured, overlapping, secs,
               first_failure.empty() ? "" : ("; first failure: " + first_failure).c_str()));
}

void criterion3() {
    const auto t0 = std::chrono::steady_clock::now();
    std::size_t checked = 0, bad = 0;
    auto check = [&](const Hypergraph& h) {
        ++checked;
        const auto pt = parallel_strip(h, 2);
        const auto st = slow_strip(h, 2);
        std::vector<Vertex> st_core;
        for (Vertex v = 0; v < h.num_vertices(); ++v)
            if (st.in_core(v)) st_core.push_back(v);
        std::vector<std::uint8_t> removed(h.num_edges(), 0);
        for (const auto& rm : st.removals) removed[rm.edge] = 1;
        std::vector<EdgeId> st_edges;
        for (EdgeId e = 0; e < h.num_edges(); ++e)
            if (!removed[e]) st_edges.push_back(e);
        if (st_core != pt.core_vertices || st_edges != pt.core_edges || !psi_replay_valid(h, st)) ++bad;
    };
    for (std::uint32_t n = 3; n <= 6; ++n) {
        std::vector<std::vector<std::uint32_t>> triples;
        for (std::uint32_t a = 0; a < n; ++a)
            for (std::uint32_t b = a + 1; b < n; ++b)
                for (std::uint32_t c = b + 1; c < n; ++c) triples.push_back({a, b, c});
        std::vector<std::size_t> pick;
        std::function<void(std::size_t)> rec = [&](std::size_t from) {
            oracle::Edges edges;
            for (auto i : pick) edges.push_back(triples[i]);
            check(oracle::make_graph(n, edges));
            if (pick.size() == 4) return;
            for (std::size_t i = from; i < triples.size(); ++i) {
                pick.push_back(i);
                rec(i + 1);
                pick.pop_back();
            }
        };
        rec(0);
    }
    const std::size_t exhaustive = checked;
    for (int i = 0; i < 10000; ++i) {
        const Vertex n = 5 + static_cast<Vertex>(i % 200);
        const auto m = static_cast<std::uint32_t>(n * (0.4 + 0.1 * (i % 10)));
        auto inst = i % 2 ? gen_uniform(n, m, 3, derive_seed(303, i)) : gen_ap_instance(n, m, 3, derive_seed(303, i));
        check(inst.graph);
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report(3, bad == 0 && secs < 120,
           fmt("%zu exhaustive + %zu random hypergraphs, %zu disagreements, %.1fs", exhaustive, checked - exhaustive, bad,
               secs));
}

EnsembleResult ensemble(DensityMode mode, double c, double delta, std::vector<Vertex> ns, Model model,
                        std::uint64_t seed, Measurements measure) {
    ExperimentConfig cfg;
    cfg.density = mode;
    cfg.c = c;
    cfg.delta = delta;
    cfg.ns = std::move(ns);
    cfg.trials = 20;
    cfg.seed = seed;
    cfg.model = model;
    cfg.measure = measure;
    return run_ensemble(cfg);
}

std::size_t failed(const EnsembleResult& res) {
    std::size_t f = 0;
    for (const auto& r : res.records) f += !r.ok;
    return f;
}

void criteria4and10() {
    const double c = critical_point(3, 2).c_crit + 0.2;
    const auto res = ensemble(DensityMode::Absolute, c, 0, {100000}, Model::UniformSimple, 404, {false, false, false});
    const auto cs = compare_core_sizes(res.records, 3, 2);
    report(4, failed(res) == 0 && cs.included == 20 && cs.mean_vertex_dev < 0.01 && cs.mean_edge_dev < 0.01,
           fmt("c=%.6f n=1e5: mean |Q-alpha n|/n = %.2e, mean |E-beta n|/n = %.2e over %zu trials", c,
               cs.mean_vertex_dev, cs.mean_edge_dev, cs.included));

    bool ok = failed(res) == 0;
    std::string detail;
    for (const auto& d : degree_fractions(res.records, 3, 2, 8)) {
        const double z = d.se > 0 ? std::abs(d.mean - d.predicted) / d.se : INFINITY;
        ok &= z <= 4;
        detail += fmt("j=%u %.5f vs %.5f (%.1f se); ", d.j, d.mean, d.predicted, z);
    }
    report(10, ok, detail);
}

void criterion5() {
    const auto res = ensemble(DensityMode::BelowCritical, 0, 0.25, {200000}, Model::UniformSimple, 505,
                              {false, false, false});
    std::size_t empty = 0;
    for (const auto& r : res.records) empty += r.ok && r.Q == 0;
    report(5, empty >= 18, fmt("c=c*-n^-0.25, n=2e5: %zu of 20 cores empty", empty));
}

void criteria6to9(bool c9_part_a) {
    const std::vector<Vertex> ns = {1u << 14, 1u << 15, 1u << 16, 1u << 17, 1u << 18};
    const auto res = ensemble(DensityMode::AboveCritical, 0, 0.25, ns, Model::ApConfig, 606, {});

    const auto q2 = q2_ratio(res.records, 3);
    const bool q2_ok = q2.fit && q2.fit->slope >= -0.19 && q2.fit->slope <= -0.07;
    report(6, failed(res) == 0 && q2.all_below_one && q2_ok,
           fmt("%zu supercritical trials, all ratios < 1: %s; slope of log(1-ratio) on log n = %.4f (r2 %.3f)",
               q2.ratios.size(), q2.all_below_one ? "yes" : "no", q2.fit ? q2.fit->slope : NAN,
               q2.fit ? q2.fit->r2 : NAN));

    const auto it = iteration_scaling(res.records);
    std::string meds;
    for (auto& [n, v] : it.medians) meds += fmt(" %u:%.0f", n, v);
    report(7, it.fit && it.fit->slope >= 0.07 && it.fit->slope <= 0.18,
           fmt("slope of log I_max - log log n on log n = %.4f; medians%s", it.fit ? it.fit->slope : NAN, meds.c_str()));

    const auto res8 = ensemble(DensityMode::AboveCritical, 0, 0.3, {1u << 18}, Model::ApConfig, 808, {});
    const double n18 = std::pow(2.0, 18);
    const double threshold = std::pow(n18, 0.15) / 10;
    const double rate = reach_rate(res8.records, 1u << 18, threshold);
    const auto rd = reach_depth(res8.records);
    report(8, failed(res8) == 0 && rate >= 0.8 && chi_inverse_in_reach_everywhere && rd.free_within_all,
           fmt("n=2^18 delta=0.3: max_reach >= %.2f in %.0f%% of trials (median %.0f); chi inverse within R+ on all "
               "oracle instances: %s",
               threshold, 100 * rate, rd.medians.empty() ? 0.0 : rd.medians[0].second,
               chi_inverse_in_reach_everywhere ? "yes" : "no"));
    const auto gd = free_gap_diagnostics(res8.records);
    info(fmt("free gap at n=2^18 delta=0.3: t_path_ok in %.0f%% of %zu trials (reported only, 70%% expected), "
             "pinned %.0f%%, flip reaches path %.0f%%, mean gap %.2f",
             100 * gd.t_path_rate, gd.applicable, 100 * gd.pinned_rate, 100 * gd.flip_rate, gd.mean_gap));

    const auto fm = flip_mass(res.records);
    double m17 = NAN, m18 = NAN;
    for (auto& [n, v] : fm.mass_per_n) {
        if (n == (1u << 17)) m17 = v;
        if (n == (1u << 18)) m18 = v;
    }
    std::size_t big = 0, disjoint = 0;
    for (const auto& r : res.records)
        if (r.ok && r.Q > 0 && r.n >= 100000) {
            ++big;
            disjoint += r.flip_disjoint;
        }
    const double drate = big ? static_cast<double>(disjoint) / big : 0;

    const auto gadget = oracle::make_graph(6, {{0, 1, 2}, {2, 3, 4}, {4, 5, 0}, {1, 3, 5}});
    const auto gc = enumerate_flippable_cycles(gadget, 100);
    const bool ok = c9_part_a && gc.cycles.size() == 7 && !gc.disjoint && cycle_flip_closure_everywhere &&
                    m18 < m17 && drate >= 0.95;
    report(9, ok,
           fmt("bridges = exhaustive on all <=5-edge hypergraphs: %s; gadget cycles %zu; cycle-flip closure: %s; "
               "flip_mass/n %.2e (2^17) -> %.2e (2^18); disjoint in %.0f%% of %zu trials at n >= 1e5",
               c9_part_a ? "yes" : "no", gc.cycles.size(), cycle_flip_closure_everywhere ? "yes" : "no", m17, m18,
               100 * drate, big));
}

bool bridges_match_exhaustive() {
    // every set of at most five distinct triples on up to six vertices, plus
    // random multigraphs with at most five edges
    bool ok = true;
    std::vector<std::vector<std::uint32_t>> triples;
    for (std::uint32_t a = 0; a < 6; ++a)
        for (std::uint32_t b = a + 1; b < 6; ++b)
            for (std::uint32_t c = b + 1; c < 6; ++c) triples.push_back({a, b, c});
    auto same = [&](const Hypergraph& h) {
        const auto fast = flippable_vertices(h);
        const auto rep = enumerate_flippable_cycles(h, 100000);
        std::set<Vertex> u;
        for (const auto& c : rep.cycles) u.insert(c.vertices.begin(), c.vertices.end());
        return std::set<Vertex>(fast.begin(), fast.end()) == u && !rep.truncated;
    };
    std::vector<std::size_t> pick;
    std::function<void(std::size_t)> rec = [&](std::size_t from) {
        oracle::Edges edges;
        for (auto i : pick) edges.push_back(triples[i]);
        ok &= same(oracle::make_graph(6, edges));
        if (pick.size() == 5) return;
        for (std::size_t i = from; i < triples.size(); ++i) {
            pick.push_back(i);
            rec(i + 1);
            pick.pop_back();
        }
    };
    rec(0);
    for (int i = 0; i < 20000; ++i) {
        auto inst = gen_ap_instance(3 + i % 6, 1 + i % 5, 3, derive_seed(909, i));
        ok &= same(inst.graph);
    }
    return ok;
}

}  // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criteria4and10();
    criterion5();
    criteria6to9(bridges_match_exhaustive());
    for (const auto& [id, line] : lines) std::printf("%s\n", line.c_str());
    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
