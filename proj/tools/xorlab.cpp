#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "xorsat/experiment.hpp"
#include "xorsat/geometry.hpp"
#include "xorsat/gf2.hpp"
#include "xorsat/instance.hpp"
#include "xorsat/numerics.hpp"
#include "xorsat/stripping.hpp"

using namespace xorsat;

namespace {

std::string g12(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

int cmd_generate(Vertex n, std::uint32_t m, double c, unsigned r, const std::string& model, bool simple,
                 std::uint64_t seed, const std::string& out) {
    if (m == 0 && c > 0) m = static_cast<std::uint32_t>(std::llround(c * n));
    XorsatInstance inst;
    if (model == "uniform") inst = gen_uniform(n, m, r, seed);
    else if (model == "ap") inst = gen_ap_instance(n, m, r, seed, simple);
    else throw std::invalid_argument("model must be uniform or ap");
    if (out.empty() || out == "-") write_instance(inst, std::cout);
    else write_instance(inst, out);
    return 0;
}

int cmd_thresholds(unsigned r, unsigned k, std::optional<double> c) {
    const CriticalPoint cp = critical_point(r, k);
    std::cout << "c_crit,mu_crit,mu,alpha,beta,zeta\n";
    std::cout << g12(cp.c_crit) << ',' << g12(cp.mu_crit);
    if (c) {
        const CorePrediction p = core_prediction(r, k, *c);
        std::cout << ',' << g12(p.mu) << ',' << g12(p.alpha) << ',' << g12(p.beta) << ',' << g12(p.zeta);
    } else {
        std::cout << ",,,,";
    }
    std::cout << '\n';
    return 0;
}

int cmd_strip(const std::string& in, unsigned k, const std::string& levels, const std::string& digraph) {
    const XorsatInstance inst = read_instance(std::filesystem::path(in));
    const ParallelTrace pt = parallel_strip(inst.graph, k);
    const StripTrace st = slow_strip(inst.graph, k);
    level_markers(pt, st);
    std::cout << "core_vertices,core_edges,i_max,free_vertices,arcs\n"
              << pt.core_vertices.size() << ',' << pt.core_edges.size() << ',' << pt.i_max << ','
              << st.free_vertices.size() << ',' << st.digraph.num_arcs() << '\n';
    if (!levels.empty()) {
        std::ofstream out(levels);
        out << "vertex,level,psi_position,front_step\n";
        for (Vertex v = 0; v < st.num_vertices(); ++v) {
            out << v << ',' << st.level_of[v] << ',';
            if (!st.in_core(v)) out << st.psi_position[v] << ',' << st.front_step[v];
            else out << ',';
            out << '\n';
        }
    }
    if (!digraph.empty()) {
        std::ofstream out(digraph);
        for (auto [a, b] : st.digraph.arcs()) out << a << ' ' << b << '\n';
    }
    return 0;
}

int cmd_solve(const std::string& in, std::size_t all_if_small) {
    const XorsatInstance inst = read_instance(std::filesystem::path(in));
    const Elimination el = eliminate(Gf2System::from_instance(inst));
    std::cout << (el.satisfiable() ? "SAT" : "UNSAT") << '\n'
              << "rank " << el.rank << '\n'
              << "nullity " << el.nullity << '\n';
    if (el.satisfiable() && inst.num_vars() <= all_if_small) {
        for (const auto& x : enumerate_solutions(inst, std::size_t{1} << std::min<std::size_t>(el.nullity, 62)))
            std::cout << x.to_string() << '\n';
    }
    return 0;
}

int cmd_clusters(const std::string& in, std::size_t max_solutions) {
    const XorsatInstance inst = read_instance(std::filesystem::path(in));
    const ParallelTrace pt = parallel_strip(inst.graph, 2);
    const StripTrace st = slow_strip(inst.graph, 2);
    const FlippableReport flips = core_flippable_structure(inst.graph, pt);
    auto sols = enumerate_solutions(inst, max_solutions);
    const ClusterGeometry geo = partition_clusters(std::move(sols), pt.core_vertices, flips.on_cycle_vertices);

    std::cout << "solutions,free,clusters,cluster_size,f_within,g_between,core_size,cycle_mass\n";
    std::cout << geo.solutions.size() << ',';
    if (flips.disjoint) std::cout << st.free_vertices.size() + flips.cycles.size();
    else std::cout << "NA";
    std::cout << ',' << geo.cluster_count << ',';
    if (geo.free_count) std::cout << (std::size_t{1} << *geo.free_count);
    else if (geo.cluster_count == 0) std::cout << 0;
    else std::cout << "mixed";
    std::cout << ',' << geo.f_within << ',';
    if (geo.g_between) std::cout << *geo.g_between;
    else std::cout << "NA";
    std::cout << ',' << pt.core_vertices.size() << ',' << flips.total_mass << '\n';
    return 0;
}

int cmd_experiment(const std::string& config, const std::string& out_dir) {
    const ExperimentConfig cfg = parse_config(std::filesystem::path(config));
    const EnsembleResult res = run_ensemble(cfg);
    write_outputs(res, out_dir);
    std::size_t failed = 0;
    for (const auto& r : res.records) failed += !r.ok;
    std::cout << res.records.size() << " trials, " << failed << " failed, written to " << out_dir << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"random XORSAT laboratory"};
    app.require_subcommand(1);

    auto* gen = app.add_subcommand("generate", "write a random instance");
    Vertex g_n = 0;
    std::uint32_t g_m = 0;
    double g_c = 0;
    unsigned g_r = 3;
    std::string g_model = "uniform", g_out;
    bool g_simple = false;
    std::uint64_t g_seed = 1;
    gen->add_option("--n", g_n, "variables")->required();
    gen->add_option("--m", g_m, "equations");
    gen->add_option("--c", g_c, "density, used when --m is absent");
    gen->add_option("--r", g_r, "arity")->default_val(3);
    gen->add_option("--model", g_model, "uniform or ap")->default_val("uniform");
    gen->add_flag("--simple", g_simple, "reject non-simple AP draws");
    gen->add_option("--seed", g_seed, "seed")->default_val(1);
    gen->add_option("--out", g_out, "output file (stdout when absent)");

    auto* thr = app.add_subcommand("thresholds", "critical density and core predictions");
    unsigned t_r = 3, t_k = 2;
    std::optional<double> t_c;
    thr->add_option("--r", t_r)->required();
    thr->add_option("--k", t_k)->required();
    thr->add_option("--c", t_c);

    auto* strip = app.add_subcommand("strip", "k-core stripping");
    std::string s_in, s_levels, s_digraph;
    unsigned s_k = 2;
    strip->add_option("--in", s_in)->required();
    strip->add_option("--k", s_k)->required();
    strip->add_option("--emit-levels", s_levels, "CSV of per-vertex levels");
    strip->add_option("--emit-digraph", s_digraph, "arc list 'u v'");

    auto* solve = app.add_subcommand("solve", "Gaussian elimination");
    std::string v_in;
    std::size_t v_all = 0;
    solve->add_option("--in", v_in)->required();
    solve->add_option("--all-if-small", v_all, "list every solution when n <= N");

    auto* clus = app.add_subcommand("clusters", "exact cluster geometry of a small instance");
    std::string c_in;
    std::size_t c_max = 65536;
    clus->add_option("--in", c_in)->required();
    clus->add_option("--max-solutions", c_max)->default_val(65536);

    auto* exp = app.add_subcommand("experiment", "seeded ensemble");
    std::string e_cfg, e_out;
    exp->add_option("--config", e_cfg)->required();
    exp->add_option("--out-dir", e_out)->required();

    CLI11_PARSE(app, argc, argv);
    try {
        if (*gen) return cmd_generate(g_n, g_m, g_c, g_r, g_model, g_simple, g_seed, g_out);
        if (*thr) return cmd_thresholds(t_r, t_k, t_c);
        if (*strip) return cmd_strip(s_in, s_k, s_levels, s_digraph);
        if (*solve) return cmd_solve(v_in, v_all);
        if (*clus) return cmd_clusters(c_in, c_max);
        if (*exp) return cmd_experiment(e_cfg, e_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
