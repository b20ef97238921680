#include "xorsat/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "xorsat/free_structure.hpp"
#include "xorsat/geometry.hpp"
#include "xorsat/rng.hpp"
#include "xorsat/stripping.hpp"

namespace xorsat {

double ExperimentConfig::density_at(Vertex n) const {
    if (density == DensityMode::Absolute) return c;
    const double cc = critical_point(r, k).c_crit;
    const double off = std::pow(static_cast<double>(n), -delta);
    return density == DensityMode::AboveCritical ? cc + off : cc - off;
}

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw std::invalid_argument("config: " + key + " expects a boolean, got '" + v + "'");
}

template <class T>
T parse_number(const std::string& key, const std::string& v) {
    std::istringstream is(v);
    T x{};
    is >> x;
    if (!is || !is.eof()) throw std::invalid_argument("config: bad value for " + key + ": '" + v + "'");
    return x;
}

}  // namespace

ExperimentConfig parse_config(std::istream& in) {
    ExperimentConfig cfg;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key == "r") cfg.r = parse_number<unsigned>(key, val);
        else if (key == "k") cfg.k = parse_number<unsigned>(key, val);
        else if (key == "c") cfg.c = parse_number<double>(key, val);
        else if (key == "delta") cfg.delta = parse_number<double>(key, val);
        else if (key == "density") {
            if (val == "absolute") cfg.density = DensityMode::Absolute;
            else if (val == "above") cfg.density = DensityMode::AboveCritical;
            else if (val == "below") cfg.density = DensityMode::BelowCritical;
            else throw std::invalid_argument("config: density must be absolute, above or below");
        } else if (key == "ns") {
            cfg.ns.clear();
            for (const auto& item : split_list(val)) {
                const double x = parse_number<double>(key, item);
                if (x < 1 || x > 4e9 || x != std::floor(x)) throw std::invalid_argument("config: bad n '" + item + "'");
                cfg.ns.push_back(static_cast<Vertex>(x));
            }
        } else if (key == "trials") cfg.trials = parse_number<unsigned>(key, val);
        else if (key == "seed") cfg.seed = parse_number<std::uint64_t>(key, val);
        else if (key == "model") {
            if (val == "uniform") cfg.model = Model::UniformSimple;
            else if (val == "ap") cfg.model = Model::ApConfig;
            else throw std::invalid_argument("config: model must be uniform or ap");
        } else if (key == "simple") cfg.require_simple = parse_bool(key, val);
        else if (key == "measure") {
            cfg.measure = {false, false, false};
            for (const auto& m : split_list(val)) {
                if (m == "flip") cfg.measure.flip = true;
                else if (m == "reach") cfg.measure.reach = true;
                else if (m == "gap") cfg.measure.gap = true;
                else if (m == "all") cfg.measure = {};
                else if (m != "core") throw std::invalid_argument("config: unknown measurement '" + m + "'");
            }
        } else if (key == "threads") cfg.threads = parse_number<unsigned>(key, val);
        else if (key == "timing") cfg.timing = parse_bool(key, val);
        else if (key == "dat") cfg.write_dat = parse_bool(key, val);
        else throw std::invalid_argument("config: unknown key '" + key + "'");
    }
    validate(cfg);
    return cfg;
}

ExperimentConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config " + path.string());
    return parse_config(in);
}

void validate(const ExperimentConfig& cfg) {
    if (cfg.r < 3) throw std::invalid_argument("config: r must be at least 3");
    if (cfg.k < 2) throw std::invalid_argument("config: k must be at least 2");
    if (cfg.density != DensityMode::Absolute && !(cfg.delta > 0 && cfg.delta < 0.5))
        throw std::invalid_argument("config: delta must lie in (0, 1/2)");
    if (cfg.density == DensityMode::Absolute && !(cfg.c > 0)) throw std::invalid_argument("config: c must be positive");
    if (cfg.threads == 0) throw std::invalid_argument("config: threads must be positive");
}

namespace {

// Does T(w, u*) for some w in S_{I*-L} form a directed path
// u* -> ... -> w hitting each level once.
struct PathResult {
    bool ok = false;
    Vertex w = 0;
    std::vector<Vertex> path;  // by decreasing level
};

PathResult find_level_path(const StripTrace& st, const ParallelTrace& pt, Vertex u_star, std::uint32_t i_star,
                           std::uint32_t window) {
    PathResult res;
    if (window == 0) {
        res.ok = true;
        res.w = u_star;
        res.path = {u_star};
        return res;
    }
    const Vertex n = st.num_vertices();
    std::vector<std::uint8_t> reached(n, 0), in_t(n, 0);
    std::vector<Vertex> fwd{u_star};
    reached[u_star] = 1;
    for (std::size_t i = 0; i < fwd.size(); ++i)
        for (Vertex x : st.digraph.out(fwd[i]))
            if (!reached[x]) {
                reached[x] = 1;
                fwd.push_back(x);
            }
    const std::uint32_t target = i_star - window;
    std::vector<Vertex> t;
    for (Vertex w : pt.levels[target - 1]) {
        if (!reached[w]) continue;
        t.assign(1, w);
        in_t[w] = 1;
        for (std::size_t i = 0; i < t.size() && t.size() <= window + 1; ++i)
            for (Vertex x : st.digraph.in(t[i]))
                if (reached[x] && !in_t[x]) {
                    in_t[x] = 1;
                    t.push_back(x);
                }
        bool ok = t.size() == window + 1;
        if (ok) {
            std::sort(t.begin(), t.end(), [&](Vertex a, Vertex b) { return st.level_of[a] > st.level_of[b]; });
            std::size_t induced = 0;
            for (Vertex x : t)
                for (Vertex y : st.digraph.out(x)) induced += in_t[y];
            ok = induced == window;
            for (std::size_t i = 0; ok && i < t.size(); ++i) {
                ok = st.level_of[t[i]] == i_star - i;
                if (ok && i + 1 < t.size()) ok = st.digraph.has_arc(t[i], t[i + 1]);
            }
        }
        for (Vertex x : t) in_t[x] = 0;
        if (ok) {
            res.ok = true;
            res.w = w;
            res.path = t;
            return res;
        }
    }
    return res;
}

void measure_gap(TrialRecord& rec, const XorsatInstance& inst, const ParallelTrace& pt, const StripTrace& st,
                 const std::optional<FlippableReport>& flips) {
    if (st.free_vertices.empty()) return;
    rec.has_free = true;
    const LastFree lf = last_free(st);
    rec.i_star = lf.i_star;
    std::uint32_t other = 0;
    for (Vertex v : st.free_vertices)
        if (v != lf.u_star) other = std::max(other, st.level_of[v]);
    rec.gap = lf.i_star - other;
    if (rec.gap == 0) return;

    const PathResult pr = find_level_path(st, pt, lf.u_star, lf.i_star, rec.gap - 1);
    rec.t_path_ok = pr.ok;
    if (st.k != 2) return;

    std::vector<FlippableCycle> cycles;
    const bool cycles_known = !flips || (flips->exhaustive && flips->disjoint);
    if (cycles_known) cycles = flips->cycles;
    FreeStructure fs;
    try {
        fs = free_structure(inst, st, cycles, std::nullopt, {.compute_chi = false});
    } catch (const FreeStructureError&) {
        return;
    }
    const auto inv = chi_inverse(fs, lf.u_star);
    const auto reach = reach_forward(st, lf.u_star);
    rec.chi_inverse_in_reach = std::includes(reach.begin(), reach.end(), inv.begin(), inv.end());
    if (!pr.ok) return;
    rec.path_flips = std::all_of(pr.path.begin(), pr.path.end(),
                                 [&](Vertex v) { return std::binary_search(inv.begin(), inv.end(), v); });
    if (cycles_known) {
        const auto closed = reach_backward(st, pr.w);
        const auto chis = chi_on_closed(fs, closed);
        rec.path_pinned = true;
        for (Vertex v : pr.path) {
            const auto at = std::lower_bound(closed.begin(), closed.end(), v) - closed.begin();
            if (chis[at] != std::vector<Vertex>{lf.u_star}) rec.path_pinned = false;
        }
    }
}

}  // namespace

TrialRecord run_trial(const ExperimentConfig& cfg, Vertex n, std::uint32_t trial) {
    TrialRecord rec;
    rec.n = n;
    rec.trial = trial;
    rec.seed = derive_seed(cfg.seed, n, trial);
    const auto t0 = std::chrono::steady_clock::now();
    try {
        rec.c = cfg.density_at(n);
        const auto m = static_cast<std::uint32_t>(std::llround(rec.c * n));
        const XorsatInstance inst = cfg.model == Model::UniformSimple
                                        ? gen_uniform(n, m, cfg.r, rec.seed)
                                        : gen_ap_instance(n, m, cfg.r, rec.seed, cfg.require_simple);
        const Hypergraph& h = inst.graph;
        for (Vertex v = 0; v < n; ++v) rec.max_degree = std::max(rec.max_degree, h.degree(v));

        const ParallelTrace pt = parallel_strip(h, cfg.k);
        rec.Q = pt.core_vertices.size();
        rec.core_edges = pt.core_edges.size();
        rec.i_max = pt.i_max;
        for (const auto& lvl : pt.levels) rec.level_sizes.push_back(lvl.size());
        {
            std::vector<std::uint32_t> deg(n, 0);
            for (EdgeId e : pt.core_edges)
                for (Vertex v : h.edge(e)) ++deg[v];
            for (Vertex v : pt.core_vertices) {
                if (deg[v] >= rec.core_degree_counts.size()) rec.core_degree_counts.resize(deg[v] + 1, 0);
                ++rec.core_degree_counts[deg[v]];
                rec.Lambda += deg[v];
                rec.Q2 += deg[v] == 2;
            }
        }

        std::optional<FlippableReport> flips;
        if (cfg.measure.flip && rec.Q > 0) {
            flips = core_flippable_structure(h, pt);
            rec.flip_mass = flips->total_mass;
            rec.flip_disjoint = flips->disjoint;
        }

        if (cfg.measure.reach || cfg.measure.gap) {
            const StripTrace st = slow_strip(h, cfg.k);
            if (cfg.measure.reach) {
                ReachCounter rc(st.digraph);
                for (Vertex v : st.psi) {
                    const std::uint64_t s = rc.forward_size(v);
                    rec.max_reach = std::max(rec.max_reach, s);
                    if (st.is_free(v)) rec.max_reach_free = std::max(rec.max_reach_free, s);
                }
            }
            if (cfg.measure.gap) {
                if (!flips && rec.Q > 0) flips = core_flippable_structure(h, pt);
                measure_gap(rec, inst, pt, st, flips);
            }
        }
    } catch (const std::exception& e) {
        rec.ok = false;
        rec.error = e.what();
    }
    if (cfg.timing)
        rec.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return rec;
}

EnsembleResult run_ensemble(const ExperimentConfig& cfg) {
    validate(cfg);
    EnsembleResult res;
    res.config = cfg;
    std::vector<std::pair<Vertex, std::uint32_t>> tasks;
    for (Vertex n : cfg.ns)
        for (std::uint32_t t = 0; t < cfg.trials; ++t) tasks.emplace_back(n, t);
    res.records.resize(tasks.size());

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < tasks.size();)
            res.records[i] = run_trial(cfg, tasks[i].first, tasks[i].second);
    };
    const unsigned workers = std::min<std::size_t>(cfg.threads, std::max<std::size_t>(tasks.size(), 1));
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < workers; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return res;
}

const char* const kTrialsHeader =
    "n,c,seed,Q,core_edges,Q2,Lambda,flip_mass,flip_disjoint,i_max,max_reach,max_reach_free,i_star,gap,t_path_ok,"
    "runtime_ms";

void write_trials_csv(const std::vector<TrialRecord>& records, std::ostream& out) {
    out << kTrialsHeader << '\n';
    for (const auto& r : records) {
        if (!r.ok) continue;
        out << r.n << ',' << std::setprecision(17) << r.c << ',' << r.seed << ',' << r.Q << ',' << r.core_edges << ','
            << r.Q2 << ',' << r.Lambda << ',' << r.flip_mass << ',' << int(r.flip_disjoint) << ',' << r.i_max << ','
            << r.max_reach << ',' << r.max_reach_free << ',' << r.i_star << ',' << r.gap << ',' << int(r.t_path_ok)
            << ',' << std::fixed << std::setprecision(3) << r.runtime_ms << std::defaultfloat << '\n';
    }
}

namespace {

bool supercritical(const TrialRecord& r) { return r.ok && r.Q > 0; }

std::map<Vertex, std::vector<double>> by_n(const std::vector<TrialRecord>& records,
                                           double (*value)(const TrialRecord&)) {
    std::map<Vertex, std::vector<double>> groups;
    for (const auto& r : records)
        if (supercritical(r)) groups[r.n].push_back(value(r));
    return groups;
}

std::optional<LinearFit> fit_if_possible(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() < 3) return std::nullopt;
    return ols(x, y);
}

}  // namespace

CoreSizeComparison compare_core_sizes(const std::vector<TrialRecord>& records, unsigned r, unsigned k) {
    CoreSizeComparison out;
    double sum_v = 0, sum_e = 0;
    for (const auto& rec : records) {
        if (!rec.ok) continue;
        if (rec.Q == 0) {
            ++out.excluded_empty;
            continue;
        }
        const CorePrediction p = core_prediction(r, k, rec.c);
        const double dv = std::abs(static_cast<double>(rec.Q) - p.alpha * rec.n) / rec.n;
        const double de = std::abs(static_cast<double>(rec.core_edges) - p.beta * rec.n) / rec.n;
        sum_v += dv;
        sum_e += de;
        out.max_vertex_dev = std::max(out.max_vertex_dev, dv);
        out.max_edge_dev = std::max(out.max_edge_dev, de);
        ++out.included;
    }
    if (out.included) {
        out.mean_vertex_dev = sum_v / out.included;
        out.mean_edge_dev = sum_e / out.included;
    }
    return out;
}

Q2Summary q2_ratio(const std::vector<TrialRecord>& records, unsigned r) {
    Q2Summary out;
    std::map<Vertex, std::vector<double>> groups;
    for (const auto& rec : records) {
        if (!supercritical(rec)) continue;
        const double ratio = 2.0 * (r - 1) * static_cast<double>(rec.Q2) / static_cast<double>(rec.Lambda);
        out.ratios.push_back(ratio);
        if (!(ratio < 1)) out.all_below_one = false;
        groups[rec.n].push_back(ratio);
    }
    std::vector<double> x, y;
    for (auto& [n, v] : groups) {
        const double med = median(v);
        if (med >= 1) continue;
        x.push_back(std::log(static_cast<double>(n)));
        y.push_back(std::log(1 - med));
    }
    out.fit = fit_if_possible(x, y);
    return out;
}

FlipSummary flip_mass(const std::vector<TrialRecord>& records) {
    FlipSummary out;
    std::size_t count = 0, disjoint = 0;
    double sum = 0;
    for (const auto& rec : records) {
        if (!supercritical(rec)) continue;
        ++count;
        sum += static_cast<double>(rec.flip_mass);
        out.max_mass = std::max(out.max_mass, rec.flip_mass);
        disjoint += rec.flip_disjoint;
    }
    if (count) {
        out.mean_mass = sum / count;
        out.disjoint_rate = static_cast<double>(disjoint) / count;
    }
    for (auto& [n, v] : by_n(records, [](const TrialRecord& r) { return static_cast<double>(r.flip_mass) / r.n; }))
        out.mass_per_n.emplace_back(n, mean(v));
    return out;
}

ScalingSummary iteration_scaling(const std::vector<TrialRecord>& records) {
    ScalingSummary out;
    std::vector<double> x, y;
    for (auto& [n, v] : by_n(records, [](const TrialRecord& r) { return static_cast<double>(r.i_max); })) {
        const double med = median(v);
        out.medians.emplace_back(n, med);
        const double ln = std::log(static_cast<double>(n));
        x.push_back(ln);
        y.push_back(std::log(med) - std::log(ln));
    }
    out.fit = fit_if_possible(x, y);
    return out;
}

ReachSummary reach_depth(const std::vector<TrialRecord>& records) {
    ReachSummary out;
    for (const auto& rec : records)
        if (rec.ok && rec.max_reach_free > rec.max_reach) out.free_within_all = false;
    std::vector<double> x, y;
    for (auto& [n, v] : by_n(records, [](const TrialRecord& r) { return static_cast<double>(r.max_reach); })) {
        const double med = median(v);
        out.medians.emplace_back(n, med);
        if (med <= 0) continue;
        x.push_back(std::log(static_cast<double>(n)));
        y.push_back(std::log(med));
    }
    out.fit = fit_if_possible(x, y);
    return out;
}

double reach_rate(const std::vector<TrialRecord>& records, Vertex n, double threshold) {
    std::size_t total = 0, hit = 0;
    for (const auto& rec : records) {
        if (!supercritical(rec) || rec.n != n) continue;
        ++total;
        hit += static_cast<double>(rec.max_reach) >= threshold;
    }
    return total ? static_cast<double>(hit) / total : 0.0;
}

GapSummary free_gap_diagnostics(const std::vector<TrialRecord>& records) {
    GapSummary out;
    std::size_t paths = 0, pinned = 0, flips = 0;
    double gap_sum = 0;
    for (const auto& rec : records) {
        if (!supercritical(rec) || !rec.has_free) continue;
        ++out.applicable;
        gap_sum += rec.gap;
        if (!rec.t_path_ok) continue;
        ++paths;
        pinned += rec.path_pinned;
        flips += rec.path_flips;
    }
    if (out.applicable) {
        out.t_path_rate = static_cast<double>(paths) / out.applicable;
        out.mean_gap = gap_sum / out.applicable;
    }
    if (paths) {
        out.pinned_rate = static_cast<double>(pinned) / paths;
        out.flip_rate = static_cast<double>(flips) / paths;
    }
    return out;
}

std::vector<DegreeFraction> degree_fractions(const std::vector<TrialRecord>& records, unsigned r, unsigned k,
                                             unsigned max_j) {
    std::vector<DegreeFraction> out;
    std::vector<const TrialRecord*> sc;
    for (const auto& rec : records)
        if (supercritical(rec)) sc.push_back(&rec);
    for (unsigned j = k; j <= max_j; ++j) {
        DegreeFraction d;
        d.j = j;
        std::vector<double> fr;
        double pred = 0;
        for (const auto* rec : sc) {
            const double cnt = j < rec->core_degree_counts.size() ? static_cast<double>(rec->core_degree_counts[j]) : 0;
            fr.push_back(cnt / static_cast<double>(rec->Q));
            const auto p = core_prediction(r, k, rec->c);
            pred += j < p.rho.size() ? p.rho[j] : 0.0;
        }
        if (!sc.empty()) {
            d.mean = mean(fr);
            d.sd = stddev(fr);
            d.se = d.sd / std::sqrt(static_cast<double>(fr.size()));
            d.predicted = pred / sc.size();
        }
        out.push_back(d);
    }
    return out;
}

namespace {

nlohmann::json fit_json(const std::optional<LinearFit>& f) {
    if (!f) return nullptr;
    return {{"slope", f->slope}, {"intercept", f->intercept}, {"r2", f->r2}, {"points", f->points}};
}

nlohmann::json pairs_json(const std::vector<std::pair<Vertex, double>>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (auto& [n, x] : v) a.push_back({{"n", n}, {"value", x}});
    return a;
}

std::string density_name(DensityMode d) {
    switch (d) {
        case DensityMode::Absolute: return "absolute";
        case DensityMode::AboveCritical: return "above";
        case DensityMode::BelowCritical: return "below";
    }
    return "?";
}

}  // namespace

std::string summary_json(const EnsembleResult& result) {
    using nlohmann::json;
    const auto& cfg = result.config;
    const auto& recs = result.records;
    json j;
    j["config"] = {{"r", cfg.r},
                   {"k", cfg.k},
                   {"density", density_name(cfg.density)},
                   {"c", cfg.c},
                   {"delta", cfg.delta},
                   {"ns", cfg.ns},
                   {"trials", cfg.trials},
                   {"seed", cfg.seed},
                   {"model", to_string(cfg.model)},
                   {"simple", cfg.require_simple}};
    std::size_t ok = 0, empty = 0;
    json failed = json::array();
    for (const auto& r : recs) {
        if (!r.ok) {
            failed.push_back({{"n", r.n}, {"trial", r.trial}, {"seed", r.seed}, {"error", r.error}});
            continue;
        }
        ++ok;
        empty += r.Q == 0;
    }
    j["trials"] = {{"total", recs.size()}, {"ok", ok}, {"failed", failed.size()}, {"empty_core", empty}};
    j["failed"] = failed;

    const auto cs = compare_core_sizes(recs, cfg.r, cfg.k);
    j["core_size"] = {{"included", cs.included},           {"excluded_empty", cs.excluded_empty},
                      {"mean_vertex_dev", cs.mean_vertex_dev}, {"max_vertex_dev", cs.max_vertex_dev},
                      {"mean_edge_dev", cs.mean_edge_dev},     {"max_edge_dev", cs.max_edge_dev}};
    const auto q2 = q2_ratio(recs, cfg.r);
    j["q2_ratio"] = {{"all_below_one", q2.all_below_one}, {"fit", fit_json(q2.fit)}};
    const auto fm = flip_mass(recs);
    j["flip_mass"] = {{"mean", fm.mean_mass},
                      {"max", fm.max_mass},
                      {"disjoint_rate", fm.disjoint_rate},
                      {"mass_per_n", pairs_json(fm.mass_per_n)}};
    const auto it = iteration_scaling(recs);
    j["iterations"] = {{"median_i_max", pairs_json(it.medians)}, {"fit", fit_json(it.fit)}};
    const auto rd = reach_depth(recs);
    j["reach"] = {{"median_max_reach", pairs_json(rd.medians)},
                  {"fit", fit_json(rd.fit)},
                  {"free_within_all", rd.free_within_all}};
    const auto gd = free_gap_diagnostics(recs);
    j["free_gap"] = {{"applicable", gd.applicable},
                     {"t_path_rate", gd.t_path_rate},
                     {"pinned_rate", gd.pinned_rate},
                     {"flip_rate", gd.flip_rate},
                     {"mean_gap", gd.mean_gap}};
    json deg = json::array();
    for (const auto& d : degree_fractions(recs, cfg.r, cfg.k, 8))
        deg.push_back({{"j", d.j}, {"mean", d.mean}, {"se", d.se}, {"predicted", d.predicted}});
    j["degree_fractions"] = deg;
    return j.dump(2);
}

void write_outputs(const EnsembleResult& result, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    {
        std::ofstream out(dir / "trials.csv");
        if (!out) throw std::runtime_error("cannot write " + (dir / "trials.csv").string());
        write_trials_csv(result.records, out);
    }
    {
        std::ofstream out(dir / "summary.json");
        if (!out) throw std::runtime_error("cannot write " + (dir / "summary.json").string());
        out << summary_json(result) << '\n';
    }
    if (result.config.write_dat) {
        std::ofstream out(dir / "ensemble.dat");
        out << "# n median_Q median_i_max median_max_reach median_q2_ratio\n";
        std::map<Vertex, std::vector<const TrialRecord*>> groups;
        for (const auto& r : result.records)
            if (supercritical(r)) groups[r.n].push_back(&r);
        for (auto& [n, v] : groups) {
            std::vector<double> q, im, mr, ratio;
            for (const auto* r : v) {
                q.push_back(static_cast<double>(r->Q));
                im.push_back(r->i_max);
                mr.push_back(static_cast<double>(r->max_reach));
                ratio.push_back(2.0 * (result.config.r - 1) * static_cast<double>(r->Q2) / r->Lambda);
            }
            out << n << ' ' << median(q) << ' ' << median(im) << ' ' << median(mr) << ' ' << median(ratio) << '\n';
        }
    }
}

}  // namespace xorsat
