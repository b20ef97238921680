#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "xorsat/instance.hpp"
#include "xorsat/numerics.hpp"
#include "xorsat/stats.hpp"

namespace xorsat {

enum class DensityMode { Absolute, AboveCritical, BelowCritical };

struct Measurements {
    bool flip = true;   // core flippable cycles
    bool reach = true;  // max |R+| over stripped vertices
    bool gap = true;    // last free vertex and the path behind it
};

struct ExperimentConfig {
    unsigned r = 3;
    unsigned k = 2;
    DensityMode density = DensityMode::Absolute;
    double c = 0;       // Absolute: the density; offset forms: c_crit +/- n^-delta
    double delta = 0.25;
    std::vector<Vertex> ns;
    unsigned trials = 1;
    std::uint64_t seed = 1;
    Model model = Model::UniformSimple;
    bool require_simple = true;  // AP only
    Measurements measure;
    unsigned threads = 1;
    bool timing = true;     // false writes runtime_ms = 0 for byte-stable output
    bool write_dat = false;

    double density_at(Vertex n) const;
};

/// Flat "key = value" lines, '#' comments. Keys: r k c delta density
/// (absolute|above|below) ns trials seed model (uniform|ap) simple measure
/// threads timing dat. Throws std::invalid_argument on bad input.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig parse_config(const std::filesystem::path& path);
void validate(const ExperimentConfig& cfg);

struct TrialRecord {
    Vertex n = 0;
    double c = 0;
    std::uint64_t seed = 0;
    std::uint32_t trial = 0;
    bool ok = true;
    std::string error;

    std::uint64_t Q = 0;
    std::uint64_t core_edges = 0;
    std::uint64_t Q2 = 0;
    std::uint64_t Lambda = 0;
    std::uint64_t flip_mass = 0;
    bool flip_disjoint = true;
    std::uint32_t i_max = 0;
    std::uint64_t max_reach = 0;
    std::uint64_t max_reach_free = 0;
    std::uint32_t i_star = 0;
    std::uint32_t gap = 0;
    bool t_path_ok = false;
    double runtime_ms = 0;

    // not part of the CSV
    std::vector<std::uint64_t> core_degree_counts;  // index = degree inside the core
    std::uint32_t max_degree = 0;
    std::vector<std::uint64_t> level_sizes;
    bool has_free = false;
    bool path_pinned = false;      // chi(v) = {u*} along the path
    bool path_flips = false;       // flipping u* changes every path vertex
    bool chi_inverse_in_reach = true;
};

struct EnsembleResult {
    ExperimentConfig config;
    std::vector<TrialRecord> records;
};

TrialRecord run_trial(const ExperimentConfig& cfg, Vertex n, std::uint32_t trial);
EnsembleResult run_ensemble(const ExperimentConfig& cfg);

extern const char* const kTrialsHeader;
void write_trials_csv(const std::vector<TrialRecord>& records, std::ostream& out);

struct CoreSizeComparison {
    std::size_t included = 0;
    std::size_t excluded_empty = 0;
    double mean_vertex_dev = 0;
    double max_vertex_dev = 0;
    double mean_edge_dev = 0;
    double max_edge_dev = 0;
};
CoreSizeComparison compare_core_sizes(const std::vector<TrialRecord>& records, unsigned r, unsigned k);

struct Q2Summary {
    std::vector<double> ratios;  // per supercritical record
    bool all_below_one = true;
    std::optional<LinearFit> fit;  // log(1 - median ratio) on log n
};
Q2Summary q2_ratio(const std::vector<TrialRecord>& records, unsigned r);

struct FlipSummary {
    double mean_mass = 0;
    std::uint64_t max_mass = 0;
    double disjoint_rate = 0;
    std::vector<std::pair<Vertex, double>> mass_per_n;  // mean flip_mass / n
};
FlipSummary flip_mass(const std::vector<TrialRecord>& records);

struct ScalingSummary {
    std::vector<std::pair<Vertex, double>> medians;
    std::optional<LinearFit> fit;
};
/// Slope of log I_max - log log n on log n.
ScalingSummary iteration_scaling(const std::vector<TrialRecord>& records);

struct ReachSummary {
    std::vector<std::pair<Vertex, double>> medians;
    std::optional<LinearFit> fit;
    bool free_within_all = true;  // max_reach_free <= max_reach everywhere
};
ReachSummary reach_depth(const std::vector<TrialRecord>& records);
/// Fraction of supercritical records at size n with max_reach >= threshold.
double reach_rate(const std::vector<TrialRecord>& records, Vertex n, double threshold);

struct GapSummary {
    std::size_t applicable = 0;  // records with a free vertex
    double t_path_rate = 0;
    double pinned_rate = 0;      // among t_path_ok
    double flip_rate = 0;        // among t_path_ok
    double mean_gap = 0;
};
GapSummary free_gap_diagnostics(const std::vector<TrialRecord>& records);

struct DegreeFraction {
    unsigned j = 0;
    double mean = 0;
    double sd = 0;
    double se = 0;
    double predicted = 0;
};
/// Mean fraction of core vertices of core degree j over supercritical
/// records, against rho_j of the prediction at each record's density.
std::vector<DegreeFraction> degree_fractions(const std::vector<TrialRecord>& records, unsigned r, unsigned k,
                                             unsigned max_j);

std::string summary_json(const EnsembleResult& result);
/// trials.csv, summary.json and optionally per-n .dat tables.
void write_outputs(const EnsembleResult& result, const std::filesystem::path& dir);

}  // namespace xorsat
