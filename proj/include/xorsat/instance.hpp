#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace xorsat {

using Vertex = std::uint32_t;
using EdgeId = std::uint32_t;

enum class Model { UniformSimple, ApConfig };

std::string to_string(Model model);

/// r-uniform multihypergraph with a flat edge array and CSR incidence.
/// A vertex repeated inside one edge is listed once per occurrence in its
/// incidence list, so it contributes two to its degree.
class Hypergraph {
public:
    Hypergraph() = default;
    Hypergraph(Vertex n, unsigned r, std::vector<Vertex> slots);

    Vertex num_vertices() const { return n_; }
    unsigned uniformity() const { return r_; }
    EdgeId num_edges() const { return r_ == 0 ? 0 : static_cast<EdgeId>(slots_.size() / r_); }

    std::span<const Vertex> edge(EdgeId e) const {
        return {slots_.data() + static_cast<std::size_t>(e) * r_, r_};
    }
    std::span<const EdgeId> incident(Vertex v) const {
        return {incidence_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
    }
    std::uint32_t degree(Vertex v) const { return offsets_[v + 1] - offsets_[v]; }

    const std::vector<Vertex>& slots() const { return slots_; }

    /// Subhypergraph on the same vertex ids keeping only the listed edges, in
    /// the given order. Edge i of the result is edges[i] of this one.
    Hypergraph with_edges(std::span<const EdgeId> edges) const;

    friend bool operator==(const Hypergraph& a, const Hypergraph& b) {
        return a.n_ == b.n_ && a.r_ == b.r_ && a.slots_ == b.slots_;
    }

private:
    Vertex n_ = 0;
    unsigned r_ = 0;
    std::vector<Vertex> slots_;
    std::vector<std::uint32_t> offsets_{0};
    std::vector<EdgeId> incidence_;
};

/// Linear system over GF(2): equation i is the sum of the variables of
/// graph.edge(i) equal to rhs[i].
struct XorsatInstance {
    Hypergraph graph;
    std::vector<std::uint8_t> rhs;
    Model model = Model::UniformSimple;

    Vertex num_vars() const { return graph.num_vertices(); }
    EdgeId num_equations() const { return graph.num_edges(); }
    unsigned arity() const { return graph.uniformity(); }

    friend bool operator==(const XorsatInstance& a, const XorsatInstance& b) {
        return a.graph == b.graph && a.rhs == b.rhs && a.model == b.model;
    }
};

/// AP-model configuration: r*m vertex-copies allocated to n bins and
/// partitioned into m parts of size r. Part j is
/// partition[j*r .. j*r + r).
struct Configuration {
    Vertex n = 0;
    unsigned r = 0;
    std::uint32_t m = 0;
    std::vector<Vertex> copy_bin;
    std::vector<std::uint32_t> partition;

    std::span<const std::uint32_t> part(std::uint32_t j) const {
        return {partition.data() + static_cast<std::size_t>(j) * r, r};
    }
};

/// Binomial coefficient saturating at UINT64_MAX.
std::uint64_t binomial_saturating(std::uint64_t n, std::uint64_t k);

/// m distinct r-subsets of [0, n) drawn uniformly without replacement, each
/// with an independent fair RHS bit. Edges are stored sorted.
XorsatInstance gen_uniform(Vertex n, std::uint32_t m, unsigned r, std::uint64_t seed);

Configuration gen_ap(Vertex n, std::uint32_t m, unsigned r, std::uint64_t seed);

Hypergraph project(const Configuration& conf);

bool is_simple(const Hypergraph& h);

/// Instance on the projected AP multihypergraph. With require_simple the
/// configuration is redrawn (on derived seeds) until the projection is
/// simple; throws after max_attempts failures.
XorsatInstance gen_ap_instance(Vertex n, std::uint32_t m, unsigned r, std::uint64_t seed,
                               bool require_simple = false, unsigned max_attempts = 10000);

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what);
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

XorsatInstance read_instance(std::istream& in);
XorsatInstance read_instance(const std::filesystem::path& path);
void write_instance(const XorsatInstance& inst, std::ostream& out);
void write_instance(const XorsatInstance& inst, const std::filesystem::path& path);

}  // namespace xorsat
