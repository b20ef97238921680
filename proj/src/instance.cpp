#include "xorsat/instance.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "xorsat/rng.hpp"

namespace xorsat {

std::string to_string(Model model) {
    return model == Model::UniformSimple ? "uniform-simple" : "ap-config";
}

Hypergraph::Hypergraph(Vertex n, unsigned r, std::vector<Vertex> slots)
    : n_(n), r_(r), slots_(std::move(slots)) {
    if (r_ == 0 && !slots_.empty()) throw std::invalid_argument("hypergraph: zero uniformity");
    if (r_ != 0 && slots_.size() % r_ != 0)
        throw std::invalid_argument("hypergraph: slot count not a multiple of r");
    offsets_.assign(static_cast<std::size_t>(n_) + 1, 0);
    for (Vertex v : slots_) {
        if (v >= n_) throw std::invalid_argument("hypergraph: vertex index out of range");
        ++offsets_[v + 1];
    }
    std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
    incidence_.resize(slots_.size());
    std::vector<std::uint32_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (std::size_t i = 0; i < slots_.size(); ++i)
        incidence_[fill[slots_[i]]++] = static_cast<EdgeId>(i / r_);
}

Hypergraph Hypergraph::with_edges(std::span<const EdgeId> edges) const {
    std::vector<Vertex> slots;
    slots.reserve(edges.size() * r_);
    for (EdgeId e : edges) {
        auto row = edge(e);
        slots.insert(slots.end(), row.begin(), row.end());
    }
    return Hypergraph(n_, r_, std::move(slots));
}

std::uint64_t binomial_saturating(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    unsigned __int128 acc = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        acc = acc * (n - k + i) / i;
        if (acc > std::numeric_limits<std::uint64_t>::max())
            return std::numeric_limits<std::uint64_t>::max();
    }
    return static_cast<std::uint64_t>(acc);
}

namespace {

struct TupleHash {
    std::size_t operator()(const std::vector<Vertex>& t) const {
        std::uint64_t h = 0x243f6a8885a308d3ULL;
        for (Vertex v : t) h = mix64(h ^ v);
        return static_cast<std::size_t>(h);
    }
};

void check_arity(unsigned r) {
    if (r < 3) throw std::invalid_argument("arity r must be at least 3");
}

}  // namespace

XorsatInstance gen_uniform(Vertex n, std::uint32_t m, unsigned r, std::uint64_t seed) {
    check_arity(r);
    if (m > binomial_saturating(n, r))
        throw std::invalid_argument("m exceeds the number of r-subsets C(n, r)");

    Rng rng(seed);
    std::unordered_set<std::vector<Vertex>, TupleHash> used;
    used.reserve(m * 2 + 1);
    std::vector<Vertex> slots;
    slots.reserve(static_cast<std::size_t>(m) * r);
    std::vector<Vertex> tuple(r);
    while (used.size() < m) {
        for (unsigned i = 0; i < r; ++i) {
            Vertex v;
            do {
                v = static_cast<Vertex>(rng.below(n));
            } while (std::find(tuple.begin(), tuple.begin() + i, v) != tuple.begin() + i);
            tuple[i] = v;
        }
        std::vector<Vertex> key = tuple;
        std::sort(key.begin(), key.end());
        if (used.insert(key).second) slots.insert(slots.end(), key.begin(), key.end());
    }

    XorsatInstance inst;
    inst.graph = Hypergraph(n, r, std::move(slots));
    inst.rhs.resize(m);
    for (auto& b : inst.rhs) b = rng.bit() ? 1 : 0;
    inst.model = Model::UniformSimple;
    return inst;
}

Configuration gen_ap(Vertex n, std::uint32_t m, unsigned r, std::uint64_t seed) {
    check_arity(r);
    const std::size_t copies = static_cast<std::size_t>(m) * r;
    if (n == 0 && copies > 0) throw std::invalid_argument("AP model needs at least one bin");

    Rng rng(seed);
    Configuration conf;
    conf.n = n;
    conf.r = r;
    conf.m = m;
    conf.copy_bin.resize(copies);
    for (auto& bin : conf.copy_bin) bin = static_cast<Vertex>(rng.below(n));
    conf.partition.resize(copies);
    std::iota(conf.partition.begin(), conf.partition.end(), 0u);
    for (std::size_t i = copies; i > 1; --i) std::swap(conf.partition[i - 1], conf.partition[rng.below(i)]);
    return conf;
}

Hypergraph project(const Configuration& conf) {
    std::vector<Vertex> slots(conf.partition.size());
    for (std::size_t i = 0; i < slots.size(); ++i) slots[i] = conf.copy_bin[conf.partition[i]];
    return Hypergraph(conf.n, conf.r, std::move(slots));
}

bool is_simple(const Hypergraph& h) {
    std::unordered_set<std::vector<Vertex>, TupleHash> seen;
    seen.reserve(h.num_edges() * 2 + 1);
    for (EdgeId e = 0; e < h.num_edges(); ++e) {
        auto row = h.edge(e);
        std::vector<Vertex> key(row.begin(), row.end());
        std::sort(key.begin(), key.end());
        if (std::adjacent_find(key.begin(), key.end()) != key.end()) return false;
        if (!seen.insert(std::move(key)).second) return false;
    }
    return true;
}

XorsatInstance gen_ap_instance(Vertex n, std::uint32_t m, unsigned r, std::uint64_t seed,
                               bool require_simple, unsigned max_attempts) {
    for (unsigned attempt = 0; attempt < std::max(1u, max_attempts); ++attempt) {
        const std::uint64_t s = attempt == 0 ? seed : derive_seed(seed, attempt, 0x61707265);
        Hypergraph h = project(gen_ap(n, m, r, s));
        if (require_simple && !is_simple(h)) continue;
        XorsatInstance inst;
        inst.graph = std::move(h);
        inst.rhs.resize(m);
        Rng rng(derive_seed(s, 0x726873));
        for (auto& b : inst.rhs) b = rng.bit() ? 1 : 0;
        inst.model = Model::ApConfig;
        return inst;
    }
    throw std::runtime_error("no simple AP configuration within the attempt budget");
}

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

namespace {

bool parse_u64(const std::string& tok, std::uint64_t& out) {
    if (tok.empty() || tok.size() > 19) return false;
    std::uint64_t v = 0;
    for (char ch : tok) {
        if (ch < '0' || ch > '9') return false;
        v = v * 10 + static_cast<std::uint64_t>(ch - '0');
    }
    out = v;
    return true;
}

std::vector<std::string> tokens(const std::string& line) {
    std::istringstream ss(line);
    std::vector<std::string> out;
    for (std::string t; ss >> t;) out.push_back(std::move(t));
    return out;
}

}  // namespace

XorsatInstance read_instance(std::istream& in) {
    bool have_header = false;
    bool have_model = false;
    Model model = Model::UniformSimple;
    std::uint64_t n = 0, m = 0, r = 0;
    std::vector<Vertex> slots;
    std::vector<std::uint8_t> rhs;

    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto tok = tokens(line);
        if (tok.empty()) continue;
        if (tok[0][0] == '#') {
            if (tok.size() == 3 && tok[0] == "#" && tok[1] == "model") {
                if (tok[2] == "uniform-simple") model = Model::UniformSimple;
                else if (tok[2] == "ap-config") model = Model::ApConfig;
                else throw ParseError(lineno, "unknown model tag '" + tok[2] + "'");
                have_model = true;
            }
            continue;
        }
        if (tok[0] == "p") {
            if (have_header) throw ParseError(lineno, "duplicate header");
            if (tok.size() != 5 || tok[1] != "xor" || !parse_u64(tok[2], n) || !parse_u64(tok[3], m) ||
                !parse_u64(tok[4], r))
                throw ParseError(lineno, "malformed header, expected 'p xor <n> <m> <r>'");
            if (r == 0) throw ParseError(lineno, "malformed header, r must be positive");
            if (n > std::numeric_limits<Vertex>::max() || m > std::numeric_limits<std::uint32_t>::max())
                throw ParseError(lineno, "malformed header, counts too large");
            have_header = true;
            slots.reserve(m * r);
            rhs.reserve(m);
            continue;
        }
        if (tok[0] == "e") {
            if (!have_header) throw ParseError(lineno, "equation before header");
            if (tok.size() != r + 2)
                throw ParseError(lineno, "wrong arity, expected " + std::to_string(r) + " variables and a rhs bit");
            if (rhs.size() == m) throw ParseError(lineno, "more equations than declared");
            for (std::size_t i = 1; i <= r; ++i) {
                std::uint64_t v = 0;
                if (!parse_u64(tok[i], v)) throw ParseError(lineno, "bad variable index '" + tok[i] + "'");
                if (v >= n) throw ParseError(lineno, "index out of range");
                slots.push_back(static_cast<Vertex>(v));
            }
            const std::string& b = tok[r + 1];
            if (b != "0" && b != "1") throw ParseError(lineno, "rhs must be 0 or 1");
            rhs.push_back(b == "1" ? 1 : 0);
            continue;
        }
        throw ParseError(lineno, "unrecognized line");
    }
    if (!have_header) throw ParseError(lineno, "missing header");
    if (rhs.size() != m)
        throw ParseError(lineno, "expected " + std::to_string(m) + " equations, found " + std::to_string(rhs.size()));

    XorsatInstance inst;
    inst.graph = Hypergraph(static_cast<Vertex>(n), static_cast<unsigned>(r), std::move(slots));
    inst.rhs = std::move(rhs);
    inst.model = have_model ? model : (is_simple(inst.graph) ? Model::UniformSimple : Model::ApConfig);
    return inst;
}

XorsatInstance read_instance(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return read_instance(in);
}

void write_instance(const XorsatInstance& inst, std::ostream& out) {
    const auto& g = inst.graph;
    out << "# model " << to_string(inst.model) << '\n';
    out << "p xor " << g.num_vertices() << ' ' << g.num_edges() << ' ' << g.uniformity() << '\n';
    for (EdgeId e = 0; e < g.num_edges(); ++e) {
        out << 'e';
        for (Vertex v : g.edge(e)) out << ' ' << v;
        out << ' ' << int(inst.rhs[e]) << '\n';
    }
}

void write_instance(const XorsatInstance& inst, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    write_instance(inst, out);
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace xorsat
