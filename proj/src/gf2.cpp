#include "xorsat/gf2.hpp"

#include <stdexcept>

namespace xorsat {

std::size_t BitVec::popcount() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
}

bool BitVec::any() const {
    for (auto w : words_)
        if (w) return true;
    return false;
}

bool BitVec::dot(const BitVec& a, const BitVec& b) {
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < a.words_.size(); ++i) acc ^= a.words_[i] & b.words_[i];
    return std::popcount(acc) & 1;
}

std::size_t BitVec::hamming(const BitVec& a, const BitVec& b) {
    std::size_t d = 0;
    for (std::size_t i = 0; i < a.words_.size(); ++i)
        d += static_cast<std::size_t>(std::popcount(a.words_[i] ^ b.words_[i]));
    return d;
}

std::optional<std::size_t> BitVec::last_set() const {
    for (std::size_t i = words_.size(); i-- > 0;)
        if (words_[i]) return i * 64 + 63 - static_cast<std::size_t>(std::countl_zero(words_[i]));
    return std::nullopt;
}

std::string BitVec::to_string() const {
    std::string s(nbits_, '0');
    for (std::size_t i = 0; i < nbits_; ++i)
        if (get(i)) s[i] = '1';
    return s;
}

BitVec BitVec::from_string(const std::string& bits) {
    BitVec v(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] == '1') v.set(i);
        else if (bits[i] != '0') throw std::invalid_argument("bit string must contain only 0 and 1");
    }
    return v;
}

bool BitVec::lex_less(const BitVec& a, const BitVec& b) {
    for (std::size_t i = 0; i < a.words_.size(); ++i) {
        const std::uint64_t diff = a.words_[i] ^ b.words_[i];
        if (diff) return ((a.words_[i] >> std::countr_zero(diff)) & 1u) == 0;
    }
    return false;
}

Gf2System Gf2System::from_instance(const XorsatInstance& inst) {
    std::vector<EdgeId> all(inst.num_equations());
    for (EdgeId e = 0; e < all.size(); ++e) all[e] = e;
    return from_equations(inst, all);
}

Gf2System Gf2System::from_equations(const XorsatInstance& inst, std::span<const EdgeId> equations) {
    Gf2System sys;
    sys.n_vars = inst.num_vars();
    sys.rows.reserve(equations.size());
    for (EdgeId e : equations) {
        Gf2Row row{BitVec(sys.n_vars), inst.rhs[e] != 0};
        for (Vertex v : inst.graph.edge(e)) row.support.flip(v);
        sys.rows.push_back(std::move(row));
    }
    return sys;
}

Elimination eliminate(const Gf2System& sys) {
    std::vector<Gf2Row> rows = sys.rows;
    const std::size_t n = sys.n_vars;
    Elimination out;
    std::vector<std::size_t> pivot_row_of(n, SIZE_MAX);
    std::size_t next = 0;
    for (std::size_t col = n; col-- > 0;) {
        std::size_t pick = next;
        while (pick < rows.size() && !rows[pick].support.get(col)) ++pick;
        if (pick == rows.size()) continue;
        std::swap(rows[next], rows[pick]);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i != next && rows[i].support.get(col)) {
                rows[i].support ^= rows[next].support;
                rows[i].rhs ^= rows[next].rhs;
            }
        }
        pivot_row_of[col] = next;
        out.pivot_columns.push_back(col);
        ++next;
    }
    out.rank = next;
    out.nullity = n - out.rank;

    bool consistent = true;
    for (std::size_t i = out.rank; i < rows.size(); ++i)
        if (rows[i].rhs) consistent = false;  // reduced to 0 = 1

    if (consistent) {
        BitVec x(n);
        for (std::size_t col = 0; col < n; ++col)
            if (pivot_row_of[col] != SIZE_MAX && rows[pivot_row_of[col]].rhs) x.set(col);
        out.witness = std::move(x);
    }

    for (std::size_t f = 0; f < n; ++f) {
        if (pivot_row_of[f] != SIZE_MAX) continue;
        BitVec v(n);
        v.set(f);
        for (std::size_t p : out.pivot_columns)
            if (rows[pivot_row_of[p]].support.get(f)) v.set(p);
        out.nullspace.push_back(std::move(v));
    }
    return out;
}

bool satisfies(const Gf2System& sys, const BitVec& x) {
    for (const auto& row : sys.rows)
        if (BitVec::dot(row.support, x) != row.rhs) return false;
    return true;
}

bool satisfies(const XorsatInstance& inst, const BitVec& x) {
    for (EdgeId e = 0; e < inst.num_equations(); ++e) {
        bool parity = false;
        for (Vertex v : inst.graph.edge(e)) parity ^= x.get(v);
        if (parity != (inst.rhs[e] != 0)) return false;
    }
    return true;
}

}  // namespace xorsat
