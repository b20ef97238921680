#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "xorsat/instance.hpp"

namespace xorsat {

/// Fixed-width packed bit vector.
class BitVec {
public:
    BitVec() = default;
    explicit BitVec(std::size_t nbits) : nbits_(nbits), words_((nbits + 63) / 64, 0) {}

    std::size_t size() const { return nbits_; }
    bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
    void set(std::size_t i, bool value = true) {
        const std::uint64_t mask = std::uint64_t{1} << (i & 63);
        if (value) words_[i >> 6] |= mask;
        else words_[i >> 6] &= ~mask;
    }
    void flip(std::size_t i) { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

    BitVec& operator^=(const BitVec& other) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= other.words_[i];
        return *this;
    }
    friend BitVec operator^(BitVec a, const BitVec& b) { return a ^= b; }

    std::size_t popcount() const;
    bool any() const;
    /// Parity of popcount(a & b).
    static bool dot(const BitVec& a, const BitVec& b);
    static std::size_t hamming(const BitVec& a, const BitVec& b);
    /// Highest set index, or nullopt.
    std::optional<std::size_t> last_set() const;

    std::span<const std::uint64_t> words() const { return words_; }

    /// "x0 x1 ... x_{n-1}" as '0'/'1' characters.
    std::string to_string() const;
    static BitVec from_string(const std::string& bits);

    /// Lexicographic order of to_string().
    static bool lex_less(const BitVec& a, const BitVec& b);

    friend bool operator==(const BitVec& a, const BitVec& b) = default;

private:
    std::size_t nbits_ = 0;
    std::vector<std::uint64_t> words_;
};

struct Gf2Row {
    BitVec support;
    bool rhs = false;
};

/// Dense GF(2) system. Repeated variables inside one equation cancel in
/// pairs when built from an instance.
struct Gf2System {
    std::size_t n_vars = 0;
    std::vector<Gf2Row> rows;

    static Gf2System from_instance(const XorsatInstance& inst);
    /// Only the listed equations of inst, over all n variables.
    static Gf2System from_equations(const XorsatInstance& inst, std::span<const EdgeId> equations);
};

struct Elimination {
    std::size_t rank = 0;
    std::size_t nullity = 0;
    /// Lexicographically least solution, absent when the system is inconsistent.
    std::optional<BitVec> witness;
    /// One basis vector per free (non-pivot) column, ascending by that column.
    std::vector<BitVec> nullspace;
    std::vector<std::size_t> pivot_columns;

    bool satisfiable() const { return witness.has_value(); }
};

/// Gauss-Jordan elimination choosing pivots from the highest column down, so
/// each pivot depends only on lower free columns and the zero-free witness is
/// the lexicographically least solution.
Elimination eliminate(const Gf2System& sys);

bool satisfies(const Gf2System& sys, const BitVec& x);
bool satisfies(const XorsatInstance& inst, const BitVec& x);

}  // namespace xorsat
