#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "thetalab/vectors.hpp"

namespace thetalab {

// An extended exchange matrix: the rows are indexed by the unfrozen indices,
// the columns by unfrozen indices followed by frozen ones, so the left r x r
// block is the exchange matrix B itself.  The skew-symmetrizers d (one per
// unfrozen index, gcd 1) are carried alongside; they are preserved by
// mutation.  Frozen-row symmetrizers are never stored.
class ExtendedExchangeMatrix {
public:
    ExtendedExchangeMatrix(std::vector<int> uf_labels, std::vector<int> fr_labels,
                           std::vector<std::vector<std::int64_t>> entries,
                           std::optional<std::vector<std::int64_t>> d = std::nullopt);

    // Square matrix with default labels 1..r and no frozen columns.
    static ExtendedExchangeMatrix from_square(std::vector<std::vector<std::int64_t>> b,
                                              std::optional<std::vector<std::int64_t>> d = std::nullopt);

    // B extended by an identity block: principal coefficients.
    static ExtendedExchangeMatrix principal(std::vector<std::vector<std::int64_t>> b,
                                            std::optional<std::vector<std::int64_t>> d = std::nullopt);

    std::size_t rank() const { return rows_.size(); }                 // |I_uf|
    std::size_t total() const { return rank() ? rows_[0].size() : 0; } // |I|
    std::size_t frozen_count() const { return total() - rank(); }

    std::int64_t eps(std::size_t i, std::size_t j) const { return rows_[i][j]; }
    const std::vector<std::int64_t> &row(std::size_t i) const { return rows_[i]; }
    const std::vector<std::int64_t> &d() const { return d_; }

    const std::vector<int> &uf_labels() const { return uf_labels_; }
    const std::vector<int> &fr_labels() const { return fr_labels_; }

    std::vector<std::vector<std::int64_t>> square_entries() const;
    std::vector<std::vector<std::int64_t>> frozen_entries() const;

    // Mutation in direction k (0-based row index); an involution.
    ExtendedExchangeMatrix mutate(std::size_t k) const;
    ExtendedExchangeMatrix mutate_seq(const std::vector<std::size_t> &kseq) const;

    bool same_square(const ExtendedExchangeMatrix &other) const;
    bool operator==(const ExtendedExchangeMatrix &other) const;

    // nB: the e-coordinate row vector of n times B, read in f-coordinates.
    MVec row_times_B(const NVec &n) const;

    // <m, n> = sum m_i n_i / d_i.
    Rational pairing(const MVec &m, const NVec &n) const;
    Rational pairing(const QVec &m, const NVec &n) const;

    // n° for primitive n: the primitive element of N° that is a positive
    // multiple of n (N° is spanned by the d_i e_i).
    NVec n_circ(const NVec &n_primitive) const;

    // <m, n°>, guaranteed integral for m in M°_uf.
    std::int64_t pairing_n_circ(const MVec &m, const NVec &n_circ_vec) const;

    // The frozen block has linearly independent rows.
    bool nondegenerate_coefficients() const;

    // Per-row sign of the frozen block entries; nullopt if some row is zero
    // or mixes signs (then sgn(sigma_i) is undefined).
    std::optional<SignVector> frozen_row_signs() const;

    std::string to_string() const;

private:
    ExtendedExchangeMatrix() = default;
    void validate_and_fill_d(std::optional<std::vector<std::int64_t>> d);

    std::vector<int> uf_labels_, fr_labels_;
    std::vector<std::vector<std::int64_t>> rows_; // r x (r + frozen)
    std::vector<std::int64_t> d_;
};

// Minimal positive integer skew-symmetrizers of a square integer matrix,
// or nullopt if the matrix is not skew-symmetrizable.
std::optional<std::vector<std::int64_t>> minimal_skew_symmetrizers(
    const std::vector<std::vector<std::int64_t>> &b);

} // namespace thetalab
