#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "thetalab/exchange.hpp"
#include "thetalab/series.hpp"

namespace thetalab {

// An element of the ambient graded algebra: a finite sum of graded pieces
// z^m * (Laurent series in zeta), stored term-by-term in the canonical
// (z, zeta) coordinates.  zeta-exponents may be negative; a term is kept
// exactly when its total zeta-degree is <= order.
class GradedElement {
public:
    using PieceMap = std::map<NVec, Rational, GradedLexLess>; // zeta-exponent -> coeff
    using Pieces = std::map<MVec, PieceMap, GradedLexLess>;   // m -> piece

    GradedElement(std::size_t rank, std::int64_t order) : rank_(rank), order_(order) {}

    static GradedElement zero(std::size_t rank, std::int64_t order) { return {rank, order}; }
    static GradedElement one(std::size_t rank, std::int64_t order);
    static GradedElement z_monomial(const MVec &m, std::int64_t order);
    // coeff * z^m * zeta^n.
    static GradedElement term(const MVec &m, const NVec &n, const Rational &coeff, std::int64_t order);
    // coeff * z^m * sigma^n = coeff * z^{m - nB} * zeta^n.
    static GradedElement sigma_term(const ExtendedExchangeMatrix &B, const MVec &m, const NVec &n,
                                    const Rational &coeff, std::int64_t order);
    // z^m * F(zeta) for a power series F.
    static GradedElement pointed(const MVec &m, const TruncatedSeries &F);

    std::size_t rank() const { return rank_; }
    std::int64_t order() const { return order_; }
    const Pieces &pieces() const { return pieces_; }
    bool is_zero() const { return pieces_.empty(); }

    void add_term(const MVec &m, const NVec &n, const Rational &coeff);
    Rational coefficient(const MVec &m, const NVec &n) const;

    GradedElement operator+(const GradedElement &o) const;
    GradedElement operator-(const GradedElement &o) const;
    GradedElement operator*(const GradedElement &o) const;
    GradedElement operator-() const;
    GradedElement &operator+=(const GradedElement &o) { return *this = *this + o; }
    GradedElement &operator-=(const GradedElement &o) { return *this = *this - o; }
    GradedElement &operator*=(const GradedElement &o) { return *this = *this * o; }
    bool operator==(const GradedElement &o) const;

    GradedElement scaled(const Rational &c) const;
    GradedElement truncated(std::int64_t new_order) const;

    // The g-vector when concentrated in a single graded piece; nullopt when
    // zero or spread over several pieces.
    std::optional<MVec> g_vector() const;

    // View of one piece as zeta^shift * (ordinary power series).
    struct Block {
        NVec shift;
        TruncatedSeries series;
    };
    Block block(const MVec &m) const;

    std::string to_string() const;

private:
    std::size_t rank_;
    std::int64_t order_;
    Pieces pieces_;
};

// z^m * sigma^s * F with F a power series; F has constant term 1 when the
// element is pointed.
struct PointedElement {
    MVec m;
    NVec sigma_shift;
    TruncatedSeries F;

    GradedElement to_graded(const ExtendedExchangeMatrix &B) const;
};

} // namespace thetalab
