#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "thetalab/vectors.hpp"

namespace thetalab {

// Graded-lexicographic order on exponent vectors: lower total degree first,
// ties broken lexicographically.  Fixes the serialization order.
struct GradedLexLess {
    bool operator()(const NVec &a, const NVec &b) const {
        std::int64_t da = total_degree(a), db = total_degree(b);
        if (da != db) return da < db;
        return a < b;
    }
};

// Multivariate power series in the zeta variables with exact rational
// coefficients, truncated at total degree <= order.  Exponents are
// componentwise >= 0; zero coefficients are never stored.
class TruncatedSeries {
public:
    using TermMap = std::map<NVec, Rational, GradedLexLess>;

    TruncatedSeries() : rank_(0), order_(0) {}
    TruncatedSeries(std::size_t rank, std::int64_t order) : rank_(rank), order_(order) {}

    static TruncatedSeries one(std::size_t rank, std::int64_t order);
    static TruncatedSeries monomial(const NVec &exp, const Rational &coeff, std::int64_t order);

    std::size_t rank() const { return rank_; }
    std::int64_t order() const { return order_; }
    const TermMap &terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_one() const;

    Rational coeff(const NVec &exp) const;
    Rational constant_term() const;
    std::int64_t max_degree() const; // -1 when zero

    void set_coeff(const NVec &exp, const Rational &c);
    void add_term(const NVec &exp, const Rational &c);

    TruncatedSeries operator+(const TruncatedSeries &o) const;
    TruncatedSeries operator-(const TruncatedSeries &o) const;
    TruncatedSeries operator*(const TruncatedSeries &o) const;
    TruncatedSeries operator-() const;
    TruncatedSeries &operator+=(const TruncatedSeries &o) { return *this = *this + o; }
    TruncatedSeries &operator-=(const TruncatedSeries &o) { return *this = *this - o; }
    TruncatedSeries &operator*=(const TruncatedSeries &o) { return *this = *this * o; }
    bool operator==(const TruncatedSeries &o) const;

    TruncatedSeries scaled(const Rational &c) const;
    TruncatedSeries shifted(const NVec &exp) const; // multiply by zeta^exp, exp >= 0

    // Multiplicative inverse; requires a nonzero constant term.
    TruncatedSeries inverse() const;

    // Integer power, negative exponents via the inverse.
    TruncatedSeries pow(std::int64_t e) const;

    TruncatedSeries truncated(std::int64_t new_order) const;

    std::string to_string(const std::string &var = "z") const;

private:
    std::size_t rank_;
    std::int64_t order_;
    TermMap terms_;
};

} // namespace thetalab
