#pragma once

#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "thetalab/rational.hpp"

namespace thetalab {

// Integer vector in the lattice N_uf, written in e-coordinates.
using NVec = std::vector<std::int64_t>;
// Integer vector in the dual lattice M°_uf, written in f-coordinates.
using MVec = std::vector<std::int64_t>;
// Rational point or direction in the dual space V*.
using QVec = std::vector<Rational>;
// Entries in {-1, 0, +1}, one per unfrozen index.
using SignVector = std::vector<int>;

inline NVec zero_vec(std::size_t rank) { return NVec(rank, 0); }
inline NVec unit_vec(std::size_t rank, std::size_t i) {
    NVec v(rank, 0);
    v[i] = 1;
    return v;
}

inline bool is_zero(const NVec &v) {
    for (auto x : v)
        if (x != 0) return false;
    return true;
}

inline bool is_nonnegative(const NVec &v) {
    for (auto x : v)
        if (x < 0) return false;
    return true;
}

inline std::int64_t total_degree(const NVec &v) {
    std::int64_t s = 0;
    for (auto x : v) s += x;
    return s;
}

inline NVec add(const NVec &a, const NVec &b) {
    NVec r(a);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
    return r;
}

inline NVec sub(const NVec &a, const NVec &b) {
    NVec r(a);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
    return r;
}

inline NVec scale(std::int64_t c, const NVec &a) {
    NVec r(a);
    for (auto &x : r) x *= c;
    return r;
}

inline bool leq_componentwise(const NVec &a, const NVec &b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

inline QVec to_qvec(const MVec &v) {
    QVec r;
    r.reserve(v.size());
    for (auto x : v) r.emplace_back(x);
    return r;
}

inline MVec to_mvec(const QVec &v) {
    MVec r;
    r.reserve(v.size());
    for (const auto &x : v) r.push_back(to_int64(x));
    return r;
}

inline QVec qadd(const QVec &a, const QVec &b) {
    QVec r(a);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
    return r;
}

inline QVec qsub(const QVec &a, const QVec &b) {
    QVec r(a);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
    return r;
}

inline QVec qscale(const Rational &c, const QVec &a) {
    QVec r(a);
    for (auto &x : r) x *= c;
    return r;
}

inline bool qis_zero(const QVec &v) {
    for (const auto &x : v)
        if (x != 0) return false;
    return true;
}

inline SignVector sign_vector(const QVec &v) {
    SignVector s;
    s.reserve(v.size());
    for (const auto &x : v) s.push_back(sgn(x));
    return s;
}

inline SignVector sign_vector(const MVec &v) {
    SignVector s;
    s.reserve(v.size());
    for (auto x : v) s.push_back(sgn(x));
    return s;
}

inline std::int64_t gcd_all(const NVec &v) {
    std::int64_t g = 0;
    for (auto x : v) g = std::gcd(g, x < 0 ? -x : x);
    return g;
}

// v must be nonzero; divides out the gcd keeping the direction.
inline NVec primitive_part(const NVec &v) {
    std::int64_t g = gcd_all(v);
    NVec r(v);
    if (g > 1)
        for (auto &x : r) x /= g;
    return r;
}

inline bool is_primitive(const NVec &v) { return gcd_all(v) == 1; }

inline std::string vec_to_string(const NVec &v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(v[i]);
    }
    return s + "]";
}

inline std::string vec_to_string(const QVec &v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += rational_to_string(v[i]);
    }
    return s + "]";
}

} // namespace thetalab
