#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

#include "thetalab/errors.hpp"

namespace thetalab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt num(const Rational &r) { return boost::multiprecision::numerator(r); }
inline BigInt den(const Rational &r) { return boost::multiprecision::denominator(r); }

inline int sgn(const Rational &r) { return r.sign(); }
inline int sgn(std::int64_t x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); }

inline bool is_integer(const Rational &r) { return den(r) == 1; }

inline std::int64_t to_int64(const Rational &r) {
    if (!is_integer(r)) throw PreconditionError("expected an integer, got " + r.str());
    return static_cast<std::int64_t>(num(r));
}

// Canonical text form: "p" when the denominator is 1, else "p/q" with q > 0.
inline std::string rational_to_string(const Rational &r) {
    if (is_integer(r)) return num(r).str();
    return num(r).str() + "/" + den(r).str();
}

inline Rational rational_from_string(const std::string &s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rational(BigInt(s));
        BigInt p(s.substr(0, slash)), q(s.substr(slash + 1));
        if (q <= 0) throw PreconditionError("rational denominator must be positive: " + s);
        return Rational(p, q);
    } catch (const std::exception &) {
        throw PreconditionError("malformed rational: " + s);
    }
}

} // namespace thetalab
