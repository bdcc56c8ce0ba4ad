#include "thetalab/series.hpp"

#include <sstream>

#include "thetalab/errors.hpp"

namespace thetalab {

TruncatedSeries TruncatedSeries::one(std::size_t rank, std::int64_t order) {
    TruncatedSeries s(rank, order);
    s.set_coeff(zero_vec(rank), 1);
    return s;
}

TruncatedSeries TruncatedSeries::monomial(const NVec &exp, const Rational &coeff, std::int64_t order) {
    TruncatedSeries s(exp.size(), order);
    s.set_coeff(exp, coeff);
    return s;
}

bool TruncatedSeries::is_one() const {
    return terms_.size() == 1 && terms_.begin()->first == zero_vec(rank_) &&
           terms_.begin()->second == 1;
}

Rational TruncatedSeries::coeff(const NVec &exp) const {
    auto it = terms_.find(exp);
    return it == terms_.end() ? Rational(0) : it->second;
}

Rational TruncatedSeries::constant_term() const { return coeff(zero_vec(rank_)); }

std::int64_t TruncatedSeries::max_degree() const {
    return terms_.empty() ? -1 : total_degree(terms_.rbegin()->first);
}

void TruncatedSeries::set_coeff(const NVec &exp, const Rational &c) {
    if (exp.size() != rank_) throw PreconditionError("series exponent rank mismatch");
    if (!is_nonnegative(exp)) throw PreconditionError("series exponents must be nonnegative");
    if (total_degree(exp) > order_ || c == 0)
        terms_.erase(exp);
    else
        terms_[exp] = c;
}

void TruncatedSeries::add_term(const NVec &exp, const Rational &c) {
    if (total_degree(exp) > order_) return;
    set_coeff(exp, coeff(exp) + c);
}

TruncatedSeries TruncatedSeries::operator+(const TruncatedSeries &o) const {
    TruncatedSeries out(rank_, std::min(order_, o.order_));
    out.terms_ = terms_;
    for (auto it = out.terms_.begin(); it != out.terms_.end();) {
        if (total_degree(it->first) > out.order_)
            it = out.terms_.erase(it);
        else
            ++it;
    }
    for (const auto &[e, c] : o.terms_) out.add_term(e, c);
    return out;
}

TruncatedSeries TruncatedSeries::operator-() const {
    TruncatedSeries out(*this);
    for (auto &[e, c] : out.terms_) c = -c;
    return out;
}

TruncatedSeries TruncatedSeries::operator-(const TruncatedSeries &o) const { return *this + (-o); }

TruncatedSeries TruncatedSeries::operator*(const TruncatedSeries &o) const {
    TruncatedSeries out(rank_, std::min(order_, o.order_));
    for (const auto &[ea, ca] : terms_) {
        std::int64_t da = total_degree(ea);
        if (da > out.order_) continue;
        for (const auto &[eb, cb] : o.terms_) {
            if (da + total_degree(eb) > out.order_) break; // graded-lex: degrees ascend
            out.add_term(add(ea, eb), ca * cb);
        }
    }
    return out;
}

bool TruncatedSeries::operator==(const TruncatedSeries &o) const {
    return rank_ == o.rank_ && terms_ == o.terms_;
}

TruncatedSeries TruncatedSeries::scaled(const Rational &c) const {
    TruncatedSeries out(rank_, order_);
    if (c == 0) return out;
    out.terms_ = terms_;
    for (auto &[e, v] : out.terms_) v *= c;
    return out;
}

TruncatedSeries TruncatedSeries::shifted(const NVec &exp) const {
    // multiplying by zeta^exp raises the correctness bound accordingly
    TruncatedSeries out(rank_, order_ + total_degree(exp));
    for (const auto &[e, c] : terms_) out.add_term(add(e, exp), c);
    return out;
}

TruncatedSeries TruncatedSeries::inverse() const {
    Rational c0 = constant_term();
    if (c0 == 0) throw PreconditionError("cannot invert a series with zero constant term");
    // 1/(c0 (1 + r)) = (1/c0) sum (-r)^k, degree of r is >= 1 so the sum is finite.
    TruncatedSeries r = scaled(1 / c0);
    r.set_coeff(zero_vec(rank_), 0);
    TruncatedSeries out = one(rank_, order_);
    TruncatedSeries power = one(rank_, order_);
    for (std::int64_t k = 1; k <= order_; ++k) {
        power = power * r;
        if (power.is_zero()) break;
        if (k % 2 == 0)
            out += power;
        else
            out -= power;
    }
    return out.scaled(1 / c0);
}

TruncatedSeries TruncatedSeries::pow(std::int64_t e) const {
    if (e < 0) return inverse().pow(-e);
    TruncatedSeries base(*this), out = one(rank_, order_);
    std::int64_t n = e;
    while (n > 0) {
        if (n & 1) out = out * base;
        base = base * base;
        n >>= 1;
    }
    return out;
}

TruncatedSeries TruncatedSeries::truncated(std::int64_t new_order) const {
    TruncatedSeries out(rank_, new_order);
    for (const auto &[e, c] : terms_) out.add_term(e, c);
    return out;
}

std::string TruncatedSeries::to_string(const std::string &var) const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto &[e, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        bool has_var = !thetalab::is_zero(e);
        if (c != 1 || !has_var) os << rational_to_string(c);
        bool printed = (c != 1 || !has_var);
        for (std::size_t i = 0; i < rank_; ++i) {
            if (e[i] == 0) continue;
            if (printed) os << "*";
            os << var << (i + 1);
            if (e[i] != 1) os << "^" << e[i];
            printed = true;
        }
    }
    return os.str();
}

} // namespace thetalab
