#include "thetalab/graded.hpp"

#include <sstream>

#include "thetalab/errors.hpp"

namespace thetalab {

GradedElement GradedElement::one(std::size_t rank, std::int64_t order) {
    return z_monomial(zero_vec(rank), order);
}

GradedElement GradedElement::z_monomial(const MVec &m, std::int64_t order) {
    GradedElement g(m.size(), order);
    g.add_term(m, zero_vec(m.size()), 1);
    return g;
}

GradedElement GradedElement::term(const MVec &m, const NVec &n, const Rational &coeff,
                                  std::int64_t order) {
    GradedElement g(m.size(), order);
    g.add_term(m, n, coeff);
    return g;
}

GradedElement GradedElement::sigma_term(const ExtendedExchangeMatrix &B, const MVec &m, const NVec &n,
                                        const Rational &coeff, std::int64_t order) {
    return term(sub(m, B.row_times_B(n)), n, coeff, order);
}

GradedElement GradedElement::pointed(const MVec &m, const TruncatedSeries &F) {
    GradedElement g(m.size(), F.order());
    for (const auto &[e, c] : F.terms()) g.add_term(m, e, c);
    return g;
}

void GradedElement::add_term(const MVec &m, const NVec &n, const Rational &coeff) {
    if (m.size() != rank_ || n.size() != rank_) throw PreconditionError("graded term rank mismatch");
    if (total_degree(n) > order_ || coeff == 0) return;
    auto &piece = pieces_[m];
    auto it = piece.find(n);
    if (it == piece.end()) {
        piece.emplace(n, coeff);
        return;
    }
    it->second += coeff;
    if (it->second == 0) {
        piece.erase(it);
        if (piece.empty()) pieces_.erase(m);
    }
}

Rational GradedElement::coefficient(const MVec &m, const NVec &n) const {
    auto pit = pieces_.find(m);
    if (pit == pieces_.end()) return 0;
    auto it = pit->second.find(n);
    return it == pit->second.end() ? Rational(0) : it->second;
}

GradedElement GradedElement::operator+(const GradedElement &o) const {
    GradedElement out(rank_, std::min(order_, o.order_));
    for (const auto &[m, piece] : pieces_)
        for (const auto &[n, c] : piece) out.add_term(m, n, c);
    for (const auto &[m, piece] : o.pieces_)
        for (const auto &[n, c] : piece) out.add_term(m, n, c);
    return out;
}

GradedElement GradedElement::operator-() const {
    GradedElement out(*this);
    for (auto &[m, piece] : out.pieces_)
        for (auto &[n, c] : piece) c = -c;
    return out;
}

GradedElement GradedElement::operator-(const GradedElement &o) const { return *this + (-o); }

GradedElement GradedElement::operator*(const GradedElement &o) const {
    GradedElement out(rank_, std::min(order_, o.order_));
    for (const auto &[ma, pa] : pieces_)
        for (const auto &[mb, pb] : o.pieces_) {
            MVec m = add(ma, mb);
            for (const auto &[na, ca] : pa)
                for (const auto &[nb, cb] : pb) out.add_term(m, add(na, nb), ca * cb);
        }
    return out;
}

bool GradedElement::operator==(const GradedElement &o) const {
    return rank_ == o.rank_ && pieces_ == o.pieces_;
}

GradedElement GradedElement::scaled(const Rational &c) const {
    GradedElement out(rank_, order_);
    if (c == 0) return out;
    out.pieces_ = pieces_;
    for (auto &[m, piece] : out.pieces_)
        for (auto &[n, v] : piece) v *= c;
    return out;
}

GradedElement GradedElement::truncated(std::int64_t new_order) const {
    GradedElement out(rank_, new_order);
    for (const auto &[m, piece] : pieces_)
        for (const auto &[n, c] : piece) out.add_term(m, n, c);
    return out;
}

std::optional<MVec> GradedElement::g_vector() const {
    if (pieces_.size() != 1) return std::nullopt;
    return pieces_.begin()->first;
}

GradedElement::Block GradedElement::block(const MVec &m) const {
    auto pit = pieces_.find(m);
    if (pit == pieces_.end() || pit->second.empty())
        return {zero_vec(rank_), TruncatedSeries(rank_, order_)};
    NVec shift = pit->second.begin()->first;
    for (const auto &[n, c] : pit->second)
        for (std::size_t i = 0; i < rank_; ++i) shift[i] = std::min(shift[i], n[i]);
    TruncatedSeries s(rank_, order_ - total_degree(shift));
    for (const auto &[n, c] : pit->second) s.set_coeff(sub(n, shift), c);
    return {shift, s};
}

std::string GradedElement::to_string() const {
    if (pieces_.empty()) return "0";
    std::ostringstream os;
    bool first_term = true;
    for (const auto &[m, piece] : pieces_)
        for (const auto &[n, c] : piece) {
            if (!first_term) os << " + ";
            first_term = false;
            os << rational_to_string(c);
            for (std::size_t i = 0; i < rank_; ++i)
                if (m[i] != 0) os << "*z" << (i + 1) << "^" << m[i];
            for (std::size_t i = 0; i < rank_; ++i)
                if (n[i] != 0) os << "*h" << (i + 1) << "^" << n[i];
        }
    return os.str();
}

GradedElement PointedElement::to_graded(const ExtendedExchangeMatrix &B) const {
    GradedElement g(m.size(), F.order());
    MVec base = sub(m, B.row_times_B(sigma_shift));
    for (const auto &[e, c] : F.terms()) g.add_term(base, add(e, sigma_shift), c);
    return g;
}

} // namespace thetalab
