#include "thetalab/exchange.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "thetalab/errors.hpp"

namespace thetalab {

std::optional<std::vector<std::int64_t>> minimal_skew_symmetrizers(
    const std::vector<std::vector<std::int64_t>> &b) {
    const std::size_t r = b.size();
    // Propagate d_j / d_i = -eps_ij / eps_ji along nonzero entries, component
    // by component, then clear denominators and normalize the overall gcd.
    std::vector<Rational> t(r, Rational(0));
    std::vector<std::size_t> stack;
    for (std::size_t root = 0; root < r; ++root) {
        if (t[root] != 0) continue;
        t[root] = 1;
        stack.push_back(root);
        while (!stack.empty()) {
            std::size_t i = stack.back();
            stack.pop_back();
            for (std::size_t j = 0; j < r; ++j) {
                if (i == j) continue;
                if ((b[i][j] == 0) != (b[j][i] == 0)) return std::nullopt;
                if (b[i][j] == 0) continue;
                if (sgn(b[i][j]) == sgn(b[j][i])) return std::nullopt; // needs opposite signs
                Rational tj = -t[i] * Rational(b[i][j]) / Rational(b[j][i]);
                if (t[j] == 0) {
                    t[j] = tj;
                    stack.push_back(j);
                } else if (t[j] != tj) {
                    return std::nullopt;
                }
            }
        }
    }
    BigInt lcm_den = 1;
    for (const auto &x : t) lcm_den = boost::multiprecision::lcm(lcm_den, den(x));
    BigInt gcd_num = 0;
    std::vector<BigInt> scaled(r);
    for (std::size_t i = 0; i < r; ++i) {
        scaled[i] = num(t[i]) * (lcm_den / den(t[i]));
        gcd_num = boost::multiprecision::gcd(gcd_num, scaled[i]);
    }
    std::vector<std::int64_t> d(r);
    for (std::size_t i = 0; i < r; ++i) d[i] = static_cast<std::int64_t>(scaled[i] / gcd_num);
    // Final check of d_i eps_ij = -d_j eps_ji.
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j)
            if (d[i] * b[i][j] != -d[j] * b[j][i]) return std::nullopt;
    return d;
}

ExtendedExchangeMatrix::ExtendedExchangeMatrix(std::vector<int> uf_labels, std::vector<int> fr_labels,
                                               std::vector<std::vector<std::int64_t>> entries,
                                               std::optional<std::vector<std::int64_t>> d)
    : uf_labels_(std::move(uf_labels)), fr_labels_(std::move(fr_labels)), rows_(std::move(entries)) {
    const std::size_t r = uf_labels_.size();
    if (r == 0) throw PreconditionError("I_uf must be nonempty");
    if (rows_.size() != r) throw PreconditionError("matrix must have one row per unfrozen index");
    const std::size_t n = r + fr_labels_.size();
    for (const auto &row : rows_)
        if (row.size() != n) throw PreconditionError("matrix must have one column per index");
    std::set<int> labels(uf_labels_.begin(), uf_labels_.end());
    for (int l : fr_labels_) labels.insert(l);
    if (labels.size() != n) throw PreconditionError("index labels must be distinct");
    validate_and_fill_d(std::move(d));
}

void ExtendedExchangeMatrix::validate_and_fill_d(std::optional<std::vector<std::int64_t>> d) {
    auto b = square_entries();
    if (d) {
        const std::size_t r = rank();
        if (d->size() != r) throw PreconditionError("d must have one entry per unfrozen index");
        for (auto x : *d)
            if (x <= 0) throw PreconditionError("skew-symmetrizers must be positive");
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j)
                if ((*d)[i] * b[i][j] != -(*d)[j] * b[j][i])
                    throw PreconditionError("supplied d does not skew-symmetrize the exchange matrix");
        d_ = std::move(*d);
        return;
    }
    auto computed = minimal_skew_symmetrizers(b);
    if (!computed) throw PreconditionError("matrix is not skew-symmetrizable");
    d_ = std::move(*computed);
}

ExtendedExchangeMatrix ExtendedExchangeMatrix::from_square(
    std::vector<std::vector<std::int64_t>> b, std::optional<std::vector<std::int64_t>> d) {
    std::vector<int> uf(b.size());
    std::iota(uf.begin(), uf.end(), 1);
    return ExtendedExchangeMatrix(uf, {}, std::move(b), std::move(d));
}

ExtendedExchangeMatrix ExtendedExchangeMatrix::principal(
    std::vector<std::vector<std::int64_t>> b, std::optional<std::vector<std::int64_t>> d) {
    const std::size_t r = b.size();
    std::vector<int> uf(r), fr(r);
    std::iota(uf.begin(), uf.end(), 1);
    std::iota(fr.begin(), fr.end(), static_cast<int>(r) + 1);
    for (std::size_t i = 0; i < r; ++i) {
        if (b[i].size() != r) throw PreconditionError("principal extension needs a square matrix");
        for (std::size_t j = 0; j < r; ++j) b[i].push_back(i == j ? 1 : 0);
    }
    return ExtendedExchangeMatrix(uf, fr, std::move(b), std::move(d));
}

std::vector<std::vector<std::int64_t>> ExtendedExchangeMatrix::square_entries() const {
    std::vector<std::vector<std::int64_t>> b(rank());
    for (std::size_t i = 0; i < rank(); ++i)
        b[i].assign(rows_[i].begin(), rows_[i].begin() + static_cast<std::ptrdiff_t>(rank()));
    return b;
}

std::vector<std::vector<std::int64_t>> ExtendedExchangeMatrix::frozen_entries() const {
    std::vector<std::vector<std::int64_t>> f(rank());
    for (std::size_t i = 0; i < rank(); ++i)
        f[i].assign(rows_[i].begin() + static_cast<std::ptrdiff_t>(rank()), rows_[i].end());
    return f;
}

ExtendedExchangeMatrix ExtendedExchangeMatrix::mutate(std::size_t k) const {
    if (k >= rank()) throw PreconditionError("mutation index must be unfrozen");
    ExtendedExchangeMatrix out(*this);
    const std::size_t n = total();
    for (std::size_t i = 0; i < rank(); ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == k || j == k) {
                out.rows_[i][j] = -rows_[i][j];
            } else {
                std::int64_t eik = rows_[i][k], ekj = rows_[k][j];
                out.rows_[i][j] = rows_[i][j] + std::max<std::int64_t>(-eik, 0) * ekj +
                                  eik * std::max<std::int64_t>(ekj, 0);
            }
        }
    }
    return out;
}

ExtendedExchangeMatrix ExtendedExchangeMatrix::mutate_seq(const std::vector<std::size_t> &kseq) const {
    ExtendedExchangeMatrix out(*this);
    for (auto k : kseq) out = out.mutate(k);
    return out;
}

bool ExtendedExchangeMatrix::same_square(const ExtendedExchangeMatrix &other) const {
    return rank() == other.rank() && square_entries() == other.square_entries();
}

bool ExtendedExchangeMatrix::operator==(const ExtendedExchangeMatrix &other) const {
    return uf_labels_ == other.uf_labels_ && fr_labels_ == other.fr_labels_ && rows_ == other.rows_ &&
           d_ == other.d_;
}

MVec ExtendedExchangeMatrix::row_times_B(const NVec &n) const {
    const std::size_t r = rank();
    if (n.size() != r) throw PreconditionError("vector rank mismatch");
    MVec out(r, 0);
    for (std::size_t j = 0; j < r; ++j)
        for (std::size_t i = 0; i < r; ++i) out[j] += n[i] * rows_[i][j];
    return out;
}

Rational ExtendedExchangeMatrix::pairing(const MVec &m, const NVec &n) const {
    Rational s = 0;
    for (std::size_t i = 0; i < rank(); ++i) s += Rational(m[i] * n[i], d_[i]);
    return s;
}

Rational ExtendedExchangeMatrix::pairing(const QVec &m, const NVec &n) const {
    Rational s = 0;
    for (std::size_t i = 0; i < rank(); ++i) s += m[i] * Rational(n[i], d_[i]);
    return s;
}

NVec ExtendedExchangeMatrix::n_circ(const NVec &n) const {
    // smallest t > 0 with t*n_i divisible by d_i for all i
    std::int64_t t = 1;
    for (std::size_t i = 0; i < rank(); ++i) {
        if (n[i] == 0) continue;
        std::int64_t g = std::gcd(d_[i], n[i] < 0 ? -n[i] : n[i]);
        t = std::lcm(t, d_[i] / g);
    }
    return scale(t, n);
}

std::int64_t ExtendedExchangeMatrix::pairing_n_circ(const MVec &m, const NVec &nc) const {
    Rational p = pairing(m, nc);
    if (!is_integer(p))
        throw PreconditionError("pairing <m, n°> is not an integer; m is outside M°_uf");
    return to_int64(p);
}

bool ExtendedExchangeMatrix::nondegenerate_coefficients() const {
    // exact rank test over Q of the frozen block
    auto f = frozen_entries();
    const std::size_t r = rank(), c = frozen_count();
    if (c < r) return false;
    std::vector<std::vector<Rational>> a(r, std::vector<Rational>(c));
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) a[i][j] = f[i][j];
    std::size_t row = 0;
    for (std::size_t col = 0; col < c && row < r; ++col) {
        std::size_t piv = row;
        while (piv < r && a[piv][col] == 0) ++piv;
        if (piv == r) continue;
        std::swap(a[piv], a[row]);
        for (std::size_t i = row + 1; i < r; ++i) {
            if (a[i][col] == 0) continue;
            Rational factor = a[i][col] / a[row][col];
            for (std::size_t j = col; j < c; ++j) a[i][j] -= factor * a[row][j];
        }
        ++row;
    }
    return row == r;
}

std::optional<SignVector> ExtendedExchangeMatrix::frozen_row_signs() const {
    auto f = frozen_entries();
    SignVector signs(rank(), 0);
    for (std::size_t i = 0; i < rank(); ++i) {
        int s = 0;
        for (auto x : f[i]) {
            if (x == 0) continue;
            int xs = sgn(x);
            if (s == 0)
                s = xs;
            else if (s != xs)
                return std::nullopt; // mixed signs
        }
        if (s == 0) return std::nullopt; // zero row has no sign
        signs[i] = s;
    }
    return signs;
}

std::string ExtendedExchangeMatrix::to_string() const {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < rank(); ++i) {
        if (i) os << ";";
        os << "[";
        for (std::size_t j = 0; j < total(); ++j) {
            if (j) os << ",";
            os << rows_[i][j];
        }
        os << "]";
    }
    os << "] d=";
    os << "[";
    for (std::size_t i = 0; i < rank(); ++i) {
        if (i) os << ",";
        os << d_[i];
    }
    os << "]";
    return os.str();
}

} // namespace thetalab
