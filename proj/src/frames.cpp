#include "thetalab/frames.hpp"

#include "thetalab/errors.hpp"

namespace thetalab {

SeedFrame SeedFrame::at(const ExtendedExchangeMatrix &B0, const IndexSeq &kseq) {
    ExtendedExchangeMatrix bt = B0.mutate_seq(kseq);
    auto signs = bt.frozen_row_signs();
    if (!signs) {
        std::string where;
        for (auto k : kseq) where += (where.empty() ? "" : ",") + std::to_string(k + 1);
        throw DegenerateCoefficientsError("coefficients at frame (" +
                                          (where.empty() ? "initial" : where) +
                                          ") have no row signs");
    }
    return SeedFrame{kseq, std::move(bt), std::move(*signs)};
}

SeedFrame SeedFrame::advanced(std::size_t k) const {
    IndexSeq next(kseq);
    next.push_back(k);
    ExtendedExchangeMatrix bt = Btilde.mutate(k);
    auto signs = bt.frozen_row_signs();
    if (!signs) throw DegenerateCoefficientsError("mutated frame has no row signs");
    return SeedFrame{std::move(next), std::move(bt), std::move(*signs)};
}

bool signed_nondegenerating_up_to_depth(const ExtendedExchangeMatrix &B0, std::size_t depth) {
    bool ok = true;
    for_each_reduced_sequence(B0.rank(), 0, depth, [&](const IndexSeq &kseq) {
        auto bt = B0.mutate_seq(kseq);
        if (!bt.nondegenerate_coefficients() || !bt.frozen_row_signs()) {
            ok = false;
            return false;
        }
        return true;
    });
    return ok;
}

Rational generalized_binomial(std::int64_t a, std::int64_t j) {
    if (j < 0) return 0;
    Rational out = 1;
    for (std::int64_t t = 0; t < j; ++t) out *= Rational(a - t, t + 1);
    return out;
}

GradedElement substitute_mutation(const GradedElement &x, const SeedFrame &frame, std::size_t k) {
    const std::size_t r = x.rank();
    const std::int64_t D = x.order();
    const ExtendedExchangeMatrix &bt = frame.Btilde;
    if (k >= r) throw PreconditionError("substitution index must be unfrozen");
    const int sk = frame.signs[k];

    ExtendedExchangeMatrix bt_next = bt.mutate(k);
    GradedElement out(r, D);

    for (const auto &[m, piece] : x.pieces()) {
        for (const auto &[n, c] : piece) {
            // Pure (z, sigma) exponents of the term: z^p sigma^n.
            MVec p = add(m, bt.row_times_B(n));
            const std::int64_t a = p[k];

            // z-part image: z'^{p'} (1 + zeta'_k)^a (sigma'_k)^{-a [sgn sigma_k]_+}
            MVec p_new(p);
            p_new[k] = -a;
            for (std::size_t j = 0; j < r; ++j) {
                if (j == k) continue;
                p_new[j] += a * std::max<std::int64_t>(bt.eps(k, j), 0);
            }
            // sigma-part image exponent
            NVec n_new(n);
            std::int64_t nk = -n[k];
            for (std::size_t i = 0; i < r; ++i) {
                if (i == k) continue;
                nk += n[i] * std::max<std::int64_t>(sk * bt.eps(i, k), 0);
            }
            nk -= a * std::max(sk, 0);
            n_new[k] = nk;

            // back to canonical coordinates in the mutated frame
            MVec m_new = sub(p_new, bt_next.row_times_B(n_new));
            std::int64_t jmax = D - total_degree(n_new);
            if (a >= 0) jmax = std::min(jmax, a);
            for (std::int64_t j = 0; j <= jmax; ++j) {
                Rational coeff = c * generalized_binomial(a, j);
                if (coeff == 0) continue;
                NVec n_term(n_new);
                n_term[k] += j;
                out.add_term(m_new, n_term, coeff);
            }
        }
    }
    return out;
}

GradedElement substitute_mutation_seq(const GradedElement &x, const ExtendedExchangeMatrix &B0,
                                      const IndexSeq &kseq) {
    SeedFrame frame = SeedFrame::at(B0, {});
    GradedElement cur(x);
    for (auto k : kseq) {
        cur = substitute_mutation(cur, frame, k);
        frame = frame.advanced(k);
    }
    return cur;
}

} // namespace thetalab
