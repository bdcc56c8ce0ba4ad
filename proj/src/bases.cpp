#include "thetalab/bases.hpp"

#include <algorithm>
#include <map>

#include "thetalab/errors.hpp"

namespace thetalab {

ReducedBasisSpec theta_basis(ThetaEngine &engine) {
    return ReducedBasisSpec{
        [&engine](const MVec &m, std::int64_t order) -> PointedElement {
            if (is_zero(m))
                return PointedElement{m, zero_vec(m.size()), TruncatedSeries::one(m.size(), order)};
            return engine.theta_positive(m, order, false).value;
        },
        "theta"};
}

std::vector<ExpansionTerm> expand_in_reduced_basis(const GradedElement &v,
                                                   const ReducedBasisSpec &basis,
                                                   const ExtendedExchangeMatrix &btilde,
                                                   std::int64_t D) {
    std::vector<ExpansionTerm> out;
    for (const auto &[q, piece] : v.pieces()) {
        // the piece is z^q * H with H a power series; nonnegative exponents only
        TruncatedSeries resid(v.rank(), D);
        for (const auto &[n, c] : piece) {
            if (!is_nonnegative(n))
                throw PreconditionError("element has negative zeta exponents; not in the span");
            resid.add_term(n, c);
        }
        while (!resid.is_zero()) {
            auto [n, c] = *resid.terms().begin();
            MVec mn = add(q, btilde.row_times_B(n));
            out.push_back(ExpansionTerm{mn, n, c});
            PointedElement u = basis.generator(mn, D - total_degree(n));
            if (u.F.constant_term() != 1 || !is_zero(u.sigma_shift))
                throw PreconditionError("basis element is not in reduced form");
            resid -= u.F.shifted(n).scaled(c).truncated(D);
        }
    }
    std::sort(out.begin(), out.end(), [](const ExpansionTerm &a, const ExpansionTerm &b) {
        return GradedLexLess{}(a.n, b.n);
    });
    return out;
}

namespace {

Rational invert_rec(const CoefficientTable &c, const ExtendedExchangeMatrix &btilde, const MVec &p,
                    const NVec &r, std::map<std::pair<MVec, NVec>, Rational> &memo) {
    if (is_zero(r)) return 1;
    auto key = std::make_pair(p, r);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    // d_r = - sum over first steps 0 < s <= r of c^{(p)}_s d^{(p+sB)}_{r-s}
    Rational total = 0;
    std::vector<NVec> steps;
    NVec s = zero_vec(r.size());
    // enumerate 0 <= s <= r componentwise
    while (true) {
        if (!is_zero(s)) steps.push_back(s);
        std::size_t i = 0;
        while (i < s.size() && s[i] == r[i]) s[i++] = 0;
        if (i == s.size()) break;
        ++s[i];
    }
    for (const auto &step : steps) {
        Rational cs = c(p, step);
        if (cs == 0) continue;
        MVec p_next = add(p, btilde.row_times_B(step));
        total -= cs * invert_rec(c, btilde, p_next, sub(r, step), memo);
    }
    memo.emplace(key, total);
    return total;
}

} // namespace

Rational invert_change_of_basis(const CoefficientTable &c, const ExtendedExchangeMatrix &btilde,
                                const MVec &p, const NVec &r) {
    std::map<std::pair<MVec, NVec>, Rational> memo;
    return invert_rec(c, btilde, p, r, memo);
}

PointednessVerdict is_pointed_up_to_depth(const GradedElement &u, const ExtendedExchangeMatrix &btilde,
                                          std::size_t depth, std::int64_t D) {
    auto g = u.g_vector();
    if (!g) throw PreconditionError("pointedness is defined for homogeneous elements");
    const MVec m = *g;
    PointednessVerdict verdict;
    for_each_reduced_sequence(btilde.rank(), 0, depth, [&](const IndexSeq &kseq) {
        GradedElement image = substitute_mutation_seq(u, btilde, kseq).truncated(D);
        PhiKappaFrame pk = phi_kappa(btilde, kseq, m);
        ExtendedExchangeMatrix bt_k = btilde.mutate_seq(kseq);
        // expected: (sigma')^phi (z')^kappa (1 + ...) = z^{kappa - phi B'} zeta^{phi} (1 + ...)
        MVec expected_m = sub(pk.kappa, bt_k.row_times_B(pk.phi));
        auto gv = image.g_vector();
        if (!gv || *gv != expected_m) {
            verdict = PointednessVerdict{false, kseq, "graded piece differs from kappa/phi form"};
            return false;
        }
        // support must be phi + (nonnegative) with coefficient 1 at phi, so
        // the componentwise minimum of the support is exactly phi
        auto blk = image.block(expected_m);
        if (blk.shift != pk.phi || blk.series.constant_term() != 1) {
            verdict = PointednessVerdict{false, kseq, "series is not zeta^phi * (1 + ...)"};
            return false;
        }
        return true;
    });
    return verdict;
}

bool RationalFan2D::is_integral() const {
    for (const auto &cone : cones) {
        if (cone.rays.size() != 2) continue;
        std::int64_t det = cone.rays[0][0] * cone.rays[1][1] - cone.rays[0][1] * cone.rays[1][0];
        if (det != 1 && det != -1) return false;
    }
    return true;
}

RationalFan2D finite_type_fan(const ScatteringDiagram &diagram) {
    auto slices = diagram.ray_slices(); // sorted ccw from (1,0)
    if (slices.size() < 2) throw PreconditionError("fan needs at least two rays");
    RationalFan2D fan;
    for (std::size_t i = 0; i < slices.size(); ++i) {
        const MVec &a = slices[i].dir;
        const MVec &b = slices[(i + 1) % slices.size()].dir;
        fan.cones.push_back(RationalFan2D::Cone{{a, b}});
    }
    return fan;
}

PointedElement ray_basis_element(const RationalFan2D &fan, ThetaEngine &engine, const MVec &m,
                                 std::int64_t D) {
    if (is_zero(m))
        return PointedElement{m, zero_vec(m.size()), TruncatedSeries::one(m.size(), D)};
    // smallest cone first: rays before two-dimensional cones
    for (const auto &cone : fan.cones) {
        for (const auto &ray : cone.rays) {
            // m = c * ray?
            std::int64_t c = 0;
            for (std::size_t i = 0; i < 2; ++i)
                if (ray[i] != 0) c = m[i] / ray[i];
            if (c > 0 && m == scale(c, ray)) {
                TruncatedSeries F = engine.theta_positive(ray, D, false).value.F.pow(c);
                return PointedElement{m, zero_vec(2), F};
            }
        }
    }
    for (const auto &cone : fan.cones) {
        if (cone.rays.size() != 2) continue;
        const MVec &r1 = cone.rays[0], &r2 = cone.rays[1];
        std::int64_t det = r1[0] * r2[1] - r1[1] * r2[0];
        if (det == 0) continue;
        // m = c1 r1 + c2 r2 by Cramer
        Rational c1 = Rational(m[0] * r2[1] - m[1] * r2[0], det);
        Rational c2 = Rational(r1[0] * m[1] - r1[1] * m[0], det);
        if (c1 <= 0 || c2 <= 0) continue;
        if (!is_integer(c1) || !is_integer(c2))
            throw PreconditionError("fan is not integral at m: fractional ray coefficients");
        TruncatedSeries F = engine.theta_positive(r1, D, false).value.F.pow(to_int64(c1)) *
                            engine.theta_positive(r2, D, false).value.F.pow(to_int64(c2));
        return PointedElement{m, zero_vec(2), F};
    }
    throw PreconditionError("fan does not cover m");
}

BConeExpandResult bcone_product_expand(ThetaEngine &engine,
                                       const std::vector<std::pair<MVec, std::int64_t>> &factors,
                                       std::int64_t D, std::size_t depth) {
    const auto &btilde = engine.diagram().btilde();
    for (std::size_t i = 0; i < factors.size(); ++i)
        for (std::size_t j = i + 1; j < factors.size(); ++j)
            if (!b_equivalent_up_to_depth(btilde, to_qvec(factors[i].first), to_qvec(factors[j].first),
                                          depth))
                throw PreconditionError("factor g-vectors are not B-equivalent at this depth");

    BConeExpandResult res;
    res.expansion = expand_product_in_theta_basis(engine, factors, D);
    MVec m = zero_vec(btilde.rank());
    for (const auto &[mi, ai] : factors)
        for (std::size_t i = 0; i < m.size(); ++i) m[i] += ai * mi[i];
    for (const auto &t : res.expansion) {
        if (is_zero(t.n)) res.constant_term_one = (t.coeff == 1 && t.m == m);
        if (n_set_membership(btilde, m, t.n, depth).is_out()) res.n_set_violations.push_back(t);
        if (dom_membership(btilde, m, t.m, depth).is_out()) res.dom_violations.push_back(t);
    }
    return res;
}

} // namespace thetalab
