#include "thetalab/structure.hpp"

#include <algorithm>

#include "thetalab/errors.hpp"

namespace thetalab {

namespace {

struct LineView {
    Rational c;
    MVec m;
    NVec n;
};

std::vector<LineView> line_views(ThetaEngine &engine, const MVec &p, const QVec &Q, std::int64_t D) {
    if (is_zero(p)) return {LineView{1, p, zero_vec(p.size())}};
    std::vector<LineView> out;
    for (const auto &l : engine.enumerate(p, Q, D)) {
        const auto &lab = l.final_label();
        out.push_back(LineView{lab.c, lab.m, lab.n});
    }
    return out;
}

} // namespace

TruncatedSeries a_q(ThetaEngine &engine, const MVec &p1, const MVec &p2, const MVec &m, const QVec &Q,
                    std::int64_t D) {
    auto l1 = line_views(engine, p1, Q, D);
    auto l2 = line_views(engine, p2, Q, D);
    TruncatedSeries out(p1.size(), D);
    for (const auto &a : l1)
        for (const auto &b : l2)
            if (add(a.m, b.m) == m) out.add_term(add(a.n, b.n), a.c * b.c);
    return out;
}

StructureConstantTable a_q_table(ThetaEngine &engine, const MVec &p1, const MVec &p2, const QVec &Q,
                                 std::int64_t D) {
    auto l1 = line_views(engine, p1, Q, D);
    auto l2 = line_views(engine, p2, Q, D);
    StructureConstantTable table{p1, p2, D, Q, {}};
    for (const auto &a : l1)
        for (const auto &b : l2) {
            MVec m = add(a.m, b.m);
            auto it = table.entries.find(m);
            if (it == table.entries.end())
                it = table.entries.emplace(m, TruncatedSeries(p1.size(), D)).first;
            it->second.add_term(add(a.n, b.n), a.c * b.c);
        }
    for (auto it = table.entries.begin(); it != table.entries.end();)
        it = it->second.is_zero() ? table.entries.erase(it) : std::next(it);
    return table;
}

TruncatedSeries a_limit(ThetaEngine &engine, const MVec &p1, const MVec &p2, const MVec &m,
                        std::int64_t D) {
    // at m = 0 the probe degenerates to eps^2 g, a fixed generic direction
    const QVec g{Rational(1), Rational(1, 2)};
    auto probe = [&](const Rational &eps) {
        QVec Q = qadd(qscale(eps, to_qvec(m)), qscale(eps * eps, g));
        return a_q(engine, p1, p2, m, Q, D);
    };
    Rational eps(1, 5);
    for (int attempt = 0; attempt < 40; ++attempt, eps /= 2) {
        TruncatedSeries first(p1.size(), D), second(p1.size(), D);
        try {
            first = probe(eps);
            second = probe(eps / 2);
        } catch (const GenericityError &) {
            continue;
        }
        if (first == second) return first;
        throw VerificationError("limit probe unstable at this order: " + first.to_string("s") +
                                " vs " + second.to_string("s"));
    }
    throw GenericityError("no generic probe points approaching m");
}

std::vector<ExpansionTerm> expand_product_in_theta_basis(
    ThetaEngine &engine, const std::vector<std::pair<MVec, std::int64_t>> &factors, std::int64_t D) {
    const std::size_t rank = engine.diagram().btilde().rank();
    MVec p = zero_vec(rank);
    TruncatedSeries H = TruncatedSeries::one(rank, D);
    for (const auto &[mi, ai] : factors) {
        if (ai < 0) throw PreconditionError("factor exponents must be nonnegative");
        if (ai == 0) continue;
        TruncatedSeries F = is_zero(mi) ? TruncatedSeries::one(rank, D)
                                        : engine.theta_positive(mi, D, false).value.F;
        H *= F.pow(ai);
        for (std::size_t i = 0; i < rank; ++i) p[i] += ai * mi[i];
    }

    std::vector<ExpansionTerm> out;
    TruncatedSeries resid = H;
    while (!resid.is_zero()) {
        // graded-lex least term has componentwise-minimal exponent
        auto [n, c] = *resid.terms().begin();
        MVec mn = add(p, engine.diagram().btilde().row_times_B(n));
        out.push_back(ExpansionTerm{mn, n, c});
        TruncatedSeries F = is_zero(mn) ? TruncatedSeries::one(rank, D - total_degree(n))
                                        : engine.theta_positive(mn, D - total_degree(n), false).value.F;
        resid -= F.shifted(n).scaled(c).truncated(D);
    }
    return out;
}

SymmetryCheck verify_symmetry_support(const ExtendedExchangeMatrix &btilde, const IndexSeq &kseq,
                                      const std::vector<ExpansionTerm> &expansion, std::int64_t ell,
                                      std::size_t max_iter) {
    if (!(btilde.mutate_seq(kseq).square_entries() == btilde.square_entries()))
        throw PreconditionError("kseq is not a mutation symmetry");
    IndexSeq power;
    for (std::int64_t i = 0; i < ell; ++i) power.insert(power.end(), kseq.begin(), kseq.end());

    std::vector<MVec> support;
    for (const auto &t : expansion)
        if (std::find(support.begin(), support.end(), t.m) == support.end()) support.push_back(t.m);

    SymmetryCheck check;
    for (const auto &m0 : support) {
        OrbitResult orbit = eta_orbit(btilde, power, m0, max_iter);
        if (orbit.bound_exceeded) {
            check.passed = false;
            check.unbounded_orbit = m0;
            return check;
        }
        for (const auto &m : orbit.orbit) {
            if (std::find(support.begin(), support.end(), m) == support.end()) {
                check.passed = false;
                check.orbit_escapee = m0;
                return check;
            }
        }
    }
    return check;
}

bool verify_mut_pair(const ScatteringDiagram &diagram, const BrokenLine &g1, const BrokenLine &g2,
                     const IndexSeq &kseq, const QVec &Q, const MVec &m) {
    if (!same_domain_of_definition(diagram.btilde(), kseq, to_qvec(m), Q))
        throw PreconditionError("m and Q are not in the same domain of definition");

    bool before = add(g1.final_label().m, g2.final_label().m) == m;

    SeedFrame frame = SeedFrame::at(diagram.btilde(), {});
    BrokenLine h1(g1), h2(g2);
    for (auto k : kseq) {
        h1 = mutate_broken_line(h1, frame, k);
        h2 = mutate_broken_line(h2, frame, k);
        frame = frame.advanced(k);
    }
    MVec m_image = mutation_map(diagram.btilde(), kseq, m);
    bool after = add(h1.final_label().m, h2.final_label().m) == m_image;
    return before == after;
}

} // namespace thetalab
