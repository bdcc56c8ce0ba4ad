#pragma once

#include <map>

#include "thetalab/broken_lines.hpp"
#include "thetalab/dominance.hpp"

namespace thetalab {

// a_Q(p1, p2, m) for each m with a nonzero entry: a series in the sigma
// variables (exponent vectors are sigma-exponents), truncated at order D.
struct StructureConstantTable {
    MVec p1, p2;
    std::int64_t order;
    QVec Q;
    std::map<MVec, TruncatedSeries, GradedLexLess> entries;
};

// Sum of c_{g1} c_{g2} sigma^{n_{g1} + n_{g2}} over pairs of broken lines for
// p1 and p2 with endpoint Q and m_{g1} + m_{g2} = m.  A zero p_i contributes
// the single trivial line (theta_0 = 1).
TruncatedSeries a_q(ThetaEngine &engine, const MVec &p1, const MVec &p2, const MVec &m, const QVec &Q,
                    std::int64_t D);

// The whole table at one Q.
StructureConstantTable a_q_table(ThetaEngine &engine, const MVec &p1, const MVec &p2, const QVec &Q,
                                 std::int64_t D);

// a(p1, p2, m) as the limit Q -> m, realized by a two-point stability probe
// at Q = eps m + eps^2 g; throws VerificationError when the two probes
// disagree at this order.
TruncatedSeries a_limit(ThetaEngine &engine, const MVec &p1, const MVec &p2, const MVec &m,
                        std::int64_t D);

struct ExpansionTerm {
    MVec m;
    NVec n;
    Rational coeff;
};

// Coefficients c_{m,n} of prod theta_{m_i}^{a_i} = sum c_{m,n} sigma^n
// theta_{m+nB}, extracted by minimal-exponent triangular elimination.
std::vector<ExpansionTerm> expand_product_in_theta_basis(
    ThetaEngine &engine, const std::vector<std::pair<MVec, std::int64_t>> &factors, std::int64_t D);

struct SymmetryCheck {
    bool passed = true;
    std::optional<MVec> orbit_escapee;    // support point whose orbit left the support
    std::optional<MVec> unbounded_orbit;  // support point whose orbit exceeded the bound
};

// The support {m} of an expansion must be a union of (eta_kseq)^ell-orbits.
SymmetryCheck verify_symmetry_support(const ExtendedExchangeMatrix &btilde, const IndexSeq &kseq,
                                      const std::vector<ExpansionTerm> &expansion, std::int64_t ell,
                                      std::size_t max_iter);

// A pair of broken lines contributes to a_Q(p1,p2,m) iff its image under
// eta_kseq contributes to the mutated structure constant; requires m and Q in
// the same domain of definition.
bool verify_mut_pair(const ScatteringDiagram &diagram, const BrokenLine &g1, const BrokenLine &g2,
                     const IndexSeq &kseq, const QVec &Q, const MVec &m);

} // namespace thetalab
