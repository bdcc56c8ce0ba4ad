#pragma once

#include <array>
#include <functional>

#include "thetalab/structure.hpp"

namespace thetalab {

// Supplies the basis element u_m = z^m * (constant-term-1 series) for any m.
struct ReducedBasisSpec {
    std::function<PointedElement(const MVec &, std::int64_t order)> generator;
    std::string provenance; // "theta" | "ray" | "user"
};

ReducedBasisSpec theta_basis(ThetaEngine &engine);

// Unique coefficients with v = sum c_{m,n} sigma^n u_m up to degree D.
std::vector<ExpansionTerm> expand_in_reduced_basis(const GradedElement &v,
                                                   const ReducedBasisSpec &basis,
                                                   const ExtendedExchangeMatrix &btilde,
                                                   std::int64_t D);

// Coefficient table c^{(p)}_n -> inverse table d^{(p)}_r via alternating sums
// over componentwise chains; c(p, 0) must be 1 for all p.
using CoefficientTable = std::function<Rational(const MVec &p, const NVec &n)>;
Rational invert_change_of_basis(const CoefficientTable &c, const ExtendedExchangeMatrix &btilde,
                                const MVec &p, const NVec &r);

struct PointednessVerdict {
    bool pointed = true;
    std::optional<IndexSeq> failing_kseq;
    std::string detail;
};

// u (homogeneous, complete to order D) is pointed up to the given depth: at
// every reduced frame it is (sigma')^phi (z')^kappa times a constant-term-1
// power series.
PointednessVerdict is_pointed_up_to_depth(const GradedElement &u, const ExtendedExchangeMatrix &btilde,
                                          std::size_t depth, std::int64_t D);

// Rank-2 rational simplicial fan given by primitive ray generators.
struct RationalFan2D {
    struct Cone {
        std::vector<MVec> rays; // 1 or 2 primitive generators
    };
    std::vector<Cone> cones;

    // determinant-1 test on every 2-ray cone
    bool is_integral() const;
};

// The fan of a finite-type rank-2 diagram: initial rays plus outgoing wall
// rays, consecutive pairs forming the maximal cones.
RationalFan2D finite_type_fan(const ScatteringDiagram &diagram);

// rho_m = prod theta_{r_i}^{c_i} where m = sum c_i r_i over the rays of the
// smallest cone containing m.
PointedElement ray_basis_element(const RationalFan2D &fan, ThetaEngine &engine, const MVec &m,
                                 std::int64_t D);

struct BConeExpandResult {
    std::vector<ExpansionTerm> expansion;
    bool constant_term_one = false;
    std::vector<ExpansionTerm> n_set_violations;
    std::vector<ExpansionTerm> dom_violations;
    bool passed() const {
        return constant_term_one && n_set_violations.empty() && dom_violations.empty();
    }
};

// Expands a product of theta powers whose g-vectors are pairwise B-equivalent
// at the given depth and checks the support against the N-set and dominance
// membership tests.
BConeExpandResult bcone_product_expand(ThetaEngine &engine,
                                       const std::vector<std::pair<MVec, std::int64_t>> &factors,
                                       std::int64_t D, std::size_t depth);

} // namespace thetalab
