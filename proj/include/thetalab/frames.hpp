#pragma once

#include "thetalab/graded.hpp"
#include "thetalab/mutation.hpp"

namespace thetalab {

// A seed frame: the coefficient matrix reached by a mutation sequence,
// together with the signs sgn(sigma_i) at that frame.  Constructing a frame
// fails when some frozen row has no sign (degenerate coefficients).
struct SeedFrame {
    IndexSeq kseq;
    ExtendedExchangeMatrix Btilde;
    SignVector signs;

    static SeedFrame at(const ExtendedExchangeMatrix &B0, const IndexSeq &kseq);
    SeedFrame advanced(std::size_t k) const;
};

// Checks that every frame along every reduced sequence of length <= depth has
// nondegenerate coefficients with per-row signs.
bool signed_nondegenerating_up_to_depth(const ExtendedExchangeMatrix &B0, std::size_t depth);

// Rewrites x, expressed in the frame's variables, in the variables of the
// frame mutated at k (simultaneous substitution for z, sigma, zeta).  Exact
// on elements whose stored terms are complete; expansions of (1 + zeta'_k)^a
// are truncated at x's order.
GradedElement substitute_mutation(const GradedElement &x, const SeedFrame &frame, std::size_t k);

// Iterated substitution along kseq starting from frame B0.
GradedElement substitute_mutation_seq(const GradedElement &x, const ExtendedExchangeMatrix &B0,
                                      const IndexSeq &kseq);

// Binomial coefficient with integer (possibly negative) top argument.
Rational generalized_binomial(std::int64_t a, std::int64_t j);

} // namespace thetalab
