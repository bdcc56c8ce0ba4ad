#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "thetalab/exchange.hpp"

namespace thetalab {

// Index sequences use application order: kseq[0] is applied first.  All
// indices are 0-based row indices into the unfrozen part.
using IndexSeq = std::vector<std::size_t>;

// One step of the mutation map eta_k^B: append the coordinate row of v under
// B, mutate at k, read the new row.  Piecewise linear with the two pieces
// separated by the hyperplane e_k-perp.
QVec eta_step(const ExtendedExchangeMatrix &B, std::size_t k, const QVec &v);

// eta_kseq^B(v): the composite eta_{k_q}^{B_q} ... eta_{k_1}^{B_1}.
QVec mutation_map(const ExtendedExchangeMatrix &B, const IndexSeq &kseq, const QVec &v);
MVec mutation_map(const ExtendedExchangeMatrix &B, const IndexSeq &kseq, const MVec &v);

// Inverse of the composite map, using (eta_k^B)^{-1} = eta_k^{mu_k(B)}.
QVec mutation_map_inverse(const ExtendedExchangeMatrix &B, const IndexSeq &kseq, const QVec &v);
MVec mutation_map_inverse(const ExtendedExchangeMatrix &B, const IndexSeq &kseq, const MVec &v);

// Visits reduced sequences (no immediate repeats) of length min_len..max_len
// in lexicographic order, including the empty sequence when min_len == 0.
// Stops early if fn returns false.
void for_each_reduced_sequence(std::size_t rank, std::size_t min_len, std::size_t max_len,
                               const std::function<bool(const IndexSeq &)> &fn);

// True iff sgn(eta_kseq(m)) == sgn(eta_kseq(p)) for every reduced sequence of
// length <= depth.  True is an over-approximation of B-equivalence; false is
// definitive.
bool b_equivalent_up_to_depth(const ExtendedExchangeMatrix &B, const QVec &m, const QVec &p,
                              std::size_t depth);

// All reduced sequences kseq with length in [1, max_len] and mu_kseq(B) = B
// (square parts compared), in lexicographic order.
std::vector<IndexSeq> find_mutation_symmetries(const ExtendedExchangeMatrix &B, std::size_t max_len);

struct OrbitResult {
    std::vector<MVec> orbit; // starts at m; closed when bounded
    bool bound_exceeded = false;
    std::size_t period() const { return orbit.size(); }
};

// Iterates the fixed map eta_kseq^B until it returns to m or max_iter steps.
OrbitResult eta_orbit(const ExtendedExchangeMatrix &B, const IndexSeq &kseq, const MVec &m,
                      std::size_t max_iter);

// True iff at every step i the images of v and w lie weakly on the same side
// of e_{k_i}-perp.
bool same_domain_of_definition(const ExtendedExchangeMatrix &B, const IndexSeq &kseq, const QVec &v,
                               const QVec &w);

} // namespace thetalab
