#pragma once

#include <optional>
#include <string>

#include "thetalab/frames.hpp"
#include "thetalab/mutation.hpp"

namespace thetalab {

// kappa(m, kseq) = eta_kseq(m) together with the sigma-exponent phi(m, kseq)
// of the pointed normal form at that frame.
struct PhiKappaFrame {
    IndexSeq kseq;
    MVec kappa;
    NVec phi;
};

// The lattice map with sigma^n = (sigma^(kseq))^{psi(n)}; defined only when
// every frame along kseq has signed coefficient data.
NVec psi(const ExtendedExchangeMatrix &btilde, const IndexSeq &kseq, const NVec &n);

PhiKappaFrame phi_kappa(const ExtendedExchangeMatrix &btilde, const IndexSeq &kseq, const MVec &m);

// nu_kseq^{(m)}(n) = psi_kseq(n) + phi(m + nB, kseq) - phi(m, kseq).
NVec nu_map(const ExtendedExchangeMatrix &btilde, const IndexSeq &kseq, const MVec &m, const NVec &n);

enum class Membership { In, Out, InAtDepth };

struct MembershipVerdict {
    Membership value;
    std::size_t depth;
    std::optional<IndexSeq> witness; // failing sequence when Out

    bool is_out() const { return value == Membership::Out; }
    std::string to_string() const;
};

// n in (the depth-limited approximation of) the set N_m: for every reduced
// sequence up to depth, eta(m+nB) - eta(m) = nu(n) * mu(B) and nu(n) >= 0.
MembershipVerdict n_set_membership(const ExtendedExchangeMatrix &btilde, const MVec &m, const NVec &n,
                                   std::size_t depth);

// p in (the depth-limited approximation of) the integral dominance region of
// m: for every reduced sequence, eta(p) - eta(m) is a nonnegative-integer row
// combination of mu_kseq(B).
MembershipVerdict dom_membership(const ExtendedExchangeMatrix &btilde, const MVec &m, const MVec &p,
                                 std::size_t depth);

// Decides whether x A = c has a solution x in Z^r with x >= 0 (A square,
// integer).  Exact for kernel rank <= 1; larger kernels use a bounded box
// search around a particular solution.
bool nonnegative_integer_row_solution(const std::vector<std::vector<std::int64_t>> &A, const MVec &c);

} // namespace thetalab
