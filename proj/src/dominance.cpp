#include "thetalab/dominance.hpp"

#include <algorithm>

#include "thetalab/errors.hpp"

namespace thetalab {

NVec psi(const ExtendedExchangeMatrix &btilde, const IndexSeq &kseq, const NVec &n) {
    SeedFrame frame = SeedFrame::at(btilde, {});
    NVec out(n);
    for (auto k : kseq) {
        // psi_k(n) = n + (-2 n_k + sum_i n_i [sgn(sigma_k) eps_ik]_+) e_k
        std::int64_t nk = -out[k];
        for (std::size_t i = 0; i < btilde.rank(); ++i) {
            if (i == k) continue;
            nk += out[i] * std::max<std::int64_t>(frame.signs[k] * frame.Btilde.eps(i, k), 0);
        }
        out[k] = nk;
        frame = frame.advanced(k);
    }
    return out;
}

PhiKappaFrame phi_kappa(const ExtendedExchangeMatrix &btilde, const IndexSeq &kseq, const MVec &m) {
    SeedFrame frame = SeedFrame::at(btilde, {});
    MVec kappa(m);
    NVec phi = zero_vec(btilde.rank());
    for (auto k : kseq) {
        // phi(m, k·kseq) = psi_k(phi) - [sgn(sigma_k) <kappa, d_k e_k>]_+ e_k
        std::int64_t pk = -phi[k];
        for (std::size_t i = 0; i < btilde.rank(); ++i) {
            if (i == k) continue;
            pk += phi[i] * std::max<std::int64_t>(frame.signs[k] * frame.Btilde.eps(i, k), 0);
        }
        pk -= std::max<std::int64_t>(frame.signs[k] * kappa[k], 0);
        phi[k] = pk;
        kappa = to_mvec(eta_step(frame.Btilde, k, to_qvec(kappa)));
        frame = frame.advanced(k);
    }
    return PhiKappaFrame{kseq, std::move(kappa), std::move(phi)};
}

NVec nu_map(const ExtendedExchangeMatrix &btilde, const IndexSeq &kseq, const MVec &m, const NVec &n) {
    NVec psi_n = psi(btilde, kseq, n);
    NVec phi_shift = phi_kappa(btilde, kseq, add(m, btilde.row_times_B(n))).phi;
    NVec phi_m = phi_kappa(btilde, kseq, m).phi;
    return add(psi_n, sub(phi_shift, phi_m));
}

std::string MembershipVerdict::to_string() const {
    switch (value) {
    case Membership::In: return "in";
    case Membership::Out: {
        std::string s = "out";
        if (witness) {
            s += " (witness ";
            for (std::size_t i = 0; i < witness->size(); ++i)
                s += (i ? "," : "") + std::to_string((*witness)[i] + 1);
            s += ")";
        }
        return s;
    }
    case Membership::InAtDepth: return "in-at-depth-" + std::to_string(depth);
    }
    return "";
}

MembershipVerdict n_set_membership(const ExtendedExchangeMatrix &btilde, const MVec &m, const NVec &n,
                                   std::size_t depth) {
    if (!is_nonnegative(n)) throw PreconditionError("n must lie in the nonnegative part of N_uf");
    if (is_zero(n)) return MembershipVerdict{Membership::In, depth, std::nullopt};
    MembershipVerdict out{Membership::InAtDepth, depth, std::nullopt};
    MVec m_shift = add(m, btilde.row_times_B(n));
    for_each_reduced_sequence(btilde.rank(), 0, depth, [&](const IndexSeq &kseq) {
        NVec nu = nu_map(btilde, kseq, m, n);
        if (!is_nonnegative(nu)) {
            out = MembershipVerdict{Membership::Out, depth, kseq};
            return false;
        }
        MVec lhs = sub(mutation_map(btilde, kseq, m_shift), mutation_map(btilde, kseq, m));
        if (lhs != btilde.mutate_seq(kseq).row_times_B(nu)) {
            out = MembershipVerdict{Membership::Out, depth, kseq};
            return false;
        }
        return true;
    });
    return out;
}

namespace {

// Column Hermite reduction: returns (H, C) with A^T C = ... solved in place.
// We solve x A = c, i.e. A^T x^T = c^T, by column operations on A^T tracked
// in C, so that solutions are x = C y with H y = c triangular.
struct IntSolve {
    bool consistent = false;
    MVec particular;               // one integer solution x0
    std::vector<MVec> kernel;      // integer basis of { x : x A = 0 }
};

IntSolve solve_row_system(const std::vector<std::vector<std::int64_t>> &A, const MVec &c) {
    const std::size_t r = A.size();
    // M = A^T (r x r), column ops
    std::vector<std::vector<BigInt>> M(r, std::vector<BigInt>(r));
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) M[i][j] = A[j][i];
    std::vector<std::vector<BigInt>> C(r, std::vector<BigInt>(r, 0));
    for (std::size_t i = 0; i < r; ++i) C[i][i] = 1;

    auto col_addmul = [&](std::size_t dst, std::size_t src, const BigInt &f) {
        for (std::size_t i = 0; i < r; ++i) M[i][dst] += f * M[i][src];
        for (std::size_t i = 0; i < r; ++i) C[i][dst] += f * C[i][src];
    };
    auto col_swap = [&](std::size_t a, std::size_t b) {
        for (std::size_t i = 0; i < r; ++i) std::swap(M[i][a], M[i][b]);
        for (std::size_t i = 0; i < r; ++i) std::swap(C[i][a], C[i][b]);
    };

    std::size_t col = 0;
    std::vector<std::size_t> pivot_rows;
    for (std::size_t row = 0; row < r && col < r; ++row) {
        // gcd-reduce columns col..r-1 on this row
        while (true) {
            std::size_t nz = col;
            int count = 0;
            for (std::size_t j = col; j < r; ++j)
                if (M[row][j] != 0) {
                    ++count;
                    nz = j;
                }
            if (count == 0) break;
            if (count == 1) {
                if (nz != col) col_swap(nz, col);
                break;
            }
            // find column with smallest nonzero |entry| and reduce others
            std::size_t best = col;
            BigInt bestval = 0;
            for (std::size_t j = col; j < r; ++j) {
                if (M[row][j] == 0) continue;
                BigInt a = abs(M[row][j]);
                if (bestval == 0 || a < bestval) {
                    bestval = a;
                    best = j;
                }
            }
            if (best != col) col_swap(best, col);
            for (std::size_t j = col + 1; j < r; ++j) {
                if (M[row][j] == 0) continue;
                BigInt q = M[row][j] / M[row][col];
                col_addmul(j, col, -q);
            }
        }
        if (M[row][col] != 0) {
            pivot_rows.push_back(row);
            ++col;
        }
    }
    const std::size_t rank = col;

    // Solve M y = c (triangular on pivot rows), free components y_j = 0 for
    // j >= rank; kernel = columns rank..r-1 of C.
    IntSolve out;
    std::vector<Rational> y(r, Rational(0));
    std::vector<BigInt> residual(r);
    for (std::size_t i = 0; i < r; ++i) residual[i] = c[i];
    for (std::size_t t = 0; t < rank; ++t) {
        std::size_t row = pivot_rows[t];
        BigInt num = residual[row];
        if (num % M[row][t] != 0) return out; // no integer solution on this pivot
        BigInt q = num / M[row][t];
        y[t] = Rational(q);
        for (std::size_t i = 0; i < r; ++i) residual[i] -= q * M[i][t];
    }
    for (std::size_t i = 0; i < r; ++i)
        if (residual[i] != 0) return out; // inconsistent
    out.consistent = true;
    out.particular.assign(r, 0);
    for (std::size_t i = 0; i < r; ++i) {
        BigInt v = 0;
        for (std::size_t t = 0; t < rank; ++t) v += C[i][t] * num(y[t]);
        out.particular[i] = static_cast<std::int64_t>(v);
    }
    for (std::size_t j = rank; j < r; ++j) {
        MVec kv(r, 0);
        for (std::size_t i = 0; i < r; ++i) kv[i] = static_cast<std::int64_t>(C[i][j]);
        out.kernel.push_back(std::move(kv));
    }
    return out;
}

} // namespace

bool nonnegative_integer_row_solution(const std::vector<std::vector<std::int64_t>> &A, const MVec &c) {
    IntSolve sol = solve_row_system(A, c);
    if (!sol.consistent) return false;
    const std::size_t r = sol.particular.size();
    if (sol.kernel.empty()) return is_nonnegative(sol.particular);
    if (sol.kernel.size() == 1) {
        // x0 + t k >= 0: intersect the per-coordinate integer intervals
        const MVec &kv = sol.kernel[0];
        bool lower_set = false, upper_set = false;
        std::int64_t lo = 0, hi = 0;
        for (std::size_t i = 0; i < r; ++i) {
            if (kv[i] == 0) {
                if (sol.particular[i] < 0) return false;
                continue;
            }
            // particular[i] + t kv[i] >= 0
            if (kv[i] > 0) {
                std::int64_t bound = -sol.particular[i];
                std::int64_t t = bound >= 0 ? (bound + kv[i] - 1) / kv[i]
                                            : -((-bound) / kv[i]); // ceil division
                if (!lower_set || t > lo) lo = t, lower_set = true;
            } else {
                std::int64_t bound = sol.particular[i];
                std::int64_t kk = -kv[i];
                std::int64_t t = bound >= 0 ? bound / kk : -(((-bound) + kk - 1) / kk); // floor
                if (!upper_set || t < hi) hi = t, upper_set = true;
            }
        }
        if (!lower_set && !upper_set) return true;
        if (!lower_set || !upper_set) return true;
        return lo <= hi;
    }
    // larger kernels: bounded box search around the particular solution
    std::int64_t bound = 4;
    for (auto x : sol.particular) bound = std::max(bound, std::abs(x));
    std::vector<std::int64_t> t(sol.kernel.size(), -bound);
    while (true) {
        MVec x(sol.particular);
        for (std::size_t j = 0; j < sol.kernel.size(); ++j)
            for (std::size_t i = 0; i < r; ++i) x[i] += t[j] * sol.kernel[j][i];
        if (is_nonnegative(x)) return true;
        std::size_t j = 0;
        while (j < t.size() && t[j] == bound) t[j++] = -bound;
        if (j == t.size()) return false;
        ++t[j];
    }
}

MembershipVerdict dom_membership(const ExtendedExchangeMatrix &btilde, const MVec &m, const MVec &p,
                                 std::size_t depth) {
    if (p == m) return MembershipVerdict{Membership::In, depth, std::nullopt};
    MembershipVerdict out{Membership::InAtDepth, depth, std::nullopt};
    for_each_reduced_sequence(btilde.rank(), 0, depth, [&](const IndexSeq &kseq) {
        MVec c = sub(mutation_map(btilde, kseq, p), mutation_map(btilde, kseq, m));
        if (!nonnegative_integer_row_solution(btilde.mutate_seq(kseq).square_entries(), c)) {
            out = MembershipVerdict{Membership::Out, depth, kseq};
            return false;
        }
        return true;
    });
    return out;
}

} // namespace thetalab
