#include "thetalab/mutation.hpp"

#include <algorithm>

#include "thetalab/errors.hpp"

namespace thetalab {

QVec eta_step(const ExtendedExchangeMatrix &B, std::size_t k, const QVec &v) {
    const std::size_t r = B.rank();
    if (k >= r) throw PreconditionError("mutation-map index must be unfrozen");
    if (v.size() != r) throw PreconditionError("vector rank mismatch");
    QVec out(v);
    Rational vk = v[k];
    Rational vk_pos = vk > 0 ? vk : Rational(0);
    Rational vk_neg = vk < 0 ? -vk : Rational(0);
    out[k] = -vk;
    for (std::size_t j = 0; j < r; ++j) {
        if (j == k) continue;
        std::int64_t ekj = B.eps(k, j);
        out[j] += vk_pos * Rational(std::max<std::int64_t>(ekj, 0)) -
                  vk_neg * Rational(std::max<std::int64_t>(-ekj, 0));
    }
    return out;
}

QVec mutation_map(const ExtendedExchangeMatrix &B, const IndexSeq &kseq, const QVec &v) {
    ExtendedExchangeMatrix cur(B);
    QVec out(v);
    for (std::size_t t = 0; t < kseq.size(); ++t) {
        out = eta_step(cur, kseq[t], out);
        if (t + 1 < kseq.size()) cur = cur.mutate(kseq[t]);
    }
    return out;
}

MVec mutation_map(const ExtendedExchangeMatrix &B, const IndexSeq &kseq, const MVec &v) {
    return to_mvec(mutation_map(B, kseq, to_qvec(v)));
}

QVec mutation_map_inverse(const ExtendedExchangeMatrix &B, const IndexSeq &kseq, const QVec &v) {
    // Apply eta_{k_i}^{mu_{k_i...k_1}(B)} in reverse order.
    std::vector<ExtendedExchangeMatrix> frames;
    frames.reserve(kseq.size());
    ExtendedExchangeMatrix cur(B);
    for (auto k : kseq) {
        cur = cur.mutate(k);
        frames.push_back(cur);
    }
    QVec out(v);
    for (std::size_t t = kseq.size(); t-- > 0;) out = eta_step(frames[t], kseq[t], out);
    return out;
}

MVec mutation_map_inverse(const ExtendedExchangeMatrix &B, const IndexSeq &kseq, const MVec &v) {
    return to_mvec(mutation_map_inverse(B, kseq, to_qvec(v)));
}

namespace {

bool visit_reduced(std::size_t rank, std::size_t min_len, std::size_t max_len, IndexSeq &prefix,
                   const std::function<bool(const IndexSeq &)> &fn) {
    if (prefix.size() >= min_len && !fn(prefix)) return false;
    if (prefix.size() == max_len) return true;
    for (std::size_t k = 0; k < rank; ++k) {
        if (!prefix.empty() && prefix.back() == k) continue;
        prefix.push_back(k);
        bool keep = visit_reduced(rank, min_len, max_len, prefix, fn);
        prefix.pop_back();
        if (!keep) return false;
    }
    return true;
}

} // namespace

void for_each_reduced_sequence(std::size_t rank, std::size_t min_len, std::size_t max_len,
                               const std::function<bool(const IndexSeq &)> &fn) {
    IndexSeq prefix;
    visit_reduced(rank, min_len, max_len, prefix, fn);
}

bool b_equivalent_up_to_depth(const ExtendedExchangeMatrix &B, const QVec &m, const QVec &p,
                              std::size_t depth) {
    // DFS over reduced sequences, carrying the mutated matrix and both images.
    struct Walker {
        std::size_t depth;
        bool walk(const ExtendedExchangeMatrix &cur, const QVec &vm, const QVec &vp, std::size_t len,
                  std::size_t last, bool have_last) {
            if (sign_vector(vm) != sign_vector(vp)) return false;
            if (len == depth) return true;
            for (std::size_t k = 0; k < cur.rank(); ++k) {
                if (have_last && k == last) continue;
                if (!walk(cur.mutate(k), eta_step(cur, k, vm), eta_step(cur, k, vp), len + 1, k, true))
                    return false;
            }
            return true;
        }
    };
    return Walker{depth}.walk(B, m, p, 0, 0, false);
}

std::vector<IndexSeq> find_mutation_symmetries(const ExtendedExchangeMatrix &B, std::size_t max_len) {
    if (max_len < 1) throw PreconditionError("max_len must be at least 1");
    std::vector<IndexSeq> out;
    auto square = B.square_entries();
    for_each_reduced_sequence(B.rank(), 1, max_len, [&](const IndexSeq &kseq) {
        if (B.mutate_seq(kseq).square_entries() == square) out.push_back(kseq);
        return true;
    });
    std::sort(out.begin(), out.end());
    return out;
}

OrbitResult eta_orbit(const ExtendedExchangeMatrix &B, const IndexSeq &kseq, const MVec &m,
                      std::size_t max_iter) {
    OrbitResult res;
    res.orbit.push_back(m);
    MVec cur(m);
    for (std::size_t it = 0; it < max_iter; ++it) {
        cur = mutation_map(B, kseq, cur);
        if (cur == m) return res;
        res.orbit.push_back(cur);
    }
    res.bound_exceeded = true;
    return res;
}

bool same_domain_of_definition(const ExtendedExchangeMatrix &B, const IndexSeq &kseq, const QVec &v,
                               const QVec &w) {
    ExtendedExchangeMatrix cur(B);
    QVec a(v), b(w);
    for (std::size_t t = 0; t < kseq.size(); ++t) {
        std::size_t k = kseq[t];
        if (sgn(a[k]) * sgn(b[k]) < 0) return false;
        a = eta_step(cur, k, a);
        b = eta_step(cur, k, b);
        if (t + 1 < kseq.size()) cur = cur.mutate(kseq[t]);
    }
    return true;
}

} // namespace thetalab
