#include "doctest.h"

#include "thetalab/dominance.hpp"
#include "thetalab/errors.hpp"
#include "thetalab/frames.hpp"
#include "test_helpers.hpp"

using namespace thetalab;
using namespace thetalab::testing;

namespace {

TruncatedSeries one_plus(std::size_t var, std::int64_t order) {
    TruncatedSeries s = TruncatedSeries::one(2, order);
    s.set_coeff(unit_vec(2, var), 1);
    return s;
}

} // namespace

TEST_CASE("series arithmetic") {
    auto s = one_plus(0, 3);
    auto sq = s * s;
    CHECK(sq.coeff({0, 0}) == 1);
    CHECK(sq.coeff({1, 0}) == 2);
    CHECK(sq.coeff({2, 0}) == 1);
    CHECK(sq.terms().size() == 3);

    auto inv = one_plus(0, 2).inverse();
    CHECK(inv.coeff({0, 0}) == 1);
    CHECK(inv.coeff({1, 0}) == -1);
    CHECK(inv.coeff({2, 0}) == 1);

    CHECK((s.pow(2) * s.pow(-2)).is_one());
    CHECK_THROWS_AS(TruncatedSeries::monomial({1, 0}, 1, 4).inverse(), PreconditionError);
}

TEST_CASE("truncation is compatible with arithmetic") {
    auto gen = rng(3);
    std::uniform_int_distribution<int> coeff(-4, 4), e(0, 4);
    for (int t = 0; t < 30; ++t) {
        TruncatedSeries a(2, 8), b(2, 8);
        for (int j = 0; j < 6; ++j) {
            a.add_term({e(gen), e(gen)}, coeff(gen));
            b.add_term({e(gen), e(gen)}, coeff(gen));
        }
        CHECK((a * b).truncated(5) == a.truncated(5) * b.truncated(5));
        CHECK((a + b).truncated(5) == a.truncated(5) + b.truncated(5));
    }
}

TEST_CASE("graded pieces and g-vectors") {
    auto g2 = g2_principal();
    CHECK(*GradedElement::z_monomial({3, -1}, 6).g_vector() == MVec{3, -1});
    // sigma^{e_1} has g-vector -e_1 B = [0, 3]
    auto sig = GradedElement::sigma_term(g2, {0, 0}, {1, 0}, 1, 6);
    CHECK(*sig.g_vector() == MVec{0, 3});
    // zeta^n has g-vector 0
    CHECK(*GradedElement::term({0, 0}, {2, 1}, 1, 6).g_vector() == MVec{0, 0});
    auto mixed = GradedElement::z_monomial({1, 0}, 6) + GradedElement::z_monomial({0, 1}, 6);
    CHECK(!mixed.g_vector());
}

TEST_CASE("multiplication is g-graded") {
    auto gen = rng(11);
    auto g2 = g2_principal();
    for (int t = 0; t < 50; ++t) {
        MVec m1 = random_mvec(gen, 2, -4, 4), m2 = random_mvec(gen, 2, -4, 4);
        NVec n1 = {std::abs(m1[0]) % 3, std::abs(m2[1]) % 3};
        auto x = GradedElement::sigma_term(g2, m1, n1, 2, 8);
        auto y = GradedElement::z_monomial(m2, 8);
        auto prod = x * y;
        CHECK(*prod.g_vector() == add(*x.g_vector(), *y.g_vector()));
    }
}

TEST_CASE("zeta equals z^{nB} sigma^n") {
    auto gen = rng(5);
    for (const auto &B : {a2_principal(), g2_principal(), markov_principal()}) {
        for (int t = 0; t < 100; ++t) {
            NVec n = random_mvec(gen, B.rank(), -4, 4);
            auto lhs = GradedElement::term(zero_vec(B.rank()), n, 1, 9);
            auto rhs = GradedElement::sigma_term(B, B.row_times_B(n), n, 1, 9);
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("mutation substitution on a cluster variable") {
    // A2 with principal coefficients, k = 1: z_1 becomes
    // (1 + zeta'_1) / (z'_1 sigma'_1) * z'_2.
    auto a2 = a2_principal();
    SeedFrame frame = SeedFrame::at(a2, {});
    auto image = substitute_mutation(GradedElement::z_monomial({1, 0}, 6), frame, 0);
    GradedElement expected(2, 6);
    // z'^{(-1,1)} sigma'^{-e_1} (1 + zeta'_1); sigma'^{-e_1} = z'^{e_1 B'} zeta'^{-e_1}
    auto bt_next = a2.mutate(0);
    auto part = GradedElement::sigma_term(bt_next, MVec{-1, 1}, NVec{-1, 0}, 1, 6);
    TruncatedSeries onep = TruncatedSeries::one(2, 6);
    onep.set_coeff({1, 0}, 1);
    expected = part * GradedElement::pointed(zero_vec(2), onep);
    CHECK(image == expected);
}

TEST_CASE("substitution round trip on monomials") {
    // The rewrite inverts zeta_k, so it is exact precisely on elements whose
    // image is a Laurent polynomial that fits below the truncation order:
    // the z_k exponent must be nonnegative and the order generous.
    auto gen = rng(23);
    for (const auto &B : {a2_principal(), g2_principal()}) {
        SeedFrame frame = SeedFrame::at(B, {});
        for (std::size_t k = 0; k < 2; ++k) {
            SeedFrame next = frame.advanced(k);
            int hits = 0;
            for (int t = 0; t < 1000 && hits < 100; ++t) {
                MVec m = random_mvec(gen, 2, -2, 2);
                NVec n = random_mvec(gen, 2, -1, 1);
                // z^m sigma^n has z_k exponent m_k
                if (m[k] < 0) continue;
                ++hits;
                auto x = GradedElement::sigma_term(B, m, n, Rational(3, 2), 24);
                auto there = substitute_mutation(x, frame, k);
                auto back = substitute_mutation(there, next, k);
                CHECK(back == x);
            }
            CHECK(hits == 100);
        }
    }
}

TEST_CASE("sigma monomials transform by psi under substitution") {
    // generous order: intermediate sigma-exponents can rise above the final
    // degree before the last step brings them back down
    auto gen = rng(29);
    for (const auto &B : {a2_principal(), g2_principal(), markov_principal()}) {
        for (const IndexSeq kseq : {IndexSeq{0}, IndexSeq{1, 0}, IndexSeq{0, 1, 0}}) {
            auto bt_k = B.mutate_seq(kseq);
            for (int t = 0; t < 25; ++t) {
                NVec n = random_mvec(gen, B.rank(), -3, 3);
                auto x = GradedElement::sigma_term(B, zero_vec(B.rank()), n, 1, 60);
                auto image = substitute_mutation_seq(x, B, kseq);
                auto expected =
                    GradedElement::sigma_term(bt_k, zero_vec(B.rank()), psi(B, kseq, n), 1, 60);
                CHECK(image == expected);
            }
        }
    }
}
