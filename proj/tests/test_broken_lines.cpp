#include "doctest.h"

#include <set>

#include "thetalab/broken_lines.hpp"
#include "thetalab/errors.hpp"
#include "test_helpers.hpp"

using namespace thetalab;
using namespace thetalab::testing;

namespace {

TruncatedSeries g2_theta_series(std::int64_t order) {
    TruncatedSeries F = TruncatedSeries::one(2, order);
    F.set_coeff({1, 0}, 2);
    F.set_coeff({1, 1}, 3);
    F.set_coeff({2, 0}, 1);
    F.set_coeff({2, 1}, 3);
    F.set_coeff({2, 2}, 3);
    F.set_coeff({2, 3}, 1);
    return F;
}

std::multiset<std::string> label_multiset(const std::vector<BrokenLine> &lines) {
    std::multiset<std::string> out;
    for (const auto &l : lines) {
        const auto &lab = l.final_label();
        out.insert(rational_to_string(lab.c) + "|" + vec_to_string(lab.m) + "|" +
                   vec_to_string(lab.n));
    }
    return out;
}

} // namespace

TEST_CASE("straight line only at order zero") {
    auto d = build_scattering_diagram(g2_principal(), 6);
    ThetaEngine engine(d);
    QVec Q = engine.positive_base_point({-2, 3}, 0);
    auto lines = enumerate_broken_lines(d, {-2, 3}, Q, 0);
    REQUIRE(lines.size() == 1);
    CHECK(lines[0].bends.empty());
    CHECK(lines[0].final_label() == DomainLabel{1, {-2, 3}, {0, 0}});
}

TEST_CASE("the seven G2 broken lines") {
    auto d = build_scattering_diagram(g2_principal(), 6);
    ThetaEngine engine(d);
    auto theta = engine.theta_positive({-2, 3}, 6);
    CHECK(theta.broken_line_count == 7);
    CHECK(theta.value.m == MVec{-2, 3});
    CHECK(theta.value.F == g2_theta_series(6));
    CHECK(theta.finiteness == Finiteness::CertifiedFiniteType);

    // final labels match the worked example
    auto expected = std::multiset<std::string>{
        "1|[-2,3]|[0,0]", "2|[-2,0]|[1,0]",  "3|[-1,0]|[1,1]", "1|[-2,-3]|[2,0]",
        "3|[-1,-3]|[2,1]", "3|[0,-3]|[2,2]", "1|[1,-3]|[2,3]"};
    CHECK(label_multiset(theta.lines) == expected);

    // every line passes the independent validator
    for (const auto &l : theta.lines) {
        std::string why;
        CHECK_MESSAGE(validate_broken_line(d, l, &why), why);
    }

    // coefficient extraction from the graded form
    auto g = theta.value.to_graded(d.btilde());
    CHECK(g.coefficient({-2, 3}, {1, 0}) == 2);
    CHECK(g.coefficient({-2, 3}, {2, 3}) == 1);
    CHECK(g.coefficient({0, 0}, {0, 0}) == 0);
}

TEST_CASE("A2 lines for m = [0,-1] in both sign conventions") {
    // B = [[0,1],[-1,0]]: three lines, F = 1 + z2 + z1 z2
    auto d = build_scattering_diagram(a2_principal(), 4);
    ThetaEngine engine(d);
    auto theta = engine.theta_positive({0, -1}, 4);
    CHECK(theta.broken_line_count == 3);
    TruncatedSeries F = TruncatedSeries::one(2, 4);
    F.set_coeff({0, 1}, 1);
    F.set_coeff({1, 1}, 1);
    CHECK(theta.value.F == F);
    for (const auto &l : theta.lines) {
        std::string why;
        CHECK_MESSAGE(validate_broken_line(d, l, &why), why);
    }

    // mirrored matrix: two lines, F = 1 + z2
    auto mirror = ExtendedExchangeMatrix::principal({{0, -1}, {1, 0}});
    auto dm = build_scattering_diagram(mirror, 4);
    ThetaEngine em(dm);
    auto theta_m = em.theta_positive({0, -1}, 4);
    CHECK(theta_m.broken_line_count == 2);
    TruncatedSeries Fm = TruncatedSeries::one(2, 4);
    Fm.set_coeff({0, 1}, 1);
    CHECK(theta_m.value.F == Fm);
}

TEST_CASE("theta_0 is 1") {
    auto d = build_scattering_diagram(a2_principal(), 4);
    ThetaEngine engine(d);
    auto theta = engine.theta_positive({0, 0}, 4);
    CHECK(theta.value.F.is_one());
    CHECK(theta.broken_line_count == 0);
    CHECK_THROWS_AS(enumerate_broken_lines(d, {0, 0}, QVec{Rational(1), Rational(1)}, 4),
                    PreconditionError);
}

TEST_CASE("theta is independent of the base point within the chamber") {
    auto d = build_scattering_diagram(g2_principal(), 6);
    ThetaEngine engine(d);
    QVec q1{Rational(7, 2), Rational(2)};
    QVec q2{Rational(1, 3), Rational(5)};
    auto t1 = engine.theta(MVec{-2, 3}, q1, 6);
    auto t2 = engine.theta(MVec{-2, 3}, q2, 6);
    CHECK(t1.value.F == t2.value.F);
    CHECK(t1.broken_line_count == t2.broken_line_count);
}

TEST_CASE("base point on a wall is rejected") {
    auto d = build_scattering_diagram(a2_principal(), 4);
    CHECK_THROWS_AS(enumerate_broken_lines(d, {0, -1}, QVec{Rational(0), Rational(1)}, 4),
                    GenericityError);
    CHECK_THROWS_AS(enumerate_broken_lines(d, {0, -1}, QVec{Rational(2), Rational(-2)}, 4),
                    GenericityError);
}

TEST_CASE("theta at a random chamber transports to the positive chamber") {
    auto gen = rng(67);
    std::uniform_int_distribution<std::int64_t> num(-40, 40);
    for (const auto &bt : {g2_principal(), a2_principal()}) {
        auto d = build_scattering_diagram(bt, 7);
        ThetaEngine engine(d);
        int checked = 0;
        for (int t = 0; t < 60 && checked < 12; ++t) {
            MVec m = random_mvec(gen, 2, -3, 3);
            if (is_zero(m)) continue;
            QVec q{Rational(num(gen), 7), Rational(num(gen), 11)};
            ThetaResult at_q;
            try {
                at_q = engine.theta(m, q, 7);
            } catch (const GenericityError &) {
                continue;
            }
            ++checked;
            auto direct = engine.theta_positive(m, 7);
            auto moved = transport_endpoint(d, at_q, direct.Q);
            CHECK(moved.value.F == direct.value.F);
            CHECK(moved.value.m == direct.value.m);
        }
        CHECK(checked == 12);
    }
}

TEST_CASE("finiteness classification") {
    auto g2 = g2_principal();
    auto d6 = build_scattering_diagram(g2, 6);
    CHECK(theta_finiteness(d6, {-2, 3}, 6) == Finiteness::CertifiedFiniteType);

    // at low order the G2 completion has not stabilized yet
    auto d2 = build_scattering_diagram(g2, 2);
    CHECK(theta_finiteness(d2, {1, 0}, 2) == Finiteness::FiniteAtOrder);

    auto wild = ExtendedExchangeMatrix::principal({{0, 3}, {-3, 0}});
    auto dw = build_scattering_diagram(wild, 6);
    // m toward the dense region keeps acquiring bends; m away from it closes
    CHECK(theta_finiteness(dw, {2, -3}, 6) == Finiteness::Truncated);
    CHECK(theta_finiteness(dw, {-1, 1}, 6) == Finiteness::FiniteAtOrder);
}

TEST_CASE("broken lines mutate onto the mutated diagram") {
    auto g2 = g2_principal();
    auto d = build_scattering_diagram(g2, 6);
    ThetaEngine engine(d);
    auto theta = engine.theta_positive({-2, 3}, 6);
    REQUIRE(theta.broken_line_count == 7);

    SeedFrame frame = SeedFrame::at(g2, {});
    auto mutated_diagram = mutate_diagram(d, 0);
    std::vector<BrokenLine> mutated;
    for (const auto &l : theta.lines) {
        auto ml = mutate_broken_line(l, frame, 0);
        std::string why;
        CHECK_MESSAGE(validate_broken_line(mutated_diagram, ml, &why), why);
        mutated.push_back(std::move(ml));
    }

    // the image lines are exactly the broken lines for eta_1(m) at eta_1(Q)
    QVec q_image = eta_step(g2, 0, theta.Q);
    auto independent = enumerate_broken_lines(mutated_diagram, {2, -3}, q_image, 6);
    CHECK(independent.size() == 7);
    CHECK(label_multiset(mutated) == label_multiset(independent));

    // the expected final labels in the primed variables
    auto expected = std::multiset<std::string>{
        "1|[2,-3]|[0,0]", "2|[2,0]|[1,0]",  "1|[2,3]|[2,0]", "3|[1,-3]|[0,1]",
        "3|[1,0]|[1,1]",  "3|[0,-3]|[0,2]", "1|[-1,-3]|[0,3]"};
    CHECK(label_multiset(mutated) == expected);

    // a straight line that stays off e_1-perp maps to a straight line
    auto straight_lines = engine.enumerate({1, 1}, theta.Q, 6);
    REQUIRE(straight_lines.size() == 1);
    REQUIRE(straight_lines[0].bends.empty());
    auto ms = mutate_broken_line(straight_lines[0], frame, 0);
    CHECK(ms.bends.empty());
    CHECK(ms.final_label().m == mutation_map(g2, {0}, MVec{1, 1}));

    // the straight line for [-2,3] crosses e_1-perp and so acquires the
    // bend carrying (zeta'_1)^2; its image is the line ending in z'^{(2,3)}
    const BrokenLine &straight = theta.lines.front();
    REQUIRE(straight.bends.empty());
    auto crossed = mutate_broken_line(straight, frame, 0);
    REQUIRE(crossed.bends.size() == 1);
    CHECK(crossed.bends[0].nu == 2);
    CHECK(crossed.final_label() == DomainLabel{1, {2, 3}, {2, 0}});

    // round trip through k on the mutated frame
    SeedFrame next = frame.advanced(0);
    for (std::size_t i = 0; i < mutated.size(); ++i) {
        auto back = mutate_broken_line(mutated[i], next, 0);
        CHECK(back.final_label() == theta.lines[i].final_label());
        CHECK(back.endpoint == theta.lines[i].endpoint);
        CHECK(back.labels == theta.lines[i].labels);
    }
}

TEST_CASE("mutate_theta matches the worked example and the identity") {
    auto g2 = g2_principal();
    auto d = build_scattering_diagram(g2, 8);
    ThetaEngine engine(d);
    auto mutated = mutate_theta(engine, {-2, 3}, 0, 8, true);
    CHECK(mutated.value.m == MVec{2, -3});
    TruncatedSeries F = TruncatedSeries::one(2, 8);
    F.set_coeff({0, 1}, 3);
    F.set_coeff({0, 2}, 3);
    F.set_coeff({0, 3}, 1);
    F.set_coeff({1, 3}, 1);
    CHECK(mutated.value.F == F);

    // theta_0 is fixed
    auto zero = mutate_theta(engine, {0, 0}, 0, 8, true);
    CHECK(zero.value.F.is_one());
}

TEST_CASE("endpoint transport across the primed wall") {
    auto g2 = g2_principal();
    auto d = build_scattering_diagram(g2, 8);
    ThetaEngine engine(d);
    auto theta = engine.theta_positive({-2, 3}, 8);

    auto mutated_diagram = mutate_diagram(d, 0);
    ThetaEngine engine2(mutated_diagram);
    QVec q_image = eta_step(g2, 0, theta.Q);
    auto at_q_image = engine2.theta(MVec{2, -3}, q_image, 8);
    CHECK(at_q_image.broken_line_count == 7);

    QVec q_pos = engine2.positive_base_point({2, -3}, 8);
    auto moved = transport_endpoint(mutated_diagram, at_q_image, q_pos);
    auto direct = engine2.theta(MVec{2, -3}, q_pos, 8);
    CHECK(moved.value.F == direct.value.F);
    CHECK(moved.value.m == direct.value.m);

    // transporting along a closed loop leaves the theta unchanged
    QVec step{Rational(1), Rational(17)};
    auto once = transport_endpoint(mutated_diagram, at_q_image, step);
    auto back = transport_endpoint(mutated_diagram, once, q_image);
    CHECK(back.value.F == at_q_image.value.F);

    // trivial path
    auto same = transport_endpoint(mutated_diagram, at_q_image, q_image);
    CHECK(same.value.F == at_q_image.value.F);
}

TEST_CASE("iterated mutation agrees with the twice-mutated diagram") {
    auto g2 = g2_principal();
    auto d = build_scattering_diagram(g2, 16);
    ThetaEngine engine(d);
    MVec m{-2, 3};

    // route A: two substitution steps with the monomial corrections
    auto th = engine.theta_positive(m, 16, false);
    GradedElement cur = th.value.to_graded(g2);
    SeedFrame frame = SeedFrame::at(g2, {});
    MVec m_cur = m;
    for (std::size_t k : {std::size_t{0}, std::size_t{1}}) {
        cur = substitute_mutation(cur, frame, k);
        SeedFrame next = frame.advanced(k);
        std::int64_t e = std::max<std::int64_t>(frame.signs[k] * m_cur[k], 0);
        if (e != 0) {
            NVec nk = zero_vec(2);
            nk[k] = e;
            cur = cur * GradedElement::sigma_term(next.Btilde, zero_vec(2), nk, 1, 16);
        }
        m_cur = mutation_map(frame.Btilde, {k}, m_cur);
        frame = next;
    }

    // route B: enumerate on the twice-mutated diagram
    auto d2 = mutate_diagram(mutate_diagram(d, 0), 1);
    ThetaEngine engine2(d2);
    auto independent = engine2.theta_positive(m_cur, 16, false);

    auto gv = cur.g_vector();
    REQUIRE(gv.has_value());
    CHECK(*gv == m_cur);
    auto blk = cur.block(m_cur);
    REQUIRE(is_nonnegative(blk.shift));
    CHECK(blk.series.shifted(blk.shift).truncated(16) == independent.value.F);
}

TEST_CASE("A2 broken lines mutate bijectively for both directions") {
    auto a2 = a2_principal();
    auto d = build_scattering_diagram(a2, 6);
    ThetaEngine engine(d);
    for (std::size_t k = 0; k < 2; ++k) {
        for (MVec m : {MVec{0, -1}, MVec{-1, -1}, MVec{1, -2}}) {
            auto th = engine.theta_positive(m, 6, false);
            SeedFrame frame = SeedFrame::at(a2, {});
            auto md = mutate_diagram(d, k);
            std::multiset<std::string> mutated;
            for (const auto &l : th.lines) {
                auto ml = mutate_broken_line(l, frame, k);
                std::string why;
                CHECK_MESSAGE(validate_broken_line(md, ml, &why), why);
                const auto &lab = ml.final_label();
                mutated.insert(rational_to_string(lab.c) + vec_to_string(lab.m) +
                               vec_to_string(lab.n));
            }
            auto independent = enumerate_broken_lines(md, mutation_map(a2, {k}, m),
                                                      eta_step(a2, k, th.Q), 6);
            std::multiset<std::string> expected;
            for (const auto &l : independent) {
                const auto &lab = l.final_label();
                expected.insert(rational_to_string(lab.c) + vec_to_string(lab.m) +
                                vec_to_string(lab.n));
            }
            CHECK(mutated == expected);
        }
    }
}
