#include "doctest.h"

#include "thetalab/bases.hpp"
#include "thetalab/errors.hpp"
#include "test_helpers.hpp"

using namespace thetalab;
using namespace thetalab::testing;

TEST_CASE("expansion in a reduced basis") {
    auto d = build_scattering_diagram(g2_principal(), 6);
    ThetaEngine engine(d);
    auto basis = theta_basis(engine);

    // u_m itself
    auto um = engine.theta_positive({-2, 3}, 6).value.to_graded(d.btilde());
    auto terms = expand_in_reduced_basis(um, basis, d.btilde(), 6);
    REQUIRE(terms.size() == 1);
    CHECK(terms[0].m == MVec{-2, 3});
    CHECK(terms[0].n == NVec{0, 0});
    CHECK(terms[0].coeff == 1);

    // sigma^r u_p
    NVec r{1, 2};
    auto shifted = GradedElement::sigma_term(d.btilde(), zero_vec(2), r, 1, 6) * um;
    auto terms2 = expand_in_reduced_basis(shifted, basis, d.btilde(), 6);
    REQUIRE(terms2.size() == 1);
    CHECK(terms2[0].m == MVec{-2, 3});
    CHECK(terms2[0].n == r);
    CHECK(terms2[0].coeff == 1);
}

TEST_CASE("reduced-basis expansion agrees with the product expansion") {
    auto d = build_scattering_diagram(a2_principal(), 6);
    ThetaEngine engine(d);
    auto basis = theta_basis(engine);
    MVec m1{1, 0}, m2{-1, 0};
    auto v = engine.theta_positive(m1, 6).value.to_graded(d.btilde()) *
             engine.theta_positive(m2, 6).value.to_graded(d.btilde());
    auto via_basis = expand_in_reduced_basis(v, basis, d.btilde(), 6);
    auto via_product = expand_product_in_theta_basis(engine, {{m1, 1}, {m2, 1}}, 6);
    auto key = [](const ExpansionTerm &t) {
        return vec_to_string(t.m) + vec_to_string(t.n) + rational_to_string(t.coeff);
    };
    std::vector<std::string> a, b;
    for (const auto &t : via_basis) a.push_back(key(t));
    for (const auto &t : via_product) b.push_back(key(t));
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    CHECK(a == b);
}

TEST_CASE("chain inversion") {
    auto g2 = g2_principal();
    // c supported only at n = 0
    CoefficientTable trivial = [](const MVec &, const NVec &n) {
        return is_zero(n) ? Rational(1) : Rational(0);
    };
    CHECK(invert_change_of_basis(trivial, g2, {1, 1}, {0, 0}) == 1);
    CHECK(invert_change_of_basis(trivial, g2, {1, 1}, {2, 1}) == 0);

    // a single extra term c_r = a for all p gives d_r = -a
    NVec r{1, 1};
    CoefficientTable single = [&r](const MVec &, const NVec &n) {
        if (is_zero(n)) return Rational(1);
        return n == r ? Rational(5) : Rational(0);
    };
    CHECK(invert_change_of_basis(single, g2, {0, 0}, r) == -5);
    CHECK(invert_change_of_basis(single, g2, {0, 0}, scale(2, r)) == 25);
}

TEST_CASE("chain inversion round trip on random sparse tables") {
    auto g2 = g2_principal();
    auto gen = rng(61);
    std::uniform_int_distribution<int> coeff(-3, 3), pick(0, 4);
    for (int t = 0; t < 20; ++t) {
        // random sparse c with c_0 = 1, supported in degree <= 5
        std::map<NVec, Rational> table;
        for (int j = 0; j < 4; ++j) {
            NVec n{pick(gen), pick(gen)};
            if (is_zero(n) || total_degree(n) > 5) continue;
            table[n] = coeff(gen);
        }
        CoefficientTable c = [&table](const MVec &p, const NVec &n) {
            if (is_zero(n)) return Rational(1);
            auto it = table.find(n);
            // p-dependence: ensure the inversion handles base-point shifts
            if (it == table.end()) return Rational(0);
            return it->second + Rational(p[0] % 3);
        };
        // convolution identity: sum_{0<=r<=s} d_r^{(p)} c^{(p+rB)}_{s-r} = [s=0]
        MVec p{1, -2};
        for (std::int64_t s1 = 0; s1 <= 3; ++s1)
            for (std::int64_t s2 = 0; s2 + s1 <= 3; ++s2) {
                NVec s{s1, s2};
                Rational total = 0;
                NVec rr = zero_vec(2);
                while (true) {
                    MVec pr = add(p, g2.row_times_B(rr));
                    total += invert_change_of_basis(c, g2, p, rr) * c(pr, sub(s, rr));
                    std::size_t i = 0;
                    while (i < 2 && rr[i] == s[i]) rr[i++] = 0;
                    if (i == 2) break;
                    ++rr[i];
                }
                CHECK(total == (is_zero(s) ? Rational(1) : Rational(0)));
            }
    }
}

TEST_CASE("pointedness of theta functions") {
    auto g2 = g2_principal();
    auto d = build_scattering_diagram(g2, 6);
    ThetaEngine engine(d);
    auto th = engine.theta_positive({-2, 3}, 6).value.to_graded(g2);
    auto verdict = is_pointed_up_to_depth(th, g2, 3, 6);
    CHECK_MESSAGE(verdict.pointed, verdict.detail);

    // inhomogeneous input is rejected
    auto bad = GradedElement::z_monomial({1, 0}, 6) + GradedElement::z_monomial({0, 1}, 6);
    CHECK_THROWS_AS(is_pointed_up_to_depth(bad, g2, 2, 6), PreconditionError);

    // a product of thetas with B-equivalent g-vectors is pointed; the
    // factors must be complete polynomials, so work at a generous order
    auto d16 = build_scattering_diagram(g2, 16);
    ThetaEngine e16(d16);
    auto prod = e16.theta_positive({-2, 3}, 16).value.to_graded(g2) *
                e16.theta_positive({-4, 6}, 16).value.to_graded(g2);
    auto verdict2 = is_pointed_up_to_depth(prod, g2, 3, 16);
    CHECK_MESSAGE(verdict2.pointed, verdict2.detail);
}

TEST_CASE("finite-type fan and the ray basis") {
    auto g2 = g2_principal();
    auto d = build_scattering_diagram(g2, 8);
    ThetaEngine engine(d);
    auto fan = finite_type_fan(d);
    CHECK(fan.cones.size() == 8);
    CHECK(fan.is_integral());

    // m on a single ray
    auto onray = ray_basis_element(fan, engine, {-3, 9}, 8); // 3 * (-1, 3)
    CHECK(onray.m == MVec{-3, 9});
    CHECK(onray.F == engine.theta_positive({-1, 3}, 8).value.F.pow(3));

    // interior m = r1 + r2
    MVec m{-2, 5}; // (-1,3) + (-1,2)
    auto rho = ray_basis_element(fan, engine, m, 8);
    CHECK(rho.m == m);
    CHECK(rho.F == engine.theta_positive({-1, 3}, 8).value.F *
                       engine.theta_positive({-1, 2}, 8).value.F);

    // rho_m is pointed with g-vector m
    auto g = rho.to_graded(g2);
    CHECK(*g.g_vector() == m);
    auto verdict = is_pointed_up_to_depth(g, g2, 3, 8);
    CHECK_MESSAGE(verdict.pointed, verdict.detail);

    CHECK_THROWS_AS(ray_basis_element(RationalFan2D{{RationalFan2D::Cone{{MVec{1, 0}}}}}, engine,
                                      MVec{0, 1}, 4),
                    PreconditionError);
}

TEST_CASE("B-cone products stay inside the allowed support") {
    auto g2 = g2_principal();
    auto d = build_scattering_diagram(g2, 8);
    ThetaEngine engine(d);

    // single factor
    auto single = bcone_product_expand(engine, {{MVec{-2, 3}, 1}}, 6, 2);
    CHECK(single.passed());
    REQUIRE(single.expansion.size() == 1);
    CHECK(single.expansion[0].n == NVec{0, 0});
    CHECK(single.expansion[0].coeff == 1);

    // the square of the G2 theta
    auto square = bcone_product_expand(engine, {{MVec{-2, 3}, 2}}, 8, 2);
    CHECK(square.passed());

    // cluster-cone products collapse to a single theta in finite type
    auto a2 = a2_principal();
    auto da = build_scattering_diagram(a2, 6);
    ThetaEngine ea(da);
    auto cluster = bcone_product_expand(ea, {{MVec{1, 1}, 1}, {MVec{2, 1}, 1}}, 6, 3);
    CHECK(cluster.passed());
    REQUIRE(cluster.expansion.size() == 1);
    CHECK(cluster.expansion[0].m == MVec{3, 2});

    // factors in different cones are rejected
    CHECK_THROWS_AS(bcone_product_expand(ea, {{MVec{1, 0}, 1}, {MVec{-1, 0}, 1}}, 4, 2),
                    PreconditionError);
}
