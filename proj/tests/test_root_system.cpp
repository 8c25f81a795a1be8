#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <stdexcept>

#include "verlinde/rational.hpp"
#include "verlinde/root_system.hpp"

using namespace verlinde;

namespace {

CoVector cov(std::initializer_list<Rat> v) { return CoVector(Coords(v)); }

LatticePoint lat(std::initializer_list<long> v) {
    LatticePoint p;
    for (long x : v) p.c.emplace_back(x);
    return p;
}

bool eq(const CoVector& a, const CoVector& b) { return a.c == b.c; }
bool eq(const Vector& a, const Vector& b) { return a.c == b.c; }
bool eq(const LatticePoint& a, const LatticePoint& b) { return a.c == b.c; }

}  // namespace

TEST_CASE("half sum of positive roots") {
    CHECK(eq(rho(2), cov({Rat(1, 2), Rat(-1, 2)})));
    CHECK(eq(rho(3), cov({1, 0, -1})));
    CHECK(eq(rho(4), cov({Rat(3, 2), Rat(1, 2), Rat(-1, 2), Rat(-3, 2)})));
    CHECK_THROWS_AS(rho(1), std::invalid_argument);
}

TEST_CASE("killing dual and norm") {
    CHECK(eq(killing_dual(Root(1, 2).covector(2)), Vector(Coords{1, -1})));
    CHECK(eq(killing_dual(cov({0, 0, 0})), Vector(Coords{0, 0, 0})));
    CHECK(eq(killing_dual(Root(1, 3).covector(3)), Vector(Coords{1, 0, -1})));

    CHECK(killing_norm2(cov({Rat(2, 3), Rat(-1, 3), Rat(-1, 3)})) == Rat(2, 3));
    CHECK(killing_norm2(cov({0, 0})) == 0);
    CHECK(killing_norm2(Root(2, 4).covector(4)) == 2);

    // norm agrees with the pairing against the dual vector
    CoVector a = cov({Rat(3, 10), Rat(1, 5), Rat(-1, 2)});
    CHECK(killing_norm2(a) == pairing(a, killing_dual(a)));
}

TEST_CASE("expansion in an ordered basis") {
    OrderedBasis B2{2, {Root(1, 2)}};
    CHECK(expand_in_basis(Root(1, 2).covector(2), B2) == std::vector<Rat>{1});
    CHECK(expand_in_basis(cov({Rat(3, 10), Rat(-3, 10)}), B2) == std::vector<Rat>{Rat(3, 10)});

    OrderedBasis B3{3, {Root(2, 3), Root(1, 2)}};
    CHECK(expand_in_basis(Root(1, 3).covector(3), B3) == std::vector<Rat>{1, 1});

    OrderedBasis bad{3, {Root(1, 2), Root(2, 1)}};
    CHECK_THROWS_AS(expand_in_basis(rho(3), bad), std::domain_error);

    // flipping the edge orientation negates the coefficient
    OrderedBasis Bf{2, {Root(2, 1)}};
    CHECK(expand_in_basis(cov({Rat(3, 10), Rat(-3, 10)}), Bf) == std::vector<Rat>{Rat(-3, 10)});
}

TEST_CASE("integral and fractional parts") {
    OrderedBasis B{2, {Root(1, 2)}};
    CoVector a = cov({Rat(3, 10), Rat(-3, 10)});

    Bracket b = bracket(a, B);
    CHECK(eq(b.integral, cov({0, 0})));
    CHECK(eq(b.fractional, a));

    b = bracket(cov({Rat(13, 10), Rat(-13, 10)}), B);
    CHECK(eq(b.integral, Root(1, 2).covector(2)));
    CHECK(eq(b.fractional, a));

    b = bracket(cov({Rat(-3, 10), Rat(3, 10)}), B);
    CHECK(eq(b.integral, cov({-1, 1})));
    CHECK(eq(b.fractional, cov({Rat(7, 10), Rat(-7, 10)})));
    CHECK(eq(cov_add(b.integral, b.fractional), cov({Rat(-3, 10), Rat(3, 10)})));
}

TEST_CASE("regularity of parabolic weights") {
    CHECK(is_regular(cov({Rat(3, 10), Rat(-3, 10)})));
    CHECK_FALSE(is_regular(cov({Rat(1, 2), 0, Rat(-1, 2)})));
    CHECK(is_regular(cov({Rat(2, 5), Rat(1, 5), Rat(-3, 5)})));
}

TEST_CASE("chamber classification") {
    CoVector c1 = cov({Rat(1, 5), Rat(1, 10), Rat(-3, 10)});
    CoVector c2 = cov({Rat(1, 4), Rat(1, 8), Rat(-3, 8)});
    CHECK(classify_chamber(c1, c2).same_chamber);
    CHECK(classify_chamber(c1, c1).same_chamber);

    CoVector c3 = cov({Rat(3, 10), Rat(-1, 10), Rat(-1, 5)});
    ChamberRelation rel = classify_chamber(c1, c3);
    CHECK_FALSE(rel.same_chamber);
    REQUIRE(rel.walls.size() == 1);
    CHECK(rel.walls[0].pi_prime == std::vector<int>{2});
    CHECK(rel.walls[0].level == 0);

    CHECK_THROWS_AS(classify_chamber(cov({Rat(1, 2), 0, Rat(-1, 2)}), c1), std::domain_error);
}

TEST_CASE("affine action on twists") {
    CHECK(eq(affine_weyl_act(lat({1, -1}), 1, lat({0, 0})), lat({3, -3})));

    CoVector vdet0 = cov({0, 0});
    CHECK(eq(affine_weyl_act({1, 2}, lat({1, -1}), vdet0), lat({1, -1})));
    CHECK(eq(affine_weyl_act({2, 1}, lat({1, -1}), vdet0), lat({-2, 2})));

    // translations compose additively, reflections compose as a group
    LatticePoint l = lat({2, 1, -3});
    LatticePoint both = affine_weyl_act(lat({1, -1, 0}), 2, affine_weyl_act(lat({0, 1, -1}), 2, l));
    CHECK(eq(both, affine_weyl_act(lat({1, 0, -1}), 2, l)));

    CoVector vdet3 = cov({0, 0, 0});
    std::vector<int> s12{2, 1, 3}, s23{1, 3, 2};
    LatticePoint lhs = affine_weyl_act(s12, affine_weyl_act(s23, l, vdet3), vdet3);
    std::vector<int> comp{2, 3, 1};  // s12 after s23
    CHECK(eq(lhs, affine_weyl_act(comp, l, vdet3)));
}

TEST_CASE("alcove vertex points") {
    ThetaPoints t2 = theta_points(0, 2);
    CHECK(eq(t2.theta_m1, cov({Rat(1, 2), Rat(-1, 2)})));
    for (int r : {2, 3})
        for (long k : {0L, 1L, 2L}) {
            ThetaPoints t = theta_points(k, r);
            CHECK(eq(t.theta1_k, cov_sub(cov_scale(Rat(k + r), t.theta1), rho(r))));
            CHECK(eq(t.theta_m1_k, cov_sub(cov_scale(Rat(k + r), t.theta_m1), rho(r))));
        }
    CHECK(eq(theta_points(1, 3).theta1_k, cov({Rat(1, 3), Rat(4, 3), Rat(-5, 3)})));
}

TEST_CASE("rational parsing") {
    CHECK(rat_parse("3/10") == Rat(3, 10));
    CHECK(rat_parse("-3/10") == Rat(-3, 10));
    CHECK(rat_parse("7") == 7);
    CHECK(rat_parse("0.3") == Rat(3, 10));
    CHECK(rat_parse("-1.25") == Rat(-5, 4));
    CHECK(rat_parse("2/4") == Rat(1, 2));
    CHECK(rat_str(rat_parse("2/4")) == "1/2");
    CHECK_THROWS_AS(rat_parse("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(rat_parse("abc"), std::invalid_argument);
    CHECK_THROWS_AS(rat_parse(""), std::invalid_argument);
}
