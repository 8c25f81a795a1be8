#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "verlinde/characters.hpp"
#include "verlinde/root_system.hpp"

using namespace verlinde;

namespace {

// multiset view of a character: exponent coordinates -> total coefficient
std::map<Coords, Rat> term_map(const CharacterSum& phi) {
    std::map<Coords, Rat> m;
    for (const auto& [coeff, mu] : phi.terms)
        if (coeff != 0) m[mu.c] += coeff;
    for (auto it = m.begin(); it != m.end();)
        it = it->second == 0 ? m.erase(it) : std::next(it);
    return m;
}

std::map<Coords, Rat> scaled(const CharacterSum& phi, const Rat& s) {
    std::map<Coords, Rat> m = term_map(phi);
    for (auto& [mu, c] : m) c *= s;
    return m;
}

}  // namespace

TEST_CASE("weight multiplicities") {
    WeightTable std2 = weight_table(HighestWeight{1, 0});
    CHECK(std2.mult == std::map<std::vector<long>, long>{{{1, 0}, 1}, {{0, 1}, 1}});

    WeightTable std3 = weight_table(HighestWeight{1, 0, 0});
    CHECK(std3.mult.size() == 3);
    for (const auto& [mu, m] : std3.mult) CHECK(m == 1);

    WeightTable w21 = weight_table(HighestWeight{2, 1});
    CHECK(w21.mult == std::map<std::vector<long>, long>{{{2, 1}, 1}, {{1, 2}, 1}});

    CHECK_THROWS_AS(weight_table(HighestWeight{0, 1}), std::invalid_argument);
}

TEST_CASE("two multiplicity algorithms agree") {
    std::vector<HighestWeight> nus = {{1, 0},       {3, 1},       {2, 1, 0}, {3, 1, 0},
                                      {2, 2, 1},    {1, 1, 0, 0}, {2, 1, 1, 0}};
    for (const auto& nu : nus) {
        WeightTable gt = weight_table(nu);
        CHECK(gt == freudenthal_weight_table(nu));
        CHECK(Int(gt.dimension()) == weyl_dim(nu));
    }
    CHECK(weyl_dim(HighestWeight{1, 0}) == 2);
    CHECK(weyl_dim(HighestWeight{1, 0, 0}) == 3);
    CHECK(weyl_dim(HighestWeight{1, 1, 0}) == 3);
    CHECK(weyl_dim(HighestWeight{2, 0, 0}) == 6);
    CHECK(weyl_dim(HighestWeight{2, 1, 0}) == 8);
}

TEST_CASE("characters and the standard representation") {
    CharacterSum phi2 = character(HighestWeight{1, 0});
    CHECK(phi2.value_at_zero() == 2);
    CHECK(term_map(phi2) == std::map<Coords, Rat>{{{Rat(1, 2), Rat(-1, 2)}, 1},
                                                  {{Rat(-1, 2), Rat(1, 2)}, 1}});

    CharacterSum phi3 = character(HighestWeight{1, 0, 0});
    CHECK(phi3.value_at_zero() == 3);
    CHECK(term_map(phi3) == std::map<Coords, Rat>{{{Rat(2, 3), Rat(-1, 3), Rat(-1, 3)}, 1},
                                                  {{Rat(-1, 3), Rat(2, 3), Rat(-1, 3)}, 1},
                                                  {{Rat(-1, 3), Rat(-1, 3), Rat(2, 3)}, 1}});

    for (const HighestWeight& nu : {HighestWeight{2, 1, 0}, HighestWeight{3, 1}})
        CHECK(Rat(weyl_dim(nu)) == character(nu).value_at_zero());
}

TEST_CASE("directional derivatives") {
    CharacterSum phi3 = character(HighestWeight{1, 0, 0});
    CharacterSum d12 = directional_derivative(phi3, killing_dual(Root(1, 2).covector(3)));
    CHECK(term_map(d12) == std::map<Coords, Rat>{{{Rat(2, 3), Rat(-1, 3), Rat(-1, 3)}, 1},
                                                 {{Rat(-1, 3), Rat(2, 3), Rat(-1, 3)}, -1}});
    CharacterSum d23 = directional_derivative(phi3, killing_dual(Root(2, 3).covector(3)));
    CHECK(term_map(d23) == std::map<Coords, Rat>{{{Rat(-1, 3), Rat(2, 3), Rat(-1, 3)}, 1},
                                                 {{Rat(-1, 3), Rat(-1, 3), Rat(2, 3)}, -1}});

    CHECK(term_map(directional_derivative(phi3, Vector(Coords{0, 0, 0}))).empty());

    // rank 2: the derivative along the dual simple root is the odd
    // half-exponential pair (coefficients +1 and -1)
    CharacterSum d2 = directional_derivative(character(HighestWeight{1, 0}),
                                             killing_dual(Root(1, 2).covector(2)));
    CHECK(term_map(d2) == std::map<Coords, Rat>{{{Rat(1, 2), Rat(-1, 2)}, 1},
                                                {{Rat(-1, 2), Rat(1, 2)}, -1}});
}

TEST_CASE("hessian traces") {
    CharacterSum phi3 = character(HighestWeight{1, 0, 0});
    CHECK(term_map(hessian_trace(phi3)) == scaled(phi3, Rat(2, 3)));

    CharacterSum phi2 = character(HighestWeight{1, 0});
    CHECK(term_map(hessian_trace(phi2)) == scaled(phi2, Rat(1, 2)));

    CHECK(term_map(hessian_trace(character(HighestWeight{2, 2, 2}))).empty());
}

TEST_CASE("adams twists") {
    CharacterSum phi2 = character(HighestWeight{1, 0});
    CHECK(term_map(adams_twist(phi2, 1)) == term_map(phi2));
    CHECK(term_map(adams_twist(phi2, 2)) == std::map<Coords, Rat>{{{1, -1}, 1}, {{-1, 1}, 1}});
    CHECK(adams_twist(character(HighestWeight{2, 1, 0}), 3).value_at_zero() == 8);

    // scaling the argument multiplies the hessian trace by n^2
    CharacterSum lhs = hessian_trace(adams_twist(phi2, 2));
    CHECK(term_map(lhs) == scaled(adams_twist(phi2, 2), 2));  // norm2 of the doubled weight
    CHECK(term_map(lhs) == scaled(adams_twist(hessian_trace(phi2), 2), 4));
}

TEST_CASE("restriction to wall blocks") {
    WallSpec wall{3, {2}, 0};
    std::vector<BranchTerm> b = branch(HighestWeight{1, 0, 0}, wall);
    REQUIRE(b.size() == 2);
    std::map<std::pair<HighestWeight, HighestWeight>, Rat> got;
    for (const BranchTerm& t : b) {
        CHECK(t.multiplicity == 1);
        got[{t.nu_prime, t.nu_second}] = t.s;
    }
    CHECK(got.at({{1}, {0, 0}}) == Rat(2, 3));
    CHECK(got.at({{0}, {1, 0}}) == Rat(-1, 3));

    std::vector<BranchTerm> triv = branch(HighestWeight{0, 0, 0}, wall);
    REQUIRE(triv.size() == 1);
    CHECK(triv[0].multiplicity == 1);
    CHECK(triv[0].s == 0);

    // dimension bookkeeping through a rank-4 cut
    WallSpec w4{4, {1, 2}, 0};
    Int total = 0;
    for (const BranchTerm& t : branch(HighestWeight{1, 0, 0, 0}, w4))
        total += Int(t.multiplicity) * weyl_dim(t.nu_prime) * weyl_dim(t.nu_second);
    CHECK(total == 4);
}

TEST_CASE("twist shift tables") {
    auto table = [](const std::vector<HeckeShift>& shifts) {
        std::map<std::vector<Int>, Int> m;
        for (const HeckeShift& s : shifts)
            if (s.coefficient != 0) m[s.shift.c] += s.coefficient;
        return m;
    };

    auto minus1 = table(hecke_shift_coefficients(HighestWeight{1, 0, 0}, HeckeSide::minus));
    CHECK(minus1 == std::map<std::vector<Int>, Int>{{{1, 0, -1}, 1}});
    auto plus1 = table(hecke_shift_coefficients(HighestWeight{1, 0, 0}, HeckeSide::plus));
    CHECK(plus1 == std::map<std::vector<Int>, Int>{{{0, 0, 0}, 1}});

    auto minus210 = table(hecke_shift_coefficients(HighestWeight{2, 1, 0}, HeckeSide::minus));
    CHECK(minus210 == std::map<std::vector<Int>, Int>{{{2, 1, -3}, 2},
                                                      {{2, 0, -2}, 2},
                                                      {{1, 2, -3}, 1},
                                                      {{1, 0, -1}, 1},
                                                      {{1, 1, -2}, 2}});
    auto plus210 = table(hecke_shift_coefficients(HighestWeight{2, 1, 0}, HeckeSide::plus));
    CHECK(plus210 == std::map<std::vector<Int>, Int>{{{2, 0, -2}, 1},
                                                     {{1, 0, -1}, 2},
                                                     {{0, 2, -2}, 1},
                                                     {{0, 1, -1}, 2},
                                                     {{1, 1, -2}, 2}});

    CHECK(hecke_shift_coefficients(HighestWeight{0, 0}, HeckeSide::minus).empty());
}

TEST_CASE("weight tables are permutation invariant") {
    WeightTable w = weight_table(HighestWeight{3, 1, 0});
    for (const auto& [mu, m] : w.mult) {
        std::vector<long> p = mu;
        std::sort(p.begin(), p.end());
        do {
            CHECK(w.mult.at(p) == m);
        } while (std::next_permutation(p.begin(), p.end()));
    }
}
