#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "verlinde/characters.hpp"
#include "verlinde/engine.hpp"
#include "verlinde/laurent.hpp"

using namespace verlinde;

namespace {

Windows win1(long lo, long hi) {
    Windows w;
    w.lo = {lo};
    w.hi = {hi};
    return w;
}

Windows win2(long lo, long hi) {
    Windows w;
    w.lo = {lo, lo};
    w.hi = {hi, hi};
    return w;
}

LinearFormY form(std::initializer_list<Rat> cs) {
    LinearFormY f;
    f.coeff = cs;
    return f;
}

}  // namespace

TEST_CASE("exponential series") {
    auto ctx = make_context(win1(0, 2), 0);
    Series e = Series::exp_linear(ctx.get(), form({1}));
    CHECK(e.coefficient({0}).comp[0] == 1);
    CHECK(e.coefficient({1}).comp[0] == 1);
    CHECK(e.coefficient({2}).comp[0] == Rat(1, 2));

    // nilpotent multiplier stops at the linear jet term
    auto ctxj = make_context(win1(0, 3), 1);
    Series nil = Series::zero(ctxj.get());
    nil.add_term({1}, 1, 1);  // delta * y
    Series ej = Series::one(ctxj.get()).mul_exp_nilpotent(nil);
    CHECK(ej.coefficient({0}).comp[0] == 1);
    CHECK(ej.coefficient({1}).comp[1] == 1);
    CHECK(ej.coefficient({2}).comp[1] == 0);
    CHECK(ej.coefficient({3}).comp[1] == 0);

    auto ctx2 = make_context(win2(0, 3), 0);
    Series m = Series::exp_linear(ctx2.get(), form({Rat(1, 3), Rat(2, 3)}));
    CHECK(m.coefficient({1, 1}).comp[0] == Rat(2, 9));
}

TEST_CASE("hyperbolic sine factors") {
    auto ctx = make_context(win1(-2, 4), 0);
    OrderedBasis B{2, {Root(1, 2)}};
    BasisExpander ex(B);

    Series s = weyl_factor(Root(1, 2), ex, -1, 1, ctx.get());
    CHECK(s.coefficient({-1}).comp[0] == 1);
    CHECK(s.coefficient({0}).comp[0] == 0);
    CHECK(s.coefficient({1}).comp[0] == Rat(-1, 24));

    CHECK(weyl_factor(Root(1, 2), ex, 0, 1, ctx.get()).equal_values(Series::one(ctx.get())));

    // inverted two-variable form expands geometrically in the dominant
    // variable: 1/(y1+y2) carries -1 at y2 * y1^{-2}
    auto ctx2 = make_context(win2(-3, 3), 0);
    OrderedBasis B3{3, {Root(1, 2), Root(2, 3)}};
    BasisExpander ex3(B3);
    Series t = weyl_factor(Root(1, 3), ex3, -1, 1, ctx2.get());
    Series lin = Series::zero(ctx2.get());
    lin.add_term({1, 0}, 0, 1);
    lin.add_term({0, 1}, 0, 1);
    Series prod = t.mul(lin);  // (y1+y2) * [1/(2 sinh((y1+y2)/2))] has even part only
    CHECK(prod.coefficient({0, 0}).comp[0] == 1);
    Series geo = lin.inverse();
    CHECK(geo.coefficient({-2, 1}).comp[0] == -1);
    CHECK(geo.coefficient({-1, 0}).comp[0] == 1);
}

TEST_CASE("level denominators") {
    // truncated inverses are exact away from the window edge, so give the
    // window a margin beyond the highest coefficient under test
    auto ctx = make_context(win1(-4, 4), 0);
    OrderedBasis B{2, {Root(1, 2)}};
    BasisExpander ex(B);

    for (long kh : {3L, 5L}) {
        Series q = q_factor(0, Int(kh), {}, ex, ctx.get());
        CHECK(q.coefficient({-1}).comp[0] == Rat(-1, kh));
        CHECK(q.coefficient({0}).comp[0] == Rat(1, 2));
        CHECK(q.coefficient({1}).comp[0] == Rat(-kh) / 12);
    }

    // residue of e^{lambda y} / (1 - e^{k y}) is -1/k for any lambda
    for (long lam : {0L, 1L, 7L}) {
        Series f = Series::exp_linear(ctx.get(), form({Rat(lam)}));
        Series q = q_factor(0, Int(4), {}, ex, ctx.get());
        CHECK(f.mul(q).residue().comp[0] == Rat(-1, 4));
    }

    // jet-corrected factor inverts its denominator exactly in the inner
    // window region (the edge coefficients carry truncation error, which
    // is what the stability recheck machinery exists to absorb)
    auto ctxj = make_context(win1(-4, 4), 1);
    CharacterSum phi = character(HighestWeight{1, 0});
    Series q = q_factor(0, Int(3), {phi}, ex, ctxj.get());
    Series den = Series::one(ctxj.get());
    Series phis = character_series(phi, ex, 1, ctxj.get(), 1);
    phis.negate();
    den.sub(Series::exp_linear(ctxj.get(), form({3})).mul_exp_nilpotent(phis));
    Series prod = q.mul(den);
    for (long e = -2; e <= 2; ++e) {
        Jet je = prod.coefficient({e});
        CHECK(je.comp[0] == (e == 0 ? 1 : 0));
        CHECK(je.comp[1] == 0);
    }
}

TEST_CASE("iterated residues") {
    auto ctx = make_context(win2(-3, 3), 0);
    OrderedBasis B{3, {Root(1, 2), Root(2, 3)}};
    BasisExpander ex(B);

    // product of single-variable poles: each residue contributes -1
    for (auto [a1, a2] : {std::pair<Rat, Rat>{0, 0}, {1, 2}, {Rat(1, 2), Rat(-3, 2)}}) {
        Series f = Series::exp_linear(ctx.get(), form({a1, 0}));
        f = f.mul(Series::exp_linear(ctx.get(), form({0, a2})));
        f = f.mul(q_factor(0, Int(1), {}, ex, ctx.get()));
        f = f.mul(q_factor(1, Int(1), {}, ex, ctx.get()));
        CHECK(f.residue().comp[0] == 1);  // (-1)^{r-1} at r = 3
    }

    Series bare = Series::one(ctx.get()).shifted({-1, -1});
    CHECK(bare.residue().comp[0] == 1);
    CHECK(Series::one(ctx.get()).residue().comp[0] == 0);
}

TEST_CASE("path measure determinant") {
    OrderedBasis B{3, {Root(2, 3), Root(1, 2)}};
    BasisExpander ex(B);
    auto ctx = make_context(win2(-2, 2), 1);

    // constant character: diagonal determinant (k+r)^{r-1}
    Series m = jacobian_measure(ex, Int(5), {character(HighestWeight{0, 0, 0})}, 1, ctx.get());
    CHECK(m.coefficient({0, 0}).comp[0] == 25);
    CHECK(m.coefficient({0, 0}).comp[1] == 0);

    // rank 2: delta part is minus the hessian trace of the character
    OrderedBasis B2{2, {Root(1, 2)}};
    BasisExpander ex2(B2);
    auto ctx2 = make_context(win1(-4, 4), 1);
    CharacterSum phi = character(HighestWeight{1, 0});
    Series m2 = jacobian_measure(ex2, Int(4), {phi}, 1, ctx2.get());
    Series expect = character_series(hessian_trace(phi), ex2, 1, ctx2.get(), 1);
    expect.negate();
    for (long e = -4; e <= 4; ++e) {
        CHECK(m2.coefficient({e}).comp[1] == expect.coefficient({e}).comp[1]);
        CHECK(m2.coefficient({e}).comp[0] == (e == 0 ? Rat(4) : Rat(0)));
    }

    // the delta trace term does not depend on the chosen basis
    OrderedBasis Balt{3, {Root(3, 2), Root(1, 3)}};
    BasisExpander exalt(Balt);
    CharacterSum std3 = character(HighestWeight{1, 0, 0});
    Series ma = jacobian_measure(ex, Int(4), {std3}, 1, ctx.get());
    Series mb = jacobian_measure(exalt, Int(4), {std3}, 1, ctx.get());
    // -(k+r)^{r-2} * trHess(0) with trHess(0) = 3 * (2/3)
    CHECK(ma.coefficient({0, 0}).comp[1] == -8);
    CHECK(mb.coefficient({0, 0}).comp[1] == -8);
}

TEST_CASE("window planning and stabilization") {
    Windows plan = window_plan(2, 2, Int(1), 0, OrderedBasis{2, {Root(1, 2)}});
    REQUIRE(plan.nvars() == 1);
    CHECK(plan.lo[0] <= -5);
    CHECK(plan.hi[0] >= 1);

    // a stable integrand gives identical residues on enlarged windows
    OrderedBasis B{2, {Root(1, 2)}};
    BasisExpander ex(B);
    auto eval = [&](const SeriesContext* c) {
        Series f = Series::exp_linear(c, form({Rat(5, 2)}));
        return f.mul(q_factor(0, Int(3), {}, ex, c)).residue();
    };
    Jet r = stable_residue(win1(-3, 3), 0, eval);
    CHECK(r.comp[0] == Rat(-1, 3));
    Jet r2 = stable_residue(win1(-3, 3).expanded(4), 0, eval);
    CHECK(r2.comp[0] == Rat(-1, 3));

    CHECK(engine_counters().stability_checks > 0);
}
