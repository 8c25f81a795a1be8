#include "verlinde/suites.hpp"

#include <mpfr.h>

#include <algorithm>
#include <array>
#include <atomic>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <utility>

#include "verlinde/engine.hpp"
#include "verlinde/trees.hpp"

namespace verlinde {

namespace {

// Pinned tolerances and seeds: the trig oracle must sit within 1e-20 of an
// integer at 256-bit precision, and the randomized shift-identity instances
// are drawn from this fixed seed so every run tests the same 20 cases.
constexpr double kOracleTolerance = 1e-20;
constexpr mpfr_prec_t kOraclePrecision = 256;
constexpr unsigned long long kRandomSeed = 20260819ULL;

std::string lat_str(const LatticePoint& p) {
    std::ostringstream os;
    os << "(";
    for (int i = 0; i < p.rank(); ++i) os << (i ? "," : "") << p.c[i].get_str();
    os << ")";
    return os.str();
}

std::string hw_str(const HighestWeight& nu) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < nu.size(); ++i) os << (i ? "," : "") << nu[i];
    os << ")";
    return os.str();
}

LatticePoint lp(std::initializer_list<long> v) {
    std::vector<Int> c;
    for (long x : v) c.emplace_back(x);
    return LatticePoint(std::move(c));
}

// The two chambers adjacent to the rank-3 interior wall sum(c_2) = 0,
// upper (floor 0) and lower (floor -1) side.
CoVector upper_wall_point() { return CoVector(Coords{Rat(1, 5), Rat(1, 10), Rat(-3, 10)}); }
CoVector lower_wall_point() { return CoVector(Coords{Rat(3, 10), Rat(-1, 10), Rat(-1, 5)}); }
WallSpec rank3_wall() {
    WallSpec w;
    w.r = 3;
    w.pi_prime = {2};
    w.level = 0;
    return w;
}

EulerQuery make_query(int g, int r, long k, LatticePoint lambda, HighestWeight nu, CoVector c) {
    EulerQuery q;
    q.g = g;
    q.r = r;
    q.k = k;
    q.lambda = std::move(lambda);
    q.nu = std::move(nu);
    q.c = std::move(c);
    return q;
}

EulerQuery rank2_query(int g, long k, long lambda1, HighestWeight nu) {
    return make_query(g, 2, k, lp({lambda1, -lambda1}), std::move(nu),
                      CoVector(Coords{Rat(1, 4), Rat(-1, 4)}));
}

// Integrality cast used on every suite-level chi value; feeds the run-wide
// integrality counter and refuses non-integers.
Int checked_int(const Rat& v, const std::string& what) {
    count_integrality_check();
    if (!is_integer(v)) throw std::logic_error(what + ": exact value " + rat_str(v) + " is not an integer");
    return Int(v.get_num());
}

template <class T>
std::string diff_note(const std::string& where, const T& lhs, const T& rhs) {
    std::ostringstream os;
    os << where << ": " << lhs << " != " << rhs;
    return os.str();
}

std::string rat_mismatch(const std::string& where, const Rat& lhs, const Rat& rhs) {
    return diff_note(where, rat_str(lhs), rat_str(rhs));
}

// ----------------------------------------------------- merged residues ----
//
// Rank-3, bundle weight (1,0,0). Both canonical trees share the exponent
// lattice once the second tree is reflected by the coordinate swap (2 3);
// that swap maps its level denominators onto (1 - e^{K x})(1 - e^{K y})
// with x = <x_1 - x_2, .> and y = <x_2 - x_3, .>, at the cost of replacing
// the second numerator exponent by the swapped weight. The iterated
// residue reads the coefficient of (xy)^{-1} with y dominant.

struct MergedForm {
    int g;
    long k;
    long pad;
    bool dom_yx = true;  // y dominant; the frozen reading

    Rat kh() const { return Rat(k + 3); }

    LinearFormY lin(const Rat& xc, const Rat& yc) const {
        LinearFormY f;
        f.coeff = dom_yx ? std::vector<Rat>{yc, xc} : std::vector<Rat>{xc, yc};
        return f;
    }
    Series expf(const SeriesContext* c, const Rat& xc, const Rat& yc) const {
        return Series::exp_linear(c, lin(xc, yc));
    }
    // Standard-representation character and its two directional pieces in
    // the (x, y) chart: weights project to ((2,1), (-1,1), (-1,-2))/3.
    Series phi(const SeriesContext* c, int which) const {
        Series e1 = expf(c, Rat(2, 3), Rat(1, 3));
        Series e2 = expf(c, Rat(-1, 3), Rat(1, 3));
        Series e3 = expf(c, Rat(-1, 3), Rat(-2, 3));
        if (which == 1) {
            e1.sub(e2);
            return e1;
        }
        if (which == 2) {
            e2.sub(e3);
            return e2;
        }
        e1.add(e2);
        e1.add(e3);
        return e1;
    }
    Series wphi_inverse(const SeriesContext* c) const {
        auto sh = [&](const Rat& xc, const Rat& yc) {
            Series s = expf(c, xc / 2, yc / 2);
            s.sub(expf(c, -xc / 2, -yc / 2));
            return s;
        };
        return sh(1, 0).mul(sh(0, 1)).mul(sh(1, 1)).pow(2 * g - 1).inverse();
    }
    Series q_inv(const SeriesContext* c, bool x_edge) const {
        Series s = Series::one(c);
        s.sub(x_edge ? expf(c, kh(), 0) : expf(c, 0, kh()));
        return s.inverse();
    }
    // (2g/3K) phi + e^{Kx} phi_x q_x [+ e^{Ky} phi_y q_y]
    Series bracket_sum(const SeriesContext* c, bool with_y) const {
        Series b = phi(c, 0);
        b.scale(Rat(2 * g) / (3 * kh()));
        b.add(expf(c, kh(), 0).mul(phi(c, 1)).mul(q_inv(c, true)));
        if (with_y) b.add(expf(c, 0, kh()).mul(phi(c, 2)).mul(q_inv(c, false)));
        return b;
    }
    Rat unit() const {
        Rat n = rat_pow(Rat(3), g) * rat_pow(kh(), 2 * g);
        return g % 2 ? -n : n;
    }
    Windows plan() const {
        long w = 4 + 3 * (2 * g - 1) + 2 + pad;
        Windows win;
        win.lo = {-w, -w};
        win.hi = {w, w};
        return win;
    }
    std::string core_key(const char* kind, const Windows& win) const {
        std::ostringstream os;
        os << kind << "|g" << g << "|k" << k << "|dom" << dom_yx;
        for (int j = 0; j < win.nvars(); ++j) os << "|" << win.lo[j] << ":" << win.hi[j];
        return os.str();
    }
    Rat run(const char* kind, bool with_y, bool with_bracket,
            const std::function<Series(const SeriesContext*)>& numerator) const {
        return stable_residue(plan(), 0, [&](const SeriesContext* c) {
            auto ctx_sp = make_context(c->win, c->m);
            auto core = cached_series(core_key(kind, c->win), ctx_sp, [&](const SeriesContext* cc) {
                Series s = q_inv(cc, true);
                if (with_y) s = s.mul(q_inv(cc, false));
                s = s.mul(wphi_inverse(cc));
                if (with_bracket) s = s.mul(bracket_sum(cc, with_y));
                return s;
            });
            return numerator(c).mul(*core).residue();
        }).comp[0];
    }
};

}  // namespace

Rat merged_residue_chi(int g, long k, const LatticePoint& lambda, Chamber side, long window_pad) {
    if (lambda.rank() != 3) throw std::invalid_argument("merged form is rank-3 only");
    MergedForm m{g, k, window_pad};
    Rat l1(lambda.c[0]), l2(lambda.c[1]), l3(lambda.c[2]);
    Rat e1x = l1 + Rat(4, 3), e1y = l1 + l2 + Rat(5, 3);
    Rat e2x = e1x, e2y = l1 + l3 - Rat(1, 3);
    if (side == Chamber::less) {
        Rat r = m.run("mergedchi", true, true, [&](const SeriesContext* c) {
            Series num = m.expf(c, e1x, e1y);
            num.sub(m.expf(c, e2x, e2y));
            return num;
        });
        return m.unit() * r;
    }
    Rat main = m.run("mergedchi", true, true, [&](const SeriesContext* c) {
        Series num = m.expf(c, e1x, e1y);
        num.sub(m.expf(c, e2x, e2y + m.kh()));
        return num;
    });
    Rat corr = m.run("mergedcorr", true, false, [&](const SeriesContext* c) {
        return m.expf(c, e2x, e2y + m.kh()).mul(m.phi(c, 2));
    });
    return m.unit() * main - m.unit() * corr;
}

Rat merged_wall_residue(int g, long k, const LatticePoint& lambda, long window_pad) {
    if (lambda.rank() != 3) throw std::invalid_argument("merged form is rank-3 only");
    MergedForm m{g, k, window_pad};
    Rat l1(lambda.c[0]), l3(lambda.c[2]);
    Rat ex = l1 + Rat(4, 3), ey = l1 + l3 - Rat(1, 3);
    Rat r = m.run("mergedwall", false, true,
                  [&](const SeriesContext* c) { return m.expf(c, ex, ey); });
    return -m.unit() * r;
}

// ------------------------------------------------------------ trig sums ----

Int su2_trig_verlinde(int g, long k, long lambda1) {
    mpfr_t pi, num, den, term, acc, tmp;
    mpfr_inits2(kOraclePrecision, pi, num, den, term, acc, tmp, (mpfr_ptr) nullptr);
    mpfr_const_pi(pi, MPFR_RNDN);
    mpfr_set_ui(acc, 0, MPFR_RNDN);
    const long n = k + 2;
    for (long a = 1; a <= k + 1; ++a) {
        mpfr_mul_si(tmp, pi, a * (2 * lambda1 + 1), MPFR_RNDN);
        mpfr_div_si(tmp, tmp, n, MPFR_RNDN);
        mpfr_sin(num, tmp, MPFR_RNDN);
        mpfr_mul_si(tmp, pi, a, MPFR_RNDN);
        mpfr_div_si(tmp, tmp, n, MPFR_RNDN);
        mpfr_sin(den, tmp, MPFR_RNDN);
        mpfr_pow_si(den, den, 2 * g - 1, MPFR_RNDN);
        mpfr_div(term, num, den, MPFR_RNDN);
        mpfr_add(acc, acc, term, MPFR_RNDN);
    }
    mpfr_set_si(tmp, n, MPFR_RNDN);
    mpfr_div_ui(tmp, tmp, 2, MPFR_RNDN);
    mpfr_pow_si(tmp, tmp, g - 1, MPFR_RNDN);
    mpfr_mul(acc, acc, tmp, MPFR_RNDN);

    Int out;
    mpfr_get_z(out.get_mpz_t(), acc, MPFR_RNDN);
    mpfr_sub_z(tmp, acc, out.get_mpz_t(), MPFR_RNDN);
    mpfr_abs(tmp, tmp, MPFR_RNDN);
    const bool near_integer = mpfr_cmp_d(tmp, kOracleTolerance) < 0;
    mpfr_clears(pi, num, den, term, acc, tmp, (mpfr_ptr) nullptr);
    if (!near_integer)
        throw std::logic_error("trigonometric sum is not within tolerance of an integer");
    return out;
}

// -------------------------------------------------- vertex stabilizers ----

std::vector<AffineGen> vertex_stabilizer_gens(int r, Chamber side) {
    if (r < 2) throw std::invalid_argument("rank must be at least 2");
    auto transposition = [r](int i) {
        std::vector<int> s(r);
        for (int v = 0; v < r; ++v) s[v] = v + 1;
        std::swap(s[i - 1], s[i]);
        return s;
    };
    auto root_point = [r](int i, int j) {
        std::vector<Int> c(r, Int(0));
        c[i - 1] = 1;
        c[j - 1] = -1;
        return LatticePoint(std::move(c));
    };
    std::vector<AffineGen> out;
    if (side == Chamber::greater) {
        for (int i = 1; i + 1 < r; ++i)
            out.push_back({transposition(i), LatticePoint(), "s" + std::to_string(i) + std::to_string(i + 1)});
        out.push_back({transposition(r - 1), root_point(r - 1, r),
                       "t" + std::to_string(r - 1) + std::to_string(r) + "*s" + std::to_string(r - 1) +
                           std::to_string(r)});
    } else {
        for (int i = 2; i < r; ++i)
            out.push_back({transposition(i), LatticePoint(), "s" + std::to_string(i) + std::to_string(i + 1)});
        out.push_back({transposition(1), root_point(1, 2), "t12*s12"});
    }
    return out;
}

LatticePoint apply_affine_gen(const AffineGen& gen, long k, const LatticePoint& lambda,
                              const CoVector& v_det) {
    LatticePoint out = affine_weyl_act(gen.sigma, lambda, v_det);
    if (gen.gamma.rank() != 0) out = affine_weyl_act(gen.gamma, k, out);
    return out;
}

// ------------------------------------------------------------- runner ----

long SuiteReport::failures() const {
    long n = 0;
    for (const CheckResult& c : checks)
        if (!c.ok) ++n;
    return n;
}

void CheckSet::add(std::string name, std::function<std::string()> body) {
    items_.emplace_back(std::move(name), std::move(body));
}

SuiteReport CheckSet::run(std::string suite, int jobs) const {
    SuiteReport rep;
    rep.suite = std::move(suite);
    rep.checks.resize(items_.size());
    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= items_.size()) break;
            CheckResult r;
            r.name = items_[i].first;
            try {
                r.detail = items_[i].second();
                r.ok = r.detail.empty();
            } catch (const std::exception& e) {
                r.ok = false;
                r.detail = std::string("exception: ") + e.what();
            }
            rep.checks[i] = std::move(r);
        }
    };
    const int n = std::max(1, jobs);
    if (n == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n);
        for (int t = 0; t < n; ++t) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    return rep;
}

// -------------------------------------------------------------- suites ----

namespace {

SuiteReport suite_rank2(int jobs) {
    CheckSet set;
    for (int g : {2, 3})
        for (long k = 1; k <= 4; ++k)
            for (HighestWeight nu : {HighestWeight{1, 0}, {2, 0}, {2, 1}}) {
                std::ostringstream name;
                name << "closed form g=" << g << " k=" << k << " nu=" << hw_str(nu);
                set.add(name.str(), [g, k, nu]() -> std::string {
                    for (long l1 = 0; l1 <= k; ++l1) {
                        Int lhs = chi_vector(rank2_query(g, k, l1, nu)).value;
                        Int rhs = rank2_closed(g, k, l1, nu);
                        if (lhs != rhs)
                            return diff_note("lambda1=" + std::to_string(l1), lhs.get_str(), rhs.get_str());
                    }
                    return "";
                });
            }
    for (int g : {2, 3})
        for (long k = 1; k <= 3; ++k) {
            std::ostringstream name;
            name << "zero weight vanishes r=2 g=" << g << " k=" << k;
            set.add(name.str(), [g, k]() -> std::string {
                for (long l1 = 0; l1 <= k; ++l1) {
                    Int v = chi_vector(rank2_query(g, k, l1, HighestWeight{0, 0})).value;
                    if (v != 0) return diff_note("lambda1=" + std::to_string(l1), v.get_str(), std::string("0"));
                }
                return "";
            });
        }
    const std::vector<LatticePoint> grid3 = {lp({0, 0, 0}), lp({1, 0, -1}), lp({2, 1, -3})};
    for (int g : {2, 3})
        for (long k = 1; k <= 3; ++k) {
            std::ostringstream name;
            name << "zero weight vanishes r=3 g=" << g << " k=" << k;
            set.add(name.str(), [g, k, grid3]() -> std::string {
                for (const LatticePoint& lam : grid3) {
                    EulerQuery q = make_query(g, 3, k, lam, HighestWeight{0, 0, 0}, upper_wall_point());
                    Int v = chi_vector(q).value;
                    if (v != 0) return diff_note("lambda=" + lat_str(lam), v.get_str(), std::string("0"));
                }
                return "";
            });
        }
    return set.run("rank2", jobs);
}

SuiteReport suite_facts(int jobs) {
    CheckSet set;
    for (int g : {2, 3})
        for (long k = 1; k <= 3; ++k)
            for (HighestWeight nu : {HighestWeight{1, 0}, {2, 1}}) {
                std::ostringstream n1;
                n1 << "crossing difference g=" << g << " k=" << k << " nu=" << hw_str(nu);
                set.add(n1.str(), [g, k, nu]() -> std::string {
                    for (long l = -2; l <= 2; ++l)
                        for (long m = -2; m <= 2; ++m) {
                            Rat lhs = rank2_two_point(g, k, l, m, nu, Chamber::greater) -
                                      rank2_two_point(g, k, l, m, nu, Chamber::less);
                            Rat rhs = rank2_fact1_rhs(g, k, l, m, nu);
                            if (lhs != rhs)
                                return rat_mismatch("(l,m)=(" + std::to_string(l) + "," + std::to_string(m) + ")",
                                                    lhs, rhs);
                        }
                    return "";
                });
                std::ostringstream n2;
                n2 << "reflections g=" << g << " k=" << k << " nu=" << hw_str(nu);
                set.add(n2.str(), [g, k, nu]() -> std::string {
                    const long s = nu[0] + nu[1];
                    auto gt = [&](long l, long m) { return rank2_two_point(g, k, l, m, nu, Chamber::greater); };
                    auto lt = [&](long l, long m) { return rank2_two_point(g, k, l, m, nu, Chamber::less); };
                    for (long l = -2; l <= 2; ++l)
                        for (long m = -2; m <= 2; ++m) {
                            std::string at = "(l,m)=(" + std::to_string(l) + "," + std::to_string(m) + ")";
                            Rat a1 = gt(l, m), a2 = -gt(l, -m - 1);
                            if (a1 != a2) return rat_mismatch("mu reflection at " + at, a1, a2);
                            Rat b1 = gt(l, m);
                            Rat b2 = -gt(-l + k + 1 - s, m) - rank2_fact2_tail(g, k, l, m, nu, Chamber::greater);
                            if (b1 != b2) return rat_mismatch("lambda reflection with tail at " + at, b1, b2);
                            Rat c1 = lt(l, m), c2 = -lt(-l - 1 - s, m);
                            if (c1 != c2) return rat_mismatch("lambda reflection at " + at, c1, c2);
                            Rat d1 = lt(l, m);
                            Rat d2 = -lt(l, -m + k + 1) - rank2_fact2_tail(g, k, l, m, nu, Chamber::less);
                            if (d1 != d2) return rat_mismatch("mu reflection with tail at " + at, d1, d2);
                        }
                    return "";
                });
            }
    return set.run("facts", jobs);
}

SuiteReport suite_wallcross(int jobs) {
    CheckSet set;
    const std::vector<LatticePoint> five = {lp({0, 0, 0}), lp({1, 0, -1}), lp({2, 0, -2}),
                                            lp({2, 1, -3}), lp({3, 1, -4})};
    for (long k : {1L, 2L})
        for (const LatticePoint& lam : five) {
            std::ostringstream name;
            name << "chamber jump vs merged wall form k=" << k << " lambda=" << lat_str(lam);
            set.add(name.str(), [k, lam]() -> std::string {
                EulerQuery up = make_query(2, 3, k, lam, HighestWeight{1, 0, 0}, upper_wall_point());
                EulerQuery dn = up;
                dn.c = lower_wall_point();
                Int jump = chi_vector(dn).value - chi_vector(up).value;
                Int merged = checked_int(merged_wall_residue(2, k, lam), "merged wall residue");
                if (jump != merged) return diff_note("merged form", jump.get_str(), merged.get_str());
                Int res = wallcross_residue(up, rank3_wall());
                if (jump != res) return diff_note("wall residue", jump.get_str(), res.get_str());
                return "";
            });
        }
    for (HighestWeight nu : {HighestWeight{2, 1, 0}, {2, 0, 0}}) {
        std::ostringstream name;
        name << "wall residue equals chamber jump nu=" << hw_str(nu);
        set.add(name.str(), [nu]() -> std::string {
            LatticePoint lam = lp({2, 1, -3});
            EulerQuery up = make_query(2, 3, 1, lam, nu, upper_wall_point());
            EulerQuery dn = up;
            dn.c = lower_wall_point();
            Int jump = chi_vector(up).value - chi_vector(dn).value;
            Int res = wallcross_residue(up, rank3_wall());
            if (jump != res) return diff_note("upper minus lower", jump.get_str(), res.get_str());
            if (jump == 0) return "expected a nonzero jump at this weight";
            return "";
        });
    }
    set.add("split-family assembly", []() -> std::string {
        auto d_prime = diagonal_on({2}, 3);
        auto d_second = diagonal_on({1, 3}, 3);
        struct Probe {
            long k;
            LatticePoint lam;
            HighestWeight nu;
        };
        const std::vector<Probe> probes = {{1, lp({2, 1, -3}), {2, 1, 0}},
                                           {1, lp({1, 0, -1}), {1, 0, 0}},
                                           {2, lp({1, 0, -1}), {1, 0, 0}}};
        for (const Probe& p : probes) {
            EulerQuery q = make_query(2, 3, p.k, p.lam, p.nu, upper_wall_point());
            Int plain = wallcross_residue(q, rank3_wall());
            Int split = wallcross_residue(q, rank3_wall(), d_prime, d_second);
            if (plain != split)
                return diff_note("k=" + std::to_string(p.k) + " lambda=" + lat_str(p.lam), plain.get_str(),
                                split.get_str());
        }
        return "";
    });
    set.add("line-bundle wall jump", []() -> std::string {
        for (const LatticePoint& lam : {lp({1, 0, -1}), lp({2, 1, -3})}) {
            EulerQuery up = make_query(2, 3, 1, lam, HighestWeight{0, 0, 0}, upper_wall_point());
            EulerQuery dn = up;
            dn.c = lower_wall_point();
            Int jump = chi_line(up).value - chi_line(dn).value;
            Int res = wallcross_residue(up, rank3_wall());
            if (jump != res) return diff_note("lambda=" + lat_str(lam), jump.get_str(), res.get_str());
        }
        return "";
    });
    for (long k : {1L, 2L})
        for (const LatticePoint& lam : {lp({1, 0, -1}), lp({2, 1, -3})}) {
            std::ostringstream name;
            name << "merged two-variable chi k=" << k << " lambda=" << lat_str(lam);
            set.add(name.str(), [k, lam]() -> std::string {
                EulerQuery up = make_query(2, 3, k, lam, HighestWeight{1, 0, 0}, upper_wall_point());
                EulerQuery dn = up;
                dn.c = lower_wall_point();
                Int lo = checked_int(merged_residue_chi(2, k, lam, Chamber::less), "merged chi");
                Int hi = checked_int(merged_residue_chi(2, k, lam, Chamber::greater), "merged chi");
                if (lo != chi_vector(dn).value)
                    return diff_note("lower side", lo.get_str(), chi_vector(dn).value.get_str());
                if (hi != chi_vector(up).value)
                    return diff_note("upper side", hi.get_str(), chi_vector(up).value.get_str());
                return "";
            });
        }
    return set.run("wallcross", jobs);
}

SuiteReport suite_symmetry(int jobs) {
    CheckSet set;
    const std::vector<LatticePoint> sample = {lp({0, 0, 0}),  lp({1, 0, -1}), lp({1, 1, -2}),
                                              lp({2, 0, -2}), lp({2, 1, -3}), lp({3, 1, -4}),
                                              lp({1, -1, 0}), lp({2, -1, -1}), lp({3, 0, -3}),
                                              lp({4, 1, -5})};
    auto antisym_body = [](long k, LatticePoint lam, HighestWeight nu) -> std::string {
        const CoVector vdet = det_twist(3, weight_total(nu));
        for (Chamber side : {Chamber::greater, Chamber::less}) {
            const char* tag = side == Chamber::greater ? ">" : "<";
            EulerQuery q = make_query(2, 3, k, lam, nu, upper_wall_point());
            Int f0 = f_shifted(q, side);
            Int F0 = F_shifted(q, side);
            for (const AffineGen& gen : vertex_stabilizer_gens(3, side)) {
                LatticePoint lam2 = apply_affine_gen(gen, k, lam, vdet);
                EulerQuery q2 = make_query(2, 3, k, lam2, nu, upper_wall_point());
                Int f2 = f_shifted(q2, side);
                if (f2 != -f0)
                    return diff_note("f" + std::string(tag) + " under " + gen.name + " at " + lat_str(lam2),
                                    f2.get_str(), Int(-f0).get_str());
                Int F2 = F_shifted(q2, side);
                if (F2 != -F0)
                    return diff_note("F" + std::string(tag) + " under " + gen.name + " at " + lat_str(lam2),
                                    F2.get_str(), Int(-F0).get_str());
            }
            EulerQuery qc = q;
            qc.c = vertex_chamber_point(3, side);
            Int chi = chi_vector(qc).value;
            Rat res = residue_at_vertex(q, side);
            if (Rat(chi) - Rat(f0) != res - Rat(F0))
                return rat_mismatch("chi - f vs R - F on side " + std::string(tag), Rat(chi) - Rat(f0),
                                    res - Rat(F0));
        }
        return "";
    };
    for (long k : {1L, 2L})
        for (const LatticePoint& lam : sample) {
            std::ostringstream name;
            name << "vertex antisymmetry k=" << k << " lambda=" << lat_str(lam);
            set.add(name.str(), [antisym_body, k, lam]() { return antisym_body(k, lam, {1, 0, 0}); });
        }
    for (const LatticePoint& lam : {lp({1, 0, -1}), lp({2, 0, -2})}) {
        std::ostringstream name;
        name << "vertex antisymmetry nu=(1,1,0) lambda=" << lat_str(lam);
        set.add(name.str(), [antisym_body, lam]() { return antisym_body(1, lam, {1, 1, 0}); });
    }

    // Randomized shift-identity instances: 12 at rank 2, 8 at rank 3, all
    // drawn once from the pinned seed so the case list never varies.
    std::mt19937_64 rng(kRandomSeed);
    auto draw = [&rng](long lo, long hi) {
        return std::uniform_int_distribution<long>(lo, hi)(rng);
    };
    const std::vector<HighestWeight> nus2 = {{1, 0}, {2, 0}, {2, 1}, {3, 1}};
    for (int i = 0; i < 12; ++i) {
        int g = 2 + static_cast<int>(draw(0, 1));
        long k = draw(1, 4);
        HighestWeight nu = nus2[static_cast<std::size_t>(draw(0, 3))];
        long l1 = draw(-3, 3);
        long w1 = draw(-2, 2);
        long qden = std::array<long, 3>{7, 11, 13}[static_cast<std::size_t>(draw(0, 2))];
        Rat c1(draw(-qden + 1, qden - 1), qden);
        c1.canonicalize();
        OrderedTree B = canonical_diagonal(2)[0];
        std::ostringstream name;
        name << "shift identity r=2 #" << i << " g=" << g << " k=" << k << " nu=" << hw_str(nu);
        set.add(name.str(), [g, k, nu, l1, w1, c1, B]() -> std::string {
            TrivialShiftCheck t = trivialshift_check(g, k, nu, lp({l1, -l1}), B,
                                                     CoVector(Coords{c1, -c1}), lp({w1, -w1}));
            if (!t.holds()) return rat_mismatch("lhs vs rhs", t.lhs, t.rhs);
            return "";
        });
    }
    struct Combo {
        int g;
        long k;
        HighestWeight nu;
    };
    const std::vector<Combo> combos = {{2, 1, {1, 0, 0}}, {2, 2, {1, 0, 0}}, {2, 1, {1, 1, 0}}};
    const auto fam3 = enumerate_diagonal(3);
    for (int i = 0; i < 8; ++i) {
        const Combo& cb = combos[static_cast<std::size_t>(i) % combos.size()];
        OrderedTree B = fam3[static_cast<std::size_t>(draw(0, 1))];
        long a = draw(-2, 2), b = draw(-2, 2);
        long wa = draw(-2, 2), wb = draw(-2, 2);
        long qden = std::array<long, 3>{7, 11, 13}[static_cast<std::size_t>(draw(0, 2))];
        Rat c1(draw(-qden + 1, qden - 1), qden), c2(draw(-qden + 1, qden - 1), qden);
        c1.canonicalize();
        c2.canonicalize();
        std::ostringstream name;
        name << "shift identity r=3 #" << i << " g=" << cb.g << " k=" << cb.k << " nu=" << hw_str(cb.nu);
        set.add(name.str(), [cb, B, a, b, wa, wb, c1, c2]() -> std::string {
            TrivialShiftCheck t =
                trivialshift_check(cb.g, cb.k, cb.nu, lp({a, b, -a - b}), B,
                                   CoVector(Coords{c1, c2, -c1 - c2}), lp({wa, wb, -wa - wb}));
            if (!t.holds()) return rat_mismatch("lhs vs rhs", t.lhs, t.rhs);
            return "";
        });
    }
    return set.run("symmetry", jobs);
}

std::vector<HighestWeight> dominant_upto(int r, long cap) {
    std::vector<HighestWeight> out;
    HighestWeight nu(static_cast<std::size_t>(r), 0);
    std::function<void(int)> rec = [&](int pos) {
        if (pos == r - 1) {
            out.push_back(nu);
            return;
        }
        const long prev = pos == 0 ? cap : nu[static_cast<std::size_t>(pos) - 1];
        for (long v = 0; v <= prev; ++v) {
            nu[static_cast<std::size_t>(pos)] = v;
            if (weyl_dim(nu) > cap) break;
            rec(pos + 1);
        }
        nu[static_cast<std::size_t>(pos)] = 0;
    };
    rec(0);
    return out;
}

std::map<Coords, Rat> character_map(const CharacterSum& cs) {
    std::map<Coords, Rat> m;
    for (const auto& [coeff, cov] : cs.terms) m[cov.c] += coeff;
    for (auto it = m.begin(); it != m.end();) {
        if (it->second == 0)
            it = m.erase(it);
        else
            ++it;
    }
    return m;
}

SuiteReport suite_characters(int jobs) {
    CheckSet set;
    for (int r : {2, 3, 4}) {
        std::ostringstream name;
        name << "weight tables agree r=" << r;
        set.add(name.str(), [r]() -> std::string {
            for (const HighestWeight& nu : dominant_upto(r, 500)) {
                WeightTable gt = weight_table(nu);
                WeightTable fr = freudenthal_weight_table(nu);
                if (!(gt == fr)) return "tables differ at nu=" + hw_str(nu);
                Int dim = weyl_dim(nu);
                if (Int(gt.dimension()) != dim)
                    return diff_note("dimension at nu=" + hw_str(nu), std::to_string(gt.dimension()),
                                    dim.get_str());
                if (character(nu).value_at_zero() != Rat(dim))
                    return "character at zero misses the dimension at nu=" + hw_str(nu);
            }
            return "";
        });
    }
    set.add("standard-weight character derivatives", []() -> std::string {
        const CharacterSum phi = character(HighestWeight{1, 0, 0});
        auto term = [](Rat a, Rat b, Rat c) { return Coords{a, b, c}; };
        std::map<Coords, Rat> want = {{term(Rat(2, 3), Rat(-1, 3), Rat(-1, 3)), Rat(1)},
                                      {term(Rat(-1, 3), Rat(2, 3), Rat(-1, 3)), Rat(1)},
                                      {term(Rat(-1, 3), Rat(-1, 3), Rat(2, 3)), Rat(1)}};
        if (character_map(phi) != want) return "standard character weights are off";
        const Root a12(1, 2), a23(2, 3);
        std::map<Coords, Rat> dx = {{term(Rat(2, 3), Rat(-1, 3), Rat(-1, 3)), Rat(1)},
                                    {term(Rat(-1, 3), Rat(2, 3), Rat(-1, 3)), Rat(-1)}};
        if (character_map(directional_derivative(phi, killing_dual(a12.covector(3)))) != dx)
            return "derivative along the first chart direction is off";
        std::map<Coords, Rat> dy = {{term(Rat(-1, 3), Rat(2, 3), Rat(-1, 3)), Rat(1)},
                                    {term(Rat(-1, 3), Rat(-1, 3), Rat(2, 3)), Rat(-1)}};
        if (character_map(directional_derivative(phi, killing_dual(a23.covector(3)))) != dy)
            return "derivative along the second chart direction is off";
        std::map<Coords, Rat> tr;
        for (const auto& [cov, coeff] : character_map(phi)) tr[cov] = coeff * Rat(2, 3);
        if (character_map(hessian_trace(phi)) != tr) return "hessian trace is not (2/3) phi";
        return "";
    });
    set.add("shift coefficient tables", []() -> std::string {
        auto as_map = [](const std::vector<HeckeShift>& v) {
            std::map<std::vector<Int>, Int> m;
            for (const HeckeShift& h : v)
                if (h.coefficient != 0) m[h.shift.c] += h.coefficient;
            return m;
        };
        auto key = [](std::initializer_list<long> v) {
            std::vector<Int> c;
            for (long x : v) c.emplace_back(x);
            return c;
        };
        auto got_minus = as_map(hecke_shift_coefficients({1, 0, 0}, HeckeSide::minus));
        std::map<std::vector<Int>, Int> want_minus = {{key({1, 0, -1}), Int(1)}};
        if (got_minus != want_minus) return "standard weight, lower side table is off";
        auto got_plus = as_map(hecke_shift_coefficients({1, 0, 0}, HeckeSide::plus));
        std::map<std::vector<Int>, Int> want_plus = {{key({0, 0, 0}), Int(1)}};
        if (got_plus != want_plus) return "standard weight, upper side table is off";
        auto adj_minus = as_map(hecke_shift_coefficients({2, 1, 0}, HeckeSide::minus));
        std::map<std::vector<Int>, Int> want_adj_minus = {{key({2, 1, -3}), Int(2)},
                                                          {key({2, 0, -2}), Int(2)},
                                                          {key({1, 2, -3}), Int(1)},
                                                          {key({1, 0, -1}), Int(1)},
                                                          {key({1, 1, -2}), Int(2)}};
        if (adj_minus != want_adj_minus) return "adjoint weight, lower side table is off";
        auto adj_plus = as_map(hecke_shift_coefficients({2, 1, 0}, HeckeSide::plus));
        std::map<std::vector<Int>, Int> want_adj_plus = {{key({2, 0, -2}), Int(1)},
                                                         {key({1, 0, -1}), Int(2)},
                                                         {key({0, 2, -2}), Int(1)},
                                                         {key({0, 1, -1}), Int(2)},
                                                         {key({1, 1, -2}), Int(2)}};
        if (adj_plus != want_adj_plus) return "adjoint weight, upper side table is off";
        return "";
    });
    set.add("restriction branching", []() -> std::string {
        auto terms = branch(HighestWeight{1, 0, 0}, rank3_wall());
        if (terms.size() != 2) return "expected two branch terms, got " + std::to_string(terms.size());
        bool saw_prime = false, saw_second = false;
        for (const BranchTerm& t : terms) {
            if (t.multiplicity != 1) return "branch multiplicity is off";
            if (t.nu_prime == HighestWeight{1} && t.nu_second == HighestWeight{0, 0}) {
                saw_prime = t.s == Rat(2, 3);
            } else if (t.nu_prime == HighestWeight{0} && t.nu_second == HighestWeight{1, 0}) {
                saw_second = t.s == Rat(-1, 3);
            } else {
                return "unexpected branch term";
            }
        }
        if (!saw_prime || !saw_second) return "branch weights or shifts are off";
        return "";
    });
    return set.run("characters", jobs);
}

SuiteReport suite_engine(int jobs) {
    CheckSet set;
    set.add("diagonal family sizes", []() -> std::string {
        const std::array<std::size_t, 3> want = {1, 2, 6};
        for (int r : {2, 3, 4}) {
            auto fam = enumerate_diagonal(r);
            if (fam.size() != want[static_cast<std::size_t>(r - 2)])
                return diff_note("r=" + std::to_string(r), std::to_string(fam.size()),
                                std::to_string(want[static_cast<std::size_t>(r - 2)]));
            if (!is_diagonal(fam)) return "enumerated family fails the pairing test at r=" + std::to_string(r);
        }
        for (int r = 2; r <= 5; ++r)
            if (!is_diagonal(canonical_diagonal(r)))
                return "canonical family fails the pairing test at r=" + std::to_string(r);
        return "";
    });
    set.add("canonical rank-3 pair", []() -> std::string {
        auto fam = canonical_diagonal(3);
        if (fam.size() != 2) return "expected two members";
        OrderedTree b1(3, {Root(2, 3), Root(1, 2)});
        OrderedTree b2(3, {Root(3, 2), Root(1, 3)});
        if (!(fam[0] == b1 && fam[1] == b2) && !(fam[0] == b2 && fam[1] == b1))
            return "members differ from the path pair";
        return "";
    });
    set.add("independent diagonal family", []() -> std::string {
        const auto canon = canonical_diagonal(3);
        std::vector<OrderedTree> other = enumerate_diagonal(3);
        auto same_family = [](const std::vector<OrderedTree>& a, const std::vector<OrderedTree>& b) {
            if (a.size() != b.size()) return false;
            std::vector<OrderedTree> x = a, y = b;
            std::sort(x.begin(), x.end());
            std::sort(y.begin(), y.end());
            return x == y;
        };
        if (same_family(other, canon)) {
            // Relabel vertices 1 <-> 3 across the canonical family.
            other.clear();
            auto swap13 = [](int v) { return v == 1 ? 3 : v == 3 ? 1 : v; };
            for (const OrderedTree& t : canon) {
                OrderedTree s = t;
                for (Root& e : s.roots) e = Root(swap13(e.i), swap13(e.j));
                other.push_back(s);
            }
        }
        if (!is_diagonal(other)) return "alternate family fails the pairing test";
        if (same_family(other, canon)) return "could not produce a distinct family";
        EulerQuery q = make_query(2, 3, 1, lp({1, 0, -1}), HighestWeight{1, 0, 0}, upper_wall_point());
        EulerQuery q2 = q;
        q2.basis = other;
        if (chi_vector(q).value != chi_vector(q2).value)
            return diff_note("vector case", chi_vector(q).value.get_str(), chi_vector(q2).value.get_str());
        EulerQuery ql = q;
        ql.nu = {0, 0, 0};
        EulerQuery ql2 = q2;
        ql2.nu = {0, 0, 0};
        if (chi_line(ql).value != chi_line(ql2).value)
            return diff_note("line case", chi_line(ql).value.get_str(), chi_line(ql2).value.get_str());
        return "";
    });
    set.add("window recheck sample", []() -> std::string {
        const LatticePoint lam = lp({1, 0, -1});
        for (long pad : {4L}) {
            if (merged_wall_residue(2, 1, lam, 0) != merged_wall_residue(2, 1, lam, pad))
                return "wall form moved under padded windows";
            for (Chamber side : {Chamber::greater, Chamber::less})
                if (merged_residue_chi(2, 1, lam, side, 0) != merged_residue_chi(2, 1, lam, side, pad))
                    return "chi form moved under padded windows";
        }
        return "";
    });
    set.add("stability counters", []() -> std::string {
        EngineCounters before = engine_counters();
        (void)merged_wall_residue(2, 1, lp({0, 0, 0}));
        EngineCounters after = engine_counters();
        if (after.stability_checks <= before.stability_checks)
            return "no enlarged-window comparisons were recorded";
        if (after.stability_retries != before.stability_retries)
            return "a residue needed window growth beyond its plan";
        return "";
    });
    return set.run("engine", jobs);
}

SuiteReport suite_oracle(int jobs) {
    CheckSet set;
    for (int g : {2, 3})
        for (long k = 1; k <= 5; ++k) {
            std::ostringstream name;
            name << "trig oracle g=" << g << " k=" << k;
            set.add(name.str(), [g, k]() -> std::string {
                for (long l1 = 0; l1 <= k; ++l1) {
                    EulerQuery q = rank2_query(g, k, l1, HighestWeight{});
                    Int lhs = chi_line(q).value;
                    Int rhs = su2_trig_verlinde(g, k, l1);
                    if (lhs != rhs)
                        return diff_note("lambda1=" + std::to_string(l1), lhs.get_str(), rhs.get_str());
                }
                return "";
            });
        }
    for (int g : {2, 3})
        for (long k = 1; k <= 3; ++k) {
            std::ostringstream name;
            name << "scaled line consistency r=2 g=" << g << " k=" << k;
            set.add(name.str(), [g, k]() -> std::string {
                for (long l1 = 0; l1 <= 1; ++l1) {
                    EulerQuery q = rank2_query(g, k, l1, HighestWeight{0, 0});
                    ChiResult vec = chi_vector(q);
                    ChiResult line = chi_line(q);
                    if (vec.value != 0) return "zero-weight value is nonzero at lambda1=" + std::to_string(l1);
                    if (vec.delta_free != line.raw)
                        return rat_mismatch("graded body vs line at lambda1=" + std::to_string(l1),
                                            vec.delta_free, line.raw);
                }
                return "";
            });
        }
    set.add("scaled line consistency r=3", []() -> std::string {
        for (long k : {1L, 2L})
            for (const LatticePoint& lam : {lp({0, 0, 0}), lp({1, 0, -1})}) {
                EulerQuery q = make_query(2, 3, k, lam, HighestWeight{0, 0, 0}, upper_wall_point());
                ChiResult vec = chi_vector(q);
                ChiResult line = chi_line(q);
                if (vec.value != 0) return "zero-weight value is nonzero at lambda=" + lat_str(lam);
                if (vec.delta_free != line.raw)
                    return rat_mismatch("graded body vs line at k=" + std::to_string(k) + " lambda=" + lat_str(lam),
                                        vec.delta_free, line.raw);
            }
        return "";
    });
    set.add("level-one closed value", []() -> std::string {
        for (int g : {2, 3}) {
            EulerQuery q = make_query(g, 3, 1, lp({0, 0, 0}), HighestWeight{}, upper_wall_point());
            Int got = chi_line(q).value;
            Int want = int_pow(Int(3), static_cast<unsigned long>(g));
            if (got != want) return diff_note("g=" + std::to_string(g), got.get_str(), want.get_str());
        }
        return "";
    });
    return set.run("oracle", jobs);
}

}  // namespace

const std::vector<std::string> kSuiteNames = {"rank2",      "facts",  "wallcross", "symmetry",
                                              "characters", "engine", "oracle"};

SuiteReport run_suite(const std::string& name, int jobs) {
    if (name == "rank2") return suite_rank2(jobs);
    if (name == "facts") return suite_facts(jobs);
    if (name == "wallcross") return suite_wallcross(jobs);
    if (name == "symmetry") return suite_symmetry(jobs);
    if (name == "characters") return suite_characters(jobs);
    if (name == "engine") return suite_engine(jobs);
    if (name == "oracle") return suite_oracle(jobs);
    throw std::invalid_argument("unknown suite '" + name + "'");
}

std::vector<SuiteReport> run_all_suites(int jobs) {
    std::vector<SuiteReport> out;
    out.reserve(kSuiteNames.size());
    for (const std::string& n : kSuiteNames) out.push_back(run_suite(n, jobs));
    return out;
}

}  // namespace verlinde
