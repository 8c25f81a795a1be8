#include "verlinde/engine.hpp"

#include <algorithm>
#include <atomic>
#include <future>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>

namespace verlinde {

namespace {

std::atomic<long long> g_stab_checks{0}, g_stab_retries{0}, g_int_checks{0};

}  // namespace

EngineCounters engine_counters() {
    EngineCounters c;
    c.stability_checks = g_stab_checks.load();
    c.stability_retries = g_stab_retries.load();
    c.integrality_checks = g_int_checks.load();
    return c;
}

void reset_engine_counters() {
    g_stab_checks = 0;
    g_stab_retries = 0;
    g_int_checks = 0;
}

void count_integrality_check() { ++g_int_checks; }

BasisExpander::BasisExpander(const OrderedBasis& B) : B_(B) {
    const int n = B.r - 1;
    // Gauss-Jordan on [chart(beta^[1]) ... chart(beta^[n]) | Id].
    std::vector<std::vector<Rat>> a(n, std::vector<Rat>(2 * n, Rat(0)));
    for (int j = 0; j < n; ++j) {
        CoVector cv = B.roots[j].covector(B.r);
        for (int i = 0; i < n; ++i) a[i][j] = cv.c[i];
    }
    for (int i = 0; i < n; ++i) a[i][n + i] = 1;
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int row = col; row < n; ++row)
            if (a[row][col] != 0) {
                piv = row;
                break;
            }
        if (piv < 0) throw std::invalid_argument("BasisExpander: singular basis");
        std::swap(a[piv], a[col]);
        Rat p = a[col][col];
        for (int t = 0; t < 2 * n; ++t) a[col][t] /= p;
        for (int row = 0; row < n; ++row) {
            if (row == col || a[row][col] == 0) continue;
            Rat f = a[row][col];
            for (int t = 0; t < 2 * n; ++t) a[row][t] -= f * a[col][t];
        }
    }
    inv_.assign(n, std::vector<Rat>(n, Rat(0)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) inv_[i][j] = a[i][n + j];
}

std::vector<Rat> BasisExpander::expand(const CoVector& a) const {
    const int n = rank() - 1;
    if (a.rank() != rank()) throw std::invalid_argument("BasisExpander: rank mismatch");
    std::vector<Rat> t(n, Rat(0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (inv_[i][j] != 0 && a.c[j] != 0) t[i] += inv_[i][j] * a.c[j];
    return t;
}

LinearFormY BasisExpander::form(const CoVector& a, const Rat& scale) const {
    LinearFormY f;
    f.coeff = expand(a);
    for (Rat& c : f.coeff) c *= scale;
    return f;
}

namespace {

std::mutex g_ctx_mutex;
std::map<std::string, std::shared_ptr<const SeriesContext>> g_ctx_registry;

}  // namespace

std::string windows_key(const Windows& w, int m) {
    std::ostringstream os;
    os << "m" << m;
    for (int j = 0; j < w.nvars(); ++j) os << ":" << w.lo[j] << "," << w.hi[j];
    return os.str();
}

std::string basis_key(const OrderedBasis& B) {
    std::ostringstream os;
    os << "r" << B.r;
    for (const Root& a : B.roots) os << "_" << a.i << "." << a.j;
    return os.str();
}

std::shared_ptr<const SeriesContext> make_context(const Windows& win, int m) {
    std::lock_guard<std::mutex> lock(g_ctx_mutex);
    std::string key = windows_key(win, m);
    auto it = g_ctx_registry.find(key);
    if (it != g_ctx_registry.end()) return it->second;
    auto ctx = std::make_shared<SeriesContext>();
    ctx->win = win;
    ctx->m = m;
    return g_ctx_registry.emplace(key, std::move(ctx)).first->second;
}

Series exp_series(const SeriesContext* ctx, const LinearFormY& f, const Series* jet_multiplier) {
    Series e = Series::exp_linear(ctx, f);
    if (jet_multiplier) e = e.mul_exp_nilpotent(*jet_multiplier);
    return e;
}

Series weyl_factor(const Root& alpha, const BasisExpander& ex, long power, const Rat& scale,
                   const SeriesContext* ctx) {
    if (power == 0) return Series::one(ctx);
    LinearFormY half = ex.form(alpha.covector(ex.rank()), scale / 2);
    if (half.leading() < 0) throw std::domain_error("weyl_factor: degenerate root form");
    LinearFormY mhalf = half;
    for (Rat& c : mhalf.coeff) c = -c;
    Series s = Series::exp_linear(ctx, half);
    s.sub(Series::exp_linear(ctx, mhalf));
    if (power > 0) return s.pow(power);
    return s.pow(-power).inverse();
}

Series weyl_product(const BasisExpander& ex, long power, const Rat& scale,
                    const SeriesContext* ctx) {
    Series acc = Series::one(ctx);
    const int r = ex.rank();
    for (int i = 1; i <= r; ++i)
        for (int j = i + 1; j <= r; ++j) acc = acc.mul(weyl_factor(Root(i, j), ex, power, scale, ctx));
    return acc;
}

Series character_series(const CharacterSum& phi, const BasisExpander& ex, const Rat& scale,
                        const SeriesContext* ctx, int mask) {
    Series acc(ctx);
    for (const auto& [coeff, mu] : phi.terms) {
        if (coeff == 0) continue;
        Series e = Series::exp_linear(ctx, ex.form(mu, scale));
        e.scale(coeff);
        if (mask) {
            Jet tag(ctx->m);
            tag.comp[mask] = 1;
            e.scale_jet(tag);
        }
        acc.add(e);
    }
    return acc;
}

Series q_factor(int j, const Int& k_hat, const std::vector<CharacterSum>& phis,
                const BasisExpander& ex, const SeriesContext* ctx) {
    if (k_hat < 1) throw std::invalid_argument("q_factor: k_hat must be positive");
    LinearFormY f;
    f.coeff.assign(ctx->nvars(), Rat(0));
    f.coeff[j] = Rat(k_hat);
    Series e = Series::exp_linear(ctx, f);
    if (!phis.empty()) {
        Series nil(ctx);
        for (int s = 0; s < static_cast<int>(phis.size()); ++s) {
            Series p = character_series(phis[s], ex, Rat(1), ctx, 1 << s);
            p.negate();
            nil.add(p);
        }
        e = e.mul_exp_nilpotent(nil);
    }
    Series F = Series::constant(ctx, Rat(1));
    F.sub(e);
    return F.inverse();
}

Series jacobian_measure(const BasisExpander& ex, const Int& k_hat,
                        const std::vector<CharacterSum>& phis, const Rat& scale,
                        const SeriesContext* ctx) {
    const int n = ex.rank() - 1;
    const int m = static_cast<int>(phis.size());
    // N[i][j] = sum_s delta_s * d(phi^(s)_{beta-check[i]})/dy_j, all nilpotent.
    std::vector<std::vector<Series>> N(n, std::vector<Series>(n, Series(ctx)));
    for (int s = 0; s < m; ++s) {
        for (const auto& [coeff, mu] : phis[s].terms) {
            if (coeff == 0) continue;
            std::vector<Rat> t = ex.expand(mu);
            Series e = Series::exp_linear(ctx, ex.form(mu, scale));
            Jet tag(ctx->m);
            tag.comp[1 << s] = 1;
            e.scale_jet(tag);
            for (int i = 0; i < n; ++i) {
                // <mu, dual(beta^[i])> under the identity-coordinates dual.
                CoVector bi = ex.basis().roots[i].covector(ex.rank());
                Rat pair_i(0);
                for (int cidx = 0; cidx < ex.rank(); ++cidx) pair_i += mu.c[cidx] * bi.c[cidx];
                if (pair_i == 0) continue;
                for (int j = 0; j < n; ++j) {
                    Rat cf = coeff * pair_i * scale * t[j];
                    if (cf == 0) continue;
                    Series term = e;
                    term.scale(cf);
                    N[i][j].add(term);
                }
            }
        }
    }
    // det(k_hat Id - N) = sum over principal minors S with |S| <= m.
    Series det(ctx);
    Rat khd(k_hat);
    for (int S = 0; S < (1 << n); ++S) {
        int sz = __builtin_popcount(static_cast<unsigned>(S));
        if (sz > m && sz > 0) continue;
        Rat kpow = rat_pow(khd, n - sz);
        if (sz == 0) {
            det.add_constant(kpow);
            continue;
        }
        std::vector<int> idx;
        for (int b = 0; b < n; ++b)
            if (S & (1 << b)) idx.push_back(b);
        std::vector<int> perm(idx.size());
        std::iota(perm.begin(), perm.end(), 0);
        do {
            int inv = 0;
            for (std::size_t a = 0; a < perm.size(); ++a)
                for (std::size_t b = a + 1; b < perm.size(); ++b)
                    if (perm[a] > perm[b]) ++inv;
            Series prod = N[idx[0]][idx[perm[0]]];
            for (std::size_t a = 1; a < idx.size(); ++a) {
                if (prod.is_zero()) break;
                prod = prod.mul(N[idx[a]][idx[perm[a]]]);
            }
            // (-1)^{|S|} from det(-N_S), (-1)^{inv} from the permutation sign.
            Rat sgn = ((sz + inv) % 2 == 0) ? kpow : -kpow;
            prod.scale(sgn);
            det.add(prod);
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
    return det;
}

Jet iterated_residue(const Series& f) { return f.residue(); }

Windows window_plan(int g, int r, const Int& k, int m, const OrderedBasis& B) {
    (void)k;
    BasisExpander ex(B);
    const int n = r - 1;
    std::vector<long> R(n, 0);
    for (int i = 1; i <= r; ++i)
        for (int j = i + 1; j <= r; ++j) {
            LinearFormY f = ex.form(Root(i, j).covector(r), Rat(1));
            int lead = f.leading();
            if (lead < 0) throw std::logic_error("window_plan: degenerate root");
            ++R[lead];
        }
    long W = 4;
    for (int j = 0; j < n; ++j) W += (2 * g - 1) * R[j] + 1 + m;
    Windows w;
    w.lo.assign(n, -W);
    w.hi.assign(n, W);
    return w;
}

Jet stable_residue(const Windows& plan, int m,
                   const std::function<Jet(const SeriesContext*)>& eval) {
    Windows w = plan;
    for (int round = 0; round < 6; ++round) {
        auto c1 = make_context(w, m);
        auto c2 = make_context(w.expanded(4), m);
        bool blown = false;
        Jet a(m), b(m);
        try {
            a = eval(c1.get());
            b = eval(c2.get());
        } catch (const InsufficientWindow&) {
            blown = true;
        }
        if (!blown) {
            ++g_stab_checks;
            if (a == b) return a;
        }
        ++g_stab_retries;
        w = w.expanded(8);
    }
    throw WindowInstability("residue did not stabilize under window enlargement");
}

namespace {

std::mutex g_series_mutex;
std::map<std::string, std::shared_future<std::shared_ptr<const Series>>> g_series_cache;

}  // namespace

std::shared_ptr<const Series> cached_series(const std::string& key,
                                            const std::shared_ptr<const SeriesContext>& ctx,
                                            const std::function<Series(const SeriesContext*)>& build) {
    std::shared_future<std::shared_ptr<const Series>> fut;
    std::promise<std::shared_ptr<const Series>> prom;
    bool builder = false;
    {
        std::lock_guard<std::mutex> lock(g_series_mutex);
        auto it = g_series_cache.find(key);
        if (it == g_series_cache.end()) {
            fut = prom.get_future().share();
            g_series_cache.emplace(key, fut);
            builder = true;
        } else {
            fut = it->second;
        }
    }
    if (builder) {
        try {
            prom.set_value(std::make_shared<const Series>(build(ctx.get())));
        } catch (...) {
            prom.set_exception(std::current_exception());
        }
    }
    return fut.get();
}

void clear_series_cache() {
    std::lock_guard<std::mutex> lock(g_series_mutex);
    g_series_cache.clear();
}

}  // namespace verlinde
