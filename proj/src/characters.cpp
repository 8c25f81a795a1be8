#include "verlinde/characters.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "verlinde/version.hpp"

namespace verlinde {

bool is_dominant(const HighestWeight& nu) {
    if (nu.empty()) return false;
    for (std::size_t i = 0; i + 1 < nu.size(); ++i)
        if (nu[i] < nu[i + 1]) return false;
    return true;
}

long weight_total(const HighestWeight& nu) {
    long s = 0;
    for (long v : nu) s += v;
    return s;
}

long WeightTable::dimension() const {
    long d = 0;
    for (const auto& [mu, m] : mult) d += m;
    return d;
}

namespace {

// Top-down Gelfand-Tsetlin enumeration; weight component of the row of
// length L is sum(length-L row) - sum(length-(L-1) row).
void gt_fill(const std::vector<long>& upper, std::vector<long>& mu,
             std::map<std::vector<long>, long>& acc) {
    const int len = static_cast<int>(upper.size()) - 1;
    if (len == 0) {
        mu[0] = upper[0];
        ++acc[mu];
        return;
    }
    std::vector<long> row(len);
    std::function<void(int)> rec = [&](int pos) {
        if (pos == len) {
            long s_up = 0, s_row = 0;
            for (long v : upper) s_up += v;
            for (long v : row) s_row += v;
            mu[len] = s_up - s_row;
            gt_fill(row, mu, acc);
            return;
        }
        for (long v = upper[pos + 1]; v <= upper[pos]; ++v) {
            row[pos] = v;
            rec(pos + 1);
        }
    };
    rec(0);
}

}  // namespace

WeightTable weight_table(const HighestWeight& nu) {
    if (!is_dominant(nu)) throw std::invalid_argument("weight_table: non-dominant highest weight");
    const int r = static_cast<int>(nu.size());
    WeightTable out;
    out.r = r;
    out.nu = nu;
    std::vector<long> mu(r, 0);
    gt_fill(nu, mu, out.mult);
    return out;
}

namespace {

void enumerate_dominant_candidates(const HighestWeight& nu, std::vector<long>& cur, int pos,
                                   std::vector<std::vector<long>>& out) {
    const int r = static_cast<int>(nu.size());
    if (pos == r) {
        long s = 0;
        for (int i = 0; i < r; ++i) s += cur[i];
        if (s == weight_total(nu)) out.push_back(cur);
        return;
    }
    long hi = pos == 0 ? nu[0] : std::min(cur[pos - 1], nu[0]);
    for (long v = nu[r - 1]; v <= hi; ++v) {
        cur[pos] = v;
        long psum_nu = 0, psum_mu = 0;
        for (int i = 0; i <= pos; ++i) {
            psum_nu += nu[i];
            psum_mu += cur[i];
        }
        if (psum_mu > psum_nu) continue;  // dominance prune
        enumerate_dominant_candidates(nu, cur, pos + 1, out);
    }
}

long dot(const std::vector<long>& a, const std::vector<long>& b) {
    long s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

WeightTable freudenthal_weight_table(const HighestWeight& nu) {
    if (!is_dominant(nu)) throw std::invalid_argument("freudenthal: non-dominant highest weight");
    const int r = static_cast<int>(nu.size());
    WeightTable out;
    out.r = r;
    out.nu = nu;
    if (r == 1) {
        out.mult[{nu[0]}] = 1;
        return out;
    }
    std::vector<std::vector<long>> cands;
    std::vector<long> cur(r, 0);
    enumerate_dominant_candidates(nu, cur, 0, cands);
    auto height = [&](const std::vector<long>& mu) {
        long h = 0, p = 0;
        for (int i = 0; i < r - 1; ++i) {
            p += nu[i] - mu[i];
            h += p;
        }
        return h;
    };
    std::stable_sort(cands.begin(), cands.end(),
                     [&](const auto& a, const auto& b) { return height(a) < height(b); });
    std::vector<long> rho_gl(r);
    for (int i = 0; i < r; ++i) rho_gl[i] = r - 1 - i;
    std::map<std::vector<long>, long> dom;
    auto lookup = [&](std::vector<long> w) {
        std::sort(w.begin(), w.end(), std::greater<long>());
        auto it = dom.find(w);
        return it == dom.end() ? 0L : it->second;
    };
    const long tmax = nu[0] - nu[r - 1];
    std::vector<long> nu_rho(r), mu_rho(r);
    for (int i = 0; i < r; ++i) nu_rho[i] = nu[i] + rho_gl[i];
    const std::vector<long> top(nu.begin(), nu.end());
    for (const auto& mu : cands) {
        if (mu == top) {
            dom[mu] = 1;
            continue;
        }
        for (int i = 0; i < r; ++i) mu_rho[i] = mu[i] + rho_gl[i];
        long denom = dot(nu_rho, nu_rho) - dot(mu_rho, mu_rho);
        long num = 0;
        for (int i = 0; i < r; ++i)
            for (int j = i + 1; j < r; ++j)
                for (long t = 1; t <= tmax; ++t) {
                    std::vector<long> w(mu);
                    w[i] += t;
                    w[j] -= t;
                    long m = lookup(w);
                    if (m) num += m * (mu[i] - mu[j] + 2 * t);
                }
        if (denom <= 0) throw std::logic_error("freudenthal: nonpositive denominator");
        if ((2 * num) % denom != 0) throw std::logic_error("freudenthal: non-integral multiplicity");
        long m = 2 * num / denom;
        if (m) dom[mu] = m;
    }
    for (const auto& [mu, m] : dom) {
        std::vector<long> p(mu);
        std::sort(p.begin(), p.end());
        do out.mult[p] = m;
        while (std::next_permutation(p.begin(), p.end()));
    }
    return out;
}

Int weyl_dim(const HighestWeight& nu) {
    const int r = static_cast<int>(nu.size());
    Rat d(1);
    for (int i = 0; i < r; ++i)
        for (int j = i + 1; j < r; ++j) {
            Rat f(nu[i] - nu[j] + j - i, j - i);
            f.canonicalize();
            d *= f;
        }
    if (!is_integer(d)) throw std::logic_error("weyl_dim: non-integral value");
    return d.get_num();
}

Rat CharacterSum::value_at_zero() const {
    Rat s(0);
    for (const auto& [c, e] : terms) s += c;
    return s;
}

CharacterSum character(const HighestWeight& nu) {
    const WeightTable& wt = cached_weight_table(nu);
    const int r = wt.r;
    Rat central(weight_total(nu), r);
    central.canonicalize();
    CharacterSum out;
    out.r = r;
    for (const auto& [mu, m] : wt.mult) {
        Coords e(r);
        for (int i = 0; i < r; ++i) e[i] = Rat(mu[i]) - central;
        out.terms.push_back({Rat(m), CoVector(std::move(e))});
    }
    return out;
}

CharacterSum directional_derivative(const CharacterSum& phi, const Vector& v) {
    CharacterSum out;
    out.r = phi.r;
    for (const auto& [c, e] : phi.terms) {
        Rat f = c * pairing(e, v);
        if (f != 0) out.terms.push_back({f, e});
    }
    return out;
}

CharacterSum hessian_trace(const CharacterSum& phi) {
    CharacterSum out;
    out.r = phi.r;
    for (const auto& [c, e] : phi.terms) {
        Rat f = c * killing_norm2(e);
        if (f != 0) out.terms.push_back({f, e});
    }
    return out;
}

CharacterSum adams_twist(const CharacterSum& phi, long n) {
    if (n < 1) throw std::invalid_argument("adams_twist: n must be positive");
    CharacterSum out;
    out.r = phi.r;
    for (const auto& [c, e] : phi.terms) out.terms.push_back({c, cov_scale(Rat(n), e)});
    return out;
}

std::vector<BranchTerm> branch(const HighestWeight& nu, const WallSpec& wall) {
    const int r = static_cast<int>(nu.size());
    std::vector<int> prime = wall.pi_prime, second;
    std::vector<bool> in_prime(r + 1, false);
    for (int v : prime) in_prime[v] = true;
    for (int v = 1; v <= r; ++v)
        if (!in_prime[v]) second.push_back(v);
    const WeightTable& wt = cached_weight_table(nu);
    using Key = std::pair<std::vector<long>, std::vector<long>>;
    std::map<Key, long> joint;
    for (const auto& [mu, m] : wt.mult) {
        std::vector<long> a, b;
        for (int v : prime) a.push_back(mu[v - 1]);
        for (int v : second) b.push_back(mu[v - 1]);
        joint[{a, b}] += m;
    }
    auto dominant = [](const std::vector<long>& w) {
        for (std::size_t i = 0; i + 1 < w.size(); ++i)
            if (w[i] < w[i + 1]) return false;
        return true;
    };
    std::vector<BranchTerm> out;
    Rat central(weight_total(nu), r);
    central.canonicalize();
    while (!joint.empty()) {
        // Lex-max dominant pair is a highest pair of a remaining summand.
        const Key* best = nullptr;
        for (const auto& [key, m] : joint)
            if (m != 0 && dominant(key.first) && dominant(key.second))
                if (!best || key > *best) best = &key;
        if (!best) throw std::logic_error("branch: no dominant pair in a nonempty table");
        Key top = *best;
        long c = joint[top];
        if (c <= 0) throw std::logic_error("branch: nonpositive multiplicity (peeling bug)");
        const WeightTable& ta = cached_weight_table(HighestWeight(top.first.begin(), top.first.end()));
        const WeightTable& tb = cached_weight_table(HighestWeight(top.second.begin(), top.second.end()));
        for (const auto& [ma, ca] : ta.mult)
            for (const auto& [mb, cb] : tb.mult) {
                auto it = joint.find({ma, mb});
                if (it == joint.end()) throw std::logic_error("branch: missing joint weight");
                it->second -= c * ca * cb;
                if (it->second < 0) throw std::logic_error("branch: negative multiplicity (peeling bug)");
                if (it->second == 0) joint.erase(it);
            }
        BranchTerm term;
        term.nu_prime = HighestWeight(top.first.begin(), top.first.end());
        term.nu_second = HighestWeight(top.second.begin(), top.second.end());
        term.multiplicity = c;
        Rat s(0);
        for (long v : top.first) s += Rat(v) - central;
        term.s = s;
        out.push_back(std::move(term));
    }
    return out;
}

std::vector<HeckeShift> hecke_shift_coefficients(const HighestWeight& nu, HeckeSide side) {
    const int r = static_cast<int>(nu.size());
    const long total = weight_total(nu);
    const WeightTable& wt = cached_weight_table(nu);
    std::vector<HeckeShift> out;
    for (const auto& [mu, m] : wt.mult) {
        long w = side == HeckeSide::minus ? mu[0] : mu[r - 1];
        if (w == 0 || m == 0) continue;
        std::vector<Int> shift(r);
        for (int i = 0; i < r; ++i) shift[i] = mu[i];
        shift[r - 1] -= total;
        out.push_back(HeckeShift{LatticePoint(std::move(shift)), Int(m) * w});
    }
    return out;
}

namespace {

std::mutex g_cache_mutex;
std::map<HighestWeight, WeightTable> g_cache;
std::string g_cache_dir;

std::string table_filename(const HighestWeight& nu) {
    std::ostringstream os;
    os << "wt_r" << nu.size();
    for (long v : nu) os << "_" << v;
    os << ".json";
    return os.str();
}

bool load_disk_table(const std::string& path, const HighestWeight& nu, WeightTable& out) {
    std::ifstream in(path);
    if (!in) return false;
    nlohmann::json j;
    try {
        in >> j;
        if (j.at("version").get<std::string>() != kVersion) return false;
        if (j.at("nu").get<std::vector<long>>() != nu) return false;
        out.r = static_cast<int>(nu.size());
        out.nu = nu;
        for (const auto& entry : j.at("entries")) {
            std::vector<long> mu = entry.at(0).get<std::vector<long>>();
            long m = entry.at(1).get<long>();
            if (mu.size() != nu.size() || m <= 0) return false;
            out.mult[mu] = m;
        }
    } catch (const nlohmann::json::exception&) {
        return false;
    }
    return !out.mult.empty();
}

void store_disk_table(const std::string& path, const WeightTable& wt) {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& [mu, m] : wt.mult) entries.push_back({mu, m});
    nlohmann::json j{{"version", kVersion}, {"nu", wt.nu}, {"entries", entries}};
    std::ofstream outf(path);
    if (outf) outf << j.dump();
}

}  // namespace

const WeightTable& cached_weight_table(const HighestWeight& nu) {
    std::lock_guard<std::mutex> lock(g_cache_mutex);
    auto it = g_cache.find(nu);
    if (it != g_cache.end()) return it->second;
    if (!g_cache_dir.empty()) {
        WeightTable disk;
        std::string path = g_cache_dir + "/" + table_filename(nu);
        if (load_disk_table(path, nu, disk) && disk.dimension() == weyl_dim(nu))
            return g_cache.emplace(nu, std::move(disk)).first->second;
    }
    WeightTable wt = weight_table(nu);
    if (!g_cache_dir.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(g_cache_dir, ec);
        if (!ec) store_disk_table(g_cache_dir + "/" + table_filename(nu), wt);
    }
    return g_cache.emplace(nu, std::move(wt)).first->second;
}

void set_weight_table_cache_dir(const std::string& dir) {
    std::lock_guard<std::mutex> lock(g_cache_mutex);
    g_cache_dir = dir;
}

}  // namespace verlinde
