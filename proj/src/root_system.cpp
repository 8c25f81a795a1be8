#include "verlinde/root_system.hpp"

#include <algorithm>
#include <stdexcept>

namespace verlinde {

CoVector Root::covector(int r) const {
    if (i < 1 || j < 1 || i > r || j > r || i == j) throw std::invalid_argument("Root: bad indices");
    Coords c(r, Rat(0));
    c[i - 1] = 1;
    c[j - 1] = -1;
    return CoVector(std::move(c));
}

bool OrderedBasis::operator<(const OrderedBasis& o) const {
    if (r != o.r) return r < o.r;
    return roots < o.roots;
}

bool is_sum_zero(const Coords& c) {
    Rat s(0);
    for (const Rat& x : c) s += x;
    return s == 0;
}

Coords project_sum_zero(const Coords& c) {
    Rat s(0);
    for (const Rat& x : c) s += x;
    Rat mean = s / Rat(static_cast<long>(c.size()));
    Coords out(c);
    for (Rat& x : out) x -= mean;
    return out;
}

CoVector covector_of(const LatticePoint& p) {
    Coords c(p.c.size());
    for (std::size_t i = 0; i < p.c.size(); ++i) c[i] = Rat(p.c[i]);
    return CoVector(std::move(c));
}

Vector killing_dual(const CoVector& a) { return Vector(a.c); }

Rat killing_norm2(const CoVector& a) {
    Rat s(0);
    for (const Rat& x : a.c) s += x * x;
    return s;
}

Rat pairing(const CoVector& a, const Vector& x) {
    if (a.c.size() != x.c.size()) throw std::invalid_argument("pairing: rank mismatch");
    Rat s(0);
    for (std::size_t i = 0; i < a.c.size(); ++i) s += a.c[i] * x.c[i];
    return s;
}

Rat killing_form(const Vector& v, const Vector& w) {
    Rat s(0);
    for (std::size_t i = 0; i < v.c.size(); ++i) s += v.c[i] * w.c[i];
    return s;
}

CoVector cov_add(const CoVector& a, const CoVector& b) {
    Coords c(a.c);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] += b.c[i];
    return CoVector(std::move(c));
}

CoVector cov_sub(const CoVector& a, const CoVector& b) {
    Coords c(a.c);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] -= b.c[i];
    return CoVector(std::move(c));
}

CoVector cov_scale(const Rat& s, const CoVector& a) {
    Coords c(a.c);
    for (Rat& x : c) x *= s;
    return CoVector(std::move(c));
}

CoVector rho(int r) {
    if (r < 2) throw std::invalid_argument("rho: rank must be at least 2");
    Coords c(r);
    for (int i = 0; i < r; ++i) {
        c[i] = Rat(r - 1 - 2 * i, 2);
        c[i].canonicalize();
    }
    return CoVector(std::move(c));
}

std::vector<Rat> expand_in_basis(const CoVector& a, const OrderedBasis& B) {
    const int r = B.r;
    const int n = r - 1;
    if (a.rank() != r || static_cast<int>(B.roots.size()) != n)
        throw std::invalid_argument("expand_in_basis: rank mismatch");
    // Chart: coordinates 1..r-1 determine a sum-zero covector.
    std::vector<std::vector<Rat>> m(n, std::vector<Rat>(n + 1, Rat(0)));
    for (int col = 0; col < n; ++col) {
        CoVector beta = B.roots[col].covector(r);
        for (int row = 0; row < n; ++row) m[row][col] = beta.c[row];
    }
    for (int row = 0; row < n; ++row) m[row][n] = a.c[row];
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int row = col; row < n; ++row)
            if (m[row][col] != 0) {
                piv = row;
                break;
            }
        if (piv < 0) throw std::domain_error("expand_in_basis: singular basis");
        std::swap(m[col], m[piv]);
        Rat inv = Rat(1) / m[col][col];
        for (int c2 = col; c2 <= n; ++c2) m[col][c2] *= inv;
        for (int row = 0; row < n; ++row) {
            if (row == col || m[row][col] == 0) continue;
            Rat f = m[row][col];
            for (int c2 = col; c2 <= n; ++c2) m[row][c2] -= f * m[col][c2];
        }
    }
    std::vector<Rat> t(n);
    for (int row = 0; row < n; ++row) t[row] = m[row][n];
    return t;
}

Bracket bracket(const CoVector& a, const OrderedBasis& B) {
    std::vector<Rat> t = expand_in_basis(a, B);
    Coords ip(B.r, Rat(0)), fp(B.r, Rat(0));
    for (std::size_t j = 0; j < t.size(); ++j) {
        CoVector beta = B.roots[j].covector(B.r);
        Rat fl(rat_floor(t[j]));
        Rat fr = t[j] - fl;
        for (int i = 0; i < B.r; ++i) {
            ip[i] += fl * beta.c[i];
            fp[i] += fr * beta.c[i];
        }
    }
    return Bracket{CoVector(std::move(ip)), CoVector(std::move(fp))};
}

bool is_regular(const CoVector& c) {
    const int r = c.rank();
    const unsigned full = (1u << r) - 1;
    for (unsigned mask = 1; mask < full; ++mask) {
        Rat s(0);
        for (int i = 0; i < r; ++i)
            if (mask & (1u << i)) s += c.c[i];
        if (is_integer(s)) return false;
    }
    return true;
}

ChamberRelation classify_chamber(const CoVector& c1, const CoVector& c2) {
    if (c1.rank() != c2.rank()) throw std::invalid_argument("classify_chamber: rank mismatch");
    if (!is_regular(c1) || !is_regular(c2)) throw std::domain_error("classify_chamber: irregular weight");
    const int r = c1.rank();
    ChamberRelation rel;
    // Walls indexed by nonempty Pi' subset of {1..r-1} (complement contains r).
    for (unsigned mask = 1; mask < (1u << (r - 1)); ++mask) {
        Rat s1(0), s2(0);
        std::vector<int> pi;
        for (int i = 0; i < r - 1; ++i)
            if (mask & (1u << i)) {
                s1 += c1.c[i];
                s2 += c2.c[i];
                pi.push_back(i + 1);
            }
        Int lo = rat_floor(std::min(s1, s2)) + 1;
        Int hi = rat_floor(std::max(s1, s2));
        for (Int l = lo; l <= hi; ++l) rel.walls.push_back(WallSpec{r, pi, l});
    }
    rel.same_chamber = rel.walls.empty();
    return rel;
}

LatticePoint affine_weyl_act(const std::vector<int>& sigma, const LatticePoint& lambda,
                             const CoVector& v_det) {
    const int r = lambda.rank();
    if (static_cast<int>(sigma.size()) != r) throw std::invalid_argument("affine_weyl_act: bad permutation");
    CoVector rv = rho(r);
    Coords shifted(r);
    for (int i = 0; i < r; ++i) shifted[i] = Rat(lambda.c[i]) + rv.c[i] + v_det.c[i];
    // (sigma v)_{sigma(i)} = v_i: position i moves to sigma[i] (1-based).
    Coords permuted(r);
    for (int i = 0; i < r; ++i) permuted[sigma[i] - 1] = shifted[i];
    std::vector<Int> out(r);
    for (int i = 0; i < r; ++i) {
        Rat v = permuted[i] - rv.c[i] - v_det.c[i];
        if (!is_integer(v)) throw std::domain_error("affine_weyl_act: non-integral result (convention error)");
        out[i] = v.get_num();
    }
    return LatticePoint(std::move(out));
}

LatticePoint affine_weyl_act(const LatticePoint& gamma, long k, const LatticePoint& lambda) {
    const int r = lambda.rank();
    std::vector<Int> out(r);
    for (int i = 0; i < r; ++i) out[i] = lambda.c[i] + Int(k + r) * gamma.c[i];
    return LatticePoint(std::move(out));
}

ThetaPoints theta_points(long k, int r) {
    if (r < 2) throw std::invalid_argument("theta_points: rank must be at least 2");
    Coords t1(r, Rat(1, r)), tm1(r, Rat(-1, r));
    t1[r - 1] -= 1;  // -x_r
    tm1[0] += 1;     // +x_1
    CoVector theta1(t1), theta_m1(tm1);
    CoVector rv = rho(r);
    Rat khat(k + r);
    ThetaPoints out;
    out.theta1 = theta1;
    out.theta_m1 = theta_m1;
    out.theta1_k = cov_sub(cov_scale(khat, theta1), rv);
    out.theta_m1_k = cov_sub(cov_scale(khat, theta_m1), rv);
    return out;
}

}  // namespace verlinde
