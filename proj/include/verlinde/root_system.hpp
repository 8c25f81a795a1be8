#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "verlinde/rational.hpp"

namespace verlinde {

// Elements of V* = {a in R^r : sum a_i = 0}; houses weights, parabolic
// weights c, rho, roots viewed as functionals.
struct CoVector {
    Coords c;

    CoVector() = default;
    explicit CoVector(Coords coords) : c(std::move(coords)) {}
    int rank() const { return static_cast<int>(c.size()); }
};

// Canonical sum-zero representatives of V = R^r / R(1,...,1).
struct Vector {
    Coords c;

    Vector() = default;
    explicit Vector(Coords coords) : c(std::move(coords)) {}
    int rank() const { return static_cast<int>(c.size()); }
};

// Sum-zero integer vectors (the lattice of weights lambda and of
// translations gamma).
struct LatticePoint {
    std::vector<Int> c;

    LatticePoint() = default;
    explicit LatticePoint(std::vector<Int> coords) : c(std::move(coords)) {}
    int rank() const { return static_cast<int>(c.size()); }
};

// alpha^{ij} = x_i - x_j, stored as the ordered pair (i, j), 1-based.
struct Root {
    int i = 0;
    int j = 0;

    Root() = default;
    Root(int ii, int jj) : i(ii), j(jj) {}
    CoVector covector(int r) const;
    bool operator==(const Root& o) const { return i == o.i && j == o.j; }
    bool operator<(const Root& o) const { return i != o.i ? i < o.i : j < o.j; }
};

// Ordered sequence of r-1 roots forming a basis of V*; tree-derived bases
// have unimodular coordinate matrices.
struct OrderedBasis {
    int r = 0;
    std::vector<Root> roots;

    OrderedBasis() = default;
    OrderedBasis(int rank, std::vector<Root> rs) : r(rank), roots(std::move(rs)) {}
    bool operator==(const OrderedBasis& o) const { return r == o.r && roots == o.roots; }
    bool operator<(const OrderedBasis& o) const;
};

// Wall S_{Pi,l}: sum of c_i over Pi' equals l; Pi' excludes index r.
struct WallSpec {
    int r = 0;
    std::vector<int> pi_prime;  // sorted, subset of {1..r-1}, nonempty
    Int level = 0;

    bool operator==(const WallSpec& o) const {
        return r == o.r && pi_prime == o.pi_prime && level == o.level;
    }
};

bool is_sum_zero(const Coords& c);
Coords project_sum_zero(const Coords& c);

CoVector covector_of(const LatticePoint& p);
Vector killing_dual(const CoVector& a);
Rat killing_norm2(const CoVector& a);
// <a, x> = sum a_i x_i; well defined on V because a is sum-zero.
Rat pairing(const CoVector& a, const Vector& x);
Rat killing_form(const Vector& v, const Vector& w);

CoVector cov_add(const CoVector& a, const CoVector& b);
CoVector cov_sub(const CoVector& a, const CoVector& b);
CoVector cov_scale(const Rat& s, const CoVector& a);

CoVector rho(int r);

// Coefficients t with a = sum_j t_j beta^[j]; exact Gaussian elimination.
std::vector<Rat> expand_in_basis(const CoVector& a, const OrderedBasis& B);

struct Bracket {
    CoVector integral;    // [a]_B, integer coordinates
    CoVector fractional;  // {a}_B, basis coefficients in [0,1)
};
Bracket bracket(const CoVector& a, const OrderedBasis& B);

// True iff no proper nonempty coordinate subset sums to an integer.
bool is_regular(const CoVector& c);

struct ChamberRelation {
    bool same_chamber = true;
    std::vector<WallSpec> walls;  // walls strictly separating the two points
};
ChamberRelation classify_chamber(const CoVector& c1, const CoVector& c2);

// sigma.lambda = sigma(lambda+rho+v_det) - rho - v_det (dot action);
// sigma maps coordinate positions, result asserted integral.
LatticePoint affine_weyl_act(const std::vector<int>& sigma, const LatticePoint& lambda,
                             const CoVector& v_det);
// gamma.lambda = lambda + (k+r) gamma.
LatticePoint affine_weyl_act(const LatticePoint& gamma, long k, const LatticePoint& lambda);

struct ThetaPoints {
    CoVector theta1_k;    // theta_1[k]  = (k+r)theta_1 - rho
    CoVector theta_m1_k;  // theta_-1[k] = (k+r)theta_-1 - rho
    CoVector theta1;      // (1/r)(1,..,1) - x_r
    CoVector theta_m1;    // -(1/r)(1,..,1) + x_1
};
ThetaPoints theta_points(long k, int r);

}  // namespace verlinde
