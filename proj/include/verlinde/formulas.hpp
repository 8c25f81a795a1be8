#pragma once

#include <utility>
#include <vector>

#include "verlinde/characters.hpp"
#include "verlinde/root_system.hpp"
#include "verlinde/trees.hpp"

namespace verlinde {

// Side of the wall a chamber sits on; "greater" is the side whose wall sum
// exceeds its floor threshold, anchored at the alcove vertex theta_1.
enum class Chamber { greater, less };

// One Euler-characteristic evaluation request. lambda is a sum-zero
// integral twist, nu a dominant bundle weight (all zeros = line case),
// nus the weights of a multi-bundle product, c a regular parabolic weight
// in the standard alcove, basis an ordered diagonal family (empty selects
// the canonical one).
struct EulerQuery {
    int g = 2;
    int r = 2;
    long k = 1;
    LatticePoint lambda;
    HighestWeight nu;
    std::vector<HighestWeight> nus;
    CoVector c;
    std::vector<OrderedTree> basis;

    Int k_hat() const { return Int(k) + r; }
    std::vector<OrderedTree> diagonal() const;
    void validate_common() const;
    void validate_line() const;    // common + alcove-interior regular c
    void validate_vector() const;  // line + dominant nu of rank r
};

struct ChiResult {
    Int value;
    Rat raw;         // exact total before the integrality cast
    Rat delta_free;  // value-graded total (equals raw for the line case)
    std::vector<std::pair<OrderedTree, Rat>> per_basis;
};

// (-1)^{r(r-1)/2 (g-1)} r^g, and the level companion carrying the extra
// (k+r)^{(r-1)(g-1)}.
Rat n_r_constant(int g, int r);
Rat n_rk_constant(int g, int r, long k);

CoVector weight_hat(const LatticePoint& lambda);  // lambda + rho
CoVector det_twist(int r, long nu_total);         // (|nu|/r)(1,..,1,1-r)

// Euler characteristic of the determinant-type line bundle L(k; lambda).
ChiResult chi_line(const EulerQuery& q);
// Euler characteristic of L(k; lambda) x pushforward of U_nu twisted by a
// half-canonical; jet-graded residue path.
ChiResult chi_vector(const EulerQuery& q);
// Same value through the expanded delta-free rearrangement; independent of
// the jet bookkeeping except for shared series primitives.
ChiResult chi_vector_explicit(const EulerQuery& q);
// Product of several pushforward bundles: top multi-derivative coefficient.
Int chi_multi(const EulerQuery& q);
// Second exterior power of the nu-pushforward.
Int chi_wedge2(const EulerQuery& q);

// Rank-2 closed-form evaluation at mu = 0 (single residue in one variable).
Int rank2_closed(int g, long k, long lambda1, const HighestWeight& nu);

// Rank-2 two-point residues R^nu_{>,<}(k; lambda, mu) and the two exact
// companions: the crossing difference and the reflection tail terms.
Rat rank2_two_point(int g, long k, long lambda, long mu, const HighestWeight& nu, Chamber side);
Rat rank2_fact1_rhs(int g, long k, long lambda, long mu, const HighestWeight& nu);
Rat rank2_fact2_tail(int g, long k, long lambda, long mu, const HighestWeight& nu, Chamber side);

// Wall-crossing difference localized to the wall-split trees of the
// diagonal family; q.c must be the chamber point on the upper side of the
// wall (its wall sum floors to wall.level).
Int wallcross_residue(const EulerQuery& q, const WallSpec& wall);
// Same value assembled from diagonal families of the two wall parts; trees
// in d_prime/d_second must be path-style trees on the part vertex sets.
Int wallcross_residue(const EulerQuery& q, const WallSpec& wall,
                      const std::vector<OrderedTree>& d_prime,
                      const std::vector<OrderedTree>& d_second);

// Diagonal family of path trees on an arbitrary vertex subset, embedded in
// rank r_full coordinates; mirrors the canonical family on {1..r}.
std::vector<OrderedTree> diagonal_on(std::vector<int> verts, int r_full);

// Interior alcove point whose per-tree integral brackets match the alcove
// vertex theta_{+1} (greater) or theta_{-1} (less) on the canonical family.
CoVector vertex_chamber_point(int r, Chamber side);

// Residue evaluation anchored at the alcove vertex itself (R-values);
// ignores q.c.
Rat residue_at_vertex(const EulerQuery& q, Chamber side);

// Hecke-corrected Euler characteristics near the alcove vertices: the
// chi-side correction by line characteristics (f) and the residue-side
// correction by plain level-K residues (F). Both ignore q.c.
Int f_shifted(const EulerQuery& q, Chamber side);
Int F_shifted(const EulerQuery& q, Chamber side);

// Exact shift identity for a single tree: moving a lattice vector w from
// the residue argument into the exponential costs one delta-free
// correction term. lhs/rhs are the two assembled sides.
struct TrivialShiftCheck {
    Rat lhs;
    Rat rhs;
    bool holds() const { return lhs == rhs; }
};
TrivialShiftCheck trivialshift_check(int g, long k, const HighestWeight& nu,
                                     const LatticePoint& lambda, const OrderedTree& B,
                                     const CoVector& c_arg, const LatticePoint& w);

}  // namespace verlinde
