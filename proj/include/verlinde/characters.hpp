#pragma once

#include <map>
#include <string>
#include <vector>

#include "verlinde/root_system.hpp"

namespace verlinde {

// Weakly decreasing integer vector (GL_r dominant weight).
using HighestWeight = std::vector<long>;

bool is_dominant(const HighestWeight& nu);
long weight_total(const HighestWeight& nu);  // |nu|

// mu -> m_mu over the integer weights of the irreducible with highest
// weight nu; sum of multiplicities is the Weyl dimension.
struct WeightTable {
    int r = 0;
    HighestWeight nu;
    std::map<std::vector<long>, long> mult;

    long dimension() const;
    bool operator==(const WeightTable& o) const { return r == o.r && mult == o.mult; }
};

// Gelfand-Tsetlin pattern enumeration (primary algorithm).
WeightTable weight_table(const HighestWeight& nu);
// Freudenthal recursion over dominant weights (independent oracle).
WeightTable freudenthal_weight_table(const HighestWeight& nu);

Int weyl_dim(const HighestWeight& nu);

// Finite sum of coeff * exp(<exponent, x>) with sum-zero exponents
// mu_proj = mu - (|nu|/r)(1,..,1).
struct CharacterSum {
    int r = 0;
    std::vector<std::pair<Rat, CoVector>> terms;

    Rat value_at_zero() const;
};

CharacterSum character(const HighestWeight& nu);
CharacterSum directional_derivative(const CharacterSum& phi, const Vector& v);
CharacterSum hessian_trace(const CharacterSum& phi);
CharacterSum adams_twist(const CharacterSum& phi, long n);

struct BranchTerm {
    HighestWeight nu_prime;   // on Pi'
    HighestWeight nu_second;  // on Pi''
    long multiplicity = 0;
    Rat s;  // sum over Pi' of (nu'_i - |nu|/r)
};
// Restriction to the block subgroup of the wall partition, by weight-table
// peeling of joint highest weights.
std::vector<BranchTerm> branch(const HighestWeight& nu, const WallSpec& wall);

struct HeckeShift {
    LatticePoint shift;  // (mu_1,...,mu_{r-1}, mu_r - |nu|)
    Int coefficient;     // m_mu * mu_1 (minus side) or m_mu * mu_r (plus side)
};
enum class HeckeSide { plus, minus };
std::vector<HeckeShift> hecke_shift_coefficients(const HighestWeight& nu, HeckeSide side);

// Process-wide weight-table memo; optional on-disk JSON cache directory
// (corrupt or mismatched files are ignored and recomputed).
const WeightTable& cached_weight_table(const HighestWeight& nu);
void set_weight_table_cache_dir(const std::string& dir);

}  // namespace verlinde
