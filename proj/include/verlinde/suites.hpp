#pragma once

#include <functional>
#include <string>
#include <vector>

#include "verlinde/formulas.hpp"

namespace verlinde {

// One verified identity instance; detail carries the counterexample echo
// (inputs and both values) when the check fails, and is empty otherwise.
struct CheckResult {
    std::string name;
    bool ok = false;
    std::string detail;
};

struct SuiteReport {
    std::string suite;
    std::vector<CheckResult> checks;

    long failures() const;
    bool ok() const { return failures() == 0; }
};

// Ordered collection of named checks. run() executes bodies in a bounded
// work pool (jobs >= 1) and reports them in registration order regardless
// of completion order; a body returns "" on success and a counterexample
// description on failure. Thrown exceptions are caught and reported.
class CheckSet {
public:
    void add(std::string name, std::function<std::string()> body);
    SuiteReport run(std::string suite, int jobs) const;

private:
    std::vector<std::pair<std::string, std::function<std::string()>>> items_;
};

extern const std::vector<std::string> kSuiteNames;  // valid run_suite arguments

SuiteReport run_suite(const std::string& name, int jobs = 1);
std::vector<SuiteReport> run_all_suites(int jobs = 1);

// SU(2) trigonometric Verlinde sum with one marked point,
//   ((k+2)/2)^{g-1} sum_{a=1}^{k+1} sin(pi a (2 lambda1 + 1)/(k+2)) / sin(pi a/(k+2))^{2g-1},
// evaluated at 256-bit precision and rounded; throws logic_error when the
// sum strays from the nearest integer by more than the pinned 1e-20.
Int su2_trig_verlinde(int g, long k, long lambda1);

// Rank-3 cross-checks for the standard-representation bundle weight
// (1,0,0): both canonical tree residues rewritten over a common pair of
// level denominators (a single Weyl reflection applied to the second tree)
// and collapsed to one two-variable iterated residue. window_pad enlarges
// every series window symmetrically; any pad must reproduce the same value.
Rat merged_residue_chi(int g, long k, const LatticePoint& lambda, Chamber side,
                       long window_pad = 0);

// Same merged form for the wall-crossing term across the rank-3 interior
// wall ({2},{1,3}) at level 0: the single wall tree with its link factor
// removed, in the merged coordinates. Equals the chamber difference of
// chi_vector across that wall (zero for the standard representation).
Rat merged_wall_residue(int g, long k, const LatticePoint& lambda, long window_pad = 0);

// Generator of an alcove-vertex stabilizer inside the affine Weyl group:
// a coordinate transposition acting through the dot action, optionally
// followed by translation by (k+r) gamma.
struct AffineGen {
    std::vector<int> sigma;  // permutation of {1..r}, by positions
    LatticePoint gamma;      // empty = no translation
    std::string name;
};

// Generators of the stabilizer of theta_{+1} (greater) or theta_{-1}
// (less): the transpositions fixing the vertex plus one translated
// reflection through the far wall.
std::vector<AffineGen> vertex_stabilizer_gens(int r, Chamber side);

LatticePoint apply_affine_gen(const AffineGen& gen, long k, const LatticePoint& lambda,
                              const CoVector& v_det);

}  // namespace verlinde
