#pragma once

#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "verlinde/characters.hpp"
#include "verlinde/laurent.hpp"
#include "verlinde/root_system.hpp"
#include "verlinde/trees.hpp"

namespace verlinde {

// Raised when the adaptive window loop keeps producing different residues.
struct WindowInstability : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Run-wide bookkeeping: how many residues were re-verified on enlarged
// windows, how many plans had to grow, and how many exact values were
// asserted integral.
struct EngineCounters {
    long long stability_checks = 0;
    long long stability_retries = 0;
    long long integrality_checks = 0;
};
EngineCounters engine_counters();
void reset_engine_counters();
void count_integrality_check();

// Change of coordinates onto an ordered basis: expand(a) returns t with
// a = sum_j t_j beta^[j], so that <a, x> = sum_j t_j y_j.
class BasisExpander {
public:
    explicit BasisExpander(const OrderedBasis& B);

    const OrderedBasis& basis() const { return B_; }
    int rank() const { return B_.r; }
    std::vector<Rat> expand(const CoVector& a) const;
    LinearFormY form(const CoVector& a, const Rat& scale) const;

private:
    OrderedBasis B_;
    std::vector<std::vector<Rat>> inv_;  // (r-1)x(r-1), acts on chart coords
};

// Shared immutable series contexts; series that should interoperate must be
// built against the same instance, which this registry guarantees per key.
std::shared_ptr<const SeriesContext> make_context(const Windows& win, int m);

// exp(f) * exp(jet_multiplier); the multiplier, if present, must be
// nilpotent (pure delta-graded).
Series exp_series(const SeriesContext* ctx, const LinearFormY& f, const Series* jet_multiplier);

// (2 sinh(<alpha, x> * scale / 2))^power in y-coordinates.
Series weyl_factor(const Root& alpha, const BasisExpander& ex, long power, const Rat& scale,
                   const SeriesContext* ctx);

// Product over all positive roots: w_Phi(scale * x)^power.
Series weyl_product(const BasisExpander& ex, long power, const Rat& scale, const SeriesContext* ctx);

// Character sum as a series: sum_mu c_mu exp(scale * <mu, x>), tagged with
// the given delta mask.
Series character_series(const CharacterSum& phi, const BasisExpander& ex, const Rat& scale,
                        const SeriesContext* ctx, int mask = 0);

// (1 - exp(k_hat * y_j - sum_s delta_s phi_s))^{-1}; phis may be empty.
Series q_factor(int j, const Int& k_hat, const std::vector<CharacterSum>& phis,
                const BasisExpander& ex, const SeriesContext* ctx);

// det(k_hat * Id - sum_s delta_s M^(s)) with M^(s)_ij = d(phi^(s) along
// dual of beta^[i]) / dy_j; equals the scaled-identity determinant for
// constant phi.
Series jacobian_measure(const BasisExpander& ex, const Int& k_hat,
                        const std::vector<CharacterSum>& phis, const Rat& scale,
                        const SeriesContext* ctx);

// Coefficient of y_1^{-1}...y_{r-1}^{-1}.
Jet iterated_residue(const Series& f);

// Uniform symmetric windows sized from the pole budget: per variable
// (2g-1) * (#roots leading in that variable) plus the q-factor and jet
// correction depths, summed over variables to cover cross-variable
// borrowing, plus slack.
Windows window_plan(int g, int r, const Int& k, int m, const OrderedBasis& B);

// Evaluates eval on the planned windows and on windows enlarged by 4;
// equal residues are accepted, otherwise the plan grows by 8 (at most 6
// rounds) before giving up.
Jet stable_residue(const Windows& plan, int m, const std::function<Jet(const SeriesContext*)>& eval);

// Process-wide memo for expensive factor products. The key must determine
// the series contents exactly (include basis, window, scale, power, ...).
// Values are immutable once published; concurrent requests for one key
// build once and share.
std::shared_ptr<const Series> cached_series(const std::string& key,
                                            const std::shared_ptr<const SeriesContext>& ctx,
                                            const std::function<Series(const SeriesContext*)>& build);
void clear_series_cache();

std::string basis_key(const OrderedBasis& B);
std::string windows_key(const Windows& w, int m);

}  // namespace verlinde
