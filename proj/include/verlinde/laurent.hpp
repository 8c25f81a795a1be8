#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <vector>

#include "verlinde/jets.hpp"
#include "verlinde/rational.hpp"

namespace verlinde {

// Raised when a window cannot accommodate a computation; the caller
// enlarges the plan and retries.
struct InsufficientWindow : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Per-variable exponent ranges of the truncated nested field
// Q((y_1))...((y_{n})), expansion region |y_1| >> ... >> |y_n|.
struct Windows {
    std::vector<long> lo, hi;

    int nvars() const { return static_cast<int>(lo.size()); }
    long span(int j) const { return hi[j] - lo[j] + 1; }
    Windows expanded(long d) const {
        Windows w(*this);
        for (long& v : w.lo) v -= d;
        for (long& v : w.hi) v += d;
        return w;
    }
    bool operator==(const Windows& o) const { return lo == o.lo && hi == o.hi; }
};

// Shared context: windows plus the number m of jet nilpotents.
struct SeriesContext {
    Windows win;
    int m = 0;

    int nvars() const { return win.nvars(); }
    int jet_width() const { return 1 << m; }
};

// Linear form in y_1..y_{n}; leading index = smallest j with nonzero
// coefficient (the dominant variable in the expansion region).
struct LinearFormY {
    std::vector<Rat> coeff;

    int leading() const {
        for (std::size_t j = 0; j < coeff.size(); ++j)
            if (coeff[j] != 0) return static_cast<int>(j);
        return -1;
    }
};

// Dense window of jet-valued Laurent monomials. Linear cell order encodes
// the dominance (reverse-lexicographic) order: smaller index = more
// dominant monomial. Flat storage: cell * jet_width + jet mask.
class Series {
public:
    explicit Series(const SeriesContext* ctx);

    static Series zero(const SeriesContext* ctx) { return Series(ctx); }
    static Series one(const SeriesContext* ctx);
    static Series constant(const SeriesContext* ctx, const Rat& c);

    const SeriesContext* ctx() const { return ctx_; }
    int nvars() const { return ctx_->nvars(); }
    std::uint64_t clipped() const { return clipped_; }

    bool in_window(const std::vector<long>& e) const;
    // Adds c * y^e * delta_mask; out-of-window writes count as clipped.
    void add_term(const std::vector<long>& e, int mask, const Rat& c);
    Jet coefficient(const std::vector<long>& e) const;

    bool is_zero() const;
    void negate();
    void scale(const Rat& s);
    void scale_jet(const Jet& s);
    void add(const Series& o);
    void sub(const Series& o);
    void add_constant(const Rat& c);

    Series mul(const Series& o) const;
    Series shifted(const std::vector<long>& d) const;  // multiply by y^d, clip
    Series pow(long p) const;                          // p >= 0
    // Generic inversion: F = c0 y^{e0} (1 + G) with revlex-minimal lead;
    // body part by Neumann series, nilpotent part by the finite jet split.
    Series inverse() const;

    // exp of a linear form (pure power series) times exp of a nilpotent
    // series (finite by d_i^2 = 0).
    static Series exp_linear(const SeriesContext* ctx, const LinearFormY& f);
    Series mul_exp_nilpotent(const Series& nil) const;  // this * exp(nil)

    // Coefficient of y_1^{-1}...y_n^{-1}.
    Jet residue() const;

    bool equal_values(const Series& o) const;

private:
    const SeriesContext* ctx_;
    std::vector<Rat> data_;  // ncells * jet_width
    std::vector<long> stride_;
    long ncells_ = 0;
    std::uint64_t clipped_ = 0;

    long cell_index(const std::vector<long>& e) const;  // -1 if outside
    void decode(long idx, std::vector<long>& e) const;
    Series neumann_unit_inverse() const;  // (1 + G)^{-1} for this = G, lead > 0
    friend class SeriesBuilder;
};

}  // namespace verlinde
