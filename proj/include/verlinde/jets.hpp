#pragma once

#include <stdexcept>
#include <vector>

#include "verlinde/rational.hpp"

namespace verlinde {

// Element of Q[d_1..d_m]/(d_i^2); comp[mask] is the coefficient of
// prod_{i in mask} d_i.
struct Jet {
    std::vector<Rat> comp;

    Jet() = default;
    explicit Jet(int m) : comp(std::size_t(1) << m, Rat(0)) {}
    static Jet constant(int m, const Rat& c) {
        Jet j(m);
        j.comp[0] = c;
        return j;
    }

    int width() const { return static_cast<int>(comp.size()); }
    const Rat& body() const { return comp[0]; }

    bool is_zero() const {
        for (const Rat& c : comp)
            if (c != 0) return false;
        return true;
    }

    Jet& operator+=(const Jet& o) {
        for (std::size_t i = 0; i < comp.size(); ++i) comp[i] += o.comp[i];
        return *this;
    }
    Jet& operator-=(const Jet& o) {
        for (std::size_t i = 0; i < comp.size(); ++i) comp[i] -= o.comp[i];
        return *this;
    }
    Jet& negate() {
        for (Rat& c : comp) c = -c;
        return *this;
    }
    Jet& scale(const Rat& s) {
        for (Rat& c : comp) c *= s;
        return *this;
    }

    Jet mul(const Jet& o) const {
        Jet out(0);
        out.comp.assign(comp.size(), Rat(0));
        for (std::size_t a = 0; a < comp.size(); ++a) {
            if (comp[a] == 0) continue;
            for (std::size_t b = 0; b < o.comp.size(); ++b) {
                if (a & b) continue;  // d_i^2 = 0
                if (o.comp[b] == 0) continue;
                out.comp[a | b] += comp[a] * o.comp[b];
            }
        }
        return out;
    }

    // Requires invertible body.
    Jet inverse() const {
        if (comp[0] == 0) throw std::domain_error("Jet::inverse: nilpotent body");
        Jet nil = *this;
        Rat c0 = comp[0];
        nil.comp[0] = 0;
        nil.scale(Rat(1) / c0);  // J = c0 (1 + nil)
        Jet acc = constant_like(*this, Rat(1)), term = constant_like(*this, Rat(1));
        for (std::size_t s = 1; s < comp.size(); ++s) {
            term = term.mul(nil);
            term.negate();
            if (term.is_zero()) break;
            acc += term;
        }
        acc.scale(Rat(1) / c0);
        return acc;
    }

    bool operator==(const Jet& o) const { return comp == o.comp; }

private:
    static Jet constant_like(const Jet& proto, const Rat& c) {
        Jet j(0);
        j.comp.assign(proto.comp.size(), Rat(0));
        j.comp[0] = c;
        return j;
    }
};

}  // namespace verlinde
