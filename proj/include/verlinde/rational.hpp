#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <vector>

namespace verlinde {

// Exact arithmetic everywhere; mpq_class keeps values canonical (reduced,
// positive denominator).
using Rat = mpq_class;
using Int = mpz_class;
using Coords = std::vector<Rat>;

inline Int rat_floor(const Rat& q) {
    Int out;
    mpz_fdiv_q(out.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return out;
}

// Fractional part in [0, 1).
inline Rat rat_frac(const Rat& q) { return q - Rat(rat_floor(q)); }

inline bool is_integer(const Rat& q) { return q.get_den() == 1; }

inline Rat rat_pow(const Rat& base, long e) {
    if (e == 0) return Rat(1);
    if (base == 0 && e < 0) throw std::domain_error("rat_pow: zero base, negative exponent");
    Rat b = e < 0 ? Rat(1) / base : base;
    unsigned long n = e < 0 ? -static_cast<unsigned long>(e) : static_cast<unsigned long>(e);
    Rat acc(1);
    while (n) {
        if (n & 1) acc *= b;
        b *= b;
        n >>= 1;
    }
    return acc;
}

inline Int int_pow(const Int& base, unsigned long e) {
    Int out;
    mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), e);
    return out;
}

// Canonical "p" or "p/q" string.
inline std::string rat_str(const Rat& q) { return q.get_str(); }

// Parses "p", "p/q", or a decimal like "0.3"; rejects zero denominators.
inline Rat rat_parse(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("rat_parse: empty string");
    auto dot = s.find('.');
    if (dot != std::string::npos) {
        std::string digits = s.substr(0, dot) + s.substr(dot + 1);
        std::size_t frac_len = s.size() - dot - 1;
        if (digits.empty() || digits == "-" || digits == "+")
            throw std::invalid_argument("rat_parse: malformed decimal '" + s + "'");
        Rat num(digits, 10);
        Rat den(int_pow(Int(10), frac_len));
        Rat out = num / den;
        out.canonicalize();
        return out;
    }
    Rat out;
    if (out.set_str(s, 10) != 0) throw std::invalid_argument("rat_parse: malformed rational '" + s + "'");
    if (out.get_den() == 0) throw std::invalid_argument("rat_parse: zero denominator in '" + s + "'");
    out.canonicalize();
    return out;
}

}  // namespace verlinde
