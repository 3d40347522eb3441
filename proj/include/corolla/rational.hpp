#pragma once

// Exact rational scalars and their canonical "p/q" string form.

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>

#include "corolla/error.hpp"

namespace corolla {

using Rat = boost::multiprecision::cpp_rational;
using Int = boost::multiprecision::cpp_int;

inline Int factorial(unsigned n) {
    Int r = 1;
    for (unsigned k = 2; k <= n; ++k) r *= k;
    return r;
}

// Canonical serialization: always "p/q" with q > 0, gcd(p,q) = 1.
inline std::string rat_str(const Rat& r) {
    return numerator(r).str() + "/" + denominator(r).str();
}

// Human-facing form: drop the "/1" on integers.
inline std::string rat_pretty(const Rat& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return rat_str(r);
}

inline Rat parse_rat(const std::string& s) {
    auto bad = [&] { throw error(errkind::argument, "bad rational literal: " + s); };
    if (s.empty()) bad();
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rat(Int(s));
        Int p(s.substr(0, slash)), q(s.substr(slash + 1));
        if (q == 0) bad();
        return Rat(p, q);
    } catch (const std::runtime_error&) {
        bad();
    }
    return Rat();  // unreachable
}

}  // namespace corolla
