#pragma once

#include <cmath>
#include <cstdlib>
#include <string>

#include "forms4/errors.hpp"
#include "forms4/exp_field.hpp"
#include "forms4/rational.hpp"

namespace forms4 {

/// Per-backend scalar policy.  Coefficient containers are templated on the
/// scalar type, so mixing backends is rejected by the type system.
template <class T>
struct scalar_traits;

template <>
struct scalar_traits<rational> {
    static constexpr bool is_exact = true;
    static constexpr const char* name = "exact";
    static rational zero() { return rational(0); }
    static rational one() { return rational(1); }
    static rational from_rational(const rational& r) { return r; }
    static bool is_zero(const rational& x) { return x.is_zero(); }
    static double magnitude(const rational& x) { return std::abs(x.to_double()); }
    static rational invert(const rational& c) { return c.inverse(); }
    static rational exp_constant(const rational& c) {
        if (!c.is_zero())
            throw backend_error("exp of non-zero constant term requires float backend");
        return one();
    }
    static rational log_constant(const rational& c) {
        if (!c.is_one())
            throw backend_error("ln with constant term != 1 requires float backend");
        return zero();
    }
    static std::string str(const rational& x) { return x.str(); }
};

template <>
struct scalar_traits<double> {
    static constexpr bool is_exact = false;
    static constexpr const char* name = "float";
    static double zero() { return 0.0; }
    static double one() { return 1.0; }
    static double from_rational(const rational& r) { return r.to_double(); }
    static bool is_zero(double x) { return x == 0.0; }
    static double magnitude(double x) { return std::abs(x); }
    static double invert(double c) {
        if (c == 0.0) throw singular_error("division by zero");
        return 1.0 / c;
    }
    static double exp_constant(double c) { return std::exp(c); }
    static double log_constant(double c) {
        if (c <= 0.0) throw singular_error("ln of non-positive constant term");
        return std::log(c);
    }
    static std::string str(double x) { return std::to_string(x); }
};

template <>
struct scalar_traits<exp_rational> {
    static constexpr bool is_exact = true;
    static constexpr const char* name = "exact-exp";
    static exp_rational zero() { return exp_rational(); }
    static exp_rational one() { return exp_rational(rational(1)); }
    static exp_rational from_rational(const rational& r) { return exp_rational(r); }
    static bool is_zero(const exp_rational& x) { return x.is_zero(); }
    static double magnitude(const exp_rational& x) { return std::abs(x.to_double()); }
    static exp_rational invert(const exp_rational& c) { return c.inverse(); }
    static exp_rational exp_constant(const exp_rational& c) {
        rational r;
        if (!c.is_rational(&r))
            throw backend_error("exp of non-rational value in exp field");
        return exp_rational::exp_of(r);
    }
    static exp_rational log_constant(const exp_rational& c) {
        if (c != exp_rational(rational(1)))
            throw backend_error("ln with constant term != 1 in exp field");
        return zero();
    }
    static std::string str(const exp_rational& x) { return x.str(); }
};

} // namespace forms4
