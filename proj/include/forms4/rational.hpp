#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

#include "forms4/errors.hpp"

namespace forms4 {

/// Arbitrary-precision rational number.  Thin value wrapper around GMP's
/// mpq_class so that generic code never sees expression templates.
class rational {
public:
    rational() : v_(0) {}
    rational(long long n) : v_(mpz_from(n)) {}
    rational(long long num, long long den) : v_(mpz_from(num), mpz_from(den)) {
        if (den == 0) throw singular_error("rational with zero denominator");
        v_.canonicalize();
    }
    explicit rational(mpq_class q) : v_(std::move(q)) { v_.canonicalize(); }

    /// Parses "p", "-p" or "p/q".
    static rational from_string(std::string_view text) {
        mpq_class q;
        if (q.set_str(std::string(text), 10) != 0)
            throw error("invalid rational literal '" + std::string(text) + "'");
        if (q.get_den() == 0) throw singular_error("rational with zero denominator");
        q.canonicalize();
        return rational(std::move(q));
    }

    bool is_zero() const { return sgn(v_) == 0; }
    bool is_one() const { return v_ == 1; }
    int sign() const { return sgn(v_); }

    rational abs() const { return rational(mpq_class(::abs(v_))); }
    double to_double() const { return v_.get_d(); }

    /// Integer power; n may be negative for non-zero values.
    rational pow(long long n) const {
        if (n < 0) {
            if (is_zero()) throw singular_error("0 raised to a negative power");
            return inverse().pow(-n);
        }
        mpq_class out;
        mpz_pow_ui(mpq_numref(out.get_mpq_t()), mpq_numref(v_.get_mpq_t()),
                   static_cast<unsigned long>(n));
        mpz_pow_ui(mpq_denref(out.get_mpq_t()), mpq_denref(v_.get_mpq_t()),
                   static_cast<unsigned long>(n));
        out.canonicalize();
        return rational(std::move(out));
    }

    rational inverse() const {
        if (is_zero()) throw singular_error("division by zero");
        mpq_class out;
        mpq_inv(out.get_mpq_t(), v_.get_mpq_t());
        return rational(std::move(out));
    }

    std::string str() const { return v_.get_str(); }

    const mpq_class& raw() const { return v_; }

    rational& operator+=(const rational& o) { v_ += o.v_; return *this; }
    rational& operator-=(const rational& o) { v_ -= o.v_; return *this; }
    rational& operator*=(const rational& o) { v_ *= o.v_; return *this; }
    rational& operator/=(const rational& o) {
        if (o.is_zero()) throw singular_error("division by zero");
        v_ /= o.v_;
        return *this;
    }

    friend rational operator+(const rational& a, const rational& b) { return rational(mpq_class(a.v_ + b.v_)); }
    friend rational operator-(const rational& a, const rational& b) { return rational(mpq_class(a.v_ - b.v_)); }
    friend rational operator*(const rational& a, const rational& b) { return rational(mpq_class(a.v_ * b.v_)); }
    friend rational operator/(const rational& a, const rational& b) {
        if (b.is_zero()) throw singular_error("division by zero");
        return rational(mpq_class(a.v_ / b.v_));
    }
    friend rational operator-(const rational& a) { return rational(mpq_class(-a.v_)); }

    friend bool operator==(const rational& a, const rational& b) { return mpq_equal(a.v_.get_mpq_t(), b.v_.get_mpq_t()) != 0; }
    friend bool operator!=(const rational& a, const rational& b) { return !(a == b); }
    friend bool operator<(const rational& a, const rational& b) { return cmp(a.v_, b.v_) < 0; }
    friend bool operator<=(const rational& a, const rational& b) { return cmp(a.v_, b.v_) <= 0; }
    friend bool operator>(const rational& a, const rational& b) { return cmp(a.v_, b.v_) > 0; }
    friend bool operator>=(const rational& a, const rational& b) { return cmp(a.v_, b.v_) >= 0; }

private:
    static mpz_class mpz_from(long long n) {
        // long long may exceed long on some ABIs; go through a decimal string
        // only when it does not fit.
        if (n >= -2147483647LL && n <= 2147483647LL) return mpz_class(static_cast<long>(n));
        return mpz_class(std::to_string(n));
    }

    mpq_class v_;
};

inline rational abs(const rational& r) { return r.abs(); }

} // namespace forms4
