#pragma once

#include <cmath>
#include <map>
#include <sstream>
#include <string>

#include "forms4/errors.hpp"
#include "forms4/rational.hpp"

namespace forms4 {

/// Element of the field Q(e^q : q in Q): a quotient of finite sums
/// sum_k c_k * e^{q_k} with rational c_k, q_k.  By the Lindemann-Weierstrass
/// theorem the exponentials e^{q} for distinct rational q are linearly
/// independent over Q, so the zero test on the numerator is exact.  This is
/// the scalar type used to evaluate exponential-polynomial coefficients at
/// rational points without leaving exact arithmetic.
class exp_rational {
public:
    using term_map = std::map<rational, rational>; // exponent -> coefficient

    exp_rational() { den_[rational(0)] = rational(1); }
    exp_rational(const rational& r) {
        if (!r.is_zero()) num_[rational(0)] = r;
        den_[rational(0)] = rational(1);
    }
    exp_rational(long long n) : exp_rational(rational(n)) {}

    /// e^q for rational q.
    static exp_rational exp_of(const rational& q) {
        exp_rational out;
        out.num_[q] = rational(1);
        return out;
    }

    bool is_zero() const { return num_.empty(); }

    /// True when the value lies in Q; optionally reports it.
    bool is_rational(rational* out = nullptr) const {
        if (den_.size() != 1 || !den_.begin()->first.is_zero()) return false;
        if (num_.empty()) {
            if (out) *out = rational(0);
            return true;
        }
        if (num_.size() != 1 || !num_.begin()->first.is_zero()) return false;
        if (out) *out = num_.begin()->second / den_.begin()->second;
        return true;
    }

    exp_rational inverse() const {
        if (is_zero()) throw singular_error("division by zero in exp field");
        exp_rational out;
        out.num_ = den_;
        out.den_ = num_;
        out.normalize();
        return out;
    }

    double to_double() const { return eval(num_) / eval(den_); }

    std::string str() const {
        std::ostringstream os;
        os << render(num_);
        if (den_.size() != 1 || !den_.begin()->first.is_zero() ||
            !den_.begin()->second.is_one())
            os << " / (" << render(den_) << ")";
        return os.str();
    }

    friend exp_rational operator+(const exp_rational& a, const exp_rational& b) {
        exp_rational out;
        out.num_ = add(mul(a.num_, b.den_), mul(b.num_, a.den_));
        out.den_ = mul(a.den_, b.den_);
        out.normalize();
        return out;
    }
    friend exp_rational operator-(const exp_rational& a, const exp_rational& b) { return a + (-b); }
    friend exp_rational operator-(const exp_rational& a) {
        exp_rational out(a);
        for (auto& [q, c] : out.num_) c = -c;
        return out;
    }
    friend exp_rational operator*(const exp_rational& a, const exp_rational& b) {
        exp_rational out;
        out.num_ = mul(a.num_, b.num_);
        out.den_ = mul(a.den_, b.den_);
        out.normalize();
        return out;
    }
    friend exp_rational operator/(const exp_rational& a, const exp_rational& b) { return a * b.inverse(); }

    exp_rational& operator+=(const exp_rational& o) { return *this = *this + o; }
    exp_rational& operator-=(const exp_rational& o) { return *this = *this - o; }
    exp_rational& operator*=(const exp_rational& o) { return *this = *this * o; }
    exp_rational& operator/=(const exp_rational& o) { return *this = *this / o; }

    friend bool operator==(const exp_rational& a, const exp_rational& b) { return (a - b).is_zero(); }
    friend bool operator!=(const exp_rational& a, const exp_rational& b) { return !(a == b); }

    exp_rational pow(long long n) const {
        if (n < 0) return inverse().pow(-n);
        exp_rational acc(rational(1));
        exp_rational base = *this;
        while (n > 0) {
            if (n & 1) acc *= base;
            base *= base;
            n >>= 1;
        }
        return acc;
    }

private:
    static term_map add(const term_map& a, const term_map& b) {
        term_map out = a;
        for (const auto& [q, c] : b) {
            auto it = out.find(q);
            if (it == out.end()) {
                out.emplace(q, c);
            } else {
                it->second += c;
                if (it->second.is_zero()) out.erase(it);
            }
        }
        return out;
    }

    static term_map mul(const term_map& a, const term_map& b) {
        term_map out;
        for (const auto& [qa, ca] : a)
            for (const auto& [qb, cb] : b) {
                rational q = qa + qb;
                rational c = ca * cb;
                auto it = out.find(q);
                if (it == out.end()) {
                    if (!c.is_zero()) out.emplace(std::move(q), std::move(c));
                } else {
                    it->second += c;
                    if (it->second.is_zero()) out.erase(it);
                }
            }
        return out;
    }

    static double eval(const term_map& m) {
        double acc = 0;
        for (const auto& [q, c] : m) acc += c.to_double() * std::exp(q.to_double());
        return acc;
    }

    static std::string render(const term_map& m) {
        if (m.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [q, c] : m) {
            if (!first) os << " + ";
            first = false;
            os << c.str();
            if (!q.is_zero()) os << "*e^(" << q.str() << ")";
        }
        return os.str();
    }

    void normalize() {
        if (den_.empty()) throw singular_error("division by zero in exp field");
        if (num_.empty()) {
            den_.clear();
            den_[rational(0)] = rational(1);
            return;
        }
        // A single-term denominator c*e^q divides through exactly.
        if (den_.size() == 1) {
            const rational q = den_.begin()->first;
            const rational c = den_.begin()->second;
            if (!q.is_zero() || !c.is_one()) {
                term_map shifted;
                for (const auto& [p, a] : num_) shifted[p - q] = a / c;
                num_ = std::move(shifted);
                den_.clear();
                den_[rational(0)] = rational(1);
            }
        }
    }

    term_map num_;
    term_map den_;
};

} // namespace forms4
