#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>

#include "forms4/errors.hpp"
#include "forms4/expr.hpp"
#include "forms4/rational.hpp"

namespace forms4 {

/// Sparse multivariate polynomial in x1..x4 over the rationals.  Unlike
/// truncated_series this type has no degree cap; it backs the exact
/// integration of the coefficient-system solver and the structural zero
/// test.
class polynomial {
public:
    using key = std::array<std::uint16_t, 4>;
    using term_map = std::map<key, rational>;

    polynomial() = default;

    static polynomial constant(rational r) {
        polynomial p;
        if (!r.is_zero()) p.terms_[{0, 0, 0, 0}] = std::move(r);
        return p;
    }

    static polynomial variable(int axis) {
        polynomial p;
        key k{0, 0, 0, 0};
        k[std::size_t(axis - 1)] = 1;
        p.terms_[k] = rational(1);
        return p;
    }

    bool is_zero() const { return terms_.empty(); }

    bool is_constant(rational* out = nullptr) const {
        if (terms_.empty()) {
            if (out) *out = rational(0);
            return true;
        }
        if (terms_.size() == 1 && terms_.begin()->first == key{0, 0, 0, 0}) {
            if (out) *out = terms_.begin()->second;
            return true;
        }
        return false;
    }

    int degree() const {
        int d = 0;
        for (const auto& [k, c] : terms_)
            d = std::max(d, int(k[0]) + k[1] + k[2] + k[3]);
        return d;
    }

    bool depends_on(int axis) const {
        for (const auto& [k, c] : terms_)
            if (k[std::size_t(axis - 1)] != 0) return true;
        return false;
    }

    const term_map& terms() const { return terms_; }

    friend polynomial operator+(const polynomial& a, const polynomial& b) {
        polynomial out = a;
        for (const auto& [k, c] : b.terms_) out.add_term(k, c);
        return out;
    }
    friend polynomial operator-(const polynomial& a, const polynomial& b) {
        polynomial out = a;
        for (const auto& [k, c] : b.terms_) out.add_term(k, -c);
        return out;
    }
    friend polynomial operator-(const polynomial& a) {
        polynomial out = a;
        for (auto& [k, c] : out.terms_) c = -c;
        return out;
    }
    friend polynomial operator*(const polynomial& a, const polynomial& b) {
        polynomial out;
        for (const auto& [ka, ca] : a.terms_)
            for (const auto& [kb, cb] : b.terms_) {
                key k{std::uint16_t(ka[0] + kb[0]), std::uint16_t(ka[1] + kb[1]),
                      std::uint16_t(ka[2] + kb[2]), std::uint16_t(ka[3] + kb[3])};
                out.add_term(k, ca * cb);
            }
        return out;
    }
    friend polynomial operator*(const rational& s, const polynomial& a) {
        if (s.is_zero()) return {};
        polynomial out = a;
        for (auto& [k, c] : out.terms_) c = s * c;
        return out;
    }

    polynomial& operator+=(const polynomial& o) { return *this = *this + o; }
    polynomial& operator-=(const polynomial& o) { return *this = *this - o; }
    polynomial& operator*=(const polynomial& o) { return *this = *this * o; }

    polynomial pow(long long n) const {
        polynomial acc = constant(rational(1));
        polynomial base = *this;
        while (n > 0) {
            if (n & 1) acc *= base;
            if ((n >>= 1) != 0) base *= base;
        }
        return acc;
    }

    polynomial derivative(int axis) const {
        polynomial out;
        for (const auto& [k, c] : terms_) {
            int e = k[std::size_t(axis - 1)];
            if (e == 0) continue;
            key t = k;
            t[std::size_t(axis - 1)] = std::uint16_t(e - 1);
            out.add_term(t, rational(e) * c);
        }
        return out;
    }

    /// Antiderivative in one variable with zero constant of integration,
    /// i.e. the definite integral from 0 to x^axis.
    polynomial antiderivative(int axis) const {
        polynomial out;
        for (const auto& [k, c] : terms_) {
            key t = k;
            int e = k[std::size_t(axis - 1)];
            t[std::size_t(axis - 1)] = std::uint16_t(e + 1);
            out.add_term(t, c / rational(e + 1));
        }
        return out;
    }

    rational eval(const point4& p) const {
        rational acc(0);
        for (const auto& [k, c] : terms_) {
            rational t = c;
            for (int i = 0; i < 4; ++i)
                if (k[std::size_t(i)] != 0) t *= p[std::size_t(i)].pow(k[std::size_t(i)]);
            acc += t;
        }
        return acc;
    }

    expr to_expr() const {
        expr acc = expr::constant(rational(0));
        for (const auto& [k, c] : terms_) {
            expr t = expr::constant(c);
            for (int i = 0; i < 4; ++i)
                if (k[std::size_t(i)] != 0)
                    t = t * forms4::pow(expr::variable(i + 1), k[std::size_t(i)]);
            acc = acc + t;
        }
        return acc;
    }

    friend bool operator==(const polynomial& a, const polynomial& b) {
        return a.terms_ == b.terms_;
    }
    friend bool operator<(const polynomial& a, const polynomial& b) {
        return lex_less(a.terms_, b.terms_);
    }

private:
    static bool lex_less(const term_map& a, const term_map& b) {
        auto ia = a.begin(), ib = b.begin();
        for (; ia != a.end() && ib != b.end(); ++ia, ++ib) {
            if (ia->first != ib->first) return ia->first < ib->first;
            if (ia->second != ib->second) return ia->second < ib->second;
        }
        return ia == a.end() && ib != b.end();
    }

    void add_term(const key& k, rational c) {
        if (c.is_zero()) return;
        auto it = terms_.find(k);
        if (it == terms_.end()) {
            terms_.emplace(k, std::move(c));
        } else {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    term_map terms_;
};

/// Expands an expression into a polynomial when it lies in the polynomial
/// subring (after binding substitution); returns nullopt otherwise.
/// Division is admitted only by non-zero constants.
inline std::optional<polynomial> expr_to_polynomial(const expr& e, const bindings& b = {}) {
    using k = expr::node_kind;
    switch (e.kind()) {
    case k::constant: return polynomial::constant(e.value());
    case k::variable: return polynomial::variable(e.axis());
    case k::parameter: {
        auto it = b.find(e.name());
        if (it == b.end()) return std::nullopt;
        return polynomial::constant(it->second);
    }
    case k::add: {
        auto a = expr_to_polynomial(e.child_a(), b), c = expr_to_polynomial(e.child_b(), b);
        if (!a || !c) return std::nullopt;
        return *a + *c;
    }
    case k::sub: {
        auto a = expr_to_polynomial(e.child_a(), b), c = expr_to_polynomial(e.child_b(), b);
        if (!a || !c) return std::nullopt;
        return *a - *c;
    }
    case k::mul: {
        auto a = expr_to_polynomial(e.child_a(), b), c = expr_to_polynomial(e.child_b(), b);
        if (!a || !c) return std::nullopt;
        return *a * *c;
    }
    case k::div: {
        auto a = expr_to_polynomial(e.child_a(), b), c = expr_to_polynomial(e.child_b(), b);
        if (!a || !c) return std::nullopt;
        rational rc;
        if (!c->is_constant(&rc) || rc.is_zero()) return std::nullopt;
        return rc.inverse() * *a;
    }
    case k::pow: {
        auto a = expr_to_polynomial(e.child_a(), b);
        if (!a) return std::nullopt;
        if (e.exponent() >= 0) return a->pow(e.exponent());
        rational ra;
        if (!a->is_constant(&ra) || ra.is_zero()) return std::nullopt;
        return polynomial::constant(ra.pow(e.exponent()));
    }
    case k::neg: {
        auto a = expr_to_polynomial(e.child_a(), b);
        if (!a) return std::nullopt;
        return -*a;
    }
    case k::exp_fn:
    case k::ln_fn: return std::nullopt;
    }
    throw error("unreachable expr kind");
}

} // namespace forms4
