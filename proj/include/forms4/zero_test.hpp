#pragma once

#include <map>
#include <optional>
#include <random>

#include "forms4/eval.hpp"
#include "forms4/exp_field.hpp"
#include "forms4/expr.hpp"
#include "forms4/poly.hpp"

namespace forms4 {

/// Normal form for the subring generated by polynomials and exp of
/// polynomials: a finite sum  sum_k P_k * exp(Q_k)  keyed by the exponent
/// polynomial.  Distinct exponent polynomials give linearly independent
/// exponentials over the polynomial ring, so emptiness decides vanishing.
struct poly_exp {
    std::map<polynomial, polynomial> terms;

    static poly_exp from_polynomial(polynomial p) {
        poly_exp out;
        if (!p.is_zero()) out.terms.emplace(polynomial(), std::move(p));
        return out;
    }

    bool is_zero() const { return terms.empty(); }

    bool is_polynomial(polynomial* out = nullptr) const {
        if (terms.empty()) {
            if (out) *out = polynomial();
            return true;
        }
        if (terms.size() == 1 && terms.begin()->first.is_zero()) {
            if (out) *out = terms.begin()->second;
            return true;
        }
        return false;
    }

    void add_term(const polynomial& q, const polynomial& p) {
        if (p.is_zero()) return;
        auto it = terms.find(q);
        if (it == terms.end()) {
            terms.emplace(q, p);
        } else {
            it->second += p;
            if (it->second.is_zero()) terms.erase(it);
        }
    }

    friend poly_exp operator+(const poly_exp& a, const poly_exp& b) {
        poly_exp out = a;
        for (const auto& [q, p] : b.terms) out.add_term(q, p);
        return out;
    }
    friend poly_exp operator-(const poly_exp& a) {
        poly_exp out = a;
        for (auto& [q, p] : out.terms) p = -p;
        return out;
    }
    friend poly_exp operator-(const poly_exp& a, const poly_exp& b) { return a + (-b); }
    friend poly_exp operator*(const poly_exp& a, const poly_exp& b) {
        poly_exp out;
        for (const auto& [qa, pa] : a.terms)
            for (const auto& [qb, pb] : b.terms) out.add_term(qa + qb, pa * pb);
        return out;
    }

    poly_exp pow(long long n) const {
        poly_exp acc = from_polynomial(polynomial::constant(rational(1)));
        poly_exp base = *this;
        while (n > 0) {
            if (n & 1) acc = acc * base;
            if ((n >>= 1) != 0) base = base * base;
        }
        return acc;
    }

    /// Exact value at a rational point, in the exponential extension field.
    exp_rational eval(const point4& pt) const {
        exp_rational acc;
        for (const auto& [q, p] : terms)
            acc += exp_rational(p.eval(pt)) * exp_rational::exp_of(q.eval(pt));
        return acc;
    }
};

struct poly_exp_fraction {
    poly_exp num, den;
};

/// Structural normalization into num/den of poly-exp sums; nullopt when the
/// expression leaves the decidable subring (ln, exp of non-polynomial,
/// unbound parameters, division by a structural zero).
inline std::optional<poly_exp_fraction> poly_exp_normal_form(const expr& e,
                                                             const bindings& b = {}) {
    using k = expr::node_kind;
    auto lift = [](poly_exp n) {
        poly_exp_fraction f;
        f.num = std::move(n);
        f.den = poly_exp::from_polynomial(polynomial::constant(rational(1)));
        return f;
    };
    switch (e.kind()) {
    case k::constant: return lift(poly_exp::from_polynomial(polynomial::constant(e.value())));
    case k::variable: return lift(poly_exp::from_polynomial(polynomial::variable(e.axis())));
    case k::parameter: {
        auto it = b.find(e.name());
        if (it == b.end()) return std::nullopt;
        return lift(poly_exp::from_polynomial(polynomial::constant(it->second)));
    }
    case k::add:
    case k::sub: {
        auto x = poly_exp_normal_form(e.child_a(), b);
        auto y = poly_exp_normal_form(e.child_b(), b);
        if (!x || !y) return std::nullopt;
        poly_exp_fraction f;
        poly_exp yn = e.kind() == k::add ? y->num : -y->num;
        f.num = x->num * y->den + yn * x->den;
        f.den = x->den * y->den;
        return f;
    }
    case k::mul: {
        auto x = poly_exp_normal_form(e.child_a(), b);
        auto y = poly_exp_normal_form(e.child_b(), b);
        if (!x || !y) return std::nullopt;
        return poly_exp_fraction{x->num * y->num, x->den * y->den};
    }
    case k::div: {
        auto x = poly_exp_normal_form(e.child_a(), b);
        auto y = poly_exp_normal_form(e.child_b(), b);
        if (!x || !y) return std::nullopt;
        if (y->num.is_zero()) return std::nullopt;
        return poly_exp_fraction{x->num * y->den, x->den * y->num};
    }
    case k::pow: {
        auto x = poly_exp_normal_form(e.child_a(), b);
        if (!x) return std::nullopt;
        long long n = e.exponent();
        if (n >= 0) return poly_exp_fraction{x->num.pow(n), x->den.pow(n)};
        if (x->num.is_zero()) return std::nullopt;
        return poly_exp_fraction{x->den.pow(-n), x->num.pow(-n)};
    }
    case k::neg: {
        auto x = poly_exp_normal_form(e.child_a(), b);
        if (!x) return std::nullopt;
        return poly_exp_fraction{-x->num, x->den};
    }
    case k::exp_fn: {
        auto x = poly_exp_normal_form(e.child_a(), b);
        if (!x) return std::nullopt;
        polynomial num_poly, den_poly;
        rational den_const;
        if (!x->num.is_polynomial(&num_poly) || !x->den.is_polynomial(&den_poly) ||
            !den_poly.is_constant(&den_const) || den_const.is_zero())
            return std::nullopt;
        poly_exp out;
        out.add_term(den_const.inverse() * num_poly, polynomial::constant(rational(1)));
        return lift(std::move(out));
    }
    case k::ln_fn: return std::nullopt;
    }
    throw error("unreachable expr kind");
}

enum class zero_kind { zero, non_zero, unknown };

struct zero_verdict {
    zero_kind kind = zero_kind::unknown;
    std::optional<point4> witness;

    bool is_zero() const { return kind == zero_kind::zero; }
    bool is_non_zero() const { return kind == zero_kind::non_zero; }
};

struct zero_options {
    int samples = 32;
    std::uint64_t seed = 0x5eed0001u;
    double tolerance = 1e-9;
};

namespace detail {

inline point4 random_box_point(std::mt19937_64& g) {
    // exact rationals n / 2^21 with |n| <= 2^20, i.e. within [-1/2, 1/2]^4
    point4 p;
    std::uniform_int_distribution<long long> dist(-(1 << 20), 1 << 20);
    for (auto& x : p) x = rational(dist(g), 1 << 21);
    return p;
}

} // namespace detail

/// Probabilistic/structural zero test.  Expressions in the poly-exp subring
/// are decided exactly by normalization; everything else is sampled at
/// random rational points (exactly in the exponential extension field where
/// representable, in floats with a relative tolerance otherwise).
inline zero_verdict is_zero(const expr& e, const bindings& b = {},
                            const zero_options& opt = {}) {
    std::mt19937_64 gen(opt.seed);
    if (auto nf = poly_exp_normal_form(e, b)) {
        if (nf->num.is_zero()) return {zero_kind::zero, std::nullopt};
        // Formally non-zero; hunt a witness point where it provably is.
        for (int i = 0; i < 8 * opt.samples; ++i) {
            point4 pt = detail::random_box_point(gen);
            exp_rational den = nf->den.eval(pt);
            if (den.is_zero()) continue;
            if (!nf->num.eval(pt).is_zero()) return {zero_kind::non_zero, pt};
        }
        return {zero_kind::non_zero, std::nullopt};
    }
    int taken = 0;
    for (int attempts = 0; taken < opt.samples && attempts < 8 * opt.samples; ++attempts) {
        point4 pt = detail::random_box_point(gen);
        try {
            exp_rational v = eval_value<exp_rational>(e, pt, b);
            ++taken;
            if (!v.is_zero()) return {zero_kind::non_zero, pt};
            continue;
        } catch (const backend_error&) {
            // fall through to float sampling at this point
        } catch (const singular_error&) {
            continue;
        } catch (const error&) {
            return {zero_kind::unknown, std::nullopt};
        }
        try {
            std::array<double, 4> fp{pt[0].to_double(), pt[1].to_double(),
                                     pt[2].to_double(), pt[3].to_double()};
            scaled_value v = eval_double_scaled(e, fp, b);
            ++taken;
            if (std::abs(v.value) > opt.tolerance * std::max(1.0, v.scale))
                return {zero_kind::non_zero, pt};
        } catch (const singular_error&) {
            continue;
        } catch (const error&) {
            return {zero_kind::unknown, std::nullopt};
        }
    }
    return {zero_kind::unknown, std::nullopt};
}

} // namespace forms4
