#pragma once

#include <array>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <string>

#include "forms4/errors.hpp"
#include "forms4/rational.hpp"

namespace forms4 {

/// Parameter environment: named constants such as c or lambda bound to
/// exact rationals.
using bindings = std::map<std::string, rational>;

using point4 = std::array<rational, 4>;

inline point4 add_points(const point4& a, const point4& b) {
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]};
}

/// Immutable symbolic expression over x1..x4, rational constants, named
/// parameters, +, -, *, /, integer powers, exp and ln.  Construction applies
/// only local rewrites: constant folding, 0/1 absorption, double negation,
/// exp/ln cancellation and power flattening.
class expr {
public:
    enum class node_kind {
        constant,
        variable,
        parameter,
        add,
        sub,
        mul,
        div,
        pow,
        neg,
        exp_fn,
        ln_fn
    };

    expr() : expr(constant(rational(0))) {}

    static expr constant(rational r) {
        node n;
        n.kind = node_kind::constant;
        n.value = std::move(r);
        return expr(std::move(n));
    }

    static expr variable(int axis) {
        if (axis < 1 || axis > 4) throw error("variable axis out of range 1..4");
        node n;
        n.kind = node_kind::variable;
        n.axis = axis;
        return expr(std::move(n));
    }

    static expr parameter(std::string name) {
        node n;
        n.kind = node_kind::parameter;
        n.name = std::move(name);
        return expr(std::move(n));
    }

    node_kind kind() const { return n_->kind; }
    const rational& value() const { return n_->value; }
    int axis() const { return n_->axis; }
    const std::string& name() const { return n_->name; }
    long long exponent() const { return n_->exponent; }
    expr child_a() const { return expr(n_->a); }
    expr child_b() const { return expr(n_->b); }

    bool is_constant(rational* out = nullptr) const {
        if (n_->kind != node_kind::constant) return false;
        if (out) *out = n_->value;
        return true;
    }

    bool is_constant_equal(const rational& r) const {
        return n_->kind == node_kind::constant && n_->value == r;
    }

    friend expr operator+(const expr& a, const expr& b) {
        rational ra, rb;
        if (a.is_constant(&ra) && b.is_constant(&rb)) return constant(ra + rb);
        if (a.is_constant_equal(rational(0))) return b;
        if (b.is_constant_equal(rational(0))) return a;
        return binary(node_kind::add, a, b);
    }

    friend expr operator-(const expr& a, const expr& b) {
        rational ra, rb;
        if (a.is_constant(&ra) && b.is_constant(&rb)) return constant(ra - rb);
        if (b.is_constant_equal(rational(0))) return a;
        if (a.is_constant_equal(rational(0))) return -b;
        return binary(node_kind::sub, a, b);
    }

    friend expr operator*(const expr& a, const expr& b) {
        rational ra, rb;
        if (a.is_constant(&ra) && b.is_constant(&rb)) return constant(ra * rb);
        if (a.is_constant_equal(rational(0)) || b.is_constant_equal(rational(0)))
            return constant(rational(0));
        if (a.is_constant_equal(rational(1))) return b;
        if (b.is_constant_equal(rational(1))) return a;
        return binary(node_kind::mul, a, b);
    }

    friend expr operator/(const expr& a, const expr& b) {
        rational ra, rb;
        if (b.is_constant(&rb)) {
            if (rb.is_zero()) throw singular_error("division by constant zero");
            if (a.is_constant(&ra)) return constant(ra / rb);
            if (rb.is_one()) return a;
        }
        if (a.is_constant_equal(rational(0))) return constant(rational(0));
        return binary(node_kind::div, a, b);
    }

    friend expr operator-(const expr& a) {
        rational ra;
        if (a.is_constant(&ra)) return constant(-ra);
        if (a.kind() == node_kind::neg) return a.child_a();
        node n;
        n.kind = node_kind::neg;
        n.a = a.n_;
        return expr(std::move(n));
    }

    friend expr pow(const expr& a, long long k) {
        if (k == 0) return constant(rational(1));
        if (k == 1) return a;
        rational ra;
        if (a.is_constant(&ra)) return constant(ra.pow(k));
        if (a.kind() == node_kind::pow) return pow(a.child_a(), a.exponent() * k);
        node n;
        n.kind = node_kind::pow;
        n.a = a.n_;
        n.exponent = k;
        return expr(std::move(n));
    }

    friend expr exp(const expr& a) {
        if (a.is_constant_equal(rational(0))) return constant(rational(1));
        if (a.kind() == node_kind::ln_fn) return a.child_a();
        node n;
        n.kind = node_kind::exp_fn;
        n.a = a.n_;
        return expr(std::move(n));
    }

    friend expr ln(const expr& a) {
        if (a.is_constant_equal(rational(1))) return constant(rational(0));
        if (a.kind() == node_kind::exp_fn) return a.child_a();
        node n;
        n.kind = node_kind::ln_fn;
        n.a = a.n_;
        return expr(std::move(n));
    }

    /// DSL text; reparsing yields the identical AST.
    std::string str() const {
        std::ostringstream os;
        print(os, 0);
        return os.str();
    }

    /// Structural identity (same folded tree).
    friend bool same_tree(const expr& a, const expr& b) {
        if (a.n_ == b.n_) return true;
        if (a.kind() != b.kind()) return false;
        switch (a.kind()) {
        case node_kind::constant: return a.value() == b.value();
        case node_kind::variable: return a.axis() == b.axis();
        case node_kind::parameter: return a.name() == b.name();
        case node_kind::pow:
            return a.exponent() == b.exponent() && same_tree(a.child_a(), b.child_a());
        case node_kind::neg:
        case node_kind::exp_fn:
        case node_kind::ln_fn: return same_tree(a.child_a(), b.child_a());
        default:
            return same_tree(a.child_a(), b.child_a()) &&
                   same_tree(a.child_b(), b.child_b());
        }
    }

private:
    struct node {
        node_kind kind = node_kind::constant;
        rational value;
        int axis = 0;
        std::string name;
        long long exponent = 0;
        std::shared_ptr<const node> a, b;
    };

    explicit expr(std::shared_ptr<const node> n) : n_(std::move(n)) {}
    explicit expr(node n) : n_(std::make_shared<const node>(std::move(n))) {}

    static expr binary(node_kind k, const expr& a, const expr& b) {
        node n;
        n.kind = k;
        n.a = a.n_;
        n.b = b.n_;
        return expr(std::move(n));
    }

    // Precedence: 0 sum, 1 product, 2 power base / neg operand.
    void print(std::ostringstream& os, int prec) const {
        switch (kind()) {
        case node_kind::constant: {
            const bool simple = value().sign() >= 0;
            const bool needs_parens = !simple && prec >= 1;
            if (needs_parens) os << '(';
            os << value().str();
            if (needs_parens) os << ')';
            break;
        }
        case node_kind::variable: os << 'x' << axis(); break;
        case node_kind::parameter: os << name(); break;
        case node_kind::add:
        case node_kind::sub: {
            if (prec >= 1) os << '(';
            child_a().print(os, 0);
            os << (kind() == node_kind::add ? " + " : " - ");
            // right operand of '-' binds one level tighter
            child_b().print(os, kind() == node_kind::sub ? 1 : 0);
            if (prec >= 1) os << ')';
            break;
        }
        case node_kind::mul:
        case node_kind::div: {
            if (prec >= 2) os << '(';
            child_a().print(os, 1);
            os << (kind() == node_kind::mul ? "*" : "/");
            child_b().print(os, 2);
            if (prec >= 2) os << ')';
            break;
        }
        case node_kind::pow: {
            bool bare = child_a().kind() == node_kind::variable ||
                        child_a().kind() == node_kind::parameter ||
                        child_a().kind() == node_kind::exp_fn ||
                        child_a().kind() == node_kind::ln_fn;
            if (bare) {
                child_a().print(os, 2);
            } else {
                os << '(';
                child_a().print(os, 0);
                os << ')';
            }
            os << '^' << exponent();
            break;
        }
        case node_kind::neg: {
            if (prec >= 1) os << '(';
            os << '-';
            // '-' applies to an atom; anything looser needs parentheses
            bool bare = child_a().kind() == node_kind::variable ||
                        child_a().kind() == node_kind::parameter ||
                        child_a().kind() == node_kind::exp_fn ||
                        child_a().kind() == node_kind::ln_fn ||
                        (child_a().kind() == node_kind::constant &&
                         child_a().value().sign() >= 0);
            if (bare) {
                child_a().print(os, 2);
            } else {
                os << '(';
                child_a().print(os, 0);
                os << ')';
            }
            if (prec >= 1) os << ')';
            break;
        }
        case node_kind::exp_fn:
        case node_kind::ln_fn: {
            os << (kind() == node_kind::exp_fn ? "exp(" : "ln(");
            child_a().print(os, 0);
            os << ')';
            break;
        }
        }
    }

    std::shared_ptr<const node> n_;
};

expr pow(const expr& a, long long k);
expr exp(const expr& a);
expr ln(const expr& a);
bool same_tree(const expr& a, const expr& b);

/// Exact symbolic partial derivative with the constructor rewrites applied.
inline expr derive(const expr& e, int axis) {
    using k = expr::node_kind;
    switch (e.kind()) {
    case k::constant:
    case k::parameter: return expr::constant(rational(0));
    case k::variable:
        return expr::constant(rational(e.axis() == axis ? 1 : 0));
    case k::add: return derive(e.child_a(), axis) + derive(e.child_b(), axis);
    case k::sub: return derive(e.child_a(), axis) - derive(e.child_b(), axis);
    case k::mul:
        return derive(e.child_a(), axis) * e.child_b() +
               e.child_a() * derive(e.child_b(), axis);
    case k::div:
        return (derive(e.child_a(), axis) * e.child_b() -
                e.child_a() * derive(e.child_b(), axis)) /
               pow(e.child_b(), 2);
    case k::pow:
        return expr::constant(rational(e.exponent())) *
               pow(e.child_a(), e.exponent() - 1) * derive(e.child_a(), axis);
    case k::neg: return -derive(e.child_a(), axis);
    case k::exp_fn: return derive(e.child_a(), axis) * e;
    case k::ln_fn: return derive(e.child_a(), axis) / e.child_a();
    }
    throw error("unreachable expr kind");
}

/// Replaces bound parameters by their rational values.
inline expr substitute(const expr& e, const bindings& b) {
    using k = expr::node_kind;
    switch (e.kind()) {
    case k::constant:
    case k::variable: return e;
    case k::parameter: {
        auto it = b.find(e.name());
        return it == b.end() ? e : expr::constant(it->second);
    }
    case k::add: return substitute(e.child_a(), b) + substitute(e.child_b(), b);
    case k::sub: return substitute(e.child_a(), b) - substitute(e.child_b(), b);
    case k::mul: return substitute(e.child_a(), b) * substitute(e.child_b(), b);
    case k::div: return substitute(e.child_a(), b) / substitute(e.child_b(), b);
    case k::pow: return pow(substitute(e.child_a(), b), e.exponent());
    case k::neg: return -substitute(e.child_a(), b);
    case k::exp_fn: return exp(substitute(e.child_a(), b));
    case k::ln_fn: return ln(substitute(e.child_a(), b));
    }
    throw error("unreachable expr kind");
}

/// Substitutes expressions for the coordinate variables (composition).
inline expr substitute_vars(const expr& e, const std::array<expr, 4>& v) {
    using k = expr::node_kind;
    switch (e.kind()) {
    case k::constant:
    case k::parameter: return e;
    case k::variable: return v[std::size_t(e.axis() - 1)];
    case k::add: return substitute_vars(e.child_a(), v) + substitute_vars(e.child_b(), v);
    case k::sub: return substitute_vars(e.child_a(), v) - substitute_vars(e.child_b(), v);
    case k::mul: return substitute_vars(e.child_a(), v) * substitute_vars(e.child_b(), v);
    case k::div: return substitute_vars(e.child_a(), v) / substitute_vars(e.child_b(), v);
    case k::pow: return pow(substitute_vars(e.child_a(), v), e.exponent());
    case k::neg: return -substitute_vars(e.child_a(), v);
    case k::exp_fn: return exp(substitute_vars(e.child_a(), v));
    case k::ln_fn: return ln(substitute_vars(e.child_a(), v));
    }
    throw error("unreachable expr kind");
}

inline void collect_parameters(const expr& e, std::set<std::string>& out) {
    using k = expr::node_kind;
    switch (e.kind()) {
    case k::constant:
    case k::variable: return;
    case k::parameter: out.insert(e.name()); return;
    case k::pow:
    case k::neg:
    case k::exp_fn:
    case k::ln_fn: collect_parameters(e.child_a(), out); return;
    default:
        collect_parameters(e.child_a(), out);
        collect_parameters(e.child_b(), out);
    }
}

} // namespace forms4
