#pragma once

#include <algorithm>
#include <cmath>
#include <utility>

#include "forms4/errors.hpp"
#include "forms4/expr.hpp"
#include "forms4/series.hpp"

namespace forms4 {

/// Taylor expansion of an expression about a rational point, truncated at
/// the given order.  Exact backends succeed iff every exp argument has zero
/// constant term after recentring and every ln argument has constant term 1;
/// otherwise a backend_error directs the caller to the float backend.
template <class T>
truncated_series<T> eval_jet(const expr& e, const point4& point, int order,
                             const bindings& b = {}) {
    using traits = scalar_traits<T>;
    using S = truncated_series<T>;
    using k = expr::node_kind;
    switch (e.kind()) {
    case k::constant: return S::constant(order, traits::from_rational(e.value()));
    case k::variable:
        return S::variable(order, e.axis(),
                           traits::from_rational(point[std::size_t(e.axis() - 1)]));
    case k::parameter: {
        auto it = b.find(e.name());
        if (it == b.end()) throw error("unbound parameter '" + e.name() + "'");
        return S::constant(order, traits::from_rational(it->second));
    }
    case k::add: return eval_jet<T>(e.child_a(), point, order, b) + eval_jet<T>(e.child_b(), point, order, b);
    case k::sub: return eval_jet<T>(e.child_a(), point, order, b) - eval_jet<T>(e.child_b(), point, order, b);
    case k::mul: return eval_jet<T>(e.child_a(), point, order, b) * eval_jet<T>(e.child_b(), point, order, b);
    case k::div:
        return eval_jet<T>(e.child_a(), point, order, b) *
               reciprocal(eval_jet<T>(e.child_b(), point, order, b));
    case k::pow: {
        S base = eval_jet<T>(e.child_a(), point, order, b);
        long long n = e.exponent();
        if (n >= 0) return pow(base, n);
        return pow(reciprocal(base), -n);
    }
    case k::neg: return -eval_jet<T>(e.child_a(), point, order, b);
    case k::exp_fn: return exp(eval_jet<T>(e.child_a(), point, order, b));
    case k::ln_fn: return log(eval_jet<T>(e.child_a(), point, order, b));
    }
    throw error("unreachable expr kind");
}

/// Value of an expression at a point (the order-0 jet).
template <class T>
T eval_value(const expr& e, const point4& point, const bindings& b = {}) {
    return eval_jet<T>(e, point, 0, b).value();
}

/// Float evaluation that also reports the largest magnitude seen at any
/// subexpression, the scale against which relative zero tolerances apply.
struct scaled_value {
    double value;
    double scale;
};

inline scaled_value eval_double_scaled(const expr& e, const std::array<double, 4>& point,
                                       const bindings& b = {}) {
    using k = expr::node_kind;
    auto combine = [](double v, const scaled_value& x, const scaled_value& y) {
        return scaled_value{v, std::max({std::abs(v), x.scale, y.scale})};
    };
    switch (e.kind()) {
    case k::constant: {
        double v = e.value().to_double();
        return {v, std::abs(v)};
    }
    case k::variable: {
        double v = point[std::size_t(e.axis() - 1)];
        return {v, std::abs(v)};
    }
    case k::parameter: {
        auto it = b.find(e.name());
        if (it == b.end()) throw error("unbound parameter '" + e.name() + "'");
        double v = it->second.to_double();
        return {v, std::abs(v)};
    }
    case k::add: {
        auto x = eval_double_scaled(e.child_a(), point, b);
        auto y = eval_double_scaled(e.child_b(), point, b);
        return combine(x.value + y.value, x, y);
    }
    case k::sub: {
        auto x = eval_double_scaled(e.child_a(), point, b);
        auto y = eval_double_scaled(e.child_b(), point, b);
        return combine(x.value - y.value, x, y);
    }
    case k::mul: {
        auto x = eval_double_scaled(e.child_a(), point, b);
        auto y = eval_double_scaled(e.child_b(), point, b);
        return combine(x.value * y.value, x, y);
    }
    case k::div: {
        auto x = eval_double_scaled(e.child_a(), point, b);
        auto y = eval_double_scaled(e.child_b(), point, b);
        if (y.value == 0.0) throw singular_error("division by zero");
        return combine(x.value / y.value, x, y);
    }
    case k::pow: {
        auto x = eval_double_scaled(e.child_a(), point, b);
        if (x.value == 0.0 && e.exponent() < 0)
            throw singular_error("0 raised to a negative power");
        double v = std::pow(x.value, double(e.exponent()));
        return {v, std::max(std::abs(v), x.scale)};
    }
    case k::neg: {
        auto x = eval_double_scaled(e.child_a(), point, b);
        return {-x.value, x.scale};
    }
    case k::exp_fn: {
        auto x = eval_double_scaled(e.child_a(), point, b);
        double v = std::exp(x.value);
        return {v, std::max(std::abs(v), x.scale)};
    }
    case k::ln_fn: {
        auto x = eval_double_scaled(e.child_a(), point, b);
        if (x.value <= 0.0) throw singular_error("ln of non-positive value");
        double v = std::log(x.value);
        return {v, std::max(std::abs(v), x.scale)};
    }
    }
    throw error("unreachable expr kind");
}

} // namespace forms4
