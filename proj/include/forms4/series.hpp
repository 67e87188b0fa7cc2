#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <vector>

#include "forms4/errors.hpp"
#include "forms4/grading.hpp"
#include "forms4/scalar.hpp"

namespace forms4 {

/// Truncated multivariate power series in x1..x4: a Taylor polynomial with
/// all terms of total degree <= order().  The order is the remaining
/// derivative budget; sums and products carry the minimum of the operand
/// orders, each derivative consumes one level.  Values are immutable in
/// practice: every operation returns a fresh series.
template <class T>
class truncated_series {
public:
    using traits = scalar_traits<T>;

    truncated_series() : truncated_series(0) {}

    explicit truncated_series(int order)
        : order_(check_order(order)), c_(grading::get().size_at(order), traits::zero()) {}

    static truncated_series constant(int order, T value) {
        truncated_series s(order);
        s.c_[0] = std::move(value);
        return s;
    }

    /// base + t_axis: the jet of the coordinate function x^axis recentred at
    /// a point with that coordinate equal to base.
    static truncated_series variable(int order, int axis, T base) {
        truncated_series s(order);
        s.c_[0] = std::move(base);
        if (order >= 1) {
            exponent e{0, 0, 0, 0};
            e[axis - 1] = 1;
            s.c_[grading::get().rank(e)] = traits::one();
        }
        return s;
    }

    int order() const { return order_; }
    std::size_t size() const { return c_.size(); }

    const T& operator[](std::size_t rank) const { return c_[rank]; }
    T& at(std::size_t rank) { return c_[rank]; }

    const T& coeff(const exponent& e) const {
        static const T zero = traits::zero();
        auto r = grading::get().rank(e);
        if (r < 0 || std::size_t(r) >= c_.size()) return zero;
        return c_[std::size_t(r)];
    }

    /// Constant term (the value at the expansion point).
    const T& value() const { return c_[0]; }

    bool is_zero() const {
        for (const T& x : c_)
            if (!traits::is_zero(x)) return false;
        return true;
    }

    truncated_series truncated(int new_order) const {
        if (new_order >= order_) return *this;
        truncated_series out(new_order);
        std::copy(c_.begin(), c_.begin() + out.c_.size(), out.c_.begin());
        return out;
    }

    truncated_series derivative(int axis, const char* op = "series_derive") const {
        if (order_ < 1) throw order_error(op);
        const grading& g = grading::get();
        truncated_series out(order_ - 1);
        for (std::size_t r = 1; r < c_.size(); ++r) {
            if (traits::is_zero(c_[r])) continue;
            exponent e = g.exp_of(r);
            int k = e[axis - 1];
            if (k == 0) continue;
            e[axis - 1] = std::uint8_t(k - 1);
            out.c_[g.rank(e)] += T(traits::from_rational(rational(k))) * c_[r];
        }
        return out;
    }

    friend truncated_series operator+(const truncated_series& a, const truncated_series& b) {
        truncated_series out = a.truncated(std::min(a.order_, b.order_));
        for (std::size_t r = 0; r < out.c_.size(); ++r) out.c_[r] += b.c_[r];
        return out;
    }

    friend truncated_series operator-(const truncated_series& a, const truncated_series& b) {
        truncated_series out = a.truncated(std::min(a.order_, b.order_));
        for (std::size_t r = 0; r < out.c_.size(); ++r) out.c_[r] -= b.c_[r];
        return out;
    }

    friend truncated_series operator-(const truncated_series& a) {
        truncated_series out = a;
        for (T& x : out.c_) x = -x;
        return out;
    }

    friend truncated_series operator*(const truncated_series& a, const truncated_series& b) {
        const int m = std::min(a.order_, b.order_);
        const grading& g = grading::get();
        truncated_series out(m);
        const auto& pairs = g.mul_pairs();
        const std::size_t end = g.mul_end(m);
        for (std::size_t k = 0; k < end; ++k) {
            const auto& p = pairs[k];
            const T& xa = a.c_[std::size_t(p.a)];
            if (traits::is_zero(xa)) continue;
            const T& xb = b.c_[std::size_t(p.b)];
            if (traits::is_zero(xb)) continue;
            out.c_[std::size_t(p.out)] += xa * xb;
        }
        return out;
    }

    truncated_series& operator+=(const truncated_series& o) { return *this = *this + o; }
    truncated_series& operator-=(const truncated_series& o) { return *this = *this - o; }
    truncated_series& operator*=(const truncated_series& o) { return *this = *this * o; }

    friend truncated_series operator*(const T& s, const truncated_series& a) {
        truncated_series out = a;
        for (T& x : out.c_) x = s * x;
        return out;
    }

    friend bool operator==(const truncated_series& a, const truncated_series& b) {
        return a.order_ == b.order_ && a.c_ == b.c_;
    }
    friend bool operator!=(const truncated_series& a, const truncated_series& b) {
        return !(a == b);
    }

    /// Largest coefficient magnitude; the residual metric of the test suites.
    double max_magnitude() const {
        double m = 0;
        for (const T& x : c_) m = std::max(m, traits::magnitude(x));
        return m;
    }

private:
    static int check_order(int order) {
        if (order < 0 || order > grading::max_order)
            throw error("series order out of range [0, 12]");
        return order;
    }

    int order_;
    std::vector<T> c_;
};

/// Integer power by repeated multiplication; n >= 0.
template <class T>
truncated_series<T> pow(const truncated_series<T>& a, long long n) {
    truncated_series<T> acc = truncated_series<T>::constant(a.order(), scalar_traits<T>::one());
    truncated_series<T> base = a;
    while (n > 0) {
        if (n & 1) acc = acc * base;
        if ((n >>= 1) != 0) base = base * base;
    }
    return acc;
}

/// 1 / a.  Requires a non-zero constant term; preserves the order.
template <class T>
truncated_series<T> reciprocal(const truncated_series<T>& a) {
    using traits = scalar_traits<T>;
    if (traits::is_zero(a.value()))
        throw singular_error("reciprocal of series with zero constant term");
    const int d = a.order();
    T inv0 = traits::invert(a.value());
    // 1/a = (1/c0) * sum_k (-(a - c0)/c0)^k
    truncated_series<T> w = inv0 * a;
    w.at(0) -= traits::one();
    w = -w;
    truncated_series<T> acc = truncated_series<T>::constant(d, traits::one());
    truncated_series<T> term = acc;
    for (int k = 1; k <= d; ++k) {
        term = term * w;
        acc += term;
    }
    return inv0 * acc;
}

/// exp(a) by composing the Maclaurin series of exp with a - a(0).  On exact
/// backends the constant term must make exp representable (zero for
/// rationals); otherwise a backend_error directs the caller to floats.
template <class T>
truncated_series<T> exp(const truncated_series<T>& a) {
    using traits = scalar_traits<T>;
    const int d = a.order();
    T e0 = traits::exp_constant(a.value());
    truncated_series<T> u = a;
    u.at(0) = traits::zero();
    truncated_series<T> acc = truncated_series<T>::constant(d, traits::one());
    truncated_series<T> term = acc;
    for (int k = 1; k <= d; ++k) {
        term = term * u;
        term = traits::from_rational(rational(1, k)) * term;
        acc += term;
    }
    return e0 * acc;
}

/// ln(a).  Exact backends require constant term 1; floats require a
/// positive constant term.
template <class T>
truncated_series<T> log(const truncated_series<T>& a) {
    using traits = scalar_traits<T>;
    if (traits::is_zero(a.value()))
        throw singular_error("ln of series with zero constant term");
    const int d = a.order();
    T l0 = traits::log_constant(a.value());
    T inv0 = traits::invert(a.value());
    truncated_series<T> w = inv0 * a;
    w.at(0) = traits::zero();
    truncated_series<T> acc = truncated_series<T>::constant(d, l0);
    truncated_series<T> term = truncated_series<T>::constant(d, traits::one());
    for (int k = 1; k <= d; ++k) {
        term = term * w;
        rational c(k % 2 == 1 ? 1 : -1, k);
        acc += traits::from_rational(c) * term;
    }
    return acc;
}

/// outer(inner1, ..., inner4), each inner with zero constant term.  The
/// result order is the minimum of all operand orders.
template <class T>
truncated_series<T> compose(const truncated_series<T>& outer,
                            const std::array<truncated_series<T>, n_vars>& inner) {
    using traits = scalar_traits<T>;
    int m = outer.order();
    for (const auto& u : inner) {
        if (!traits::is_zero(u.value()))
            throw error("series_compose requires inner series with zero constant term");
        m = std::min(m, u.order());
    }
    const grading& g = grading::get();
    std::array<truncated_series<T>, n_vars> u{
        inner[0].truncated(m), inner[1].truncated(m), inner[2].truncated(m),
        inner[3].truncated(m)};

    // Monomial products of the inner series, memoized along the chain
    // e -> e - delta_i for the first non-zero axis.
    std::vector<std::optional<truncated_series<T>>> mono(g.size_at(m));
    mono[0] = truncated_series<T>::constant(m, traits::one());
    auto monomial = [&](auto&& self, std::size_t r) -> const truncated_series<T>& {
        if (mono[r]) return *mono[r];
        exponent e = g.exp_of(r);
        int axis = 0;
        while (e[axis] == 0) ++axis;
        exponent parent = e;
        parent[axis] -= 1;
        const truncated_series<T>& p = self(self, std::size_t(g.rank(parent)));
        mono[r] = p * u[axis];
        return *mono[r];
    };

    truncated_series<T> acc(m);
    const std::size_t n = std::min(outer.size(), g.size_at(m));
    for (std::size_t r = 0; r < n; ++r) {
        if (traits::is_zero(outer[r])) continue;
        acc += outer[r] * monomial(monomial, r);
    }
    return acc;
}

} // namespace forms4
