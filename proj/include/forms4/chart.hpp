#pragma once

#include <array>

#include "forms4/errors.hpp"
#include "forms4/form.hpp"

namespace forms4 {

/// Polynomial-coefficient map R^4 -> R^4 acting as a local diffeomorphism;
/// the Jacobian is checked at the base point of each pullback.
struct chart_map {
    std::array<expr, 4> comps;

    static chart_map identity() {
        return {{expr::variable(1), expr::variable(2), expr::variable(3), expr::variable(4)}};
    }

    /// Image of a rational point; requires rational coefficient values.
    point4 apply(const point4& pt, const bindings& b = {}) const {
        return {eval_value<rational>(comps[0], pt, b), eval_value<rational>(comps[1], pt, b),
                eval_value<rational>(comps[2], pt, b), eval_value<rational>(comps[3], pt, b)};
    }
};

/// psi after phi (first phi, then psi).
inline chart_map compose(const chart_map& psi, const chart_map& phi) {
    return {{substitute_vars(psi.comps[0], phi.comps), substitute_vars(psi.comps[1], phi.comps),
             substitute_vars(psi.comps[2], phi.comps), substitute_vars(psi.comps[3], phi.comps)}};
}

namespace detail {

/// Shared pullback core once the composed coefficient jets are known.
template <class T>
form<truncated_series<T>> pullback_with(
    const std::array<truncated_series<T>, 4>& phi_jets, int degree,
    const std::vector<truncated_series<T>>& composed_coeffs) {
    using traits = scalar_traits<T>;
    using S = truncated_series<T>;
    const form_tables& t = form_tables::get();

    // 1-forms d(phi^i), order reduced by the derivative
    std::array<form<S>, 4> dphi{
        form<S>(1, {phi_jets[0].derivative(1, "pullback"), phi_jets[0].derivative(2, "pullback"),
                    phi_jets[0].derivative(3, "pullback"), phi_jets[0].derivative(4, "pullback")}),
        form<S>(1, {phi_jets[1].derivative(1, "pullback"), phi_jets[1].derivative(2, "pullback"),
                    phi_jets[1].derivative(3, "pullback"), phi_jets[1].derivative(4, "pullback")}),
        form<S>(1, {phi_jets[2].derivative(1, "pullback"), phi_jets[2].derivative(2, "pullback"),
                    phi_jets[2].derivative(3, "pullback"), phi_jets[2].derivative(4, "pullback")}),
        form<S>(1, {phi_jets[3].derivative(1, "pullback"), phi_jets[3].derivative(2, "pullback"),
                    phi_jets[3].derivative(3, "pullback"), phi_jets[3].derivative(4, "pullback")})};

    mat4<T> jac;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) jac[std::size_t(i)][std::size_t(j)] = dphi[std::size_t(i)][std::size_t(j)].value();
    if (traits::is_zero(det4(jac))) throw singular_error("pullback: singular Jacobian at base point");

    if (degree == 0) return form<S>(0, {composed_coeffs[0]});

    std::optional<form<S>> out;
    for (std::size_t idx = 0; idx < t.count(degree); ++idx) {
        const auto& I = t.tuple(degree, idx);
        form<S> w = dphi[std::size_t(I[0] - 1)];
        for (int m = 1; m < degree; ++m) w = wedge(w, dphi[std::size_t(I[std::size_t(m)] - 1)]);
        form<S> term = composed_coeffs[idx] * w;
        if (out)
            out = *out + term;
        else
            out = std::move(term);
    }
    return std::move(*out);
}

template <class T>
std::array<truncated_series<T>, 4> chart_jets(const chart_map& phi, const point4& pt, int order,
                                              const bindings& b) {
    return {eval_jet<T>(phi.comps[0], pt, order + 1, b), eval_jet<T>(phi.comps[1], pt, order + 1, b),
            eval_jet<T>(phi.comps[2], pt, order + 1, b), eval_jet<T>(phi.comps[3], pt, order + 1, b)};
}

template <class T>
std::array<truncated_series<T>, 4> displacements(const std::array<truncated_series<T>, 4>& jets) {
    using S = truncated_series<T>;
    std::array<S, 4> u = jets;
    for (auto& s : u) s.at(0) = scalar_traits<T>::zero();
    return u;
}

} // namespace detail

/// Pullback of a symbolic form: coefficients are expanded at phi(pt) and
/// composed with the chart jets; the result is a jet-mode form at pt of the
/// requested order.
template <class T>
form<truncated_series<T>> pullback(const chart_map& phi, const form<expr>& a, const point4& pt,
                                   int order, const bindings& b = {}) {
    auto jets = detail::chart_jets<T>(phi, pt, order, b);
    point4 image = phi.apply(pt, b);
    auto u = detail::displacements(jets);
    std::vector<truncated_series<T>> composed;
    composed.reserve(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        composed.push_back(compose(eval_jet<T>(a[i], image, order, b), u));
    return detail::pullback_with(jets, a.degree(), composed);
}

/// Pullback of a jet-mode form already expanded at phi(pt).
template <class T>
form<truncated_series<T>> pullback(const chart_map& phi, const form<truncated_series<T>>& a,
                                   const point4& pt, int order, const bindings& b = {}) {
    auto jets = detail::chart_jets<T>(phi, pt, order, b);
    auto u = detail::displacements(jets);
    std::vector<truncated_series<T>> composed;
    composed.reserve(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        composed.push_back(compose(a[i].truncated(order), u));
    return detail::pullback_with(jets, a.degree(), composed);
}

} // namespace forms4
