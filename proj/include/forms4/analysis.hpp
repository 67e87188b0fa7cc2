#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "forms4/chart.hpp"
#include "forms4/form.hpp"
#include "forms4/linalg.hpp"
#include "forms4/zero_test.hpp"

namespace forms4 {

// -- series linear algebra -----------------------------------------------------

/// Reusable solver for 4x4 systems with truncated-series entries, by
/// adjugate and reciprocal determinant.  Construction fails on a determinant
/// vanishing at the base point.
template <class T>
struct linear_solver4 {
    using S = truncated_series<T>;

    mat4<S> adj;
    S rdet;

    static linear_solver4 make(const mat4<S>& m, const char* who) {
        S det = det4(m);
        if (scalar_traits<T>::is_zero(det.value()))
            throw degenerate_error(std::string(who) + ": singular system at base point");
        return linear_solver4{adjugate4(m), reciprocal(det)};
    }

    std::array<S, 4> solve(const std::array<S, 4>& rhs) const {
        std::array<std::optional<S>, 4> acc;
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) {
                S term = adj[std::size_t(i)][std::size_t(j)] * rhs[std::size_t(j)];
                if (acc[std::size_t(i)])
                    acc[std::size_t(i)] = *acc[std::size_t(i)] + term;
                else
                    acc[std::size_t(i)] = std::move(term);
            }
            acc[std::size_t(i)] = rdet * *acc[std::size_t(i)];
        }
        return {std::move(*acc[0]), std::move(*acc[1]), std::move(*acc[2]), std::move(*acc[3])};
    }
};

/// Matrix of the map alpha -> alpha ^ Omega from 1-forms to 3-forms, rows in
/// 3-tuple order (123),(124),(134),(234).
template <class T>
mat4<truncated_series<T>> wedge_system_matrix(const form<truncated_series<T>>& omega2) {
    using S = truncated_series<T>;
    if (omega2.degree() != 2) throw error("wedge_system_matrix needs a 2-form");
    const form_tables& t = form_tables::get();
    const int order = omega2[0].order();
    mat4<S> m{{{S(order), S(order), S(order), S(order)},
               {S(order), S(order), S(order), S(order)},
               {S(order), S(order), S(order), S(order)},
               {S(order), S(order), S(order), S(order)}}};
    for (std::size_t row = 0; row < 4; ++row) {
        const auto& K = t.tuple(3, row);
        unsigned mk = t.mask(3, row);
        for (int pos = 0; pos < 3; ++pos) {
            int axis = K[std::size_t(pos)];
            std::size_t src = t.index_of_mask(mk & ~(1u << (axis - 1)));
            S v = omega2[src];
            if (pos % 2 == 1) v = -v;
            m[row][std::size_t(axis - 1)] = std::move(v);
        }
    }
    return m;
}

/// Full skew coefficient matrix of a 2-form.
template <class T>
mat4<truncated_series<T>> skew_matrix(const form<truncated_series<T>>& omega2) {
    using S = truncated_series<T>;
    if (omega2.degree() != 2) throw error("skew_matrix needs a 2-form");
    const form_tables& t = form_tables::get();
    const int order = omega2[0].order();
    mat4<S> m{{{S(order), S(order), S(order), S(order)},
               {S(order), S(order), S(order), S(order)},
               {S(order), S(order), S(order), S(order)},
               {S(order), S(order), S(order), S(order)}}};
    for (std::size_t c = 0; c < omega2.size(); ++c) {
        const auto& ij = t.tuple(2, c);
        m[std::size_t(ij[0] - 1)][std::size_t(ij[1] - 1)] = omega2[c];
        m[std::size_t(ij[1] - 1)][std::size_t(ij[0] - 1)] = -omega2[c];
    }
    return m;
}

template <class T>
std::array<T, 6> coefficient_values(const form<truncated_series<T>>& omega2) {
    return {omega2[0].value(), omega2[1].value(), omega2[2].value(),
            omega2[3].value(), omega2[4].value(), omega2[5].value()};
}

template <class T>
void require_rank4(const form<truncated_series<T>>& omega2, const char* who) {
    if (rank_of_2form(omega2) != 4)
        throw degenerate_error(std::string(who) + ": 2-form is not of rank 4 at the point");
}

// -- attached 1-forms ----------------------------------------------------------

/// The unique 1-form with alpha ^ Omega = d Omega, by solving the 4x4 wedge
/// system.  Input jets of order D give a result of order D-1.
template <class T>
form<truncated_series<T>> compute_omega(const form<truncated_series<T>>& omega2) {
    require_rank4(omega2, "compute_omega");
    auto solver = linear_solver4<T>::make(wedge_system_matrix(omega2), "compute_omega");
    form<truncated_series<T>> d = exterior_derivative(omega2, "compute_omega");
    auto x = solver.solve({d[0], d[1], d[2], d[3]});
    return form<truncated_series<T>>(1, {std::move(x[0]), std::move(x[1]), std::move(x[2]),
                                         std::move(x[3])});
}

/// Second route: the field X with i_X(Omega ^ Omega) = d Omega gives
/// omega = 2 i_X Omega.
template <class T>
form<truncated_series<T>> compute_omega_contraction(const form<truncated_series<T>>& omega2) {
    using S = truncated_series<T>;
    require_rank4(omega2, "compute_omega");
    S p = wedge(omega2, omega2)[0]; // volume coefficient, twice the Pfaffian
    S rp = reciprocal(p);
    form<S> d = exterior_derivative(omega2, "compute_omega");
    // i_X vol components: (123) -> -X4, (124) -> X3, (134) -> -X2, (234) -> X1
    vector_field<S> x{{rp * d[3], -(rp * d[2]), rp * d[1], -(rp * d[0])}};
    form<S> ix = interior_product(x, omega2);
    T two = scalar_traits<T>::from_rational(rational(2));
    return form<S>(1, {two * ix[0], two * ix[1], two * ix[2], two * ix[3]});
}

/// The unique 1-form with phi ^ Omega = omega ^ d omega.  Consumes two
/// derivative levels.
template <class T>
form<truncated_series<T>> compute_phi(const form<truncated_series<T>>& omega2) {
    require_rank4(omega2, "compute_phi");
    auto solver = linear_solver4<T>::make(wedge_system_matrix(omega2), "compute_phi");
    form<truncated_series<T>> w = compute_omega(omega2);
    form<truncated_series<T>> rhs = wedge(w, exterior_derivative(w, "compute_phi"));
    auto x = solver.solve({rhs[0], rhs[1], rhs[2], rhs[3]});
    return form<truncated_series<T>>(1, {std::move(x[0]), std::move(x[1]), std::move(x[2]),
                                         std::move(x[3])});
}

// -- scalar invariants ----------------------------------------------------------

/// I as a series: d omega ^ d omega = I * Omega ^ Omega.
template <class T>
truncated_series<T> compute_I_series(const form<truncated_series<T>>& omega2) {
    require_rank4(omega2, "compute_I");
    form<truncated_series<T>> w = compute_omega(omega2);
    form<truncated_series<T>> dw = exterior_derivative(w, "compute_I");
    truncated_series<T> num = wedge(dw, dw)[0];
    truncated_series<T> den = wedge(omega2, omega2)[0];
    return num * reciprocal(den.truncated(num.order()));
}

template <class T>
T compute_I(const form<truncated_series<T>>& omega2) {
    return compute_I_series(omega2).value();
}

/// A_Omega and the characteristic-polynomial residual of Prop-style identity
/// det(lambda id - A) = (lambda^2 + I)^2.
template <class T>
struct invariant_record {
    T I;
    T pfaffian_value;
    mat4<T> A;
    std::array<T, 4> char_residual; // lambda^3..lambda^0 coefficients of the difference
    double char_residual_magnitude;
    bool char_residual_zero;
};

template <class T>
invariant_record<T> compute_A(const form<truncated_series<T>>& omega2) {
    using traits = scalar_traits<T>;
    require_rank4(omega2, "compute_A");
    auto f6 = coefficient_values(omega2);
    form<truncated_series<T>> w = compute_omega(omega2);
    form<truncated_series<T>> dw = exterior_derivative(w, "compute_A");

    mat4<T> f{}, wv{};
    const form_tables& t = form_tables::get();
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            f[std::size_t(i)][std::size_t(j)] = traits::zero();
            wv[std::size_t(i)][std::size_t(j)] = traits::zero();
        }
    for (std::size_t c = 0; c < 6; ++c) {
        const auto& ij = t.tuple(2, c);
        f[std::size_t(ij[0] - 1)][std::size_t(ij[1] - 1)] = f6[c];
        f[std::size_t(ij[1] - 1)][std::size_t(ij[0] - 1)] = -f6[c];
        T dv = dw[c].value();
        wv[std::size_t(ij[0] - 1)][std::size_t(ij[1] - 1)] = dv;
        wv[std::size_t(ij[1] - 1)][std::size_t(ij[0] - 1)] = -dv;
    }

    // A = F^{-1} W
    T det = det4(f);
    T rdet = traits::invert(det);
    mat4<T> adj = adjugate4(f);
    mat4<T> a{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            T acc = traits::zero();
            for (int k = 0; k < 4; ++k)
                acc = acc + adj[std::size_t(i)][std::size_t(k)] * wv[std::size_t(k)][std::size_t(j)];
            a[std::size_t(i)][std::size_t(j)] = rdet * acc;
        }

    // char poly det(lambda id - A) = l^4 - t1 l^3 + t2 l^2 - t3 l + t4
    T t1 = a[0][0] + a[1][1] + a[2][2] + a[3][3];
    T t2 = traits::zero();
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            t2 = t2 + (a[std::size_t(i)][std::size_t(i)] * a[std::size_t(j)][std::size_t(j)] -
                       a[std::size_t(i)][std::size_t(j)] * a[std::size_t(j)][std::size_t(i)]);
    T t3 = traits::zero();
    for (int skip = 0; skip < 4; ++skip) {
        std::array<int, 3> idx = detail::complement_of(skip);
        t3 = t3 + det3_of(a, idx, idx);
    }
    T t4 = det4(a);

    invariant_record<T> rec{compute_I(omega2), pfaffian(f6), a,
                            {traits::zero(), traits::zero(), traits::zero(), traits::zero()},
                            0.0, false};
    // difference against (l^2 + I)^2 = l^4 + 2I l^2 + I^2
    rec.char_residual[0] = -t1;
    rec.char_residual[1] = t2 - (rec.I + rec.I);
    rec.char_residual[2] = -t3;
    rec.char_residual[3] = t4 - rec.I * rec.I;
    double m = 0;
    bool all_zero = true;
    for (const T& c : rec.char_residual) {
        m = std::max(m, traits::magnitude(c));
        all_zero = all_zero && traits::is_zero(c);
    }
    rec.char_residual_magnitude = m;
    rec.char_residual_zero = all_zero;
    return rec;
}

// -- type determination ----------------------------------------------------------

enum class germ_type { degenerate, type0, type1, type2, type3, type4 };

inline const char* to_string(germ_type t) {
    switch (t) {
    case germ_type::degenerate: return "degenerate";
    case germ_type::type0: return "0";
    case germ_type::type1: return "1";
    case germ_type::type2: return "2";
    case germ_type::type3: return "3";
    case germ_type::type4: return "4";
    }
    return "?";
}

struct probe_options {
    int count = 16;
    rational radius{1, 32};
    std::uint64_t seed = 0xf0a51u;
};

struct probe_sample {
    point4 point;
    int rank = -1;
    std::optional<int> omega_class;
    std::optional<int> phi_class;
    bool omega_nonzero = false;
    bool exact = true; // false when evaluation fell back to floats
};

struct type_verdict {
    int rank = 0;
    germ_type type = germ_type::degenerate;
    std::optional<int> subtype; // 3.k
    bool constancy_certified = false;
    std::vector<probe_sample> samples;
    std::string note;
};

namespace detail {

template <class P>
probe_sample classify_at(const form<expr>& omega2, const point4& pt, const bindings& b,
                         bool want_phi) {
    probe_sample s;
    s.point = pt;
    s.exact = scalar_traits<P>::is_exact;
    const int order = want_phi ? 3 : 2;
    form<truncated_series<P>> jets = jet_form<P>(omega2, pt, order, b);
    s.rank = rank_of_2form(jets);
    if (s.rank != 4) return s;
    form<truncated_series<P>> w = compute_omega(jets);
    for (std::size_t i = 0; i < 4; ++i)
        s.omega_nonzero = s.omega_nonzero || !scalar_traits<P>::is_zero(w[i].value());
    s.omega_class = class_of_1form(w);
    if (want_phi) s.phi_class = class_of_1form(compute_phi(jets));
    return s;
}

/// Exact first, float fallback where exactness is unattainable.
template <class T>
probe_sample classify_with_fallback(const form<expr>& omega2, const point4& pt,
                                    const bindings& b, bool want_phi) {
    if constexpr (scalar_traits<T>::is_exact) {
        try {
            return classify_at<exp_rational>(omega2, pt, b, want_phi);
        } catch (const backend_error&) {
            return classify_at<double>(omega2, pt, b, want_phi);
        }
    } else {
        return classify_at<double>(omega2, pt, b, want_phi);
    }
}

inline point4 probe_point(std::mt19937_64& g, const rational& radius) {
    point4 p;
    std::uniform_int_distribution<long long> dist(-(1 << 20), 1 << 20);
    for (auto& x : p) x = radius * rational(dist(g), 1 << 20);
    return p;
}

} // namespace detail

/// Pointwise type of the germ with a sampled constancy certificate.
/// T picks the backend: exact backends probe in the exponential extension
/// field and fall back to floats only where exactness is impossible.
template <class T>
type_verdict determine_type(const form<expr>& omega2, const point4& pt, int order,
                            const bindings& b = {}, const probe_options& probe = {}) {
    if (omega2.degree() != 2) throw error("determine_type needs a 2-form");
    if (order < 2) throw order_error("determine_type (needs order >= 2)");
    type_verdict v;

    probe_sample base = detail::classify_with_fallback<T>(omega2, pt, b, true);
    v.rank = base.rank;
    if (v.rank != 4) {
        v.type = germ_type::degenerate;
        v.note = "rank < 4 at base point";
        return v;
    }

    // closedness: d Omega = 0 decided by the structural zero test
    form<expr> d = exterior_derivative(omega2);
    bool all_zero = true, any_nonzero = false;
    for (std::size_t i = 0; i < d.size(); ++i) {
        zero_verdict z = is_zero(substitute(d[i], b));
        all_zero = all_zero && z.is_zero();
        any_nonzero = any_nonzero || z.is_non_zero();
    }
    std::mt19937_64 gen(probe.seed);
    if (all_zero) {
        v.type = germ_type::type0;
        bool ok = true;
        for (int i = 0; i < probe.count; ++i) {
            point4 q = add_points(pt, detail::probe_point(gen, probe.radius));
            probe_sample s = detail::classify_with_fallback<T>(omega2, q, b, false);
            ok = ok && s.rank == 4;
            v.samples.push_back(std::move(s));
        }
        v.constancy_certified = ok;
        return v;
    }

    // membership in the studied family: omega must not vanish at the point
    if (!base.omega_nonzero) {
        v.type = germ_type::degenerate;
        v.note = any_nonzero ? "omega vanishes at base point with d Omega != 0"
                             : "omega vanishes at base point; closedness undecided";
        return v;
    }

    int t = *base.omega_class;
    v.type = t == 1   ? germ_type::type1
             : t == 2 ? germ_type::type2
             : t == 3 ? germ_type::type3
             : t == 4 ? germ_type::type4
                      : germ_type::degenerate;
    if (t == 0) {
        v.note = "omega class 0 at base point";
        return v;
    }

    bool want_phi = (t == 3);
    if (want_phi) v.subtype = base.phi_class;

    bool ok = true;
    for (int i = 0; i < probe.count; ++i) {
        point4 q = add_points(pt, detail::probe_point(gen, probe.radius));
        probe_sample s = detail::classify_with_fallback<T>(omega2, q, b, want_phi);
        ok = ok && s.rank == 4 && s.omega_class && *s.omega_class == t;
        if (want_phi) ok = ok && s.phi_class && *s.phi_class == *base.phi_class;
        v.samples.push_back(std::move(s));
    }
    v.constancy_certified = ok;
    return v;
}

// -- finer type-3 classification --------------------------------------------------

enum class type3_label { k30, k31_compatible, k32_compatible, k33, k34, indeterminate };

inline const char* to_string(type3_label l) {
    switch (l) {
    case type3_label::k30: return "3.0";
    case type3_label::k31_compatible: return "3.1-compatible";
    case type3_label::k32_compatible: return "3.2-compatible";
    case type3_label::k33: return "3.3";
    case type3_label::k34: return "3.4";
    case type3_label::indeterminate: return "indeterminate";
    }
    return "?";
}

/// Subtype conditions for a 2-form already in the scaled shape
/// F^{-1}(exp((1+x1)x3) dx1^dx2 + dx3^dx4); requires F(0) = 1.
inline type3_label classify_type3_scaling(const expr& f_in, const bindings& b = {},
                                          const zero_options& zopt = {}) {
    expr f = substitute(f_in, b);
    const point4 origin{rational(0), rational(0), rational(0), rational(0)};
    if (eval_value<exp_rational>(f, origin) != exp_rational(rational(1)))
        throw error("classify_type3_scaling requires F(0) = 1");

    expr f2 = derive(f, 2), f4 = derive(f, 4);
    zero_verdict z2 = is_zero(f2, {}, zopt);
    zero_verdict z4 = is_zero(f4, {}, zopt);
    if (z2.is_zero() && z4.is_zero()) return type3_label::k30;
    if (z2.kind == zero_kind::unknown || z4.kind == zero_kind::unknown)
        return type3_label::indeterminate;

    zero_verdict z31 = is_zero(f - (expr::constant(rational(1)) + expr::variable(4)), {}, zopt);
    if (z31.is_zero()) return type3_label::k31_compatible;
    if (z31.kind == zero_kind::unknown) return type3_label::indeterminate;

    if (z4.is_zero()) return type3_label::k32_compatible;

    expr f22 = derive(f2, 2), f24 = derive(f2, 4), f44 = derive(f4, 4);
    exp_rational g22 = eval_value<exp_rational>(f22, origin);
    exp_rational g24 = eval_value<exp_rational>(f24, origin);
    exp_rational g44 = eval_value<exp_rational>(f44, origin);
    exp_rational g2 = eval_value<exp_rational>(f2, origin);
    exp_rational g4 = eval_value<exp_rational>(f4, origin);

    zero_verdict hess = is_zero(f22 * f44 - f24 * f24, {}, zopt);
    // the first displayed quantity is a sum of two squares: positive unless
    // both vanish
    bool first_positive =
        !((g2 * g24 - g4 * g22).is_zero() && (g2 * g44 - g4 * g24).is_zero());
    if (hess.is_zero() && first_positive) return type3_label::k33;
    if (!(g22 * g44 - g24 * g24).is_zero()) return type3_label::k34;
    return type3_label::indeterminate;
}

} // namespace forms4
