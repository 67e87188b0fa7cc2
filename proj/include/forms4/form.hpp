#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <vector>

#include "forms4/errors.hpp"
#include "forms4/eval.hpp"
#include "forms4/expr.hpp"
#include "forms4/linalg.hpp"
#include "forms4/series.hpp"

namespace forms4 {

/// Strictly increasing index tuples of {1..4} by degree, addressed both by
/// position (lexicographic) and by the bitmask of their members.
class form_tables {
public:
    static const form_tables& get() {
        static const form_tables t;
        return t;
    }

    static constexpr std::array<std::size_t, 6> counts{1, 4, 6, 4, 1, 0};

    std::size_t count(int degree) const {
        return degree >= 0 && degree <= 4 ? counts[std::size_t(degree)] : 0;
    }

    /// Members of tuple #idx of the given degree, ascending; unused slots 0.
    const std::array<int, 4>& tuple(int degree, std::size_t idx) const {
        return tuples_[std::size_t(degree)][idx];
    }

    unsigned mask(int degree, std::size_t idx) const { return masks_[std::size_t(degree)][idx]; }

    std::size_t index_of_mask(unsigned mask) const { return mask_index_[mask]; }

    /// Sign of sorting the concatenation of two disjoint ascending tuples.
    static int merge_sign(const std::array<int, 4>& a, int na, const std::array<int, 4>& b, int nb) {
        int inversions = 0;
        for (int i = 0; i < na; ++i)
            for (int j = 0; j < nb; ++j)
                if (b[std::size_t(j)] < a[std::size_t(i)]) ++inversions;
        return inversions % 2 == 0 ? 1 : -1;
    }

private:
    form_tables() {
        std::array<std::vector<std::array<int, 4>>, 5> by_degree;
        for (unsigned m = 0; m < 16; ++m) {
            int deg = __builtin_popcount(m);
            std::array<int, 4> t{0, 0, 0, 0};
            int p = 0;
            for (int i = 1; i <= 4; ++i)
                if (m & (1u << (i - 1))) t[std::size_t(p++)] = i;
            by_degree[std::size_t(deg)].push_back(t);
        }
        // lexicographic tuple order within each degree: 12,13,14,23,24,34
        for (int deg = 0; deg <= 4; ++deg) {
            auto& list = by_degree[std::size_t(deg)];
            std::sort(list.begin(), list.end());
            for (const auto& t : list) {
                unsigned m = 0;
                for (int i = 0; i < deg; ++i) m |= 1u << (t[std::size_t(i)] - 1);
                mask_index_[m] = tuples_[std::size_t(deg)].size();
                tuples_[std::size_t(deg)].push_back(t);
                masks_[std::size_t(deg)].push_back(m);
            }
        }
    }

    std::array<std::vector<std::array<int, 4>>, 5> tuples_;
    std::array<std::vector<unsigned>, 5> masks_;
    std::array<std::size_t, 16> mask_index_{};
};

/// Differential k-form on a 4-chart.  Coefficients are indexed by the
/// strictly increasing tuples of form_tables; the coefficient type C is
/// either expr (symbolic mode) or truncated_series<T> (jet mode).
template <class C>
class form {
public:
    form(int degree, std::vector<C> comps) : degree_(degree), comps_(std::move(comps)) {
        if (degree_ < 0) throw error("negative form degree");
        if (comps_.size() != form_tables::get().count(degree_))
            throw error("wrong component count for form degree");
    }

    int degree() const { return degree_; }
    std::size_t size() const { return comps_.size(); }
    const C& operator[](std::size_t i) const { return comps_[i]; }
    C& at(std::size_t i) { return comps_[i]; }
    const std::vector<C>& components() const { return comps_; }

    friend form operator+(const form& a, const form& b) {
        if (a.degree_ != b.degree_) throw error("degree mismatch in form sum");
        std::vector<C> out;
        out.reserve(a.comps_.size());
        for (std::size_t i = 0; i < a.comps_.size(); ++i) out.push_back(a.comps_[i] + b.comps_[i]);
        return form(a.degree_, std::move(out));
    }
    friend form operator-(const form& a, const form& b) {
        if (a.degree_ != b.degree_) throw error("degree mismatch in form difference");
        std::vector<C> out;
        out.reserve(a.comps_.size());
        for (std::size_t i = 0; i < a.comps_.size(); ++i) out.push_back(a.comps_[i] - b.comps_[i]);
        return form(a.degree_, std::move(out));
    }
    friend form operator-(const form& a) {
        std::vector<C> out;
        out.reserve(a.comps_.size());
        for (const C& c : a.comps_) out.push_back(-c);
        return form(a.degree_, std::move(out));
    }
    friend form operator*(const C& s, const form& a) {
        std::vector<C> out;
        out.reserve(a.comps_.size());
        for (const C& c : a.comps_) out.push_back(s * c);
        return form(a.degree_, std::move(out));
    }

private:
    int degree_;
    std::vector<C> comps_;
};

/// Vector field on a 4-chart with the same coefficient modes as form.
template <class C>
struct vector_field {
    std::array<C, 4> comps;

    const C& operator[](std::size_t i) const { return comps[i]; }
};

// -- coefficient-mode glue ---------------------------------------------------

inline expr coef_derive(const expr& e, int axis, const char* = "") { return derive(e, axis); }
template <class T>
truncated_series<T> coef_derive(const truncated_series<T>& s, int axis, const char* op) {
    return s.derivative(axis, op);
}

inline bool coef_probably_zero(const expr& e) { return e.is_constant_equal(rational(0)); }
template <class T>
bool coef_probably_zero(const truncated_series<T>& s) {
    return s.is_zero();
}

// -- exterior algebra ---------------------------------------------------------

/// Graded-antisymmetric wedge product; degrees above 4 give the empty form.
template <class C>
form<C> wedge(const form<C>& a, const form<C>& b) {
    const int k = a.degree() + b.degree();
    if (k > 4) return form<C>(k > 5 ? 5 : k, {});
    const form_tables& t = form_tables::get();
    std::vector<std::optional<C>> acc(t.count(k));
    for (std::size_t ia = 0; ia < a.size(); ++ia) {
        unsigned ma = t.mask(a.degree(), ia);
        for (std::size_t ib = 0; ib < b.size(); ++ib) {
            unsigned mb = t.mask(b.degree(), ib);
            if (ma & mb) continue;
            int sign = form_tables::merge_sign(t.tuple(a.degree(), ia), a.degree(),
                                               t.tuple(b.degree(), ib), b.degree());
            C term = a[ia] * b[ib];
            if (sign < 0) term = -term;
            std::size_t out = t.index_of_mask(ma | mb);
            if (acc[out])
                acc[out] = *acc[out] + term;
            else
                acc[out] = std::move(term);
        }
    }
    std::vector<C> comps;
    comps.reserve(acc.size());
    for (auto& c : acc) comps.push_back(std::move(*c));
    return form<C>(k, std::move(comps));
}

/// d: degree k -> k+1 with the convention that the coefficient of
/// dx^i ^ dx^j ^ dx^k (i<j<k) of a 2-form F is F_jk,i - F_ik,j + F_ij,k.
template <class C>
form<C> exterior_derivative(const form<C>& a, const char* op = "exterior_derivative") {
    const int k = a.degree();
    if (k >= 4) return form<C>(5, {});
    const form_tables& t = form_tables::get();
    std::vector<std::optional<C>> acc(t.count(k + 1));
    for (std::size_t out = 0; out < t.count(k + 1); ++out) {
        const auto& K = t.tuple(k + 1, out);
        unsigned mk = t.mask(k + 1, out);
        for (int m = 0; m <= k; ++m) {
            int axis = K[std::size_t(m)];
            std::size_t src = t.index_of_mask(mk & ~(1u << (axis - 1)));
            C term = coef_derive(a[src], axis, op);
            if (m % 2 == 1) term = -term;
            if (acc[out])
                acc[out] = *acc[out] + term;
            else
                acc[out] = std::move(term);
        }
    }
    std::vector<C> comps;
    comps.reserve(acc.size());
    for (auto& c : acc) comps.push_back(std::move(*c));
    return form<C>(k + 1, std::move(comps));
}

/// Interior product contracting the first slot.
template <class C>
form<C> interior_product(const vector_field<C>& x, const form<C>& a) {
    const int k = a.degree();
    if (k < 1 || k > 4) throw error("interior_product needs degree 1..4");
    const form_tables& t = form_tables::get();
    std::vector<std::optional<C>> acc(t.count(k - 1));
    for (std::size_t ia = 0; ia < a.size(); ++ia) {
        const auto& I = t.tuple(k, ia);
        unsigned mi = t.mask(k, ia);
        for (int m = 0; m < k; ++m) {
            int axis = I[std::size_t(m)];
            std::size_t out = t.index_of_mask(mi & ~(1u << (axis - 1)));
            C term = x.comps[std::size_t(axis - 1)] * a[ia];
            if (m % 2 == 1) term = -term;
            if (acc[out])
                acc[out] = *acc[out] + term;
            else
                acc[out] = std::move(term);
        }
    }
    std::vector<C> comps;
    comps.reserve(acc.size());
    for (auto& c : acc) comps.push_back(std::move(*c));
    return form<C>(k - 1, std::move(comps));
}

/// [X, Y]^j = sum_i X^i d_i Y^j - Y^i d_i X^j.
template <class C>
vector_field<C> lie_bracket(const vector_field<C>& x, const vector_field<C>& y,
                            const char* op = "lie_bracket") {
    std::array<std::optional<C>, 4> acc;
    for (int j = 0; j < 4; ++j) {
        for (int i = 0; i < 4; ++i) {
            C term = x.comps[std::size_t(i)] * coef_derive(y.comps[std::size_t(j)], i + 1, op) -
                     y.comps[std::size_t(i)] * coef_derive(x.comps[std::size_t(j)], i + 1, op);
            if (acc[std::size_t(j)])
                acc[std::size_t(j)] = *acc[std::size_t(j)] + term;
            else
                acc[std::size_t(j)] = std::move(term);
        }
    }
    return vector_field<C>{{std::move(*acc[0]), std::move(*acc[1]), std::move(*acc[2]),
                            std::move(*acc[3])}};
}

template <class C>
vector_field<C> vf_add(const vector_field<C>& a, const vector_field<C>& b) {
    return {{a.comps[0] + b.comps[0], a.comps[1] + b.comps[1], a.comps[2] + b.comps[2],
             a.comps[3] + b.comps[3]}};
}

template <class C>
vector_field<C> vf_sub(const vector_field<C>& a, const vector_field<C>& b) {
    return {{a.comps[0] - b.comps[0], a.comps[1] - b.comps[1], a.comps[2] - b.comps[2],
             a.comps[3] - b.comps[3]}};
}

template <class C>
vector_field<C> vf_scale(const C& s, const vector_field<C>& a) {
    return {{s * a.comps[0], s * a.comps[1], s * a.comps[2], s * a.comps[3]}};
}

/// X(f) = sum_i X^i d_i f.
template <class C>
C directional_derivative(const vector_field<C>& x, const C& f,
                         const char* op = "directional_derivative") {
    C acc = x.comps[0] * coef_derive(f, 1, op);
    for (int i = 1; i < 4; ++i) acc = acc + x.comps[std::size_t(i)] * coef_derive(f, i + 1, op);
    return acc;
}

/// Cartan formula L_X = i_X d + d i_X (with the empty ends dropped).
template <class C>
form<C> lie_derivative(const vector_field<C>& x, const form<C>& a,
                       const char* op = "lie_derivative") {
    const int k = a.degree();
    if (k == 0) return interior_product(x, exterior_derivative(a, op));
    if (k == 4) return exterior_derivative(interior_product(x, a), op);
    return interior_product(x, exterior_derivative(a, op)) +
           exterior_derivative(interior_product(x, a), op);
}

/// omega(X) for a 1-form.
template <class C>
C form1_apply(const form<C>& a, const vector_field<C>& x) {
    if (a.degree() != 1) throw error("form1_apply needs a 1-form");
    C acc = a[0] * x.comps[0];
    for (int i = 1; i < 4; ++i) acc = acc + a[std::size_t(i)] * x.comps[std::size_t(i)];
    return acc;
}

/// Omega(X, Y) for a 2-form.
template <class C>
C form2_apply(const form<C>& a, const vector_field<C>& x, const vector_field<C>& y) {
    if (a.degree() != 2) throw error("form2_apply needs a 2-form");
    const form_tables& t = form_tables::get();
    std::optional<C> acc;
    for (std::size_t c = 0; c < a.size(); ++c) {
        const auto& ij = t.tuple(2, c);
        std::size_t i = std::size_t(ij[0] - 1), j = std::size_t(ij[1] - 1);
        C term = a[c] * (x.comps[i] * y.comps[j] - x.comps[j] * y.comps[i]);
        if (acc)
            acc = *acc + term;
        else
            acc = std::move(term);
    }
    return std::move(*acc);
}

/// A 4-form on four fields: volume coefficient times the component
/// determinant.
template <class C>
C form4_apply(const form<C>& a, const vector_field<C>& x1, const vector_field<C>& x2,
              const vector_field<C>& x3, const vector_field<C>& x4) {
    if (a.degree() != 4) throw error("form4_apply needs a 4-form");
    mat4<C> m{{{x1.comps[0], x2.comps[0], x3.comps[0], x4.comps[0]},
               {x1.comps[1], x2.comps[1], x3.comps[1], x4.comps[1]},
               {x1.comps[2], x2.comps[2], x3.comps[2], x4.comps[2]},
               {x1.comps[3], x2.comps[3], x3.comps[3], x4.comps[3]}}};
    return a[0] * det4(m);
}

// -- pointwise data ------------------------------------------------------------

/// Constant terms of a jet-mode form: the form's value at its base point.
template <class T>
std::vector<T> form_values(const form<truncated_series<T>>& a) {
    std::vector<T> out;
    out.reserve(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out.push_back(a[i].value());
    return out;
}

/// Jet-mode conversion of a symbolic form.
template <class T>
form<truncated_series<T>> jet_form(const form<expr>& a, const point4& pt, int order,
                                   const bindings& b = {}) {
    std::vector<truncated_series<T>> comps;
    comps.reserve(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) comps.push_back(eval_jet<T>(a[i], pt, order, b));
    return form<truncated_series<T>>(a.degree(), std::move(comps));
}

template <class T>
vector_field<truncated_series<T>> jet_field(const vector_field<expr>& x, const point4& pt,
                                            int order, const bindings& b = {}) {
    return vector_field<truncated_series<T>>{
        {eval_jet<T>(x.comps[0], pt, order, b), eval_jet<T>(x.comps[1], pt, order, b),
         eval_jet<T>(x.comps[2], pt, order, b), eval_jet<T>(x.comps[3], pt, order, b)}};
}

/// Largest coefficient magnitude across components; zero means the jet-mode
/// form vanishes identically to its order.
template <class T>
double form_max_magnitude(const form<truncated_series<T>>& a) {
    double m = 0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, a[i].max_magnitude());
    return m;
}

template <class T>
bool form_is_zero(const form<truncated_series<T>>& a) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!a[i].is_zero()) return false;
    return true;
}

// -- rank and class ------------------------------------------------------------

/// Rank of a 2-form from its six coefficient values (tuple order 12,13,14,
/// 23,24,34): 4 iff the Pfaffian does not vanish.  Exact backends decide
/// exactly; the float backend thresholds singular values at 1e-9 of the
/// largest.
template <class T>
int rank_of_2form_values(const std::array<T, 6>& f) {
    using traits = scalar_traits<T>;
    if constexpr (traits::is_exact) {
        if (!traits::is_zero(pfaffian(f))) return 4;
        for (const T& x : f)
            if (!traits::is_zero(x)) return 2;
        return 0;
    } else {
        double pf = pfaffian(f);
        double m2 = 0;
        for (const T& x : f) m2 += double(x) * double(x);
        // 4x4 skew: singular values are the square roots of the two roots of
        // mu^2 - m2*mu + pf^2, each taken twice.
        double disc = std::sqrt(std::max(m2 * m2 - 4 * pf * pf, 0.0));
        double hi = std::sqrt(std::max((m2 + disc) / 2, 0.0));
        double lo = std::sqrt(std::max((m2 - disc) / 2, 0.0));
        if (hi == 0.0) return 0;
        if (lo > 1e-9 * hi) return 4;
        return hi > 0.0 ? 2 : 0;
    }
}

template <class T>
int rank_of_2form(const form<truncated_series<T>>& omega2) {
    if (omega2.degree() != 2) throw error("rank_of_2form needs a 2-form");
    std::array<T, 6> f{omega2[0].value(), omega2[1].value(), omega2[2].value(),
                       omega2[3].value(), omega2[4].value(), omega2[5].value()};
    return rank_of_2form_values(f);
}

/// Class of a 1-form at its base point: the rank of the 5x4 matrix stacking
/// the row omega(pt) on the skew matrix of (d omega)(pt).  Consumes one
/// order of the jet for the derivative.
template <class T>
int class_of_1form(const form<truncated_series<T>>& omega) {
    using traits = scalar_traits<T>;
    if (omega.degree() != 1) throw error("class_of_1form needs a 1-form");
    form<truncated_series<T>> domega = exterior_derivative(omega, "class_of_1form");
    const form_tables& t = form_tables::get();
    // full skew matrix of d omega
    std::array<std::array<T, 4>, 4> w;
    for (auto& row : w) row = {traits::zero(), traits::zero(), traits::zero(), traits::zero()};
    for (std::size_t c = 0; c < domega.size(); ++c) {
        const auto& ij = t.tuple(2, c);
        T v = domega[c].value();
        w[std::size_t(ij[0] - 1)][std::size_t(ij[1] - 1)] = v;
        w[std::size_t(ij[1] - 1)][std::size_t(ij[0] - 1)] = -v;
    }
    std::vector<std::vector<T>> rows;
    rows.push_back({omega[0].value(), omega[1].value(), omega[2].value(), omega[3].value()});
    for (int i = 0; i < 4; ++i)
        rows.push_back({w[std::size_t(i)][0], w[std::size_t(i)][1], w[std::size_t(i)][2],
                        w[std::size_t(i)][3]});
    if constexpr (traits::is_exact) {
        return exact_rank(std::move(rows));
    } else {
        std::vector<std::vector<double>> d;
        for (auto& r : rows) d.push_back({double(r[0]), double(r[1]), double(r[2]), double(r[3])});
        return float_rank(d);
    }
}

} // namespace forms4
