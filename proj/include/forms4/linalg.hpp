#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "forms4/errors.hpp"
#include "forms4/scalar.hpp"

namespace forms4 {

template <class R>
using mat4 = std::array<std::array<R, 4>, 4>;

/// Determinant of a 3x3 block given by row/column index lists; R is any
/// commutative ring element (scalar or truncated series).
template <class R>
R det3_of(const mat4<R>& m, const std::array<int, 3>& r, const std::array<int, 3>& c) {
    auto e = [&](int i, int j) -> const R& { return m[std::size_t(r[std::size_t(i)])][std::size_t(c[std::size_t(j)])]; };
    return e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1)) -
           e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0)) +
           e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0));
}

namespace detail {
inline std::array<int, 3> complement_of(int k) {
    std::array<int, 3> out{};
    int p = 0;
    for (int i = 0; i < 4; ++i)
        if (i != k) out[std::size_t(p++)] = i;
    return out;
}
} // namespace detail

template <class R>
R det4(const mat4<R>& m) {
    R acc = m[0][0] * det3_of(m, {1, 2, 3}, detail::complement_of(0));
    acc = acc - m[0][1] * det3_of(m, {1, 2, 3}, detail::complement_of(1));
    acc = acc + m[0][2] * det3_of(m, {1, 2, 3}, detail::complement_of(2));
    acc = acc - m[0][3] * det3_of(m, {1, 2, 3}, detail::complement_of(3));
    return acc;
}

/// Adjugate (transposed cofactor matrix): adj(m) * m = det(m) * id.
template <class R>
mat4<R> adjugate4(const mat4<R>& m) {
    mat4<R> out;
    for (int i = 0; i < 4; ++i) {
        std::array<int, 3> rows = detail::complement_of(i);
        for (int j = 0; j < 4; ++j) {
            std::array<int, 3> cols = detail::complement_of(j);
            R c = det3_of(m, rows, cols);
            if ((i + j) % 2 == 1) c = -c;
            out[std::size_t(j)][std::size_t(i)] = std::move(c); // transpose
        }
    }
    return out;
}

/// Pfaffian of the 4x4 skew matrix with upper entries (F12,F13,F14,F23,F24,F34).
template <class R>
R pfaffian(const std::array<R, 6>& f) {
    return f[0] * f[5] + f[2] * f[3] - f[1] * f[4];
}

/// Rank of an m x n matrix over an exact field by Gaussian elimination.
template <class T>
int exact_rank(std::vector<std::vector<T>> rows) {
    using traits = scalar_traits<T>;
    const std::size_t m = rows.size();
    const std::size_t n = m == 0 ? 0 : rows[0].size();
    int rank = 0;
    std::size_t row = 0;
    for (std::size_t col = 0; col < n && row < m; ++col) {
        std::size_t pivot = row;
        while (pivot < m && traits::is_zero(rows[pivot][col])) ++pivot;
        if (pivot == m) continue;
        std::swap(rows[pivot], rows[row]);
        T inv = traits::invert(rows[row][col]);
        for (std::size_t r = row + 1; r < m; ++r) {
            if (traits::is_zero(rows[r][col])) continue;
            T factor = rows[r][col] * inv;
            for (std::size_t c = col; c < n; ++c)
                rows[r][c] = rows[r][c] - factor * rows[row][c];
        }
        ++row;
        ++rank;
    }
    return rank;
}

/// Rank of an m x n float matrix from the singular values, thresholded at
/// rel_tol times the largest singular value.
inline int float_rank(const std::vector<std::vector<double>>& rows, double rel_tol = 1e-9) {
    const std::size_t m = rows.size();
    const std::size_t n = m == 0 ? 0 : rows[0].size();
    if (n == 0) return 0;
    // Gram matrix; eigenvalues by cyclic Jacobi.
    std::vector<std::vector<double>> g(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t r = 0; r < m; ++r) g[i][j] += rows[r][i] * rows[r][j];
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += g[p][q] * g[p][q];
        if (off < 1e-300) break;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                if (g[p][q] == 0.0) continue;
                double theta = 0.5 * std::atan2(2 * g[p][q], g[q][q] - g[p][p]);
                double c = std::cos(theta), s = std::sin(theta);
                for (std::size_t k = 0; k < n; ++k) {
                    double gpk = g[p][k], gqk = g[q][k];
                    g[p][k] = c * gpk - s * gqk;
                    g[q][k] = s * gpk + c * gqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    double gkp = g[k][p], gkq = g[k][q];
                    g[k][p] = c * gkp - s * gkq;
                    g[k][q] = s * gkp + c * gkq;
                }
            }
    }
    double smax = 0;
    for (std::size_t i = 0; i < n; ++i) smax = std::max(smax, std::max(g[i][i], 0.0));
    smax = std::sqrt(smax);
    if (smax == 0.0) return 0;
    int rank = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (std::sqrt(std::max(g[i][i], 0.0)) > rel_tol * smax) ++rank;
    return rank;
}

} // namespace forms4
