#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace forms4 {

inline constexpr int n_vars = 4;

/// Exponent multi-index of a monomial in x1..x4.
using exponent = std::array<std::uint8_t, n_vars>;

inline int total_degree(const exponent& e) {
    return int(e[0]) + int(e[1]) + int(e[2]) + int(e[3]);
}

/// Graded-lexicographic enumeration of all multi-indices of total degree
/// <= max_order in four variables.  Ranks are prefix-compatible: the rank of
/// an exponent does not depend on the degree cap, so one global table serves
/// every series order.  Also carries the precomputed multiplication pairing
/// (rank_a, rank_b) -> rank_out sorted by total degree of the product.
class grading {
public:
    static constexpr int max_order = 12;

    struct mul_entry {
        std::int32_t a, b, out;
    };

    static const grading& get() {
        static const grading g;
        return g;
    }

    /// Number of monomials of total degree <= d.
    std::size_t size_at(int d) const { return size_at_[d]; }

    const exponent& exp_of(std::size_t rank) const { return exps_[rank]; }

    std::int32_t rank(const exponent& e) const {
        return lut_[((std::size_t(e[0]) * stride + e[1]) * stride + e[2]) * stride + e[3]];
    }

    int degree_of(std::size_t rank) const { return degree_[rank]; }

    /// Multiplication pairs with product degree <= m occupy [0, mul_end(m)).
    const std::vector<mul_entry>& mul_pairs() const { return mul_; }
    std::size_t mul_end(int m) const { return mul_end_[m]; }

private:
    static constexpr std::size_t stride = max_order + 1;

    grading() {
        for (int d = 0; d <= max_order; ++d) {
            for (int e1 = d; e1 >= 0; --e1)
                for (int e2 = d - e1; e2 >= 0; --e2)
                    for (int e3 = d - e1 - e2; e3 >= 0; --e3) {
                        int e4 = d - e1 - e2 - e3;
                        exps_.push_back({std::uint8_t(e1), std::uint8_t(e2),
                                         std::uint8_t(e3), std::uint8_t(e4)});
                        degree_.push_back(d);
                    }
            size_at_[d] = exps_.size();
        }
        lut_.assign(stride * stride * stride * stride, -1);
        for (std::size_t r = 0; r < exps_.size(); ++r) {
            const exponent& e = exps_[r];
            lut_[((std::size_t(e[0]) * stride + e[1]) * stride + e[2]) * stride + e[3]] =
                std::int32_t(r);
        }
        for (std::size_t a = 0; a < exps_.size(); ++a) {
            for (std::size_t b = 0; b < exps_.size(); ++b) {
                int d = degree_[a] + degree_[b];
                if (d > max_order) continue;
                exponent s{std::uint8_t(exps_[a][0] + exps_[b][0]),
                           std::uint8_t(exps_[a][1] + exps_[b][1]),
                           std::uint8_t(exps_[a][2] + exps_[b][2]),
                           std::uint8_t(exps_[a][3] + exps_[b][3])};
                mul_.push_back({std::int32_t(a), std::int32_t(b), rank(s)});
            }
        }
        std::sort(mul_.begin(), mul_.end(), [this](const mul_entry& x, const mul_entry& y) {
            return degree_[x.out] < degree_[y.out];
        });
        std::size_t pos = 0;
        for (int m = 0; m <= max_order; ++m) {
            while (pos < mul_.size() && degree_[mul_[pos].out] <= m) ++pos;
            mul_end_[m] = pos;
        }
    }

    std::vector<exponent> exps_;
    std::vector<int> degree_;
    std::array<std::size_t, max_order + 1> size_at_{};
    std::vector<std::int32_t> lut_;
    std::vector<mul_entry> mul_;
    std::array<std::size_t, max_order + 1> mul_end_{};
};

} // namespace forms4
