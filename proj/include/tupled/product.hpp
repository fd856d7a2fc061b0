/**
 * @file product.hpp
 * @brief The product space X^n: star projections, the induced self-maps
 *        F_star and G, the averaged and max metrics, and the product order.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "tupled/spaces.hpp"
#include "tupled/star_op.hpp"

namespace tupled {

/// An element (x_1, ..., x_n) of X^n.
template <class P>
using Tuple = std::vector<P>;

namespace detail {
template <class P>
void require_same_length(Tuple<P> const& u, Tuple<P> const& v) {
    if (u.size() != v.size())
        throw std::invalid_argument("tuple length mismatch: " + std::to_string(u.size()) + " vs " +
                                    std::to_string(v.size()));
}
} // namespace detail

/// (x_{i_1}, ..., x_{i_n}) where (i_1, ..., i_n) is row i of the star.
template <class P>
Tuple<P> project_star(Tuple<P> const& u, StarOp const& star, int i) {
    if (u.size() != static_cast<std::size_t>(star.n()))
        throw std::invalid_argument("tuple length " + std::to_string(u.size()) + " does not match star n = " +
                                    std::to_string(star.n()));
    auto row = star.row(i);
    Tuple<P> out;
    out.reserve(row.size());
    for (int idx : row)
        out.push_back(u[static_cast<std::size_t>(idx - 1)]);
    return out;
}

/// F: X^n -> X, g: X -> X and a star, exposed as the self-maps F_star and G
/// of X^n. An empty g means the identity.
template <class P>
struct InducedMaps {
    using Point = P;
    using Mapping = std::function<P(std::span<const P>)>;
    using Unary = std::function<P(P const&)>;

    Mapping F;
    Unary g;
    StarOp star;

    P apply_g(P const& x) const { return g ? g(x) : x; }
    P apply_F(Tuple<P> const& u) const { return F(std::span<const P>(u)); }
    bool g_is_identity() const noexcept { return !g; }
};

/// F_star(U)_i = F(U*_i).
template <class P>
Tuple<P> f_star(InducedMaps<P> const& maps, Tuple<P> const& u) {
    Tuple<P> out;
    out.reserve(u.size());
    for (int i = 1; i <= maps.star.n(); ++i)
        out.push_back(maps.apply_F(project_star(u, maps.star, i)));
    return out;
}

/// G(U)_i = g(x_i).
template <class P>
Tuple<P> big_g(InducedMaps<P> const& maps, Tuple<P> const& u) {
    Tuple<P> out;
    out.reserve(u.size());
    for (auto const& x : u)
        out.push_back(maps.apply_g(x));
    return out;
}

/// (1/n) sum_i d(x_i, y_i)
template <OrderedMetricSpace S>
double delta_n(S const& space, Tuple<typename S::Point> const& u, Tuple<typename S::Point> const& v) {
    detail::require_same_length(u, v);
    if (u.empty())
        throw std::invalid_argument("empty tuple");
    double sum = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
        sum += space.distance(u[i], v[i]);
    return sum / static_cast<double>(u.size());
}

/// max_i d(x_i, y_i)
template <OrderedMetricSpace S>
double nabla_n(S const& space, Tuple<typename S::Point> const& u, Tuple<typename S::Point> const& v) {
    detail::require_same_length(u, v);
    if (u.empty())
        throw std::invalid_argument("empty tuple");
    double m = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
        m = std::max(m, space.distance(u[i], v[i]));
    return m;
}

/// Componentwise order on X^n.
template <OrderedMetricSpace S>
bool order_leq_n(S const& space, Tuple<typename S::Point> const& u, Tuple<typename S::Point> const& v) {
    detail::require_same_length(u, v);
    for (std::size_t i = 0; i < u.size(); ++i)
        if (!space.leq(u[i], v[i]))
            return false;
    return true;
}

template <OrderedMetricSpace S>
bool comparable_n(S const& space, Tuple<typename S::Point> const& u, Tuple<typename S::Point> const& v) {
    return order_leq_n(space, u, v) || order_leq_n(space, v, u);
}

enum class ResidualMetric { delta, nabla };

template <OrderedMetricSpace S>
double product_distance(S const& space, ResidualMetric which, Tuple<typename S::Point> const& u,
                        Tuple<typename S::Point> const& v) {
    return which == ResidualMetric::delta ? delta_n(space, u, v) : nabla_n(space, u, v);
}

/// Per-row comparison of the star-permuted distance aggregates against the
/// plain ones. For permuted stars the sums and maxima coincide; the max bound
/// holds for any star.
struct RowMetricReport {
    struct Row {
        double avg = 0.0;
        double max = 0.0;
        bool avg_equals = false;
        bool max_equals = false;
        bool max_bounded = false;
    };
    std::vector<Row> rows;
    double delta = 0.0;
    double nabla = 0.0;

    bool all_equal() const {
        return std::all_of(rows.begin(), rows.end(), [](Row const& r) { return r.avg_equals && r.max_equals; });
    }
    bool all_bounded() const {
        return std::all_of(rows.begin(), rows.end(), [](Row const& r) { return r.max_bounded; });
    }
};

template <OrderedMetricSpace S, class G>
RowMetricReport row_metric_check(S const& space, Tuple<typename S::Point> const& u, Tuple<typename S::Point> const& v,
                                 G const& g, StarOp const& star, double tol = 1e-12) {
    using P = typename S::Point;
    detail::require_same_length(u, v);
    Tuple<P> gu, gv;
    for (std::size_t j = 0; j < u.size(); ++j) {
        gu.push_back(g(u[j]));
        gv.push_back(g(v[j]));
    }
    RowMetricReport rep;
    rep.delta = delta_n(space, gu, gv);
    rep.nabla = nabla_n(space, gu, gv);
    double const n = static_cast<double>(star.n());
    for (int i = 1; i <= star.n(); ++i) {
        RowMetricReport::Row row;
        double sum = 0.0;
        for (int idx : star.row(i)) {
            double d = space.distance(gu[idx - 1], gv[idx - 1]);
            sum += d;
            row.max = std::max(row.max, d);
        }
        row.avg = sum / n;
        // relative: summation order differs between the row and the plain sum
        row.avg_equals = std::abs(row.avg - rep.delta) <= tol * (1.0 + rep.delta);
        row.max_equals = std::abs(row.max - rep.nabla) <= tol * (1.0 + rep.nabla);
        row.max_bounded = row.max <= rep.nabla + tol * (1.0 + rep.nabla);
        rep.rows.push_back(row);
    }
    return rep;
}

} // namespace tupled
