/**
 * @file spaces.hpp
 * @brief Concrete ordered metric spaces.
 *
 * VectorSpace is R^k with the componentwise order and one of three metrics;
 * FiniteSpace is a tabulated space on points 0..p-1 used as an exact oracle
 * substrate. Both satisfy the OrderedMetricSpace concept, which is all the
 * product-space and solver templates rely on.
 */
#pragma once

#include <cmath>
#include <concepts>
#include <cstdint>
#include <istream>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tupled {

template <class S>
concept OrderedMetricSpace = requires(S const& s, typename S::Point const& a, typename S::Point const& b) {
    typename S::Point;
    { s.distance(a, b) } -> std::convertible_to<double>;
    { s.leq(a, b) } -> std::convertible_to<bool>;
};

/// x and y are comparable when x <= y or y <= x.
template <OrderedMetricSpace S>
bool comparable(S const& space, typename S::Point const& x, typename S::Point const& y) {
    return space.leq(x, y) || space.leq(y, x);
}

/// Same carrier and metric, reversed order.
template <OrderedMetricSpace S>
class Dual {
  public:
    using Point = typename S::Point;
    explicit Dual(S const& base) : base_(&base) {}
    double distance(Point const& a, Point const& b) const { return base_->distance(a, b); }
    bool leq(Point const& a, Point const& b) const { return base_->leq(b, a); }
    S const& base() const { return *base_; }

  private:
    S const* base_;
};

// ---------------------------------------------------------------------------
// R^k
// ---------------------------------------------------------------------------

enum class MetricKind { euclidean, max, sum };

inline std::string_view to_string(MetricKind kind) {
    switch (kind) {
    case MetricKind::euclidean: return "euclidean";
    case MetricKind::max: return "max";
    case MetricKind::sum: return "sum";
    }
    return "?";
}

inline MetricKind parse_metric_kind(std::string_view name) {
    if (name == "euclidean")
        return MetricKind::euclidean;
    if (name == "max")
        return MetricKind::max;
    if (name == "sum")
        return MetricKind::sum;
    throw std::invalid_argument("unknown metric kind '" + std::string(name) + "'");
}

class VectorSpace {
  public:
    using Point = std::vector<double>;

    explicit VectorSpace(int k, MetricKind metric = MetricKind::euclidean) : k_(k), metric_(metric) {
        if (k < 1)
            throw std::invalid_argument("vector space dimension must be >= 1");
    }

    int dimension() const noexcept { return k_; }
    MetricKind metric() const noexcept { return metric_; }

    double distance(Point const& x, Point const& y) const {
        check(x);
        check(y);
        double acc = 0.0;
        for (int j = 0; j < k_; ++j) {
            double diff = std::abs(x[j] - y[j]);
            switch (metric_) {
            case MetricKind::euclidean: acc += diff * diff; break;
            case MetricKind::max: acc = std::max(acc, diff); break;
            case MetricKind::sum: acc += diff; break;
            }
        }
        return metric_ == MetricKind::euclidean ? std::sqrt(acc) : acc;
    }

    // Exact comparison: an epsilon-widened order would not be transitive.
    bool leq(Point const& x, Point const& y) const {
        check(x);
        check(y);
        for (int j = 0; j < k_; ++j)
            if (!(x[j] <= y[j]))
                return false;
        return true;
    }

  private:
    void check(Point const& x) const {
        if (x.size() != static_cast<std::size_t>(k_))
            throw std::invalid_argument("point of dimension " + std::to_string(x.size()) + " in R^" +
                                        std::to_string(k_));
    }

    int k_;
    MetricKind metric_;
};

/// Axis-aligned sampling box [lo, hi]^k.
struct Box {
    double lo = -10.0;
    double hi = 10.0;
};

/// Draws x uniformly in the box, then y = x + offset with each offset
/// coordinate uniform in [0, max_offset] (default: box width). Always x <= y.
template <class Rng>
std::pair<VectorSpace::Point, VectorSpace::Point> random_comparable_pair(VectorSpace const& space, Rng& rng,
                                                                         Box box,
                                                                         std::optional<double> max_offset = {}) {
    if (!(box.lo <= box.hi))
        throw std::invalid_argument("empty sampling box");
    double const spread = max_offset.value_or(box.hi - box.lo);
    if (spread < 0.0)
        throw std::invalid_argument("negative perturbation bound");
    std::uniform_real_distribution<double> base(box.lo, box.hi);
    std::uniform_real_distribution<double> offset(0.0, spread);
    VectorSpace::Point x(space.dimension()), y(space.dimension());
    for (int j = 0; j < space.dimension(); ++j) {
        x[j] = base(rng);
        double o = spread > 0.0 ? offset(rng) : 0.0;
        y[j] = x[j] + o;
    }
    return {std::move(x), std::move(y)};
}

inline std::pair<VectorSpace::Point, VectorSpace::Point>
random_comparable_pair(VectorSpace const& space, std::uint64_t seed, Box box, std::optional<double> max_offset = {}) {
    std::mt19937_64 rng(seed);
    return random_comparable_pair(space, rng, box, max_offset);
}

// ---------------------------------------------------------------------------
// Finite tabulated spaces
// ---------------------------------------------------------------------------

struct Violation {
    std::string axiom;
    std::vector<int> witness;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const noexcept { return violations.empty(); }
};

class FiniteSpace {
  public:
    using Point = int;

    /// Shape is validated here; metric and order axioms are left to
    /// validate_finite_space so that broken tables can still be inspected.
    FiniteSpace(std::vector<std::vector<double>> const& dist, std::vector<std::vector<bool>> const& leq)
        : p_(static_cast<int>(dist.size())) {
        if (p_ < 1)
            throw std::invalid_argument("finite space needs at least one point");
        if (leq.size() != dist.size())
            throw std::invalid_argument("distance and order tables differ in size");
        dist_.reserve(static_cast<std::size_t>(p_) * p_);
        leq_.reserve(static_cast<std::size_t>(p_) * p_);
        for (int i = 0; i < p_; ++i) {
            if (dist[i].size() != dist.size() || leq[i].size() != dist.size())
                throw std::invalid_argument("row " + std::to_string(i) + " of the tables is not length " +
                                            std::to_string(p_));
            for (int j = 0; j < p_; ++j) {
                dist_.push_back(dist[i][j]);
                leq_.push_back(leq[i][j] ? 1 : 0);
            }
        }
    }

    /// Totally ordered chain 0 <= 1 <= ... <= p-1 with dist(i, j) = |i - j|.
    static FiniteSpace chain(int p) {
        std::vector<std::vector<double>> d(p, std::vector<double>(p));
        std::vector<std::vector<bool>> o(p, std::vector<bool>(p));
        for (int i = 0; i < p; ++i)
            for (int j = 0; j < p; ++j) {
                d[i][j] = std::abs(i - j);
                o[i][j] = i <= j;
            }
        return FiniteSpace(d, o);
    }

    int size() const noexcept { return p_; }
    double distance(int a, int b) const { return dist_[index(a, b)]; }
    bool leq(int a, int b) const { return leq_[index(a, b)] != 0; }

    bool contains(int a) const noexcept { return a >= 0 && a < p_; }

    /// Same metric, reversed order.
    FiniteSpace reversed() const {
        FiniteSpace out = *this;
        for (int a = 0; a < p_; ++a)
            for (int b = 0; b < p_; ++b)
                out.leq_[index(a, b)] = leq_[index(b, a)];
        return out;
    }

  private:
    std::size_t index(int a, int b) const {
        if (!contains(a) || !contains(b))
            throw std::out_of_range("finite point outside 0.." + std::to_string(p_ - 1));
        return static_cast<std::size_t>(a) * p_ + b;
    }

    int p_;
    std::vector<double> dist_;
    std::vector<char> leq_;
};

/// Lists every metric and partial-order axiom violation with witness indices.
inline ValidationReport validate_finite_space(FiniteSpace const& s) {
    ValidationReport rep;
    int const p = s.size();
    auto add = [&](std::string axiom, std::vector<int> w) { rep.violations.push_back({std::move(axiom), std::move(w)}); };
    for (int i = 0; i < p; ++i) {
        if (s.distance(i, i) != 0.0)
            add("identity", {i, i});
        if (!s.leq(i, i))
            add("reflexivity", {i});
        for (int j = 0; j < p; ++j) {
            double dij = s.distance(i, j);
            if (!(dij >= 0.0) || !std::isfinite(dij))
                add("nonnegativity", {i, j});
            if (i < j && dij != s.distance(j, i))
                add("symmetry", {i, j});
            if (i != j && dij == 0.0)
                add("identity", {i, j});
            if (i < j && s.leq(i, j) && s.leq(j, i))
                add("antisymmetry", {i, j});
            for (int l = 0; l < p; ++l) {
                if (s.distance(i, l) > dij + s.distance(j, l))
                    add("triangle", {i, j, l});
                if (s.leq(i, j) && s.leq(j, l) && !s.leq(i, l))
                    add("transitivity", {i, j, l});
            }
        }
    }
    return rep;
}

/// Text format: p, then p rows of distances, then p rows of 0/1 order flags.
inline FiniteSpace read_finite_space(std::istream& in) {
    int p = 0;
    if (!(in >> p) || p < 1 || p > 100000)
        throw std::invalid_argument("finite space: bad point count");
    std::vector<std::vector<double>> d(p, std::vector<double>(p));
    std::vector<std::vector<bool>> o(p, std::vector<bool>(p));
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j)
            if (!(in >> d[i][j]))
                throw std::invalid_argument("finite space: truncated distance matrix");
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) {
            int flag = 0;
            if (!(in >> flag) || (flag != 0 && flag != 1))
                throw std::invalid_argument("finite space: order entries must be 0 or 1");
            o[i][j] = flag == 1;
        }
    return FiniteSpace(d, o);
}

inline FiniteSpace parse_finite_space(std::string const& text) {
    std::istringstream in(text);
    return read_finite_space(in);
}

} // namespace tupled
