/**
 * @file solver.hpp
 * @brief Jungck/Picard iteration on X^n, solution verification, multi-start
 *        uniqueness probing and exhaustive enumeration on finite spaces.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <future>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "tupled/finite.hpp"
#include "tupled/hypotheses.hpp"
#include "tupled/product.hpp"
#include "tupled/spaces.hpp"
#include "tupled/star_op.hpp"

namespace tupled {

/// Everything the iteration needs. An empty g_inverse with a non-identity g
/// means the problem cannot be iterated.
template <OrderedMetricSpace S>
struct Problem {
    using Point = typename S::Point;
    S space;
    InducedMaps<Point> maps;
    std::function<Point(Point const&)> g_inverse;
    Tuple<Point> u0;
    Direction direction = Direction::up;
};

struct SolveConfig {
    double tol = 1e-10;
    int max_iter = 10'000;
    ResidualMetric residual_metric = ResidualMetric::nabla;

    void validate() const {
        if (!(tol > 0.0))
            throw std::invalid_argument("tol must be positive");
        if (max_iter < 1)
            throw std::invalid_argument("max_iter must be >= 1");
    }
};

enum class SolveStatus { converged, max_iter, hypothesis_failure, g_inverse_missing, diverged };

inline std::string_view to_string(SolveStatus s) {
    switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::max_iter: return "max_iter";
    case SolveStatus::hypothesis_failure: return "hypothesis_failure";
    case SolveStatus::g_inverse_missing: return "g_inverse_missing";
    case SolveStatus::diverged: return "diverged";
    }
    return "?";
}

inline ResidualMetric parse_residual_metric(std::string_view s) {
    if (s == "delta")
        return ResidualMetric::delta;
    if (s == "nabla")
        return ResidualMetric::nabla;
    throw std::invalid_argument("unknown residual metric '" + std::string(s) + "'");
}

inline std::string_view to_string(ResidualMetric m) { return m == ResidualMetric::delta ? "delta" : "nabla"; }

/// Residual growth past this bound is reported as divergence.
inline constexpr double divergence_bound = 1e12;

template <class P>
struct SolveReport {
    SolveStatus status = SolveStatus::max_iter;
    int iterations = 0;
    Tuple<P> point;
    double residual = 0.0;
    std::vector<double> history;
    std::vector<HypothesisReport> hypotheses;
    /// Direction the monotonicity of {G U_m} was checked against.
    std::optional<Direction> monotone_direction;
    bool monotone = true;
};

namespace detail {
inline bool finite_point(int) { return true; }
inline bool finite_point(double x) { return std::isfinite(x); }
inline bool finite_point(std::vector<double> const& x) {
    return std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); });
}
template <class P>
bool finite_tuple(Tuple<P> const& t) {
    return std::all_of(t.begin(), t.end(), [](P const& x) { return finite_point(x); });
}
} // namespace detail

/// Iterates U_{m+1} = g^{-1}(F_star(U_m)) until the residual
/// residual_metric(G U_m, F_star U_m) drops to tol. `iterations` counts the
/// updates performed, so a start at a solution reports 0.
template <OrderedMetricSpace S>
SolveReport<typename S::Point> picard_solve(Problem<S> const& prob, SolveConfig const& cfg) {
    using P = typename S::Point;
    cfg.validate();
    SolveReport<P> rep;
    rep.point = prob.u0;
    if (prob.u0.size() != static_cast<std::size_t>(prob.maps.star.n()))
        throw std::invalid_argument("U0 has " + std::to_string(prob.u0.size()) + " components, expected " +
                                    std::to_string(prob.maps.star.n()));
    if (!prob.maps.g_is_identity() && !prob.g_inverse) {
        rep.status = SolveStatus::g_inverse_missing;
        return rep;
    }
    if (prob.direction == Direction::either)
        rep.monotone_direction = initial_direction(prob.space, prob.maps, prob.u0);
    else
        rep.monotone_direction = prob.direction;

    bool increasing = true, decreasing = true;
    Tuple<P> u = prob.u0;
    Tuple<P> gu = big_g(prob.maps, u);
    for (int m = 0;; ++m) {
        Tuple<P> fu = f_star(prob.maps, u);
        rep.point = u;
        if (!detail::finite_tuple(fu) || !detail::finite_tuple(gu)) {
            rep.status = SolveStatus::diverged;
            rep.iterations = m;
            rep.residual = std::numeric_limits<double>::infinity();
            break;
        }
        double rho = product_distance(prob.space, cfg.residual_metric, gu, fu);
        rep.history.push_back(rho);
        rep.residual = rho;
        rep.iterations = m;
        if (rho <= cfg.tol) {
            rep.status = SolveStatus::converged;
            break;
        }
        if (!std::isfinite(rho) || rho > divergence_bound) {
            rep.status = SolveStatus::diverged;
            break;
        }
        if (m == cfg.max_iter) {
            rep.status = SolveStatus::max_iter;
            break;
        }
        Tuple<P> next;
        next.reserve(fu.size());
        for (auto const& y : fu)
            next.push_back(prob.g_inverse ? prob.g_inverse(y) : y);
        Tuple<P> g_next = big_g(prob.maps, next);
        if (detail::finite_tuple(g_next)) {
            increasing = increasing && order_leq_n(prob.space, gu, g_next);
            decreasing = decreasing && order_leq_n(prob.space, g_next, gu);
        }
        u = std::move(next);
        gu = std::move(g_next);
    }
    if (rep.monotone_direction == Direction::up)
        rep.monotone = increasing;
    else if (rep.monotone_direction == Direction::down)
        rep.monotone = decreasing;
    else
        rep.monotone = increasing || decreasing;
    return rep;
}

struct Verification {
    bool ok = false;
    double residual = 0.0;
};

/// residual = max_i d(F(U*_i), g(x_i)).
template <OrderedMetricSpace S>
Verification verify_solution(S const& space, InducedMaps<typename S::Point> const& maps,
                             Tuple<typename S::Point> const& u, double tol) {
    double r = 0.0;
    for (int i = 1; i <= maps.star.n(); ++i) {
        double d = space.distance(maps.apply_F(project_star(u, maps.star, i)),
                                  maps.apply_g(u[static_cast<std::size_t>(i - 1)]));
        r = std::max(r, d);
    }
    return {r <= tol, r};
}

template <class P>
struct UniquenessReport {
    struct Cluster {
        Tuple<P> center;
        std::size_t count = 0;
    };
    std::size_t trials = 0;
    std::size_t converged = 0;
    std::size_t skipped = 0; ///< no admissible start found for the trial
    double radius = 0.0;
    std::vector<Cluster> clusters;

    bool unique() const { return clusters.size() == 1; }
};

/// Solves from `trials` random starts satisfying the problem's initial
/// condition and clusters the converged limits (nabla distance <= 10 tol).
/// Each trial draws from its own engine seeded by (seed, trial).
template <OrderedMetricSpace S, class StartGen>
UniquenessReport<typename S::Point> uniqueness_probe(Problem<S> const& prob, SolveConfig const& cfg,
                                                     std::size_t trials, std::uint64_t seed, StartGen const& gen,
                                                     unsigned jobs = 1, int attempts = 1000) {
    using P = typename S::Point;
    UniquenessReport<P> rep;
    rep.trials = trials;
    rep.radius = 10.0 * cfg.tol;
    auto run = [&](std::size_t t) -> std::optional<SolveReport<P>> {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(t)};
        std::mt19937_64 rng(seq);
        for (int a = 0; a < attempts; ++a) {
            Tuple<P> start = gen(rng);
            if (check_initial_condition(prob.space, prob.maps, start, prob.direction).verdict != Verdict::holds)
                continue;
            Problem<S> trial = prob;
            trial.u0 = std::move(start);
            return picard_solve(trial, cfg);
        }
        return std::nullopt;
    };
    std::vector<std::optional<SolveReport<P>>> results(trials);
    if (jobs <= 1) {
        for (std::size_t t = 0; t < trials; ++t)
            results[t] = run(t);
    } else {
        for (std::size_t base = 0; base < trials; base += jobs) {
            std::vector<std::future<std::optional<SolveReport<P>>>> futs;
            for (std::size_t t = base; t < std::min<std::size_t>(trials, base + jobs); ++t)
                futs.push_back(std::async(std::launch::async, run, t));
            for (std::size_t i = 0; i < futs.size(); ++i)
                results[base + i] = futs[i].get();
        }
    }
    for (auto const& r : results) {
        if (!r) {
            ++rep.skipped;
            continue;
        }
        if (r->status != SolveStatus::converged)
            continue;
        ++rep.converged;
        auto it = std::find_if(rep.clusters.begin(), rep.clusters.end(), [&](auto const& c) {
            return nabla_n(prob.space, c.center, r->point) <= rep.radius;
        });
        if (it == rep.clusters.end())
            rep.clusters.push_back({r->point, 1});
        else
            ++it->count;
    }
    return rep;
}

/// Vector-space starts drawn uniformly from the box.
inline UniquenessReport<VectorSpace::Point> uniqueness_probe(Problem<VectorSpace> const& prob, SolveConfig const& cfg,
                                                             std::size_t trials, std::uint64_t seed, Box box = {},
                                                             unsigned jobs = 1) {
    int const n = prob.maps.star.n();
    auto gen = [&](std::mt19937_64& rng) { return detail::random_tuple(prob.space, rng, box, n); };
    return uniqueness_probe(prob, cfg, trials, seed, gen, jobs);
}

/// Finite-space starts drawn uniformly from X^n.
inline UniquenessReport<int> uniqueness_probe(Problem<FiniteSpace> const& prob, SolveConfig const& cfg,
                                              std::size_t trials, std::uint64_t seed, unsigned jobs = 1) {
    int const n = prob.maps.star.n();
    int const p = prob.space.size();
    auto gen = [n, p](std::mt19937_64& rng) {
        std::uniform_int_distribution<int> pick(0, p - 1);
        Tuple<int> t(static_cast<std::size_t>(n));
        for (auto& x : t)
            x = pick(rng);
        return t;
    };
    return uniqueness_probe(prob, cfg, trials, seed, gen, jobs);
}

// ---------------------------------------------------------------------------
// Finite enumeration
// ---------------------------------------------------------------------------

namespace detail {
/// F(x_{star(i,1)}, ..., x_{star(i,n)}) straight from the table.
inline int row_value(FiniteProblem const& prob, StarOp const& star, Tuple<int> const& u, int i) {
    std::size_t idx = 0;
    for (int k = 1; k <= star.n(); ++k)
        idx = idx * static_cast<std::size_t>(prob.points()) + static_cast<std::size_t>(u[star(i, k) - 1]);
    return prob.f_table[idx];
}

template <class Pred>
std::vector<Tuple<int>> scan(FiniteProblem const& prob, StarOp const& star, std::size_t bound, Pred pred) {
    if (star.n() != prob.n)
        throw std::invalid_argument("star dimension does not match the arity of F");
    TupleIndexer ix(prob.points(), prob.n, bound);
    std::vector<Tuple<int>> out;
    for (std::size_t idx = 0; idx < ix.count(); ++idx) {
        Tuple<int> u = ix.decode(idx);
        bool ok = true;
        for (int i = 1; i <= star.n() && ok; ++i)
            ok = pred(u, i, row_value(prob, star, u, i));
        if (ok)
            out.push_back(std::move(u));
    }
    return out;
}
} // namespace detail

/// Every U with F(U*_i) = g(x_i) for all i, in lexicographic order.
inline std::vector<Tuple<int>> enumerate_star_coincidence(FiniteProblem const& prob, StarOp const& star,
                                                          std::size_t bound = default_enumeration_bound) {
    return detail::scan(prob, star, bound, [&](Tuple<int> const& u, int i, int fv) {
        return fv == prob.g(u[static_cast<std::size_t>(i - 1)]);
    });
}

/// Every U with F(U*_i) = g(x_i) = x_i for all i.
inline std::vector<Tuple<int>> enumerate_common_star_fixed(FiniteProblem const& prob, StarOp const& star,
                                                           std::size_t bound = default_enumeration_bound) {
    return detail::scan(prob, star, bound, [&](Tuple<int> const& u, int i, int fv) {
        int x = u[static_cast<std::size_t>(i - 1)];
        return fv == x && prob.g(x) == x;
    });
}

struct CrossCheck {
    std::vector<Tuple<int>> coincidence;     ///< of (F, g) under the star
    std::vector<Tuple<int>> common_fixed;    ///< of (F, g) under the star
    std::vector<Tuple<int>> product_coincidence; ///< of (F_star, G) on X^n
    std::vector<Tuple<int>> product_common_fixed;
    bool coincidence_equal = false;
    bool points_equal = false; ///< G-images of the coincidence sets agree with F_star-images
    bool fixed_equal = false;

    bool pass() const { return coincidence_equal && points_equal && fixed_equal; }
};

/// Compares the star enumeration with the coincidence and common fixed points
/// of the induced self-maps F_star and G of X^n, computed independently.
inline CrossCheck cross_check(FiniteProblem const& prob, StarOp const& star,
                              std::size_t bound = default_enumeration_bound) {
    CrossCheck cc;
    cc.coincidence = enumerate_star_coincidence(prob, star, bound);
    cc.common_fixed = enumerate_common_star_fixed(prob, star, bound);
    auto maps = prob.maps(star);
    std::set<Tuple<int>> g_points, f_points;
    for_each_tuple(
        prob.points(), prob.n,
        [&](Tuple<int> const& u) {
            auto fu = f_star(maps, u);
            auto gu = big_g(maps, u);
            if (fu == gu) {
                cc.product_coincidence.push_back(u);
                f_points.insert(fu);
                if (gu == u)
                    cc.product_common_fixed.push_back(u);
            }
        },
        bound);
    for (auto const& u : cc.coincidence)
        g_points.insert(big_g(maps, u));
    cc.coincidence_equal = cc.coincidence == cc.product_coincidence;
    cc.fixed_equal = cc.common_fixed == cc.product_common_fixed;
    cc.points_equal = g_points == f_points;
    return cc;
}

/// Where g(F(U*_i)) = F(G(U)*_i) holds at every coincidence tuple, the
/// G-image of each coincidence tuple must itself be a coincidence tuple.
/// unknown when the commuting premise fails somewhere.
inline HypothesisReport check_coincidence_propagation(FiniteProblem const& prob, StarOp const& star,
                                                      std::size_t bound = default_enumeration_bound) {
    HypothesisReport rep{"coincidence_propagation"};
    auto maps = prob.maps(star);
    auto coincidence = enumerate_star_coincidence(prob, star, bound);
    std::set<Tuple<int>> set(coincidence.begin(), coincidence.end());
    for (auto const& u : coincidence) {
        auto gu = big_g(maps, u);
        bool commute = true;
        for (int i = 1; i <= star.n() && commute; ++i)
            commute = prob.g(maps.apply_F(project_star(u, star, i))) == maps.apply_F(project_star(gu, star, i));
        if (!commute) {
            rep.verdict = Verdict::unknown;
            rep.note = "commuting premise fails at a coincidence tuple";
            return rep;
        }
    }
    for (auto const& u : coincidence) {
        ++rep.samples;
        auto gu = big_g(maps, u);
        if (!set.count(gu)) {
            rep.verdict = Verdict::fails;
            rep.witness = {{"U", u}, {"G_U", gu}};
            return rep;
        }
    }
    rep.verdict = Verdict::holds;
    return rep;
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

template <class P>
json to_json(SolveReport<P> const& r) {
    json j;
    j["status"] = std::string(to_string(r.status));
    j["iterations"] = r.iterations;
    j["point"] = r.point;
    j["residual"] = std::isfinite(r.residual) ? json(r.residual) : json(nullptr);
    json h = json::array();
    for (double v : r.history)
        h.push_back(std::isfinite(v) ? json(v) : json(nullptr));
    j["history"] = std::move(h);
    j["monotone_direction"] = r.monotone_direction ? json(std::string(to_string(*r.monotone_direction))) : json(nullptr);
    j["monotone"] = r.monotone;
    json hyp = json::array();
    for (auto const& x : r.hypotheses)
        hyp.push_back(to_json(x));
    j["hypotheses"] = std::move(hyp);
    return j;
}

template <class P>
json to_json(UniquenessReport<P> const& r) {
    json j;
    j["trials"] = r.trials;
    j["converged"] = r.converged;
    j["skipped"] = r.skipped;
    j["radius"] = r.radius;
    json cl = json::array();
    for (auto const& c : r.clusters)
        cl.push_back({{"center", c.center}, {"count", c.count}});
    j["clusters"] = std::move(cl);
    j["unique"] = r.unique();
    return j;
}

inline json to_json(CrossCheck const& c) {
    json j;
    j["coincidence"] = c.coincidence;
    j["common_fixed"] = c.common_fixed;
    j["coincidence_equal"] = c.coincidence_equal;
    j["points_equal"] = c.points_equal;
    j["fixed_equal"] = c.fixed_equal;
    j["pass"] = c.pass();
    return j;
}

} // namespace tupled
