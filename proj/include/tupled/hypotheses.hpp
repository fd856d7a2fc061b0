/**
 * @file hypotheses.hpp
 * @brief Checkers for the hypotheses of the existence theorems.
 *
 * Every checker returns a HypothesisReport with a three-valued verdict:
 * exhaustive checks on finite spaces end in holds or fails, sampled checks on
 * R^k end in fails (with a witness that reproduces the violation) or unknown.
 * Contraction templates are all checked as "lhs <= rhs".
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <future>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "tupled/dsl.hpp"
#include "tupled/finite.hpp"
#include "tupled/product.hpp"
#include "tupled/spaces.hpp"
#include "tupled/star_op.hpp"

namespace tupled {

using json = nlohmann::ordered_json;

enum class Verdict { holds, fails, unknown };

inline std::string_view to_string(Verdict v) {
    switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::fails: return "fails";
    case Verdict::unknown: return "unknown";
    }
    return "?";
}

struct HypothesisReport {
    HypothesisReport() = default;
    explicit HypothesisReport(std::string name) : hypothesis(std::move(name)) {}

    std::string hypothesis;
    Verdict verdict = Verdict::unknown;
    json witness; ///< null unless verdict == fails
    std::size_t samples = 0;
    std::optional<std::uint64_t> seed;
    std::string note;

    bool fails() const noexcept { return verdict == Verdict::fails; }
};

inline json to_json(HypothesisReport const& r) {
    json j;
    j["hypothesis"] = r.hypothesis;
    j["verdict"] = std::string(to_string(r.verdict));
    if (!r.witness.is_null())
        j["witness"] = r.witness;
    j["samples"] = r.samples;
    j["seed"] = r.seed ? json(*r.seed) : json(nullptr);
    if (!r.note.empty())
        j["note"] = r.note;
    return j;
}

/// Raised for malformed hypothesis parameters (bad phi, bad weights, ...).
class HypothesisError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// ---------------------------------------------------------------------------
// Comparison functions
// ---------------------------------------------------------------------------

enum class PhiClass { omega, phi, none };

inline std::string_view to_string(PhiClass c) {
    switch (c) {
    case PhiClass::omega: return "Omega";
    case PhiClass::phi: return "Phi";
    case PhiClass::none: return "none";
    }
    return "?";
}

class ComparisonFn {
  public:
    /// phi(t) = alpha t. Requires 0 <= alpha < 1, which places phi in Phi.
    static ComparisonFn linear(double alpha) {
        if (!(alpha >= 0.0 && alpha < 1.0))
            throw HypothesisError("linear comparison function needs 0 <= alpha < 1, got " + std::to_string(alpha));
        ComparisonFn f;
        f.alpha_ = alpha;
        f.declared_ = PhiClass::phi;
        f.increasing_ = true;
        return f;
    }

    /// Class membership and monotonicity of an expression are declared, not proven.
    static ComparisonFn expression(dsl::Expr expr, PhiClass declared = PhiClass::omega, bool increasing = false) {
        if (!expr)
            throw HypothesisError("empty comparison function expression");
        ComparisonFn f;
        f.expr_ = std::move(expr);
        f.declared_ = declared;
        f.increasing_ = increasing;
        return f;
    }

    double operator()(double t) const { return expr_ ? dsl::eval_scalar(expr_, t) : *alpha_ * t; }

    bool is_linear() const noexcept { return alpha_.has_value(); }
    double alpha() const {
        if (!alpha_)
            throw HypothesisError("comparison function is not linear");
        return *alpha_;
    }
    PhiClass declared_class() const noexcept { return declared_; }
    bool increasing() const noexcept { return increasing_; }

    std::string describe() const {
        if (alpha_) {
            std::string s = dsl::format_scalar(dsl::number(*alpha_));
            return s + " * t";
        }
        return dsl::format_scalar(expr_);
    }

  private:
    ComparisonFn() = default;
    std::optional<double> alpha_;
    dsl::Expr expr_;
    PhiClass declared_ = PhiClass::none;
    bool increasing_ = false;
};

/// Samples phi(t) < t on a log-spaced grid over [1e-9, 1e9]. Linear phi is
/// certified by its constructor; expressions can only be falsified.
inline HypothesisReport check_phi(ComparisonFn const& phi, int grid_points = 2001) {
    HypothesisReport rep{"phi_below_identity"};
    rep.samples = static_cast<std::size_t>(grid_points);
    for (int i = 0; i < grid_points; ++i) {
        double t = std::pow(10.0, -9.0 + 18.0 * i / (grid_points - 1));
        double v = phi(t);
        if (!(v < t) || !(v >= 0.0)) {
            rep.verdict = Verdict::fails;
            rep.witness = {{"t", t}, {"phi_t", v}};
            return rep;
        }
    }
    rep.verdict = phi.is_linear() ? Verdict::holds : Verdict::unknown;
    if (!phi.is_linear())
        rep.note = "declared class " + std::string(to_string(phi.declared_class())) +
                   "; limsup condition not machine-checkable";
    return rep;
}

// ---------------------------------------------------------------------------
// Contraction variants
// ---------------------------------------------------------------------------

enum class ContractionVariant {
    avg_vii,
    max_vii_prime,
    pointwise_avg,
    pointwise_max,
    lin_avg_viii,
    lin_max_ix,
    lin_pt_max_x,
    weighted_xi,
    lin_pt_avg_xii,
};

inline constexpr ContractionVariant all_variants[] = {
    ContractionVariant::avg_vii,      ContractionVariant::max_vii_prime, ContractionVariant::pointwise_avg,
    ContractionVariant::pointwise_max, ContractionVariant::lin_avg_viii, ContractionVariant::lin_max_ix,
    ContractionVariant::lin_pt_max_x, ContractionVariant::weighted_xi,   ContractionVariant::lin_pt_avg_xii,
};

inline std::string_view to_string(ContractionVariant v) {
    switch (v) {
    case ContractionVariant::avg_vii: return "avg_vii";
    case ContractionVariant::max_vii_prime: return "max_vii_prime";
    case ContractionVariant::pointwise_avg: return "pointwise_avg";
    case ContractionVariant::pointwise_max: return "pointwise_max";
    case ContractionVariant::lin_avg_viii: return "lin_avg_viii";
    case ContractionVariant::lin_max_ix: return "lin_max_ix";
    case ContractionVariant::lin_pt_max_x: return "lin_pt_max_x";
    case ContractionVariant::weighted_xi: return "weighted_xi";
    case ContractionVariant::lin_pt_avg_xii: return "lin_pt_avg_xii";
    }
    return "?";
}

inline ContractionVariant parse_variant(std::string_view name) {
    for (auto v : all_variants)
        if (to_string(v) == name)
            return v;
    throw HypothesisError("unknown contraction variant '" + std::string(name) + "'");
}

/// Variants whose constant is a scalar alpha taken from a linear phi.
inline bool is_linear_variant(ContractionVariant v) {
    return v == ContractionVariant::lin_avg_viii || v == ContractionVariant::lin_max_ix ||
           v == ContractionVariant::lin_pt_max_x || v == ContractionVariant::lin_pt_avg_xii;
}

/// A contraction condition: the variant's inequality template plus its
/// constants (phi for the general forms and linear alpha, weights for weighted_xi).
struct Contraction {
    ContractionVariant variant = ContractionVariant::max_vii_prime;
    ComparisonFn phi = ComparisonFn::linear(0.5);
    std::vector<double> weights;

    void validate(int n) const {
        if (is_linear_variant(variant) && !phi.is_linear())
            throw HypothesisError(std::string(to_string(variant)) + " needs a linear phi");
        if (variant == ContractionVariant::weighted_xi) {
            if (weights.size() != static_cast<std::size_t>(n))
                throw HypothesisError("weighted_xi needs " + std::to_string(n) + " weights");
            double sum = 0.0;
            for (double w : weights) {
                if (!(w >= 0.0 && w < 1.0))
                    throw HypothesisError("weights must lie in [0, 1)");
                sum += w;
            }
            if (!(sum < 1.0))
                throw HypothesisError("weights must sum to less than 1");
        }
    }

    std::string describe() const {
        std::string s(to_string(variant));
        if (variant == ContractionVariant::weighted_xi) {
            s += " weights=(";
            for (std::size_t i = 0; i < weights.size(); ++i)
                s += (i ? ", " : "") + dsl::format_scalar(dsl::number(weights[i]));
            return s + ")";
        }
        return s + " phi(t)=" + phi.describe();
    }
};

struct ContractionEval {
    double lhs = 0.0;
    double rhs = 0.0;
};

inline constexpr double contraction_slack = 1e-12;

inline bool violates(ContractionEval const& e) {
    return e.lhs > e.rhs + contraction_slack * (1.0 + std::abs(e.rhs));
}

/// Both sides of the variant's inequality at the pair (U, V).
template <OrderedMetricSpace S>
ContractionEval evaluate_contraction(S const& space, InducedMaps<typename S::Point> const& maps, Contraction const& c,
                                     Tuple<typename S::Point> const& u, Tuple<typename S::Point> const& v) {
    auto const gu = big_g(maps, u);
    auto const gv = big_g(maps, v);
    double const n = static_cast<double>(u.size());
    auto pointwise = [&] { return space.distance(maps.apply_F(u), maps.apply_F(v)); };
    switch (c.variant) {
    case ContractionVariant::avg_vii:
        return {delta_n(space, f_star(maps, u), f_star(maps, v)), c.phi(delta_n(space, gu, gv))};
    case ContractionVariant::max_vii_prime:
        return {nabla_n(space, f_star(maps, u), f_star(maps, v)), c.phi(nabla_n(space, gu, gv))};
    case ContractionVariant::pointwise_avg: return {pointwise(), c.phi(delta_n(space, gu, gv))};
    case ContractionVariant::pointwise_max: return {pointwise(), c.phi(nabla_n(space, gu, gv))};
    case ContractionVariant::lin_avg_viii:
        return {delta_n(space, f_star(maps, u), f_star(maps, v)), c.phi.alpha() * delta_n(space, gu, gv)};
    case ContractionVariant::lin_max_ix:
        return {nabla_n(space, f_star(maps, u), f_star(maps, v)), c.phi.alpha() * nabla_n(space, gu, gv)};
    case ContractionVariant::lin_pt_max_x: return {pointwise(), c.phi.alpha() * nabla_n(space, gu, gv)};
    case ContractionVariant::weighted_xi: {
        double rhs = 0.0;
        for (std::size_t i = 0; i < gu.size(); ++i)
            rhs += c.weights[i] * space.distance(gu[i], gv[i]);
        return {pointwise(), rhs};
    }
    case ContractionVariant::lin_pt_avg_xii: {
        double sum = 0.0;
        for (std::size_t i = 0; i < gu.size(); ++i)
            sum += space.distance(gu[i], gv[i]);
        return {pointwise(), c.phi.alpha() / n * sum};
    }
    }
    return {};
}

/// Every condition implied by c, with its constants, c itself included.
///   pointwise_avg + permuted star               => avg_vii
///   pointwise_max + (permuted or increasing phi) => max_vii_prime
///   weighted_xi (sum = beta)                     => lin_pt_max_x (alpha = beta)
///   lin_pt_avg_xii (alpha)                       => weighted_xi (alpha / n each)
///   linear forms                                 => their phi(t) = alpha t forms
inline std::vector<Contraction> implied_conditions(Contraction const& c, bool star_permuted, int n) {
    std::vector<Contraction> out;
    auto seen = [&](ContractionVariant v) {
        return std::any_of(out.begin(), out.end(), [v](Contraction const& x) { return x.variant == v; });
    };
    std::vector<Contraction> work{c};
    while (!work.empty()) {
        Contraction cur = work.back();
        work.pop_back();
        if (seen(cur.variant))
            continue;
        out.push_back(cur);
        auto push = [&](ContractionVariant v, ComparisonFn phi, std::vector<double> w = {}) {
            work.push_back(Contraction{v, std::move(phi), std::move(w)});
        };
        switch (cur.variant) {
        case ContractionVariant::pointwise_avg:
            if (star_permuted)
                push(ContractionVariant::avg_vii, cur.phi);
            break;
        case ContractionVariant::pointwise_max:
            if (star_permuted || cur.phi.increasing())
                push(ContractionVariant::max_vii_prime, cur.phi);
            break;
        case ContractionVariant::weighted_xi: {
            double beta = 0.0;
            for (double w : cur.weights)
                beta += w;
            push(ContractionVariant::lin_pt_max_x, ComparisonFn::linear(beta));
            break;
        }
        case ContractionVariant::lin_pt_avg_xii:
            push(ContractionVariant::weighted_xi, cur.phi,
                 std::vector<double>(static_cast<std::size_t>(n), cur.phi.alpha() / n));
            push(ContractionVariant::pointwise_avg, cur.phi);
            break;
        case ContractionVariant::lin_pt_max_x: push(ContractionVariant::pointwise_max, cur.phi); break;
        case ContractionVariant::lin_avg_viii: push(ContractionVariant::avg_vii, cur.phi); break;
        case ContractionVariant::lin_max_ix: push(ContractionVariant::max_vii_prime, cur.phi); break;
        case ContractionVariant::avg_vii:
        case ContractionVariant::max_vii_prime: break;
        }
    }
    return out;
}

/// Variant-level view of implied_conditions.
inline std::set<ContractionVariant> implied_variants(ContractionVariant v, bool star_permuted, bool phi_increasing,
                                                     int n = 2) {
    Contraction c{v, ComparisonFn::linear(0.5), {}};
    if (!is_linear_variant(v) && v != ContractionVariant::weighted_xi && !phi_increasing)
        c.phi = ComparisonFn::expression(dsl::parse_scalar("t / 2"), PhiClass::omega, false);
    if (v == ContractionVariant::weighted_xi)
        c.weights.assign(static_cast<std::size_t>(n), 0.5 / n);
    std::set<ContractionVariant> out;
    for (auto const& x : implied_conditions(c, star_permuted, n))
        out.insert(x.variant);
    return out;
}

// ---------------------------------------------------------------------------
// Sampling harness
// ---------------------------------------------------------------------------

struct SamplerConfig {
    std::size_t samples = 10'000;
    Box box{};
    std::uint64_t seed = 20240601;
    unsigned jobs = 1;
};

namespace detail {

inline constexpr std::size_t chunk_size = 1024;

struct ChunkResult {
    std::size_t evaluated = 0;
    json witness; ///< null when the chunk is clean
};

/// Splits samples into fixed-size chunks, each with its own engine seeded
/// from (seed, chunk index); the earliest failing chunk wins. Results do not
/// depend on the number of jobs.
template <class ChunkFn>
ChunkResult run_chunks(SamplerConfig const& cfg, ChunkFn const& fn) {
    std::size_t const chunks = (cfg.samples + chunk_size - 1) / chunk_size;
    auto run_one = [&](std::size_t c) {
        std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                          static_cast<std::uint32_t>(c)};
        std::mt19937_64 rng(seq);
        std::size_t count = std::min(chunk_size, cfg.samples - c * chunk_size);
        return fn(rng, count);
    };
    std::vector<ChunkResult> results(chunks);
    unsigned jobs = std::max(1u, cfg.jobs);
    if (jobs == 1 || chunks <= 1) {
        for (std::size_t c = 0; c < chunks; ++c) {
            results[c] = run_one(c);
            if (!results[c].witness.is_null()) {
                results.resize(c + 1);
                break;
            }
        }
    } else {
        for (std::size_t base = 0; base < chunks; base += jobs) {
            std::vector<std::future<ChunkResult>> futs;
            for (std::size_t c = base; c < std::min<std::size_t>(chunks, base + jobs); ++c)
                futs.push_back(std::async(std::launch::async, run_one, c));
            bool stop = false;
            for (std::size_t i = 0; i < futs.size(); ++i) {
                results[base + i] = futs[i].get();
                stop = stop || !results[base + i].witness.is_null();
            }
            if (stop)
                break;
        }
    }
    ChunkResult total;
    for (auto const& r : results) {
        total.evaluated += r.evaluated;
        if (!r.witness.is_null()) {
            total.witness = r.witness;
            break;
        }
    }
    return total;
}

template <class Rng>
Tuple<VectorSpace::Point> random_tuple(VectorSpace const& space, Rng& rng, Box box, int n) {
    std::uniform_real_distribution<double> coord(box.lo, box.hi);
    Tuple<VectorSpace::Point> t(static_cast<std::size_t>(n), VectorSpace::Point(space.dimension()));
    for (auto& x : t)
        for (auto& c : x)
            c = coord(rng);
    return t;
}

/// U <= V componentwise, then kept only if G(U), G(V) are comparable.
template <class Rng>
std::optional<std::pair<Tuple<VectorSpace::Point>, Tuple<VectorSpace::Point>>>
random_g_comparable_pair(VectorSpace const& space, InducedMaps<VectorSpace::Point> const& maps, Rng& rng, Box box,
                         int attempts = 64) {
    int const n = maps.star.n();
    for (int a = 0; a < attempts; ++a) {
        Tuple<VectorSpace::Point> u, v;
        for (int i = 0; i < n; ++i) {
            auto [x, y] = random_comparable_pair(space, rng, box);
            u.push_back(std::move(x));
            v.push_back(std::move(y));
        }
        if (maps.g_is_identity())
            return std::make_pair(std::move(u), std::move(v));
        if (comparable_n(space, big_g(maps, u), big_g(maps, v)))
            return std::make_pair(std::move(u), std::move(v));
    }
    return std::nullopt;
}

inline std::size_t pair_count(std::size_t tuples, std::size_t bound) {
    if (tuples != 0 && tuples > bound / tuples)
        throw BoundExceeded(std::to_string(tuples) + "^2 tuple pairs exceed bound " + std::to_string(bound));
    return tuples * tuples;
}

} // namespace detail

inline constexpr std::size_t default_pair_bound = 100'000'000;

// ---------------------------------------------------------------------------
// Monotone properties (finite, exhaustive)
// ---------------------------------------------------------------------------

/// g(x_i) <= g(y_i) for all i  =>  F(x) <= F(y), over all tuple pairs.
inline HypothesisReport check_monotone_property(FiniteProblem const& prob, std::size_t pair_bound = default_pair_bound) {
    HypothesisReport rep{"g_monotone_property"};
    TupleIndexer ix = prob.indexer();
    rep.samples = detail::pair_count(ix.count(), pair_bound);
    std::vector<Tuple<int>> tuples;
    std::vector<Tuple<int>> g_images;
    std::vector<int> f_values;
    for (std::size_t a = 0; a < ix.count(); ++a) {
        tuples.push_back(ix.decode(a));
        Tuple<int> gt;
        for (int x : tuples.back())
            gt.push_back(prob.g(x));
        g_images.push_back(std::move(gt));
        f_values.push_back(prob.f_table[a]);
    }
    for (std::size_t a = 0; a < tuples.size(); ++a)
        for (std::size_t b = 0; b < tuples.size(); ++b) {
            if (!order_leq_n(prob.space, g_images[a], g_images[b]))
                continue;
            if (!prob.space.leq(f_values[a], f_values[b])) {
                rep.verdict = Verdict::fails;
                rep.witness = {{"x", tuples[a]}, {"y", tuples[b]}, {"F_x", f_values[a]}, {"F_y", f_values[b]}};
                return rep;
            }
        }
    rep.verdict = Verdict::holds;
    return rep;
}

/// F is g-increasing in each argument separately.
inline HypothesisReport check_argumentwise_monotone(FiniteProblem const& prob,
                                                    std::size_t pair_bound = default_pair_bound) {
    HypothesisReport rep{"argumentwise_g_monotone_property"};
    TupleIndexer ix = prob.indexer();
    int const p = prob.points();
    std::size_t const work = ix.count() * static_cast<std::size_t>(p) * static_cast<std::size_t>(prob.n);
    if (work > pair_bound)
        throw BoundExceeded("argumentwise check exceeds bound " + std::to_string(pair_bound));
    for (std::size_t idx = 0; idx < ix.count(); ++idx) {
        Tuple<int> base = ix.decode(idx);
        for (int slot = 0; slot < prob.n; ++slot) {
            for (int b = 0; b < p; ++b) {
                if (!prob.space.leq(prob.g(base[slot]), prob.g(b)))
                    continue;
                ++rep.samples;
                Tuple<int> raised = base;
                raised[slot] = b;
                int fa = prob.F(base), fb = prob.F(raised);
                if (!prob.space.leq(fa, fb)) {
                    rep.verdict = Verdict::fails;
                    rep.witness = {{"slot", slot + 1}, {"x", base}, {"y", raised}, {"F_x", fa}, {"F_y", fb}};
                    return rep;
                }
            }
        }
    }
    rep.verdict = Verdict::holds;
    return rep;
}

/// Sampled g-monotone property on R^k: unknown when no counterexample is found.
inline HypothesisReport check_monotone_sampled(VectorSpace const& space, InducedMaps<VectorSpace::Point> const& maps,
                                               SamplerConfig const& cfg) {
    HypothesisReport rep{"g_monotone_property"};
    rep.seed = cfg.seed;
    auto res = detail::run_chunks(cfg, [&](std::mt19937_64& rng, std::size_t count) {
        detail::ChunkResult out;
        for (std::size_t s = 0; s < count; ++s) {
            auto pair = detail::random_g_comparable_pair(space, maps, rng, cfg.box);
            if (!pair)
                continue;
            auto& [u, v] = *pair;
            ++out.evaluated;
            // random_g_comparable_pair only guarantees comparability; orient it.
            if (!order_leq_n(space, big_g(maps, u), big_g(maps, v)))
                std::swap(u, v);
            auto fu = maps.apply_F(u), fv = maps.apply_F(v);
            if (!space.leq(fu, fv)) {
                out.witness = {{"x", u}, {"y", v}, {"F_x", fu}, {"F_y", fv}};
                return out;
            }
        }
        return out;
    });
    rep.samples = res.evaluated;
    rep.verdict = res.witness.is_null() ? Verdict::unknown : Verdict::fails;
    rep.witness = res.witness;
    if (res.evaluated == 0)
        rep.note = "no admissible sample pairs";
    return rep;
}

// ---------------------------------------------------------------------------
// Initial condition
// ---------------------------------------------------------------------------

enum class Direction { up, down, either };

inline std::string_view to_string(Direction d) {
    switch (d) {
    case Direction::up: return "up";
    case Direction::down: return "down";
    case Direction::either: return "either";
    }
    return "?";
}

inline Direction parse_direction(std::string_view s) {
    if (s == "up")
        return Direction::up;
    if (s == "down")
        return Direction::down;
    if (s == "either")
        return Direction::either;
    throw HypothesisError("unknown direction '" + std::string(s) + "'");
}

/// g(x_i) <= F(U*_i) for every i (up), the reverse (down); nullopt if neither.
template <OrderedMetricSpace S>
std::optional<Direction> initial_direction(S const& space, InducedMaps<typename S::Point> const& maps,
                                           Tuple<typename S::Point> const& u0) {
    auto const gu = big_g(maps, u0);
    auto const fu = f_star(maps, u0);
    if (order_leq_n(space, gu, fu))
        return Direction::up;
    if (order_leq_n(space, fu, gu))
        return Direction::down;
    return std::nullopt;
}

template <OrderedMetricSpace S>
HypothesisReport check_initial_condition(S const& space, InducedMaps<typename S::Point> const& maps,
                                         Tuple<typename S::Point> const& u0, Direction direction) {
    HypothesisReport rep{"initial_condition_" + std::string(to_string(direction))};
    rep.samples = 1;
    auto const gu = big_g(maps, u0);
    auto const fu = f_star(maps, u0);
    bool const up = order_leq_n(space, gu, fu);
    bool const down = order_leq_n(space, fu, gu);
    bool ok = direction == Direction::up ? up : direction == Direction::down ? down : (up || down);
    if (ok) {
        rep.verdict = Verdict::holds;
        if (direction == Direction::either)
            rep.note = up ? "up" : "down";
        return rep;
    }
    rep.verdict = Verdict::fails;
    // Name the first component that breaks the requested direction.
    for (std::size_t i = 0; i < gu.size(); ++i) {
        bool bad = direction == Direction::up     ? !space.leq(gu[i], fu[i])
                   : direction == Direction::down ? !space.leq(fu[i], gu[i])
                                                  : true;
        if (bad) {
            rep.witness = {{"U0", u0}, {"component", i + 1}, {"g_x", gu[i]}, {"F_star_i", fu[i]}};
            break;
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Commuting
// ---------------------------------------------------------------------------

/// g(F(x_1..x_n)) = F(g x_1, ..., g x_n) for every tuple.
inline HypothesisReport check_commuting(FiniteProblem const& prob) {
    HypothesisReport rep{"commuting"};
    TupleIndexer ix = prob.indexer();
    for (std::size_t idx = 0; idx < ix.count(); ++idx) {
        Tuple<int> t = ix.decode(idx);
        Tuple<int> gt;
        for (int x : t)
            gt.push_back(prob.g(x));
        int lhs = prob.g(prob.F(t));
        int rhs = prob.F(gt);
        ++rep.samples;
        if (lhs != rhs) {
            rep.verdict = Verdict::fails;
            rep.witness = {{"x", t}, {"g_F_x", lhs}, {"F_g_x", rhs}};
            return rep;
        }
    }
    rep.verdict = Verdict::holds;
    return rep;
}

inline HypothesisReport check_commuting(VectorSpace const& space, InducedMaps<VectorSpace::Point> const& maps,
                                        SamplerConfig const& cfg) {
    HypothesisReport rep{"commuting"};
    if (maps.g_is_identity()) {
        rep.verdict = Verdict::holds;
        rep.note = "g is the identity";
        return rep;
    }
    rep.seed = cfg.seed;
    auto res = detail::run_chunks(cfg, [&](std::mt19937_64& rng, std::size_t count) {
        detail::ChunkResult out;
        for (std::size_t s = 0; s < count; ++s) {
            auto t = detail::random_tuple(space, rng, cfg.box, maps.star.n());
            auto lhs = maps.apply_g(maps.apply_F(t));
            auto rhs = maps.apply_F(big_g(maps, t));
            ++out.evaluated;
            double scale = 1.0 + std::max(space.distance(lhs, VectorSpace::Point(lhs.size(), 0.0)),
                                          space.distance(rhs, VectorSpace::Point(rhs.size(), 0.0)));
            if (space.distance(lhs, rhs) > 1e-12 * scale) {
                out.witness = {{"x", t}, {"g_F_x", lhs}, {"F_g_x", rhs}};
                return out;
            }
        }
        return out;
    });
    rep.samples = res.evaluated;
    rep.verdict = res.witness.is_null() ? Verdict::unknown : Verdict::fails;
    rep.witness = res.witness;
    return rep;
}

// ---------------------------------------------------------------------------
// Range inclusion F(X^n) in g(X)
// ---------------------------------------------------------------------------

inline HypothesisReport check_range_inclusion(FiniteProblem const& prob) {
    HypothesisReport rep{"range_inclusion"};
    std::vector<char> in_image(static_cast<std::size_t>(prob.points()), 0);
    for (int x = 0; x < prob.points(); ++x)
        in_image[static_cast<std::size_t>(prob.g(x))] = 1;
    TupleIndexer ix = prob.indexer();
    for (std::size_t idx = 0; idx < ix.count(); ++idx) {
        ++rep.samples;
        int v = prob.f_table[idx];
        if (!in_image[static_cast<std::size_t>(v)]) {
            rep.verdict = Verdict::fails;
            rep.witness = {{"x", ix.decode(idx)}, {"F_x", v}};
            return rep;
        }
    }
    rep.verdict = Verdict::holds;
    return rep;
}

/// Sampled g(g_inverse(F(x))) = F(x): the supplied inverse reaches every
/// sampled value of F, which is what the iteration needs.
inline HypothesisReport check_g_inverse(VectorSpace const& space, InducedMaps<VectorSpace::Point> const& maps,
                                        std::function<VectorSpace::Point(VectorSpace::Point const&)> const& g_inverse,
                                        SamplerConfig const& cfg) {
    HypothesisReport rep{"range_inclusion"};
    if (maps.g_is_identity()) {
        rep.verdict = Verdict::holds;
        rep.note = "g is the identity";
        return rep;
    }
    if (!g_inverse) {
        rep.verdict = Verdict::unknown;
        rep.note = "no g inverse supplied";
        return rep;
    }
    rep.seed = cfg.seed;
    auto res = detail::run_chunks(cfg, [&](std::mt19937_64& rng, std::size_t count) {
        detail::ChunkResult out;
        for (std::size_t s = 0; s < count; ++s) {
            auto t = detail::random_tuple(space, rng, cfg.box, maps.star.n());
            auto y = maps.apply_F(t);
            auto back = maps.apply_g(g_inverse(y));
            ++out.evaluated;
            double scale = 1.0 + space.distance(y, VectorSpace::Point(y.size(), 0.0));
            if (!(space.distance(back, y) <= 1e-9 * scale)) {
                out.witness = {{"x", t}, {"F_x", y}, {"g_g_inverse_F_x", back}};
                return out;
            }
        }
        return out;
    });
    rep.samples = res.evaluated;
    rep.verdict = res.witness.is_null() ? Verdict::unknown : Verdict::fails;
    rep.witness = res.witness;
    return rep;
}

// ---------------------------------------------------------------------------
// Contraction
// ---------------------------------------------------------------------------

namespace detail {
template <class P>
json contraction_witness(Tuple<P> const& u, Tuple<P> const& v, ContractionEval const& e) {
    return {{"U", u}, {"V", v}, {"lhs", e.lhs}, {"rhs", e.rhs}};
}
} // namespace detail

/// Exhaustive over all pairs with G(U) <= G(V) (the reverse orientation is the
/// swapped pair, and both sides are symmetric in U and V).
inline HypothesisReport check_contraction(FiniteProblem const& prob, StarOp const& star, Contraction const& c,
                                          std::size_t pair_bound = default_pair_bound) {
    c.validate(prob.n);
    HypothesisReport rep{"contraction_" + std::string(to_string(c.variant))};
    TupleIndexer ix = prob.indexer();
    detail::pair_count(ix.count(), pair_bound);
    auto maps = prob.maps(star);
    std::vector<Tuple<int>> tuples, g_images;
    for (std::size_t a = 0; a < ix.count(); ++a) {
        tuples.push_back(ix.decode(a));
        g_images.push_back(big_g(maps, tuples.back()));
    }
    for (std::size_t a = 0; a < tuples.size(); ++a)
        for (std::size_t b = 0; b < tuples.size(); ++b) {
            if (!order_leq_n(prob.space, g_images[a], g_images[b]))
                continue;
            ++rep.samples;
            auto e = evaluate_contraction(prob.space, maps, c, tuples[a], tuples[b]);
            if (violates(e)) {
                rep.verdict = Verdict::fails;
                rep.witness = detail::contraction_witness(tuples[a], tuples[b], e);
                return rep;
            }
        }
    rep.verdict = Verdict::holds;
    return rep;
}

/// Sampled over pairs with G-comparable images.
inline HypothesisReport check_contraction(VectorSpace const& space, InducedMaps<VectorSpace::Point> const& maps,
                                          Contraction const& c, SamplerConfig const& cfg) {
    c.validate(maps.star.n());
    if (cfg.samples == 0)
        throw HypothesisError("contraction check needs at least one sample");
    HypothesisReport rep{"contraction_" + std::string(to_string(c.variant))};
    rep.seed = cfg.seed;
    auto res = detail::run_chunks(cfg, [&](std::mt19937_64& rng, std::size_t count) {
        detail::ChunkResult out;
        for (std::size_t s = 0; s < count; ++s) {
            auto pair = detail::random_g_comparable_pair(space, maps, rng, cfg.box);
            if (!pair)
                continue;
            ++out.evaluated;
            auto e = evaluate_contraction(space, maps, c, pair->first, pair->second);
            if (violates(e)) {
                out.witness = detail::contraction_witness(pair->first, pair->second, e);
                return out;
            }
        }
        return out;
    });
    if (res.evaluated == 0)
        throw HypothesisError("sampler produced no G-comparable pairs");
    rep.samples = res.evaluated;
    rep.verdict = res.witness.is_null() ? Verdict::unknown : Verdict::fails;
    rep.witness = res.witness;
    return rep;
}

/// Checks a user-supplied list of pairs, e.g. witnesses replayed from a report.
template <OrderedMetricSpace S>
HypothesisReport check_contraction_on(S const& space, InducedMaps<typename S::Point> const& maps, Contraction const& c,
                                      std::vector<std::pair<Tuple<typename S::Point>, Tuple<typename S::Point>>> const&
                                          pairs) {
    c.validate(maps.star.n());
    if (pairs.empty())
        throw HypothesisError("contraction check needs at least one sample");
    HypothesisReport rep{"contraction_" + std::string(to_string(c.variant))};
    for (auto const& [u, v] : pairs) {
        if (!comparable_n(space, big_g(maps, u), big_g(maps, v)))
            continue;
        ++rep.samples;
        auto e = evaluate_contraction(space, maps, c, u, v);
        if (violates(e)) {
            rep.verdict = Verdict::fails;
            rep.witness = detail::contraction_witness(u, v, e);
            return rep;
        }
    }
    rep.verdict = Verdict::unknown;
    return rep;
}

// ---------------------------------------------------------------------------
// Topological flags
// ---------------------------------------------------------------------------

enum class FlagState { by_construction, declared_true, declared_false, undetermined };

inline std::string_view to_string(FlagState s) {
    switch (s) {
    case FlagState::by_construction: return "satisfied_by_construction";
    case FlagState::declared_true: return "declared_true";
    case FlagState::declared_false: return "declared_false";
    case FlagState::undetermined: return "undetermined";
    }
    return "?";
}

struct FlagSet {
    std::map<std::string, FlagState> flags;
    std::vector<std::string> warnings;

    HypothesisReport report() const {
        HypothesisReport rep{"topological_flags"};
        rep.verdict = Verdict::holds;
        rep.witness = nullptr;
        for (auto const& [name, state] : flags)
            if (state == FlagState::declared_false || state == FlagState::undetermined)
                rep.verdict = Verdict::unknown;
        for (auto const& w : warnings)
            rep.note += (rep.note.empty() ? "" : "; ") + w;
        return rep;
    }

    json to_json() const {
        json j = json::object();
        for (auto const& [name, state] : flags)
            j[name] = std::string(to_string(state));
        return j;
    }
};

inline std::vector<std::string> topological_flag_names() {
    return {"o_complete", "icu", "dcl", "mcb", "g_icu", "g_dcl", "g_mcb"};
}

/// x <= y  =>  g(x) <= g(y) on sampled comparable pairs of R^k.
inline HypothesisReport check_g_increasing(VectorSpace const& space, InducedMaps<VectorSpace::Point> const& maps,
                                           SamplerConfig const& cfg) {
    HypothesisReport rep{"g_increasing"};
    if (maps.g_is_identity()) {
        rep.verdict = Verdict::holds;
        rep.note = "g is the identity";
        return rep;
    }
    rep.seed = cfg.seed;
    auto res = detail::run_chunks(cfg, [&](std::mt19937_64& rng, std::size_t count) {
        detail::ChunkResult out;
        for (std::size_t s = 0; s < count; ++s) {
            auto [x, y] = random_comparable_pair(space, rng, cfg.box);
            ++out.evaluated;
            auto gx = maps.apply_g(x), gy = maps.apply_g(y);
            if (!space.leq(gx, gy)) {
                out.witness = {{"x", x}, {"y", y}, {"g_x", gx}, {"g_y", gy}};
                return out;
            }
        }
        return out;
    });
    rep.samples = res.evaluated;
    rep.verdict = res.witness.is_null() ? Verdict::unknown : Verdict::fails;
    rep.witness = res.witness;
    return rep;
}

/// Completeness and the ICU/DCL/MCB properties hold classically on R^k and
/// trivially on finite spaces (convergent sequences are eventually constant).
/// The g-relative versions are automatic for finite spaces, for g = id, and
/// for continuous increasing g on R^k (g_increasing: no sampled counterexample,
/// continuity is implied by the expression language); otherwise they must be
/// declared. Overrides are recorded verbatim.
inline FlagSet declare_topological_flags(std::string_view space_kind, bool g_identity,
                                         std::map<std::string, bool> const& overrides = {},
                                         bool g_increasing = false) {
    FlagSet out;
    bool const known = space_kind == "vector" || space_kind == "finite";
    if (!known) {
        for (auto const& name : topological_flag_names())
            if (!overrides.count(name))
                throw HypothesisError("space kind '" + std::string(space_kind) + "' needs an explicit '" + name +
                                      "' flag");
    }
    for (auto const& name : topological_flag_names()) {
        bool g_relative = name.rfind("g_", 0) == 0;
        FlagState s = FlagState::undetermined;
        if (known && (!g_relative || g_identity || g_increasing || space_kind == "finite"))
            s = FlagState::by_construction;
        out.flags[name] = s;
    }
    for (auto const& [name, value] : overrides) {
        out.flags[name] = value ? FlagState::declared_true : FlagState::declared_false;
        if (!value)
            out.warnings.push_back("flag '" + name + "' declared false; existence theorems may not apply");
    }
    for (auto const& [name, state] : out.flags)
        if (state == FlagState::undetermined)
            out.warnings.push_back("flag '" + name + "' not established for this g; declare it explicitly");
    return out;
}

} // namespace tupled
