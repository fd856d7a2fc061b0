// Random instance generators and brute-force oracles shared by the unit
// tests and the acceptance binary. Oracles index the raw tables directly and
// never go through InducedMaps, f_star or the enumeration helpers.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "tupled/tupled.hpp"

namespace support {

using tupled::FiniteProblem;
using tupled::FiniteSpace;
using tupled::StarOp;
using tupled::Tuple;
using Rng = std::mt19937_64;

inline int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

inline StarOp random_star(Rng& rng, int n) {
    std::vector<std::vector<int>> rows(n, std::vector<int>(n));
    for (auto& r : rows)
        for (auto& v : r)
            v = uniform_int(rng, 1, n);
    return StarOp::from_rows(n, rows);
}

/// Random star whose rows are random permutations.
inline StarOp random_permuted_star(Rng& rng, int n) {
    std::vector<std::vector<int>> rows(n, std::vector<int>(n));
    for (auto& r : rows) {
        std::iota(r.begin(), r.end(), 1);
        std::shuffle(r.begin(), r.end(), rng);
    }
    return StarOp::from_rows(n, rows);
}

/// Each row's image set is all of I_n.
inline bool permuted_by_image(StarOp const& s) {
    for (int i = 1; i <= s.n(); ++i) {
        std::set<int> image;
        for (int k = 1; k <= s.n(); ++k)
            image.insert(s(i, k));
        if (static_cast<int>(image.size()) != s.n())
            return false;
    }
    return true;
}

/// Points at distinct positions on the line with a random partial order:
/// random edges along a shuffled ranking, then transitive closure.
inline FiniteSpace random_finite_space(Rng& rng, int p) {
    std::vector<double> pos(p);
    std::set<int> used;
    for (auto& x : pos) {
        int v;
        do
            v = uniform_int(rng, 0, 20);
        while (!used.insert(v).second);
        x = v;
    }
    std::vector<int> rank(p);
    std::iota(rank.begin(), rank.end(), 0);
    std::shuffle(rank.begin(), rank.end(), rng);
    std::vector<std::vector<bool>> leq(p, std::vector<bool>(p, false));
    for (int i = 0; i < p; ++i)
        leq[i][i] = true;
    for (int a = 0; a < p; ++a)
        for (int b = 0; b < p; ++b)
            if (rank[a] < rank[b] && uniform_int(rng, 0, 1))
                leq[a][b] = true;
    for (int m = 0; m < p; ++m)
        for (int a = 0; a < p; ++a)
            for (int b = 0; b < p; ++b)
                if (leq[a][m] && leq[m][b])
                    leq[a][b] = true;
    std::vector<std::vector<double>> d(p, std::vector<double>(p));
    for (int a = 0; a < p; ++a)
        for (int b = 0; b < p; ++b)
            d[a][b] = std::abs(pos[a] - pos[b]);
    return FiniteSpace(d, leq);
}

inline FiniteProblem random_problem(Rng& rng, FiniteSpace space, int n, bool g_identity = false) {
    int const p = space.size();
    std::size_t count = 1;
    for (int i = 0; i < n; ++i)
        count *= static_cast<std::size_t>(p);
    std::vector<int> f(count), g(static_cast<std::size_t>(p));
    for (auto& v : f)
        v = uniform_int(rng, 0, p - 1);
    for (int x = 0; x < p; ++x)
        g[static_cast<std::size_t>(x)] = g_identity ? x : uniform_int(rng, 0, p - 1);
    return FiniteProblem(std::move(space), n, std::move(f), std::move(g));
}

// ---------------------------------------------------------------------------
// Raw-table oracles
// ---------------------------------------------------------------------------

inline std::vector<Tuple<int>> all_tuples(int p, int n) {
    std::vector<Tuple<int>> out{{}};
    for (int i = 0; i < n; ++i) {
        std::vector<Tuple<int>> next;
        for (auto const& t : out)
            for (int x = 0; x < p; ++x) {
                auto u = t;
                u.push_back(x);
                next.push_back(std::move(u));
            }
        out = std::move(next);
    }
    return out;
}

/// F applied to an explicit argument list, by mixed-radix table lookup.
inline int raw_F(FiniteProblem const& prob, Tuple<int> const& args) {
    std::size_t idx = 0;
    for (int a : args)
        idx = idx * static_cast<std::size_t>(prob.space.size()) + static_cast<std::size_t>(a);
    return prob.f_table[idx];
}

inline Tuple<int> raw_F_star(FiniteProblem const& prob, StarOp const& s, Tuple<int> const& u) {
    Tuple<int> out;
    for (int i = 1; i <= s.n(); ++i) {
        Tuple<int> args;
        for (int k = 1; k <= s.n(); ++k)
            args.push_back(u[s(i, k) - 1]);
        out.push_back(raw_F(prob, args));
    }
    return out;
}

inline Tuple<int> raw_G(FiniteProblem const& prob, Tuple<int> const& u) {
    Tuple<int> out;
    for (int x : u)
        out.push_back(prob.g_table[static_cast<std::size_t>(x)]);
    return out;
}

inline bool raw_leq_n(FiniteSpace const& s, Tuple<int> const& a, Tuple<int> const& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!s.leq(a[i], b[i]))
            return false;
    return true;
}

/// Coincidence points of the self-maps F_star and G of X^n.
inline std::vector<Tuple<int>> product_coincidence(FiniteProblem const& prob, StarOp const& s) {
    std::vector<Tuple<int>> out;
    for (auto const& u : all_tuples(prob.space.size(), prob.n))
        if (raw_F_star(prob, s, u) == raw_G(prob, u))
            out.push_back(u);
    return out;
}

/// Common fixed points of F_star and G.
inline std::vector<Tuple<int>> product_common_fixed(FiniteProblem const& prob, StarOp const& s) {
    std::vector<Tuple<int>> out;
    for (auto const& u : all_tuples(prob.space.size(), prob.n))
        if (raw_F_star(prob, s, u) == u && raw_G(prob, u) == u)
            out.push_back(u);
    return out;
}

/// g(x_i) <= g(y_i) for all i implies F(x) <= F(y).
inline bool monotone_oracle(FiniteProblem const& prob) {
    auto tuples = all_tuples(prob.space.size(), prob.n);
    for (auto const& x : tuples)
        for (auto const& y : tuples)
            if (raw_leq_n(prob.space, raw_G(prob, x), raw_G(prob, y)) &&
                !prob.space.leq(raw_F(prob, x), raw_F(prob, y)))
                return false;
    return true;
}

inline double raw_nabla(FiniteSpace const& s, Tuple<int> const& a, Tuple<int> const& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, s.distance(a[i], b[i]));
    return m;
}

/// Every G-comparable pair, as index pairs into all_tuples order.
template <class Fn>
bool all_g_comparable_pairs(FiniteProblem const& prob, Fn&& fn) {
    auto tuples = all_tuples(prob.space.size(), prob.n);
    for (auto const& u : tuples)
        for (auto const& v : tuples) {
            auto gu = raw_G(prob, u), gv = raw_G(prob, v);
            if (!raw_leq_n(prob.space, gu, gv) && !raw_leq_n(prob.space, gv, gu))
                continue;
            if (!fn(u, v))
                return false;
        }
    return true;
}

/// Three points on a chain at positions 0, L, L + delta. g maps into {0, 1}
/// and F = h(g x_1, ..., g x_n) with values in {1, 2}, so differences of F
/// (at most delta) only occur where G differs (by at least L). With a few
/// table entries flipped to break that structure.
struct ClusterInstance {
    FiniteProblem prob;
    double L;
    double delta;
};

inline ClusterInstance cluster_instance(Rng& rng, int n, double L, double delta, int noise) {
    std::vector<double> pos{0.0, L, L + delta};
    std::vector<std::vector<double>> d(3, std::vector<double>(3));
    std::vector<std::vector<bool>> o(3, std::vector<bool>(3));
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
            d[a][b] = std::abs(pos[a] - pos[b]);
            o[a][b] = a <= b;
        }
    FiniteSpace space(d, o);
    std::vector<int> g(3);
    for (auto& v : g)
        v = uniform_int(rng, 0, 1);
    auto g_tuples = all_tuples(2, n);
    std::vector<int> h(g_tuples.size());
    for (auto& v : h)
        v = uniform_int(rng, 1, 2);
    auto tuples = all_tuples(3, n);
    std::vector<int> f;
    for (auto const& t : tuples) {
        std::size_t idx = 0;
        for (int x : t)
            idx = idx * 2 + static_cast<std::size_t>(g[static_cast<std::size_t>(x)]);
        f.push_back(h[idx]);
    }
    for (int k = 0; k < noise; ++k)
        f[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(f.size()) - 1))] = uniform_int(rng, 0, 2);
    return {FiniteProblem(space, n, f, g), L, delta};
}

} // namespace support
