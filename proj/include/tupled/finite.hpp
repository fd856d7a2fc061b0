/**
 * @file finite.hpp
 * @brief Tabulated mappings F: X^n -> X and g: X -> X on a FiniteSpace, and
 *        mixed-radix enumeration of X^n.
 */
#pragma once

#include <cstddef>
#include <istream>
#include <limits>
#include <memory>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tupled/product.hpp"
#include "tupled/spaces.hpp"

namespace tupled {

/// Enumeration would visit more tuples than the configured bound.
class BoundExceeded : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::size_t default_enumeration_bound = 1'000'000;

/// p^n, or throws BoundExceeded when it exceeds bound.
inline std::size_t tuple_count(int p, int n, std::size_t bound = default_enumeration_bound) {
    std::size_t count = 1;
    for (int i = 0; i < n; ++i) {
        if (count > bound / static_cast<std::size_t>(p))
            throw BoundExceeded(std::to_string(p) + "^" + std::to_string(n) + " tuples exceed bound " +
                                std::to_string(bound));
        count *= static_cast<std::size_t>(p);
    }
    if (count > bound)
        throw BoundExceeded(std::to_string(p) + "^" + std::to_string(n) + " tuples exceed bound " +
                            std::to_string(bound));
    return count;
}

/// Tuple <-> index, first slot most significant.
class TupleIndexer {
  public:
    TupleIndexer(int p, int n, std::size_t bound = std::numeric_limits<std::size_t>::max())
        : p_(p), n_(n), count_(tuple_count(p, n, bound)) {}

    std::size_t count() const noexcept { return count_; }
    int arity() const noexcept { return n_; }

    std::size_t encode(std::span<const int> t) const {
        std::size_t idx = 0;
        for (int x : t)
            idx = idx * static_cast<std::size_t>(p_) + static_cast<std::size_t>(x);
        return idx;
    }

    Tuple<int> decode(std::size_t idx) const {
        Tuple<int> t(static_cast<std::size_t>(n_));
        for (int i = n_ - 1; i >= 0; --i) {
            t[static_cast<std::size_t>(i)] = static_cast<int>(idx % static_cast<std::size_t>(p_));
            idx /= static_cast<std::size_t>(p_);
        }
        return t;
    }

  private:
    int p_;
    int n_;
    std::size_t count_;
};

template <class Fn>
void for_each_tuple(int p, int n, Fn&& fn, std::size_t bound = default_enumeration_bound) {
    TupleIndexer ix(p, n, bound);
    for (std::size_t idx = 0; idx < ix.count(); ++idx)
        fn(ix.decode(idx));
}

/// F and g as lookup tables over a finite space.
struct FiniteProblem {
    FiniteSpace space;
    int n = 2;
    std::vector<int> f_table; ///< indexed by TupleIndexer(p, n).encode
    std::vector<int> g_table; ///< size p

    FiniteProblem(FiniteSpace s, int arity, std::vector<int> f, std::vector<int> g)
        : space(std::move(s)), n(arity), f_table(std::move(f)), g_table(std::move(g)) {
        int const p = space.size();
        if (n < 2)
            throw std::invalid_argument("arity must be >= 2");
        TupleIndexer ix(p, n);
        if (f_table.size() != ix.count())
            throw std::invalid_argument("F table has " + std::to_string(f_table.size()) + " entries, expected " +
                                        std::to_string(ix.count()));
        if (g_table.size() != static_cast<std::size_t>(p))
            throw std::invalid_argument("g table has " + std::to_string(g_table.size()) + " entries, expected " +
                                        std::to_string(p));
        for (int v : f_table)
            if (!space.contains(v))
                throw std::invalid_argument("F table value " + std::to_string(v) + " outside the space");
        for (int v : g_table)
            if (!space.contains(v))
                throw std::invalid_argument("g table value " + std::to_string(v) + " outside the space");
    }

    template <class FFn, class GFn>
    static FiniteProblem tabulate(FiniteSpace s, int arity, FFn&& f, GFn&& g) {
        int const p = s.size();
        TupleIndexer ix(p, arity);
        std::vector<int> ft(ix.count());
        for (std::size_t idx = 0; idx < ix.count(); ++idx) {
            auto t = ix.decode(idx);
            ft[idx] = f(std::span<const int>(t));
        }
        std::vector<int> gt(static_cast<std::size_t>(p));
        for (int x = 0; x < p; ++x)
            gt[static_cast<std::size_t>(x)] = g(x);
        return FiniteProblem(std::move(s), arity, std::move(ft), std::move(gt));
    }

    int points() const noexcept { return space.size(); }
    TupleIndexer indexer() const { return TupleIndexer(space.size(), n); }

    int F(std::span<const int> t) const {
        if (t.size() != static_cast<std::size_t>(n))
            throw std::invalid_argument("F expects " + std::to_string(n) + " arguments");
        return f_table[indexer().encode(t)];
    }
    int g(int x) const { return g_table.at(static_cast<std::size_t>(x)); }

    bool g_is_identity() const {
        for (int x = 0; x < points(); ++x)
            if (g(x) != x)
                return false;
        return true;
    }

    InducedMaps<int> maps(StarOp const& star) const {
        if (star.n() != n)
            throw std::invalid_argument("star dimension " + std::to_string(star.n()) + " != arity " +
                                        std::to_string(n));
        auto self = std::make_shared<FiniteProblem const>(*this);
        return InducedMaps<int>{[self](std::span<const int> t) { return self->F(t); },
                                [self](int const& x) { return self->g(x); }, star};
    }
};

/// F table file: p^n lines, each "i_1 ... i_n value" with 0-based point ids.
inline std::vector<int> read_f_table(std::istream& in, int p, int n) {
    TupleIndexer ix(p, n);
    std::vector<int> table(ix.count(), -1);
    std::string line;
    std::size_t seen = 0;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::vector<int> tokens;
        int v;
        while (ls >> v)
            tokens.push_back(v);
        if (!ls.eof())
            throw std::invalid_argument("F table line " + std::to_string(lineno) + ": non-integer token");
        if (tokens.empty())
            continue;
        if (tokens.size() != static_cast<std::size_t>(n) + 1)
            throw std::invalid_argument("F table line " + std::to_string(lineno) + ": expected " +
                                        std::to_string(n + 1) + " integers");
        for (int t : tokens)
            if (t < 0 || t >= p)
                throw std::invalid_argument("F table line " + std::to_string(lineno) + ": point id out of range");
        auto idx = ix.encode(std::span<const int>(tokens.data(), static_cast<std::size_t>(n)));
        if (table[idx] != -1)
            throw std::invalid_argument("F table line " + std::to_string(lineno) + ": duplicate tuple");
        table[idx] = tokens.back();
        ++seen;
    }
    if (seen != ix.count())
        throw std::invalid_argument("F table covers " + std::to_string(seen) + " of " + std::to_string(ix.count()) +
                                    " tuples");
    return table;
}

/// g table file: p lines, each either "value" (line order gives x) or "x value".
inline std::vector<int> read_g_table(std::istream& in, int p) {
    std::vector<int> table(static_cast<std::size_t>(p), -1);
    std::string line;
    int next = 0;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::vector<int> tokens;
        int v;
        while (ls >> v)
            tokens.push_back(v);
        if (!ls.eof())
            throw std::invalid_argument("g table line " + std::to_string(lineno) + ": non-integer token");
        if (tokens.empty())
            continue;
        int x = tokens.size() == 2 ? tokens[0] : next;
        if (tokens.size() > 2 || x < 0 || x >= p || tokens.back() < 0 || tokens.back() >= p)
            throw std::invalid_argument("g table line " + std::to_string(lineno) + ": malformed entry");
        if (table[static_cast<std::size_t>(x)] != -1)
            throw std::invalid_argument("g table line " + std::to_string(lineno) + ": duplicate point");
        table[static_cast<std::size_t>(x)] = tokens.back();
        ++next;
    }
    for (int x = 0; x < p; ++x)
        if (table[static_cast<std::size_t>(x)] == -1)
            throw std::invalid_argument("g table missing point " + std::to_string(x));
    return table;
}

} // namespace tupled
