/**
 * @file star_op.hpp
 * @brief Binary operations on the index set I_n = {1, ..., n}.
 *
 * A binary operation is stored as its n x n matrix representation: entry
 * (i, k) is the index i_k that feeds slot k of the i-th component equation.
 * Indices are 1-based everywhere in this interface.
 */
#pragma once

#include <algorithm>
#include <cstddef>
#include <istream>
#include <ostream>
#include <sstream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tupled {

/// Raised for malformed index matrices or out-of-range indices.
class StarError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

class StarOp {
  public:
    /// Validates shape and the containment {i_1, ..., i_n} in I_n for every row.
    static StarOp from_rows(int n, std::vector<std::vector<int>> const& rows) {
        if (n < 2)
            throw StarError("star operation needs n >= 2, got " + std::to_string(n));
        if (rows.size() != static_cast<std::size_t>(n))
            throw StarError("expected " + std::to_string(n) + " rows, got " + std::to_string(rows.size()));
        std::vector<int> flat;
        flat.reserve(static_cast<std::size_t>(n) * n);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != static_cast<std::size_t>(n))
                throw StarError("row " + std::to_string(i + 1) + " has " + std::to_string(rows[i].size()) +
                                " entries, expected " + std::to_string(n));
            for (std::size_t k = 0; k < rows[i].size(); ++k) {
                int v = rows[i][k];
                if (v < 1 || v > n)
                    throw StarError("entry (" + std::to_string(i + 1) + "," + std::to_string(k + 1) + ") = " +
                                    std::to_string(v) + " outside 1.." + std::to_string(n));
                flat.push_back(v);
            }
        }
        return StarOp(n, std::move(flat));
    }

    int n() const noexcept { return n_; }

    /// Entry (i, k), both 1-based.
    int operator()(int i, int k) const {
        check_index(i);
        check_index(k);
        return entries_[static_cast<std::size_t>(i - 1) * n_ + (k - 1)];
    }

    /// Row i as (i_1, ..., i_n).
    std::span<const int> row(int i) const {
        check_index(i);
        return {entries_.data() + static_cast<std::size_t>(i - 1) * n_, static_cast<std::size_t>(n_)};
    }

    std::vector<std::vector<int>> rows() const {
        std::vector<std::vector<int>> out;
        for (int i = 1; i <= n_; ++i) {
            auto r = row(i);
            out.emplace_back(r.begin(), r.end());
        }
        return out;
    }

    friend bool operator==(StarOp const&, StarOp const&) = default;

  private:
    StarOp(int n, std::vector<int> entries) : n_(n), entries_(std::move(entries)) {}

    void check_index(int i) const {
        if (i < 1 || i > n_)
            throw std::out_of_range("index " + std::to_string(i) + " outside 1.." + std::to_string(n_));
    }

    int n_;
    std::vector<int> entries_;
};

inline StarOp make_star(int n, std::vector<std::vector<int>> const& rows) { return StarOp::from_rows(n, rows); }

namespace detail {
inline void require_dimension(int n) {
    if (n < 2)
        throw StarError("tuple dimension must be >= 2, got " + std::to_string(n));
}

template <class EntryFn>
StarOp tabulate(int n, EntryFn entry) {
    require_dimension(n);
    std::vector<std::vector<int>> rows(n, std::vector<int>(n));
    for (int i = 1; i <= n; ++i)
        for (int k = 1; k <= n; ++k)
            rows[i - 1][k - 1] = entry(i, k);
    return StarOp::from_rows(n, rows);
}
} // namespace detail

/// F(x_i, x_{i+1}, ..., x_n, x_1, ..., x_{i-1}) = x_i.
inline StarOp forward_cyclic(int n) {
    return detail::tabulate(n, [n](int i, int k) { return k <= n - i + 1 ? i + k - 1 : i + k - n - 1; });
}

/// F(x_i, x_{i-1}, ..., x_1, x_n, ..., x_{i+1}) = x_i. The wrap-around branch
/// runs through k = n so that every row is a full cyclic reversal.
inline StarOp backward_cyclic(int n) {
    return detail::tabulate(n, [n](int i, int k) { return k <= i ? i - k + 1 : n + i - k + 1; });
}

/// F(x_i, x_{i-1}, ..., x_1, x_2, ..., x_{n-i+1}) = x_i.
inline StarOp skew_1(int n) {
    return detail::tabulate(n, [](int i, int k) { return k <= i ? i - k + 1 : k - i + 1; });
}

/// F(x_i, x_{i+1}, ..., x_n, x_{n-1}, ..., x_{n-i+1}) = x_i.
inline StarOp skew_n(int n) {
    return detail::tabulate(n, [n](int i, int k) { return k <= n - i + 1 ? i + k - 1 : 2 * n - i - k + 1; });
}

inline StarOp quadruple_star() {
    return StarOp::from_rows(4, {{1, 2, 3, 4}, {1, 4, 3, 2}, {3, 2, 1, 4}, {3, 4, 1, 2}});
}

inline StarOp triple_star() { return StarOp::from_rows(3, {{1, 2, 3}, {2, 1, 3}, {3, 2, 1}}); }

inline StarOp coupled_pair() { return StarOp::from_rows(2, {{1, 2}, {2, 1}}); }

/// True iff every row of the matrix is a permutation of I_n.
inline bool is_permuted(StarOp const& star) {
    int const n = star.n();
    std::vector<char> seen(static_cast<std::size_t>(n) + 1);
    for (int i = 1; i <= n; ++i) {
        std::fill(seen.begin(), seen.end(), 0);
        for (int idx : star.row(i)) {
            if (seen[idx])
                return false;
            seen[idx] = 1;
        }
    }
    return true;
}

inline std::vector<int> row_projection(StarOp const& star, int i) {
    auto r = star.row(i);
    return {r.begin(), r.end()};
}

inline std::vector<std::string> preset_names() {
    return {"forward_cyclic", "backward_cyclic", "skew_1", "skew_n", "karapinar4", "borcut3", "coupled2"};
}

inline bool preset_takes_dimension(std::string_view name) {
    return name == "forward_cyclic" || name == "backward_cyclic" || name == "skew_1" || name == "skew_n";
}

/// Resolves a named preset. Fixed-size presets ignore n.
inline StarOp preset(std::string_view name, int n = 0) {
    if (name == "forward_cyclic")
        return forward_cyclic(n);
    if (name == "backward_cyclic")
        return backward_cyclic(n);
    if (name == "skew_1")
        return skew_1(n);
    if (name == "skew_n")
        return skew_n(n);
    if (name == "karapinar4")
        return quadruple_star();
    if (name == "borcut3")
        return triple_star();
    if (name == "coupled2")
        return coupled_pair();
    throw std::out_of_range("unknown star preset '" + std::string(name) + "'");
}

/// Matrix file format: n on the first line, then n rows of n 1-based indices.
inline StarOp read_star(std::istream& in) {
    int n = 0;
    if (!(in >> n))
        throw StarError("star file: missing dimension on line 1");
    if (n < 2 || n > 4096)
        throw StarError("star file: dimension " + std::to_string(n) + " out of range");
    std::vector<std::vector<int>> rows(n, std::vector<int>(n));
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k)
            if (!(in >> rows[i][k]))
                throw StarError("star file: expected " + std::to_string(n * n) + " entries");
    std::string trailing;
    if (in >> trailing)
        throw StarError("star file: unexpected trailing token '" + trailing + "'");
    return StarOp::from_rows(n, rows);
}

inline StarOp parse_star(std::string const& text) {
    std::istringstream in(text);
    return read_star(in);
}

inline void write_star(std::ostream& out, StarOp const& star) {
    out << star.n() << '\n';
    for (int i = 1; i <= star.n(); ++i) {
        auto r = star.row(i);
        for (std::size_t k = 0; k < r.size(); ++k)
            out << (k ? " " : "") << r[k];
        out << '\n';
    }
}

inline std::string format_star(StarOp const& star) {
    std::ostringstream out;
    write_star(out, star);
    return out.str();
}

} // namespace tupled
