/**
 * @file dsl.hpp
 * @brief A small expression language for F: (R^k)^n -> R^k, g: R^k -> R^k and
 *        scalar comparison functions phi(t).
 *
 * Grammar (left-associative binary operators):
 *
 *     expr   := term (('+' | '-') term)*
 *     term   := factor (('*' | '/') factor)*
 *     factor := number | var | call | '-' factor | '(' expr ')'
 *     var    := 'x' digits ('[' digits ']')?        -- 't' for scalar functions
 *     call   := ('min' | 'max' | 'abs') '(' expr (',' expr)* ')'
 *
 * abs takes one argument, min and max take exactly two. A k > 1 mapping is
 * written as a bracketed list "[e_1, ..., e_k]" and every variable must carry
 * a component index. Further functions (exp, sqrt, ...) would be added to
 * Function, the arity table and eval_node.
 */
#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <variant>
#include <vector>

namespace tupled::dsl {

enum class ErrorKind { syntax, unknown_variable, arity, index_range };

inline std::string_view to_string(ErrorKind k) {
    switch (k) {
    case ErrorKind::syntax: return "syntax";
    case ErrorKind::unknown_variable: return "unknown_variable";
    case ErrorKind::arity: return "arity";
    case ErrorKind::index_range: return "index_range";
    }
    return "?";
}

class ParseError : public std::runtime_error {
  public:
    ParseError(ErrorKind kind, std::size_t offset, std::size_t line, std::size_t column, std::string const& message)
        : std::runtime_error(std::string(to_string(kind)) + " at " + std::to_string(line) + ":" +
                             std::to_string(column) + ": " + message),
          kind_(kind), offset_(offset), line_(line), column_(column) {}

    ErrorKind kind() const noexcept { return kind_; }
    std::size_t offset() const noexcept { return offset_; }
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

  private:
    ErrorKind kind_;
    std::size_t offset_, line_, column_;
};

class EvalError : public std::runtime_error {
  public:
    EvalError(std::size_t offset, std::string const& message)
        : std::runtime_error(message + " (source offset " + std::to_string(offset) + ")"), offset_(offset) {}
    std::size_t offset() const noexcept { return offset_; }

  private:
    std::size_t offset_;
};

struct Node;
using Expr = std::shared_ptr<const Node>;

enum class BinaryOp { add, sub, mul, div };
enum class Function { min, max, abs };

struct Number {
    double value;
};
/// x_slot[component], both 1-based.
struct Variable {
    int slot;
    int component;
};
struct Negate {
    Expr operand;
};
struct Binary {
    BinaryOp op;
    Expr lhs, rhs;
};
struct Call {
    Function fn;
    std::vector<Expr> args;
};

struct Node {
    std::variant<Number, Variable, Negate, Binary, Call> v;
    std::size_t offset = 0; ///< source byte offset; not part of structure
};

inline Expr number(double v, std::size_t at = 0) { return std::make_shared<Node>(Node{Number{v}, at}); }
inline Expr variable(int slot, int component = 1, std::size_t at = 0) {
    return std::make_shared<Node>(Node{Variable{slot, component}, at});
}
inline Expr negate(Expr e, std::size_t at = 0) { return std::make_shared<Node>(Node{Negate{std::move(e)}, at}); }
inline Expr binary(BinaryOp op, Expr l, Expr r, std::size_t at = 0) {
    return std::make_shared<Node>(Node{Binary{op, std::move(l), std::move(r)}, at});
}
inline Expr call(Function fn, std::vector<Expr> args, std::size_t at = 0) {
    return std::make_shared<Node>(Node{Call{fn, std::move(args)}, at});
}

/// Structural equality, ignoring source offsets. Literals compare bitwise-equal.
inline bool same_structure(Expr const& a, Expr const& b) {
    if (!a || !b)
        return a == b;
    if (a->v.index() != b->v.index())
        return false;
    return std::visit(
        [&](auto const& x) -> bool {
            using T = std::decay_t<decltype(x)>;
            auto const& y = std::get<T>(b->v);
            if constexpr (std::is_same_v<T, Number>)
                return x.value == y.value && std::signbit(x.value) == std::signbit(y.value);
            else if constexpr (std::is_same_v<T, Variable>)
                return x.slot == y.slot && x.component == y.component;
            else if constexpr (std::is_same_v<T, Negate>)
                return same_structure(x.operand, y.operand);
            else if constexpr (std::is_same_v<T, Binary>)
                return x.op == y.op && same_structure(x.lhs, y.lhs) && same_structure(x.rhs, y.rhs);
            else {
                if (x.fn != y.fn || x.args.size() != y.args.size())
                    return false;
                for (std::size_t i = 0; i < x.args.size(); ++i)
                    if (!same_structure(x.args[i], y.args[i]))
                        return false;
                return true;
            }
        },
        a->v);
}

/// F: (R^k)^n -> R^k as k component expressions.
struct MappingAst {
    int arity = 1;
    int dim = 1;
    std::vector<Expr> components;
};

inline bool same_structure(MappingAst const& a, MappingAst const& b) {
    if (a.arity != b.arity || a.dim != b.dim || a.components.size() != b.components.size())
        return false;
    for (std::size_t j = 0; j < a.components.size(); ++j)
        if (!same_structure(a.components[j], b.components[j]))
            return false;
    return true;
}

namespace detail {

class Parser {
  public:
    /// scalar_t: the only variable is 't' (comparison functions).
    Parser(std::string_view src, int arity, int dim, bool scalar_t)
        : src_(src), arity_(arity), dim_(dim), scalar_t_(scalar_t) {}

    Expr parse_single() {
        skip_ws();
        if (at_end())
            fail(ErrorKind::syntax, pos_, "empty expression");
        Expr e = parse_expr();
        skip_ws();
        if (!at_end())
            fail(ErrorKind::syntax, pos_, std::string("unexpected '") + src_[pos_] + "'");
        return e;
    }

    std::vector<Expr> parse_list(int count) {
        skip_ws();
        expect('[');
        std::vector<Expr> out;
        out.push_back(parse_expr());
        skip_ws();
        while (peek() == ',') {
            ++pos_;
            out.push_back(parse_expr());
            skip_ws();
        }
        expect(']');
        skip_ws();
        if (!at_end())
            fail(ErrorKind::syntax, pos_, "trailing input after component list");
        if (out.size() != static_cast<std::size_t>(count))
            fail(ErrorKind::arity, 0,
                 "expected " + std::to_string(count) + " components, got " + std::to_string(out.size()));
        return out;
    }

    [[noreturn]] void fail(ErrorKind kind, std::size_t at, std::string const& msg) const {
        at = std::min(at, src_.empty() ? std::size_t{0} : src_.size() - 1);
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i < at; ++i) {
            if (src_[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ParseError(kind, at, line, col, msg);
    }

  private:
    bool at_end() const { return pos_ >= src_.size(); }
    char peek() const { return at_end() ? '\0' : src_[pos_]; }

    void skip_ws() {
        while (!at_end() && (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\n' || src_[pos_] == '\r'))
            ++pos_;
    }

    void expect(char c) {
        skip_ws();
        if (peek() != c)
            fail(ErrorKind::syntax, pos_, std::string("expected '") + c + "'");
        ++pos_;
    }

    Expr parse_expr() {
        Expr lhs = parse_term();
        for (;;) {
            skip_ws();
            char c = peek();
            if (c != '+' && c != '-')
                return lhs;
            std::size_t at = pos_++;
            Expr rhs = parse_term();
            lhs = binary(c == '+' ? BinaryOp::add : BinaryOp::sub, lhs, rhs, at);
        }
    }

    Expr parse_term() {
        Expr lhs = parse_factor();
        for (;;) {
            skip_ws();
            char c = peek();
            if (c != '*' && c != '/')
                return lhs;
            std::size_t at = pos_++;
            Expr rhs = parse_factor();
            lhs = binary(c == '*' ? BinaryOp::mul : BinaryOp::div, lhs, rhs, at);
        }
    }

    Expr parse_factor() {
        skip_ws();
        if (at_end())
            fail(ErrorKind::syntax, pos_, "unexpected end of input");
        char c = peek();
        std::size_t at = pos_;
        if (c == '-') {
            ++pos_;
            return negate(parse_factor(), at);
        }
        if (c == '(') {
            ++pos_;
            Expr e = parse_expr();
            expect(')');
            return e;
        }
        if (c >= '0' && c <= '9')
            return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
            return parse_identifier();
        fail(ErrorKind::syntax, pos_, std::string("unexpected '") + c + "'");
    }

    Expr parse_number() {
        std::size_t start = pos_;
        auto digits = [&] {
            std::size_t s = pos_;
            while (!at_end() && src_[pos_] >= '0' && src_[pos_] <= '9')
                ++pos_;
            return pos_ - s;
        };
        digits();
        if (peek() == '.') {
            ++pos_;
            digits();
        }
        if (peek() == 'e' || peek() == 'E') {
            ++pos_;
            if (peek() == '+' || peek() == '-')
                ++pos_;
            if (digits() == 0)
                fail(ErrorKind::syntax, pos_, "malformed exponent");
        }
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, value);
        if (ec != std::errc() || ptr != src_.data() + pos_)
            fail(ErrorKind::syntax, start, "malformed number");
        return number(value, start);
    }

    int parse_index(std::size_t at, ErrorKind overflow_kind) {
        std::size_t start = pos_;
        while (!at_end() && src_[pos_] >= '0' && src_[pos_] <= '9')
            ++pos_;
        if (pos_ == start)
            fail(ErrorKind::syntax, pos_, "expected digits");
        int value = 0;
        auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, value);
        if (ec != std::errc())
            fail(overflow_kind, at, "index too large");
        return value;
    }

    Expr parse_identifier() {
        std::size_t start = pos_;
        while (!at_end() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
            ++pos_;
        std::string_view name = src_.substr(start, pos_ - start);
        if (name == "min" || name == "max" || name == "abs")
            return parse_call(name, start);
        if (scalar_t_) {
            if (name == "t")
                return variable(1, 1, start);
            fail(ErrorKind::syntax, start, "unknown identifier '" + std::string(name) + "' (expected t)");
        }
        bool is_var = name.size() >= 2 && name[0] == 'x' &&
                      std::all_of(name.begin() + 1, name.end(), [](char ch) { return ch >= '0' && ch <= '9'; });
        if (!is_var)
            fail(ErrorKind::syntax, start, "unknown identifier '" + std::string(name) + "'");
        pos_ = start + 1;
        int slot = parse_index(start, ErrorKind::unknown_variable);
        if (slot < 1 || slot > arity_)
            fail(ErrorKind::unknown_variable, start,
                 "variable x" + std::to_string(slot) + " outside x1..x" + std::to_string(arity_));
        int component = 1;
        skip_ws();
        if (peek() == '[') {
            ++pos_;
            skip_ws();
            component = parse_index(start, ErrorKind::index_range);
            if (component < 1 || component > dim_)
                fail(ErrorKind::index_range, start,
                     "component " + std::to_string(component) + " outside 1.." + std::to_string(dim_));
            expect(']');
        } else if (dim_ > 1) {
            fail(ErrorKind::index_range, start, "component index required when k > 1");
        }
        return variable(slot, component, start);
    }

    Expr parse_call(std::string_view name, std::size_t at) {
        Function fn = name == "min" ? Function::min : name == "max" ? Function::max : Function::abs;
        expect('(');
        std::vector<Expr> args;
        args.push_back(parse_expr());
        skip_ws();
        while (peek() == ',') {
            ++pos_;
            args.push_back(parse_expr());
            skip_ws();
        }
        expect(')');
        std::size_t want = fn == Function::abs ? 1 : 2;
        if (args.size() != want)
            fail(ErrorKind::arity, at,
                 std::string(name) + " takes " + std::to_string(want) + " argument(s), got " +
                     std::to_string(args.size()));
        return call(fn, std::move(args), at);
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int arity_;
    int dim_;
    bool scalar_t_;
};

inline int precedence(Expr const& e) {
    if (auto const* b = std::get_if<Binary>(&e->v))
        return b->op == BinaryOp::add || b->op == BinaryOp::sub ? 1 : 2;
    if (std::holds_alternative<Negate>(e->v))
        return 3;
    return 4;
}

inline void format_node(std::string& out, Expr const& e, int dim, bool scalar_t) {
    auto sub = [&](Expr const& child, bool parens) {
        if (parens)
            out += '(';
        format_node(out, child, dim, scalar_t);
        if (parens)
            out += ')';
    };
    std::visit(
        [&](auto const& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, Number>) {
                char buf[64];
                auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x.value);
                out.append(buf, ptr);
            } else if constexpr (std::is_same_v<T, Variable>) {
                if (scalar_t) {
                    out += 't';
                } else {
                    out += 'x';
                    out += std::to_string(x.slot);
                    if (dim > 1) {
                        out += '[';
                        out += std::to_string(x.component);
                        out += ']';
                    }
                }
            } else if constexpr (std::is_same_v<T, Negate>) {
                out += '-';
                sub(x.operand, precedence(x.operand) < 3);
            } else if constexpr (std::is_same_v<T, Binary>) {
                int p = precedence(e);
                sub(x.lhs, precedence(x.lhs) < p);
                static constexpr char const* ops[] = {" + ", " - ", " * ", " / "};
                out += ops[static_cast<int>(x.op)];
                sub(x.rhs, precedence(x.rhs) <= p);
            } else {
                static constexpr char const* names[] = {"min(", "max(", "abs("};
                out += names[static_cast<int>(x.fn)];
                for (std::size_t i = 0; i < x.args.size(); ++i) {
                    if (i)
                        out += ", ";
                    format_node(out, x.args[i], dim, scalar_t);
                }
                out += ')';
            }
        },
        e->v);
}

template <class Lookup>
double eval_node(Expr const& e, Lookup const& lookup) {
    return std::visit(
        [&](auto const& x) -> double {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, Number>) {
                return x.value;
            } else if constexpr (std::is_same_v<T, Variable>) {
                return lookup(x.slot, x.component);
            } else if constexpr (std::is_same_v<T, Negate>) {
                return -eval_node(x.operand, lookup);
            } else if constexpr (std::is_same_v<T, Binary>) {
                double l = eval_node(x.lhs, lookup);
                double r = eval_node(x.rhs, lookup);
                switch (x.op) {
                case BinaryOp::add: return l + r;
                case BinaryOp::sub: return l - r;
                case BinaryOp::mul: return l * r;
                case BinaryOp::div:
                    if (r == 0.0)
                        throw EvalError(e->offset, "division by zero");
                    return l / r;
                }
                return 0.0;
            } else {
                switch (x.fn) {
                case Function::abs: return std::abs(eval_node(x.args[0], lookup));
                case Function::min: return std::min(eval_node(x.args[0], lookup), eval_node(x.args[1], lookup));
                case Function::max: return std::max(eval_node(x.args[0], lookup), eval_node(x.args[1], lookup));
                }
                return 0.0;
            }
        },
        e->v);
}

} // namespace detail

/// One component expression over x1..xn (with [j] component indices when k > 1).
inline Expr parse_component(std::string_view text, int n, int k = 1) {
    return detail::Parser(text, n, k, false).parse_single();
}

/// Whole mapping: a bare expression when k = 1, "[e_1, ..., e_k]" otherwise.
inline MappingAst parse_mapping(std::string_view text, int n, int k = 1) {
    if (n < 1 || k < 1)
        throw std::invalid_argument("mapping arity and dimension must be >= 1");
    detail::Parser parser(text, n, k, false);
    MappingAst ast{n, k, {}};
    if (k == 1)
        ast.components.push_back(parser.parse_single());
    else
        ast.components = parser.parse_list(k);
    return ast;
}

inline MappingAst mapping_from_components(std::vector<std::string> const& texts, int n, int k) {
    if (texts.size() != static_cast<std::size_t>(k))
        throw std::invalid_argument("expected " + std::to_string(k) + " component expressions");
    MappingAst ast{n, k, {}};
    for (auto const& t : texts)
        ast.components.push_back(parse_component(t, n, k));
    return ast;
}

/// Scalar function of t, used for comparison functions phi.
inline Expr parse_scalar(std::string_view text) { return detail::Parser(text, 1, 1, true).parse_single(); }

inline std::string format_expr(Expr const& e, int k = 1) {
    std::string out;
    detail::format_node(out, e, k, false);
    return out;
}

inline std::string format_scalar(Expr const& e) {
    std::string out;
    detail::format_node(out, e, 1, true);
    return out;
}

inline std::string format_mapping(MappingAst const& ast) {
    if (ast.dim == 1 && ast.components.size() == 1)
        return format_expr(ast.components[0], 1);
    std::string out = "[";
    for (std::size_t j = 0; j < ast.components.size(); ++j) {
        if (j)
            out += ", ";
        out += format_expr(ast.components[j], ast.dim);
    }
    return out + "]";
}

using Point = std::vector<double>;

inline double eval_expr(Expr const& e, std::span<const Point> args) {
    return detail::eval_node(e, [&](int slot, int component) {
        return args[static_cast<std::size_t>(slot - 1)][static_cast<std::size_t>(component - 1)];
    });
}

inline Point eval_mapping(MappingAst const& ast, std::span<const Point> args) {
    if (args.size() != static_cast<std::size_t>(ast.arity))
        throw std::invalid_argument("mapping expects " + std::to_string(ast.arity) + " arguments, got " +
                                    std::to_string(args.size()));
    for (auto const& a : args)
        if (a.size() != static_cast<std::size_t>(ast.dim))
            throw std::invalid_argument("argument of dimension " + std::to_string(a.size()) + ", expected " +
                                        std::to_string(ast.dim));
    Point out;
    out.reserve(ast.components.size());
    for (auto const& c : ast.components)
        out.push_back(eval_expr(c, args));
    return out;
}

inline double eval_scalar(Expr const& e, double t) {
    return detail::eval_node(e, [t](int, int) { return t; });
}

} // namespace tupled::dsl
