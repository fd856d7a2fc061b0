#include <gtest/gtest.h>

#include "support.hpp"

using namespace tupled;
using namespace tupled::dsl;

namespace {

double eval1(std::string const& text, std::vector<double> xs) {
    std::vector<Point> args;
    for (double x : xs)
        args.push_back({x});
    return eval_mapping(parse_mapping(text, static_cast<int>(xs.size())), args)[0];
}

ErrorKind kind_of(std::string const& text, int n, int k = 1) {
    try {
        parse_mapping(text, n, k);
    } catch (ParseError const& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no error for " << text;
    return ErrorKind::syntax;
}

Expr random_expr(support::Rng& rng, int n, int depth) {
    int pick = depth <= 0 ? support::uniform_int(rng, 0, 1) : support::uniform_int(rng, 0, 6);
    switch (pick) {
    case 0: {
        // non-negative: the parser builds negatives through negate()
        double v = support::uniform_int(rng, 0, 3) == 0 ? support::uniform_int(rng, 0, 9)
                                                        : support::uniform(rng, 0, 1e3);
        return number(v);
    }
    case 1: return variable(support::uniform_int(rng, 1, n));
    case 2: return negate(random_expr(rng, n, depth - 1));
    case 3:
    case 4:
        return binary(static_cast<BinaryOp>(support::uniform_int(rng, 0, 3)), random_expr(rng, n, depth - 1),
                      random_expr(rng, n, depth - 1));
    case 5: return call(Function::abs, {random_expr(rng, n, depth - 1)});
    default:
        return call(support::uniform_int(rng, 0, 1) ? Function::min : Function::max,
                    {random_expr(rng, n, depth - 1), random_expr(rng, n, depth - 1)});
    }
}

} // namespace

TEST(Dsl, Examples) {
    EXPECT_DOUBLE_EQ(eval1("(x1 + x2)/6 + 1", {3, 9}), 3.0);
    EXPECT_DOUBLE_EQ(eval1("x1 + x2 * 2", {1, 2}), 5.0);
    EXPECT_DOUBLE_EQ(eval1("min(x1, x2)", {0, 1}), 0.0);
    EXPECT_DOUBLE_EQ(eval1("abs(x1 - x2)", {2, 5}), 3.0);
    EXPECT_DOUBLE_EQ(eval1("-x1 - -x2", {2, 5}), 3.0);
    EXPECT_DOUBLE_EQ(eval1("1.5e2 + 0.5", {0}), 150.5);
    EXPECT_THROW(parse_mapping(".5", 1), ParseError);
}

TEST(Dsl, UnknownVariableAtOffsetZero) {
    try {
        parse_mapping("x3", 2);
        FAIL();
    } catch (ParseError const& e) {
        EXPECT_EQ(e.kind(), ErrorKind::unknown_variable);
        EXPECT_EQ(e.offset(), 0u);
        EXPECT_EQ(e.line(), 1u);
        EXPECT_EQ(e.column(), 1u);
    }
}

TEST(Dsl, ErrorKinds) {
    EXPECT_EQ(kind_of("x1 +", 1), ErrorKind::syntax);
    EXPECT_EQ(kind_of("(x1", 1), ErrorKind::syntax);
    EXPECT_EQ(kind_of("y1", 1), ErrorKind::syntax);
    EXPECT_EQ(kind_of("x0", 1), ErrorKind::unknown_variable);
    EXPECT_EQ(kind_of("abs(x1, x1)", 1), ErrorKind::arity);
    EXPECT_EQ(kind_of("min(x1)", 1), ErrorKind::arity);
    EXPECT_EQ(kind_of("[x1[1], x1[3]]", 1, 2), ErrorKind::index_range);
    EXPECT_EQ(kind_of("[x1[1]]", 1, 2), ErrorKind::arity);
    EXPECT_THROW(parse_scalar("x1"), ParseError);
    EXPECT_THROW(parse_mapping("", 1), ParseError);
}

TEST(Dsl, ErrorLineColumn) {
    try {
        parse_mapping("x1 +\n  * 2", 1);
        FAIL();
    } catch (ParseError const& e) {
        EXPECT_EQ(e.line(), 2u);
        EXPECT_EQ(e.column(), 3u);
        EXPECT_EQ(e.offset(), 7u);
    }
}

TEST(Dsl, DivisionByZeroIsAnError) {
    auto ast = parse_mapping("x1/ (x2 - x2)", 2);
    std::vector<Point> args{{1}, {4}};
    try {
        eval_mapping(ast, args);
        FAIL();
    } catch (EvalError const& e) {
        EXPECT_EQ(e.offset(), 2u);
    }
}

TEST(Dsl, VectorMappings) {
    auto ast = parse_mapping("[x1[1] + x2[2], max(x1[2], x2[1])]", 2, 2);
    std::vector<Point> args{{1, 2}, {3, 4}};
    EXPECT_EQ(eval_mapping(ast, args), (Point{5, 3}));
    auto parts = mapping_from_components({"x1[1] + x2[2]", "max(x1[2], x2[1])"}, 2, 2);
    EXPECT_TRUE(same_structure(ast, parts));
    EXPECT_TRUE(same_structure(parse_mapping(format_mapping(ast), 2, 2), ast));
}

TEST(Dsl, RoundTripExamples) {
    for (std::string text : {"(x1+x2)/6+1", "min(max(x1, x2), x1)", "1.5", "x1 - (x2 - x1)", "-(x1 * x2)",
                             "0.1 + 1e-300 * x1", "x1 / (x2 / x1)"}) {
        auto ast = parse_mapping(text, 2);
        auto again = parse_mapping(format_mapping(ast), 2);
        EXPECT_TRUE(same_structure(ast, again)) << text << " -> " << format_mapping(ast);
    }
    auto lit = parse_mapping("1.5", 1);
    EXPECT_EQ(std::get<Number>(lit.components[0]->v).value, 1.5);
    EXPECT_EQ(format_mapping(parse_mapping("min(max(x1, x2), x1)", 2)), "min(max(x1, x2), x1)");
}

TEST(Dsl, RoundTripRandomAsts) {
    support::Rng rng(101);
    for (int t = 0; t < 1000; ++t) {
        MappingAst ast{3, 1, {random_expr(rng, 3, 5)}};
        auto text = format_mapping(ast);
        auto parsed = parse_mapping(text, 3);
        ASSERT_TRUE(same_structure(parsed, ast)) << text;
        EXPECT_EQ(format_mapping(parsed), text);
    }
}

TEST(Dsl, ScalarRoundTrip) {
    auto e = parse_scalar("t / (1 + t) - min(t, 2)");
    EXPECT_TRUE(same_structure(parse_scalar(format_scalar(e)), e));
    EXPECT_DOUBLE_EQ(eval_scalar(e, 1.0), 0.5 - 1.0);
}

TEST(Dsl, PrecedenceAndAssociativity) {
    support::Rng rng(7);
    for (int t = 0; t < 1000; ++t) {
        std::vector<double> v{support::uniform(rng, -1e3, 1e3), support::uniform(rng, -1e3, 1e3),
                              support::uniform(rng, -1e3, 1e3)};
        EXPECT_EQ(eval1("x1-x2-x3", v), (v[0] - v[1]) - v[2]);
        EXPECT_EQ(eval1("x1*x2+x3", v), (v[0] * v[1]) + v[2]);
        EXPECT_EQ(eval1("x1/x2/x3", v), (v[0] / v[1]) / v[2]);
        EXPECT_EQ(eval1("x1+x2*x3", v), v[0] + (v[1] * v[2]));
        EXPECT_EQ(eval1("x1-x2-x3", v), eval1("(x1-x2)-x3", v));
        EXPECT_EQ(eval1("x1*x2+x3", v), eval1("(x1*x2)+x3", v));
    }
}

TEST(Dsl, ErrorOffsetsInsideSource) {
    support::Rng rng(13);
    std::string const alphabet = "x123[]()+-*/,. minaxbs\n";
    int errors = 0;
    for (int t = 0; t < 3000; ++t) {
        std::string s;
        int len = support::uniform_int(rng, 1, 12);
        for (int i = 0; i < len; ++i)
            s += alphabet[static_cast<std::size_t>(support::uniform_int(rng, 0, static_cast<int>(alphabet.size()) - 1))];
        try {
            parse_mapping(s, 2);
        } catch (ParseError const& e) {
            ++errors;
            EXPECT_LT(e.offset(), s.size()) << s;
            EXPECT_GE(e.line(), 1u);
            EXPECT_GE(e.column(), 1u);
        }
    }
    EXPECT_GT(errors, 0);
}

TEST(Dsl, EvalIsDeterministic) {
    support::Rng rng(3);
    for (int t = 0; t < 200; ++t) {
        MappingAst ast{3, 1, {random_expr(rng, 3, 4)}};
        std::vector<Point> args{{support::uniform(rng, -5, 5)}, {support::uniform(rng, -5, 5)},
                                {support::uniform(rng, -5, 5)}};
        try {
            auto a = eval_mapping(ast, args);
            auto b = eval_mapping(ast, args);
            EXPECT_TRUE(a == b || (std::isnan(a[0]) && std::isnan(b[0])));
        } catch (EvalError const&) {
        }
    }
}
