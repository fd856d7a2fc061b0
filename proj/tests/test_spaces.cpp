#include <gtest/gtest.h>

#include "support.hpp"

using namespace tupled;

TEST(VectorSpace, Metrics) {
    VectorSpace e(2), m(2, MetricKind::max), s(2, MetricKind::sum);
    VectorSpace::Point a{0, 0}, b{3, -4};
    EXPECT_DOUBLE_EQ(e.distance(a, b), 5.0);
    EXPECT_DOUBLE_EQ(m.distance(a, b), 4.0);
    EXPECT_DOUBLE_EQ(s.distance(a, b), 7.0);
    EXPECT_THROW(e.distance(a, {1.0}), std::invalid_argument);
    EXPECT_THROW(VectorSpace(0), std::invalid_argument);
}

TEST(VectorSpace, ComponentwiseOrder) {
    VectorSpace r2(2);
    EXPECT_TRUE(r2.leq({1, 2}, {1, 3}));
    EXPECT_FALSE(r2.leq({1, 2}, {0, 3}));
    EXPECT_FALSE(comparable(r2, {1, 2}, {0, 3}));
    EXPECT_TRUE(comparable(r2, {1, 2}, {1, 2}));
    Dual<VectorSpace> dual(r2);
    EXPECT_TRUE(dual.leq({1, 3}, {1, 2}));
}

TEST(VectorSpace, RandomComparablePairs) {
    VectorSpace r3(3);
    std::mt19937_64 rng(4);
    for (int i = 0; i < 200; ++i) {
        auto [x, y] = random_comparable_pair(r3, rng, Box{-1, 1});
        EXPECT_TRUE(r3.leq(x, y));
    }
    auto [x, y] = random_comparable_pair(r3, std::uint64_t{9}, Box{}, 0.0);
    EXPECT_EQ(x, y);
    EXPECT_EQ(random_comparable_pair(r3, std::uint64_t{9}, Box{}), random_comparable_pair(r3, std::uint64_t{9}, Box{}));
}

TEST(FiniteSpace, ChainIsValid) {
    auto c = FiniteSpace::chain(4);
    EXPECT_TRUE(validate_finite_space(c).ok());
    EXPECT_TRUE(c.leq(1, 3));
    EXPECT_FALSE(c.leq(3, 1));
    EXPECT_DOUBLE_EQ(c.distance(0, 3), 3.0);
    auto r = c.reversed();
    EXPECT_TRUE(r.leq(3, 1));
    EXPECT_DOUBLE_EQ(r.distance(0, 3), 3.0);
}

TEST(FiniteSpace, RandomSpacesAreValid) {
    support::Rng rng(2);
    for (int t = 0; t < 50; ++t)
        EXPECT_TRUE(validate_finite_space(support::random_finite_space(rng, support::uniform_int(rng, 1, 5))).ok());
}

TEST(FiniteSpace, ReportsEachBrokenAxiom) {
    auto has = [](ValidationReport const& r, std::string const& axiom) {
        return std::any_of(r.violations.begin(), r.violations.end(),
                           [&](Violation const& v) { return v.axiom == axiom; });
    };
    std::vector<std::vector<bool>> chain3{{true, true, true}, {false, true, true}, {false, false, true}};
    // d(0, 2) = 5 > d(0, 1) + d(1, 2) = 2
    auto tri = FiniteSpace({{0, 1, 5}, {1, 0, 1}, {5, 1, 0}}, chain3);
    auto r = validate_finite_space(tri);
    ASSERT_TRUE(has(r, "triangle"));
    auto it = std::find_if(r.violations.begin(), r.violations.end(), [](auto const& v) { return v.axiom == "triangle"; });
    EXPECT_EQ(it->witness, (std::vector<int>{0, 1, 2}));

    EXPECT_TRUE(has(validate_finite_space(FiniteSpace({{0, 1}, {2, 0}}, {{true, false}, {false, true}})), "symmetry"));
    EXPECT_TRUE(has(validate_finite_space(FiniteSpace({{0, 0}, {0, 0}}, {{true, false}, {false, true}})), "identity"));
    EXPECT_TRUE(has(validate_finite_space(FiniteSpace({{0, 1}, {1, 0}}, {{true, true}, {true, true}})), "antisymmetry"));
    EXPECT_TRUE(has(validate_finite_space(FiniteSpace({{0, 1}, {1, 0}}, {{false, false}, {false, true}})), "reflexivity"));
    EXPECT_TRUE(has(validate_finite_space(FiniteSpace({{0, -1}, {-1, 0}}, {{true, false}, {false, true}})),
                    "nonnegativity"));
    std::vector<std::vector<bool>> intransitive{{true, true, false}, {false, true, true}, {false, false, true}};
    EXPECT_TRUE(has(validate_finite_space(FiniteSpace({{0, 1, 2}, {1, 0, 1}, {2, 1, 0}}, intransitive)),
                    "transitivity"));
}

TEST(FiniteSpace, TextFormat) {
    auto s = parse_finite_space("2\n0 1\n1 0\n1 1\n0 1\n");
    EXPECT_EQ(s.size(), 2);
    EXPECT_TRUE(s.leq(0, 1));
    EXPECT_THROW(parse_finite_space("2\n0 1\n1 0\n1 2\n0 1\n"), std::invalid_argument);
    EXPECT_THROW(parse_finite_space("2\n0 1\n"), std::invalid_argument);
}

TEST(VectorSpace, TriangleInequality) {
    support::Rng rng(12);
    for (auto metric : {MetricKind::euclidean, MetricKind::max, MetricKind::sum}) {
        VectorSpace sp(3, metric);
        auto pt = [&] {
            return VectorSpace::Point{support::uniform(rng, -50, 50), support::uniform(rng, -50, 50),
                                      support::uniform(rng, -50, 50)};
        };
        for (int t = 0; t < 1000; ++t) {
            auto x = pt(), y = pt(), z = pt();
            EXPECT_LE(sp.distance(x, z), sp.distance(x, y) + sp.distance(y, z) + 1e-12);
            EXPECT_EQ(comparable(sp, x, y), comparable(sp, y, x));
        }
    }
}

TEST(FiniteSpace, AllChainsValid) {
    for (int p = 1; p <= 6; ++p)
        EXPECT_TRUE(validate_finite_space(FiniteSpace::chain(p)).ok()) << p;
}
