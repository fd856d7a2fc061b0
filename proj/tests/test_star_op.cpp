#include <gtest/gtest.h>

#include <sstream>

#include "support.hpp"

using namespace tupled;

using Rows = std::vector<std::vector<int>>;

TEST(StarOp, ForwardCyclicMatchesMatrixDisplay) {
    EXPECT_EQ(forward_cyclic(3).rows(), (Rows{{1, 2, 3}, {2, 3, 1}, {3, 1, 2}}));
    EXPECT_EQ(forward_cyclic(4).rows(), (Rows{{1, 2, 3, 4}, {2, 3, 4, 1}, {3, 4, 1, 2}, {4, 1, 2, 3}}));
}

TEST(StarOp, BackwardCyclicRowsAreReversals) {
    EXPECT_EQ(backward_cyclic(3).rows(), (Rows{{1, 3, 2}, {2, 1, 3}, {3, 2, 1}}));
    EXPECT_EQ(backward_cyclic(4).rows(), (Rows{{1, 4, 3, 2}, {2, 1, 4, 3}, {3, 2, 1, 4}, {4, 3, 2, 1}}));
}

TEST(StarOp, SkewOperations) {
    EXPECT_EQ(skew_1(3).rows(), (Rows{{1, 2, 3}, {2, 1, 2}, {3, 2, 1}}));
    EXPECT_EQ(skew_n(3).rows(), (Rows{{1, 2, 3}, {2, 3, 2}, {3, 2, 1}}));
    EXPECT_EQ(skew_1(4).row(3)[3], 2);
}

TEST(StarOp, FixedPresets) {
    EXPECT_EQ(coupled_pair().rows(), (Rows{{1, 2}, {2, 1}}));
    EXPECT_EQ(triple_star().rows(), (Rows{{1, 2, 3}, {2, 1, 3}, {3, 2, 1}}));
    EXPECT_EQ(quadruple_star().rows(), (Rows{{1, 2, 3, 4}, {1, 4, 3, 2}, {3, 2, 1, 4}, {3, 4, 1, 2}}));
    EXPECT_EQ(preset("borcut3"), triple_star());
    EXPECT_EQ(preset("forward_cyclic", 5), forward_cyclic(5));
    EXPECT_THROW(preset("nope", 3), std::out_of_range);
}

TEST(StarOp, Permuted) {
    for (int n = 3; n <= 8; ++n) {
        EXPECT_TRUE(is_permuted(forward_cyclic(n))) << n;
        EXPECT_TRUE(is_permuted(backward_cyclic(n))) << n;
        EXPECT_FALSE(is_permuted(skew_1(n))) << n;
        EXPECT_FALSE(is_permuted(skew_n(n))) << n;
    }
    EXPECT_TRUE(is_permuted(triple_star()));
    EXPECT_TRUE(is_permuted(quadruple_star()));
    EXPECT_TRUE(is_permuted(coupled_pair()));
}

TEST(StarOp, PermutedAgreesWithImageOracle) {
    support::Rng rng(1);
    for (int t = 0; t < 300; ++t) {
        int n = support::uniform_int(rng, 2, 5);
        auto s = t % 3 == 0 ? support::random_permuted_star(rng, n) : support::random_star(rng, n);
        EXPECT_EQ(is_permuted(s), support::permuted_by_image(s));
    }
}

TEST(StarOp, RejectsOutOfRangeEntries) {
    EXPECT_THROW(make_star(2, {{1, 0}, {2, 1}}), StarError);
    EXPECT_THROW(make_star(2, {{1, 3}, {2, 1}}), StarError);
    EXPECT_THROW(make_star(2, {{1, 2}}), StarError);
    EXPECT_THROW(make_star(1, {{1}}), StarError);
    EXPECT_THROW(forward_cyclic(1), StarError);
}

TEST(StarOp, IndexAccess) {
    auto s = forward_cyclic(3);
    EXPECT_EQ(s(2, 3), 1);
    EXPECT_THROW(s(0, 1), std::out_of_range);
    EXPECT_THROW(s(1, 4), std::out_of_range);
    EXPECT_EQ(row_projection(s, 3), (std::vector<int>{3, 1, 2}));
}

TEST(StarOp, FileRoundTrip) {
    auto s = quadruple_star();
    EXPECT_EQ(parse_star(format_star(s)), s);
    EXPECT_THROW(parse_star("2\n1 0\n2 1\n"), StarError);
    EXPECT_THROW(parse_star("2\n1 2\n2\n"), StarError);
    EXPECT_THROW(parse_star(""), StarError);
}

TEST(StarOp, EntriesInRange) {
    for (int n = 2; n <= 8; ++n)
        for (auto const& s : {forward_cyclic(n), backward_cyclic(n), skew_1(n), skew_n(n)})
            for (int i = 1; i <= n; ++i)
                for (int k = 1; k <= n; ++k) {
                    EXPECT_GE(s(i, k), 1);
                    EXPECT_LE(s(i, k), n);
                }
}

TEST(StarOp, DimensionTwoCoincide) {
    EXPECT_EQ(skew_1(2), coupled_pair());
    EXPECT_EQ(skew_n(2), coupled_pair());
    EXPECT_EQ(forward_cyclic(2), coupled_pair());
    EXPECT_TRUE(is_permuted(backward_cyclic(2)));
}
