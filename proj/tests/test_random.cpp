#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "honeytrap/random.hpp"

using honeytrap::Rng;

TEST(Rng, SameSeedSameStream) {
    Rng a(7), b(7);
    for (int i = 0; i < 100; ++i) {
        EXPECT_EQ(a.next(), b.next());
    }
}

TEST(Rng, DeriveSeparatesStreams) {
    std::set<std::uint64_t> seen;
    for (std::uint64_t s = 0; s < 50; ++s) {
        seen.insert(Rng::derive(42, s));
    }
    EXPECT_EQ(seen.size(), 50u);
    EXPECT_EQ(Rng::derive(42, 3), Rng::derive(42, 3));
    EXPECT_NE(Rng::derive(42, 3), Rng::derive(43, 3));
}

TEST(Rng, Ranges) {
    Rng r(1);
    for (int i = 0; i < 10000; ++i) {
        const double u = r.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        ASSERT_LT(r.index(7), 7u);
        const double v = r.uniform(-2.0, 3.0);
        ASSERT_GE(v, -2.0);
        ASSERT_LT(v, 3.0);
    }
}

TEST(Rng, MomentsRoughlyRight) {
    Rng r(99);
    const int n = 20000;
    double sum = 0, sq = 0, pois = 0;
    for (int i = 0; i < n; ++i) {
        const double z = r.normal();
        sum += z;
        sq += z * z;
        pois += static_cast<double>(r.poisson(3.0));
    }
    EXPECT_NEAR(sum / n, 0.0, 0.05);
    EXPECT_NEAR(sq / n, 1.0, 0.05);
    EXPECT_NEAR(pois / n, 3.0, 0.1);
    EXPECT_NEAR(static_cast<double>(r.poisson(100.0)), 100.0, 60.0);
    EXPECT_EQ(r.poisson(0.0), 0u);
}

TEST(Rng, CategoricalSkipsZeroWeights) {
    Rng r(3);
    const std::vector<double> w{0.0, 1.0, 0.0, 3.0};
    std::array<int, 4> hits{};
    for (int i = 0; i < 4000; ++i) {
        ++hits[r.categorical(w)];
    }
    EXPECT_EQ(hits[0], 0);
    EXPECT_EQ(hits[2], 0);
    EXPECT_NEAR(hits[3] / 4000.0, 0.75, 0.03);
}

TEST(Rng, ShuffleIsPermutation) {
    Rng r(5);
    std::vector<int> v(100);
    std::iota(v.begin(), v.end(), 0);
    auto w = v;
    r.shuffle(w);
    EXPECT_NE(v, w);
    std::sort(w.begin(), w.end());
    EXPECT_EQ(v, w);
}
