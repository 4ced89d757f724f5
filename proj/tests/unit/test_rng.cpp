// Copyright 2026 The mclab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <vector>

#include "mclab/rng.hpp"

namespace mclab {
namespace {

// Reference blocks from an independent Philox4x64-10 implementation.
TEST(Philox, KnownAnswers) {
    using C = Philox4x64::Counter;
    EXPECT_EQ(Philox4x64::block({1, 0, 0, 0}, {0, 0}),
              (C{0x02f4ba6408e4d89bULL, 0x3dd62b0b9ca8c5b2ULL, 0x1c8667a55d902e79ULL, 0x907d7a052fd5b4dcULL}));
    EXPECT_EQ(Philox4x64::block({2, 0, 0, 0}, {0, 0}),
              (C{0x809bf322883987c3ULL, 0x471128b9e807f7ddULL, 0xf250ba0dbec065b7ULL, 0xfc6ed66767a457bcULL}));
    EXPECT_EQ(Philox4x64::block({6, 0, 7, 0}, {0x0123456789abcdefULL, 0xfedcba9876543210ULL}),
              (C{0xe237714d64c93d6bULL, 0xdd0c4eb0b0816272ULL, 0x6a1ee9848ac5549bULL, 0x948be3a902f62f65ULL}));
}

TEST(RandomStream, SameKeySameSequence) {
    RandomStream a(42, 7);
    RandomStream b(42, 7);
    for (int i = 0; i < 100; ++i) {
        ASSERT_EQ(a.next_u64(), b.next_u64());
    }
    EXPECT_EQ(RandomStream::for_trial(42, 7).next_u64(), RandomStream(42, 7).next_u64());
}

TEST(RandomStream, DistinctStreamsAndSubstreamsDiffer) {
    std::set<std::uint64_t> firsts;
    for (std::uint64_t s = 0; s < 64; ++s) {
        firsts.insert(RandomStream(1, s).next_u64());
        firsts.insert(RandomStream(2, s).next_u64());
        firsts.insert(RandomStream(1, 0).split(s).next_u64());
    }
    EXPECT_EQ(firsts.size(), 3U * 64U);
}

TEST(RandomStream, SplitDoesNotAdvanceParent) {
    RandomStream a(9, 1);
    RandomStream b(9, 1);
    (void)a.split(3).next_u64();
    EXPECT_EQ(a.next_u64(), b.next_u64());
}

TEST(RandomStream, UniformMoments) {
    RandomStream rng(11, 0);
    const int n = 200000;
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        s += u;
        s2 += u * u;
    }
    EXPECT_NEAR(s / n, 0.5, 5.0 * std::sqrt(1.0 / 12.0 / n));
    EXPECT_NEAR(s2 / n, 1.0 / 3.0, 0.005);
}

TEST(RandomStream, NormalMoments) {
    RandomStream rng(12, 0);
    const int n = 200000;
    double s = 0.0, s2 = 0.0, s4 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z = rng.normal();
        s += z;
        s2 += z * z;
        s4 += z * z * z * z;
    }
    EXPECT_NEAR(s / n, 0.0, 5.0 / std::sqrt(n));
    EXPECT_NEAR(s2 / n, 1.0, 5.0 * std::sqrt(2.0 / n));
    EXPECT_NEAR(s4 / n, 3.0, 0.1);
}

TEST(RandomStream, IndexIsUniform) {
    RandomStream rng(13, 0);
    const std::uint64_t k = 7;
    const int n = 70000;
    std::vector<int> hist(k);
    for (int i = 0; i < n; ++i) {
        const auto j = rng.index(k);
        ASSERT_LT(j, k);
        ++hist[j];
    }
    double chi2 = 0.0;
    for (int h : hist) {
        chi2 += (h - 10000.0) * (h - 10000.0) / 10000.0;
    }
    EXPECT_LT(chi2, 22.46);  // chi^2_6 upper 0.001 quantile
}

TEST(RandomStream, DiscreteSkipsZeroWeights) {
    RandomStream rng(14, 0);
    const std::vector<double> cumulative{0.0, 1.0, 1.0, 4.0};
    std::vector<int> hist(4);
    for (int i = 0; i < 40000; ++i) {
        ++hist[rng.discrete(cumulative)];
    }
    EXPECT_EQ(hist[0], 0);
    EXPECT_EQ(hist[2], 0);
    EXPECT_NEAR(hist[1] / 40000.0, 0.25, 0.01);
}

TEST(RandomStream, RademacherIsSigned) {
    RandomStream rng(15, 0);
    int plus = 0;
    for (int i = 0; i < 10000; ++i) {
        const double r = rng.rademacher();
        ASSERT_TRUE(r == 1.0 || r == -1.0);
        plus += r > 0;
    }
    EXPECT_NEAR(plus, 5000, 250);
}

}  // namespace
}  // namespace mclab
