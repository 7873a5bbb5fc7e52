/*
   Copyright 2026 The sdde-lab Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "sdde/rng/normal.hpp"
#include "sdde/rng/philox.hpp"

using sdde::rng::GaussianStream;
using sdde::rng::Philox4x32;

// Known-answer vectors of the reference Philox4x32-10 implementation.
TEST(Philox, KnownAnswerZero) {
    const auto out = Philox4x32::generate({0, 0, 0, 0}, {0, 0});
    EXPECT_EQ(out[0], 0x6627e8d5u);
    EXPECT_EQ(out[1], 0xe169c58du);
    EXPECT_EQ(out[2], 0xbc57ac4cu);
    EXPECT_EQ(out[3], 0x9b00dbd8u);
}

TEST(Philox, KnownAnswerOnes) {
    const auto out = Philox4x32::generate({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                                          {0xffffffffu, 0xffffffffu});
    EXPECT_EQ(out[0], 0x408f276du);
    EXPECT_EQ(out[1], 0x41c83b0eu);
    EXPECT_EQ(out[2], 0xa20bc7c6u);
    EXPECT_EQ(out[3], 0x6d5451fdu);
}

TEST(Philox, KnownAnswerPi) {
    const auto out = Philox4x32::generate({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                                          {0xa4093822u, 0x299f31d0u});
    EXPECT_EQ(out[0], 0xd16cfe09u);
    EXPECT_EQ(out[1], 0x94fdccebu);
    EXPECT_EQ(out[2], 0x5001e420u);
    EXPECT_EQ(out[3], 0x24126ea1u);
}

TEST(Uniform, OpenInterval) {
    EXPECT_GT(sdde::rng::uniform_open(0, 0), 0.0);
    EXPECT_LT(sdde::rng::uniform_open(0xffffffffu, 0xffffffffu), 1.0);
}

// scipy.special.ndtri reference values
TEST(NormalQuantile, MatchesReference) {
    const std::vector<std::pair<double, double>> ref = {
        {1e-300, -37.0470962993612},   {1e-20, -9.262340089798409},   {1e-10, -6.361340902404056},
        {1e-05, -4.264890793922825},   {0.001, -3.090232306167813},   {0.02425, -1.972961051311885},
        {0.1, -1.2815515655446004},    {0.3, -0.5244005127080409},    {0.5, 0.0},
        {0.7, 0.5244005127080407},     {0.975, 1.959963984540054},    {0.999, 3.090232306167813},
        {0.999999999999, 7.0344869100478356}};
    for (auto [p, z] : ref) EXPECT_NEAR(sdde::rng::normal_quantile(p), z, 1e-13 * std::max(1.0, std::abs(z))) << p;
}

TEST(NormalQuantile, InvertsCdf) {
    // the upper tail of the cdf rounds to 1, so stay below z = 3
    for (double z = -8.0; z <= 3.0; z += 0.25)
        EXPECT_NEAR(sdde::rng::normal_quantile(sdde::rng::normal_cdf(z)), z, 1e-9 * std::max(1.0, std::abs(z)));
}

TEST(NormalQuantile, RejectsOutsideUnitInterval) {
    EXPECT_THROW(sdde::rng::normal_quantile(0.0), sdde::DomainError);
    EXPECT_THROW(sdde::rng::normal_quantile(1.0), sdde::DomainError);
    EXPECT_THROW(sdde::rng::normal_quantile(-0.5), sdde::DomainError);
}

TEST(GaussianStream, PureFunctionOfCoordinates) {
    const GaussianStream a(42, 0, 7), b(42, 0, 7);
    // random access order does not matter
    for (std::uint64_t j : {5u, 0u, 1000u, 3u}) EXPECT_EQ(a.normal(j), b.normal(j));
    EXPECT_NE(GaussianStream(42, 0, 7).normal(0), GaussianStream(42, 1, 7).normal(0));
    EXPECT_NE(GaussianStream(42, 0, 7).normal(0), GaussianStream(43, 0, 7).normal(0));
    EXPECT_NE(GaussianStream(42, 0, 7).normal(0), GaussianStream(42, 0, 8).normal(0));
}

TEST(GaussianStream, Moments) {
    const GaussianStream s(1, 0, 0);
    const int n = 200000;
    double m1 = 0, m2 = 0, m4 = 0;
    for (int j = 0; j < n; ++j) {
        const double z = s.normal(static_cast<std::uint64_t>(j));
        m1 += z;
        m2 += z * z;
        m4 += z * z * z * z;
    }
    m1 /= n;
    m2 /= n;
    m4 /= n;
    // 5 standard errors: sd(mean) = 1/sqrt(n), sd(m2) = sqrt(2/n), sd(m4) = sqrt(96/n)
    EXPECT_NEAR(m1, 0.0, 5.0 / std::sqrt(n));
    EXPECT_NEAR(m2, 1.0, 5.0 * std::sqrt(2.0 / n));
    EXPECT_NEAR(m4, 3.0, 5.0 * std::sqrt(96.0 / n));
}
