/*
   Copyright 2026 The m2mpower Authors

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

#include <doctest.h>

#include <cmath>
#include <concepts>
#include <random>
#include <set>

#include "m2m/rng.hpp"

using namespace m2m;

static_assert(std::uniform_random_bit_generator<RandomStream>);

TEST_CASE("philox known-answer vectors") {
    using C = Philox4x32::Counter;
    CHECK(Philox4x32::block({0, 0, 0, 0}, {0, 0}) == C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(Philox4x32::block({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
          C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(Philox4x32::block({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
          C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("stream id packs purpose, strategy, lambda index and trial") {
    const StreamId id{1, 2, 3, 4};
    CHECK(id.packed() == ((1ull << 60) | (2ull << 52) | (3ull << 32) | 4ull));
    CHECK(StreamId{0, 0, 0, 0xffffffffu}.packed() == 0xffffffffull);
    CHECK(StreamId{0xf, 0xff, 0xffff, 0}.packed() == 0xfff0ffff00000000ull);
}

TEST_CASE("streams are reproducible and independent") {
    RandomStream a(42, StreamId{1, 0, 0, 7});
    RandomStream b(42, StreamId{1, 0, 0, 7});
    RandomStream c(42, StreamId{1, 0, 0, 8});
    RandomStream d(43, StreamId{1, 0, 0, 7});
    int same_c = 0;
    int same_d = 0;
    for (int i = 0; i < 1000; ++i) {
        const auto x = a();
        CHECK(x == b());
        same_c += x == c();
        same_d += x == d();
    }
    CHECK(same_c == 0);
    CHECK(same_d == 0);
}

TEST_CASE("uniform lies strictly inside (0, 1) with mean 1/2") {
    RandomStream s(1, 99);
    const int n = 200000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double u = s.uniform();
        REQUIRE(u > 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    const double se = std::sqrt(1.0 / 12.0 / n);
    CHECK(std::abs(sum / n - 0.5) < 4.0 * se);
}

TEST_CASE("exponential has unit mean") {
    RandomStream s(2, 5);
    const int n = 200000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += s.exponential();
    CHECK(std::abs(sum / n - 1.0) < 4.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("below(n) covers [0, n) evenly") {
    RandomStream s(3, 5);
    CHECK(s.below(1) == 0u);
    const int n = 7;
    const int draws = 70000;
    std::vector<int> counts(n, 0);
    for (int i = 0; i < draws; ++i) ++counts[s.below(n)];
    double chi2 = 0.0;
    const double expect = static_cast<double>(draws) / n;
    for (int c : counts) chi2 += (c - expect) * (c - expect) / expect;
    // 6 degrees of freedom; 0.999 quantile is 22.46.
    CHECK(chi2 < 22.46);
}

TEST_CASE("works with standard distributions") {
    RandomStream s(4, 1);
    std::poisson_distribution<int> pois(10.0);
    double sum = 0.0;
    for (int i = 0; i < 20000; ++i) sum += pois(s);
    CHECK(std::abs(sum / 20000 - 10.0) < 4.0 * std::sqrt(10.0 / 20000));
}
