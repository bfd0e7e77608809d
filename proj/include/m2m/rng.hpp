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

#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace m2m {

/// Philox4x32-10 counter-based block cipher.
/// Maps a 128-bit counter and 64-bit key to 128 pseudo-random bits.
class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter block(Counter ctr, Key key) noexcept;
};

/// Identifies an independent substream inside a seeded experiment.
/// Packs into 64 bits: purpose (4) | strategy (8) | lambda index (16) | trial (32).
struct StreamId {
    std::uint32_t purpose = 0;
    std::uint32_t strategy = 0;
    std::uint32_t lambda_index = 0;
    std::uint32_t trial = 0;

    std::uint64_t packed() const noexcept;
};

/// Purposes used by the simulator; drops are shared across strategies.
namespace stream_purpose {
inline constexpr std::uint32_t drops = 1;
inline constexpr std::uint32_t strategy = 2;
inline constexpr std::uint32_t bootstrap = 3;
inline constexpr std::uint32_t user = 4;
}  // namespace stream_purpose

/// A random stream keyed by (seed, stream id). The block counter advances
/// inside the stream, so 2^64 streams each hold 2^64 blocks.
/// Satisfies UniformRandomBitGenerator.
class RandomStream {
public:
    using result_type = std::uint64_t;

    RandomStream(std::uint64_t seed, std::uint64_t stream_id) noexcept;
    RandomStream(std::uint64_t seed, StreamId id) noexcept
        : RandomStream(seed, id.packed()) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept {
        return std::numeric_limits<result_type>::max();
    }

    result_type operator()() noexcept;

    /// Uniform on the open interval (0, 1).
    double uniform() noexcept;
    /// Unit-mean exponential.
    double exponential() noexcept;
    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) noexcept;

private:
    void refill() noexcept;

    Philox4x32::Key key_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    Philox4x32::Counter out_{};
    int used_ = 4;
};

}  // namespace m2m
