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

#ifndef MCLAB_RNG_HPP
#define MCLAB_RNG_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>

namespace mclab {

/// Philox4x64-10 block function (Salmon et al., SC'11). Stateless: maps a
/// 256-bit counter and 128-bit key to 256 random bits.
struct Philox4x64 {
    using Counter = std::array<std::uint64_t, 4>;
    using Key = std::array<std::uint64_t, 2>;

    static Counter block(Counter counter, Key key) noexcept;
};

/// A reproducible random stream.
///
/// The key is (seed, stream) and the counter is (block, substream, 0, 0), so
/// stream(seed, i) for distinct trial indices i never share a block. All
/// derived variates (uniforms, normals, indices) are computed here from the
/// raw 64-bit words, so results do not depend on the standard library's
/// distribution implementations.
class RandomStream {
   public:
    using result_type = std::uint64_t;

    RandomStream(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream = 0) noexcept
        : key_{seed, stream}, substream_(substream) {}

    static RandomStream for_trial(std::uint64_t seed, std::uint64_t trial_index) noexcept {
        return RandomStream(seed, trial_index);
    }

    /// Independent child stream sharing this stream's key.
    RandomStream split(std::uint64_t child) const noexcept {
        return RandomStream(key_[0], key_[1], substream_ + child + 1);
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }
    result_type operator()() noexcept { return next_u64(); }

    std::uint64_t next_u64() noexcept;
    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept;
    /// Uniform on (0, 1).
    double uniform_open() noexcept;
    /// Standard normal by Box-Muller.
    double normal() noexcept;
    /// +1 or -1 with equal probability.
    double rademacher() noexcept;
    /// Uniform integer in [0, n); n must be positive.
    std::uint64_t index(std::uint64_t n) noexcept;
    bool bernoulli(double p) noexcept { return uniform() < p; }

    /// Index k with probability cumulative-weight increment at k. `cumulative`
    /// must be nondecreasing with a positive last entry; zero-weight entries
    /// are never returned.
    std::size_t discrete(std::span<const double> cumulative) noexcept;

   private:
    Philox4x64::Key key_;
    std::uint64_t substream_;
    std::uint64_t block_ = 0;
    Philox4x64::Counter buffer_{};
    unsigned buffer_pos_ = 4;
    bool has_spare_normal_ = false;
    double spare_normal_ = 0.0;
};

}  // namespace mclab

#endif  // MCLAB_RNG_HPP
