// Copyright 2026 The jumpdiff Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cstdint>

namespace jumpdiff {

/// Philox4x32-10 block function (Salmon et al., "Parallel random numbers:
/// as easy as 1, 2, 3"). Pure function of (counter, key).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Purpose tags keep independent draws of one path on disjoint counters.
enum class StreamPurpose : std::uint32_t {
    diffusion = 0,
    jump_times = 1,
    jump_sizes = 2,
    generic = 3,
};

/// Counter-based stream identified by (seed, stream id, purpose). Two
/// streams with different ids never share a counter, so the draws of path i
/// do not depend on how paths are distributed over workers.
class RandomStream {
public:
    RandomStream(std::uint64_t seed, std::uint64_t stream_id,
                 StreamPurpose purpose = StreamPurpose::generic);

    std::uint32_t next_u32();
    /// Uniform on the open interval (0, 1) with 53 random bits.
    double uniform();
    /// Standard normal (Box-Muller, second variate cached).
    double normal();
    double exponential(double rate);

private:
    void refill();

    std::array<std::uint32_t, 2> key_;
    std::array<std::uint32_t, 4> counter_;
    std::array<std::uint32_t, 4> block_{};
    int position_ = 4;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace jumpdiff
