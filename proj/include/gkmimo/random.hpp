// SPDX-License-Identifier: Apache-2.0
//
// gkmimo - capacity bounds and link-level simulation for massive MIMO uplinks
// Copyright (C) 2026 The gkmimo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <array>
#include <complex>
#include <cstdint>

namespace gkmimo
{
    // Philox4x32-10 block function (as in Random123).
    using PhiloxCounter = std::array<std::uint32_t, 4>;
    using PhiloxKey = std::array<std::uint32_t, 2>;
    PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key);

    // Counter-based random stream. The stream (seed, stream_id) is a pure function of its
    // two indices, so trial i of a run always sees the same numbers no matter which worker
    // evaluates it or in which order.
    //
    // Not thread-safe; give each trial its own stream.
    class RandomStream
    {
    public:
        RandomStream(std::uint64_t seed, std::uint64_t stream_id);

        std::uint64_t next_u64();

        // Uniform on the open interval (0, 1).
        double uniform();

        // Standard normal by Box-Muller; the second value of each pair is cached.
        double normal();

        // Circularly-symmetric complex Gaussian with E|z|^2 = 1.
        std::complex<double> complex_normal();

        std::uint64_t draws() const { return block_; }

    private:
        void refill();

        PhiloxKey key_;
        std::uint64_t stream_id_;
        std::uint64_t block_ = 0;
        std::array<std::uint32_t, 4> buffer_{};
        int buffered_ = 0;
        double cached_normal_ = 0.0;
        bool has_cached_normal_ = false;
    };
}
