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

#include "gkmimo/random.hpp"

#include <cmath>
#include <numbers>

namespace gkmimo
{
    PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key)
    {
        constexpr std::uint32_t m0 = 0xD2511F53u;
        constexpr std::uint32_t m1 = 0xCD9E8D57u;
        constexpr std::uint32_t w0 = 0x9E3779B9u;
        constexpr std::uint32_t w1 = 0xBB67AE85u;

        for (int round = 0; round < 10; ++round)
        {
            const std::uint64_t p0 = static_cast<std::uint64_t>(m0) * ctr[0];
            const std::uint64_t p1 = static_cast<std::uint64_t>(m1) * ctr[2];
            const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
            const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
            key[0] += w0;
            key[1] += w1;
        }
        return ctr;
    }

    RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream_id)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          stream_id_(stream_id)
    {
    }

    void RandomStream::refill()
    {
        const PhiloxCounter ctr = {static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
                                   static_cast<std::uint32_t>(stream_id_), static_cast<std::uint32_t>(stream_id_ >> 32)};
        buffer_ = philox4x32_10(ctr, key_);
        buffered_ = 4;
        ++block_;
    }

    std::uint64_t RandomStream::next_u64()
    {
        if (buffered_ < 2)
            refill();
        const std::uint64_t hi = buffer_[4 - buffered_];
        const std::uint64_t lo = buffer_[5 - buffered_];
        buffered_ -= 2;
        return (hi << 32) | lo;
    }

    double RandomStream::uniform()
    {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double RandomStream::normal()
    {
        if (has_cached_normal_)
        {
            has_cached_normal_ = false;
            return cached_normal_;
        }
        const double r = std::sqrt(-2.0 * std::log(uniform()));
        const double phase = 2.0 * std::numbers::pi * uniform();
        cached_normal_ = r * std::sin(phase);
        has_cached_normal_ = true;
        return r * std::cos(phase);
    }

    std::complex<double> RandomStream::complex_normal()
    {
        // |z|^2 ~ Exp(1), independent uniform phase.
        const double r = std::sqrt(-std::log(uniform()));
        const double phase = 2.0 * std::numbers::pi * uniform();
        return std::polar(r, phase);
    }
}
