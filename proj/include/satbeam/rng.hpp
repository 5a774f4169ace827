// SPDX-License-Identifier: Apache-2.0
//
// satbeam - satellite TX beamforming with terrestrial interference protection
// Copyright (C) 2025-2026 satbeam contributors
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

#ifndef SATBEAM_RNG_HPP
#define SATBEAM_RNG_HPP

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>

namespace satbeam {

/// Counter-based pseudo-random generator (Philox4x32-10).
///
/// Every stochastic routine in the library takes an explicit Rng handle so
/// that simulation sweeps are bit-reproducible. Independent streams are
/// obtained with split(), which derives a new key from the parent key, so
/// parallel work items never share a sequence.
class Rng {
  public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
    {
        key_[0] = static_cast<std::uint32_t>(seed);
        key_[1] = static_cast<std::uint32_t>(seed >> 32);
        counter_ = {static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32), 0u, 0u};
    }

    /// Derive an independent generator; index selects the child stream.
    Rng split(std::uint64_t index) const
    {
        std::array<std::uint32_t, 4> ctr = {static_cast<std::uint32_t>(index),
                                            static_cast<std::uint32_t>(index >> 32),
                                            0x5a5a5a5au, 0xa5a5a5a5u};
        std::array<std::uint32_t, 4> block = philox(ctr, key_);
        Rng child(0);
        child.key_ = {block[0], block[1]};
        child.counter_ = {block[2], block[3], 0u, 0u};
        return child;
    }

    std::uint32_t next_u32()
    {
        if (cursor_ == 4) {
            block_ = philox(counter_, key_);
            advance_counter();
            cursor_ = 0;
        }
        return block_[cursor_++];
    }

    std::uint64_t next_u64()
    {
        std::uint64_t lo = next_u32();
        std::uint64_t hi = next_u32();
        return lo | (hi << 32);
    }

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Standard normal via Box-Muller (second value cached).
    double gaussian()
    {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        // u1 in (0,1] so the log never sees zero
        double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * 3.14159265358979323846 * u2;
        cached_ = r * std::sin(a);
        have_cached_ = true;
        return r * std::cos(a);
    }

    /// Circularly symmetric complex normal CN(0,1).
    std::complex<double> complex_gaussian()
    {
        const double isqrt2 = 0.70710678118654752440;
        double re = gaussian();
        double im = gaussian();
        return {re * isqrt2, im * isqrt2};
    }

    // UniformRandomBitGenerator interface
    using result_type = std::uint32_t;
    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return 0xffffffffu; }
    result_type operator()() { return next_u32(); }

  private:
    static std::array<std::uint32_t, 4> philox(std::array<std::uint32_t, 4> ctr,
                                               std::array<std::uint32_t, 2> key)
    {
        for (int round = 0; round < 10; ++round) {
            std::uint64_t p0 = 0xD2511F53ull * ctr[0];
            std::uint64_t p1 = 0xCD9E8D57ull * ctr[2];
            std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
            std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
            std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
            std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
            key[0] += 0x9E3779B9u;
            key[1] += 0xBB67AE85u;
        }
        return ctr;
    }

    void advance_counter()
    {
        for (int i = 0; i < 4; ++i) {
            if (++counter_[i] != 0)
                break;
        }
    }

    std::array<std::uint32_t, 2> key_{};
    std::array<std::uint32_t, 4> counter_{};
    std::array<std::uint32_t, 4> block_{};
    int cursor_ = 4;
    bool have_cached_ = false;
    double cached_ = 0.0;
};

} // namespace satbeam

#endif
