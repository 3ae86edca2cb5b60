// Copyright (c) 2026 The ravden authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace ravden::rng {

/// Philox4x32-10 counter-based generator. A block is a pure function of
/// (counter, key), so any pixel's random draws can be produced in any order
/// and on any thread with bit-identical results.
struct Philox4x32 {
    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

    static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                              std::array<std::uint32_t, 2> key) {
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = std::uint64_t(kMul0) * ctr[0];
            const std::uint64_t p1 = std::uint64_t(kMul1) * ctr[2];
            ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
                   static_cast<std::uint32_t>(p1),
                   static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
                   static_cast<std::uint32_t>(p0)};
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        return ctr;
    }
};

/// One 128-bit block keyed by the draw coordinates used throughout noise
/// synthesis: (seed; pixel, frame, plane, draw).
inline std::array<std::uint32_t, 4> keyed_block(std::uint64_t seed,
                                                std::uint64_t pixel_index,
                                                std::uint32_t frame_index,
                                                std::uint32_t plane,
                                                std::uint32_t draw) {
    const std::array<std::uint32_t, 4> ctr = {
        static_cast<std::uint32_t>(pixel_index),
        static_cast<std::uint32_t>(pixel_index >> 32),
        frame_index,
        (plane & 0xffu) | (draw << 8),
    };
    const std::array<std::uint32_t, 2> key = {
        static_cast<std::uint32_t>(seed),
        static_cast<std::uint32_t>(seed >> 32),
    };
    return Philox4x32::block(ctr, key);
}

inline std::uint64_t to_u64(std::uint32_t lo, std::uint32_t hi) {
    return std::uint64_t(lo) | (std::uint64_t(hi) << 32);
}

/// Uniform double in [0,1) from the top 53 bits.
inline double uniform01(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Uniform double in (0,1]; safe as a log argument.
inline double uniform01_open(std::uint64_t bits) {
    return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
}

/// Standard normal via Box-Muller from one 128-bit block.
inline double standard_normal(const std::array<std::uint32_t, 4>& block) {
    const double u1 = uniform01_open(to_u64(block[0], block[1]));
    const double u2 = uniform01(to_u64(block[2], block[3]));
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

/// Poisson draw. Inversion by sequential search for lambda <= 50, else a
/// rounded Normal(lambda, lambda) clamped at zero. The method switch depends
/// only on lambda, so a pixel's draw is reproducible regardless of context.
inline std::uint64_t poisson(double lambda, const std::array<std::uint32_t, 4>& block) {
    if (lambda <= 0.0) return 0;
    if (lambda <= 50.0) {
        const double u = uniform01(to_u64(block[0], block[1]));
        double p = std::exp(-lambda);
        double cdf = p;
        std::uint64_t k = 0;
        while (u > cdf && k < 4096) {
            ++k;
            p *= lambda / static_cast<double>(k);
            cdf += p;
        }
        return k;
    }
    const double z = standard_normal(block);
    const double value = std::round(lambda + std::sqrt(lambda) * z);
    return value <= 0.0 ? 0 : static_cast<std::uint64_t>(value);
}

}  // namespace ravden::rng
