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
#include <cstdint>
#include <string>

#include "ravden/config.hpp"
#include "ravden/frame.hpp"

namespace ravden::camera {

/// Deterministic render parameters. White-balance gains use the >= 1
/// convention for r/b; CCM rows each sum to 1.
struct IspParams {
    std::array<float, 3> wb_gains = {2.0f, 1.0f, 1.5f};
    std::array<float, 9> ccm = {1, 0, 0, 0, 1, 0, 0, 0, 1};  // row-major
    bool apply_tone_curve = true;

    /// Unit gains, identity CCM, tone curve off.
    static IspParams identity();

    /// Reads isp.wb_r/g/b, isp.ccm00..isp.ccm22 and isp.tone_curve,
    /// keeping defaults for keys that are absent.
    static IspParams from_config(const Config& cfg);

    void validate() const;
};

/// Shot variance scale and read noise standard deviation, both in
/// normalized intensity units.
struct NoiseParams {
    double sigma_s_sq = 0.0;
    double sigma_r = 0.0;

    void validate() const;
};

struct NoiseSeed {
    std::uint64_t seed = 0;
    std::uint32_t frame_index = 0;
};

/// sRGB frame -> packed raw. Applies, in order: sRGB electro-optical decode;
/// inverse smoothstep tone curve x = 1/2 - sin(asin(1-2y)/3) when enabled;
/// inverse CCM; inverse white balance (divide by gains); clamp to [0,1];
/// mosaic to RGGB; pack. Fully deterministic - no per-image gain jitter.
PackedRawFrame unprocess(const Frame& frame, const IspParams& params);

/// Packed raw -> sRGB frame: unpack, white-balance multiply, bilinear
/// demosaic, CCM, smoothstep tone 3x^2 - 2x^3 when enabled, sRGB encode,
/// clamp.
Frame process_isp(const PackedRawFrame& packed, const IspParams& params);

/// Shot + read noise. Per pixel p, independently:
///   k ~ Poisson(y_p / sigma_s_sq), n ~ Normal(0, sigma_r^2),
///   out = clamp(sigma_s_sq * k + n, 0, 1).
/// sigma_s_sq = 0 is the Poisson-free limit out = clamp(y + n); with both
/// parameters zero the input is returned unchanged. Randomness is keyed by
/// (seed, frame_index, plane, pixel, draw), so the output is bit-identical
/// for a given key regardless of evaluation order or thread count.
PackedRawFrame add_noise(const PackedRawFrame& packed, const NoiseParams& params,
                         const NoiseSeed& seed);

/// Noise presets iso1..iso5 spanning low to high noise. The values are
/// stand-ins, not measured sensor data; a config can override them with
/// keys like iso3.sigma_s_sq / iso3.sigma_r.
NoiseParams iso_preset(const std::string& name);
NoiseParams iso_preset(const std::string& name, const Config& cfg);

// Transfer-function helpers, exposed for reuse by tests and tools.
float srgb_decode(float v);
float srgb_encode(float v);
float smoothstep_tone(float x);
float inverse_smoothstep_tone(float y);

}  // namespace ravden::camera
