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

#include "ravden/camera.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ravden/rng.hpp"

namespace ravden::camera {

namespace {

constexpr float kRowSumTolerance = 1e-6f;

// 3x3 inverse by adjugate. Throws on a singular matrix.
std::array<float, 9> invert3x3(const std::array<float, 9>& m) {
    const double a = m[0], b = m[1], c = m[2];
    const double d = m[3], e = m[4], f = m[5];
    const double g = m[6], h = m[7], i = m[8];
    const double det = a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g);
    if (std::abs(det) < 1e-12) {
        throw std::invalid_argument("IspParams: singular color matrix");
    }
    const double inv = 1.0 / det;
    return {
        static_cast<float>((e * i - f * h) * inv),
        static_cast<float>((c * h - b * i) * inv),
        static_cast<float>((b * f - c * e) * inv),
        static_cast<float>((f * g - d * i) * inv),
        static_cast<float>((a * i - c * g) * inv),
        static_cast<float>((c * d - a * f) * inv),
        static_cast<float>((d * h - e * g) * inv),
        static_cast<float>((b * g - a * h) * inv),
        static_cast<float>((a * e - b * d) * inv),
    };
}

inline void apply3x3(const std::array<float, 9>& m, float& r, float& g, float& b) {
    const float nr = m[0] * r + m[1] * g + m[2] * b;
    const float ng = m[3] * r + m[4] * g + m[5] * b;
    const float nb = m[6] * r + m[7] * g + m[8] * b;
    r = nr;
    g = ng;
    b = nb;
}

// Reflects a single-step neighbor back inside the image. A one-cell
// reflection lands on the nearest valid sample of the same CFA channel.
inline int reflect(int i, int n) {
    if (i < 0) return -i;
    if (i >= n) return 2 * n - 2 - i;
    return i;
}

}  // namespace

IspParams IspParams::identity() {
    IspParams p;
    p.wb_gains = {1.0f, 1.0f, 1.0f};
    p.ccm = {1, 0, 0, 0, 1, 0, 0, 0, 1};
    p.apply_tone_curve = false;
    return p;
}

IspParams IspParams::from_config(const Config& cfg) {
    IspParams p;
    p.wb_gains[0] = static_cast<float>(cfg.get_double_or("isp.wb_r", p.wb_gains[0]));
    p.wb_gains[1] = static_cast<float>(cfg.get_double_or("isp.wb_g", p.wb_gains[1]));
    p.wb_gains[2] = static_cast<float>(cfg.get_double_or("isp.wb_b", p.wb_gains[2]));
    static const char* kCcmKeys[9] = {
        "isp.ccm00", "isp.ccm01", "isp.ccm02", "isp.ccm10", "isp.ccm11",
        "isp.ccm12", "isp.ccm20", "isp.ccm21", "isp.ccm22",
    };
    for (int i = 0; i < 9; ++i) {
        p.ccm[i] = static_cast<float>(cfg.get_double_or(kCcmKeys[i], p.ccm[i]));
    }
    p.apply_tone_curve = cfg.get_bool_or("isp.tone_curve", p.apply_tone_curve);
    p.validate();
    return p;
}

void IspParams::validate() const {
    for (const float g : wb_gains) {
        if (!(g > 0.0f)) {
            throw std::invalid_argument("IspParams: gains must be positive");
        }
    }
    for (int row = 0; row < 3; ++row) {
        const float sum = ccm[3 * row] + ccm[3 * row + 1] + ccm[3 * row + 2];
        if (std::abs(sum - 1.0f) > kRowSumTolerance) {
            throw std::invalid_argument("IspParams: CCM rows must sum to 1");
        }
    }
}

void NoiseParams::validate() const {
    if (sigma_s_sq < 0.0 || sigma_r < 0.0) {
        throw std::invalid_argument("NoiseParams: parameters must be non-negative");
    }
}

float srgb_decode(float v) {
    return v <= 0.04045f ? v / 12.92f : std::pow((v + 0.055f) / 1.055f, 2.4f);
}

float srgb_encode(float v) {
    return v <= 0.0031308f ? v * 12.92f : 1.055f * std::pow(v, 1.0f / 2.4f) - 0.055f;
}

float smoothstep_tone(float x) {
    return x * x * (3.0f - 2.0f * x);
}

float inverse_smoothstep_tone(float y) {
    const float t = std::clamp(1.0f - 2.0f * y, -1.0f, 1.0f);
    return 0.5f - std::sin(std::asin(t) / 3.0f);
}

PackedRawFrame unprocess(const Frame& frame, const IspParams& params) {
    params.validate();
    if (frame.channels() != 3) {
        throw std::invalid_argument("unprocess: expected a 3-channel sRGB frame");
    }
    if (frame.height() % 2 != 0 || frame.width() % 2 != 0) {
        throw std::invalid_argument("unprocess: dimensions must be even for mosaicing");
    }
    const auto inv_ccm = invert3x3(params.ccm);

    RawBayerFrame mosaic(frame.height(), frame.width());
    for (int y = 0; y < frame.height(); ++y) {
        for (int x = 0; x < frame.width(); ++x) {
            float r = srgb_decode(frame.at(0, y, x));
            float g = srgb_decode(frame.at(1, y, x));
            float b = srgb_decode(frame.at(2, y, x));
            if (params.apply_tone_curve) {
                r = inverse_smoothstep_tone(r);
                g = inverse_smoothstep_tone(g);
                b = inverse_smoothstep_tone(b);
            }
            apply3x3(inv_ccm, r, g, b);
            r = std::clamp(r / params.wb_gains[0], 0.0f, 1.0f);
            g = std::clamp(g / params.wb_gains[1], 0.0f, 1.0f);
            b = std::clamp(b / params.wb_gains[2], 0.0f, 1.0f);
            // RGGB site selection.
            const bool odd_row = (y % 2) != 0;
            const bool odd_col = (x % 2) != 0;
            mosaic.at(y, x) = odd_row ? (odd_col ? b : g) : (odd_col ? g : r);
        }
    }
    return pack_bayer(mosaic);
}

Frame process_isp(const PackedRawFrame& packed, const IspParams& params) {
    params.validate();
    const RawBayerFrame bayer = unpack_bayer(packed);
    const int height = bayer.height();
    const int width = bayer.width();

    // White balance at the CFA sites.
    RawBayerFrame balanced(height, width);
    for (int y = 0; y < height; ++y) {
        const bool odd_row = (y % 2) != 0;
        for (int x = 0; x < width; ++x) {
            const bool odd_col = (x % 2) != 0;
            const float gain = odd_row ? (odd_col ? params.wb_gains[2] : params.wb_gains[1])
                                       : (odd_col ? params.wb_gains[1] : params.wb_gains[0]);
            balanced.at(y, x) = bayer.at(y, x) * gain;
        }
    }

    const auto v = [&](int y, int x) {
        return balanced.at(reflect(y, height), reflect(x, width));
    };

    Frame out(height, width, 3, Colorspace::SrgbEncoded);
    for (int y = 0; y < height; ++y) {
        const bool odd_row = (y % 2) != 0;
        for (int x = 0; x < width; ++x) {
            const bool odd_col = (x % 2) != 0;
            float r, g, b;
            if (!odd_row && !odd_col) {  // R site
                r = v(y, x);
                g = 0.25f * (v(y - 1, x) + v(y + 1, x) + v(y, x - 1) + v(y, x + 1));
                b = 0.25f * (v(y - 1, x - 1) + v(y - 1, x + 1) + v(y + 1, x - 1) +
                             v(y + 1, x + 1));
            } else if (!odd_row && odd_col) {  // G site on an R row
                g = v(y, x);
                r = 0.5f * (v(y, x - 1) + v(y, x + 1));
                b = 0.5f * (v(y - 1, x) + v(y + 1, x));
            } else if (odd_row && !odd_col) {  // G site on a B row
                g = v(y, x);
                r = 0.5f * (v(y - 1, x) + v(y + 1, x));
                b = 0.5f * (v(y, x - 1) + v(y, x + 1));
            } else {  // B site
                b = v(y, x);
                g = 0.25f * (v(y - 1, x) + v(y + 1, x) + v(y, x - 1) + v(y, x + 1));
                r = 0.25f * (v(y - 1, x - 1) + v(y - 1, x + 1) + v(y + 1, x - 1) +
                             v(y + 1, x + 1));
            }
            apply3x3(params.ccm, r, g, b);
            if (params.apply_tone_curve) {
                r = smoothstep_tone(std::clamp(r, 0.0f, 1.0f));
                g = smoothstep_tone(std::clamp(g, 0.0f, 1.0f));
                b = smoothstep_tone(std::clamp(b, 0.0f, 1.0f));
            }
            out.at(0, y, x) = std::clamp(srgb_encode(std::clamp(r, 0.0f, 1.0f)), 0.0f, 1.0f);
            out.at(1, y, x) = std::clamp(srgb_encode(std::clamp(g, 0.0f, 1.0f)), 0.0f, 1.0f);
            out.at(2, y, x) = std::clamp(srgb_encode(std::clamp(b, 0.0f, 1.0f)), 0.0f, 1.0f);
        }
    }
    return out;
}

PackedRawFrame add_noise(const PackedRawFrame& packed, const NoiseParams& params,
                         const NoiseSeed& seed) {
    params.validate();
    if (params.sigma_s_sq == 0.0 && params.sigma_r == 0.0) {
        return packed;
    }
    PackedRawFrame out(packed.height(), packed.width());
    const std::size_t pixels = packed.pixel_count();
    for (int plane = 0; plane < PackedRawFrame::kPlanes; ++plane) {
        auto src = packed.plane(plane);
        auto dst = out.plane(plane);
        for (std::size_t p = 0; p < pixels; ++p) {
            const double y = src[p];
            double value;
            if (params.sigma_s_sq > 0.0) {
                const double lambda = y / params.sigma_s_sq;
                const auto block = rng::keyed_block(seed.seed, p, seed.frame_index,
                                                    static_cast<std::uint32_t>(plane), 0);
                value = params.sigma_s_sq *
                        static_cast<double>(rng::poisson(lambda, block));
            } else {
                value = y;
            }
            if (params.sigma_r > 0.0) {
                const auto block = rng::keyed_block(seed.seed, p, seed.frame_index,
                                                    static_cast<std::uint32_t>(plane), 1);
                value += params.sigma_r * rng::standard_normal(block);
            }
            dst[p] = static_cast<float>(std::clamp(value, 0.0, 1.0));
        }
    }
    return out;
}

NoiseParams iso_preset(const std::string& name) {
    // Log-spaced shot scales with sigma_r = sqrt(sigma_s_sq) / 4.
    static const struct {
        const char* name;
        double sigma_s_sq;
        double sigma_r;
    } kPresets[] = {
        {"iso1", 1e-4, 2.5e-3}, {"iso2", 4e-4, 5e-3},   {"iso3", 1.6e-3, 1e-2},
        {"iso4", 6.4e-3, 2e-2}, {"iso5", 2.56e-2, 4e-2},
    };
    for (const auto& preset : kPresets) {
        if (name == preset.name) {
            return NoiseParams{preset.sigma_s_sq, preset.sigma_r};
        }
    }
    throw std::invalid_argument("unknown ISO preset: " + name);
}

NoiseParams iso_preset(const std::string& name, const Config& cfg) {
    NoiseParams params = iso_preset(name);
    params.sigma_s_sq = cfg.get_double_or(name + ".sigma_s_sq", params.sigma_s_sq);
    params.sigma_r = cfg.get_double_or(name + ".sigma_r", params.sigma_r);
    params.validate();
    return params;
}

}  // namespace ravden::camera
