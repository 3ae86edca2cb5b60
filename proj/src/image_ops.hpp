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

// Internal pixel-level helpers shared by the flow, fusion, and quality
// translation units. Not part of the public headers.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <vector>

#include "ravden/frame.hpp"

namespace ravden::detail {

inline float sample_bilinear(std::span<const float> plane, int height, int width,
                             float sx, float sy) {
    sx = std::clamp(sx, 0.0f, static_cast<float>(width - 1));
    sy = std::clamp(sy, 0.0f, static_cast<float>(height - 1));
    const int x0 = static_cast<int>(sx);
    const int y0 = static_cast<int>(sy);
    const int x1 = std::min(x0 + 1, width - 1);
    const int y1 = std::min(y0 + 1, height - 1);
    const float fx = sx - static_cast<float>(x0);
    const float fy = sy - static_cast<float>(y0);
    const float top = (1.0f - fx) * plane[std::size_t(y0) * width + x0] +
                      fx * plane[std::size_t(y0) * width + x1];
    const float bottom = (1.0f - fx) * plane[std::size_t(y1) * width + x0] +
                         fx * plane[std::size_t(y1) * width + x1];
    return (1.0f - fy) * top + fy * bottom;
}

// Fraction of the bilinear footprint that lies inside [0, n-1].
inline float coverage(float s, int n) {
    if (s < -1.0f || s > static_cast<float>(n)) return 0.0f;
    if (s < 0.0f) return 1.0f + s;
    if (s > static_cast<float>(n - 1)) return static_cast<float>(n) - s;
    return 1.0f;
}

// Factor-2 decimation after a separable 5-tap binomial anti-alias filter,
// replicated borders. Output dimensions are ceil(dim / 2).
inline Frame downsample_half(const Frame& src) {
    static constexpr std::array<float, 5> kKernel = {1.f / 16, 4.f / 16, 6.f / 16,
                                                     4.f / 16, 1.f / 16};
    const int h = src.height();
    const int w = src.width();
    const int nh = (h + 1) / 2;
    const int nw = (w + 1) / 2;
    Frame horizontal(h, w, 1, src.colorspace());
    auto in = src.plane(0);
    auto tmp = horizontal.plane(0);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            float acc = 0.0f;
            for (int t = -2; t <= 2; ++t) {
                const int xx = std::clamp(x + t, 0, w - 1);
                acc += kKernel[t + 2] * in[std::size_t(y) * w + xx];
            }
            tmp[std::size_t(y) * w + x] = acc;
        }
    }
    Frame out(nh, nw, 1, src.colorspace());
    auto o = out.plane(0);
    for (int y = 0; y < nh; ++y) {
        for (int x = 0; x < nw; ++x) {
            float acc = 0.0f;
            for (int t = -2; t <= 2; ++t) {
                const int yy = std::clamp(2 * y + t, 0, h - 1);
                acc += kKernel[t + 2] * tmp[std::size_t(yy) * w + 2 * x];
            }
            o[std::size_t(y) * nw + x] = acc;
        }
    }
    return out;
}

// Mean over the window intersected with the image.
inline void box_mean(const std::vector<float>& src, int h, int w, int radius,
                     std::vector<float>& tmp_sum, std::vector<float>& tmp_count,
                     std::vector<float>& dst) {
    tmp_sum.resize(src.size());
    tmp_count.resize(src.size());
    dst.resize(src.size());
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const int x0 = std::max(0, x - radius);
            const int x1 = std::min(w - 1, x + radius);
            double acc = 0.0;
            for (int xx = x0; xx <= x1; ++xx) acc += src[std::size_t(y) * w + xx];
            tmp_sum[std::size_t(y) * w + x] = static_cast<float>(acc);
            tmp_count[std::size_t(y) * w + x] = static_cast<float>(x1 - x0 + 1);
        }
    }
    for (int y = 0; y < h; ++y) {
        const int y0 = std::max(0, y - radius);
        const int y1 = std::min(h - 1, y + radius);
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            double count = 0.0;
            for (int yy = y0; yy <= y1; ++yy) {
                acc += tmp_sum[std::size_t(yy) * w + x];
                count += tmp_count[std::size_t(yy) * w + x];
            }
            dst[std::size_t(y) * w + x] = static_cast<float>(acc / count);
        }
    }
}

// Central differences with replicated borders, the 0.5 factor included.
inline void central_gradients(std::span<const float> src, int h, int w,
                              std::span<float> gx, std::span<float> gy) {
    for (int y = 0; y < h; ++y) {
        const int ym = std::max(0, y - 1);
        const int yp = std::min(h - 1, y + 1);
        for (int x = 0; x < w; ++x) {
            const int xm = std::max(0, x - 1);
            const int xp = std::min(w - 1, x + 1);
            const std::size_t i = std::size_t(y) * w + x;
            gx[i] = 0.5f * (src[std::size_t(y) * w + xp] - src[std::size_t(y) * w + xm]);
            gy[i] = 0.5f * (src[std::size_t(yp) * w + x] - src[std::size_t(ym) * w + x]);
        }
    }
}

}  // namespace ravden::detail
