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

#include "ravden/frame.hpp"

namespace ravden {

Frame::Frame(int height, int width, int channels, Colorspace colorspace)
    : height_(height), width_(width), channels_(channels), colorspace_(colorspace) {
    if (height <= 0 || width <= 0) {
        throw std::invalid_argument("Frame: dimensions must be positive");
    }
    if (channels != 1 && channels != 3) {
        throw std::invalid_argument("Frame: channel count must be 1 or 3");
    }
    data_.assign(static_cast<std::size_t>(height) * width * channels, 0.0f);
}

RawBayerFrame::RawBayerFrame(int height, int width)
    : height_(height), width_(width) {
    if (height <= 0 || width <= 0) {
        throw std::invalid_argument("RawBayerFrame: dimensions must be positive");
    }
    if (height % 2 != 0 || width % 2 != 0) {
        throw std::invalid_argument("RawBayerFrame: dimensions must be even");
    }
    data_.assign(static_cast<std::size_t>(height) * width, 0.0f);
}

PackedRawFrame::PackedRawFrame(int height, int width)
    : height_(height), width_(width) {
    if (height <= 0 || width <= 0) {
        throw std::invalid_argument("PackedRawFrame: dimensions must be positive");
    }
    data_.assign(static_cast<std::size_t>(height) * width * kPlanes, 0.0f);
}

PackedRawFrame pack_bayer(const RawBayerFrame& raw) {
    if (raw.height() % 2 != 0 || raw.width() % 2 != 0) {
        throw std::invalid_argument("pack_bayer: dimensions must be even");
    }
    PackedRawFrame packed(raw.height() / 2, raw.width() / 2);
    for (int y = 0; y < packed.height(); ++y) {
        for (int x = 0; x < packed.width(); ++x) {
            packed.at(PackedRawFrame::R, y, x) = raw.at(2 * y, 2 * x);
            packed.at(PackedRawFrame::G1, y, x) = raw.at(2 * y, 2 * x + 1);
            packed.at(PackedRawFrame::G2, y, x) = raw.at(2 * y + 1, 2 * x);
            packed.at(PackedRawFrame::B, y, x) = raw.at(2 * y + 1, 2 * x + 1);
        }
    }
    return packed;
}

RawBayerFrame unpack_bayer(const PackedRawFrame& packed) {
    RawBayerFrame raw(packed.height() * 2, packed.width() * 2);
    for (int y = 0; y < packed.height(); ++y) {
        for (int x = 0; x < packed.width(); ++x) {
            raw.at(2 * y, 2 * x) = packed.at(PackedRawFrame::R, y, x);
            raw.at(2 * y, 2 * x + 1) = packed.at(PackedRawFrame::G1, y, x);
            raw.at(2 * y + 1, 2 * x) = packed.at(PackedRawFrame::G2, y, x);
            raw.at(2 * y + 1, 2 * x + 1) = packed.at(PackedRawFrame::B, y, x);
        }
    }
    return raw;
}

Frame to_luma(const Frame& frame) {
    if (frame.channels() != 3) {
        throw std::invalid_argument("to_luma: expected a 3-channel frame");
    }
    Frame luma(frame.height(), frame.width(), 1, frame.colorspace());
    auto r = frame.plane(0);
    auto g = frame.plane(1);
    auto b = frame.plane(2);
    auto y = luma.plane(0);
    for (std::size_t i = 0; i < y.size(); ++i) {
        y[i] = 0.2126f * r[i] + 0.7152f * g[i] + 0.0722f * b[i];
    }
    return luma;
}

Frame green_mean(const PackedRawFrame& packed) {
    Frame out(packed.height(), packed.width(), 1, Colorspace::Linear);
    auto g1 = packed.plane(PackedRawFrame::G1);
    auto g2 = packed.plane(PackedRawFrame::G2);
    auto o = out.plane(0);
    for (std::size_t i = 0; i < o.size(); ++i) {
        o[i] = 0.5f * (g1[i] + g2[i]);
    }
    return out;
}

}  // namespace ravden
