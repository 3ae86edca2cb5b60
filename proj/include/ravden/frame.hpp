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

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ravden {

enum class Colorspace { SrgbEncoded, Linear };

/// Display-referred or linear image, 32-bit float, channel-planar,
/// row-major within each plane. Nominal value range [0,1].
class Frame {
 public:
    Frame() = default;
    Frame(int height, int width, int channels,
          Colorspace colorspace = Colorspace::SrgbEncoded);

    int height() const { return height_; }
    int width() const { return width_; }
    int channels() const { return channels_; }
    Colorspace colorspace() const { return colorspace_; }
    void set_colorspace(Colorspace cs) { colorspace_ = cs; }

    std::size_t pixel_count() const {
        return static_cast<std::size_t>(height_) * width_;
    }
    std::size_t size() const { return data_.size(); }

    float& at(int channel, int y, int x) {
        return data_[plane_offset(channel) + static_cast<std::size_t>(y) * width_ + x];
    }
    float at(int channel, int y, int x) const {
        return data_[plane_offset(channel) + static_cast<std::size_t>(y) * width_ + x];
    }

    std::span<float> plane(int channel) {
        return {data_.data() + plane_offset(channel), pixel_count()};
    }
    std::span<const float> plane(int channel) const {
        return {data_.data() + plane_offset(channel), pixel_count()};
    }

    std::span<float> data() { return data_; }
    std::span<const float> data() const { return data_; }

    bool same_shape(const Frame& other) const {
        return height_ == other.height_ && width_ == other.width_ &&
               channels_ == other.channels_;
    }

 private:
    std::size_t plane_offset(int channel) const {
        return static_cast<std::size_t>(channel) * pixel_count();
    }

    int height_ = 0;
    int width_ = 0;
    int channels_ = 0;
    Colorspace colorspace_ = Colorspace::SrgbEncoded;
    std::vector<float> data_;
};

/// Single-plane sensor mosaic, fixed RGGB pattern. Dimensions are even.
class RawBayerFrame {
 public:
    RawBayerFrame() = default;
    RawBayerFrame(int height, int width);

    int height() const { return height_; }
    int width() const { return width_; }

    float& at(int y, int x) {
        return data_[static_cast<std::size_t>(y) * width_ + x];
    }
    float at(int y, int x) const {
        return data_[static_cast<std::size_t>(y) * width_ + x];
    }

    std::span<float> data() { return data_; }
    std::span<const float> data() const { return data_; }

 private:
    int height_ = 0;
    int width_ = 0;
    std::vector<float> data_;
};

/// Half-resolution 4-plane raw image, planes ordered R, G1, G2, B.
/// The working representation of the whole pipeline.
class PackedRawFrame {
 public:
    static constexpr int kPlanes = 4;
    enum Plane { R = 0, G1 = 1, G2 = 2, B = 3 };

    PackedRawFrame() = default;
    PackedRawFrame(int height, int width);

    int height() const { return height_; }
    int width() const { return width_; }

    std::size_t pixel_count() const {
        return static_cast<std::size_t>(height_) * width_;
    }
    std::size_t size() const { return data_.size(); }

    float& at(int plane, int y, int x) {
        return data_[plane * pixel_count() + static_cast<std::size_t>(y) * width_ + x];
    }
    float at(int plane, int y, int x) const {
        return data_[plane * pixel_count() + static_cast<std::size_t>(y) * width_ + x];
    }

    std::span<float> plane(int p) {
        return {data_.data() + p * pixel_count(), pixel_count()};
    }
    std::span<const float> plane(int p) const {
        return {data_.data() + p * pixel_count(), pixel_count()};
    }

    std::span<float> data() { return data_; }
    std::span<const float> data() const { return data_; }

    bool same_shape(const PackedRawFrame& other) const {
        return height_ == other.height_ && width_ == other.width_;
    }

 private:
    int height_ = 0;
    int width_ = 0;
    std::vector<float> data_;
};

/// Noise synthesis record attached to a frame's metadata.
struct SyntheticNoiseTag {
    double sigma_s_sq = 0.0;
    double sigma_r = 0.0;
    std::uint64_t seed = 0;
    std::uint32_t frame_index = 0;
};

struct FrameMeta {
    std::string source_path;
    std::optional<SyntheticNoiseTag> noise;
};

/// Ordered list of frames with uniform dimensions. The frame rate is
/// informational only.
template <typename FrameT>
class Sequence {
 public:
    Sequence() = default;
    explicit Sequence(double frame_rate) : frame_rate_(frame_rate) {}

    void push_back(FrameT frame, FrameMeta meta = {}) {
        if (!frames_.empty() && !frames_.front().same_shape(frame)) {
            throw std::invalid_argument("Sequence: frame dimensions differ");
        }
        frames_.push_back(std::move(frame));
        meta_.push_back(std::move(meta));
    }

    std::size_t size() const { return frames_.size(); }
    bool empty() const { return frames_.empty(); }

    const FrameT& operator[](std::size_t i) const { return frames_[i]; }
    FrameT& operator[](std::size_t i) { return frames_[i]; }

    const FrameMeta& meta(std::size_t i) const { return meta_[i]; }
    FrameMeta& meta(std::size_t i) { return meta_[i]; }

    double frame_rate() const { return frame_rate_; }

    auto begin() const { return frames_.begin(); }
    auto end() const { return frames_.end(); }

 private:
    std::vector<FrameT> frames_;
    std::vector<FrameMeta> meta_;
    double frame_rate_ = 0.0;
};

/// Rearranges an RGGB mosaic into the half-resolution 4-plane layout.
/// Plane c of output pixel (h, w) reads the 2x2 cell at (2h, 2w):
/// c0=(0,0) R, c1=(0,1) G1, c2=(1,0) G2, c3=(1,1) B.
PackedRawFrame pack_bayer(const RawBayerFrame& raw);

/// Exact inverse of pack_bayer.
RawBayerFrame unpack_bayer(const PackedRawFrame& packed);

/// Rec.709 luma of a 3-channel frame: y = 0.2126 r + 0.7152 g + 0.0722 b.
Frame to_luma(const Frame& frame);

/// Mean of the two green planes at packed resolution; the highest-SNR
/// channel, used to drive flow estimation on raw frames.
Frame green_mean(const PackedRawFrame& packed);

}  // namespace ravden
