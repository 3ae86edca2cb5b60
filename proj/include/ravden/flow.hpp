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

#include <span>
#include <utility>
#include <vector>

#include "ravden/frame.hpp"

namespace ravden::flow {

/// Dense per-pixel displacement in pixel units. The convention throughout:
/// the neighbor image is sampled at p + F(p) to land on the reference grid.
class FlowField {
 public:
    FlowField() = default;
    FlowField(int height, int width);

    int height() const { return height_; }
    int width() const { return width_; }
    std::size_t pixel_count() const {
        return static_cast<std::size_t>(height_) * width_;
    }

    float& u(int y, int x) { return u_[static_cast<std::size_t>(y) * width_ + x]; }
    float u(int y, int x) const { return u_[static_cast<std::size_t>(y) * width_ + x]; }
    float& v(int y, int x) { return v_[static_cast<std::size_t>(y) * width_ + x]; }
    float v(int y, int x) const { return v_[static_cast<std::size_t>(y) * width_ + x]; }

    std::span<float> u_plane() { return u_; }
    std::span<const float> u_plane() const { return u_; }
    std::span<float> v_plane() { return v_; }
    std::span<const float> v_plane() const { return v_; }

    bool same_shape(const FlowField& other) const {
        return height_ == other.height_ && width_ == other.width_;
    }

 private:
    int height_ = 0;
    int width_ = 0;
    std::vector<float> u_;
    std::vector<float> v_;
};

/// Per-pixel validity in [0,1]; 1 means the sample was taken fully inside
/// the source image and passed the consistency check.
class ValidityMask {
 public:
    ValidityMask() = default;
    ValidityMask(int height, int width, float fill = 1.0f);

    int height() const { return height_; }
    int width() const { return width_; }

    float& at(int y, int x) { return data_[static_cast<std::size_t>(y) * width_ + x]; }
    float at(int y, int x) const { return data_[static_cast<std::size_t>(y) * width_ + x]; }

    std::span<float> data() { return data_; }
    std::span<const float> data() const { return data_; }

 private:
    int height_ = 0;
    int width_ = 0;
    std::vector<float> data_;
};

struct FlowConfig {
    /// 0 selects the automatic rule: halve until the minimum dimension would
    /// drop below 16, at most 5 levels.
    int pyramid_levels = 0;
    int iters_per_level = 3;
    int window = 5;  // odd, >= 3
    bool median_filter = true;
};

/// Final flow plus the full-resolution flow after every refinement pass,
/// coarsest-to-finest. iterations.back() equals final.
struct FlowResult {
    FlowField final;
    std::vector<FlowField> iterations;
    /// Set when an all-constant input forced the zero-flow fallback.
    bool degenerate_input = false;
};

/// Coarse-to-fine dense estimation: image pyramids with a 5-tap binomial
/// anti-alias filter; per level, iters_per_level passes of windowed
/// least-squares refinement on the warped target (central-difference
/// gradients, per-pixel 2x2 normal equations with Tikhonov damping 1e-4),
/// optional 3x3 median filter per pass.
FlowResult estimate_flow(const Frame& reference, const Frame& target,
                         const FlowConfig& cfg = {});

/// Bilinear sampling at p + F(p), clamp-to-edge outside. The mask is 1 for
/// samples fully inside, 0 outside, bilinear-fractional in the border band.
std::pair<Frame, ValidityMask> warp(const Frame& source, const FlowField& flow);

/// Packed raw variant: one flow at packed resolution, applied identically
/// to all four planes.
std::pair<PackedRawFrame, ValidityMask> warp(const PackedRawFrame& source,
                                             const FlowField& flow);

/// mask(p) = 1 if |F_f(p) + F_b(p + F_f(p))|^2
///              < 0.01 (|F_f(p)|^2 + |F_b(p + F_f(p))|^2) + 0.5, else 0.
ValidityMask fb_consistency(const FlowField& forward, const FlowField& backward);

struct FlowObjectiveTerms {
    double warp_l1 = 0.0;  // mean absolute warp error
    double tv = 0.0;       // mean anisotropic total variation of the flow
};

/// Per-iteration terms: warp_l1 is the mean |warp(target, flow) - reference|
/// over all elements; tv is the sum of absolute forward differences of both
/// flow components divided by the pixel count.
FlowObjectiveTerms flow_objective_terms(const FlowField& flow, const Frame& reference,
                                        const Frame& target);

/// sum_{i=1..N} gamma^(N-i) (alpha * warp_l1_i + tv_i). Later iterations
/// carry strictly larger weight for gamma < 1.
double combine_flow_objective(std::span<const FlowObjectiveTerms> terms,
                              double gamma, double alpha);

double flow_objective(const FlowResult& result, const Frame& reference_clean,
                      const Frame& target_clean, double gamma = 0.8,
                      double alpha = 100.0);

}  // namespace ravden::flow
