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

#include <cmath>
#include <span>
#include <vector>

#include "ravden/flow.hpp"
#include "ravden/frame.hpp"

namespace ravden::quality {

/// Soft texture indicator in [0,1); tanh of a non-negative argument.
class GradientMask {
 public:
    GradientMask() = default;
    GradientMask(int height, int width);

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

/// Real-valued critic scores; producer-agnostic, only the element count
/// matters to the loss reductions.
using ScoreMap = std::vector<float>;

struct FeatureMap {
    int height = 0;
    int width = 0;
    std::vector<float> data;
};

/// Ordered feature maps; paired stacks must agree layer by layer in shape.
struct FeatureStack {
    std::vector<FeatureMap> layers;
};

struct LossWeights {
    double lambda_f = 1e-2;
    double lambda_r = 1e-1;
    double lambda_p = 5e-3;
    double lambda_g = 5e-5;
    double delta = 0.5;
};

inline constexpr double kDefaultMaskAlpha = 1.1313708498984762;  // 0.8 * sqrt(2)

/// f = tanh(f' / alpha) where f' is the magnitude of the 3x3-box-filtered
/// central-difference gradients of the (grayscale) frame.
GradientMask gradient_mask(const Frame& frame, double alpha = kDefaultMaskAlpha);

/// -E[min(0, -1 + real)] - E[min(0, -1 - fake)], means over each map.
double hinge_d_loss(std::span<const float> real, std::span<const float> fake);

/// -lambda_g * E[fake].
double hinge_g_loss(std::span<const float> fake, double lambda_g = 5e-5);

/// sum_i (1/N_i) ||real_i - fake_i||_1 over paired layers.
double feature_matching_loss(const FeatureStack& real, const FeatureStack& fake);

/// mean-L1(raw) + delta * mean-L1(srgb).
double reconstruction_loss(const PackedRawFrame& raw_pred, const PackedRawFrame& raw_gt,
                           const Frame& srgb_pred, const Frame& srgb_gt,
                           double delta = 0.5);

/// Same reduction as feature_matching_loss; the extractor is pluggable.
double perceptual_loss(const FeatureStack& gt_features, const FeatureStack& pred_features);

/// Built-in hand-crafted extractor: a 3-scale pyramid of {luma, |gx|, |gy|}.
FeatureStack extract_perceptual_features(const Frame& frame);

/// adv_g + lambda_f * feat + lambda_r * recn + lambda_p * prcp.
double total_objective(double adv_g, double feat, double recn, double prcp,
                       const LossWeights& weights = {});

/// 10 log10(peak^2 / MSE); +infinity when MSE is zero.
double psnr(const Frame& pred, const Frame& ref, double peak = 1.0);
double psnr(const PackedRawFrame& pred, const PackedRawFrame& ref, double peak = 1.0);

/// Mean local structural similarity, 11x11 Gaussian window sigma 1.5,
/// C1 = 0.01^2, C2 = 0.03^2; 3-channel inputs average the per-channel
/// scores. Requires dimensions >= 11.
double ssim(const Frame& pred, const Frame& ref);

/// Flow-based warping error: for each interior frame t and neighbor
/// s in {t-1, t+1}, flows estimated on the clean pair (t, s) warp the
/// denoised frame s onto t; the masked mean L1 error is averaged over all
/// (t, s). Masks combine warp validity with forward-backward consistency.
double temporal_warping_error(const Sequence<Frame>& denoised,
                              const Sequence<Frame>& clean,
                              const flow::FlowConfig& fcfg = {});

}  // namespace ravden::quality
