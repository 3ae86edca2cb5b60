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
#include <cstddef>

#include "ravden/flow.hpp"
#include "ravden/frame.hpp"

namespace ravden::fusion {

struct FusionConfig {
    /// Multiplies the estimated noise sigma to get the merge bandwidth h.
    float bandwidth_scale = 2.0f;
    int residual_box = 3;  // odd
    bool spatial_filter = true;
    float spatial_filter_strength = 1.0f;

    void validate() const;
};

/// Per-pixel neighbor weights actually used by a fusion call. The center
/// frame's implicit weight is 1.
struct ConfidenceMap {
    flow::ValidityMask prev;
    flow::ValidityMask next;
};

/// Robust per-plane noise estimate: sigma = median(|d|) / 0.6745 where d is
/// the 2x2 Haar diagonal high-pass response at stride 2.
std::array<float, 4> estimate_noise_sigma(const PackedRawFrame& frame);

/// Residual-to-weight kernel: exp(-r^2 / (2 h^2)); the h = 0 limit keeps
/// only exact matches.
float merge_weight(float residual, float bandwidth);

/// Merges two aligned neighbors into the center frame. Per neighbor k the
/// residual r_k is the box-filtered mean over planes of |I_k - center|; the
/// weight is mask_k * exp(-r_k^2 / (2 h^2)) with h = bandwidth_scale * mean
/// plane sigma of the center. The output is the center-anchored convex
/// combination (center + sum_k w_k I_k) / (1 + sum_k w_k). When the spatial
/// filter is on, one 3x3 bilateral-style pass follows, with range sigma
/// shrinking where temporal support was strong.
PackedRawFrame fuse_triple(const PackedRawFrame& warped_prev,
                           const PackedRawFrame& center,
                           const PackedRawFrame& warped_next,
                           const flow::ValidityMask& mask_prev,
                           const flow::ValidityMask& mask_next,
                           const FusionConfig& cfg,
                           ConfidenceMap* confidence = nullptr);

struct BlockFlows {
    flow::FlowField to_prev;
    flow::FlowField to_next;
};

/// Flow pair of one denoiser block, estimated on the green-mean channel of
/// the packed frames.
BlockFlows estimate_block_flows(const PackedRawFrame& prev, const PackedRawFrame& center,
                                const PackedRawFrame& next, const flow::FlowConfig& cfg);

/// Alignment + fusion with externally supplied flows (used for flow reuse).
PackedRawFrame denoise_block_with_flows(const PackedRawFrame& prev,
                                        const PackedRawFrame& center,
                                        const PackedRawFrame& next,
                                        const BlockFlows& flows,
                                        const FusionConfig& cfg);

/// One full denoiser block: estimate both flows, warp the neighbors, combine
/// warp validity with the flow symmetry check, and fuse.
PackedRawFrame denoise_block(const PackedRawFrame& prev, const PackedRawFrame& center,
                             const PackedRawFrame& next, const flow::FlowConfig& fcfg,
                             const FusionConfig& mcfg);

}  // namespace ravden::fusion
