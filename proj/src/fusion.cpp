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

#include "ravden/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "image_ops.hpp"

namespace ravden::fusion {

namespace {

using detail::box_mean;

constexpr float kMadToSigma = 1.0f / 0.6745f;

void check_shape(const PackedRawFrame& a, const PackedRawFrame& b, const char* what) {
    if (!a.same_shape(b)) {
        throw std::invalid_argument(std::string(what) + ": frame dimensions differ");
    }
}

}  // namespace

void FusionConfig::validate() const {
    if (!(bandwidth_scale > 0.0f)) {
        throw std::invalid_argument("FusionConfig: bandwidth_scale must be positive");
    }
    if (residual_box < 1 || residual_box % 2 == 0) {
        throw std::invalid_argument("FusionConfig: residual_box must be odd");
    }
}

std::array<float, 4> estimate_noise_sigma(const PackedRawFrame& frame) {
    if (frame.height() < 4 || frame.width() < 4) {
        throw std::invalid_argument("estimate_noise_sigma: frame smaller than 4x4");
    }
    std::array<float, 4> sigma{};
    std::vector<float> responses;
    responses.reserve((frame.height() / 2) * (frame.width() / 2));
    for (int p = 0; p < PackedRawFrame::kPlanes; ++p) {
        responses.clear();
        for (int y = 0; y + 1 < frame.height(); y += 2) {
            for (int x = 0; x + 1 < frame.width(); x += 2) {
                // Haar diagonal high-pass; unit gain on white noise.
                const float d = 0.5f * (frame.at(p, y, x) - frame.at(p, y, x + 1) -
                                        frame.at(p, y + 1, x) + frame.at(p, y + 1, x + 1));
                responses.push_back(std::abs(d));
            }
        }
        auto mid = responses.begin() + responses.size() / 2;
        std::nth_element(responses.begin(), mid, responses.end());
        sigma[p] = *mid * kMadToSigma;
    }
    return sigma;
}

float merge_weight(float residual, float bandwidth) {
    if (bandwidth <= 0.0f) {
        return residual == 0.0f ? 1.0f : 0.0f;
    }
    const float t = residual / bandwidth;
    return std::exp(-0.5f * t * t);
}

PackedRawFrame fuse_triple(const PackedRawFrame& warped_prev,
                           const PackedRawFrame& center,
                           const PackedRawFrame& warped_next,
                           const flow::ValidityMask& mask_prev,
                           const flow::ValidityMask& mask_next,
                           const FusionConfig& cfg, ConfidenceMap* confidence) {
    cfg.validate();
    check_shape(warped_prev, center, "fuse_triple");
    check_shape(warped_next, center, "fuse_triple");
    if (mask_prev.height() != center.height() || mask_prev.width() != center.width() ||
        mask_next.height() != center.height() || mask_next.width() != center.width()) {
        throw std::invalid_argument("fuse_triple: mask dimensions differ");
    }

    const int h = center.height();
    const int w = center.width();
    const std::size_t n = center.pixel_count();

    const auto sigma = estimate_noise_sigma(center);
    const float bandwidth =
        cfg.bandwidth_scale * 0.25f * (sigma[0] + sigma[1] + sigma[2] + sigma[3]);

    // Residuals: mean absolute difference over planes, box-filtered.
    std::vector<float> adiff_prev(n, 0.0f), adiff_next(n, 0.0f);
    for (int p = 0; p < PackedRawFrame::kPlanes; ++p) {
        auto cp = center.plane(p);
        auto pp = warped_prev.plane(p);
        auto np = warped_next.plane(p);
        for (std::size_t i = 0; i < n; ++i) {
            adiff_prev[i] += 0.25f * std::abs(pp[i] - cp[i]);
            adiff_next[i] += 0.25f * std::abs(np[i] - cp[i]);
        }
    }
    std::vector<float> tmp_sum, tmp_count, r_prev, r_next;
    const int radius = cfg.residual_box / 2;
    box_mean(adiff_prev, h, w, radius, tmp_sum, tmp_count, r_prev);
    box_mean(adiff_next, h, w, radius, tmp_sum, tmp_count, r_next);

    std::vector<float> w_prev(n), w_next(n);
    auto mp = mask_prev.data();
    auto mn = mask_next.data();
    for (std::size_t i = 0; i < n; ++i) {
        w_prev[i] = mp[i] * merge_weight(r_prev[i], bandwidth);
        w_next[i] = mn[i] * merge_weight(r_next[i], bandwidth);
    }

    // Center-anchored form: differences of identical inputs vanish exactly.
    PackedRawFrame out(h, w);
    for (int p = 0; p < PackedRawFrame::kPlanes; ++p) {
        auto cp = center.plane(p);
        auto pp = warped_prev.plane(p);
        auto np = warped_next.plane(p);
        auto op = out.plane(p);
        for (std::size_t i = 0; i < n; ++i) {
            const double wp = w_prev[i];
            const double wn = w_next[i];
            const double num = wp * (double(pp[i]) - cp[i]) + wn * (double(np[i]) - cp[i]);
            op[i] = static_cast<float>(cp[i] + num / (1.0 + wp + wn));
        }
    }

    if (cfg.spatial_filter && cfg.spatial_filter_strength > 0.0f && bandwidth > 0.0f) {
        PackedRawFrame filtered(h, w);
        for (int p = 0; p < PackedRawFrame::kPlanes; ++p) {
            auto src = out.plane(p);
            auto dst = filtered.plane(p);
            for (int y = 0; y < h; ++y) {
                for (int x = 0; x < w; ++x) {
                    const std::size_t i = std::size_t(y) * w + x;
                    const float support = w_prev[i] + w_next[i];
                    const float range_sigma = cfg.spatial_filter_strength * bandwidth /
                                              std::sqrt(1.0f + support);
                    const float center_value = src[i];
                    double acc = 0.0;
                    double weight_sum = 0.0;
                    const float inv = -0.5f / (range_sigma * range_sigma);
                    for (int dy = -1; dy <= 1; ++dy) {
                        const int yy = y + dy;
                        if (yy < 0 || yy >= h) continue;
                        for (int dx = -1; dx <= 1; ++dx) {
                            const int xx = x + dx;
                            if (xx < 0 || xx >= w) continue;
                            const float value = src[std::size_t(yy) * w + xx];
                            const float diff = value - center_value;
                            const double weight = std::exp(double(inv) * diff * diff);
                            acc += weight * value;
                            weight_sum += weight;
                        }
                    }
                    dst[i] = static_cast<float>(acc / weight_sum);
                }
            }
        }
        out = std::move(filtered);
    }

    if (confidence != nullptr) {
        confidence->prev = flow::ValidityMask(h, w);
        confidence->next = flow::ValidityMask(h, w);
        std::copy(w_prev.begin(), w_prev.end(), confidence->prev.data().begin());
        std::copy(w_next.begin(), w_next.end(), confidence->next.data().begin());
    }
    return out;
}

BlockFlows estimate_block_flows(const PackedRawFrame& prev, const PackedRawFrame& center,
                                const PackedRawFrame& next,
                                const flow::FlowConfig& cfg) {
    const Frame center_g = green_mean(center);
    BlockFlows flows;
    flows.to_prev = flow::estimate_flow(center_g, green_mean(prev), cfg).final;
    flows.to_next = flow::estimate_flow(center_g, green_mean(next), cfg).final;
    return flows;
}

PackedRawFrame denoise_block_with_flows(const PackedRawFrame& prev,
                                        const PackedRawFrame& center,
                                        const PackedRawFrame& next,
                                        const BlockFlows& flows,
                                        const FusionConfig& cfg) {
    check_shape(prev, center, "denoise_block");
    check_shape(next, center, "denoise_block");
    auto [warped_prev, valid_prev] = flow::warp(prev, flows.to_prev);
    auto [warped_next, valid_next] = flow::warp(next, flows.to_next);

    // With one flow per neighbor, occlusions are flagged by the symmetry of
    // the two block flows: under locally constant velocity the flow to one
    // neighbor is the negative of the flow to the other.
    const flow::ValidityMask fb_prev = flow::fb_consistency(flows.to_prev, flows.to_next);
    const flow::ValidityMask fb_next = flow::fb_consistency(flows.to_next, flows.to_prev);
    flow::ValidityMask mask_prev(center.height(), center.width());
    flow::ValidityMask mask_next(center.height(), center.width());
    for (std::size_t i = 0; i < mask_prev.data().size(); ++i) {
        mask_prev.data()[i] = valid_prev.data()[i] * fb_prev.data()[i];
        mask_next.data()[i] = valid_next.data()[i] * fb_next.data()[i];
    }
    return fuse_triple(warped_prev, center, warped_next, mask_prev, mask_next, cfg);
}

PackedRawFrame denoise_block(const PackedRawFrame& prev, const PackedRawFrame& center,
                             const PackedRawFrame& next, const flow::FlowConfig& fcfg,
                             const FusionConfig& mcfg) {
    return denoise_block_with_flows(prev, center, next,
                                    estimate_block_flows(prev, center, next, fcfg), mcfg);
}

}  // namespace ravden::fusion
