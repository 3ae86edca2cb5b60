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

#include "ravden/multistage.hpp"

#include <stdexcept>
#include <string>

namespace ravden::multistage {

StageSchedule StageSchedule::for_stages(int n) {
    if (n < 1) {
        throw std::invalid_argument("StageSchedule: stages must be >= 1");
    }
    return StageSchedule{n};
}

std::size_t StageSchedule::stream_total_blocks(int stages, std::size_t length) {
    if (stages < 1 || length < static_cast<std::size_t>(2 * stages + 1)) {
        throw std::invalid_argument("stream_total_blocks: sequence too short");
    }
    return static_cast<std::size_t>(stages) * (length - stages - 1);
}

PackedRawFrame denoise_window(std::span<const PackedRawFrame> frames,
                              const DenoiseConfig& cfg, RunStats* stats) {
    const StageSchedule schedule = StageSchedule::for_stages(cfg.stages);
    if (frames.size() != static_cast<std::size_t>(schedule.window_size())) {
        throw std::invalid_argument("denoise_window: expected " +
                                    std::to_string(schedule.window_size()) + " frames, got " +
                                    std::to_string(frames.size()));
    }
    for (const auto& frame : frames) {
        if (!frame.same_shape(frames[0])) {
            throw std::invalid_argument("denoise_window: frame dimensions differ");
        }
    }

    std::vector<PackedRawFrame> current(frames.begin(), frames.end());
    std::vector<std::optional<fusion::BlockFlows>> stage1_flows(frames.size());
    int base = 0;  // window-relative index of current[0]
    for (int stage = 1; stage <= cfg.stages; ++stage) {
        std::vector<PackedRawFrame> next;
        next.reserve(current.size() - 2);
        for (std::size_t j = 0; j + 2 < current.size(); ++j) {
            const int center = base + static_cast<int>(j) + 1;
            fusion::BlockFlows flows;
            if (cfg.reuse_flows && stage > 1) {
                flows = *stage1_flows[center];
            } else {
                flows = fusion::estimate_block_flows(current[j], current[j + 1],
                                                     current[j + 2], cfg.flow);
                if (stats != nullptr) stats->flow_estimates += 2;
                if (cfg.reuse_flows && stage == 1) stage1_flows[center] = flows;
            }
            next.push_back(fusion::denoise_block_with_flows(
                current[j], current[j + 1], current[j + 2], flows, cfg.fusion));
            if (stats != nullptr) ++stats->blocks;
        }
        current = std::move(next);
        ++base;
    }
    return std::move(current.front());
}

DenoiseStream::DenoiseStream(DenoiseConfig cfg) : cfg_(std::move(cfg)) {
    if (cfg_.stages < 1) {
        throw std::invalid_argument("DenoiseStream: stages must be >= 1");
    }
    levels_.resize(static_cast<std::size_t>(cfg_.stages) + 1);
}

std::optional<PackedRawFrame> DenoiseStream::push(const PackedRawFrame& frame) {
    if (!levels_[0].empty() && !levels_[0].back().frame.same_shape(frame)) {
        throw std::invalid_argument("DenoiseStream: frame dimensions differ");
    }
    levels_[0].push_back({consumed_, frame});
    ++consumed_;

    std::optional<PackedRawFrame> emitted;
    for (int level = 0; level < cfg_.stages; ++level) {
        auto& buf = levels_[level];
        if (buf.size() < 3) break;
        const Entry& prev = buf[buf.size() - 3];
        const Entry& center = buf[buf.size() - 2];
        const Entry& next = buf[buf.size() - 1];
        fusion::BlockFlows flows;
        if (cfg_.reuse_flows && level > 0) {
            flows = stage1_flows_.at(center.index);
        } else {
            flows = fusion::estimate_block_flows(prev.frame, center.frame, next.frame,
                                                 cfg_.flow);
            stats_.flow_estimates += 2;
            if (cfg_.reuse_flows && level == 0) stage1_flows_[center.index] = flows;
        }
        PackedRawFrame result = fusion::denoise_block_with_flows(
            prev.frame, center.frame, next.frame, flows, cfg_.fusion);
        ++stats_.blocks;
        auto& up = levels_[level + 1];
        up.push_back({center.index, std::move(result)});
        if (level + 1 == cfg_.stages) {
            emitted = up.back().frame;
        }
        while (up.size() > 3) up.pop_front();
    }
    while (levels_[0].size() > 3) levels_[0].pop_front();

    // Flows for centers at or below the newest emitted index are never
    // needed again.
    if (cfg_.reuse_flows) {
        const long horizon = consumed_ - 1 - 2 * cfg_.stages;
        while (!stage1_flows_.empty() && stage1_flows_.begin()->first < horizon) {
            stage1_flows_.erase(stage1_flows_.begin());
        }
    }
    return emitted;
}

Sequence<PackedRawFrame> denoise_stream(const Sequence<PackedRawFrame>& input,
                                        const DenoiseConfig& cfg, RunStats* stats) {
    const StageSchedule schedule = StageSchedule::for_stages(cfg.stages);
    if (input.size() < static_cast<std::size_t>(schedule.window_size())) {
        throw std::invalid_argument("denoise_stream: sequence shorter than the window");
    }
    DenoiseStream stream(cfg);
    Sequence<PackedRawFrame> output(input.frame_rate());
    for (std::size_t i = 0; i < input.size(); ++i) {
        if (auto frame = stream.push(input[i])) {
            const std::size_t center = i - static_cast<std::size_t>(cfg.stages);
            output.push_back(std::move(*frame), input.meta(center));
        }
    }
    if (stats != nullptr) {
        stats->flow_estimates += stream.stats().flow_estimates;
        stats->blocks += stream.stats().blocks;
    }
    return output;
}

}  // namespace ravden::multistage
